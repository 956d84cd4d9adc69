#include "noether/scanner.hpp"

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <istream>
#include <memory>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "noether/arith.hpp"
#include "noether/cyclotomic.hpp"

namespace noether::scanner {

using json = nlohmann::json;
using normsearch::BackendClient;
using normsearch::BackendError;
using quadforms::NormOutcome;
using quadforms::Obstruction;

std::string to_string(Status s)
{
    switch (s) {
    case Status::Rational:
        return "Rational";
    case Status::NotStablyRational:
        return "NotStablyRational";
    case Status::Undetermined:
        return "Undetermined";
    }
    return "?";
}

std::string to_string(Method m)
{
    switch (m) {
    case Method::EM_I:
        return "EM_I";
    case Method::EM_II:
        return "EM_II";
    case Method::QUADRATIC:
        return "QUADRATIC";
    case Method::BACKEND:
        return "BACKEND";
    case Method::CERTIFICATE:
        return "CERTIFICATE";
    case Method::KNOWN_TABLE:
        return "KNOWN_TABLE";
    }
    return "?";
}

Status status_from_string(std::string const & s)
{
    for (auto v : {Status::Rational, Status::NotStablyRational, Status::Undetermined})
        if (to_string(v) == s)
            return v;
    throw std::invalid_argument("unknown status '" + s + "'");
}

Method method_from_string(std::string const & s)
{
    for (auto v : {Method::EM_I, Method::EM_II, Method::QUADRATIC, Method::BACKEND, Method::CERTIFICATE,
                   Method::KNOWN_TABLE})
        if (to_string(v) == s)
            return v;
    throw std::invalid_argument("unknown method '" + s + "'");
}

namespace {

ObstructionRecord quadratic_record(quadforms::NormDecision const & dec)
{
    ObstructionRecord r;
    r.sign = dec.sign;
    r.degree = 2;
    r.source = ObstructionRecord::Source::Quadratic;
    r.disc = dec.disc;
    r.reason = dec.reason;
    r.reduced = dec.reduced;
    return r;
}

/* Degree-2 obstructions for each sign, first discriminant in ascending order. */
void quadratic_pass(std::uint64_t p, std::optional<ObstructionRecord> & plus, std::optional<ObstructionRecord> & minus)
{
    for (std::int64_t D : quadforms::quadratic_subfield_discs(p - 1)) {
        for (int sign : {1, -1}) {
            auto & slot = sign > 0 ? plus : minus;
            if (slot)
                continue;
            auto dec = quadforms::solve_norm(D, p, sign);
            if (dec.outcome == NormOutcome::ProvablyUnsolvable)
                slot = quadratic_record(dec);
        }
        if (plus && minus)
            return;
    }
}

void backend_pass(std::uint64_t p, ScanConfig const & cfg, BackendClient * client,
                  std::optional<ObstructionRecord> & plus, std::optional<ObstructionRecord> & minus)
{
    std::unique_ptr<BackendClient> own;
    auto fields = cyclotomic::subfields(p - 1, static_cast<std::uint64_t>(cfg.max_degree));
    for (auto const & f : fields) {
        if (f.degree <= 2)
            continue;
        for (int sign : {1, -1}) {
            auto & slot = sign > 0 ? plus : minus;
            if (slot)
                continue;
            if (!client) {
                if (!cfg.backend)
                    throw BackendError(BackendError::Kind::Unavailable, "backend unavailable");
                own = std::make_unique<BackendClient>(*cfg.backend);
                client = own.get();
            }
            normsearch::NormProblem prob{f.minpoly, sign * mpz_class(static_cast<unsigned long>(p))};
            auto dec = normsearch::backend_decide(client, prob, cfg.allow_grh);
            if (dec.outcome != NormOutcome::ProvablyUnsolvable)
                continue;
            ObstructionRecord r;
            r.sign = sign;
            r.degree = static_cast<int>(f.degree);
            r.source = ObstructionRecord::Source::Backend;
            r.minpoly = f.minpoly;
            r.certified = dec.certified;
            r.grh = dec.grh;
            slot = std::move(r);
        }
        if (plus && minus)
            return;
    }
}

} // namespace

Verdict classify_prime(std::uint64_t p, ScanConfig const & cfg, BackendClient * client)
{
    if (!arith::is_prime(p))
        throw std::invalid_argument("classify: " + std::to_string(p) + " is not prime");
    if (cfg.max_degree < 2)
        throw std::invalid_argument("classify: max_degree must be at least 2");

    Verdict v;
    v.p = p;
    if (p <= 3) {
        v.status = Status::Rational;
        v.method = Method::KNOWN_TABLE;
        return v;
    }

    if (auto D = criteria::em_discriminant(p)) {
        v.status = Status::NotStablyRational;
        v.method = criteria::em_criterion_i(p) ? Method::EM_I : Method::EM_II;
        v.d_plus = v.d_minus = 2;
        for (int sign : {1, -1}) {
            auto dec = quadforms::solve_norm(*D, p, sign);
            if (dec.outcome != NormOutcome::ProvablyUnsolvable)
                throw std::logic_error("criterion holds but the quadratic field represents p: " + std::to_string(p));
            v.obstructions.push_back(quadratic_record(dec));
        }
        return v;
    }

    std::optional<ObstructionRecord> plus, minus;
    quadratic_pass(p, plus, minus);
    if (!(plus && minus) && cfg.max_degree > 2)
        backend_pass(p, cfg, client, plus, minus);

    if (plus)
        v.d_plus = plus->degree;
    if (minus)
        v.d_minus = minus->degree;
    for (auto * r : {&plus, &minus})
        if (*r)
            v.obstructions.push_back(**r);

    if (plus && minus) {
        v.status = Status::NotStablyRational;
        bool backend = plus->source == ObstructionRecord::Source::Backend ||
                       minus->source == ObstructionRecord::Source::Backend;
        v.method = backend ? Method::BACKEND : Method::QUADRATIC;
        v.grh = plus->conditional() || minus->conditional();
        return v;
    }

    std::uint64_t n = p - 1;
    if (arith::euler_phi(n) <= cfg.certificate_max_degree) {
        ZPoly g = cyclotomic::cyclotomic_polynomial(n);
        normsearch::SearchLimits lim{cfg.certificate_budget};
        /* Q(zeta_n) is totally imaginary, so only +p can be a norm */
        normsearch::NormProblem prob{g, mpz_class(static_cast<unsigned long>(p))};
        if (auto a = normsearch::certificate_search(prob, cfg.certificate_bound, lim)) {
            Verdict r;
            r.p = p;
            r.status = Status::Rational;
            r.method = Method::CERTIFICATE;
            r.witness_field = g;
            r.witness = *a;
            return r;
        }
    }

    if (criteria::contains(criteria::embedded_fixtures().R, p)) {
        Verdict r;
        r.p = p;
        r.status = Status::Rational;
        r.method = Method::KNOWN_TABLE;
        return r;
    }

    v.status = Status::Undetermined;
    return v;
}

std::optional<std::string> replay(Verdict const & v)
{
    std::uint64_t p = v.p;
    if (!arith::is_prime(p))
        return "not a prime";
    auto replay_record = [&](ObstructionRecord const & r) -> std::optional<std::string> {
        if (r.sign != 1 && r.sign != -1)
            return "bad sign";
        if (r.source == ObstructionRecord::Source::Quadratic) {
            if (r.degree != 2 || r.disc == 0 || (p - 1) % static_cast<std::uint64_t>(std::abs(r.disc)) != 0)
                return "quadratic field is not a subfield";
            auto dec = quadforms::solve_norm(r.disc, p, r.sign);
            if (dec.outcome != NormOutcome::ProvablyUnsolvable || dec.reason != r.reason ||
                dec.reduced != r.reduced)
                return "quadratic obstruction does not replay";
            return std::nullopt;
        }
        if (poly::degree(r.minpoly) != r.degree || r.minpoly.back() != 1 || !poly::is_squarefree(r.minpoly))
            return "backend record has a bad field polynomial";
        return std::nullopt;
    };

    for (auto const & r : v.obstructions)
        if (auto e = replay_record(r))
            return e;

    switch (v.status) {
    case Status::Rational:
        if (v.method == Method::KNOWN_TABLE)
            return (p <= 3 || criteria::contains(criteria::embedded_fixtures().R, p))
                       ? std::nullopt
                       : std::optional<std::string>("not a known rational prime");
        if (v.method == Method::CERTIFICATE) {
            if (v.witness_field != cyclotomic::cyclotomic_polynomial(p - 1))
                return "certificate field is not Q(zeta_{p-1})";
            mpz_class N = normsearch::norm_of(v.witness_field, v.witness);
            if (abs(N) != mpz_class(static_cast<unsigned long>(p)))
                return "certificate norm is not +-p";
            return std::nullopt;
        }
        return "rational verdict without evidence";
    case Status::NotStablyRational: {
        bool em = v.method == Method::EM_I || v.method == Method::EM_II;
        if (em) {
            bool holds = v.method == Method::EM_I ? criteria::em_criterion_i(p) : criteria::em_criterion_ii(p);
            if (!holds)
                return "criterion does not hold";
        }
        bool seen[2] = {false, false};
        bool conditional = false;
        for (auto const & r : v.obstructions) {
            auto const & d = r.sign > 0 ? v.d_plus : v.d_minus;
            if (!d || *d != r.degree)
                return "obstruction degree does not match";
            seen[r.sign > 0] = true;
            conditional = conditional || r.conditional();
        }
        if (!seen[0] || !seen[1])
            return "a sign is not obstructed";
        if (conditional != v.grh)
            return "grh flag does not match the evidence";
        return std::nullopt;
    }
    case Status::Undetermined:
        return std::nullopt;
    }
    return "unknown status";
}

ScanSummary scan(std::uint64_t from, std::uint64_t to, ScanConfig const & cfg,
                 std::function<void(ScanRecord const &)> const & sink)
{
    if (from < 2 || from > to)
        throw std::invalid_argument("scan: need 2 <= from <= to");
    auto primes = arith::primes_between(from, to);
    ScanSummary summary;

    auto work = [&](std::uint64_t p, BackendClient * client) {
        ScanRecord rec;
        rec.p = p;
        try {
            rec.verdict = classify_prime(p, cfg, client);
        } catch (std::exception const & e) {
            rec.error = e.what();
        }
        return rec;
    };
    auto emit = [&](ScanRecord const & rec) {
        ++summary.primes;
        if (rec.verdict) {
            ++summary.by_status[to_string(rec.verdict->status)];
            if (rec.verdict->method)
                ++summary.by_method[to_string(*rec.verdict->method)];
        } else {
            ++summary.errors;
        }
        sink(rec);
    };
    auto make_client = [&]() -> std::unique_ptr<BackendClient> {
        if (!cfg.backend || cfg.max_degree <= 2)
            return nullptr;
        try {
            return std::make_unique<BackendClient>(*cfg.backend);
        } catch (BackendError const &) {
            return nullptr; // reported per prime by classify_prime
        }
    };

    unsigned jobs = cfg.parallelism ? cfg.parallelism : std::max(1u, std::thread::hardware_concurrency());
    jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, std::max<std::size_t>(primes.size(), 1)));

    if (jobs <= 1) {
        auto client = make_client();
        for (auto p : primes)
            emit(work(p, client.get()));
        return summary;
    }

    std::vector<std::optional<ScanRecord>> done(primes.size());
    std::atomic<std::size_t> next{0};
    std::mutex mu;
    std::condition_variable cv;
    {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < jobs; ++t)
            pool.emplace_back([&] {
                auto client = make_client();
                for (std::size_t i; (i = next.fetch_add(1)) < primes.size();) {
                    auto rec = work(primes[i], client.get());
                    std::lock_guard lock(mu);
                    done[i] = std::move(rec);
                    cv.notify_one();
                }
            });
        for (std::size_t i = 0; i < primes.size(); ++i) {
            std::unique_lock lock(mu);
            cv.wait(lock, [&] { return done[i].has_value(); });
            ScanRecord rec = std::move(*done[i]);
            done[i].reset();
            lock.unlock();
            emit(rec);
        }
    }
    return summary;
}

/* ---- serialization ---- */

namespace {

json big(mpz_class const & z)
{
    if (z.fits_slong_p())
        return z.get_si();
    return z.get_str();
}

mpz_class big_from(json const & j)
{
    if (j.is_number_integer())
        return mpz_class(j.dump());
    if (j.is_string())
        return mpz_class(j.get<std::string>());
    throw std::invalid_argument("expected an integer");
}

json poly_json(ZPoly const & f)
{
    json a = json::array();
    for (auto const & c : f)
        a.push_back(big(c));
    return a;
}

ZPoly poly_from(json const & j)
{
    ZPoly f;
    for (auto const & c : j)
        f.push_back(big_from(c));
    poly::normalize(f);
    return f;
}

std::string reason_name(Obstruction r)
{
    switch (r) {
    case Obstruction::NonResidue:
        return "non_residue";
    case Obstruction::Definite:
        return "definite";
    case Obstruction::NonPrincipal:
        return "non_principal";
    case Obstruction::None:
        break;
    }
    return "none";
}

Obstruction reason_from(std::string const & s)
{
    for (auto r : {Obstruction::NonResidue, Obstruction::Definite, Obstruction::NonPrincipal, Obstruction::None})
        if (reason_name(r) == s)
            return r;
    throw std::invalid_argument("unknown obstruction reason '" + s + "'");
}

} // namespace

json to_json(Verdict const & v, bool detailed)
{
    json j;
    j["p"] = v.p;
    j["status"] = to_string(v.status);
    j["d_plus"] = v.d_plus ? json(*v.d_plus) : json(nullptr);
    j["d_minus"] = v.d_minus ? json(*v.d_minus) : json(nullptr);
    j["method"] = v.method ? json(to_string(*v.method)) : json(nullptr);
    j["grh"] = v.grh;
    if (!detailed)
        return j;
    json obs = json::array();
    for (auto const & r : v.obstructions) {
        json o{{"sign", r.sign}, {"degree", r.degree}};
        if (r.source == ObstructionRecord::Source::Quadratic) {
            o["source"] = "quadratic";
            o["disc"] = r.disc;
            o["reason"] = reason_name(r.reason);
            o["reduced"] = {r.reduced.a, r.reduced.b, r.reduced.c};
        } else {
            o["source"] = "backend";
            o["minpoly"] = poly_json(r.minpoly);
            o["certified"] = r.certified;
            o["grh"] = r.grh;
        }
        obs.push_back(std::move(o));
    }
    j["obstructions"] = std::move(obs);
    if (!v.witness.empty())
        j["witness"] = {{"field", poly_json(v.witness_field)}, {"alpha", poly_json(v.witness)}};
    return j;
}

json to_json(ScanRecord const & r, bool detailed)
{
    if (r.verdict)
        return to_json(*r.verdict, detailed);
    return json{{"p", r.p}, {"error", r.error}};
}

ScanRecord record_from_json(json const & j)
{
    ScanRecord rec;
    rec.p = j.at("p").get<std::uint64_t>();
    if (j.contains("error")) {
        rec.error = j["error"].get<std::string>();
        return rec;
    }
    Verdict v;
    v.p = rec.p;
    v.status = status_from_string(j.at("status").get<std::string>());
    if (j.contains("d_plus") && !j["d_plus"].is_null())
        v.d_plus = j["d_plus"].get<int>();
    if (j.contains("d_minus") && !j["d_minus"].is_null())
        v.d_minus = j["d_minus"].get<int>();
    if (j.contains("method") && !j["method"].is_null())
        v.method = method_from_string(j["method"].get<std::string>());
    v.grh = j.value("grh", false);
    if (j.contains("obstructions"))
        for (auto const & o : j["obstructions"]) {
            ObstructionRecord r;
            r.sign = o.at("sign").get<int>();
            r.degree = o.at("degree").get<int>();
            if (o.at("source") == "quadratic") {
                r.source = ObstructionRecord::Source::Quadratic;
                r.disc = o.at("disc").get<std::int64_t>();
                r.reason = reason_from(o.at("reason").get<std::string>());
                auto f = o.at("reduced");
                r.reduced = {f.at(0).get<std::int64_t>(), f.at(1).get<std::int64_t>(), f.at(2).get<std::int64_t>()};
            } else {
                r.source = ObstructionRecord::Source::Backend;
                r.minpoly = poly_from(o.at("minpoly"));
                r.certified = o.at("certified").get<bool>();
                r.grh = o.at("grh").get<bool>();
            }
            v.obstructions.push_back(std::move(r));
        }
    if (j.contains("witness")) {
        v.witness_field = poly_from(j["witness"].at("field"));
        v.witness = poly_from(j["witness"].at("alpha"));
    }
    rec.verdict = std::move(v);
    return rec;
}

std::string csv_header()
{
    return "p,status,d_plus,d_minus,method,grh";
}

std::string to_csv(ScanRecord const & r)
{
    std::ostringstream os;
    os << r.p << ',';
    if (!r.verdict) {
        os << "Error,,,,";
        return os.str();
    }
    auto const & v = *r.verdict;
    os << to_string(v.status) << ',';
    if (v.d_plus)
        os << *v.d_plus;
    os << ',';
    if (v.d_minus)
        os << *v.d_minus;
    os << ',';
    if (v.method)
        os << to_string(*v.method);
    os << ',' << (v.grh ? 1 : 0);
    return os.str();
}

ScanRecord record_from_csv(std::string const & line)
{
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');)
        f.push_back(cell);
    while (f.size() < 6)
        f.emplace_back();
    ScanRecord rec;
    rec.p = std::stoull(f[0]);
    if (f[1] == "Error") {
        rec.error = "error";
        return rec;
    }
    Verdict v;
    v.p = rec.p;
    v.status = status_from_string(f[1]);
    if (!f[2].empty())
        v.d_plus = std::stoi(f[2]);
    if (!f[3].empty())
        v.d_minus = std::stoi(f[3]);
    if (!f[4].empty())
        v.method = method_from_string(f[4]);
    v.grh = f[5] == "1" || f[5] == "true";
    rec.verdict = std::move(v);
    return rec;
}

std::vector<ScanRecord> read_records(std::istream & in)
{
    std::vector<ScanRecord> out;
    std::optional<bool> jsonl;
    for (std::string line; std::getline(in, line);) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos)
            continue;
        if (!jsonl) {
            jsonl = line[line.find_first_not_of(" \t")] == '{';
            if (!*jsonl && line.rfind("p,", 0) == 0)
                continue; // header
        }
        out.push_back(*jsonl ? record_from_json(json::parse(line)) : record_from_csv(line));
    }
    return out;
}

/* ---- cross check ---- */

bool CrossCheckReport::ok() const
{
    return std::all_of(checks.begin(), checks.end(), [](auto const & c) { return c.passed(); });
}

CheckResult const * CrossCheckReport::find(std::string const & name) const
{
    for (auto const & c : checks)
        if (c.name == name)
            return &c;
    return nullptr;
}

CrossCheckReport cross_check(std::vector<ScanRecord> const & results, criteria::FixtureSets const & fx)
{
    constexpr std::uint64_t limit = 20000;
    std::map<std::uint64_t, Verdict const *> by_p;
    for (auto const & r : results)
        if (r.verdict)
            by_p[r.p] = &*r.verdict;
    auto verdict = [&](std::uint64_t p) -> Verdict const * {
        auto it = by_p.find(p);
        return it == by_p.end() ? nullptr : it->second;
    };
    auto nsr = [](Verdict const * v) { return v && v->status == Status::NotStablyRational; };

    CrossCheckReport rep;

    CheckResult coverage{"coverage", {}};
    if (by_p.empty()) {
        coverage.failures.push_back("incomplete coverage");
    } else {
        std::size_t missing = 0;
        std::string first;
        for (auto p : arith::primes_between(2, limit - 1))
            if (!verdict(p) && missing++ == 0)
                first = std::to_string(p);
        if (missing)
            coverage.failures.push_back("incomplete coverage: " + std::to_string(missing) +
                                        " primes without a verdict, first " + first);
    }
    rep.checks.push_back(std::move(coverage));

    CheckResult a{"rational_not_obstructed", {}};
    for (auto p : fx.R)
        if (nsr(verdict(p)))
            a.failures.push_back(std::to_string(p) + " is in R but NotStablyRational");
    rep.checks.push_back(std::move(a));

    CheckResult b{"unconditional_outside_RU", {}};
    for (auto const & [p, v] : by_p)
        if (nsr(v) && !v->grh && (criteria::contains(fx.R, p) || criteria::contains(fx.U, p)))
            b.failures.push_back(std::to_string(p) + " is in " + (criteria::contains(fx.R, p) ? "R" : "U") +
                                 " but unconditionally NotStablyRational");
    rep.checks.push_back(std::move(b));

    CheckResult c{"degree_two_rows", {}};
    for (auto const & [p, row] : fx.result_rows) {
        if (row.kind != criteria::ResultRow::Kind::Degrees || row.d_plus != 2 || row.d_minus != 2 || row.grh)
            continue;
        auto v = verdict(p);
        if (!v)
            c.failures.push_back(std::to_string(p) + ": no verdict");
        else if (!nsr(v) || v->d_plus != 2 || v->d_minus != 2 || v->grh)
            c.failures.push_back(std::to_string(p) + ": expected NotStablyRational (2, 2), got " +
                                 to_string(v->status));
    }
    rep.checks.push_back(std::move(c));

    /* -p is never a norm from an imaginary quadratic field, so only the
       signs a field can represent at all are required to be solvable */
    CheckResult d{"undetermined_quadratic_solvable", {}};
    for (auto p : fx.U) {
        for (auto D : quadforms::quadratic_subfield_discs(p - 1))
            for (int sign : {1, -1}) {
                if (D < 0 && sign < 0)
                    continue;
                if (quadforms::solve_norm(D, p, sign).outcome != NormOutcome::Solvable)
                    d.failures.push_back(std::to_string(p) + ": no element of norm " + (sign > 0 ? "+" : "-") +
                                         "p in Q(sqrt " + std::to_string(D) + ")");
            }
    }
    rep.checks.push_back(std::move(d));
    return rep;
}

} // namespace noether::scanner
