// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>

#include "noether/abelian.hpp"
#include "noether/arith.hpp"
#include "noether/criteria.hpp"
#include "noether/cyclotomic.hpp"
#include "noether/normsearch.hpp"
#include "noether/quadforms.hpp"
#include "noether/scanner.hpp"
#include "oracles.hpp"

using namespace noether;
using scanner::Status;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

/* Collects failure notes for one criterion. */
struct Outcome {
    std::vector<std::string> notes;

    void fail(std::string const & s) { notes.push_back(s); }
    template <class... A>
    void require(bool ok, A const &... what)
    {
        if (!ok) {
            std::ostringstream ss;
            (ss << ... << what);
            fail(ss.str());
        }
    }
};

int failures = 0;

void criterion(int k, std::string const & title, std::function<void(Outcome &)> const & body)
{
    Outcome o;
    auto t0 = Clock::now();
    try {
        body(o);
    } catch (std::exception const & e) {
        o.fail(std::string("exception: ") + e.what());
    }
    double t = seconds_since(t0);
    bool ok = o.notes.empty();
    failures += !ok;
    std::cout << (ok ? "PASS" : "FAIL") << " " << k << " " << title << " (" << t << " s)\n";
    std::size_t shown = 0;
    for (auto const & n : o.notes) {
        if (++shown > 12) {
            std::cout << "     ... " << o.notes.size() - 12 << " more\n";
            break;
        }
        std::cout << "     " << n << "\n";
    }
    std::cout.flush();
}

std::string fake(char const * rules)
{
    return std::string(FAKE_BACKEND) + " " + TEST_DATA_DIR + "/" + rules;
}

std::vector<mpz_class> to_mpz(poly::ZPoly const & f)
{
    return {f.begin(), f.end()};
}

} // namespace

int main()
{
    auto const & fx = criteria::embedded_fixtures();
    std::vector<scanner::ScanRecord> full;

    criterion(1, "em-tables reproduce the golden tables", [&](Outcome & o) {
        auto t0 = Clock::now();
        auto [t1, t2] = criteria::em_tables(20000);
        double t = seconds_since(t0);
        o.require(t1 == fx.table1, "table 1 differs: ", t1.size(), " vs ", fx.table1.size(), " fixture entries");
        o.require(t2 == fx.table2, "table 2 differs: ", t2.size(), " vs ", fx.table2.size(), " fixture entries");
        o.require(t1.size() >= 4 && t1[0] == 47 && t1[1] == 79 && t1[2] == 167 && t1[3] == 191, "table 1 head");
        o.require(t2.size() >= 3 && t2[0] == 113 && t2[1] == 137 && t2[2] == 233, "table 2 head");
        o.require(t2.size() >= 2 && t2[t2.size() - 2] == 19793 && t2.back() == 19889, "table 2 tail");
        o.require(t < 5, "took ", t, " s");
    });

    criterion(2, "degree-two rows are reproduced by the default scan", [&](Outcome & o) {
        auto t0 = Clock::now();
        scanner::scan(2, 19999, scanner::ScanConfig{}, [&](scanner::ScanRecord const & r) { full.push_back(r); });
        double t = seconds_since(t0);
        o.require(full.size() == 2262, "scan produced ", full.size(), " records");
        std::size_t rows = 0;
        for (auto const & r : full) {
            auto it = fx.result_rows.find(r.p);
            if (it == fx.result_rows.end() || it->second.kind != criteria::ResultRow::Kind::Degrees || it->second.d_plus != 2 ||
                it->second.d_minus != 2 || it->second.grh)
                continue;
            ++rows;
            auto const & v = r.verdict;
            o.require(v && v->status == Status::NotStablyRational && v->d_plus == 2 && v->d_minus == 2 && !v->grh,
                      r.p, ": ", v ? scanner::to_json(*v).dump() : r.error);
        }
        o.require(rows == 1808, rows, " degree-two rows seen");
        o.require(t < 600, "full scan took ", t, " s");
        std::cout << "     full scan of 2262 primes: " << t << " s single-threaded\n";
    });

    criterion(3, "R is Rational, U is Undetermined, no unconditional obstruction in R and U", [&](Outcome & o) {
        std::map<std::uint64_t, scanner::Verdict const *> by_p;
        for (auto const & r : full)
            if (r.verdict)
                by_p[r.p] = &*r.verdict;
        o.require(fx.R.size() == 17 && fx.U.size() == 18, "fixture sizes");
        for (auto p : fx.R) {
            auto v = by_p[p];
            o.require(v && v->status == Status::Rational, p, " in R is ", v ? scanner::to_string(v->status) : "missing");
        }
        for (auto p : fx.U) {
            auto v = by_p[p];
            o.require(v && v->status == Status::Undetermined, p, " in U is ",
                      v ? scanner::to_string(v->status) + " by " + scanner::to_string(*v->method) : "missing");
        }
        for (auto set : {&fx.R, &fx.U})
            for (auto p : *set) {
                auto v = by_p[p];
                o.require(!(v && v->status == Status::NotStablyRational && !v->grh), p,
                          ": unconditional NotStablyRational inside R or U");
            }
    });

    criterion(4, "Swan primes are not stably rational unconditionally", [&](Outcome & o) {
        auto t0 = Clock::now();
        for (std::uint64_t p : {47, 113, 233, 167, 359, 383, 479, 503, 719}) {
            auto v = scanner::classify_prime(p, scanner::ScanConfig{});
            o.require(v.status == Status::NotStablyRational && !v.grh, p, ": ", scanner::to_json(v).dump());
            o.require(!scanner::replay(v), p, ": evidence does not replay");
        }
        double t = seconds_since(t0);
        o.require(t < 1, "took ", t, " s");
    });

    criterion(5, "certificates for 5, 7, 11, 13", [&](Outcome & o) {
        auto t0 = Clock::now();
        for (std::uint64_t p : {5, 7, 11, 13}) {
            auto v = scanner::classify_prime(p, scanner::ScanConfig{});
            auto g = cyclotomic::cyclotomic_polynomial(p - 1);
            o.require(v.status == Status::Rational && v.method == scanner::Method::CERTIFICATE, p, ": ",
                      scanner::to_json(v).dump());
            o.require(v.witness_field == g, p, ": witness field is not Q(zeta_", p - 1, ")");
            if (v.witness.empty())
                continue;
            mpz_class n = oracle::companion_norm(to_mpz(g), to_mpz(v.witness));
            o.require(n == p || n == -mpz_class(p), p, ": witness norm ", n.get_str());

            // exhaustive: some element with coefficients in [-3, 3] has norm +-p
            std::size_t d = g.size() - 1;
            std::vector<mpz_class> a(d, -3);
            bool found = false;
            for (;;) {
                mpz_class m = oracle::companion_norm(to_mpz(g), a);
                if (m == p || m == -mpz_class(p)) {
                    found = true;
                    break;
                }
                std::size_t i = 0;
                while (i < d && a[i] == 3)
                    a[i++] = -3;
                if (i == d)
                    break;
                ++a[i];
            }
            o.require(found, p, ": oracle finds no element of norm +-p with bound 3");
        }
        double t = seconds_since(t0);
        o.require(t < 5, "took ", t, " s");
    });

    criterion(6, "solve_norm agrees with the representation oracle", [&](Outcome & o) {
        auto t0 = Clock::now();
        auto primes = oracle::sieve(500);
        std::size_t decisions = 0;
        for (std::int64_t D = -200; D <= 200; ++D) {
            if (!oracle::fundamental(D))
                continue;
            for (std::uint64_t p = 3; p <= 500; ++p) {
                if (!primes[p] || std::llabs(D) % static_cast<std::int64_t>(p) == 0)
                    continue;
                for (int sign : {1, -1}) {
                    auto dec = quadforms::solve_norm(D, p, sign);
                    bool expect = oracle::represents(D, sign * static_cast<std::int64_t>(p));
                    bool got = dec.outcome == quadforms::NormOutcome::Solvable;
                    o.require(got == expect, "D=", D, " p=", p, " sign=", sign);
                    o.require(dec.outcome != quadforms::NormOutcome::Unknown, "D=", D, " p=", p, ": unknown");
                    ++decisions;
                }
            }
        }
        double t = seconds_since(t0);
        o.require(t < 60, "took ", t, " s");
        std::cout << "     " << decisions << " decisions\n";
    });

    criterion(7, "subgroup counts and subfield minimal polynomials", [&](Outcome & o) {
        for (std::uint64_t n = 3; n <= 200; ++n) {
            auto c = abelian::subgroups(abelian::unit_group(n)).size();
            o.require(c == oracle::brute_subgroup_count(n), "n=", n, ": ", c, " subgroups");
        }
        for (std::uint64_t n = 3; n <= 100; ++n) {
            auto g = abelian::unit_group(n);
            for (auto const & f : cyclotomic::subfields(n, g.order())) {
                o.require(poly::degree(f.minpoly) == static_cast<int>(f.degree) && f.degree == f.subgroup.index,
                          "n=", n, ": wrong degree");
                o.require(poly::is_squarefree(f.minpoly), "n=", n, " degree ", f.degree, ": not squarefree");
                auto eta = cyclotomic::period_element(n, f.subgroup, f.shape);
                cyclotomic::CycElement acc(n);
                for (std::size_t i = f.minpoly.size(); i-- > 0;)
                    acc = acc * eta + cyclotomic::CycElement::constant(n, f.minpoly[i]);
                o.require(acc.vanishes(), "n=", n, " degree ", f.degree, ": period is not a root");
            }
        }
    });

    criterion(8, "backend protocol with a scripted backend", [&](Outcome & o) {
        scanner::ScanConfig cfg;
        cfg.backend = fake("backend_known.rules");
        cfg.max_degree = 8;
        auto a = scanner::classify_prime(5507, cfg);
        o.require(a.status == Status::NotStablyRational && a.d_plus == 8 && a.d_minus == 8 && !a.grh,
                  "5507: ", scanner::to_json(a).dump());

        cfg.max_degree = 46;
        auto strict = scanner::classify_prime(8837, cfg);
        o.require(strict.status == Status::Undetermined, "8837 without GRH: ", scanner::to_json(strict).dump());
        cfg.allow_grh = true;
        auto b = scanner::classify_prime(8837, cfg);
        o.require(b.status == Status::NotStablyRational && b.d_plus == 46 && b.d_minus == 2 && b.grh,
                  "8837: ", scanner::to_json(b).dump());
        o.require(!scanner::replay(a) && !scanner::replay(b), "evidence does not replay");

        cfg.backend = fake("backend_bogus.rules");
        cfg.max_degree = 4;
        try {
            scanner::classify_prime(59, cfg);
            o.fail("bogus witness accepted");
        } catch (normsearch::BackendError const & e) {
            o.require(e.kind() == normsearch::BackendError::Kind::VerificationFailed, "wrong error: ", e.what());
        }
    });

    return failures ? 1 : 0;
}
