#include "noether/normsearch.hpp"

#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <sstream>

#include <json.hpp>

#include "noether/arith.hpp"
#include "noether/kernels.hpp"

namespace noether::normsearch {

using json = nlohmann::json;

mpz_class norm_of(ZPoly const & g, ZPoly const & a)
{
    ZPoly gg = g;
    poly::normalize(gg);
    if (gg.empty() || gg.back() != 1)
        throw std::invalid_argument("norm_of: field polynomial must be monic");
    ZPoly r = poly::rem_monic(a, gg);
    if (r.empty())
        return 0;
    return poly::resultant(gg, r);
}

namespace {

/* ---- polynomials over F_l, coefficient i at index i, l < 2^25 ---- */

using ModPoly = std::vector<std::uint64_t>;

void trim(ModPoly & f)
{
    while (!f.empty() && f.back() == 0)
        f.pop_back();
}

std::uint64_t inv_mod(std::uint64_t a, std::uint64_t l)
{
    return arith::powmod(a, l - 2, l);
}

ModPoly reduce_mod(ZPoly const & g, std::uint64_t l)
{
    ModPoly f(g.size());
    mpz_class ml = static_cast<unsigned long>(l);
    for (std::size_t i = 0; i < g.size(); ++i) {
        mpz_class r;
        mpz_fdiv_r(r.get_mpz_t(), g[i].get_mpz_t(), ml.get_mpz_t());
        f[i] = r.get_ui();
    }
    trim(f);
    return f;
}

/* remainder of a by b (b nonzero) */
ModPoly rem(ModPoly a, ModPoly const & b, std::uint64_t l)
{
    std::size_t db = b.size() - 1;
    std::uint64_t binv = inv_mod(b.back(), l);
    trim(a);
    while (a.size() > db) {
        std::uint64_t c = a.back() * binv % l;
        std::size_t s = a.size() - 1 - db;
        for (std::size_t i = 0; i <= db; ++i)
            a[s + i] = (a[s + i] + (l - c) * b[i]) % l;
        trim(a);
    }
    return a;
}

ModPoly quot(ModPoly a, ModPoly const & b, std::uint64_t l)
{
    std::size_t db = b.size() - 1;
    std::uint64_t binv = inv_mod(b.back(), l);
    trim(a);
    if (a.size() <= db)
        return {};
    ModPoly q(a.size() - db, 0);
    while (a.size() > db) {
        std::uint64_t c = a.back() * binv % l;
        std::size_t s = a.size() - 1 - db;
        q[s] = c;
        for (std::size_t i = 0; i <= db; ++i)
            a[s + i] = (a[s + i] + (l - c) * b[i]) % l;
        trim(a);
        while (a.size() > s + db)
            a.pop_back(); // leading term cancelled exactly
    }
    trim(q);
    return q;
}

ModPoly mulmod_poly(ModPoly const & a, ModPoly const & b, ModPoly const & f, std::uint64_t l)
{
    if (a.empty() || b.empty())
        return {};
    ModPoly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            r[i + j] = (r[i + j] + a[i] * b[j]) % l;
    return rem(std::move(r), f, l);
}

ModPoly powmod_poly(ModPoly base, std::uint64_t e, ModPoly const & f, std::uint64_t l)
{
    ModPoly r{1};
    base = rem(std::move(base), f, l);
    for (; e; e >>= 1) {
        if (e & 1)
            r = mulmod_poly(r, base, f, l);
        base = mulmod_poly(base, base, f, l);
    }
    return r;
}

ModPoly gcd_poly(ModPoly a, ModPoly b, std::uint64_t l)
{
    trim(a);
    trim(b);
    while (!b.empty()) {
        ModPoly r = rem(a, b, l);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        std::uint64_t inv = inv_mod(a.back(), l);
        for (auto & c : a)
            c = c * inv % l;
    }
    return a;
}

void split_linear(ModPoly const & f, std::uint64_t l, std::uint64_t & seed, std::vector<std::uint64_t> & roots)
{
    if (f.size() == 2) {
        std::uint64_t inv = inv_mod(f[1], l);
        roots.push_back((l - f[0] * inv % l) % l);
        return;
    }
    for (;;) {
        std::uint64_t delta = (seed = seed * 6364136223846793005ULL + 1442695040888963407ULL) >> 40;
        delta %= l;
        ModPoly h = powmod_poly(ModPoly{delta, 1}, (l - 1) / 2, f, l);
        if (h.empty())
            h = {l - 1};
        else
            h[0] = (h[0] + l - 1) % l;
        trim(h);
        ModPoly g = gcd_poly(f, h, l);
        if (g.size() > 1 && g.size() < f.size()) {
            split_linear(g, l, seed, roots);
            split_linear(quot(f, g, l), l, seed, roots);
            return;
        }
    }
}

} // namespace

std::optional<std::vector<std::uint64_t>> split_roots_mod(ZPoly const & g, std::uint64_t l)
{
    ModPoly f = reduce_mod(g, l);
    if (f.size() != g.size() || f.size() < 2)
        return std::nullopt;
    /* x^l = x mod f  <=>  f | x^l - x, a product of distinct linear factors */
    ModPoly xl = powmod_poly(ModPoly{0, 1}, l, f, l);
    ModPoly x = rem(ModPoly{0, 1}, f, l);
    if (xl != x)
        return std::nullopt;
    std::vector<std::uint64_t> roots;
    std::uint64_t seed = l;
    split_linear(f, l, seed, roots);
    std::sort(roots.begin(), roots.end());
    return roots;
}

namespace {

struct SplitPrime {
    std::uint32_t l;
    std::vector<std::uint32_t> roots;
    std::uint32_t target;
};

std::vector<SplitPrime> find_split_primes(ZPoly const & g, mpz_class const & target, std::size_t want)
{
    std::vector<SplitPrime> out;
    constexpr std::uint64_t start = (1u << 24) + 1;
    constexpr std::size_t max_tries = 20000;
    std::size_t tries = 0;
    for (std::uint64_t l = start; l < kernels::max_kernel_modulus && out.size() < want && tries < max_tries;
         l += 2) {
        if (!arith::is_prime(l))
            continue;
        ++tries;
        auto roots = split_roots_mod(g, l);
        if (!roots)
            continue;
        SplitPrime sp;
        sp.l = static_cast<std::uint32_t>(l);
        for (auto r : *roots)
            sp.roots.push_back(static_cast<std::uint32_t>(r));
        mpz_class t;
        mpz_class ml = static_cast<unsigned long>(l);
        mpz_fdiv_r(t.get_mpz_t(), target.get_mpz_t(), ml.get_mpz_t());
        sp.target = static_cast<std::uint32_t>(t.get_ui());
        out.push_back(std::move(sp));
    }
    return out;
}

/*
 * Visits coefficient vectors with entries in [-bound, bound]: by height h,
 * then weight w (nonzero count), then support (lexicographic), then values
 * in the order 1, -1, 2, -2, ... with the highest position most significant.
 */
class BoxWalker
{
  public:
    BoxWalker(std::size_t d, std::int64_t bound) : d_(d), bound_(bound) {}

    template <class Visit>
    bool run(Visit && visit)
    {
        std::vector<std::int64_t> a(d_, 0);
        for (std::int64_t h = 1; h <= bound_; ++h) {
            std::vector<std::int64_t> vals;
            for (std::int64_t v = 1; v <= h; ++v) {
                vals.push_back(v);
                vals.push_back(-v);
            }
            for (std::size_t w = 1; w <= d_; ++w) {
                std::vector<std::size_t> pos(w);
                for (std::size_t i = 0; i < w; ++i)
                    pos[i] = i;
                for (;;) {
                    std::vector<std::size_t> digit(w, 0);
                    for (;;) {
                        bool has_h = false;
                        for (std::size_t i = 0; i < w; ++i) {
                            a[pos[i]] = vals[digit[i]];
                            has_h = has_h || digit[i] + 2 >= vals.size();
                        }
                        if (has_h && !visit(a))
                            return false;
                        /* odometer, position 0 least significant */
                        std::size_t i = 0;
                        while (i < w && ++digit[i] == vals.size())
                            digit[i++] = 0;
                        if (i == w)
                            break;
                    }
                    for (std::size_t i = 0; i < w; ++i)
                        a[pos[i]] = 0;
                    /* next combination */
                    std::size_t i = w;
                    while (i > 0 && pos[i - 1] == d_ - w + (i - 1))
                        --i;
                    if (i == 0)
                        break;
                    ++pos[i - 1];
                    for (std::size_t j = i; j < w; ++j)
                        pos[j] = pos[j - 1] + 1;
                }
            }
        }
        return true;
    }

  private:
    std::size_t d_;
    std::int64_t bound_;
};

} // namespace

std::optional<ZPoly> certificate_search(NormProblem const & prob, std::int64_t bound, SearchLimits const & limits)
{
    if (bound < 1)
        throw std::invalid_argument("certificate_search: bound must be positive");
    ZPoly g = prob.minpoly;
    poly::normalize(g);
    if (g.empty() || g.back() != 1 || poly::degree(g) < 1)
        throw std::invalid_argument("certificate_search: field polynomial must be monic of positive degree");
    std::size_t d = static_cast<std::size_t>(poly::degree(g));

    auto primes = find_split_primes(g, prob.target, 2);

    constexpr std::size_t batch = 2048;
    std::vector<std::vector<std::int64_t>> pending;
    pending.reserve(batch);
    std::vector<std::vector<std::uint32_t>> coeffs(primes.size(), std::vector<std::uint32_t>(d * batch));
    std::vector<std::uint32_t> res(batch);
    std::optional<ZPoly> found;
    std::uint64_t visited = 0;

    auto exact = [&](std::vector<std::int64_t> const & a) {
        ZPoly cand(a.begin(), a.end());
        poly::normalize(cand);
        if (norm_of(g, cand) == prob.target) {
            found = std::move(cand);
            return true;
        }
        return false;
    };

    auto flush = [&]() {
        std::size_t count = pending.size();
        if (count == 0)
            return false;
        std::vector<char> alive(count, 1);
        for (std::size_t pi = 0; pi < primes.size(); ++pi) {
            auto & sp = primes[pi];
            auto & buf = coeffs[pi];
            for (std::size_t c = 0; c < count; ++c)
                for (std::size_t k = 0; k < d; ++k) {
                    std::int64_t v = pending[c][k];
                    buf[k * count + c] = static_cast<std::uint32_t>(v >= 0 ? v : v + sp.l);
                }
            kernels::norm_residues(std::span<const std::uint32_t>(buf.data(), d * count), d, count, sp.roots,
                                   sp.l, std::span<std::uint32_t>(res.data(), count));
            for (std::size_t c = 0; c < count; ++c)
                if (res[c] != sp.target)
                    alive[c] = 0;
        }
        for (std::size_t c = 0; c < count; ++c)
            if (alive[c] && exact(pending[c]))
                return true;
        pending.clear();
        return false;
    };

    BoxWalker walker(d, bound);
    walker.run([&](std::vector<std::int64_t> const & a) {
        if (visited++ >= limits.max_candidates)
            return false;
        pending.push_back(a);
        if (pending.size() == batch && flush())
            return false;
        return true;
    });
    if (!found)
        flush();
    return found;
}

/* ---- backend ---- */

BackendClient::BackendClient(std::string command) : command_(std::move(command))
{
    if (command_.empty())
        throw BackendError(BackendError::Kind::Unavailable, "backend unavailable");
    /* a dead child must surface as EPIPE, not kill the process */
    ::signal(SIGPIPE, SIG_IGN);
    start();
}

BackendClient::~BackendClient()
{
    stop();
}

void BackendClient::start()
{
    int in_pipe[2], out_pipe[2];
    if (::pipe2(in_pipe, O_CLOEXEC) != 0)
        throw BackendError(BackendError::Kind::ProcessFailure, "backend: pipe failed");
    if (::pipe2(out_pipe, O_CLOEXEC) != 0) {
        ::close(in_pipe[0]);
        ::close(in_pipe[1]);
        throw BackendError(BackendError::Kind::ProcessFailure, "backend: pipe failed");
    }
    pid_t pid = ::fork();
    if (pid < 0)
        throw BackendError(BackendError::Kind::ProcessFailure, "backend: fork failed");
    if (pid == 0) {
        ::dup2(in_pipe[0], STDIN_FILENO);
        ::dup2(out_pipe[1], STDOUT_FILENO);
        ::execl("/bin/sh", "sh", "-c", command_.c_str(), static_cast<char *>(nullptr));
        ::_exit(127);
    }
    ::close(in_pipe[0]);
    ::close(out_pipe[1]);
    pid_ = pid;
    to_child_ = in_pipe[1];
    from_child_ = out_pipe[0];
}

void BackendClient::stop()
{
    if (to_child_ >= 0)
        ::close(to_child_);
    if (from_child_ >= 0)
        ::close(from_child_);
    to_child_ = from_child_ = -1;
    if (pid_ > 0) {
        int status = 0;
        ::waitpid(pid_, &status, 0);
    }
    pid_ = -1;
}

std::string BackendClient::exchange(std::string const & request_line)
{
    if (to_child_ < 0)
        throw BackendError(BackendError::Kind::ProcessFailure, "backend: process not running");
    std::string msg = request_line + "\n";
    std::size_t off = 0;
    while (off < msg.size()) {
        ssize_t w = ::write(to_child_, msg.data() + off, msg.size() - off);
        if (w < 0) {
            if (errno == EINTR)
                continue;
            throw BackendError(BackendError::Kind::ProcessFailure,
                               std::string("backend: write failed: ") + std::strerror(errno));
        }
        off += static_cast<std::size_t>(w);
    }
    for (;;) {
        auto nl = buffer_.find('\n');
        if (nl != std::string::npos) {
            std::string line = buffer_.substr(0, nl);
            buffer_.erase(0, nl + 1);
            return line;
        }
        char chunk[4096];
        ssize_t r = ::read(from_child_, chunk, sizeof chunk);
        if (r < 0 && errno == EINTR)
            continue;
        if (r <= 0)
            throw BackendError(BackendError::Kind::ProcessFailure, "backend: process closed its output");
        buffer_.append(chunk, static_cast<std::size_t>(r));
    }
}

std::string encode_request(std::int64_t id, NormProblem const & prob)
{
    /* coefficients are written as exact JSON integers of any size */
    std::ostringstream os;
    os << "{\"id\":" << id << ",\"minpoly\":[";
    for (std::size_t i = 0; i < prob.minpoly.size(); ++i)
        os << (i ? "," : "") << prob.minpoly[i].get_str();
    os << "],\"target\":" << prob.target.get_str() << "}";
    return os.str();
}

namespace {

[[noreturn]] void malformed(std::string const & why)
{
    throw BackendError(BackendError::Kind::MalformedResponse, "backend: malformed response: " + why);
}

mpz_class coefficient(json const & v)
{
    if (v.is_number_integer())
        return v.is_number_unsigned() ? mpz_class(std::to_string(v.get<std::uint64_t>()))
                                      : mpz_class(std::to_string(v.get<std::int64_t>()));
    if (v.is_string()) {
        mpz_class z;
        if (z.set_str(v.get<std::string>(), 10) != 0)
            malformed("witness entry is not an integer");
        return z;
    }
    malformed("witness entry is not an integer (quote integers beyond 64 bits)");
}

} // namespace

BackendDecision decode_response(std::string const & line, std::int64_t id, NormProblem const & prob,
                                bool grh_allowed)
{
    json j;
    try {
        j = json::parse(line);
    } catch (json::parse_error const & e) {
        malformed(e.what());
    }
    if (!j.is_object())
        malformed("not an object");
    if (!j.contains("id") || !j["id"].is_number_integer() || j["id"].get<std::int64_t>() != id)
        malformed("id mismatch");
    if (!j.contains("outcome") || !j["outcome"].is_string())
        malformed("missing outcome");
    auto flag = [&](char const * key) {
        if (!j.contains(key))
            return false;
        if (!j[key].is_boolean())
            malformed(std::string(key) + " is not a boolean");
        return j[key].get<bool>();
    };

    BackendDecision dec;
    dec.certified = flag("certified");
    dec.grh = flag("grh");
    std::string outcome = j["outcome"].get<std::string>();
    if (outcome == "solvable") {
        if (!j.contains("witness") || !j["witness"].is_array())
            malformed("solvable without witness");
        int d = poly::degree(prob.minpoly);
        if (static_cast<int>(j["witness"].size()) > d)
            malformed("witness longer than the field degree");
        for (auto const & v : j["witness"])
            dec.witness.push_back(coefficient(v));
        poly::normalize(dec.witness);
        if (norm_of(prob.minpoly, dec.witness) != prob.target)
            throw BackendError(BackendError::Kind::VerificationFailed,
                               "backend: witness norm does not equal the target");
        dec.outcome = NormOutcome::Solvable;
    } else if (outcome == "unsolvable") {
        if (!j.contains("certified") || !j.contains("grh"))
            malformed("unsolvable without certified/grh flags");
        dec.outcome = NormOutcome::ProvablyUnsolvable;
        bool conditional = dec.grh || !dec.certified;
        if (conditional && !grh_allowed) {
            dec.outcome = NormOutcome::Unknown;
            dec.downgraded = true;
        }
    } else if (outcome == "unknown") {
        dec.outcome = NormOutcome::Unknown;
    } else {
        malformed("unknown outcome '" + outcome + "'");
    }
    return dec;
}

BackendDecision backend_decide(BackendClient * client, NormProblem const & prob, bool grh_allowed)
{
    if (!client)
        throw BackendError(BackendError::Kind::Unavailable, "backend unavailable");
    std::int64_t id = client->next_id();
    std::string line = client->exchange(encode_request(id, prob));
    return decode_response(line, id, prob, grh_allowed);
}

} // namespace noether::normsearch
