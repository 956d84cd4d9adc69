#include "noether/arith.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace noether::arith {

std::uint64_t Factorization::product() const
{
    std::uint64_t r = 1;
    for (auto const & [q, e] : factors)
        for (unsigned i = 0; i < e; ++i)
            r *= q;
    return r;
}

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m)
{
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m)
{
    if (m == 1)
        return 0;
    std::uint64_t r = 1;
    a %= m;
    for (; e; e >>= 1) {
        if (e & 1)
            r = mulmod(r, a, m);
        a = mulmod(a, a, m);
    }
    return r;
}

std::uint64_t isqrt(std::uint64_t n)
{
    if (n == 0)
        return 0;
    auto r = static_cast<std::uint64_t>(__builtin_sqrtl(static_cast<long double>(n)));
    while (static_cast<unsigned __int128>(r) * r > n)
        --r;
    while (static_cast<unsigned __int128>(r + 1) * (r + 1) <= n)
        ++r;
    return r;
}

bool is_prime(std::uint64_t n)
{
    if (n < 2)
        return false;
    static constexpr std::uint64_t small[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    for (auto q : small) {
        if (n == q)
            return true;
        if (n % q == 0)
            return false;
    }
    std::uint64_t d = n - 1;
    unsigned s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    /* the first twelve primes as bases decide every n < 3.18e23 */
    for (auto a : small) {
        std::uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1)
            continue;
        bool composite = true;
        for (unsigned r = 1; r < s; ++r) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite)
            return false;
    }
    return true;
}

namespace {

std::uint64_t pollard_rho(std::uint64_t n)
{
    if (n % 2 == 0)
        return 2;
    for (std::uint64_t c = 1;; ++c) {
        auto f = [&](std::uint64_t x) { return (mulmod(x, x, n) + c) % n; };
        std::uint64_t x = 2, y = 2, d = 1;
        while (d == 1) {
            x = f(x);
            y = f(f(y));
            d = std::gcd(x > y ? x - y : y - x, n);
        }
        if (d != n)
            return d;
    }
}

void factor_into(std::uint64_t n, std::vector<std::uint64_t> & out)
{
    if (n == 1)
        return;
    if (is_prime(n)) {
        out.push_back(n);
        return;
    }
    std::uint64_t d = pollard_rho(n);
    factor_into(d, out);
    factor_into(n / d, out);
}

} // namespace

Factorization factor(std::uint64_t n)
{
    if (n == 0)
        throw std::invalid_argument("factor: n must be positive");
    Factorization f;
    f.value = n;
    std::vector<std::uint64_t> primes;
    std::uint64_t m = n;
    for (std::uint64_t q = 2; q < 1000000 && q * q <= m; q += (q == 2 ? 1 : 2)) {
        while (m % q == 0) {
            primes.push_back(q);
            m /= q;
        }
    }
    if (m > 1)
        factor_into(m, primes);
    std::sort(primes.begin(), primes.end());
    for (auto q : primes) {
        if (!f.factors.empty() && f.factors.back().first == q)
            ++f.factors.back().second;
        else
            f.factors.emplace_back(q, 1u);
    }
    return f;
}

bool is_squarefree(std::uint64_t n)
{
    auto f = factor(n);
    return std::all_of(f.factors.begin(), f.factors.end(),
                       [](auto const & pe) { return pe.second == 1; });
}

bool is_square(std::int64_t n)
{
    if (n < 0)
        return false;
    auto r = isqrt(static_cast<std::uint64_t>(n));
    return r * r == static_cast<std::uint64_t>(n);
}

int jacobi(std::int64_t a, std::uint64_t n)
{
    if (n == 0 || n % 2 == 0)
        throw std::invalid_argument("jacobi: n must be odd and positive");
    std::int64_t m = static_cast<std::int64_t>(n);
    std::uint64_t x = static_cast<std::uint64_t>(((a % m) + m) % m);
    int t = 1;
    while (x != 0) {
        while (x % 2 == 0) {
            x /= 2;
            std::uint64_t r = n % 8;
            if (r == 3 || r == 5)
                t = -t;
        }
        std::swap(x, n);
        if (x % 4 == 3 && n % 4 == 3)
            t = -t;
        x %= n;
    }
    return n == 1 ? t : 0;
}

std::optional<std::uint64_t> sqrt_mod_prime(std::int64_t a, std::uint64_t p)
{
    if (!is_prime(p))
        throw std::invalid_argument("sqrt_mod_prime: modulus is not prime");
    std::int64_t m = static_cast<std::int64_t>(p);
    std::uint64_t x = static_cast<std::uint64_t>(((a % m) + m) % m);
    if (p == 2 || x == 0)
        return x;
    if (jacobi(static_cast<std::int64_t>(x), p) != 1)
        return std::nullopt;
    if (p % 4 == 3)
        return powmod(x, (p + 1) / 4, p);

    std::uint64_t q = p - 1;
    unsigned s = 0;
    while (q % 2 == 0) {
        q /= 2;
        ++s;
    }
    std::uint64_t z = 2;
    while (jacobi(static_cast<std::int64_t>(z), p) != -1)
        ++z;
    std::uint64_t c = powmod(z, q, p);
    std::uint64_t r = powmod(x, (q + 1) / 2, p);
    std::uint64_t t = powmod(x, q, p);
    unsigned e = s;
    while (t != 1) {
        unsigned i = 0;
        for (std::uint64_t u = t; u != 1; u = mulmod(u, u, p))
            ++i;
        std::uint64_t b = c;
        for (unsigned j = 0; j + i + 1 < e; ++j)
            b = mulmod(b, b, p);
        r = mulmod(r, b, p);
        c = mulmod(b, b, p);
        t = mulmod(t, c, p);
        e = i;
    }
    return r;
}

std::uint64_t euler_phi(std::uint64_t n)
{
    std::uint64_t r = n;
    for (auto const & [q, e] : factor(n).factors)
        r = r / q * (q - 1);
    return r;
}

int moebius(std::uint64_t n)
{
    int r = 1;
    for (auto const & [q, e] : factor(n).factors) {
        if (e > 1)
            return 0;
        r = -r;
    }
    return r;
}

std::vector<std::uint64_t> divisors(std::uint64_t n)
{
    std::vector<std::uint64_t> ds{1};
    for (auto const & [q, e] : factor(n).factors) {
        std::size_t base = ds.size();
        std::uint64_t pw = 1;
        for (unsigned i = 1; i <= e; ++i) {
            pw *= q;
            for (std::size_t j = 0; j < base; ++j)
                ds.push_back(ds[j] * pw);
        }
    }
    std::sort(ds.begin(), ds.end());
    return ds;
}

std::vector<std::uint64_t> primes_between(std::uint64_t lo, std::uint64_t hi)
{
    std::vector<std::uint64_t> out;
    if (hi < 2 || lo > hi)
        return out;
    std::vector<bool> composite(hi + 1, false);
    for (std::uint64_t i = 2; i * i <= hi; ++i)
        if (!composite[i])
            for (std::uint64_t j = i * i; j <= hi; j += i)
                composite[j] = true;
    for (std::uint64_t i = std::max<std::uint64_t>(lo, 2); i <= hi; ++i)
        if (!composite[i])
            out.push_back(i);
    return out;
}

std::uint64_t multiplicative_order(std::uint64_t a, std::uint64_t n)
{
    if (n == 1)
        return 1;
    if (std::gcd(a % n, n) != 1)
        throw std::invalid_argument("multiplicative_order: not a unit");
    std::uint64_t ord = euler_phi(n);
    for (auto const & [q, e] : factor(ord).factors) {
        for (unsigned i = 0; i < e && ord % q == 0 && powmod(a, ord / q, n) == 1; ++i)
            ord /= q;
    }
    return ord;
}

} // namespace noether::arith
