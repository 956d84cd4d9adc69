#include "noether/cyclotomic.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

#include "noether/arith.hpp"

namespace noether::cyclotomic {

std::int64_t ramanujan_sum(std::uint64_t n, std::int64_t j)
{
    if (n == 0)
        throw std::invalid_argument("ramanujan_sum: n must be positive");
    std::uint64_t aj = static_cast<std::uint64_t>(j < 0 ? -j : j);
    std::uint64_t g = std::gcd(aj % n, n);
    if (g == 0)
        g = n;
    std::uint64_t m = n / g;
    return static_cast<std::int64_t>(arith::moebius(m)) *
           static_cast<std::int64_t>(arith::euler_phi(n) / arith::euler_phi(m));
}

ZPoly cyclotomic_polynomial(std::uint64_t n)
{
    if (n == 0)
        throw std::invalid_argument("cyclotomic_polynomial: n must be positive");
    /* Phi_n = prod_{d | n} (x^d - 1)^{mu(n/d)} */
    ZPoly num{1}, den{1};
    for (auto d : arith::divisors(n)) {
        int mu = arith::moebius(n / d);
        if (mu == 0)
            continue;
        ZPoly f(d + 1);
        f[0] = -1;
        f[d] = 1;
        (mu > 0 ? num : den) = poly::mul(mu > 0 ? num : den, f);
    }
    /* den is +-monic; make it monic by flipping both signs */
    if (den.back() < 0) {
        for (auto & c : den)
            c = -c;
        for (auto & c : num)
            c = -c;
    }
    return poly::div_exact_monic(num, den);
}

CycElement::CycElement(std::uint64_t n) : n_(n), c_(n)
{
    if (n == 0)
        throw std::invalid_argument("CycElement: n must be positive");
}

CycElement::CycElement(std::uint64_t n, std::vector<mpz_class> coeffs) : n_(n), c_(std::move(coeffs))
{
    if (n == 0 || c_.size() != n)
        throw std::invalid_argument("CycElement: coefficient count must equal n");
}

CycElement CycElement::monomial(std::uint64_t n, std::uint64_t k, mpz_class const & c)
{
    CycElement e(n);
    e.c_[k % n] = c;
    return e;
}

CycElement CycElement::constant(std::uint64_t n, mpz_class const & c)
{
    return monomial(n, 0, c);
}

CycElement & CycElement::operator+=(CycElement const & o)
{
    if (o.n_ != n_)
        throw std::invalid_argument("CycElement: modulus mismatch");
    for (std::size_t i = 0; i < n_; ++i)
        c_[i] += o.c_[i];
    return *this;
}

CycElement & CycElement::operator-=(CycElement const & o)
{
    if (o.n_ != n_)
        throw std::invalid_argument("CycElement: modulus mismatch");
    for (std::size_t i = 0; i < n_; ++i)
        c_[i] -= o.c_[i];
    return *this;
}

CycElement & CycElement::operator*=(mpz_class const & s)
{
    for (auto & c : c_)
        c *= s;
    return *this;
}

CycElement operator*(CycElement const & a, CycElement const & b)
{
    if (a.n_ != b.n_)
        throw std::invalid_argument("CycElement: modulus mismatch");
    std::uint64_t n = a.n_;
    CycElement r(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (a.c_[i] == 0)
            continue;
        for (std::size_t j = 0; j < n; ++j) {
            if (b.c_[j] == 0)
                continue;
            std::size_t k = i + j;
            if (k >= n)
                k -= n;
            r.c_[k] += a.c_[i] * b.c_[j];
        }
    }
    return r;
}

CycElement CycElement::galois(std::uint64_t a) const
{
    if (std::gcd(a % n_, n_) != 1)
        throw std::invalid_argument("CycElement::galois: exponent must be a unit");
    CycElement r(n_);
    for (std::size_t j = 0; j < n_; ++j)
        r.c_[arith::mulmod(j, a, n_)] += c_[j];
    return r;
}

mpz_class CycElement::trace() const
{
    mpz_class t = 0;
    std::vector<std::int64_t> cache(n_ + 1, 0);
    std::vector<char> known(n_ + 1, 0);
    for (std::size_t j = 0; j < n_; ++j) {
        if (c_[j] == 0)
            continue;
        std::uint64_t g = std::gcd(static_cast<std::uint64_t>(j), n_);
        if (!known[g]) {
            cache[g] = ramanujan_sum(n_, static_cast<std::int64_t>(g));
            known[g] = 1;
        }
        t += c_[j] * cache[g];
    }
    return t;
}

bool CycElement::vanishes() const
{
    ZPoly f(c_.begin(), c_.end());
    poly::normalize(f);
    return poly::rem_monic(f, cyclotomic_polynomial(n_)).empty();
}

CycElement period_element(std::uint64_t n, abelian::Subgroup const & H, std::span<const int> shape)
{
    if (H.modulus() != n)
        throw std::invalid_argument("period_element: subgroup modulus mismatch");
    CycElement r(n);
    auto elems = abelian::elements(H);
    std::vector<mpz_class> c(n);
    for (std::size_t k = 1; k <= shape.size(); ++k) {
        int ck = shape[k - 1];
        if (ck == 0)
            continue;
        for (auto h : elems)
            c[arith::mulmod(k, h, n)] += ck;
    }
    return CycElement(n, std::move(c));
}

std::vector<std::vector<int>> shape_schedule(std::size_t max_length)
{
    constexpr std::size_t max_count = 256;
    std::vector<std::vector<int>> out{{1}};
    for (std::size_t m = 2; m <= max_length && out.size() < max_count; ++m) {
        /* c_1 = 1, middle entries in {0,1,2}, last entry in {1,2}; lexicographic */
        std::vector<int> mid(m - 2, 0);
        for (;;) {
            for (int last = 1; last <= 2 && out.size() < max_count; ++last) {
                std::vector<int> s{1};
                s.insert(s.end(), mid.begin(), mid.end());
                s.push_back(last);
                out.push_back(std::move(s));
            }
            std::size_t i = mid.size();
            while (i > 0 && mid[i - 1] == 2)
                mid[--i] = 0;
            if (i == 0 || out.size() >= max_count)
                break;
            ++mid[i - 1];
        }
    }
    return out;
}

namespace {

/* Orbits of H acting on Z/n by multiplication. */
struct OrbitTable {
    std::uint64_t n;
    std::vector<std::uint64_t> h;          // elements of H
    std::vector<std::uint32_t> orbit_of;   // residue -> orbit id
    std::vector<std::uint64_t> rep;        // orbit id -> representative
    std::vector<std::uint64_t> size;       // orbit id -> orbit size
    std::vector<std::int64_t> ram;         // orbit id -> c_n(rep)

    OrbitTable(std::uint64_t n_, std::vector<std::uint64_t> elems) : n(n_), h(std::move(elems))
    {
        constexpr auto none = static_cast<std::uint32_t>(-1);
        orbit_of.assign(n, none);
        std::vector<std::int64_t> ram_by_gcd(n + 1, 0);
        std::vector<char> known(n + 1, 0);
        for (std::uint64_t t = 0; t < n; ++t) {
            if (orbit_of[t] != none)
                continue;
            auto id = static_cast<std::uint32_t>(rep.size());
            std::uint64_t count = 0;
            for (auto x : h) {
                std::uint64_t s = arith::mulmod(x, t, n);
                if (orbit_of[s] == none) {
                    orbit_of[s] = id;
                    ++count;
                }
            }
            std::uint64_t g = std::gcd(t, n);
            if (!known[g]) {
                ram_by_gcd[g] = ramanujan_sum(n, static_cast<std::int64_t>(g));
                known[g] = 1;
            }
            rep.push_back(t);
            size.push_back(count);
            ram.push_back(ram_by_gcd[g]);
        }
    }

    std::size_t count() const { return rep.size(); }

    /* x * eta^(m) for an H-invariant x given by its orbit values */
    std::vector<mpz_class> times_period(std::vector<mpz_class> const & x, std::uint64_t m) const
    {
        std::vector<mpz_class> y(count());
        std::uint64_t shift = m % n;
        for (std::size_t o = 0; o < count(); ++o) {
            std::uint64_t t = rep[o];
            mpz_class acc = 0;
            for (auto hh : h) {
                std::uint64_t s = arith::mulmod(hh, t, n);
                s = s >= shift ? s - shift : s + n - shift;
                acc += x[orbit_of[s]];
            }
            y[o] = std::move(acc);
        }
        return y;
    }

    mpz_class trace(std::vector<mpz_class> const & x) const
    {
        mpz_class t = 0;
        for (std::size_t o = 0; o < count(); ++o)
            if (x[o] != 0 && ram[o] != 0)
                t += x[o] * (static_cast<std::int64_t>(size[o]) * ram[o]);
        return t;
    }
};

ZPoly minpoly_from_shape(OrbitTable const & orb, std::uint64_t degree, std::vector<int> const & shape)
{
    /* theta = sum_k shape_k eta^(k), computed as an invariant element */
    std::size_t no = orb.count();
    std::vector<mpz_class> one(no);
    one[orb.orbit_of[0]] = 1;

    auto times_theta = [&](std::vector<mpz_class> const & x) {
        std::vector<mpz_class> acc(no);
        for (std::size_t k = 1; k <= shape.size(); ++k) {
            if (shape[k - 1] == 0)
                continue;
            auto y = orb.times_period(x, k);
            for (std::size_t o = 0; o < no; ++o)
                acc[o] += y[o] * shape[k - 1];
        }
        return acc;
    };

    mpz_class hsize = static_cast<unsigned long>(orb.h.size());
    std::vector<mpz_class> power_sums(degree + 1);
    std::vector<mpz_class> x = one;
    for (std::uint64_t k = 1; k <= degree; ++k) {
        x = times_theta(x);
        mpz_class tr = orb.trace(x);
        if (tr % hsize != 0)
            throw std::logic_error("subfield_minpoly: trace not divisible by |H|");
        power_sums[k] = tr / hsize;
    }

    /* Newton: k e_k = sum_{i=1}^k (-1)^{i-1} e_{k-i} p_i */
    std::vector<mpz_class> e(degree + 1);
    e[0] = 1;
    for (std::uint64_t k = 1; k <= degree; ++k) {
        mpz_class s = 0;
        for (std::uint64_t i = 1; i <= k; ++i) {
            if (i % 2 == 1)
                s += e[k - i] * power_sums[i];
            else
                s -= e[k - i] * power_sums[i];
        }
        mpz_class kk = static_cast<unsigned long>(k);
        if (s % kk != 0)
            throw std::logic_error("subfield_minpoly: Newton identity not integral");
        e[k] = s / kk;
    }
    ZPoly f(degree + 1);
    for (std::uint64_t k = 0; k <= degree; ++k)
        f[degree - k] = (k % 2 == 0) ? e[k] : mpz_class(-e[k]);
    return f;
}

} // namespace

namespace {

/* Smallest m | n such that every unit = 1 mod m lies in H. */
std::uint64_t conductor(std::uint64_t n, std::vector<std::uint64_t> const & h)
{
    for (auto m : arith::divisors(n)) {
        bool all = true;
        for (std::uint64_t u = 1; u < n && all; u += m)
            if (std::gcd(u, n) == 1)
                all = std::binary_search(h.begin(), h.end(), u);
        if (all)
            return m;
    }
    return n;
}

/*
 * For squarefree n the fixed schedule. Otherwise the schedule is applied
 * to the periods of zeta_f, f the conductor of the fixed field (eta^(k)
 * becomes eta^(k n / f)), since for n = 9, H = {1, 4, 7} every period of
 * zeta_9 itself vanishes. As a last resort the periods eta^(e), e | n,
 * are tried alone and in combination; together they generate the field.
 */
std::vector<std::vector<int>> generator_shapes(std::uint64_t n, std::uint64_t d, std::vector<std::uint64_t> const & h)
{
    auto base = shape_schedule(std::max<std::uint64_t>(d, 2));
    if (d == 1 || arith::is_squarefree(n))
        return base;
    std::uint64_t k0 = n / conductor(n, h);
    std::vector<std::vector<int>> out;
    for (auto const & s : base) {
        std::vector<int> t(s.size() * k0, 0);
        for (std::size_t k = 0; k < s.size(); ++k)
            t[(k + 1) * k0 - 1] = s[k];
        out.push_back(std::move(t));
    }
    std::vector<std::uint64_t> divs;
    for (auto e : arith::divisors(n))
        if (e > 1 && e < n)
            divs.push_back(e);
    for (auto e : divs) {
        std::vector<int> s(e, 0);
        s[e - 1] = 1;
        out.push_back(std::move(s));
    }
    for (int round = 1; round <= 4; ++round) {
        std::vector<int> s(divs.empty() ? 1 : divs.back(), 0);
        s[0] = 1;
        int c = 1;
        for (auto e : divs)
            s[e - 1] = (++c) * round + (c % 3);
        out.push_back(std::move(s));
    }
    return out;
}

} // namespace

SubfieldDescriptor subfield_minpoly(std::uint64_t n, abelian::Subgroup const & H)
{
    if (H.modulus() != n)
        throw std::invalid_argument("subfield_minpoly: subgroup modulus mismatch");
    OrbitTable orb(n, abelian::elements(H));
    std::uint64_t d = H.index;

    SubfieldDescriptor desc;
    desc.n = n;
    desc.subgroup = H;
    desc.degree = d;
    for (auto const & shape : generator_shapes(n, d, orb.h)) {
        ZPoly f = minpoly_from_shape(orb, d, shape);
        mpz_class disc = d == 1 ? mpz_class(1) : poly::discriminant(f);
        if (disc != 0) {
            desc.minpoly = std::move(f);
            desc.poly_disc = disc;
            desc.shape = shape;
            return desc;
        }
    }
    throw std::runtime_error("subfield_minpoly: no squarefree generator for n=" + std::to_string(n) +
                             ", degree " + std::to_string(d));
}

std::vector<SubfieldDescriptor> subfields(std::uint64_t n, std::uint64_t max_degree)
{
    auto G = abelian::unit_group(n);
    std::vector<SubfieldDescriptor> out;
    for (auto const & H : abelian::subgroups(G, max_degree))
        out.push_back(subfield_minpoly(n, H));
    std::stable_sort(out.begin(), out.end(), [](SubfieldDescriptor const & a, SubfieldDescriptor const & b) {
        if (a.degree != b.degree)
            return a.degree < b.degree;
        return std::lexicographical_compare(a.minpoly.begin(), a.minpoly.end(), b.minpoly.begin(),
                                            b.minpoly.end());
    });
    return out;
}

} // namespace noether::cyclotomic
