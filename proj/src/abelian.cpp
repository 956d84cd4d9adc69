#include "noether/abelian.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>
#include <tuple>

#include "noether/arith.hpp"

namespace noether::abelian {

using arith::mulmod;
using arith::powmod;

std::uint64_t UnitGroup::order() const
{
    std::uint64_t r = 1;
    for (auto d : cyclic_orders)
        r *= d;
    return r;
}

std::uint64_t UnitGroup::residue(std::vector<std::uint64_t> const & exponents) const
{
    std::uint64_t r = 1 % modulus;
    for (std::size_t i = 0; i < generators.size(); ++i)
        r = mulmod(r, powmod(generators[i], exponents[i] % cyclic_orders[i], modulus), modulus);
    return r;
}

std::vector<std::uint64_t> Subgroup::generator_residues() const
{
    std::vector<std::uint64_t> gens;
    std::size_t k = parent.rank();
    for (std::size_t j = 0; j < k; ++j) {
        std::vector<std::uint64_t> col(k);
        for (std::size_t i = 0; i < k; ++i)
            col[i] = hnf[i][j];
        gens.push_back(parent.residue(col));
    }
    return gens;
}

namespace {

/* CRT: x = a mod m1, x = b mod m2, gcd(m1, m2) = 1 */
std::uint64_t crt(std::uint64_t a, std::uint64_t m1, std::uint64_t b, std::uint64_t m2)
{
    /* x = a + m1 * t, t = (b - a) * m1^{-1} mod m2 */
    if (m2 == 1)
        return a % m1;
    std::int64_t r0 = static_cast<std::int64_t>(m2), r1 = static_cast<std::int64_t>(m1 % m2);
    std::int64_t s0 = 0, s1 = 1;
    while (r1 != 0) {
        std::int64_t q = r0 / r1;
        std::tie(r0, r1) = std::make_pair(r1, r0 - q * r1);
        std::tie(s0, s1) = std::make_pair(s1, s0 - q * s1);
    }
    auto inv = static_cast<std::uint64_t>((s0 % static_cast<std::int64_t>(m2) + static_cast<std::int64_t>(m2))
                                          % static_cast<std::int64_t>(m2));
    std::uint64_t diff = (b % m2 + m2 - a % m2) % m2;
    std::uint64_t t = mulmod(diff, inv, m2);
    return a + m1 * t;
}

/* generator of (Z/q^e)^* for odd prime q */
std::uint64_t primitive_root_prime_power(std::uint64_t q, unsigned e, std::uint64_t qe)
{
    std::uint64_t phi = qe / q * (q - 1);
    auto fac = arith::factor(phi);
    for (std::uint64_t g = 2; g < qe; ++g) {
        if (g % q == 0)
            continue;
        bool ok = true;
        for (auto const & [r, k] : fac.factors)
            if (powmod(g, phi / r, qe) == 1) {
                ok = false;
                break;
            }
        if (ok)
            return g;
    }
    (void)e;
    throw std::logic_error("no primitive root");
}

struct CyclicPart {
    std::uint64_t order;     // a prime power
    std::uint64_t generator; // residue mod n
};

} // namespace

UnitGroup unit_group(std::uint64_t n)
{
    if (n < 3)
        throw std::invalid_argument("unit_group: modulus must be at least 3");

    auto fac = arith::factor(n);
    /* cyclic factors of each (Z/q^e)^*, lifted to residues mod n */
    std::vector<std::pair<std::uint64_t, std::uint64_t>> cyclic; // (order, residue mod n)
    for (auto const & [q, e] : fac.factors) {
        std::uint64_t qe = 1;
        for (unsigned i = 0; i < e; ++i)
            qe *= q;
        std::uint64_t rest = n / qe;
        auto lift = [&](std::uint64_t g) { return crt(g % qe, qe, 1, rest) % n; };
        if (q == 2) {
            if (e == 2)
                cyclic.emplace_back(2, lift(qe - 1));
            else if (e >= 3) {
                cyclic.emplace_back(2, lift(qe - 1));
                cyclic.emplace_back(qe / 4, lift(5));
            }
        } else {
            cyclic.emplace_back(qe / q * (q - 1), lift(primitive_root_prime_power(q, e, qe)));
        }
    }

    /* split into prime-power parts */
    std::map<std::uint64_t, std::vector<CyclicPart>> parts;
    for (auto const & [ord, g] : cyclic) {
        for (auto const & [r, k] : arith::factor(ord).factors) {
            std::uint64_t rk = 1;
            for (unsigned i = 0; i < k; ++i)
                rk *= r;
            parts[r].push_back({rk, powmod(g, ord / rk, n)});
        }
    }
    std::size_t rank = 0;
    for (auto & [r, v] : parts) {
        std::sort(v.begin(), v.end(),
                  [](CyclicPart const & a, CyclicPart const & b) { return a.order > b.order; });
        rank = std::max(rank, v.size());
    }

    UnitGroup G;
    G.modulus = n;
    G.cyclic_orders.assign(rank, 1);
    G.generators.assign(rank, 1);
    for (auto const & [r, v] : parts) {
        for (std::size_t i = 0; i < v.size(); ++i) {
            G.cyclic_orders[i] *= v[i].order;
            G.generators[i] = mulmod(G.generators[i], v[i].generator, n);
        }
    }
    return G;
}

namespace {

struct Enumerator {
    std::vector<std::uint64_t> const & d;
    std::optional<std::uint64_t> max_index;
    std::size_t k;
    std::vector<std::vector<std::uint64_t>> H;
    std::vector<std::vector<std::vector<std::uint64_t>>> out;

    /* d_j e_j in the span of columns 0..j, given columns 0..j fixed */
    bool contains_scaled_unit(std::size_t j) const
    {
        std::vector<__int128> r(j + 1, 0);
        r[j] = static_cast<__int128>(d[j]);
        for (std::size_t c = j + 1; c-- > 0;) {
            __int128 h = static_cast<__int128>(H[c][c]);
            if (r[c] % h != 0)
                return false;
            __int128 coef = r[c] / h;
            for (std::size_t i = 0; i <= c; ++i)
                r[i] -= coef * static_cast<__int128>(H[i][c]);
        }
        return true;
    }

    void off_diagonal(std::size_t j, std::size_t i, std::uint64_t idx)
    {
        if (i == j) {
            if (!contains_scaled_unit(j))
                return;
            column(j + 1, idx);
            return;
        }
        for (std::uint64_t v = 0; v < H[i][i]; ++v) {
            H[i][j] = v;
            off_diagonal(j, i + 1, idx);
        }
        H[i][j] = 0;
    }

    void column(std::size_t j, std::uint64_t idx)
    {
        if (j == k) {
            out.push_back(H);
            return;
        }
        for (auto h : arith::divisors(d[j])) {
            if (max_index && idx * h > *max_index)
                break;
            H[j][j] = h;
            off_diagonal(j, 0, idx * h);
        }
        H[j][j] = 0;
    }
};

} // namespace

std::vector<Subgroup> subgroups(UnitGroup const & g, std::optional<std::uint64_t> max_index)
{
    std::size_t k = g.rank();
    Enumerator en{g.cyclic_orders, max_index, k,
                  std::vector<std::vector<std::uint64_t>>(k, std::vector<std::uint64_t>(k, 0)),
                  {}};
    en.column(0, 1);

    std::vector<Subgroup> res;
    res.reserve(en.out.size());
    for (auto & h : en.out) {
        Subgroup s;
        s.parent = g;
        s.index = 1;
        for (std::size_t i = 0; i < k; ++i)
            s.index *= h[i][i];
        s.hnf = std::move(h);
        res.push_back(std::move(s));
    }
    std::sort(res.begin(), res.end(), [](Subgroup const & a, Subgroup const & b) {
        if (a.index != b.index)
            return a.index < b.index;
        return a.hnf < b.hnf;
    });
    return res;
}

std::vector<std::uint64_t> elements(Subgroup const & h)
{
    std::uint64_t n = h.modulus();
    std::vector<char> seen(n, 0);
    std::vector<std::uint64_t> elems{1 % n};
    seen[1 % n] = 1;
    auto gens = h.generator_residues();
    for (std::size_t i = 0; i < elems.size(); ++i) {
        for (auto gr : gens) {
            std::uint64_t x = mulmod(elems[i], gr, n);
            if (!seen[x]) {
                seen[x] = 1;
                elems.push_back(x);
            }
        }
    }
    std::sort(elems.begin(), elems.end());
    return elems;
}

Subgroup full_subgroup(UnitGroup const & g)
{
    Subgroup s;
    s.parent = g;
    std::size_t k = g.rank();
    s.hnf.assign(k, std::vector<std::uint64_t>(k, 0));
    for (std::size_t i = 0; i < k; ++i)
        s.hnf[i][i] = 1;
    s.index = 1;
    return s;
}

Subgroup trivial_subgroup(UnitGroup const & g)
{
    Subgroup s;
    s.parent = g;
    std::size_t k = g.rank();
    s.hnf.assign(k, std::vector<std::uint64_t>(k, 0));
    for (std::size_t i = 0; i < k; ++i)
        s.hnf[i][i] = g.cyclic_orders[i];
    s.index = g.order();
    return s;
}

} // namespace noether::abelian
