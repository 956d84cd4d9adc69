#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cmath>
#include <complex>
#include <numeric>
#include <set>

#include "noether/arith.hpp"
#include "noether/cyclotomic.hpp"
#include "noether/quadforms.hpp"
#include "oracles.hpp"

using namespace noether;
using namespace noether::cyclotomic;
using poly::from_ints;

namespace {

abelian::Subgroup subgroup_with(std::uint64_t n, std::vector<std::uint64_t> const & els)
{
    for (auto const & h : abelian::subgroups(abelian::unit_group(n)))
        if (abelian::elements(h) == els)
            return h;
    FAIL("no such subgroup");
    return {};
}

CycElement eval_at(ZPoly const & f, CycElement const & x)
{
    CycElement acc(x.modulus());
    for (std::size_t i = f.size(); i-- > 0;)
        acc = acc * x + CycElement::constant(x.modulus(), f[i]);
    return acc;
}

using cplx = std::complex<long double>;

std::vector<cplx> numeric_conjugates(SubfieldDescriptor const & f)
{
    std::uint64_t n = f.n;
    auto H = abelian::elements(f.subgroup);
    long double const tau = 2 * std::acos(-1.0L);
    std::vector<cplx> out;
    std::set<std::uint64_t> covered;
    for (std::uint64_t a = 1; a < n; ++a) {
        if (std::gcd(a, n) != 1 || covered.count(a))
            continue;
        cplx v = 0;
        for (auto h : H) {
            covered.insert(a * h % n);
            for (std::size_t k = 0; k < f.shape.size(); ++k) {
                long double ang = tau * static_cast<long double>((k + 1) * a % n * h % n) / n;
                v += static_cast<long double>(f.shape[k]) * cplx(std::cos(ang), std::sin(ang));
            }
        }
        out.push_back(v);
    }
    return out;
}

/* no proper subset of the conjugates has a product polynomial with integer coefficients */
bool numerically_irreducible(std::vector<cplx> const & roots)
{
    std::size_t d = roots.size();
    for (std::size_t k = 1; k <= d / 2; ++k) {
        std::vector<std::size_t> idx(k);
        std::iota(idx.begin(), idx.end(), 0);
        for (;;) {
            std::vector<cplx> c{1};
            for (auto i : idx) {
                std::vector<cplx> next(c.size() + 1, 0);
                for (std::size_t j = 0; j < c.size(); ++j) {
                    next[j + 1] += c[j];
                    next[j] -= c[j] * roots[i];
                }
                c = next;
            }
            bool integral = true;
            for (auto const & z : c)
                integral = integral && std::abs(z.imag()) < 1e-6L &&
                           std::abs(z.real() - std::round(z.real())) < 1e-6L;
            if (integral)
                return false;
            std::size_t i = k;
            while (i > 0 && idx[i - 1] == d - k + i - 1)
                --i;
            if (i == 0)
                break;
            ++idx[i - 1];
            for (std::size_t j = i; j < k; ++j)
                idx[j] = idx[j - 1] + 1;
        }
    }
    return true;
}

} // namespace

TEST_CASE("ramanujan sums")
{
    CHECK(ramanujan_sum(5, 1) == -1);
    CHECK(ramanujan_sum(5, 5) == 4);
    CHECK(ramanujan_sum(6, 2) == -1);
    CHECK(ramanujan_sum(1, 7) == 1);
    for (std::uint64_t n = 1; n <= 50; ++n)
        for (std::int64_t j = -3; j <= 2 * static_cast<std::int64_t>(n); ++j)
            REQUIRE(ramanujan_sum(n, j) == std::llround(oracle::ramanujan_numeric(n, j)));
}

TEST_CASE("cyclotomic polynomials")
{
    CHECK(cyclotomic_polynomial(1) == from_ints({-1, 1}));
    CHECK(cyclotomic_polynomial(4) == from_ints({1, 0, 1}));
    CHECK(cyclotomic_polynomial(6) == from_ints({1, -1, 1}));
    CHECK(cyclotomic_polynomial(12) == from_ints({1, 0, -1, 0, 1}));
    for (std::uint64_t n = 1; n <= 120; ++n)
        REQUIRE(poly::degree(cyclotomic_polynomial(n)) == static_cast<int>(arith::euler_phi(n)));
}

TEST_CASE("cyclotomic element arithmetic")
{
    auto z = CycElement::monomial(7, 1);
    auto one = CycElement::constant(7, 1);
    CycElement s(7);
    for (std::uint64_t k = 0; k < 7; ++k)
        s += CycElement::monomial(7, k);
    CHECK(s.vanishes());
    CHECK_FALSE(z.vanishes());
    CHECK((z * z).galois(3) == CycElement::monomial(7, 6));
    CHECK(one.trace() == 6);
    CHECK(z.trace() == -1);
}

TEST_CASE("period elements")
{
    auto H = subgroup_with(5, {1, 4});
    int one[] = {1};
    CHECK(period_element(5, H, one) == CycElement::monomial(5, 1) + CycElement::monomial(5, 4));
    auto G = abelian::full_subgroup(abelian::unit_group(5));
    auto full = period_element(5, G, one);
    CHECK((full + CycElement::constant(5, 1)).vanishes());
    auto H12 = subgroup_with(12, {1, 7});
    CHECK(period_element(12, H12, one).vanishes());
}

TEST_CASE("subfield minimal polynomials")
{
    CHECK(subfield_minpoly(5, subgroup_with(5, {1, 4})).minpoly == from_ints({-1, 1, 1}));
    CHECK(subfield_minpoly(7, subgroup_with(7, {1, 2, 4})).minpoly == from_ints({2, 1, 1}));
    for (std::uint64_t n : {5, 12, 30, 46, 97}) {
        auto d = subfield_minpoly(n, abelian::full_subgroup(abelian::unit_group(n)));
        CHECK(d.minpoly == from_ints({-arith::moebius(n), 1}));
    }
    // degenerate first period: the schedule moves on
    auto d12 = subfield_minpoly(12, subgroup_with(12, {1, 7}));
    CHECK(d12.degree == 2);
    CHECK(d12.shape != std::vector<int>{1});
}

TEST_CASE("subfield lists")
{
    auto s46 = subfields(46, 2);
    REQUIRE(s46.size() == 2);
    CHECK(s46[0].degree == 1);
    CHECK(s46[1].degree == 2);
    mpz_class q = s46[1].poly_disc / -23;
    CHECK(s46[1].poly_disc % -23 == 0);
    CHECK(mpz_perfect_square_p(q.get_mpz_t()));

    auto s12 = subfields(12, 2);
    REQUIRE(s12.size() == 4);
    std::set<std::int64_t> cores;
    for (auto const & f : s12)
        if (f.degree == 2) {
            for (std::int64_t D : {-4, -3, 12})
                if (f.poly_disc % D == 0) {
                    mpz_class r = f.poly_disc / D;
                    if (mpz_perfect_square_p(r.get_mpz_t()) && r > 0)
                        cores.insert(D);
                }
        }
    CHECK(cores == std::set<std::int64_t>{-4, -3, 12});

    auto s3 = subfields(3, 8);
    REQUIRE(s3.size() == 2);
    CHECK(s3[1].minpoly == from_ints({1, 1, 1}));
}

TEST_CASE("descriptor invariants for n <= 100")
{
    for (std::uint64_t n = 3; n <= 100; ++n) {
        auto g = abelian::unit_group(n);
        auto fields = subfields(n, g.order());
        REQUIRE(fields.size() == abelian::subgroups(g).size());
        std::size_t quadratic = 0;
        for (auto const & f : fields) {
            REQUIRE(f.degree == f.subgroup.index);
            REQUIRE(poly::degree(f.minpoly) == static_cast<int>(f.degree));
            REQUIRE(f.minpoly.back() == 1);
            REQUIRE(poly::is_squarefree(f.minpoly));
            auto eta = period_element(n, f.subgroup, f.shape);
            REQUIRE_MESSAGE(eval_at(f.minpoly, eta).vanishes(), "n = " << n << " degree " << f.degree);
            quadratic += f.degree == 2;
        }
        REQUIRE(quadratic == quadforms::quadratic_subfield_discs(n).size());
        for (std::size_t i = 1; i < fields.size(); ++i)
            REQUIRE(fields[i - 1].degree <= fields[i].degree);
    }
}

TEST_CASE("minimal polynomials are irreducible for n <= 60")
{
    for (std::uint64_t n = 3; n <= 60; ++n)
        for (auto const & f : subfields(n, arith::euler_phi(n))) {
            auto roots = numeric_conjugates(f);
            REQUIRE(roots.size() == f.degree);
            for (auto const & r : roots) {
                cplx v = 0;
                for (std::size_t i = f.minpoly.size(); i-- > 0;)
                    v = v * r + static_cast<long double>(f.minpoly[i].get_d());
                REQUIRE(std::abs(v) < 1e-6L * (1 + std::pow(std::abs(r), static_cast<long double>(f.degree))));
            }
            // The roots are the Galois orbit of the period and pairwise distinct,
            // so the polynomial is the minimal polynomial of the period.
            for (std::size_t i = 0; i < roots.size(); ++i)
                for (std::size_t j = i + 1; j < roots.size(); ++j)
                    REQUIRE(std::abs(roots[i] - roots[j]) > 1e-9L);
            // and directly: no factor of degree <= d/2 made of conjugates
            if (f.degree <= 12)
                REQUIRE_MESSAGE(numerically_irreducible(roots), "n = " << n << " degree " << f.degree);
        }
}

TEST_CASE("degree <= 8 subfields of large moduli are fast")
{
    for (std::uint64_t n : {19996u, 17280u, 19980u, 13860u}) {
        auto t0 = std::chrono::steady_clock::now();
        auto fields = subfields(n, 8);
        auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        REQUIRE(!fields.empty());
        for (auto const & f : fields)
            REQUIRE(poly::is_squarefree(f.minpoly));
        CHECK_MESSAGE(secs / fields.size() < 1.0, "n = " << n << ": " << secs << " s for " << fields.size());
    }
}
