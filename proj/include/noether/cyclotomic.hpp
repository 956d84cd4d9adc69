#ifndef NOETHER_CYCLOTOMIC_HPP
#define NOETHER_CYCLOTOMIC_HPP

#include <gmpxx.h>

#include <cstdint>
#include <span>
#include <vector>

#include "noether/abelian.hpp"
#include "noether/poly.hpp"

namespace noether::cyclotomic {

using poly::ZPoly;

/* c_n(j) = sum of zeta^j over the primitive n-th roots zeta */
std::int64_t ramanujan_sum(std::uint64_t n, std::int64_t j);

/* Phi_n */
ZPoly cyclotomic_polynomial(std::uint64_t n);

/*
 * A class in Z[x]/(x^n - 1); the represented number is its value at
 * zeta_n = exp(2 pi i / n).
 */
class CycElement
{
    std::uint64_t n_;
    std::vector<mpz_class> c_;

  public:
    explicit CycElement(std::uint64_t n);
    CycElement(std::uint64_t n, std::vector<mpz_class> coeffs);

    static CycElement monomial(std::uint64_t n, std::uint64_t k, mpz_class const & c = 1);
    static CycElement constant(std::uint64_t n, mpz_class const & c);

    std::uint64_t modulus() const { return n_; }
    std::vector<mpz_class> const & coeffs() const { return c_; }
    mpz_class const & operator[](std::size_t i) const { return c_[i]; }

    CycElement & operator+=(CycElement const & o);
    CycElement & operator-=(CycElement const & o);
    CycElement & operator*=(mpz_class const & s);
    friend CycElement operator+(CycElement a, CycElement const & b) { return a += b; }
    friend CycElement operator-(CycElement a, CycElement const & b) { return a -= b; }
    friend CycElement operator*(CycElement const & a, CycElement const & b);
    friend CycElement operator*(CycElement a, mpz_class const & s) { return a *= s; }

    /* sigma_a: x^j -> x^{aj}, a coprime to n */
    CycElement galois(std::uint64_t a) const;

    /* Tr_{Q(zeta_n)/Q} of the represented value: sum_j r_j c_n(j) */
    mpz_class trace() const;

    /* represented value is zero, i.e. Phi_n divides the representative */
    bool vanishes() const;

    bool operator==(CycElement const &) const = default;
};

/*
 * sum_k shape[k-1] * eta^(k), eta^(k) = sum_{h in H} zeta_n^{k h}.
 * Invariant under sigma_a for a in H.
 */
CycElement period_element(std::uint64_t n, abelian::Subgroup const & H,
                          std::span<const int> shape);

struct SubfieldDescriptor {
    std::uint64_t n = 0;
    abelian::Subgroup subgroup;
    std::uint64_t degree = 0;
    ZPoly minpoly;
    mpz_class poly_disc;
    std::vector<int> shape; // generator used, see period_element
};

/*
 * Minimal polynomial of a primitive element of the fixed field of H,
 * computed exactly from the power sums of its conjugates. Generators are
 * tried from shape_schedule(max(degree, 2)); for n not squarefree the
 * schedule runs over the periods of zeta_f, f the conductor of the field,
 * followed by the periods eta^(e) with e | n. Throws std::runtime_error
 * when none gives a squarefree polynomial.
 */
SubfieldDescriptor subfield_minpoly(std::uint64_t n, abelian::Subgroup const & H);

/* One descriptor per subgroup of index <= max_degree, sorted by degree, then minpoly. */
std::vector<SubfieldDescriptor> subfields(std::uint64_t n, std::uint64_t max_degree);

/* The shape schedule tried by subfield_minpoly, in order. */
std::vector<std::vector<int>> shape_schedule(std::size_t max_length);

} // namespace noether::cyclotomic

#endif
