#ifndef NOETHER_POLY_HPP
#define NOETHER_POLY_HPP

#include <gmpxx.h>

#include <string>
#include <vector>

namespace noether::poly {

/*
 * Dense integer polynomial, coefficient i multiplies x^i. The zero
 * polynomial is the empty vector; trailing zeros are always trimmed.
 */
using ZPoly = std::vector<mpz_class>;

void normalize(ZPoly & f);
ZPoly from_ints(std::vector<long> const & c);

/* -1 for the zero polynomial */
int degree(ZPoly const & f);

ZPoly add(ZPoly const & f, ZPoly const & g);
ZPoly sub(ZPoly const & f, ZPoly const & g);
ZPoly mul(ZPoly const & f, ZPoly const & g);
ZPoly derivative(ZPoly const & f);

/* Remainder of f modulo a monic g. */
ZPoly rem_monic(ZPoly const & f, ZPoly const & g);

/* Exact quotient f / g for monic g dividing f; throws if not exact. */
ZPoly div_exact_monic(ZPoly const & f, ZPoly const & g);

mpz_class evaluate(ZPoly const & f, mpz_class const & x);

/*
 * Res(f, g) by the subresultant pseudo-remainder sequence; exact. With f
 * monic of degree d this is the product of g over the roots of f.
 */
mpz_class resultant(ZPoly const & f, ZPoly const & g);

/* (-1)^{d(d-1)/2} Res(f, f') / lc(f) */
mpz_class discriminant(ZPoly const & f);

/* gcd(f, f') is constant, i.e. discriminant != 0 (f non-constant) */
bool is_squarefree(ZPoly const & f);

/* "x^2 + x - 1" */
std::string to_string(ZPoly const & f);

} // namespace noether::poly

#endif
