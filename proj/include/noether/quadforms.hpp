#ifndef NOETHER_QUADFORMS_HPP
#define NOETHER_QUADFORMS_HPP

#include <gmpxx.h>

#include <cstdint>
#include <vector>

namespace noether::quadforms {

/* a x^2 + b x y + c y^2 */
struct QuadraticForm {
    std::int64_t a = 0, b = 0, c = 0;

    std::int64_t disc() const { return b * b - 4 * a * c; }
    mpz_class eval(mpz_class const & x, mpz_class const & y) const;

    bool operator==(QuadraticForm const &) const = default;
};

/* 2x2 integer matrix acting on column vectors (x, y) */
struct Transform {
    mpz_class m00 = 1, m01 = 0, m10 = 0, m11 = 1;

    Transform operator*(Transform const & o) const;
};

/* f o M, i.e. (x, y) -> f(M (x, y)) */
QuadraticForm apply(QuadraticForm const & f, std::int64_t m00, std::int64_t m01, std::int64_t m10,
                    std::int64_t m11);

/* A cycle of reduced indefinite forms; rho(forms.back()) == forms.front(). */
struct FormCycle {
    std::int64_t disc = 0;
    std::vector<QuadraticForm> forms;

    bool contains(QuadraticForm const & f) const;
};

enum class NormOutcome { Solvable, ProvablyUnsolvable, Unknown };

enum class Obstruction {
    None,
    NonResidue,   // (D|p) = -1: p is inert
    Definite,     // D < 0 and target -p: the norm form is positive definite
    NonPrincipal, // the prime above p lies outside the principal class
};

/*
 * Outcome of N(x + y w) = sign * p over the maximal order of Q(sqrt D), with
 * w = (b0 + sqrt D) / 2 so that N(x + y w) is the principal form.
 */
struct NormDecision {
    NormOutcome outcome = NormOutcome::Unknown;
    int sign = 1;
    std::int64_t disc = 0;
    std::uint64_t p = 0;
    mpz_class x, y;               // witness when Solvable
    Obstruction reason = Obstruction::None;
    QuadraticForm reduced;        // reduced form of (sign p, b, c) when one was built
};

bool is_fundamental_discriminant(std::int64_t D);

/* Fundamental discriminants D != 1 with |D| dividing n, ascending. */
std::vector<std::int64_t> quadratic_subfield_discs(std::uint64_t n);

/* (1, D mod 2, (D mod 2 - D) / 4); throws for non-fundamental D. */
QuadraticForm principal_form(std::int64_t D);

/* Gauss reduction for indefinite forms: one rho step. */
QuadraticForm rho(QuadraticForm const & f, std::int64_t * t_out = nullptr);
bool is_reduced_indefinite(QuadraticForm const & f);
bool is_reduced_definite(QuadraticForm const & f);

/* Reduced representative of f and the transform M with f o M = result. */
QuadraticForm reduce(QuadraticForm const & f, Transform * M = nullptr);

/* Cycle of the reduced forms equivalent to f (D > 0, non-square). */
FormCycle cycle_of(QuadraticForm const & f);

/* Cycle of the principal class; D > 0 fundamental. */
FormCycle principal_cycle(std::int64_t D);

/*
 * Decides N(alpha) = sign * p in the quadratic field of discriminant D.
 * Never returns Unknown. Throws std::invalid_argument when p = 2, p | D,
 * p is not prime, sign is not +-1 or D is not fundamental.
 */
NormDecision solve_norm(std::int64_t D, std::uint64_t p, int sign);

} // namespace noether::quadforms

#endif
