#include "noether/quadforms.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "noether/arith.hpp"

namespace noether::quadforms {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b)
{
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0)))
        --q;
    return q;
}

std::int64_t iabs(std::int64_t v)
{
    return v < 0 ? -v : v;
}

/* the unique b' = -b mod 2|c| in [lo, lo + 2|c|) */
std::int64_t place(std::int64_t b, std::int64_t c, std::int64_t lo)
{
    std::int64_t m = 2 * iabs(c);
    std::int64_t r = ((-b - lo) % m + m) % m;
    return lo + r;
}

std::int64_t isqrt_disc(std::int64_t D)
{
    return static_cast<std::int64_t>(arith::isqrt(static_cast<std::uint64_t>(D)));
}

} // namespace

mpz_class QuadraticForm::eval(mpz_class const & x, mpz_class const & y) const
{
    return mpz_class(static_cast<long>(a)) * x * x + mpz_class(static_cast<long>(b)) * x * y +
           mpz_class(static_cast<long>(c)) * y * y;
}

Transform Transform::operator*(Transform const & o) const
{
    return Transform{m00 * o.m00 + m01 * o.m10, m00 * o.m01 + m01 * o.m11, m10 * o.m00 + m11 * o.m10,
                     m10 * o.m01 + m11 * o.m11};
}

QuadraticForm apply(QuadraticForm const & f, std::int64_t m00, std::int64_t m01, std::int64_t m10,
                    std::int64_t m11)
{
    /* f(m00 x + m01 y, m10 x + m11 y) */
    QuadraticForm g;
    g.a = f.a * m00 * m00 + f.b * m00 * m10 + f.c * m10 * m10;
    g.b = 2 * f.a * m00 * m01 + f.b * (m00 * m11 + m01 * m10) + 2 * f.c * m10 * m11;
    g.c = f.a * m01 * m01 + f.b * m01 * m11 + f.c * m11 * m11;
    return g;
}

bool FormCycle::contains(QuadraticForm const & f) const
{
    return std::find(forms.begin(), forms.end(), f) != forms.end();
}

bool is_fundamental_discriminant(std::int64_t D)
{
    if (D == 0 || D == 1)
        return false;
    std::int64_t r = ((D % 4) + 4) % 4;
    if (r == 1)
        return arith::is_squarefree(static_cast<std::uint64_t>(iabs(D)));
    if (r == 0) {
        std::int64_t m = D / 4;
        std::int64_t mr = ((m % 4) + 4) % 4;
        return (mr == 2 || mr == 3) && arith::is_squarefree(static_cast<std::uint64_t>(iabs(m)));
    }
    return false;
}

std::vector<std::int64_t> quadratic_subfield_discs(std::uint64_t n)
{
    if (n < 3)
        throw std::invalid_argument("quadratic_subfield_discs: n must be at least 3");
    std::vector<std::int64_t> out;
    for (auto m : arith::divisors(n)) {
        if (m == 1)
            continue;
        auto s = static_cast<std::int64_t>(m);
        if (is_fundamental_discriminant(s))
            out.push_back(s);
        if (is_fundamental_discriminant(-s))
            out.push_back(-s);
    }
    std::sort(out.begin(), out.end());
    return out;
}

QuadraticForm principal_form(std::int64_t D)
{
    if (!is_fundamental_discriminant(D))
        throw std::invalid_argument("principal_form: " + std::to_string(D) + " is not fundamental");
    std::int64_t b0 = ((D % 2) + 2) % 2;
    return {1, b0, (b0 - D) / 4};
}

QuadraticForm rho(QuadraticForm const & f, std::int64_t * t_out)
{
    std::int64_t D = f.disc();
    std::int64_t s = isqrt_disc(D);
    std::int64_t c = f.c;
    if (c == 0)
        throw std::domain_error("rho: c = 0 (square discriminant)");
    std::int64_t bp = iabs(c) > s ? place(f.b, c, -iabs(c) + 1) : place(f.b, c, s + 1 - 2 * iabs(c));
    /* b' = 2 c t - b */
    if (t_out)
        *t_out = (bp + f.b) / (2 * c);
    return {c, bp, (bp * bp - D) / (4 * c)};
}

bool is_reduced_indefinite(QuadraticForm const & f)
{
    std::int64_t D = f.disc();
    if (D <= 0)
        return false;
    std::int64_t s = isqrt_disc(D);
    std::int64_t a2 = 2 * iabs(f.a);
    return f.b > 0 && f.b <= s && a2 + f.b >= s + 1 && a2 <= s + f.b;
}

bool is_reduced_definite(QuadraticForm const & f)
{
    if (f.disc() >= 0 || f.a <= 0)
        return false;
    if (!(-f.a < f.b && f.b <= f.a && f.a <= f.c))
        return false;
    return !(f.a == f.c && f.b < 0);
}

namespace {

QuadraticForm reduce_definite(QuadraticForm f, Transform * M)
{
    if (f.a <= 0)
        throw std::invalid_argument("reduce: definite form must have a > 0");
    for (;;) {
        /* b into (-a, a] */
        std::int64_t t = floor_div(f.a - f.b, 2 * f.a);
        if (t != 0) {
            f = apply(f, 1, t, 0, 1);
            if (M)
                *M = *M * Transform{1, t, 0, 1};
        }
        if (f.a > f.c || (f.a == f.c && f.b < 0)) {
            f = apply(f, 0, -1, 1, 0);
            if (M)
                *M = *M * Transform{0, -1, 1, 0};
            continue;
        }
        return f;
    }
}

QuadraticForm reduce_indefinite(QuadraticForm f, Transform * M)
{
    while (!is_reduced_indefinite(f)) {
        std::int64_t t = 0;
        f = rho(f, &t);
        if (M)
            *M = *M * Transform{0, -1, 1, t};
    }
    return f;
}

} // namespace

QuadraticForm reduce(QuadraticForm const & f, Transform * M)
{
    std::int64_t D = f.disc();
    if (D < 0)
        return reduce_definite(f, M);
    if (D == 0 || arith::is_square(D))
        throw std::invalid_argument("reduce: discriminant must be negative or a non-square");
    return reduce_indefinite(f, M);
}

FormCycle cycle_of(QuadraticForm const & f)
{
    FormCycle cyc;
    cyc.disc = f.disc();
    QuadraticForm start = reduce(f);
    QuadraticForm g = start;
    do {
        cyc.forms.push_back(g);
        g = rho(g);
    } while (!(g == start));
    return cyc;
}

FormCycle principal_cycle(std::int64_t D)
{
    if (D <= 0 || arith::is_square(D))
        throw std::invalid_argument("principal_cycle: D must be positive and non-square");
    return cycle_of(principal_form(D));
}

NormDecision solve_norm(std::int64_t D, std::uint64_t p, int sign)
{
    if (sign != 1 && sign != -1)
        throw std::invalid_argument("solve_norm: sign must be +1 or -1");
    if (p == 2 || !arith::is_prime(p))
        throw std::invalid_argument("solve_norm: p must be an odd prime");
    auto ip = static_cast<std::int64_t>(p);
    if (D % ip == 0)
        throw std::invalid_argument("solve_norm: p divides the discriminant");
    QuadraticForm P = principal_form(D);

    NormDecision dec;
    dec.sign = sign;
    dec.disc = D;
    dec.p = p;

    if (arith::jacobi(D, p) == -1) {
        dec.outcome = NormOutcome::ProvablyUnsolvable;
        dec.reason = Obstruction::NonResidue;
        return dec;
    }
    if (D < 0 && sign < 0) {
        dec.outcome = NormOutcome::ProvablyUnsolvable;
        dec.reason = Obstruction::Definite;
        return dec;
    }

    /* b^2 = D (mod 4p) */
    std::int64_t b = static_cast<std::int64_t>(*arith::sqrt_mod_prime(D, p));
    if (((b - D) % 2 + 2) % 2 != 0)
        b = ip - b;
    std::int64_t a = sign * ip;
    QuadraticForm f{a, b, (b * b - D) / (4 * a)};

    Transform M;
    QuadraticForm g = reduce(f, &M);
    dec.reduced = g;

    bool found = false;
    if (D < 0) {
        found = g == P;
    } else {
        QuadraticForm start = g;
        do {
            if (g.a == 1) {
                found = true;
                break;
            }
            std::int64_t t = 0;
            g = rho(g, &t);
            M = M * Transform{0, -1, 1, t};
        } while (!(g == start));
    }

    if (!found) {
        dec.outcome = NormOutcome::ProvablyUnsolvable;
        dec.reason = Obstruction::NonPrincipal;
        return dec;
    }

    /* g = f o M = P o T_k with g.b = P.b + 2k; f(1,0) = P(T_k M^{-1} e1) */
    std::int64_t k = (g.b - P.b) / 2;
    mpz_class u = M.m11, v = -M.m10;
    dec.x = u + k * v;
    dec.y = v;
    if (P.eval(dec.x, dec.y) != a)
        throw std::logic_error("solve_norm: witness failed re-verification");
    dec.outcome = NormOutcome::Solvable;
    return dec;
}

} // namespace noether::quadforms
