#include "noether/poly.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace noether::poly {

void normalize(ZPoly & f)
{
    while (!f.empty() && f.back() == 0)
        f.pop_back();
}

ZPoly from_ints(std::vector<long> const & c)
{
    ZPoly f(c.begin(), c.end());
    normalize(f);
    return f;
}

int degree(ZPoly const & f)
{
    return static_cast<int>(f.size()) - 1;
}

ZPoly add(ZPoly const & f, ZPoly const & g)
{
    ZPoly r(std::max(f.size(), g.size()));
    for (std::size_t i = 0; i < f.size(); ++i)
        r[i] += f[i];
    for (std::size_t i = 0; i < g.size(); ++i)
        r[i] += g[i];
    normalize(r);
    return r;
}

ZPoly sub(ZPoly const & f, ZPoly const & g)
{
    ZPoly r(std::max(f.size(), g.size()));
    for (std::size_t i = 0; i < f.size(); ++i)
        r[i] += f[i];
    for (std::size_t i = 0; i < g.size(); ++i)
        r[i] -= g[i];
    normalize(r);
    return r;
}

ZPoly mul(ZPoly const & f, ZPoly const & g)
{
    if (f.empty() || g.empty())
        return {};
    ZPoly r(f.size() + g.size() - 1);
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (f[i] == 0)
            continue;
        for (std::size_t j = 0; j < g.size(); ++j)
            r[i + j] += f[i] * g[j];
    }
    normalize(r);
    return r;
}

ZPoly derivative(ZPoly const & f)
{
    if (f.size() <= 1)
        return {};
    ZPoly r(f.size() - 1);
    for (std::size_t i = 1; i < f.size(); ++i)
        r[i - 1] = f[i] * static_cast<unsigned long>(i);
    normalize(r);
    return r;
}

ZPoly rem_monic(ZPoly const & f, ZPoly const & g)
{
    if (g.empty() || g.back() != 1)
        throw std::invalid_argument("rem_monic: divisor must be monic");
    ZPoly r = f;
    normalize(r);
    std::size_t dg = g.size() - 1;
    while (r.size() > dg) {
        mpz_class c = r.back();
        std::size_t shift = r.size() - 1 - dg;
        for (std::size_t i = 0; i < dg; ++i)
            r[shift + i] -= c * g[i];
        r.pop_back();
        normalize(r);
    }
    return r;
}

ZPoly div_exact_monic(ZPoly const & f, ZPoly const & g)
{
    if (g.empty() || g.back() != 1)
        throw std::invalid_argument("div_exact_monic: divisor must be monic");
    ZPoly r = f;
    normalize(r);
    std::size_t dg = g.size() - 1;
    if (r.size() < g.size()) {
        if (!r.empty())
            throw std::domain_error("div_exact_monic: nonzero remainder");
        return {};
    }
    ZPoly q(r.size() - dg);
    while (r.size() > dg) {
        mpz_class c = r.back();
        std::size_t shift = r.size() - 1 - dg;
        q[shift] = c;
        for (std::size_t i = 0; i <= dg; ++i)
            r[shift + i] -= c * g[i];
        normalize(r);
        if (r.size() > shift + dg + 1)
            throw std::logic_error("div_exact_monic: cancellation failed");
    }
    if (!r.empty())
        throw std::domain_error("div_exact_monic: nonzero remainder");
    normalize(q);
    return q;
}

mpz_class evaluate(ZPoly const & f, mpz_class const & x)
{
    mpz_class r = 0;
    for (std::size_t i = f.size(); i-- > 0;)
        r = r * x + f[i];
    return r;
}

namespace {

mpz_class content(ZPoly const & f)
{
    mpz_class c = 0;
    for (auto const & a : f)
        mpz_gcd(c.get_mpz_t(), c.get_mpz_t(), a.get_mpz_t());
    return c;
}

void divide_exact(ZPoly & f, mpz_class const & c)
{
    for (auto & a : f)
        mpz_divexact(a.get_mpz_t(), a.get_mpz_t(), c.get_mpz_t());
}

mpz_class pow(mpz_class const & b, unsigned long e)
{
    mpz_class r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
    return r;
}

/* lc(B)^{deg A - deg B + 1} A mod B */
ZPoly pseudo_remainder(ZPoly A, ZPoly const & B)
{
    std::size_t db = B.size() - 1;
    mpz_class const & lb = B.back();
    int e = degree(A) - degree(B) + 1;
    while (!A.empty() && A.size() > db) {
        mpz_class la = A.back();
        std::size_t shift = A.size() - 1 - db;
        for (auto & a : A)
            a *= lb;
        for (std::size_t i = 0; i <= db; ++i)
            A[shift + i] -= la * B[i];
        normalize(A);
        --e;
    }
    if (e > 0) {
        mpz_class m = pow(lb, static_cast<unsigned long>(e));
        for (auto & a : A)
            a *= m;
    }
    return A;
}

} // namespace

mpz_class resultant(ZPoly const & f, ZPoly const & g)
{
    ZPoly A = f, B = g;
    normalize(A);
    normalize(B);
    if (A.empty() || B.empty())
        return 0;
    if (degree(A) == 0 && degree(B) == 0)
        return 1;
    if (degree(B) == 0)
        return pow(B[0], static_cast<unsigned long>(degree(A)));
    if (degree(A) == 0)
        return pow(A[0], static_cast<unsigned long>(degree(B)));

    mpz_class a = content(A), b = content(B);
    divide_exact(A, a);
    divide_exact(B, b);
    mpz_class t = pow(a, static_cast<unsigned long>(degree(B))) *
                  pow(b, static_cast<unsigned long>(degree(A)));
    int s = 1;
    if (degree(A) < degree(B)) {
        std::swap(A, B);
        if (degree(A) % 2 == 1 && degree(B) % 2 == 1)
            s = -s;
    }
    mpz_class gg = 1, h = 1;
    for (;;) {
        int delta = degree(A) - degree(B);
        if (degree(A) % 2 == 1 && degree(B) % 2 == 1)
            s = -s;
        ZPoly R = pseudo_remainder(A, B);
        A = std::move(B);
        mpz_class den = gg * pow(h, static_cast<unsigned long>(delta));
        divide_exact(R, den);
        B = std::move(R);
        gg = A.back();
        if (delta >= 1) {
            mpz_class num = pow(gg, static_cast<unsigned long>(delta));
            mpz_class hd = pow(h, static_cast<unsigned long>(delta - 1));
            mpz_divexact(h.get_mpz_t(), num.get_mpz_t(), hd.get_mpz_t());
        }
        if (B.empty())
            return 0;
        if (degree(B) == 0) {
            auto dA = static_cast<unsigned long>(degree(A));
            mpz_class num = pow(B[0], dA);
            mpz_class hd = pow(h, dA - 1);
            mpz_class r;
            mpz_divexact(r.get_mpz_t(), num.get_mpz_t(), hd.get_mpz_t());
            return s * t * r;
        }
    }
}

mpz_class discriminant(ZPoly const & f)
{
    ZPoly A = f;
    normalize(A);
    int d = degree(A);
    if (d < 1)
        throw std::invalid_argument("discriminant: degree must be positive");
    if (d == 1)
        return 1;
    mpz_class r = resultant(A, derivative(A));
    mpz_class q;
    mpz_divexact(q.get_mpz_t(), r.get_mpz_t(), A.back().get_mpz_t());
    if ((static_cast<long>(d) * (d - 1) / 2) % 2 == 1)
        q = -q;
    return q;
}

bool is_squarefree(ZPoly const & f)
{
    ZPoly A = f;
    normalize(A);
    if (degree(A) < 1)
        return false;
    return discriminant(A) != 0;
}

std::string to_string(ZPoly const & f)
{
    if (f.empty())
        return "0";
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = f.size(); i-- > 0;) {
        mpz_class c = f[i];
        if (c == 0)
            continue;
        bool neg = c < 0;
        mpz_class a = neg ? mpz_class(-c) : c;
        if (first)
            os << (neg ? "-" : "");
        else
            os << (neg ? " - " : " + ");
        if (i == 0 || a != 1)
            os << a.get_str();
        if (i >= 1)
            os << "x";
        if (i >= 2)
            os << "^" << i;
        first = false;
    }
    return os.str();
}

} // namespace noether::poly
