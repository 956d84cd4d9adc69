#ifndef NOETHER_ARITH_HPP
#define NOETHER_ARITH_HPP

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace noether::arith {

/* Canonical factorization: primes strictly increasing, product equals value. */
struct Factorization {
    std::uint64_t value = 1;
    std::vector<std::pair<std::uint64_t, unsigned>> factors;

    std::uint64_t product() const;
    bool operator==(Factorization const &) const = default;
};

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m);

/* floor(sqrt(n)) */
std::uint64_t isqrt(std::uint64_t n);

/* Deterministic Miller-Rabin, exact for every 64-bit input. */
bool is_prime(std::uint64_t n);

/* n = 1 yields an empty factor list. Throws std::invalid_argument on n = 0. */
Factorization factor(std::uint64_t n);

bool is_squarefree(std::uint64_t n);
bool is_square(std::int64_t n);

/* Jacobi symbol (a|n) for odd n >= 1. */
int jacobi(std::int64_t a, std::uint64_t n);

/*
 * Some r in [0, p) with r^2 = a (mod p), or nullopt when a is a non-residue.
 * Tonelli-Shanks; the root returned is deterministic. p = 2 is accepted.
 * Throws std::invalid_argument if p is not prime.
 */
std::optional<std::uint64_t> sqrt_mod_prime(std::int64_t a, std::uint64_t p);

std::uint64_t euler_phi(std::uint64_t n);
int moebius(std::uint64_t n);

/* Sorted ascending. */
std::vector<std::uint64_t> divisors(std::uint64_t n);

/* Primes p with lo <= p <= hi, ascending. */
std::vector<std::uint64_t> primes_between(std::uint64_t lo, std::uint64_t hi);

/* Multiplicative order of a modulo n; a must be a unit. */
std::uint64_t multiplicative_order(std::uint64_t a, std::uint64_t n);

} // namespace noether::arith

#endif
