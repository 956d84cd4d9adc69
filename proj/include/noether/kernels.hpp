#ifndef NOETHER_KERNELS_HPP
#define NOETHER_KERNELS_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace noether::kernels {

/*
 * Batched norm residues for the certificate search.
 *
 * A batch holds `count` candidate polynomials a_c(x) of degree < `degree`,
 * stored coefficient-major: coeffs[k * count + c] is coefficient k of
 * candidate c, reduced into [0, modulus). roots are the roots of the field
 * polynomial modulo the prime `modulus`. On return
 *
 *     out[c] = prod_r a_c(r) mod modulus.
 *
 * modulus must be an odd prime below 2^25 so that every product fits
 * exactly in a double.
 */
constexpr std::uint32_t max_kernel_modulus = 1u << 25;

enum class Isa { Scalar, Avx2 };

void norm_residues_scalar(std::span<const std::uint32_t> coeffs, std::size_t degree, std::size_t count,
                          std::span<const std::uint32_t> roots, std::uint32_t modulus,
                          std::span<std::uint32_t> out);

#if defined(__x86_64__)
void norm_residues_avx2(std::span<const std::uint32_t> coeffs, std::size_t degree, std::size_t count,
                        std::span<const std::uint32_t> roots, std::uint32_t modulus,
                        std::span<std::uint32_t> out);
#endif

/* Best variant the CPU supports; NOETHER_KERNEL=scalar forces the reference. */
Isa active_isa();
std::string_view isa_name(Isa isa);
bool isa_supported(Isa isa);

void norm_residues(std::span<const std::uint32_t> coeffs, std::size_t degree, std::size_t count,
                   std::span<const std::uint32_t> roots, std::uint32_t modulus,
                   std::span<std::uint32_t> out, Isa isa = active_isa());

} // namespace noether::kernels

#endif
