#include "noether/kernels.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace noether::kernels {

namespace {

void check_shapes(std::span<const std::uint32_t> coeffs, std::size_t degree, std::size_t count,
                  std::uint32_t modulus, std::span<std::uint32_t> out)
{
    if (coeffs.size() < degree * count || out.size() < count)
        throw std::invalid_argument("norm_residues: buffer too small");
    if (modulus < 3 || modulus >= max_kernel_modulus)
        throw std::invalid_argument("norm_residues: modulus out of range");
}

} // namespace

void norm_residues_scalar(std::span<const std::uint32_t> coeffs, std::size_t degree, std::size_t count,
                          std::span<const std::uint32_t> roots, std::uint32_t modulus,
                          std::span<std::uint32_t> out)
{
    check_shapes(coeffs, degree, count, modulus, out);
    std::uint64_t m = modulus;
    for (std::size_t c = 0; c < count; ++c) {
        std::uint64_t acc = 1;
        for (std::uint32_t r : roots) {
            std::uint64_t v = 0;
            for (std::size_t k = degree; k-- > 0;)
                v = (v * r + coeffs[k * count + c]) % m;
            acc = acc * v % m;
        }
        out[c] = static_cast<std::uint32_t>(acc);
    }
}

bool isa_supported(Isa isa)
{
    switch (isa) {
    case Isa::Scalar:
        return true;
    case Isa::Avx2:
#if defined(__x86_64__)
        return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
        return false;
#endif
    }
    return false;
}

Isa active_isa()
{
    static Isa const isa = [] {
        char const * env = std::getenv("NOETHER_KERNEL");
        if (env && std::string(env) == "scalar")
            return Isa::Scalar;
        return isa_supported(Isa::Avx2) ? Isa::Avx2 : Isa::Scalar;
    }();
    return isa;
}

std::string_view isa_name(Isa isa)
{
    return isa == Isa::Avx2 ? "avx2" : "scalar";
}

void norm_residues(std::span<const std::uint32_t> coeffs, std::size_t degree, std::size_t count,
                   std::span<const std::uint32_t> roots, std::uint32_t modulus,
                   std::span<std::uint32_t> out, Isa isa)
{
#if defined(__x86_64__)
    if (isa == Isa::Avx2 && isa_supported(Isa::Avx2)) {
        norm_residues_avx2(coeffs, degree, count, roots, modulus, out);
        return;
    }
#endif
    (void)isa;
    norm_residues_scalar(coeffs, degree, count, roots, modulus, out);
}

} // namespace noether::kernels
