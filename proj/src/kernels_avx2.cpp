// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include "noether/kernels.hpp"

#include <immintrin.h>

#include <stdexcept>

namespace noether::kernels {

namespace {

/* a * b mod m for doubles holding integers in [0, m), m < 2^25 */
inline __m256d mulmod_pd(__m256d a, __m256d b, __m256d m, __m256d minv)
{
    __m256d x = _mm256_mul_pd(a, b);
    __m256d q = _mm256_floor_pd(_mm256_mul_pd(x, minv));
    __m256d r = _mm256_fnmadd_pd(q, m, x);
    /* q may be off by one either way */
    __m256d zero = _mm256_setzero_pd();
    r = _mm256_add_pd(r, _mm256_and_pd(_mm256_cmp_pd(r, zero, _CMP_LT_OQ), m));
    r = _mm256_sub_pd(r, _mm256_and_pd(_mm256_cmp_pd(r, m, _CMP_GE_OQ), m));
    return r;
}

inline __m256d load4(std::uint32_t const * p)
{
    return _mm256_cvtepi32_pd(_mm_loadu_si128(reinterpret_cast<__m128i const *>(p)));
}

} // namespace

void norm_residues_avx2(std::span<const std::uint32_t> coeffs, std::size_t degree, std::size_t count,
                        std::span<const std::uint32_t> roots, std::uint32_t modulus,
                        std::span<std::uint32_t> out)
{
    if (coeffs.size() < degree * count || out.size() < count)
        throw std::invalid_argument("norm_residues: buffer too small");
    if (modulus < 3 || modulus >= max_kernel_modulus)
        throw std::invalid_argument("norm_residues: modulus out of range");

    double const md = modulus;
    __m256d const m = _mm256_set1_pd(md);
    __m256d const minv = _mm256_set1_pd(1.0 / md);
    std::size_t c = 0;
    for (; c + 4 <= count; c += 4) {
        __m256d acc = _mm256_set1_pd(1.0);
        for (std::uint32_t r : roots) {
            __m256d rv = _mm256_set1_pd(static_cast<double>(r));
            __m256d v = _mm256_setzero_pd();
            for (std::size_t k = degree; k-- > 0;) {
                v = mulmod_pd(v, rv, m, minv);
                v = _mm256_add_pd(v, load4(coeffs.data() + k * count + c));
                v = _mm256_sub_pd(v, _mm256_and_pd(_mm256_cmp_pd(v, m, _CMP_GE_OQ), m));
            }
            acc = mulmod_pd(acc, v, m, minv);
        }
        __m128i res = _mm256_cvtpd_epi32(acc);
        _mm_storeu_si128(reinterpret_cast<__m128i *>(out.data() + c), res);
    }
    /* tail */
    std::uint64_t const mu = modulus;
    for (; c < count; ++c) {
        std::uint64_t acc = 1;
        for (std::uint32_t r : roots) {
            std::uint64_t v = 0;
            for (std::size_t k = degree; k-- > 0;)
                v = (v * r + coeffs[k * count + c]) % mu;
            acc = acc * v % mu;
        }
        out[c] = static_cast<std::uint32_t>(acc);
    }
}

} // namespace noether::kernels
