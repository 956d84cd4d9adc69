#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "noether/arith.hpp"
#include "noether/kernels.hpp"

using namespace noether;
using namespace noether::kernels;

namespace {

struct Batch {
    std::size_t degree, count;
    std::uint32_t modulus;
    std::vector<std::uint32_t> coeffs, roots;
};

Batch random_batch(std::mt19937_64 & rng, std::size_t degree, std::size_t count, std::uint32_t modulus)
{
    Batch b{degree, count, modulus, {}, {}};
    std::uniform_int_distribution<std::uint32_t> any(0, modulus - 1);
    b.coeffs.resize(degree * count);
    for (auto & c : b.coeffs)
        c = any(rng);
    b.roots.resize(degree);
    for (auto & r : b.roots)
        r = any(rng);
    return b;
}

std::vector<std::uint32_t> run(Batch const & b, Isa isa)
{
    std::vector<std::uint32_t> out(b.count);
    norm_residues(b.coeffs, b.degree, b.count, b.roots, b.modulus, out, isa);
    return out;
}

/* slowest possible reference: one candidate at a time, 128-bit products */
std::uint32_t reference(Batch const & b, std::size_t c)
{
    unsigned __int128 acc = 1;
    for (auto r : b.roots) {
        unsigned __int128 v = 0;
        for (std::size_t k = b.degree; k-- > 0;)
            v = (v * r + b.coeffs[k * b.count + c]) % b.modulus;
        acc = acc * v % b.modulus;
    }
    return static_cast<std::uint32_t>(acc);
}

} // namespace

TEST_CASE("scalar kernel matches the reference")
{
    std::mt19937_64 rng(7);
    for (std::uint32_t m : {3u, 97u, 65537u, 16777259u, max_kernel_modulus - 39}) {
        auto b = random_batch(rng, 5, 37, m);
        auto out = run(b, Isa::Scalar);
        for (std::size_t c = 0; c < b.count; ++c)
            REQUIRE(out[c] == reference(b, c));
    }
}

TEST_CASE("dispatch")
{
    CHECK(isa_supported(Isa::Scalar));
    CHECK(isa_name(Isa::Scalar) == "scalar");
    CHECK(isa_name(Isa::Avx2) == "avx2");
    MESSAGE("active kernel: " << isa_name(active_isa()));
    std::vector<std::uint32_t> c(4), out(1), roots{1};
    CHECK_THROWS_AS(norm_residues(c, 4, 2, roots, 97, out), std::invalid_argument);
    CHECK_THROWS_AS(norm_residues(c, 1, 1, roots, max_kernel_modulus, out), std::invalid_argument);
}

TEST_CASE("AVX2 kernel equals the scalar kernel")
{
    if (!isa_supported(Isa::Avx2)) {
        MESSAGE("AVX2 not available; equivalence not exercised");
        return;
    }
    std::mt19937_64 rng(99);
    std::vector<std::uint32_t> moduli{3, 5, 7, 251, 65521, 1000003, 16777213};
    // the largest primes the kernel accepts stress the rounding fix-ups
    for (std::uint32_t m = max_kernel_modulus - 1; moduli.size() < 12; m -= 2)
        if (arith::is_prime(m))
            moduli.push_back(m);
    for (auto m : moduli)
        for (std::size_t degree : {1u, 2u, 4u, 7u, 16u, 24u})
            for (std::size_t count : {1u, 3u, 4u, 5u, 64u, 1027u}) {
                auto b = random_batch(rng, degree, count, m);
                REQUIRE_MESSAGE(run(b, Isa::Avx2) == run(b, Isa::Scalar),
                                "m=" << m << " degree=" << degree << " count=" << count);
            }
    // all-maximal entries
    Batch b{8, 16, moduli.back(), std::vector<std::uint32_t>(8 * 16, moduli.back() - 1),
            std::vector<std::uint32_t>(8, moduli.back() - 1)};
    CHECK(run(b, Isa::Avx2) == run(b, Isa::Scalar));
}
