#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <vector>

#include "rbsde/kernels.hpp"
#include "rbsde/random.hpp"

using namespace rbsde;

namespace {

std::vector<double> random_values(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> v(n);
    for (double& x : v) x = rng.uniform(-10.0, 10.0);
    return v;
}

bool bit_equal(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() &&
           (a.empty() ||
            std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
}

}  // namespace

TEST_CASE("scalar and avx2 backends are bit-identical") {
    const kernels::Backend* vec = kernels::avx2();
    if (vec == nullptr) {
        MESSAGE("avx2 backend unavailable; scalar-only build");
        return;
    }
    const kernels::Backend& ref = kernels::scalar();

    for (std::size_t pairs : {0u, 1u, 2u, 3u, 4u, 5u, 7u, 8u, 16u, 31u, 512u}) {
        const std::vector<double> in = random_values(2 * pairs, 11 + pairs);
        const std::vector<double> in2 = random_values(2 * pairs, 77 + pairs);
        std::vector<double> a(pairs), b(pairs);
        ref.pairwise_fold(in.data(), a.data(), pairs);
        vec->pairwise_fold(in.data(), b.data(), pairs);
        CHECK(bit_equal(a, b));

        ref.pairwise_fold_mul(in.data(), in2.data(), a.data(), pairs);
        vec->pairwise_fold_mul(in.data(), in2.data(), b.data(), pairs);
        CHECK(bit_equal(a, b));
    }

    for (std::size_t n : {0u, 1u, 3u, 4u, 9u, 64u, 1000u}) {
        const std::vector<double> x = random_values(n, n + 1);
        const std::vector<double> y = random_values(n, n + 2);
        CHECK(ref.max_abs_diff(x.data(), y.data(), n) ==
              vec->max_abs_diff(x.data(), y.data(), n));

        std::vector<double> a(n), b(n);
        ref.add_scaled(x.data(), y.data(), 1.7, a.data(), n);
        vec->add_scaled(x.data(), y.data(), 1.7, b.data(), n);
        CHECK(bit_equal(a, b));

        std::vector<double> lo(n, -3.0), hi(n, 3.0);
        ref.clamp(x.data(), lo.data(), hi.data(), a.data(), n);
        vec->clamp(x.data(), lo.data(), hi.data(), b.data(), n);
        CHECK(bit_equal(a, b));
    }
}

TEST_CASE("sum matches the pairwise tree") {
    // Independent oracle: explicit recursion over halves of the padded array.
    struct Oracle {
        static double pairwise(const std::vector<double>& v, std::size_t lo,
                               std::size_t n) {
            if (n == 1) return v[lo];
            return pairwise(v, lo, n / 2) + pairwise(v, lo + n / 2, n / 2);
        }
    };
    for (std::size_t n : {1u, 2u, 4u, 8u, 64u, 1024u}) {
        const std::vector<double> v = random_values(n, 5 * n);
        CHECK(kernels::sum(v) == Oracle::pairwise(v, 0, n));
    }
    // Zero padding leaves the value unchanged.
    std::vector<double> v = random_values(13, 99);
    std::vector<double> padded = v;
    padded.resize(16, 0.0);
    CHECK(kernels::sum(v) == Oracle::pairwise(padded, 0, 16));
    CHECK(kernels::sum(std::vector<double>{}) == 0.0);
}

TEST_CASE("dot, sum_squares, max_abs_diff basics") {
    const std::vector<double> a{1.0, 2.0, 3.0};
    const std::vector<double> b{4.0, 5.0, 6.0};
    CHECK(kernels::dot(a, b) == doctest::Approx(32.0));
    CHECK(kernels::sum_squares(b) == doctest::Approx(77.0));
    CHECK(kernels::max_abs_diff(a, b) == 3.0);
    CHECK_THROWS_AS((void)kernels::dot(a, std::vector<double>{1.0}),
                    std::invalid_argument);
}

TEST_CASE("block_sums folds adjacent blocks") {
    std::vector<double> v{1, 2, 3, 4, 5, 6, 7, 8};
    std::vector<double> out(2);
    kernels::block_sums(v, out);
    CHECK(out[0] == 10.0);
    CHECK(out[1] == 26.0);

    std::vector<double> full(1);
    kernels::block_sums(v, full);
    CHECK(full[0] == 36.0);

    std::vector<double> same(8);
    kernels::block_sums(v, same);
    CHECK(same == v);

    std::vector<double> bad(3);
    CHECK_THROWS_AS(kernels::block_sums(v, bad), std::invalid_argument);
}

TEST_CASE("flat averages of equal values are exact") {
    // Doubling-only trees keep repeated values exact at every size.
    for (int m = 0; m <= 14; ++m) {
        std::vector<double> v(std::size_t{1} << m, 0.4);
        const double total = kernels::sum(v);
        CHECK(std::ldexp(total, -m) == 0.4);
    }
}
