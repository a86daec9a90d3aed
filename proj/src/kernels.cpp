#include "rbsde/kernels.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <stdexcept>
#include <vector>

namespace rbsde::kernels {

namespace {

void fold_scalar(const double* in, double* out, std::size_t pairs) {
    for (std::size_t i = 0; i < pairs; ++i) {
        out[i] = in[2 * i] + in[2 * i + 1];
    }
}

void fold_mul_scalar(const double* a, const double* b, double* out,
                     std::size_t pairs) {
    for (std::size_t i = 0; i < pairs; ++i) {
        out[i] = a[2 * i] * b[2 * i] + a[2 * i + 1] * b[2 * i + 1];
    }
}

double max_abs_diff_scalar(const double* a, const double* b, std::size_t n) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        m = std::max(m, std::fabs(a[i] - b[i]));
    }
    return m;
}

void add_scaled_scalar(const double* a, const double* b, double s, double* out,
                       std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = a[i] + s * b[i];
    }
}

void clamp_scalar(const double* x, const double* lo, const double* hi,
                  double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = std::min(std::max(x[i], lo[i]), hi[i]);
    }
}

const Backend kScalar{"scalar",       fold_scalar,       fold_mul_scalar,
                      max_abs_diff_scalar, add_scaled_scalar, clamp_scalar};

const Backend* pick_backend() {
    if (const char* env = std::getenv("RBSDE_KERNELS")) {
        if (std::strcmp(env, "scalar") == 0) return &kScalar;
    }
    if (const Backend* b = avx2()) return b;
    return &kScalar;
}

thread_local std::vector<double> g_scratch_a;
thread_local std::vector<double> g_scratch_b;

// Folds `buf` (length n, power of two) down to one element, in place.
double cascade(double* buf, std::size_t n, const Backend& b) {
    while (n > 1) {
        b.pairwise_fold(buf, buf, n / 2);
        n /= 2;
    }
    return buf[0];
}

std::size_t pow2_at_least(std::size_t n) { return std::bit_ceil(n); }

}  // namespace

const Backend& scalar() { return kScalar; }

const Backend& active() {
    static const Backend* chosen = pick_backend();
    return *chosen;
}

double sum(std::span<const double> v) {
    const std::size_t n = v.size();
    if (n == 0) return 0.0;
    if (n == 1) return v[0];
    const std::size_t m = pow2_at_least(n);
    g_scratch_a.assign(m, 0.0);
    std::copy(v.begin(), v.end(), g_scratch_a.begin());
    return cascade(g_scratch_a.data(), m, active());
}

double dot(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
    const std::size_t n = a.size();
    if (n == 0) return 0.0;
    if (n == 1) return a[0] * b[0];
    const Backend& k = active();
    const std::size_t m = pow2_at_least(n);
    if (n == m) {
        g_scratch_a.resize(m / 2);
        k.pairwise_fold_mul(a.data(), b.data(), g_scratch_a.data(), m / 2);
        return cascade(g_scratch_a.data(), m / 2, k);
    }
    g_scratch_a.assign(m, 0.0);
    g_scratch_b.assign(m, 0.0);
    std::copy(a.begin(), a.end(), g_scratch_a.begin());
    std::copy(b.begin(), b.end(), g_scratch_b.begin());
    k.pairwise_fold_mul(g_scratch_a.data(), g_scratch_b.data(),
                        g_scratch_a.data(), m / 2);
    return cascade(g_scratch_a.data(), m / 2, k);
}

double sum_squares(std::span<const double> v) { return dot(v, v); }

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw std::invalid_argument("max_abs_diff: size mismatch");
    return active().max_abs_diff(a.data(), b.data(), a.size());
}

void block_sums(std::span<const double> vals, std::span<double> out) {
    const std::size_t n = vals.size();
    const std::size_t blocks = out.size();
    if (n == 0 || blocks == 0 || !std::has_single_bit(n) ||
        !std::has_single_bit(blocks) || blocks > n) {
        throw std::invalid_argument("block_sums: sizes must be powers of two");
    }
    if (blocks == n) {
        std::copy(vals.begin(), vals.end(), out.begin());
        return;
    }
    const Backend& k = active();
    g_scratch_a.resize(n / 2);
    k.pairwise_fold(vals.data(), g_scratch_a.data(), n / 2);
    std::size_t cur = n / 2;
    while (cur > blocks) {
        k.pairwise_fold(g_scratch_a.data(), g_scratch_a.data(), cur / 2);
        cur /= 2;
    }
    std::copy_n(g_scratch_a.begin(), blocks, out.begin());
}

}  // namespace rbsde::kernels
