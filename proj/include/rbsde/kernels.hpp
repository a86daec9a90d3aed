#pragma once

#include <cstddef>
#include <span>

namespace rbsde::kernels {

/**
 * Data-parallel primitives used by the path-space reductions.
 *
 * Every reduction is defined as a balanced binary tree of adjacent pairs
 * (out[i] = in[2i] + in[2i+1], repeated), so the scalar and SIMD backends
 * produce bit-identical results: each output element has exactly one
 * rounding sequence, independent of vector width. Floating-point
 * contraction must stay disabled (see top-level CMakeLists).
 */
struct Backend {
    const char* name;

    // out[i] = in[2*i] + in[2*i+1], i < pairs
    void (*pairwise_fold)(const double* in, double* out, std::size_t pairs);

    // out[i] = a[2*i]*b[2*i] + a[2*i+1]*b[2*i+1], i < pairs (mul then add, no fma)
    void (*pairwise_fold_mul)(const double* a, const double* b, double* out,
                              std::size_t pairs);

    // max_i |a[i] - b[i]|; 0 for n == 0
    double (*max_abs_diff)(const double* a, const double* b, std::size_t n);

    // out[i] = a[i] + s * b[i]
    void (*add_scaled)(const double* a, const double* b, double s, double* out,
                       std::size_t n);

    // out[i] = min(max(x[i], lo[i]), hi[i])
    void (*clamp)(const double* x, const double* lo, const double* hi,
                  double* out, std::size_t n);
};

const Backend& scalar();

/// AVX2 backend, or nullptr when the CPU (or build) does not support it.
const Backend* avx2();

/// Backend picked at startup; RBSDE_KERNELS=scalar forces the reference path.
const Backend& active();

// --- convenience wrappers over active(), canonical pairwise-tree semantics ---

/// Sum via the pairwise tree (inputs conceptually zero-padded to a power of two).
double sum(std::span<const double> v);

/// Dot product: elementwise products folded by the same pairwise tree.
double dot(std::span<const double> a, std::span<const double> b);

/// Sum of squares, same tree as dot(v, v).
double sum_squares(std::span<const double> v);

double max_abs_diff(std::span<const double> a, std::span<const double> b);

/**
 * Sums of adjacent blocks: `vals` has power-of-two size 2^m, the result has
 * 2^k entries (k <= m), entry p holding the pairwise-tree sum of block p.
 */
void block_sums(std::span<const double> vals, std::span<double> out);

}  // namespace rbsde::kernels
