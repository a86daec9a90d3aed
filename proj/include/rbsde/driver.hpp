#pragma once

#include <cstddef>
#include <vector>

#include "rbsde/tree.hpp"

namespace rbsde {

/**
 * Generator catalog. `lip_yz` bounds the Lipschitz constant in (y, z) for the
 * sum form |f - f'| <= L1 (|dy| + |dz|) + L2 |dk|; `lip_k` bounds it in the
 * reflection argument.
 */
struct DriverSpec {
    enum class Kind { zero, constant, affine, bounded_nonlinear };

    Kind kind = Kind::zero;
    std::vector<double> params;
    double lip_yz = 0.0;  // L1
    double lip_k = 0.0;   // L2

    static DriverSpec zero();
    static DriverSpec constant(double c);
    /// a + b_y*y + b_z*z + b_k*k
    static DriverSpec affine(double a, double b_y, double b_z, double b_k);
    /// scale * tanh(y + z + k)
    static DriverSpec bounded_nonlinear(double scale);

    double operator()(double t, double y, double z, double k) const;

    /// Declared constants must dominate the closed-form ones per kind.
    void validate() const;

    /// True when the value never depends on the reflection argument.
    bool reflection_free() const;

};

/// Terminal-value catalog; evaluated per path from the Brownian values.
struct TerminalSpec {
    enum class Kind { constant, identity, affine, clamp, sinusoid, running_max };

    Kind kind = Kind::constant;
    std::vector<double> params;

    static TerminalSpec constant(double c);
    /// W_T
    static TerminalSpec identity();
    /// a + b*W_T
    static TerminalSpec affine(double a, double b);
    /// clamp(W_T, lo, hi)
    static TerminalSpec clamp(double lo, double hi);
    /// a + b*sin(c*W_T)
    static TerminalSpec sinusoid(double a, double b, double c);
    /// a + b*max_k W_k
    static TerminalSpec running_max(double a, double b);

    double eval(const PathTree& tree, std::size_t omega) const;

};

}  // namespace rbsde
