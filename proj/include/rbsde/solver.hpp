#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "rbsde/driver.hpp"
#include "rbsde/grid.hpp"
#include "rbsde/skorohod.hpp"
#include "rbsde/tree.hpp"

namespace rbsde {

/// Validated problem data: tree, boundaries, generator, terminal values.
struct Scenario {
    PathTree tree;
    BarrierPair barriers;
    BarrierPair barriers_reversed;
    DriverSpec driver;
    TerminalSpec terminal;
    std::vector<double> terminal_values;  // per path

    /// Same scenario with replaced (revalidated) terminal values.
    Scenario with_terminal_values(std::vector<double> values) const;
};

Scenario validate_scenario(PathTree tree, BarrierPair barriers,
                           DriverSpec driver, TerminalSpec terminal);

/**
 * Candidate solution on the tree. The regulators stored here are adapted
 * (conditional images of the raw reflection pushes). Solver outputs carry the
 * generating sweep's raw reflection data, which certifies the flat-off
 * conditions exactly.
 */
struct SolutionQuad {
    TimeGrid grid;
    AdaptedProcess y;        // depth N
    AdaptedProcess z;        // depth N-1
    AdaptedProcess k_lower;  // depth N, nondecreasing, 0 at the root
    AdaptedProcess k_upper;

    struct RawParts {
        RawProcess reflected;     // pathwise reflected remainder, in barriers
        RawProcess push_lower;    // raw cumulative lower regulator
        RawProcess push_upper;
    };
    std::shared_ptr<const RawParts> raw;  // null for hand-built quads
};

SolutionQuad zero_quad(const PathTree& tree);

/// Weighted-norm configuration and stopping rule of the fixed-point solve.
struct PicardConfig {
    double alpha = 5.0;        // exponential time weight
    double beta = 1.0;         // weight of the regulator block (> 0)
    double gamma1 = 1.0;       // Young parameters of the contraction estimate
    double gamma2 = 1.0;
    double tol = 1e-9;         // threshold on the squared weighted distance
    int max_iter = 50;
    double bdg_constant = 4.0; // C_b; Doob L2 constant by default

    /// gamma_j = 2 / L_j when the constant is positive (1 otherwise).
    static PicardConfig for_driver(const DriverSpec& driver);
};

/// Contraction coefficients of the weighted-norm estimate, printed and redone.
struct ContractionReport {
    double coef_yz = 0.0;           // 2 L1/g1 + 45 b (T L1^2 + C_b)
    double coef_k = 0.0;            // 2 L2 (e^{aT}-1)/(a b g2) + 45 T L2^2
    double l1_bound_printed = 0.0;  // sqrt((1/2 - C_b) / (45 T b)); NaN if < 0
    double l2_bound_printed = 0.0;  // sqrt(5 b / (2 (e^{5T} + 225 b - 1)))
    bool smallness_l1_printed = false;
    bool smallness_l2_printed = false;
    double l1_bound_recomputed = 0.0;  // from coef_yz <= 1/2 with g1 = 2/L1
    double l2_bound_recomputed = 0.0;  // from coef_k <= 1/2 with g2 = 2/L2
    bool smallness_l1_recomputed = false;
    bool smallness_l2_recomputed = false;
    double alpha = 0.0, beta = 0.0, gamma1 = 0.0, gamma2 = 0.0;
    double bdg_constant = 0.0;
};

ContractionReport contraction_constants(double l1, double l2, double horizon,
                                        const PicardConfig& cfg);

/// Residual magnitudes of the solution conditions.
struct ResidualReport {
    double identity = 0.0;     // sup over paths/times of the dynamics identity
    double containment = 0.0;  // sup boundary violation
    double flat_off = 0.0;     // total flat-off mass (lower + upper)
    double flat_off_lower = 0.0;
    double flat_off_upper = 0.0;
};

struct PicardReport {
    std::vector<double> distances;  // squared weighted distance per sweep
    std::vector<double> ratios;     // distances[i+1] / distances[i]
    int iterations = 0;
    bool converged = false;
    ContractionReport constants;
    ResidualReport residuals;
    /// sup-node gap between the raw reflection difference and its adapted image
    double adaptedness_gap = 0.0;
    /// R^2 of the straight-line fit to log(distances) (geometric decay check)
    double geometric_fit_r2 = 0.0;
};

/// Un-reflected remainder path of one scenario path under the given iterate,
/// on the reversed clock: index 0 holds the terminal value.
DiscretePath remainder_path(const Scenario& sc, const SolutionQuad& quad,
                            std::size_t omega);

/// One application of the solution map: reflect the remainder paths on the
/// reversed boundaries, project the regulator parts, rebuild (Y, Z) backward.
SolutionQuad picard_sweep(const Scenario& sc, const SolutionQuad& quad);

/// Squared weighted distance: ||dY||_a^2 + ||dZ||_a^2 + beta * sup_k E|dK_k|^2.
double picard_distance(const SolutionQuad& a, const SolutionQuad& b,
                       const PicardConfig& cfg);

/// Iterates picard_sweep from `warm_start` (or the zero quad) until the
/// squared distance drops below cfg.tol or cfg.max_iter sweeps are spent.
std::pair<SolutionQuad, PicardReport> solve_picard(
    const Scenario& sc, const PicardConfig& cfg,
    const SolutionQuad* warm_start = nullptr);

/**
 * Classical backward scheme (dynamic-programming clamp between the
 * boundaries); independent of the fixed-point path. Only drivers that never
 * read the reflection argument are supported.
 */
SolutionQuad backward_induction_oracle(const Scenario& sc);

/// Backward-scheme starting quad with the reflection argument pinned to 0,
/// usable as a warm start for any driver.
SolutionQuad oracle_warm_start(const Scenario& sc);

ResidualReport residual_check(const Scenario& sc, const SolutionQuad& quad);

}  // namespace rbsde
