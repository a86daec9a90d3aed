#include "rbsde/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "rbsde/kernels.hpp"

namespace rbsde {

namespace {

/// Generator values of the current iterate, one per (level, node).
AdaptedProcess driver_values(const Scenario& sc, const SolutionQuad& quad) {
    const int n = sc.tree.depth();
    const TimeGrid& g = sc.tree.grid();
    AdaptedProcess fv(n - 1);
    for (int k = 0; k < n; ++k) {
        const double t = g.time(k);
        for (std::size_t p = 0; p < (std::size_t{1} << k); ++p) {
            fv.at(k, p) = sc.driver(t, quad.y.at(k, p), quad.z.at(k, p),
                                    quad.k_lower.at(k, p) - quad.k_upper.at(k, p));
        }
    }
    return fv;
}

/// Remainder path on the reversed clock: x[j] = m_{N-j},
/// m_k = xi + sum_{i>=k} f_i dt - sum_{i>=k} Z_i dW_{i+1}.
void fill_remainder_reversed(const Scenario& sc, const AdaptedProcess& fv,
                             const AdaptedProcess& z, std::size_t omega,
                             std::span<double> x) {
    const int n = sc.tree.depth();
    const double dt = sc.tree.grid().dt();
    double m = sc.terminal_values[omega];
    x[0] = m;
    for (int i = n - 1; i >= 0; --i) {
        const std::size_t p = sc.tree.node(omega, i);
        m = m + fv.at(i, p) * dt - z.at(i, p) * sc.tree.increment(omega, i + 1);
        x[n - i] = m;
    }
}

double fit_log_linear_r2(const std::vector<double>& d) {
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (d[i] > 0.0) {
            xs.push_back(static_cast<double>(i));
            ys.push_back(std::log(d[i]));
        }
    }
    const std::size_t m = xs.size();
    if (m < 3) return 1.0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < m; ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double denom = m * sxx - sx * sx;
    if (denom == 0.0) return 1.0;
    const double slope = (m * sxy - sx * sy) / denom;
    const double intercept = (sy - slope * sx) / m;
    double ss_res = 0, ss_tot = 0;
    const double mean = sy / m;
    for (std::size_t i = 0; i < m; ++i) {
        const double fit = intercept + slope * xs[i];
        ss_res += (ys[i] - fit) * (ys[i] - fit);
        ss_tot += (ys[i] - mean) * (ys[i] - mean);
    }
    if (ss_tot == 0.0) return 1.0;
    return 1.0 - ss_res / ss_tot;
}

/// Backward clamp scheme shared by the oracle and the warm start; the
/// reflection argument of the driver is pinned to zero throughout.
SolutionQuad backward_scheme(const Scenario& sc) {
    const int n = sc.tree.depth();
    const TimeGrid& g = sc.tree.grid();
    const double dt = g.dt();
    const double two_step = 2.0 * sc.tree.step();

    SolutionQuad q = zero_quad(sc.tree);
    std::copy(sc.terminal_values.begin(), sc.terminal_values.end(),
              q.y.level(n).begin());

    AdaptedProcess incr_low(n - 1, 0.0), incr_up(n - 1, 0.0);
    for (int k = n - 1; k >= 0; --k) {
        const double lo = sc.barriers.lower[k];
        const double hi = sc.barriers.upper[k];
        const double t = g.time(k);
        for (std::size_t p = 0; p < (std::size_t{1} << k); ++p) {
            const double down = q.y.at(k + 1, 2 * p);
            const double up = q.y.at(k + 1, 2 * p + 1);
            const double cont = 0.5 * (down + up);
            const double zkp = (up - down) / two_step;
            q.z.at(k, p) = zkp;
            const double ybar = cont + sc.driver(t, cont, zkp, 0.0) * dt;
            double y = ybar;
            if (ybar < lo) {
                incr_low.at(k, p) = lo - ybar;
                y = lo;
            } else if (ybar > hi) {
                incr_up.at(k, p) = ybar - hi;
                y = hi;
            }
            q.y.at(k, p) = y;
        }
    }

    // Clamp amounts computed at level k enter the regulators at time k+1.
    for (int k = 0; k < n; ++k) {
        for (std::size_t p = 0; p < (std::size_t{1} << k); ++p) {
            const double kl = q.k_lower.at(k, p) + incr_low.at(k, p);
            const double ku = q.k_upper.at(k, p) + incr_up.at(k, p);
            q.k_lower.at(k + 1, 2 * p) = kl;
            q.k_lower.at(k + 1, 2 * p + 1) = kl;
            q.k_upper.at(k + 1, 2 * p) = ku;
            q.k_upper.at(k + 1, 2 * p + 1) = ku;
        }
    }
    return q;
}

double level_mean_square(std::span<const double> values, int k) {
    return std::ldexp(kernels::sum_squares(values), -k);
}

}  // namespace

Scenario validate_scenario(PathTree tree, BarrierPair barriers,
                           DriverSpec driver, TerminalSpec terminal) {
    if (tree.grid() != barriers.lower.grid()) {
        throw std::invalid_argument("validate_scenario: grid mismatch");
    }
    driver.validate();

    const int n = tree.depth();
    std::vector<double> xi(tree.path_count());
    const double lo_t = barriers.lower[n];
    const double hi_t = barriers.upper[n];
    for (std::size_t w = 0; w < tree.path_count(); ++w) {
        xi[w] = terminal.eval(tree, w);
        if (!(xi[w] >= lo_t && xi[w] <= hi_t)) {
            throw std::domain_error(
                "validate_scenario: terminal value " + std::to_string(xi[w]) +
                " on path " + std::to_string(w) +
                " lies outside the boundaries at the horizon");
        }
    }
    BarrierPair reversed = reverse_in_time(barriers);
    return Scenario{std::move(tree),   std::move(barriers), std::move(reversed),
                    std::move(driver), std::move(terminal), std::move(xi)};
}

Scenario Scenario::with_terminal_values(std::vector<double> values) const {
    if (values.size() != tree.path_count()) {
        throw std::invalid_argument("with_terminal_values: one value per path");
    }
    const int n = tree.depth();
    for (std::size_t w = 0; w < values.size(); ++w) {
        if (!(values[w] >= barriers.lower[n] && values[w] <= barriers.upper[n])) {
            throw std::domain_error(
                "with_terminal_values: value " + std::to_string(values[w]) +
                " on path " + std::to_string(w) +
                " lies outside the boundaries at the horizon");
        }
    }
    Scenario out = *this;
    out.terminal_values = std::move(values);
    return out;
}

SolutionQuad zero_quad(const PathTree& tree) {
    const int n = tree.depth();
    return SolutionQuad{tree.grid(), AdaptedProcess(n, 0.0),
                        AdaptedProcess(n - 1, 0.0), AdaptedProcess(n, 0.0),
                        AdaptedProcess(n, 0.0), nullptr};
}

PicardConfig PicardConfig::for_driver(const DriverSpec& driver) {
    PicardConfig cfg;
    cfg.gamma1 = driver.lip_yz > 0.0 ? 2.0 / driver.lip_yz : 1.0;
    cfg.gamma2 = driver.lip_k > 0.0 ? 2.0 / driver.lip_k : 1.0;
    return cfg;
}

ContractionReport contraction_constants(double l1, double l2, double horizon,
                                        const PicardConfig& cfg) {
    if (l1 < 0.0 || l2 < 0.0 || !(horizon > 0.0) || !(cfg.beta > 0.0) ||
        !(cfg.gamma1 > 0.0) || !(cfg.gamma2 > 0.0) || cfg.alpha < 0.0) {
        throw std::invalid_argument("contraction_constants: bad inputs");
    }
    ContractionReport r;
    r.alpha = cfg.alpha;
    r.beta = cfg.beta;
    r.gamma1 = cfg.gamma1;
    r.gamma2 = cfg.gamma2;
    r.bdg_constant = cfg.bdg_constant;

    const double t = horizon;
    const double grow =
        cfg.alpha > 0.0 ? (std::exp(cfg.alpha * t) - 1.0) / cfg.alpha : t;

    r.coef_yz = (l1 > 0.0 ? 2.0 * l1 / cfg.gamma1 : 0.0) +
                45.0 * cfg.beta * (t * l1 * l1 + cfg.bdg_constant);
    r.coef_k = (l2 > 0.0 ? 2.0 * l2 * grow / (cfg.beta * cfg.gamma2) : 0.0) +
               45.0 * t * l2 * l2;

    r.l1_bound_printed =
        std::sqrt((0.5 - cfg.bdg_constant) / (45.0 * t * cfg.beta));
    r.l2_bound_printed = std::sqrt(
        0.5 * 5.0 * cfg.beta / (std::exp(5.0 * t) + 225.0 * cfg.beta - 1.0));
    r.smallness_l1_printed = l1 < r.l1_bound_printed;
    r.smallness_l2_printed = l2 < r.l2_bound_printed;

    r.l1_bound_recomputed =
        std::sqrt(std::max(0.0, 0.5 - 45.0 * cfg.beta * cfg.bdg_constant) /
                  (1.0 + 45.0 * cfg.beta * t));
    r.l2_bound_recomputed =
        std::sqrt(0.5 / (grow / cfg.beta + 45.0 * t));
    r.smallness_l1_recomputed = l1 < r.l1_bound_recomputed;
    r.smallness_l2_recomputed = l2 < r.l2_bound_recomputed;
    return r;
}

DiscretePath remainder_path(const Scenario& sc, const SolutionQuad& quad,
                            std::size_t omega) {
    const int n = sc.tree.depth();
    AdaptedProcess fv = driver_values(sc, quad);
    std::vector<double> x(n + 1);
    fill_remainder_reversed(sc, fv, quad.z, omega, x);
    return DiscretePath(sc.tree.grid(), std::move(x));
}

SolutionQuad picard_sweep(const Scenario& sc, const SolutionQuad& quad) {
    const int n = sc.tree.depth();
    const std::size_t paths = sc.tree.path_count();
    const double dt = sc.tree.grid().dt();
    const double two_step = 2.0 * sc.tree.step();
    std::span<const double> rev_lower = sc.barriers_reversed.lower.values();
    std::span<const double> rev_upper = sc.barriers_reversed.upper.values();

    const AdaptedProcess fv = driver_values(sc, quad);

    auto raw = std::make_shared<SolutionQuad::RawParts>();
    raw->reflected = RawProcess(n);
    raw->push_lower = RawProcess(n);
    raw->push_upper = RawProcess(n);

    std::vector<double> x(n + 1), y_rev(n + 1), cum_low(n + 1), cum_up(n + 1);
    for (std::size_t w = 0; w < paths; ++w) {
        fill_remainder_reversed(sc, fv, quad.z, w, x);
        step_projection_core(x, rev_lower, rev_upper, y_rev, cum_low, cum_up);
        // Un-reverse: forward time k sits at reversed index N-k; the raw
        // regulators accumulate the tail pushes, vanishing at k = 0.
        for (int k = 0; k <= n; ++k) {
            raw->reflected.at(k, w) = y_rev[n - k];
            raw->push_lower.at(k, w) = cum_low[n] - cum_low[n - k];
            raw->push_upper.at(k, w) = cum_up[n] - cum_up[n - k];
        }
    }

    SolutionQuad out;
    out.grid = sc.tree.grid();
    out.k_lower = dual_optional_projection(sc.tree, raw->push_lower, true);
    out.k_upper = dual_optional_projection(sc.tree, raw->push_upper, true);
    out.y = AdaptedProcess(n);
    out.z = AdaptedProcess(n - 1);
    std::copy(sc.terminal_values.begin(), sc.terminal_values.end(),
              out.y.level(n).begin());
    for (int k = n - 1; k >= 0; --k) {
        const std::size_t block = paths >> k;
        for (std::size_t p = 0; p < (std::size_t{1} << k); ++p) {
            const double kl_par = out.k_lower.at(k, p);
            const double ku_par = out.k_upper.at(k, p);
            const double down = out.y.at(k + 1, 2 * p) +
                                ((out.k_lower.at(k + 1, 2 * p) - kl_par) -
                                 (out.k_upper.at(k + 1, 2 * p) - ku_par));
            const double up = out.y.at(k + 1, 2 * p + 1) +
                              ((out.k_lower.at(k + 1, 2 * p + 1) - kl_par) -
                               (out.k_upper.at(k + 1, 2 * p + 1) - ku_par));
            double y = 0.5 * (down + up) + fv.at(k, p) * dt;
            if (y < sc.barriers.lower[k] || y > sc.barriers.upper[k]) {
                // The recursion can overshoot a boundary by rounding. The
                // same value averaged directly from the reflected remainders
                // cannot: cascade partial sums of values <= U stay <= 2^j U,
                // which is representable, so the scaled mean stays <= U.
                const double total = kernels::sum(
                    raw->reflected.level(k).subspan(p * block, block));
                y = std::ldexp(total, k - n);
            }
            out.y.at(k, p) = y;
            out.z.at(k, p) = (up - down) / two_step;
        }
    }
    out.raw = std::move(raw);
    return out;
}

double picard_distance(const SolutionQuad& a, const SolutionQuad& b,
                       const PicardConfig& cfg) {
    if (a.grid != b.grid || a.y.depth() != b.y.depth()) {
        throw std::invalid_argument("picard_distance: tree mismatch");
    }
    const int n = a.y.depth();
    const double dt = a.grid.dt();
    std::vector<double> diff;
    double dy2 = 0.0, dz2 = 0.0, dk_sup = 0.0;
    for (int k = 0; k <= n; ++k) {
        const std::size_t m = std::size_t{1} << k;
        diff.resize(m);
        if (k < n) {
            const double weight = std::exp(cfg.alpha * a.grid.time(k)) * dt;
            for (std::size_t p = 0; p < m; ++p) {
                diff[p] = a.y.at(k, p) - b.y.at(k, p);
            }
            dy2 += weight * level_mean_square(diff, k);
            for (std::size_t p = 0; p < m; ++p) {
                diff[p] = a.z.at(k, p) - b.z.at(k, p);
            }
            dz2 += weight * level_mean_square(diff, k);
        }
        for (std::size_t p = 0; p < m; ++p) {
            diff[p] = (a.k_lower.at(k, p) - a.k_upper.at(k, p)) -
                      (b.k_lower.at(k, p) - b.k_upper.at(k, p));
        }
        dk_sup = std::max(dk_sup, level_mean_square(diff, k));
    }
    return dy2 + dz2 + cfg.beta * dk_sup;
}

std::pair<SolutionQuad, PicardReport> solve_picard(const Scenario& sc,
                                                   const PicardConfig& cfg,
                                                   const SolutionQuad* warm_start) {
    if (!(cfg.tol > 0.0) || cfg.max_iter < 1) {
        throw std::invalid_argument("solve_picard: need tol > 0, max_iter >= 1");
    }
    PicardReport report;
    report.constants = contraction_constants(sc.driver.lip_yz, sc.driver.lip_k,
                                             sc.tree.grid().horizon, cfg);

    SolutionQuad quad = warm_start ? *warm_start : zero_quad(sc.tree);
    for (int it = 0; it < cfg.max_iter; ++it) {
        SolutionQuad next = picard_sweep(sc, quad);
        const double d = picard_distance(quad, next, cfg);
        report.distances.push_back(d);
        quad = std::move(next);
        report.iterations = it + 1;
        if (d < cfg.tol) {
            report.converged = true;
            break;
        }
    }
    for (std::size_t i = 0; i + 1 < report.distances.size(); ++i) {
        const double prev = report.distances[i];
        report.ratios.push_back(prev > 0.0 ? report.distances[i + 1] / prev : 0.0);
    }
    report.geometric_fit_r2 = fit_log_linear_r2(report.distances);
    report.residuals = residual_check(sc, quad);

    // Adapted closure of the raw reflection difference at the fixed point.
    if (quad.raw) {
        const int n = sc.tree.depth();
        double gap = 0.0;
        for (int k = 0; k <= n; ++k) {
            for (std::size_t w = 0; w < sc.tree.path_count(); ++w) {
                const std::size_t p = sc.tree.node(w, k);
                const double raw_k = quad.raw->push_lower.at(k, w) -
                                     quad.raw->push_upper.at(k, w);
                const double adapted_k =
                    quad.k_lower.at(k, p) - quad.k_upper.at(k, p);
                gap = std::max(gap, std::fabs(raw_k - adapted_k));
            }
        }
        report.adaptedness_gap = gap;
    }
    return {std::move(quad), std::move(report)};
}

SolutionQuad backward_induction_oracle(const Scenario& sc) {
    if (!sc.driver.reflection_free()) {
        throw std::domain_error(
            "backward_induction_oracle: driver reads the reflection argument; "
            "no independent scheme is available");
    }
    return backward_scheme(sc);
}

SolutionQuad oracle_warm_start(const Scenario& sc) {
    return backward_scheme(sc);
}

ResidualReport residual_check(const Scenario& sc, const SolutionQuad& quad) {
    const int n = sc.tree.depth();
    const std::size_t paths = sc.tree.path_count();
    const double dt = sc.tree.grid().dt();
    const double weight = sc.tree.path_weight();
    ResidualReport r;

    const AdaptedProcess fv = driver_values(sc, quad);

    // (i) pathwise dynamics identity.
    for (std::size_t w = 0; w < paths; ++w) {
        double tail = 0.0;  // sum_{i>=k} f_i dt - Z_i dW_{i+1}
        const double kl_t = quad.k_lower.at(n, w);
        const double ku_t = quad.k_upper.at(n, w);
        const double xi = sc.terminal_values[w];
        r.identity = std::max(r.identity, std::fabs(quad.y.at(n, w) - xi));
        for (int k = n - 1; k >= 0; --k) {
            const std::size_t p = sc.tree.node(w, k);
            tail += fv.at(k, p) * dt -
                    quad.z.at(k, p) * sc.tree.increment(w, k + 1);
            const double rhs = xi + tail + (kl_t - quad.k_lower.at(k, p)) -
                               (ku_t - quad.k_upper.at(k, p));
            r.identity = std::max(r.identity, std::fabs(quad.y.at(k, p) - rhs));
        }
    }

    // (ii) boundary containment.
    for (int k = 0; k <= n; ++k) {
        for (std::size_t p = 0; p < (std::size_t{1} << k); ++p) {
            const double y = quad.y.at(k, p);
            r.containment = std::max(
                r.containment,
                std::max(sc.barriers.lower[k] - y, y - sc.barriers.upper[k]));
        }
    }
    r.containment = std::max(r.containment, 0.0);

    // (iii) flat-off sums. Solver outputs carry the generating raw
    // decomposition, whose pushes act at exact contact; hand-built quads are
    // checked against their own adapted regulators.
    if (quad.raw) {
        double low = 0.0, up = 0.0;
        for (std::size_t w = 0; w < paths; ++w) {
            double acc_low = 0.0, acc_up = 0.0;
            for (int k = 0; k < n; ++k) {
                const double dl = quad.raw->push_lower.at(k + 1, w) -
                                  quad.raw->push_lower.at(k, w);
                const double du = quad.raw->push_upper.at(k + 1, w) -
                                  quad.raw->push_upper.at(k, w);
                const double yk = quad.raw->reflected.at(k, w);
                acc_low += (yk - sc.barriers.lower[k]) * dl;
                acc_up += (sc.barriers.upper[k] - yk) * du;
            }
            low += weight * acc_low;
            up += weight * acc_up;
        }
        r.flat_off_lower = low;
        r.flat_off_upper = up;
    } else {
        double low = (quad.y.at(0, 0) - sc.barriers.lower[0]) * quad.k_lower.at(0, 0);
        double up = (sc.barriers.upper[0] - quad.y.at(0, 0)) * quad.k_upper.at(0, 0);
        for (int k = 0; k < n; ++k) {
            const double node_weight = std::ldexp(1.0, -(k + 1));
            for (std::size_t c = 0; c < (std::size_t{2} << k); ++c) {
                const std::size_t p = c >> 1;
                const double dl = quad.k_lower.at(k + 1, c) - quad.k_lower.at(k, p);
                const double du = quad.k_upper.at(k + 1, c) - quad.k_upper.at(k, p);
                const double yk = quad.y.at(k, p);
                low += node_weight * (yk - sc.barriers.lower[k]) * dl;
                up += node_weight * (sc.barriers.upper[k] - yk) * du;
            }
        }
        r.flat_off_lower = low;
        r.flat_off_upper = up;
    }
    r.flat_off = r.flat_off_lower + r.flat_off_upper;
    return r;
}

}  // namespace rbsde
