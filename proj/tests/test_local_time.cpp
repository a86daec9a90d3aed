#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "rbsde/local_time.hpp"
#include "rbsde/random.hpp"
#include "rbsde/skorohod.hpp"

using namespace rbsde;

namespace {

BarrierPair unit_band(const TimeGrid& g) {
    return eval_barriers(BarrierSpec::constant(0.0), BarrierSpec::constant(1.0),
                         g);
}

DiscretePath zero_path(const TimeGrid& g) {
    return DiscretePath(g, std::vector<double>(g.points(), 0.0));
}

}  // namespace

TEST_CASE("tanaka estimate on simple paths") {
    const TimeGrid g = make_uniform_grid(1.0, 6);

    // Bounded away from the level: no contribution.
    const DiscretePath high(g, {2.0, 2.5, 2.2, 2.8, 2.1, 2.4, 2.6});
    const LocalTimeEstimate away = tanaka_local_time(high, 0.1);
    for (int k = 0; k <= 6; ++k) CHECK(away.path[k] == 0.0);

    // Constant zero: no increments, estimate stays zero.
    const LocalTimeEstimate flat = tanaka_local_time(zero_path(g), 0.1);
    for (int k = 0; k <= 6; ++k) CHECK(flat.path[k] == 0.0);

    CHECK_THROWS_AS((void)tanaka_local_time(high, -1.0), std::invalid_argument);
}

TEST_CASE("tanaka estimate on a reflected walk is positive and grows") {
    const TimeGrid g = make_uniform_grid(1.0, 1024);
    const BarrierPair wide = eval_barriers(BarrierSpec::constant(0.0),
                                           BarrierSpec::constant(100.0), g);
    const double eps = std::sqrt(g.dt());
    Rng rng(5);
    const DiscretePath walk = random_walk(g, 0.05, rng);
    const Reflection r = step_projection(walk, wide);
    REQUIRE(r.lower_push[1024] > 0.0);
    const LocalTimeEstimate lt = tanaka_local_time(r.reflected, eps);
    CHECK(lt.path[1024] > 0.0);
    CHECK(lt.nondecreasing_within(0.2));

    // The estimate tracks the actual lower push within estimator noise.
    CHECK(lt.path[1024] ==
          doctest::Approx(r.lower_push[1024]).epsilon(0.5));
}

TEST_CASE("reconstruction gates on boundary contact") {
    const TimeGrid g = make_uniform_grid(1.0, 8);
    const BarrierPair b = unit_band(g);
    const double eps = 0.05;

    // Interior path: every term vanishes regardless of the integrand.
    const DiscretePath y(g, {0.5, 0.6, 0.4, 0.5, 0.55, 0.45, 0.5, 0.6, 0.5});
    const DiscretePath f(g, {1.0, -2.0, 3.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0});
    const DiscretePath k = reflection_from_local_times(y, b, f, eps);
    const auto [one_low, one_up] = one_sided_reflection_terms(y, b, f, eps);
    for (int i = 0; i <= 8; ++i) {
        CHECK(k[i] == 0.0);
        CHECK(one_low[i] == 0.0);
        CHECK(one_up[i] == 0.0);
    }

    // Sloped boundaries with nonzero increments still gate to zero inside.
    const BarrierPair slope = eval_barriers(BarrierSpec::affine(-1.0, 0.5),
                                            BarrierSpec::affine(1.0, 0.5), g);
    const DiscretePath mid(g, {0.0, 0.2, 0.3, 0.3, 0.5, 0.5, 0.7, 0.8, 0.9});
    const DiscretePath k2 = reflection_from_local_times(mid, slope, f, eps);
    for (int i = 0; i <= 8; ++i) CHECK(k2[i] == 0.0);

    // Paths outside the boundaries beyond eps are rejected.
    const DiscretePath out(g, {0.5, 1.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5});
    CHECK_THROWS_AS((void)reflection_from_local_times(out, b, f, eps),
                    std::domain_error);
}

TEST_CASE("one-sided terms difference equals the combined reconstruction") {
    const TimeGrid g = make_uniform_grid(1.0, 512);
    const BarrierPair b = unit_band(g);
    const double eps = std::sqrt(g.dt());
    Rng rng(11);
    const DiscretePath walk = random_walk(g, 0.5, rng);
    const Reflection r = step_projection(walk, b);
    std::vector<double> fv(g.points());
    for (int i = 0; i <= 512; ++i) fv[i] = 0.3 - 0.1 * r.reflected[i];
    const DiscretePath f(g, std::move(fv));

    const DiscretePath combined = reflection_from_local_times(r.reflected, b, f, eps);
    const auto [lower, upper] = one_sided_reflection_terms(r.reflected, b, f, eps);
    for (int i = 0; i <= 512; ++i) {
        CHECK(combined[i] == lower[i] - upper[i]);
    }
}

TEST_CASE("reconstruction tracks the negated regulator on reflected walks") {
    const TimeGrid g = make_uniform_grid(1.0, 4096);
    const BarrierPair b = unit_band(g);
    const double eps = std::sqrt(g.dt());
    const DiscretePath f0 = zero_path(g);

    double err = 0.0, size = 0.0;
    for (int i = 0; i < 20; ++i) {
        Rng rng = Rng::for_index(7, i);
        const DiscretePath walk = random_walk(g, 0.5, rng);
        const Reflection r = step_projection(walk, b);
        const DiscretePath recon =
            reflection_from_local_times(r.reflected, b, f0, eps);
        for (int k = 0; k <= 4096; ++k) {
            const double e = recon[k] + r.regulator[k];
            err += e * e;
            size += r.regulator[k] * r.regulator[k];
        }
    }
    REQUIRE(size > 0.0);
    CHECK(std::sqrt(err / size) < 0.45);
}

TEST_CASE("one-sided orientation on single-boundary bands") {
    // Only the lower boundary is reachable: the upper term vanishes exactly
    // and the lower term tracks the negated lower push, matching the
    // combined-formula orientation.
    const TimeGrid g = make_uniform_grid(1.0, 4096);
    const double eps = std::sqrt(g.dt());
    const DiscretePath f0 = zero_path(g);

    const BarrierPair low_only = eval_barriers(BarrierSpec::constant(0.0),
                                               BarrierSpec::constant(100.0), g);
    double err = 0.0, size = 0.0;
    for (int i = 0; i < 10; ++i) {
        Rng rng = Rng::for_index(29, i);
        const Reflection r =
            step_projection(random_walk(g, 0.25, rng), low_only);
        const auto [lower, upper] =
            one_sided_reflection_terms(r.reflected, low_only, f0, eps);
        for (int k = 0; k <= 4096; ++k) {
            CHECK(upper[k] == 0.0);
            const double e = -lower[k] - r.lower_push[k];
            err += e * e;
            size += r.lower_push[k] * r.lower_push[k];
        }
    }
    REQUIRE(size > 0.0);
    CHECK(std::sqrt(err / size) < 0.45);

    // Mirror image: only the upper boundary is reachable.
    const BarrierPair up_only = eval_barriers(BarrierSpec::constant(-100.0),
                                              BarrierSpec::constant(1.0), g);
    double err2 = 0.0, size2 = 0.0;
    for (int i = 0; i < 10; ++i) {
        Rng rng = Rng::for_index(31, i);
        const Reflection r =
            step_projection(random_walk(g, 0.75, rng), up_only);
        const auto [lower, upper] =
            one_sided_reflection_terms(r.reflected, up_only, f0, eps);
        for (int k = 0; k <= 4096; ++k) {
            CHECK(lower[k] == 0.0);
            const double e = -upper[k] - r.upper_push[k];
            err2 += e * e;
            size2 += r.upper_push[k] * r.upper_push[k];
        }
    }
    REQUIRE(size2 > 0.0);
    CHECK(std::sqrt(err2 / size2) < 0.45);
}
