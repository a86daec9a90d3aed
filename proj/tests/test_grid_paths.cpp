#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "rbsde/grid.hpp"
#include "rbsde/random.hpp"

using namespace rbsde;

namespace {

DiscretePath path_of(const TimeGrid& g, std::vector<double> v) {
    return DiscretePath(g, std::move(v));
}

}  // namespace

TEST_CASE("make_uniform_grid") {
    const TimeGrid g = make_uniform_grid(1.0, 4);
    CHECK(g.dt() == 0.25);
    CHECK(g.time(0) == 0.0);
    CHECK(g.time(1) == 0.25);
    CHECK(g.time(2) == 0.5);
    CHECK(g.time(3) == 0.75);
    CHECK(g.time(4) == 1.0);

    const TimeGrid single = make_uniform_grid(2.0, 1);
    CHECK(single.time(0) == 0.0);
    CHECK(single.time(1) == 2.0);

    CHECK_THROWS_AS(make_uniform_grid(1.0, 0), std::invalid_argument);
    CHECK_THROWS_AS(make_uniform_grid(-1.0, 4), std::invalid_argument);

    // The endpoint is pinned even when dt*N would round away from T.
    const TimeGrid sixth = make_uniform_grid(1.0, 6);
    CHECK(sixth.time(6) == 1.0);
}

TEST_CASE("path validation") {
    const TimeGrid g = make_uniform_grid(1.0, 2);
    CHECK_THROWS_AS(path_of(g, {1.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(path_of(g, {1.0, 2.0, std::nan("")}), std::invalid_argument);
}

TEST_CASE("eval_barriers") {
    const TimeGrid g = make_uniform_grid(1.0, 4);

    const BarrierPair constant =
        eval_barriers(BarrierSpec::constant(0.0), BarrierSpec::constant(1.0), g);
    CHECK(constant.min_gap == 1.0);
    CHECK(constant.lower[3] == 0.0);
    CHECK(constant.upper[3] == 1.0);

    const BarrierPair parallel = eval_barriers(BarrierSpec::affine(0.0, 0.5),
                                               BarrierSpec::affine(1.0, 0.5), g);
    CHECK(parallel.min_gap == doctest::Approx(1.0));
    CHECK(parallel.lower[4] == doctest::Approx(0.5));
    CHECK(parallel.upper[4] == doctest::Approx(1.5));

    CHECK_THROWS_AS(eval_barriers(BarrierSpec::constant(0.0),
                                  BarrierSpec::affine(1.0, -2.0), g),
                    std::invalid_argument);
}

TEST_CASE("sup_norm_distance") {
    const TimeGrid g = make_uniform_grid(1.0, 2);
    const DiscretePath p = path_of(g, {0.0, 1.0, 0.0});
    const DiscretePath q = path_of(g, {0.0, 0.0, 0.0});
    CHECK(sup_norm_distance(p, p) == 0.0);
    CHECK(sup_norm_distance(p, q) == 1.0);

    const TimeGrid other = make_uniform_grid(1.0, 3);
    CHECK_THROWS_AS((void)sup_norm_distance(p, path_of(other, {0, 0, 0, 0})),
                    std::invalid_argument);

    // Random pair against a direct index scan.
    const TimeGrid g64 = make_uniform_grid(1.0, 64);
    Rng rng(17);
    std::vector<double> a(65), b(65);
    for (int i = 0; i <= 64; ++i) {
        a[i] = rng.uniform(-5, 5);
        b[i] = rng.uniform(-5, 5);
    }
    double direct = 0.0;
    for (int i = 0; i <= 64; ++i) {
        direct = std::max(direct, std::fabs(a[i] - b[i]));
    }
    CHECK(sup_norm_distance(path_of(g64, a), path_of(g64, b)) == direct);
}

TEST_CASE("reverse_in_time") {
    const TimeGrid g = make_uniform_grid(1.0, 2);
    const DiscretePath p = path_of(g, {0.0, 1.0, 2.0});
    const DiscretePath r = reverse_in_time(p);
    CHECK(r[0] == 2.0);
    CHECK(r[1] == 1.0);
    CHECK(r[2] == 0.0);

    const DiscretePath c = path_of(g, {3.0, 3.0, 3.0});
    CHECK(sup_norm_distance(reverse_in_time(c), c) == 0.0);

    // Involution and isometry on random paths.
    const TimeGrid g32 = make_uniform_grid(2.0, 32);
    Rng rng(23);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> a(33), b(33);
        for (int i = 0; i <= 32; ++i) {
            a[i] = rng.uniform(-4, 4);
            b[i] = rng.uniform(-4, 4);
        }
        const DiscretePath pa = path_of(g32, a);
        const DiscretePath pb = path_of(g32, b);
        CHECK(sup_norm_distance(reverse_in_time(reverse_in_time(pa)), pa) == 0.0);
        CHECK(sup_norm_distance(reverse_in_time(pa), reverse_in_time(pb)) ==
              sup_norm_distance(pa, pb));
    }
}

TEST_CASE("sup norm is a metric") {
    const TimeGrid g = make_uniform_grid(1.0, 16);
    Rng rng(31);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> a(17), b(17), c(17);
        for (int i = 0; i <= 16; ++i) {
            a[i] = rng.uniform(-2, 2);
            b[i] = rng.uniform(-2, 2);
            c[i] = rng.uniform(-2, 2);
        }
        const DiscretePath pa = path_of(g, a), pb = path_of(g, b), pc = path_of(g, c);
        const double ab = sup_norm_distance(pa, pb);
        const double bc = sup_norm_distance(pb, pc);
        const double ac = sup_norm_distance(pa, pc);
        CHECK(ab >= 0.0);
        CHECK(ab == sup_norm_distance(pb, pa));
        CHECK(ac <= ab + bc + 1e-15);
    }
}
