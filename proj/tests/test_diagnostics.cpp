#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numbers>

#include "core/diagnostics.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace gfrk;
using gfrk::testing::random_smooth_field;
using gfrk::testing::random_state;

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;

GridPtr unit_grid(int n = 32) { return Grid::make(n, n, kTwoPi, kTwoPi); }
}  // namespace

TEST_CASE("l2 error values and double-loop oracle") {
    auto g = unit_grid(32);
    Field f = random_smooth_field(g, 1);
    CHECK(l2_error(f, f) == 0.0);

    Field shifted = f;
    for (int n = 0; n < shifted.size(); ++n) shifted[n] += 1.0;
    CHECK(l2_error(shifted, f) == doctest::Approx(kTwoPi).epsilon(1e-13));  // sqrt(|Omega|)

    Field other = random_smooth_field(g, 2);
    double acc = 0.0;
    for (int i = 0; i < g->nx(); ++i)
        for (int j = 0; j < g->ny(); ++j) {
            double d = f(i, j) - other(i, j);
            acc += d * d;
        }
    double oracle = std::sqrt(g->hx() * g->hy() * acc);
    CHECK(l2_error(f, other) == doctest::Approx(oracle).epsilon(1e-14));

    // Linear scaling under field scaling.
    Field f2 = f, o2 = other;
    for (int n = 0; n < f2.size(); ++n) {
        f2[n] *= 3.0;
        o2[n] *= 3.0;
    }
    CHECK(l2_error(f2, o2) == doctest::Approx(3.0 * l2_error(f, other)).epsilon(1e-13));
}

TEST_CASE("linf error and the norm inequality") {
    auto g = unit_grid(32);
    Field f = random_smooth_field(g, 3);
    CHECK(linf_error(f, f) == 0.0);

    Field perturbed = f;
    perturbed(7, 9) += 1e-3;
    CHECK(linf_error(perturbed, f) == doctest::Approx(1e-3));

    Field other = random_smooth_field(g, 4);
    double bound = l2_error(f, other) / std::sqrt(g->hx() * g->hy());
    CHECK(linf_error(f, other) <= bound * (1.0 + 1e-13));
}

TEST_CASE("roughness") {
    auto g = unit_grid(32);
    Field c(g, 5.0);
    CHECK(roughness(c) == 0.0);

    Field s(g);
    for (int i = 0; i < g->nx(); ++i)
        for (int j = 0; j < g->ny(); ++j) s(i, j) = std::sin(g->x(i));
    CHECK(roughness(s) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-13));

    Field shifted = s;
    for (int n = 0; n < shifted.size(); ++n) shifted[n] += 2.5;
    CHECK(roughness(shifted) == doctest::Approx(roughness(s)).epsilon(1e-13));

    Field f = random_smooth_field(g, 5);
    double mean = 0.0;
    for (int n = 0; n < f.size(); ++n) mean += f[n];
    mean /= f.size();
    double acc = 0.0;
    for (int n = 0; n < f.size(); ++n) acc += (f[n] - mean) * (f[n] - mean);
    CHECK(roughness(f) == doctest::Approx(std::sqrt(acc / f.size())).epsilon(1e-13));
}

TEST_CASE("mass") {
    auto g = unit_grid(32);
    Field one(g, 1.0);
    CHECK(mass(one) == doctest::Approx(4.0 * kPi * kPi).epsilon(1e-13));

    Field s(g);
    for (int i = 0; i < g->nx(); ++i)
        for (int j = 0; j < g->ny(); ++j) s(i, j) = std::sin(g->x(i));
    CHECK(std::abs(mass(s)) < 1e-12);

    Field f = random_smooth_field(g, 6);
    double acc = 0.0;
    for (int n = 0; n < f.size(); ++n) acc += f[n];
    CHECK(mass(f) == doctest::Approx(g->hx() * g->hy() * acc).epsilon(1e-14));
}

TEST_CASE("fit_order on synthetic power laws") {
    RefinementResult r;
    for (double dt : {0.1, 0.05, 0.025, 0.0125}) {
        r.dts.push_back(dt);
        r.l2_errors.push_back(dt * dt);
        r.linf_errors.push_back(dt * dt * dt * dt);
    }
    auto [o2, oinf] = fit_order(r);
    CHECK(o2 == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(oinf == doctest::Approx(4.0).epsilon(1e-10));

    RefinementResult short_r;
    short_r.dts = {0.1, 0.05};
    short_r.l2_errors = {1.0, 0.5};
    short_r.linf_errors = {1.0, 0.5};
    CHECK_THROWS_AS(fit_order(short_r), std::invalid_argument);
}

TEST_CASE("gauss dissipation identity") {
    auto g = unit_grid(24);
    auto m = GradientFlowModel::cahn_hilliard(g, 1.0, 1.0, 1.0);
    LeqrkStepper stepper(m, gauss4(), SolverConfig{});
    SpectralWorkspace& ws = stepper.workspace();

    SUBCASE("equilibrium step has zero residual") {
        EQState s{Field(g, 1.0), Field(g, -0.5), 0.0};
        auto [next, rec] = stepper.first_step(s, 1e-3);
        CHECK(gauss_dissipation_residual(m, ws, gauss4(), rec, s, next, 1e-3) < 1e-12);
    }

    SUBCASE("random states satisfy the identity at solver precision") {
        for (int trial = 0; trial < 5; ++trial) {
            EQState s = random_state(m, ws, 800 + trial, 0.8);
            auto [s1, rec1] = stepper.first_step(s, 1e-3);
            History h = LeqrkStepper::make_history(s, rec1);
            auto [s2, rec2] = stepper.leqrk_pc_step(s1, h, 1e-3);
            double f_scale = std::abs(m.energy_quadratized(ws, s1)) + 1.0;
            double res = gauss_dissipation_residual(m, ws, gauss4(), rec2, s1, s2, 1e-3);
            CHECK(res < 1e-8 * f_scale);
        }
    }

    SUBCASE("refuses non-gauss tableaux") {
        EQState s{Field(g, 1.0), Field(g, -0.5), 0.0};
        StageRecord rec;
        CHECK_THROWS_AS(gauss_dissipation_residual(m, ws, dirk4(), rec, s, s, 1e-3),
                        std::invalid_argument);
    }
}

TEST_CASE("series csv round trip") {
    TimeSeries s;
    s.append({0.0, 1.5, 1.5, 0.25, 0.1});
    s.append({0.1, 1.25, 1.3, 0.25, 0.2});
    std::string csv = series_to_csv(s);
    TimeSeries back = parse_series_csv(csv);
    REQUIRE(back.rows.size() == 2);
    CHECK(back.rows[1].energy == 1.25);
    CHECK(series_to_csv(back) == csv);

    CHECK_THROWS(parse_series_csv("bogus\n"));
    SeriesRow out_of_order{0.05, 0, 0, 0, 0};
    CHECK_THROWS_AS(s.append(out_of_order), std::invalid_argument);
}

TEST_CASE("refinement csv round trip") {
    RefinementResult r;
    r.dts = {0.1, 0.05, 0.025};
    r.l2_errors = {1e-2, 2.5e-3, 6.25e-4};
    r.linf_errors = {2e-2, 5e-3, 1.25e-3};
    std::string csv = refinement_to_csv(r);
    RefinementResult back = parse_refinement_csv(csv);
    CHECK(back.dts == r.dts);
    CHECK(refinement_to_csv(back) == csv);
    auto [o2, oinf] = fit_order(back);
    CHECK(o2 == doctest::Approx(2.0).epsilon(1e-10));
}
