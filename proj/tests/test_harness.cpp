#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdio>
#include <numbers>

#include "core/config.hpp"
#include "core/diagnostics.hpp"
#include "core/experiments.hpp"
#include "core/snapshot.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace gfrk;

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

TEST_CASE("minimal config fills defaults and print round-trips byte-identically") {
    RunConfig cfg = parse_config("model = cahn_hilliard\nnx = 32\ndt = 0.1\nt_end = 1\n");
    CHECK(cfg.ny == 32);
    CHECK(cfg.lx == doctest::Approx(kTwoPi));
    CHECK(cfg.ly == doctest::Approx(kTwoPi));
    CHECK(cfg.gamma == 1.0);
    CHECK(cfg.pc_iters == 5);
    CHECK(cfg.krylov_rel_tol == 1e-12);
    CHECK(cfg.scheme == "leqrk_pc");
    CHECK(cfg.steps() == 10);

    std::string canonical = print_config(cfg);
    RunConfig reparsed = parse_config(canonical);
    CHECK(print_config(reparsed) == canonical);
}

TEST_CASE("config diagnostics name the key and line") {
    auto check_error = [](const std::string& text, const std::string& needle) {
        try {
            parse_config(text);
            FAIL("expected ConfigError for: ", text);
        } catch (const ConfigError& e) {
            INFO("message: ", e.what());
            CHECK(std::string(e.what()).find(needle) != std::string::npos);
        }
    };
    check_error("dt = -0.1\nt_end = 1\n", "dt must be positive");
    check_error("dt = 0.1\nt_end = 1\nwibble = 3\n", "unknown key 'wibble'");
    check_error("dt = 0.1\nt_end = 1\nnx = 33\n", "even");
    check_error("t_end = 1\n", "missing required key 'dt'");
    check_error("dt = 0.1\n", "missing required key 't_end'");
    check_error("dt = 0.3\nt_end = 1\n", "multiple of dt");
    check_error("dt = 0.1\nt_end = 1\ndt = 0.2\n", "duplicate key");
    check_error("dt = 0.1\nt_end = 1\nepsilon = 1\nepsilon_sq = 1\n", "not both");
    check_error("dt = 0.1\nt_end = 1\nforcing = mms\nlx = 1\n", "2*pi");
    check_error("dt = 0.1\nt_end = 1\nsnapshot_times = 0.05\n", "not a multiple of dt");
    check_error("dt = 0.1\nt_end = 1\nmodel = stokes\n", "model must be");
    check_error("dt = 0.1\nt_end = 1\ninitial = random(0.1)\n", "random(amplitude, seed)");

    // Line numbers are reported for the offending line.
    try {
        parse_config("model = mbe\n\n# comment\nfoo = 1\ndt = 0.1\nt_end = 1\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.line == 4);
    }
}

TEST_CASE("paper benchmark parameters parse and echo") {
    RunConfig cfg = parse_config(
        "model = cahn_hilliard\nscheme = leqrk_pc\ntableau = gauss4\npc_iters = 5\n"
        "nx = 128\nny = 128\nlx = 1\nly = 1\nlambda = 1\nepsilon = 0.01\ngamma = 1\n"
        "dt = 0.00025\nt_end = 0.1\ninitial = cosine_combo\n");
    CHECK(cfg.lambda == 1.0);
    CHECK(cfg.epsilon == 0.01);
    CHECK_FALSE(cfg.epsilon_is_sq);
    CHECK(cfg.eps_sq() == doctest::Approx(1e-4));
    CHECK(cfg.gamma == 1.0);
    std::string echoed = print_config(cfg);
    CHECK(echoed.find("epsilon = 0.01") != std::string::npos);
    CHECK(echoed.find("lambda = 1\n") != std::string::npos);
    CHECK(echoed.find("lx = 1\n") != std::string::npos);

    RunConfig sq = parse_config("dt = 0.1\nt_end = 1\nepsilon_sq = 0.1\n");
    CHECK(sq.eps_sq() == 0.1);
    CHECK(print_config(sq).find("epsilon_sq = 0.1") != std::string::npos);
}

TEST_CASE("build_initial variants") {
    auto grid = Grid::make(64, 64, kTwoPi, kTwoPi);
    SpectralWorkspace ws(grid);

    RunConfig cfg = parse_config("dt = 0.1\nt_end = 1\ninitial = cosine_combo\n");
    Field cosine = build_initial(cfg, grid, ws);
    CHECK(cosine(0, 0) == doctest::Approx(0.15).epsilon(1e-14));  // 0.05*(1+1+1)

    cfg = parse_config("dt = 0.1\nt_end = 1\ninitial = mms\n");
    Field mms = build_initial(cfg, grid, ws);
    CHECK(mms(16, 16) == doctest::Approx(1.0).epsilon(1e-14));  // node (pi/2, pi/2)
    CHECK(linf_norm(mms) == doctest::Approx(1.0).epsilon(1e-14));

    cfg = parse_config("dt = 0.1\nt_end = 1\ninitial = random(0.001, 42)\n");
    Field r1 = build_initial(cfg, grid, ws);
    Field r2 = build_initial(cfg, grid, ws);
    for (int n = 0; n < r1.size(); ++n) CHECK(r1[n] == r2[n]);
    CHECK(linf_norm(r1) <= 0.001);
    CHECK(linf_norm(r1) > 0.0);
    RunConfig other_seed = parse_config("dt = 0.1\nt_end = 1\ninitial = random(0.001, 43)\n");
    Field r3 = build_initial(other_seed, grid, ws);
    bool differs = false;
    for (int n = 0; n < r1.size(); ++n)
        if (r1[n] != r3[n]) differs = true;
    CHECK(differs);

    write_snapshot("harness_init.gfk", cosine, 0.0);
    cfg = parse_config("dt = 0.1\nt_end = 1\ninitial = file(harness_init.gfk)\n");
    Field loaded = build_initial(cfg, grid, ws);
    for (int n = 0; n < loaded.size(); ++n) CHECK(loaded[n] == cosine[n]);

    auto small = Grid::make(16, 16, kTwoPi, kTwoPi);
    SpectralWorkspace ws2(small);
    CHECK_THROWS_AS(build_initial(cfg, small, ws2), ConfigError);
    std::remove("harness_init.gfk");
}

TEST_CASE("run_single: equilibrium initial data gives a constant series") {
    auto grid = Grid::make(16, 16, kTwoPi, kTwoPi);
    Field one(grid, 1.0);
    write_snapshot("equilibrium.gfk", one, 0.0);
    RunConfig cfg = parse_config(
        "model = cahn_hilliard\nnx = 16\ndt = 0.05\nt_end = 0.25\n"
        "initial = file(equilibrium.gfk)\n");
    TimeSeries series = run_single(cfg).series;
    std::remove("equilibrium.gfk");
    REQUIRE(series.rows.size() == 6);
    for (const SeriesRow& r : series.rows) {
        CHECK(std::abs(r.energy) < 1e-10);
        CHECK(r.mass == doctest::Approx(series.rows[0].mass).epsilon(1e-13));
        CHECK(std::abs(r.roughness) < 1e-11);
    }
}

TEST_CASE("run_single: MMS accuracy and non-increasing quadratized energy") {
    SUBCASE("gauss4 with one prediction lands near the exact solution") {
        RunConfig cfg = parse_config(
            "model = cahn_hilliard\nscheme = leqrk_pc\ntableau = gauss4\npc_iters = 1\n"
            "nx = 32\nlambda = 0.01\nepsilon = 1\ngamma = 1\ndt = 0.01\nt_end = 0.25\n"
            "initial = mms\nforcing = mms\n");
        RunOutput out = run_single(cfg);
        auto grid = Grid::make(32, 32, kTwoPi, kTwoPi);
        Field exact = GradientFlowModel::mms_exact(grid, 0.25);
        CHECK(l2_error(out.final_phi, exact) < 1e-6);
    }

    SUBCASE("unforced runs dissipate the quadratized energy") {
        RunConfig cfg = parse_config(
            "model = mbe\nscheme = leqrk_pc\ntableau = dirk4\nnx = 32\n"
            "lambda = 1\nepsilon = 1\ngamma = 1\ndt = 0.01\nt_end = 0.2\n"
            "initial = random(0.5, 7)\n");
        TimeSeries series = run_single(cfg).series;
        for (std::size_t i = 1; i < series.rows.size(); ++i) {
            double prev = series.rows[i - 1].energy_eq;
            CHECK(series.rows[i].energy_eq <= prev + 1e-9 * std::max(1.0, std::abs(prev)));
        }
    }
}

TEST_CASE("run_single is bit-reproducible") {
    RunConfig cfg = parse_config(
        "model = cahn_hilliard\nnx = 16\ndt = 0.05\nt_end = 0.2\n"
        "initial = random(0.2, 99)\nlambda = 1\n");
    TimeSeries a = run_single(cfg).series;
    TimeSeries b = run_single(cfg).series;
    CHECK(series_to_csv(a) == series_to_csv(b));
}

TEST_CASE("run_single writes snapshots and the series csv") {
    RunConfig cfg = parse_config(
        "model = cahn_hilliard\nnx = 16\ndt = 0.05\nt_end = 0.2\n"
        "initial = random(0.2, 5)\nseries_path = harness_series.csv\n"
        "snapshot_times = 0.1,0.2\nsnapshot_dir = .\n");
    RunOutput out = run_single(cfg);
    Snapshot s2 = read_snapshot("./snapshot_step000002.gfk");
    CHECK(s2.t == doctest::Approx(0.1));
    Snapshot s4 = read_snapshot("./snapshot_step000004.gfk");
    CHECK(s4.t == doctest::Approx(0.2));
    for (int n = 0; n < s4.field.size(); ++n) CHECK(s4.field[n] == out.final_phi[n]);

    // The emitted CSV parses back into its declared type.
    std::FILE* f = std::fopen("harness_series.csv", "rb");
    REQUIRE(f != nullptr);
    std::string text;
    char chunk[256];
    std::size_t got;
    while ((got = std::fread(chunk, 1, sizeof(chunk), f)) > 0) text.append(chunk, got);
    std::fclose(f);
    TimeSeries parsed = parse_series_csv(text);
    REQUIRE(parsed.rows.size() == out.series.rows.size());
    CHECK(parsed.rows.back().energy == out.series.rows.back().energy);
    std::remove("harness_series.csv");
    std::remove("./snapshot_step000002.gfk");
    std::remove("./snapshot_step000004.gfk");
}

TEST_CASE("run_refinement validates its preconditions") {
    RunConfig cfg = parse_config("dt = 0.1\nt_end = 1\ninitial = mms\nforcing = mms\n");
    CHECK_THROWS_AS(run_refinement(cfg, {0.1, 0.05}), ConfigError);          // < 3 levels
    CHECK_THROWS_AS(run_refinement(cfg, {0.05, 0.1, 0.025}), ConfigError);   // not descending
    RunConfig unforced = parse_config("dt = 0.1\nt_end = 1\ninitial = mms\n");
    CHECK_THROWS_AS(run_refinement(unforced, {0.1, 0.05, 0.025}), ConfigError);
}

TEST_CASE("run_max_stable_dt: reference against itself is exactly correct") {
    RunConfig cfg = parse_config(
        "model = cahn_hilliard\nnx = 16\ndt = 0.05\nt_end = 0.2\n"
        "initial = random(0.2, 31)\nlambda = 1\n");
    auto rows = run_max_stable_dt(cfg, {0.05}, 0.05, 0.05);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].deviation == 0.0);
    CHECK(rows[0].verdict == "correct");

    CHECK_THROWS_AS(run_max_stable_dt(cfg, {0.05, 0.1}, 0.01, 0.05), ConfigError);
}

TEST_CASE("run_coarsening windows and slopes") {
    RunConfig cfg = parse_config(
        "model = mbe\nnx = 16\ndt = 0.05\nt_end = 1\nlambda = 1\nepsilon_sq = 0.1\n"
        "initial = random(0.1, 12)\n");
    CoarseningResult res = run_coarsening(cfg, 0.2, 1.0);
    CHECK(res.series.rows.size() == 21);
    CHECK(std::isfinite(res.energy_slope));
    CHECK(std::isfinite(res.roughness_slope));
    CHECK(res.energy_slope < 0.0);  // energy decays

    CHECK_THROWS_AS(run_coarsening(cfg, 0.0, 1.0), ConfigError);
    CHECK_THROWS_AS(run_coarsening(cfg, 0.5, 0.2), ConfigError);
    CHECK_THROWS_AS(run_coarsening(cfg, 0.5, 2.0), ConfigError);
}

TEST_CASE("synthetic power law slopes") {
    std::vector<double> ts, es;
    for (int i = 1; i <= 30; ++i) {
        double t = 0.5 * i;
        ts.push_back(t);
        es.push_back(std::pow(t, -1.0 / 3.0));
    }
    CHECK(loglog_slope(ts, es) == doctest::Approx(-1.0 / 3.0).epsilon(1e-10));
    std::vector<double> flat(ts.size(), 2.0);
    CHECK(std::abs(loglog_slope(ts, flat)) < 1e-12);
}
