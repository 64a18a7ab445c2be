#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <cstring>
#include <string>

#include "doctest.h"
#include "gfrk/gfrk.h"

TEST_CASE("version and error strings are always available") {
    CHECK(gfrk_version() != nullptr);
    CHECK(gfrk_last_error() != nullptr);
}

TEST_CASE("config parse, format, reparse") {
    gfrk_config* cfg = nullptr;
    REQUIRE(gfrk_config_parse("model = mbe\nnx = 16\ndt = 0.1\nt_end = 1\n", &cfg) == GFRK_OK);
    char* text = nullptr;
    REQUIRE(gfrk_config_format(cfg, &text) == GFRK_OK);
    gfrk_config* cfg2 = nullptr;
    REQUIRE(gfrk_config_parse(text, &cfg2) == GFRK_OK);
    char* text2 = nullptr;
    REQUIRE(gfrk_config_format(cfg2, &text2) == GFRK_OK);
    CHECK(std::strcmp(text, text2) == 0);
    gfrk_string_free(text);
    gfrk_string_free(text2);
    gfrk_config_free(cfg);
    gfrk_config_free(cfg2);
}

TEST_CASE("config errors surface with code and message") {
    gfrk_config* cfg = nullptr;
    CHECK(gfrk_config_parse("dt = -1\nt_end = 1\n", &cfg) == GFRK_ERR_CONFIG);
    CHECK(std::string(gfrk_last_error()).find("dt must be positive") != std::string::npos);
    CHECK(gfrk_config_load("/nonexistent/path.cfg", &cfg) == GFRK_ERR_CONFIG);
    CHECK(gfrk_config_parse(nullptr, &cfg) == GFRK_ERR);
}

TEST_CASE("run a small simulation through the C interface") {
    gfrk_config* cfg = nullptr;
    REQUIRE(gfrk_config_parse(
                "model = cahn_hilliard\nnx = 16\ndt = 0.05\nt_end = 0.2\n"
                "initial = random(0.2, 4)\nlambda = 1\n",
                &cfg) == GFRK_OK);
    gfrk_series* series = nullptr;
    REQUIRE(gfrk_run_single(cfg, &series) == GFRK_OK);
    REQUIRE(gfrk_series_size(series) == 5);
    double row[5];
    REQUIRE(gfrk_series_row(series, 0, row) == GFRK_OK);
    CHECK(row[0] == 0.0);
    REQUIRE(gfrk_series_row(series, 4, row) == GFRK_OK);
    CHECK(row[0] == doctest::Approx(0.2));
    CHECK(gfrk_series_row(series, 99, row) == GFRK_ERR);

    REQUIRE(gfrk_series_write_csv(series, "capi_series.csv") == GFRK_OK);
    std::FILE* f = std::fopen("capi_series.csv", "rb");
    REQUIRE(f != nullptr);
    char header[64] = {0};
    REQUIRE(std::fgets(header, sizeof(header), f) != nullptr);
    CHECK(std::string(header) == "t,energy,energy_eq,mass,roughness\n");
    std::fclose(f);
    std::remove("capi_series.csv");

    gfrk_series_free(series);
    gfrk_config_free(cfg);
}

TEST_CASE("refinement through the C interface") {
    gfrk_config* cfg = nullptr;
    REQUIRE(gfrk_config_parse(
                "model = cahn_hilliard\nscheme = leqrk_pc\ntableau = gauss4\npc_iters = 1\n"
                "nx = 16\nlambda = 0.01\ndt = 0.05\nt_end = 0.25\ninitial = mms\nforcing = mms\n",
                &cfg) == GFRK_OK);
    const double dts[3] = {0.05, 0.025, 0.0125};
    gfrk_refinement* r = nullptr;
    REQUIRE(gfrk_run_refinement(cfg, dts, 3, &r) == GFRK_OK);
    REQUIRE(gfrk_refinement_levels(r) == 3);
    double dt, l2, linf;
    REQUIRE(gfrk_refinement_level(r, 0, &dt, &l2, &linf) == GFRK_OK);
    CHECK(dt == 0.05);
    CHECK(l2 > 0.0);
    double o2 = 0.0, oinf = 0.0;
    REQUIRE(gfrk_refinement_orders(r, &o2, &oinf) == GFRK_OK);
    CHECK(o2 > 3.0);  // gauss4 with one prediction is 4th order
    gfrk_refinement_free(r);
    gfrk_config_free(cfg);
}

TEST_CASE("tableau certification through the C interface") {
    gfrk_tableau_report* rep = nullptr;
    REQUIRE(gfrk_tableau_check("gauss4", &rep) == GFRK_OK);
    CHECK(gfrk_tableau_report_stages(rep) == 2);
    CHECK(gfrk_tableau_report_dirk(rep) == 0);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) CHECK(std::abs(gfrk_tableau_report_m(rep, i, j)) < 1e-14);
    CHECK(gfrk_tableau_report_flag(rep, "algebraically_stable") == 1);
    CHECK(gfrk_tableau_report_flag(rep, "order4") == 1);
    CHECK(gfrk_tableau_report_flag(rep, "a_psd") == 1);
    CHECK(gfrk_tableau_report_flag(rep, "no_such_flag") == -1);
    gfrk_tableau_report_free(rep);

    REQUIRE(gfrk_tableau_check("dirk4", &rep) == GFRK_OK);
    CHECK(gfrk_tableau_report_stages(rep) == 3);
    CHECK(gfrk_tableau_report_dirk(rep) == 1);
    CHECK(gfrk_tableau_report_flag(rep, "algebraically_stable") == 1);
    CHECK(gfrk_tableau_report_flag(rep, "diag_positive") == 1);
    CHECK(gfrk_tableau_report_m_min_eigenvalue(rep) > -1e-12);
    gfrk_tableau_report_free(rep);

    // Custom file: explicit Euler fails the stability gate.
    std::FILE* f = std::fopen("capi_tableau.txt", "w");
    REQUIRE(f != nullptr);
    std::fputs("1\n0\n1\n", f);
    std::fclose(f);
    REQUIRE(gfrk_tableau_check("capi_tableau.txt", &rep) == GFRK_OK);
    CHECK(gfrk_tableau_report_flag(rep, "algebraically_stable") == 0);
    gfrk_tableau_report_free(rep);
    std::remove("capi_tableau.txt");

    CHECK(gfrk_tableau_check("/nonexistent/tab.txt", &rep) == GFRK_ERR);
}
