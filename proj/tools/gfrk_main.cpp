// gfrk command-line front end. Everything goes through the C API of the
// shared library; this translation unit holds no solver logic.

#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gfrk/gfrk.h"

namespace {

int status_to_exit(gfrk_status s) {
    switch (s) {
        case GFRK_OK: return 0;
        case GFRK_ERR_CONFIG: return 2;
        case GFRK_ERR_SOLVER: return 3;
        default: return 1;
    }
}

int fail(gfrk_status s) {
    std::fprintf(stderr, "error: %s\n", gfrk_last_error());
    return status_to_exit(s);
}

std::vector<double> parse_list(const std::string& csv) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos < csv.size()) {
        std::size_t comma = csv.find(',', pos);
        std::string tok = csv.substr(pos, comma == std::string::npos ? std::string::npos
                                                                     : comma - pos);
        if (!tok.empty()) out.push_back(std::stod(tok));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

struct ConfigHandle {
    gfrk_config* cfg = nullptr;
    ~ConfigHandle() { gfrk_config_free(cfg); }
};

int cmd_run(const std::string& path) {
    ConfigHandle c;
    if (gfrk_status s = gfrk_config_load(path.c_str(), &c.cfg); s != GFRK_OK) return fail(s);
    gfrk_series* series = nullptr;
    if (gfrk_status s = gfrk_run_single(c.cfg, &series); s != GFRK_OK) return fail(s);
    size_t n = gfrk_series_size(series);
    double first[5], last[5];
    gfrk_series_row(series, 0, first);
    gfrk_series_row(series, n - 1, last);
    std::printf("steps: %zu\n", n - 1);
    std::printf("t = %-12g energy = %-16.10g energy_eq = %-16.10g mass = %-16.10g\n", first[0],
                first[1], first[2], first[3]);
    std::printf("t = %-12g energy = %-16.10g energy_eq = %-16.10g mass = %-16.10g\n", last[0],
                last[1], last[2], last[3]);
    gfrk_series_free(series);
    return 0;
}

int cmd_print_config(const std::string& path) {
    ConfigHandle c;
    if (gfrk_status s = gfrk_config_load(path.c_str(), &c.cfg); s != GFRK_OK) return fail(s);
    char* text = nullptr;
    if (gfrk_status s = gfrk_config_format(c.cfg, &text); s != GFRK_OK) return fail(s);
    std::fputs(text, stdout);
    gfrk_string_free(text);
    return 0;
}

int cmd_refine(const std::string& path, const std::string& dts_csv, double expect_order,
               double order_band, const std::string& csv_out) {
    ConfigHandle c;
    if (gfrk_status s = gfrk_config_load(path.c_str(), &c.cfg); s != GFRK_OK) return fail(s);
    std::vector<double> dts = parse_list(dts_csv);
    gfrk_refinement* r = nullptr;
    if (gfrk_status s = gfrk_run_refinement(c.cfg, dts.data(), dts.size(), &r); s != GFRK_OK)
        return fail(s);
    std::printf("%-14s %-16s %-16s\n", "dt", "l2", "linf");
    for (size_t i = 0; i < gfrk_refinement_levels(r); ++i) {
        double dt, l2, linf;
        gfrk_refinement_level(r, i, &dt, &l2, &linf);
        std::printf("%-14.8g %-16.10e %-16.10e\n", dt, l2, linf);
    }
    double o2, oinf;
    gfrk_refinement_orders(r, &o2, &oinf);
    std::printf("fitted order: l2 = %.4f, linf = %.4f\n", o2, oinf);
    if (!csv_out.empty()) {
        if (gfrk_status s = gfrk_refinement_write_csv(r, csv_out.c_str()); s != GFRK_OK) {
            gfrk_refinement_free(r);
            return fail(s);
        }
    }
    gfrk_refinement_free(r);
    if (expect_order > 0.0) {
        bool ok = o2 >= expect_order - order_band && o2 <= expect_order + order_band;
        std::printf("expected order %.2f +/- %.2f: %s\n", expect_order, order_band,
                    ok ? "PASS" : "FAIL");
        if (!ok) return 4;
    }
    return 0;
}

int cmd_maxdt(const std::string& path, const std::string& dts_csv, double ref_dt,
              double threshold) {
    ConfigHandle c;
    if (gfrk_status s = gfrk_config_load(path.c_str(), &c.cfg); s != GFRK_OK) return fail(s);
    std::vector<double> dts = parse_list(dts_csv);
    gfrk_maxdt* m = nullptr;
    if (gfrk_status s = gfrk_run_max_stable_dt(c.cfg, dts.data(), dts.size(), ref_dt, threshold,
                                               &m);
        s != GFRK_OK)
        return fail(s);
    std::printf("%-14s %-16s %s\n", "dt", "l2 deviation", "verdict");
    for (size_t i = 0; i < gfrk_maxdt_rows(m); ++i) {
        double dt, dev;
        int verdict;
        gfrk_maxdt_row(m, i, &dt, &dev, &verdict);
        std::printf("%-14.8g %-16.6e %s\n", dt, dev,
                    verdict == 1 ? "correct" : (verdict == 0 ? "incorrect" : "solver_failed"));
    }
    gfrk_maxdt_free(m);
    return 0;
}

int cmd_coarsen(const std::string& path, const std::string& window_csv) {
    ConfigHandle c;
    if (gfrk_status s = gfrk_config_load(path.c_str(), &c.cfg); s != GFRK_OK) return fail(s);
    std::vector<double> w = parse_list(window_csv);
    if (w.size() != 2) {
        std::fprintf(stderr, "error: --window expects 'lo,hi'\n");
        return 2;
    }
    gfrk_series* series = nullptr;
    double es = 0.0, rs = 0.0;
    if (gfrk_status s = gfrk_run_coarsening(c.cfg, w[0], w[1], &series, &es, &rs); s != GFRK_OK)
        return fail(s);
    std::printf("window [%g, %g]\n", w[0], w[1]);
    std::printf("energy slope:    %+.5f\n", es);
    std::printf("roughness slope: %+.5f\n", rs);
    gfrk_series_free(series);
    return 0;
}

int cmd_tableau_check(const std::string& name, const std::string& require_csv) {
    gfrk_tableau_report* rep = nullptr;
    if (gfrk_status s = gfrk_tableau_check(name.c_str(), &rep); s != GFRK_OK) return fail(s);
    int s_count = gfrk_tableau_report_stages(rep);
    bool dirk = gfrk_tableau_report_dirk(rep) != 0;
    std::printf("tableau: %s (s=%d, %s)\n", name.c_str(), s_count,
                dirk ? "diagonally implicit" : "fully implicit");
    std::printf("M matrix:\n");
    for (int i = 0; i < s_count; ++i) {
        for (int j = 0; j < s_count; ++j)
            std::printf("  % .16e", gfrk_tableau_report_m(rep, i, j));
        std::printf("\n");
    }
    std::printf("M eigenvalues:");
    for (int i = 0; i < s_count; ++i)
        std::printf(" % .16e", gfrk_tableau_report_m_eigenvalue(rep, i));
    std::printf("\n");

    int stable = gfrk_tableau_report_flag(rep, "algebraically_stable");
    int weights = gfrk_tableau_report_flag(rep, "weights_nonneg");
    int apsd = gfrk_tableau_report_flag(rep, "a_psd");
    int diag = gfrk_tableau_report_flag(rep, "diag_positive");
    int order4 = gfrk_tableau_report_flag(rep, "order4");
    std::printf("b weights nonnegative:    %s\n", weights ? "PASS" : "FAIL");
    std::printf("algebraically stable:     %s\n", stable ? "PASS" : "FAIL");
    std::printf("A positive semi-definite: %s\n", apsd ? "PASS" : "FAIL");
    std::printf("diagonal a_ii > 0:        %s\n", diag ? "PASS" : "FAIL");
    std::printf("order conditions p=4:     %s\n", order4 ? "PASS" : "FAIL");
    gfrk_tableau_report_free(rep);

    bool ok = true;
    for (const std::string& req : [&] {
             std::vector<std::string> out;
             std::size_t pos = 0;
             while (pos <= require_csv.size()) {
                 std::size_t comma = require_csv.find(',', pos);
                 out.push_back(require_csv.substr(
                     pos, comma == std::string::npos ? std::string::npos : comma - pos));
                 if (comma == std::string::npos) break;
                 pos = comma + 1;
             }
             return out;
         }()) {
        if (req == "stability") ok = ok && stable;
        else if (req == "order4") ok = ok && order4;
        else if (req == "apsd") ok = ok && apsd;
        else if (req == "diag") ok = ok && diag;
        else if (req == "solvability") ok = ok && (dirk ? diag : apsd);
        else if (!req.empty()) {
            std::fprintf(stderr, "error: unknown check '%s'\n", req.c_str());
            return 2;
        }
    }
    std::printf("result: %s\n", ok ? "PASS" : "FAIL");
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Linear energy-stable Runge-Kutta schemes for gradient flows"};
    app.require_subcommand(1);

    std::string config_path, dts_csv, window_csv, csv_out, check_arg;
    std::string require_csv = "stability,solvability,order4";
    double ref_dt = 0.0, threshold = 0.05, expect_order = 0.0, order_band = 0.25;

    CLI::App* run = app.add_subcommand("run", "Run one simulation from a config file");
    run->add_option("config", config_path)->required();

    CLI::App* pc = app.add_subcommand("print-config", "Echo a config in canonical form");
    pc->add_option("config", config_path)->required();

    CLI::App* refine = app.add_subcommand("refine", "Time-step refinement study (MMS)");
    refine->add_option("config", config_path)->required();
    refine->add_option("--dts", dts_csv, "comma-separated step sizes, descending")->required();
    refine->add_option("--expect-order", expect_order, "exit 4 unless the fitted L2 order matches");
    refine->add_option("--order-band", order_band, "tolerance band for --expect-order");
    refine->add_option("--csv", csv_out, "write dt,l2,linf rows to this file");

    CLI::App* maxdt = app.add_subcommand("maxdt", "Maximum stable time step study");
    maxdt->add_option("config", config_path)->required();
    maxdt->add_option("--dts", dts_csv, "comma-separated step sizes, descending")->required();
    maxdt->add_option("--ref-dt", ref_dt, "reference step size")->required();
    maxdt->add_option("--threshold", threshold, "relative L2 deviation for 'correct'");

    CLI::App* coarsen = app.add_subcommand("coarsen", "Coarsening run with power-law fit");
    coarsen->add_option("config", config_path)->required();
    coarsen->add_option("--window", window_csv, "fit window 'lo,hi'")->required();

    CLI::App* tab = app.add_subcommand("tableau", "Runge-Kutta tableau utilities");
    CLI::App* check = tab->add_subcommand("check", "Certify stability/solvability/order");
    check->add_option("name", check_arg, "gauss4, dirk4 or a tableau file")->required();
    check->add_option("--require", require_csv,
                      "checks gating the exit code (stability,solvability,order4,apsd,diag)");

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) return cmd_run(config_path);
    if (pc->parsed()) return cmd_print_config(config_path);
    if (refine->parsed()) return cmd_refine(config_path, dts_csv, expect_order, order_band, csv_out);
    if (maxdt->parsed()) return cmd_maxdt(config_path, dts_csv, ref_dt, threshold);
    if (coarsen->parsed()) return cmd_coarsen(config_path, window_csv);
    if (tab->parsed() && check->parsed()) return cmd_tableau_check(check_arg, require_csv);
    return 1;
}
