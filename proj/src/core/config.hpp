#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "core/integrator.hpp"
#include "core/model.hpp"

namespace gfrk {

struct ConfigError : std::runtime_error {
    ConfigError(const std::string& what, int line = 0) : std::runtime_error(what), line(line) {}
    int line;  // 1-based source line, 0 when not tied to one
};

/// One experiment's worth of settings, parsed from "key = value" lines
/// ('#' starts a comment, unknown keys are errors). Defaults: gamma = 1,
/// pc_iters = 5, krylov_rel_tol = 1e-12, domain [0,2pi]^2.
struct RunConfig {
    std::string model = "cahn_hilliard";  // cahn_hilliard | mbe
    std::string scheme = "leqrk_pc";      // leqrk | leqrk_pc | cs2
    std::string tableau = "gauss4";       // gauss4 | dirk4
    int pc_iters = 5;
    double pc_tol = 1e-10;
    int nx = 128;
    int ny = 0;       // 0 -> nx
    double lx = 0.0;  // 0 -> 2*pi
    double ly = 0.0;  // 0 -> lx
    double dt = 0.0;     // required
    double t_end = 0.0;  // required
    double lambda = 1.0;
    double epsilon = 1.0;       // value of whichever key was given
    bool epsilon_is_sq = false;  // true when the config said epsilon_sq
    double gamma = 1.0;
    std::string initial = "cosine_combo";  // cosine_combo | mms | random(a, seed) | file(path)
    double initial_amplitude = 0.0;
    std::uint64_t initial_seed = 0;
    std::string initial_file;
    std::string forcing = "none";  // none | mms
    std::string series_path;
    std::vector<double> snapshot_times;
    std::string snapshot_dir = ".";
    double krylov_rel_tol = 1e-12;
    int krylov_max_iters = 500;

    double eps_sq() const { return epsilon_is_sq ? epsilon : epsilon * epsilon; }
    int steps() const;  // t_end / dt, validated to be integral
    SolverConfig solver_config() const;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

// Canonical form: every key, fixed order, %.17g numbers. Re-parsing the
// output and printing again is byte-identical.
std::string print_config(const RunConfig& cfg);

}  // namespace gfrk
