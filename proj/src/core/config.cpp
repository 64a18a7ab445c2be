#include "core/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>

namespace gfrk {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

bool near_integer(double r) {
    return std::abs(r - std::round(r)) <= 2.0 * std::numeric_limits<double>::epsilon() *
                                              std::max(1.0, std::abs(r));
}

double parse_double(const std::string& key, const std::string& v, int line) {
    std::size_t pos = 0;
    double x;
    try {
        x = std::stod(v, &pos);
    } catch (const std::exception&) {
        throw ConfigError("line " + std::to_string(line) + ": " + key +
                              " expects a number, got '" + v + "'",
                          line);
    }
    if (pos != v.size())
        throw ConfigError("line " + std::to_string(line) + ": trailing characters after " + key,
                          line);
    return x;
}

long parse_int(const std::string& key, const std::string& v, int line) {
    double x = parse_double(key, v, line);
    if (!near_integer(x))
        throw ConfigError("line " + std::to_string(line) + ": " + key + " expects an integer",
                          line);
    return static_cast<long>(std::llround(x));
}

}  // namespace

int RunConfig::steps() const {
    return static_cast<int>(std::llround(t_end / dt));
}

SolverConfig RunConfig::solver_config() const {
    SolverConfig s;
    s.krylov_rel_tol = krylov_rel_tol;
    s.krylov_max_iters = krylov_max_iters;
    s.pc_iters = scheme == "leqrk" ? 0 : pc_iters;
    s.pc_tol = pc_tol;
    return s;
}

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::set<std::string> seen;
    bool have_dt = false, have_t_end = false;

    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string s = raw;
        if (std::size_t h = s.find('#'); h != std::string::npos) s.erase(h);
        s = trim(s);
        if (s.empty()) continue;
        std::size_t eq = s.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line) + ": expected 'key = value'", line);
        std::string key = trim(s.substr(0, eq));
        std::string value = trim(s.substr(eq + 1));
        if (key.empty())
            throw ConfigError("line " + std::to_string(line) + ": empty key", line);
        if (!seen.insert(key).second)
            throw ConfigError("line " + std::to_string(line) + ": duplicate key '" + key + "'",
                              line);

        if (key == "model") {
            if (value != "cahn_hilliard" && value != "mbe")
                throw ConfigError("line " + std::to_string(line) +
                                      ": model must be cahn_hilliard or mbe",
                                  line);
            cfg.model = value;
        } else if (key == "scheme") {
            if (value != "leqrk" && value != "leqrk_pc" && value != "cs2")
                throw ConfigError("line " + std::to_string(line) +
                                      ": scheme must be leqrk, leqrk_pc or cs2",
                                  line);
            cfg.scheme = value;
        } else if (key == "tableau") {
            if (value != "gauss4" && value != "dirk4")
                throw ConfigError("line " + std::to_string(line) +
                                      ": tableau must be gauss4 or dirk4",
                                  line);
            cfg.tableau = value;
        } else if (key == "pc_iters") {
            long v = parse_int(key, value, line);
            if (v < 0) throw ConfigError("line " + std::to_string(line) + ": pc_iters must be >= 0", line);
            cfg.pc_iters = static_cast<int>(v);
        } else if (key == "pc_tol") {
            cfg.pc_tol = parse_double(key, value, line);
            if (!(cfg.pc_tol > 0.0))
                throw ConfigError("line " + std::to_string(line) + ": pc_tol must be positive", line);
        } else if (key == "nx" || key == "ny") {
            long v = parse_int(key, value, line);
            if (v <= 0 || v % 2 != 0)
                throw ConfigError("line " + std::to_string(line) + ": " + key +
                                      " must be a positive even integer",
                                  line);
            (key == "nx" ? cfg.nx : cfg.ny) = static_cast<int>(v);
        } else if (key == "lx" || key == "ly") {
            double v = parse_double(key, value, line);
            if (!(v > 0.0))
                throw ConfigError("line " + std::to_string(line) + ": " + key + " must be positive",
                                  line);
            (key == "lx" ? cfg.lx : cfg.ly) = v;
        } else if (key == "dt") {
            cfg.dt = parse_double(key, value, line);
            if (!(cfg.dt > 0.0))
                throw ConfigError("line " + std::to_string(line) + ": dt must be positive", line);
            have_dt = true;
        } else if (key == "t_end") {
            cfg.t_end = parse_double(key, value, line);
            if (!(cfg.t_end > 0.0))
                throw ConfigError("line " + std::to_string(line) + ": t_end must be positive", line);
            have_t_end = true;
        } else if (key == "lambda") {
            cfg.lambda = parse_double(key, value, line);
            if (!(cfg.lambda > 0.0))
                throw ConfigError("line " + std::to_string(line) + ": lambda must be positive", line);
        } else if (key == "epsilon" || key == "epsilon_sq") {
            if (seen.count(key == "epsilon" ? "epsilon_sq" : "epsilon"))
                throw ConfigError("line " + std::to_string(line) +
                                      ": give either epsilon or epsilon_sq, not both",
                                  line);
            double v = parse_double(key, value, line);
            if (!(v > 0.0))
                throw ConfigError("line " + std::to_string(line) + ": " + key + " must be positive",
                                  line);
            cfg.epsilon = v;
            cfg.epsilon_is_sq = (key == "epsilon_sq");
        } else if (key == "gamma") {
            cfg.gamma = parse_double(key, value, line);
            if (cfg.gamma < 0.0)
                throw ConfigError("line " + std::to_string(line) + ": gamma must be >= 0", line);
        } else if (key == "initial") {
            if (value == "mms" || value == "cosine_combo") {
                cfg.initial = value;
            } else if (value.rfind("random(", 0) == 0 && value.back() == ')') {
                std::string args = value.substr(7, value.size() - 8);
                std::size_t comma = args.find(',');
                if (comma == std::string::npos)
                    throw ConfigError("line " + std::to_string(line) +
                                          ": initial = random(amplitude, seed)",
                                      line);
                cfg.initial = "random";
                cfg.initial_amplitude = parse_double("random amplitude", trim(args.substr(0, comma)), line);
                long seed = parse_int("random seed", trim(args.substr(comma + 1)), line);
                if (seed < 0)
                    throw ConfigError("line " + std::to_string(line) + ": seed must be >= 0", line);
                cfg.initial_seed = static_cast<std::uint64_t>(seed);
            } else if (value.rfind("file(", 0) == 0 && value.back() == ')') {
                cfg.initial = "file";
                cfg.initial_file = trim(value.substr(5, value.size() - 6));
                if (cfg.initial_file.empty())
                    throw ConfigError("line " + std::to_string(line) + ": initial = file(path)", line);
            } else {
                throw ConfigError("line " + std::to_string(line) +
                                      ": initial must be mms, cosine_combo, random(a, seed) or file(path)",
                                  line);
            }
        } else if (key == "forcing") {
            if (value != "none" && value != "mms")
                throw ConfigError("line " + std::to_string(line) + ": forcing must be none or mms",
                                  line);
            cfg.forcing = value;
        } else if (key == "series_path") {
            cfg.series_path = value;
        } else if (key == "snapshot_dir") {
            cfg.snapshot_dir = value.empty() ? "." : value;
        } else if (key == "snapshot_times") {
            cfg.snapshot_times.clear();
            std::string rest = value;
            while (!rest.empty()) {
                std::size_t comma = rest.find(',');
                std::string tok = trim(comma == std::string::npos ? rest : rest.substr(0, comma));
                rest = comma == std::string::npos ? "" : rest.substr(comma + 1);
                if (tok.empty()) continue;
                cfg.snapshot_times.push_back(parse_double("snapshot_times", tok, line));
            }
        } else if (key == "krylov_rel_tol") {
            cfg.krylov_rel_tol = parse_double(key, value, line);
            if (!(cfg.krylov_rel_tol > 0.0))
                throw ConfigError("line " + std::to_string(line) + ": krylov_rel_tol must be positive",
                                  line);
        } else if (key == "krylov_max_iters") {
            long v = parse_int(key, value, line);
            if (v <= 0)
                throw ConfigError("line " + std::to_string(line) + ": krylov_max_iters must be positive",
                                  line);
            cfg.krylov_max_iters = static_cast<int>(v);
        } else {
            throw ConfigError("line " + std::to_string(line) + ": unknown key '" + key + "'", line);
        }
    }

    if (!have_dt) throw ConfigError("missing required key 'dt'");
    if (!have_t_end) throw ConfigError("missing required key 't_end'");

    if (cfg.ny == 0) cfg.ny = cfg.nx;
    if (cfg.lx == 0.0) cfg.lx = kTwoPi;
    if (cfg.ly == 0.0) cfg.ly = cfg.lx;

    if (!near_integer(cfg.t_end / cfg.dt))
        throw ConfigError("t_end/dt = " + g17(cfg.t_end / cfg.dt) +
                          " is not an integer; uniform stepping requires t_end to be a multiple of dt");
    bool needs_2pi = cfg.forcing == "mms" || cfg.initial == "mms";
    if (needs_2pi &&
        (std::abs(cfg.lx - kTwoPi) > 1e-12 || std::abs(cfg.ly - kTwoPi) > 1e-12))
        throw ConfigError("forcing/initial = mms requires lx = ly = 2*pi");
    for (double t : cfg.snapshot_times) {
        if (t < 0.0 || t > cfg.t_end)
            throw ConfigError("snapshot time " + g17(t) + " outside [0, t_end]");
        if (!near_integer(t / cfg.dt))
            throw ConfigError("snapshot time " + g17(t) + " is not a multiple of dt");
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string print_config(const RunConfig& cfg) {
    std::ostringstream out;
    out << "model = " << cfg.model << "\n";
    out << "scheme = " << cfg.scheme << "\n";
    out << "tableau = " << cfg.tableau << "\n";
    out << "pc_iters = " << cfg.pc_iters << "\n";
    out << "pc_tol = " << g17(cfg.pc_tol) << "\n";
    out << "nx = " << cfg.nx << "\n";
    out << "ny = " << cfg.ny << "\n";
    out << "lx = " << g17(cfg.lx) << "\n";
    out << "ly = " << g17(cfg.ly) << "\n";
    out << "dt = " << g17(cfg.dt) << "\n";
    out << "t_end = " << g17(cfg.t_end) << "\n";
    out << "lambda = " << g17(cfg.lambda) << "\n";
    out << (cfg.epsilon_is_sq ? "epsilon_sq = " : "epsilon = ") << g17(cfg.epsilon) << "\n";
    out << "gamma = " << g17(cfg.gamma) << "\n";
    if (cfg.initial == "random")
        out << "initial = random(" << g17(cfg.initial_amplitude) << ", " << cfg.initial_seed
            << ")\n";
    else if (cfg.initial == "file")
        out << "initial = file(" << cfg.initial_file << ")\n";
    else
        out << "initial = " << cfg.initial << "\n";
    out << "forcing = " << cfg.forcing << "\n";
    out << "series_path = " << cfg.series_path << "\n";
    out << "snapshot_times = ";
    for (std::size_t i = 0; i < cfg.snapshot_times.size(); ++i)
        out << (i ? "," : "") << g17(cfg.snapshot_times[i]);
    out << "\n";
    out << "snapshot_dir = " << cfg.snapshot_dir << "\n";
    out << "krylov_rel_tol = " << g17(cfg.krylov_rel_tol) << "\n";
    out << "krylov_max_iters = " << cfg.krylov_max_iters << "\n";
    return out.str();
}

}  // namespace gfrk
