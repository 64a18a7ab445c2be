#include "core/diagnostics.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace gfrk {

namespace {

std::string g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

}  // namespace

void TimeSeries::append(const SeriesRow& r) {
    if (!rows.empty() && r.t <= rows.back().t)
        throw std::invalid_argument("TimeSeries: t must be strictly increasing");
    rows.push_back(r);
}

std::string series_to_csv(const TimeSeries& s) {
    std::string out = "t,energy,energy_eq,mass,roughness\n";
    for (const SeriesRow& r : s.rows) {
        out += g17(r.t);
        out += ',';
        out += g17(r.energy);
        out += ',';
        out += g17(r.energy_eq);
        out += ',';
        out += g17(r.mass);
        out += ',';
        out += g17(r.roughness);
        out += '\n';
    }
    return out;
}

void write_series_csv(const std::string& path, const TimeSeries& s) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("write_series_csv: cannot open '" + path + "'");
    f << series_to_csv(s);
}

TimeSeries parse_series_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "t,energy,energy_eq,mass,roughness")
        throw std::runtime_error("parse_series_csv: bad header");
    TimeSeries s;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        SeriesRow r;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf", &r.t, &r.energy, &r.energy_eq,
                        &r.mass, &r.roughness) != 5)
            throw std::runtime_error("parse_series_csv: bad row '" + line + "'");
        s.append(r);
    }
    return s;
}

std::string refinement_to_csv(const RefinementResult& r) {
    std::string out = "dt,l2,linf\n";
    for (std::size_t i = 0; i < r.dts.size(); ++i) {
        out += g17(r.dts[i]);
        out += ',';
        out += g17(r.l2_errors[i]);
        out += ',';
        out += g17(r.linf_errors[i]);
        out += '\n';
    }
    return out;
}

void write_refinement_csv(const std::string& path, const RefinementResult& r) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("write_refinement_csv: cannot open '" + path + "'");
    f << refinement_to_csv(r);
}

RefinementResult parse_refinement_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "dt,l2,linf")
        throw std::runtime_error("parse_refinement_csv: bad header");
    RefinementResult r;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        double dt, l2, linf;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &dt, &l2, &linf) != 3)
            throw std::runtime_error("parse_refinement_csv: bad row '" + line + "'");
        r.dts.push_back(dt);
        r.l2_errors.push_back(l2);
        r.linf_errors.push_back(linf);
    }
    return r;
}

double l2_error(const Field& num, const Field& exact) {
    if (!num.grid()->same_as(*exact.grid()))
        throw std::invalid_argument("l2_error: fields live on different grids");
    double acc = 0.0;
    for (int n = 0; n < num.size(); ++n) {
        double d = num[n] - exact[n];
        acc += d * d;
    }
    return std::sqrt(num.grid()->hx() * num.grid()->hy() * acc);
}

double linf_error(const Field& num, const Field& exact) {
    if (!num.grid()->same_as(*exact.grid()))
        throw std::invalid_argument("linf_error: fields live on different grids");
    double m = 0.0;
    for (int n = 0; n < num.size(); ++n) m = std::max(m, std::abs(num[n] - exact[n]));
    return m;
}

double roughness(const Field& phi) {
    double mean = field_mean(phi);
    double acc = 0.0;
    for (int n = 0; n < phi.size(); ++n) {
        double d = phi[n] - mean;
        acc += d * d;
    }
    return std::sqrt(acc / phi.size());
}

double mass(const Field& phi) {
    double acc = 0.0;
    for (int n = 0; n < phi.size(); ++n) acc += phi[n];
    return phi.grid()->hx() * phi.grid()->hy() * acc;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("loglog_slope: need >= 2 points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0))
            throw std::invalid_argument("loglog_slope: values must be positive");
        double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::pair<double, double> fit_order(const RefinementResult& r) {
    if (r.dts.size() < 3)
        throw std::invalid_argument("fit_order: need at least 3 refinement levels");
    for (std::size_t i = 1; i < r.dts.size(); ++i)
        if (r.dts[i] >= r.dts[i - 1])
            throw std::invalid_argument("fit_order: dts must be strictly decreasing");
    return {loglog_slope(r.dts, r.l2_errors), loglog_slope(r.dts, r.linf_errors)};
}

double gauss_dissipation_residual(const GradientFlowModel& m, SpectralWorkspace& ws,
                                  const ButcherTableau& t, const StageRecord& rec,
                                  const EQState& before, const EQState& after, double dt) {
    if (t.name != "gauss4")
        throw std::invalid_argument("gauss_dissipation_residual: defined for the Gauss table only");
    double dF = m.energy_quadratized(ws, after) - m.energy_quadratized(ws, before);
    double rate = 0.0;
    for (int i = 0; i < t.s; ++i) {
        Field mu = m.chemical_potential(ws, rec.phi_stages[i], rec.q_stages[i], rec.phi_star[i]);
        rate += t.b[i] * inner(mu, m.apply_mobility(ws, mu));
    }
    return std::abs(dF - dt * rate);
}

}  // namespace gfrk
