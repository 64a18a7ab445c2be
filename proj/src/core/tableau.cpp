#include "core/tableau.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "core/smallmat.hpp"

namespace gfrk {

namespace {

ButcherTableau make(std::string name, int s, std::vector<double> a, std::vector<double> b,
                    TableauKind kind) {
    ButcherTableau t;
    t.name = std::move(name);
    t.s = s;
    t.a = std::move(a);
    t.b = std::move(b);
    t.c.assign(s, 0.0);
    for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j) t.c[i] += t.a[i * s + j];
    t.kind = kind;
    return t;
}

}  // namespace

ButcherTableau gauss4() {
    const double r = std::sqrt(3.0) / 6.0;
    return make("gauss4", 2,
                {0.25, 0.25 - r,
                 0.25 + r, 0.25},
                {0.5, 0.5}, TableauKind::FullyImplicit);
}

ButcherTableau dirk4() {
    const double sigma = std::cos(std::numbers::pi / 18.0) / std::sqrt(3.0) + 0.5;
    const double mu = 1.0 / (6.0 * (2.0 * sigma - 1.0) * (2.0 * sigma - 1.0));
    return make("dirk4", 3,
                {sigma, 0.0, 0.0,
                 0.5 - sigma, sigma, 0.0,
                 2.0 * sigma, 1.0 - 4.0 * sigma, sigma},
                {mu, 1.0 - 2.0 * mu, mu}, TableauKind::DiagonallyImplicit);
}

ButcherTableau tableau_by_name(const std::string& name) {
    if (name == "gauss4") return gauss4();
    if (name == "dirk4") return dirk4();
    throw std::invalid_argument("unknown tableau '" + name + "' (expected gauss4 or dirk4)");
}

ButcherTableau tableau_from_text(const std::string& text) {
    std::istringstream in(text);
    int s = 0;
    if (!(in >> s) || s <= 0 || s > kSmallMatMax)
        throw std::invalid_argument("tableau file: stage count must be in 1.." +
                                    std::to_string(kSmallMatMax));
    std::vector<double> a(s * s), b(s);
    for (int i = 0; i < s * s; ++i)
        if (!(in >> a[i])) throw std::invalid_argument("tableau file: expected s rows of a");
    for (int i = 0; i < s; ++i)
        if (!(in >> b[i])) throw std::invalid_argument("tableau file: expected one line of b");

    bool strictly_lower = true;
    for (int i = 0; i < s && strictly_lower; ++i)
        for (int j = i + 1; j < s; ++j)
            if (a[i * s + j] != 0.0) { strictly_lower = false; break; }
    return make("custom", s, std::move(a), std::move(b),
                strictly_lower ? TableauKind::DiagonallyImplicit : TableauKind::FullyImplicit);
}

ButcherTableau tableau_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open tableau file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return tableau_from_text(buf.str());
}

void validate_tableau(const ButcherTableau& t) {
    if (t.s <= 0 || static_cast<int>(t.a.size()) != t.s * t.s ||
        static_cast<int>(t.b.size()) != t.s || static_cast<int>(t.c.size()) != t.s)
        throw std::invalid_argument("tableau: inconsistent sizes");
    for (int i = 0; i < t.s; ++i) {
        double row = 0.0;
        for (int j = 0; j < t.s; ++j) row += t.aij(i, j);
        if (std::abs(row - t.c[i]) > 1e-14)
            throw std::invalid_argument("tableau: c[i] must equal the row sums of a");
    }
    if (t.kind == TableauKind::DiagonallyImplicit) {
        for (int i = 0; i < t.s; ++i)
            for (int j = i + 1; j < t.s; ++j)
                if (t.aij(i, j) != 0.0)
                    throw std::invalid_argument("tableau: diagonally implicit table has a_ij != 0 above the diagonal");
    }
}

StabilityReport stability_report(const ButcherTableau& t, double tol) {
    if (tol < 0.0) throw std::invalid_argument("stability_report: tol must be >= 0");
    validate_tableau(t);
    const int s = t.s;
    StabilityReport rep;

    rep.m.assign(s * s, 0.0);
    for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j)
            rep.m[i * s + j] = t.b[i] * t.aij(i, j) + t.b[j] * t.aij(j, i) - t.b[i] * t.b[j];

    rep.weights_nonneg = true;
    for (double bi : t.b)
        if (bi < 0.0) rep.weights_nonneg = false;

    rep.m_eigenvalues = jacobi_eigenvalues(rep.m, s);
    rep.m_min_eigenvalue = rep.m_eigenvalues.front();
    double radius = std::max(std::abs(rep.m_eigenvalues.front()), std::abs(rep.m_eigenvalues.back()));
    rep.algebraically_stable =
        rep.weights_nonneg && rep.m_min_eigenvalue >= -tol * (1.0 + radius);

    std::vector<double> sym(s * s);
    for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j) sym[i * s + j] = 0.5 * (t.aij(i, j) + t.aij(j, i));
    auto ev = jacobi_eigenvalues(sym, s);
    double aradius = std::max(std::abs(ev.front()), std::abs(ev.back()));
    rep.a_psd = ev.front() >= -tol * (1.0 + aradius);

    rep.diag_positive = true;
    for (int i = 0; i < s; ++i)
        if (t.aij(i, i) <= 0.0) rep.diag_positive = false;

    return rep;
}

bool check_order_conditions(const ButcherTableau& t, int p) {
    if (p < 1 || p > 4)
        throw std::invalid_argument("check_order_conditions: only orders 1..4 are implemented");
    validate_tableau(t);
    const int s = t.s;
    const double tol = 1e-12;
    auto ok = [&](double value, double target) { return std::abs(value - target) <= tol; };

    double sb = 0.0, sbc = 0.0, sbc2 = 0.0, sbc3 = 0.0;
    for (int i = 0; i < s; ++i) {
        sb += t.b[i];
        sbc += t.b[i] * t.c[i];
        sbc2 += t.b[i] * t.c[i] * t.c[i];
        sbc3 += t.b[i] * t.c[i] * t.c[i] * t.c[i];
    }
    double sbac = 0.0, sbcac = 0.0, sbac2 = 0.0, sbaac = 0.0;
    for (int i = 0; i < s; ++i) {
        for (int j = 0; j < s; ++j) {
            sbac += t.b[i] * t.aij(i, j) * t.c[j];
            sbcac += t.b[i] * t.c[i] * t.aij(i, j) * t.c[j];
            sbac2 += t.b[i] * t.aij(i, j) * t.c[j] * t.c[j];
            for (int k = 0; k < s; ++k)
                sbaac += t.b[i] * t.aij(i, j) * t.aij(j, k) * t.c[k];
        }
    }

    if (!ok(sb, 1.0)) return false;
    if (p >= 2 && !ok(sbc, 0.5)) return false;
    if (p >= 3 && !(ok(sbc2, 1.0 / 3.0) && ok(sbac, 1.0 / 6.0))) return false;
    if (p >= 4 && !(ok(sbc3, 0.25) && ok(sbcac, 0.125) && ok(sbac2, 1.0 / 12.0) &&
                    ok(sbaac, 1.0 / 24.0)))
        return false;
    return true;
}

}  // namespace gfrk
