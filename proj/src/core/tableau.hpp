#pragma once

#include <string>
#include <vector>

namespace gfrk {

enum class TableauKind { FullyImplicit, DiagonallyImplicit };

/// Runge-Kutta coefficient table. Immutable after construction; abscissae
/// are always the row sums of a.
struct ButcherTableau {
    std::string name;  // "gauss4", "dirk4" or "custom"
    int s = 0;
    std::vector<double> a;  // s*s row-major
    std::vector<double> b;  // s
    std::vector<double> c;  // s
    TableauKind kind = TableauKind::FullyImplicit;

    double aij(int i, int j) const { return a[i * s + j]; }
};

// The two 4th-order algebraically stable tables used throughout.
ButcherTableau gauss4();
ButcherTableau dirk4();

// Resolves "gauss4"/"dirk4"; throws std::invalid_argument otherwise.
ButcherTableau tableau_by_name(const std::string& name);

// Plain-text format: line 1 is s, then s rows of a, then one line of b.
// c is derived from the row sums; kind from the zero pattern of a.
ButcherTableau tableau_from_file(const std::string& path);
ButcherTableau tableau_from_text(const std::string& text);

// Consistency checks on the stored coefficients (row sums match c to 1e-14,
// strict lower-triangular pattern when diagonally implicit). Throws on
// violation.
void validate_tableau(const ButcherTableau& t);

/// Algebraic-stability certificate: M_ij = b_i a_ij + b_j a_ji - b_i b_j,
/// weights sign, and the two solvability hypotheses (A PSD; a_ii > 0).
struct StabilityReport {
    std::vector<double> m;              // s*s, symmetric
    std::vector<double> m_eigenvalues;  // ascending
    bool weights_nonneg = false;
    double m_min_eigenvalue = 0.0;
    bool algebraically_stable = false;
    bool a_psd = false;
    bool diag_positive = false;
};

// An eigenvalue counts as nonnegative when >= -tol*(1 + spectral radius).
StabilityReport stability_report(const ButcherTableau& t, double tol = 1e-12);

// Rooted-tree order conditions up to p (1 <= p <= 4, 8 conditions at p=4),
// each satisfied to within 1e-12. Throws std::invalid_argument for p outside
// the implemented range.
bool check_order_conditions(const ButcherTableau& t, int p);

}  // namespace gfrk
