#pragma once

#include <complex>
#include <vector>

namespace gfrk {

// Dense helpers for the small (s <= 8) systems that show up in tableau
// analysis, extrapolation stencils and the per-Fourier-mode stage solves.

// Eigenvalues of a symmetric n x n matrix (row-major), ascending.
// Cyclic Jacobi rotations; intended for the tableau-sized problems.
std::vector<double> jacobi_eigenvalues(const std::vector<double>& sym, int n);

// Solve A x = b in place for a real n x n matrix (row-major, copied
// internally) with one real right-hand side. Partial pivoting.
std::vector<double> solve_dense(const std::vector<double>& a, const std::vector<double>& b, int n);

// Per-mode stage solve: (I - scale * A) x = b with real tableau matrix A and
// complex right-hand side/solution, n <= GFRK_SMALLMAT_MAX entries.
inline constexpr int kSmallMatMax = 8;
void solve_shifted_complex(const double* a, int n, double scale,
                           const std::complex<double>* b, std::complex<double>* x);

// Lagrange basis weights for interpolation nodes evaluated at x:
// result[i] = prod_{j != i} (x - nodes[j]) / (nodes[i] - nodes[j]).
std::vector<double> lagrange_weights(const std::vector<double>& nodes, double x);

}  // namespace gfrk
