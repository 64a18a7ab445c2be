#pragma once

#include <cstddef>
#include <functional>

namespace gfrk {

struct GmresResult {
    bool converged = false;
    int iterations = 0;       // total inner iterations across restarts
    double rel_residual = 0;  // true residual / ||b|| on exit
};

// Restarted GMRES with optional right preconditioning (flexible variant: the
// preconditioned basis is stored, so the reported residual is the true one).
// Starts from x = 0; a zero right-hand side returns x = 0 immediately.
GmresResult gmres(std::size_t n,
                  const std::function<void(const double*, double*)>& apply_op,
                  const std::function<void(const double*, double*)>& apply_prec,  // may be empty
                  const double* b, double* x, double rel_tol, int max_iters, int restart = 50);

}  // namespace gfrk
