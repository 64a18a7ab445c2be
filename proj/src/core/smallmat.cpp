#include "core/smallmat.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace gfrk {

std::vector<double> jacobi_eigenvalues(const std::vector<double>& sym, int n) {
    if (n <= 0 || static_cast<int>(sym.size()) != n * n)
        throw std::invalid_argument("jacobi_eigenvalues: bad dimensions");
    std::vector<double> a = sym;
    auto at = [&](int i, int j) -> double& { return a[i * n + j]; };

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0, diag = 0.0;
        for (int i = 0; i < n; ++i) {
            diag += std::abs(at(i, i));
            for (int j = i + 1; j < n; ++j) off += std::abs(at(i, j));
        }
        if (off <= 1e-16 * std::max(diag, 1e-300)) break;

        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                double apq = at(p, q);
                if (apq == 0.0) continue;
                double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
                double t = (theta >= 0.0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                for (int k = 0; k < n; ++k) {
                    double akp = at(k, p), akq = at(k, q);
                    at(k, p) = c * akp - s * akq;
                    at(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    double apk = at(p, k), aqk = at(q, k);
                    at(p, k) = c * apk - s * aqk;
                    at(q, k) = s * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> ev(n);
    for (int i = 0; i < n; ++i) ev[i] = at(i, i);
    std::sort(ev.begin(), ev.end());
    return ev;
}

std::vector<double> solve_dense(const std::vector<double>& a_in, const std::vector<double>& b_in, int n) {
    if (static_cast<int>(a_in.size()) != n * n || static_cast<int>(b_in.size()) != n)
        throw std::invalid_argument("solve_dense: bad dimensions");
    std::vector<double> a = a_in, b = b_in;
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a[r * n + col]) > std::abs(a[piv * n + col])) piv = r;
        if (a[piv * n + col] == 0.0) throw std::runtime_error("solve_dense: singular matrix");
        if (piv != col) {
            for (int j = 0; j < n; ++j) std::swap(a[col * n + j], a[piv * n + j]);
            std::swap(b[col], b[piv]);
        }
        double inv = 1.0 / a[col * n + col];
        for (int r = col + 1; r < n; ++r) {
            double f = a[r * n + col] * inv;
            if (f == 0.0) continue;
            for (int j = col; j < n; ++j) a[r * n + j] -= f * a[col * n + j];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(n);
    for (int r = n - 1; r >= 0; --r) {
        double acc = b[r];
        for (int j = r + 1; j < n; ++j) acc -= a[r * n + j] * x[j];
        x[r] = acc / a[r * n + r];
    }
    return x;
}

void solve_shifted_complex(const double* a, int n, double scale,
                           const std::complex<double>* b, std::complex<double>* x) {
    // Stack-allocated elimination; n is the stage count.
    double m[kSmallMatMax * kSmallMatMax];
    std::complex<double> r[kSmallMatMax];
    for (int i = 0; i < n; ++i) {
        r[i] = b[i];
        for (int j = 0; j < n; ++j)
            m[i * n + j] = (i == j ? 1.0 : 0.0) - scale * a[i * n + j];
    }
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int row = col + 1; row < n; ++row)
            if (std::abs(m[row * n + col]) > std::abs(m[piv * n + col])) piv = row;
        if (piv != col) {
            for (int j = col; j < n; ++j) std::swap(m[col * n + j], m[piv * n + j]);
            std::swap(r[col], r[piv]);
        }
        double inv = 1.0 / m[col * n + col];
        for (int row = col + 1; row < n; ++row) {
            double f = m[row * n + col] * inv;
            if (f == 0.0) continue;
            for (int j = col; j < n; ++j) m[row * n + j] -= f * m[col * n + j];
            r[row] -= f * r[col];
        }
    }
    for (int row = n - 1; row >= 0; --row) {
        std::complex<double> acc = r[row];
        for (int j = row + 1; j < n; ++j) acc -= m[row * n + j] * x[j];
        x[row] = acc / m[row * n + row];
    }
}

std::vector<double> lagrange_weights(const std::vector<double>& nodes, double x) {
    const int n = static_cast<int>(nodes.size());
    std::vector<double> w(n, 1.0);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            double denom = nodes[i] - nodes[j];
            if (denom == 0.0) throw std::invalid_argument("lagrange_weights: repeated node");
            w[i] *= (x - nodes[j]) / denom;
        }
    }
    return w;
}

}  // namespace gfrk
