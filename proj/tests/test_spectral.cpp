#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>
#include <random>

#include "core/snapshot.hpp"
#include "core/spectral.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace gfrk;
using gfrk::testing::random_smooth_field;

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

GridPtr unit_grid(int n = 32) { return Grid::make(n, n, kTwoPi, kTwoPi); }
}  // namespace

TEST_CASE("grid construction and wavenumbers") {
    auto g = Grid::make(16, 8, kTwoPi, 4.0);
    CHECK(g->hx() * g->nx() == g->lx());
    CHECK(g->hy() * g->ny() == g->ly());
    CHECK(g->kx(0) == 0.0);
    CHECK(g->kx(1) == doctest::Approx(1.0));
    CHECK(g->kx(8) == doctest::Approx(8.0));   // Nyquist kept positive
    CHECK(g->kx(15) == doctest::Approx(-1.0));
    CHECK(g->ky(1) == doctest::Approx(kTwoPi / 4.0));
    // Each integer multiple appears exactly once.
    std::vector<int> seen(16, 0);
    for (int i = 0; i < 16; ++i) {
        int m = static_cast<int>(std::lround(g->kx(i)));
        seen[(m + 16) % 16]++;
    }
    for (int c : seen) CHECK(c == 1);

    CHECK_THROWS(Grid::make(15, 16, 1.0, 1.0));
    CHECK_THROWS(Grid::make(16, 16, -1.0, 1.0));
}

TEST_CASE("forward: constant field concentrates in mode zero") {
    auto g = unit_grid(16);
    SpectralWorkspace ws(g);
    Field f(g, 3.0);
    SpectralField hat = ws.forward(f);
    CHECK(hat.mode(0, 0).real() == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(std::abs(hat.mode(0, 0).imag()) < 1e-15);
    for (int i = 0; i < 16; ++i)
        for (int j = 0; j < 16; ++j)
            if (i || j) CHECK(std::abs(hat(i, j)) < 1e-14);
}

TEST_CASE("forward: cos(x) splits into the +-1 modes") {
    auto g = unit_grid(16);
    SpectralWorkspace ws(g);
    Field f(g);
    for (int i = 0; i < 16; ++i)
        for (int j = 0; j < 16; ++j) f(i, j) = std::cos(g->x(i));
    SpectralField hat = ws.forward(f);
    CHECK(hat.mode(1, 0).real() == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(hat.mode(-1, 0).real() == doctest::Approx(0.5).epsilon(1e-14));
    for (int i = 0; i < 16; ++i)
        for (int j = 0; j < 16; ++j) {
            if ((i == 1 || i == 15) && j == 0) continue;
            CHECK(std::abs(hat(i, j)) < 1e-14);
        }
}

TEST_CASE("round trip is identity to 1e-13 relative") {
    auto g = unit_grid(32);
    SpectralWorkspace ws(g);
    Field f = random_smooth_field(g, 11);
    Field back = ws.inverse(ws.forward(f));
    double scale = linf_norm(f);
    for (int n = 0; n < f.size(); ++n) CHECK(std::abs(back[n] - f[n]) < 1e-13 * scale);
}

TEST_CASE("inverse: zero coefficients and single modes") {
    auto g = unit_grid(16);
    SpectralWorkspace ws(g);
    SpectralField zero(g);
    Field z = ws.inverse(zero);
    for (int n = 0; n < z.size(); ++n) CHECK(z[n] == 0.0);

    SpectralField hat(g);
    hat(1, 1) = 0.5;
    hat(15, 15) = 0.5;  // conjugate pair of mode (1,1)
    Field f = ws.inverse(hat);
    for (int i = 0; i < 16; ++i)
        for (int j = 0; j < 16; ++j)
            CHECK(f(i, j) == doctest::Approx(std::cos(g->x(i) + g->y(j))).epsilon(1e-13));
}

TEST_CASE("inverse rejects corrupted spectral data") {
    auto g = unit_grid(16);
    SpectralWorkspace ws(g);
    SpectralField hat(g);
    hat(1, 0) = {1.0, 0.0};  // no conjugate partner -> complex signal
    CHECK_THROWS_AS(ws.inverse(hat), std::runtime_error);
}

TEST_CASE("apply_symbol acts pointwise in mode space") {
    auto g = unit_grid(16);
    SpectralWorkspace ws(g);
    auto lap = [](double kx, double ky) { return -(kx * kx + ky * ky); };

    Field f(g);
    for (int i = 0; i < 16; ++i)
        for (int j = 0; j < 16; ++j) f(i, j) = std::cos(g->x(i));
    SpectralField hat = ws.forward(f);
    SpectralField lf = apply_symbol(hat, lap);
    CHECK(lf.mode(1, 0).real() == doctest::Approx(-0.5).epsilon(1e-14));  // multiplied by -1

    SpectralField hat2(g);
    hat2(1, 1) = 1.0;
    SpectralField bi = apply_symbol(hat2, [](double kx, double ky) {
        double k2 = kx * kx + ky * ky;
        return k2 * k2;
    });
    CHECK(bi(1, 1).real() == doctest::Approx(4.0));

    SpectralField zero = apply_symbol(hat, [](double, double) { return 0.0; });
    for (int n = 0; n < zero.size(); ++n) CHECK(std::abs(zero.data()[n]) == 0.0);

    // The Laplacian symbol annihilates the mean mode exactly.
    CHECK(lf.mode(0, 0) == std::complex<double>(0.0, 0.0));
}

TEST_CASE("gradient: single modes and constants") {
    auto g = unit_grid(32);
    SpectralWorkspace ws(g);
    Field f(g);
    for (int i = 0; i < 32; ++i)
        for (int j = 0; j < 32; ++j) f(i, j) = std::sin(g->x(i));
    auto [gx, gy] = ws.gradient(f);
    for (int i = 0; i < 32; ++i)
        for (int j = 0; j < 32; ++j) {
            CHECK(gx(i, j) == doctest::Approx(std::cos(g->x(i))).epsilon(1e-12));
            CHECK(std::abs(gy(i, j)) < 1e-12);
        }

    Field c(g, 4.2);
    auto [cx, cy] = ws.gradient(c);
    CHECK(linf_norm(cx) < 1e-14);
    CHECK(linf_norm(cy) < 1e-14);
}

TEST_CASE("gradient matches 4th-order finite differences at 4th order") {
    // The spectral derivative is exact for band-limited fields, so the
    // discrepancy is the FD truncation error and must shrink as h^4.
    auto fd_error = [](int n) {
        auto g = Grid::make(n, n, kTwoPi, kTwoPi);
        SpectralWorkspace ws(g);
        Field f = random_smooth_field(g, 5);
        auto [gx, gy] = ws.gradient(f);
        double h = g->hx();
        double err = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                auto at = [&](int ii) { return f((ii % n + n) % n, j); };
                double fd =
                    (-at(i + 2) + 8.0 * at(i + 1) - 8.0 * at(i - 1) + at(i - 2)) / (12.0 * h);
                err = std::max(err, std::abs(fd - gx(i, j)));
            }
        return err;
    };
    double e32 = fd_error(32);
    double e64 = fd_error(64);
    double order = std::log2(e32 / e64);
    INFO("fd errors ", e32, " ", e64, " order ", order);
    CHECK(order > 3.7);
    CHECK(order < 4.3);
}

TEST_CASE("divergence: operator identity and adjoint consistency") {
    auto g = unit_grid(32);
    SpectralWorkspace ws(g);

    Field f = random_smooth_field(g, 21);
    auto [gx, gy] = ws.gradient(f);
    Field div = ws.divergence(gx, gy);
    Field lap = ws.laplacian(f);
    for (int n = 0; n < f.size(); ++n) CHECK(std::abs(div[n] - lap[n]) < 1e-12);

    Field cx(g, 1.5), cy(g, -2.5);
    CHECK(linf_norm(ws.divergence(cx, cy)) < 1e-14);

    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 100; ++trial) {
        Field vx = random_smooth_field(g, 1000 + trial);
        Field vy = random_smooth_field(g, 2000 + trial);
        Field w = random_smooth_field(g, 3000 + trial);
        auto [wx, wy] = ws.gradient(w);
        double lhs = inner(ws.divergence(vx, vy), w);
        double rhs = -(inner(vx, wx) + inner(vy, wy));
        CHECK(std::abs(lhs - rhs) < 1e-11);
    }
}

TEST_CASE("inner product quadrature") {
    auto g = unit_grid(32);
    Field one(g, 1.0);
    CHECK(inner(one, one) == doctest::Approx(4.0 * std::numbers::pi * std::numbers::pi)
                                 .epsilon(1e-13));
    Field s(g);
    for (int i = 0; i < 32; ++i)
        for (int j = 0; j < 32; ++j) s(i, j) = std::sin(g->x(i));
    CHECK(inner(s, s) == doctest::Approx(2.0 * std::numbers::pi * std::numbers::pi)
                             .epsilon(1e-13));

    auto g2 = Grid::make(16, 16, 1.0, 1.0);
    Field other(g2, 1.0);
    CHECK_THROWS_AS(inner(one, other), std::invalid_argument);
}

TEST_CASE("Parseval identity") {
    auto g = unit_grid(32);
    SpectralWorkspace ws(g);
    for (int trial = 0; trial < 20; ++trial) {
        Field f = random_smooth_field(g, 500 + trial);
        SpectralField hat = ws.forward(f);
        double sum = 0.0;
        for (int n = 0; n < hat.size(); ++n) sum += std::norm(hat.data()[n]);
        double direct = inner(f, f);
        CHECK(g->area() * sum == doctest::Approx(direct).epsilon(1e-12));
    }
}

TEST_CASE("gradient zeroes the Nyquist mode") {
    auto g = unit_grid(16);
    SpectralWorkspace ws(g);
    Field f(g);
    for (int i = 0; i < 16; ++i)
        for (int j = 0; j < 16; ++j) f(i, j) = std::cos(8.0 * g->x(i));  // pure Nyquist
    auto [gx, gy] = ws.gradient(f);
    CHECK(linf_norm(gx) < 1e-12);
    CHECK(linf_norm(gy) < 1e-12);
}

TEST_CASE("two-thirds truncation") {
    auto g = unit_grid(12);
    SpectralField hat(g);
    hat(1, 1) = 1.0;
    hat(5, 0) = 1.0;  // |mx| = 5 > 12/3
    hat(0, 6) = 1.0;  // Nyquist in y
    truncate_two_thirds(hat);
    CHECK(hat(1, 1) == std::complex<double>(1.0, 0.0));
    CHECK(hat(5, 0) == std::complex<double>(0.0, 0.0));
    CHECK(hat(0, 6) == std::complex<double>(0.0, 0.0));
}

TEST_CASE("snapshot round trip is bit exact") {
    auto g = Grid::make(16, 8, kTwoPi, 4.0);
    Field f = random_smooth_field(g, 77);
    std::string path = "test_snapshot.gfk";
    write_snapshot(path, f, 1.25);
    Snapshot snap = read_snapshot(path);
    CHECK(snap.t == 1.25);
    CHECK(snap.field.grid()->nx() == 16);
    CHECK(snap.field.grid()->ny() == 8);
    CHECK(snap.field.grid()->ly() == 4.0);
    for (int n = 0; n < f.size(); ++n) CHECK(snap.field[n] == f[n]);

    write_field_csv("test_snapshot.csv", f);
    std::remove("test_snapshot.gfk");
    std::remove("test_snapshot.csv");

    CHECK_THROWS(read_snapshot("/nonexistent/file.gfk"));
}
