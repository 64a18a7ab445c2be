#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <utility>
#include <vector>

namespace gfrk {

/// Periodic rectangle with even mode counts and standard FFT wavenumber
/// ordering (2*pi/l)*{0, 1, ..., n/2, -n/2+1, ..., -1}.
class Grid {
  public:
    static std::shared_ptr<const Grid> make(int nx, int ny, double lx, double ly);

    int nx() const { return nx_; }
    int ny() const { return ny_; }
    double lx() const { return lx_; }
    double ly() const { return ly_; }
    double hx() const { return hx_; }
    double hy() const { return hy_; }
    double area() const { return lx_ * ly_; }
    int size() const { return nx_ * ny_; }

    double kx(int i) const { return kx_[i]; }
    double ky(int j) const { return ky_[j]; }
    const std::vector<double>& kx() const { return kx_; }
    const std::vector<double>& ky() const { return ky_; }

    double x(int i) const { return i * hx_; }
    double y(int j) const { return j * hy_; }

    bool same_as(const Grid& other) const;

  private:
    Grid(int nx, int ny, double lx, double ly);
    int nx_, ny_;
    double lx_, ly_, hx_, hy_;
    std::vector<double> kx_, ky_;
};

using GridPtr = std::shared_ptr<const Grid>;

/// Real grid function; data[i*ny + j] is the value at (i*hx, j*hy).
class Field {
  public:
    Field() = default;
    explicit Field(GridPtr grid, double fill = 0.0)
        : grid_(std::move(grid)), v_(grid_->size(), fill) {}

    const GridPtr& grid() const { return grid_; }
    double* data() { return v_.data(); }
    const double* data() const { return v_.data(); }
    int size() const { return static_cast<int>(v_.size()); }

    double& operator()(int i, int j) { return v_[i * grid_->ny() + j]; }
    double operator()(int i, int j) const { return v_[i * grid_->ny() + j]; }
    double& operator[](int n) { return v_[n]; }
    double operator[](int n) const { return v_[n]; }

    bool all_finite() const;

  private:
    GridPtr grid_;
    std::vector<double> v_;
};

/// Fourier coefficients of a grid function, full complex nx x ny layout,
/// normalized so that coeff(0,0) is the mean of the field.
class SpectralField {
  public:
    SpectralField() = default;
    explicit SpectralField(GridPtr grid)
        : grid_(std::move(grid)), c_(grid_->size(), {0.0, 0.0}) {}

    const GridPtr& grid() const { return grid_; }
    std::complex<double>* data() { return c_.data(); }
    const std::complex<double>* data() const { return c_.data(); }
    int size() const { return static_cast<int>(c_.size()); }

    std::complex<double>& operator()(int i, int j) { return c_[i * grid_->ny() + j]; }
    std::complex<double> operator()(int i, int j) const { return c_[i * grid_->ny() + j]; }

    // Coefficient of integer mode (mx, my), negative indices wrap.
    std::complex<double> mode(int mx, int my) const;

  private:
    GridPtr grid_;
    std::vector<std::complex<double>> c_;
};

// Pointwise multiply coefficients by a real symbol of the wavenumbers.
SpectralField apply_symbol(const SpectralField& f,
                           const std::function<double(double, double)>& sym);

// Discrete inner product hx*hy*sum f*g; exact quadrature for periodic
// trigonometric integrands.
double inner(const Field& f, const Field& g);
double linf_norm(const Field& f);
double field_mean(const Field& f);

// Zero every mode with |mx| > nx/3 or |my| > ny/3 (2/3-rule truncation).
void truncate_two_thirds(SpectralField& f);

/// FFT plans and scratch for one grid. Not shareable across concurrent
/// callers; create one workspace per execution context.
class SpectralWorkspace {
  public:
    explicit SpectralWorkspace(GridPtr grid);
    ~SpectralWorkspace();
    SpectralWorkspace(const SpectralWorkspace&) = delete;
    SpectralWorkspace& operator=(const SpectralWorkspace&) = delete;

    const GridPtr& grid() const { return grid_; }

    SpectralField forward(const Field& f);
    // Verifies the imaginary residue (< 1e-8 * |F| required) before
    // discarding it; throws std::runtime_error on corrupted spectral data.
    Field inverse(const SpectralField& f);

    Field apply_symbol_to_field(const Field& f,
                                const std::function<double(double, double)>& sym);
    // Symbol given as a precomputed per-mode table (nx*ny, row-major).
    Field apply_symbol_table(const Field& f, const std::vector<double>& table);

    // Spectral derivatives; odd-derivative symbols zero the Nyquist modes.
    std::pair<Field, Field> gradient(const Field& f);
    Field divergence(const Field& fx, const Field& fy);
    Field laplacian(const Field& f);

  private:
    GridPtr grid_;
    void* plan_fwd_;  // fftw_plan
    void* plan_bwd_;
    std::vector<std::complex<double>> buf_;
    void fft_forward_raw(const Field& f, std::complex<double>* out);
    Field fft_backward_raw(std::complex<double>* in, bool check_residue);
};

}  // namespace gfrk
