#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "nsdamp/grid.hpp"

namespace nsdamp {

using Complex = std::complex<double>;

/// Fourier coefficients of a real field with `components` components,
/// stored component-major over the full mode lattice of the grid.
///
/// Coefficients are normalized so that sum |c|^2 equals the L^2 norm
/// squared over the box (Parseval-exact): c(k) = sqrt(V)/N * DFT(f)(k).
class SpectralField {
public:
    SpectralField(Grid grid, int components);

    const Grid& grid() const noexcept { return grid_; }
    int components() const noexcept { return components_; }
    std::size_t modes() const noexcept { return grid_.size(); }

    std::span<Complex> component(int c) noexcept;
    std::span<const Complex> component(int c) const noexcept;
    Complex& at(int c, std::size_t mode) noexcept { return data_[c * modes() + mode]; }
    const Complex& at(int c, std::size_t mode) const noexcept { return data_[c * modes() + mode]; }

    std::vector<Complex>& data() noexcept { return data_; }
    const std::vector<Complex>& data() const noexcept { return data_; }

    bool divergence_free() const noexcept { return divergence_free_; }
    void set_divergence_free(bool flag) noexcept { divergence_free_ = flag; }

    SpectralField& operator+=(const SpectralField& other);
    SpectralField& operator-=(const SpectralField& other);
    SpectralField& operator*=(double s);
    /// this += s * other
    SpectralField& axpy(double s, const SpectralField& other);

    /// max_k |c(-k) - conj(c(k))| over all components.
    double hermitian_defect() const noexcept;
    double max_abs() const noexcept;
    bool all_finite() const noexcept;

    friend bool operator==(const SpectralField&, const SpectralField&) = default;

private:
    Grid grid_;
    int components_;
    std::vector<Complex> data_;
    bool divergence_free_ = false;
};

/// Real samples of a field at the grid points x_i = i*L/n, component-major.
class PhysicalField {
public:
    PhysicalField(Grid grid, int components);

    const Grid& grid() const noexcept { return grid_; }
    int components() const noexcept { return components_; }
    std::size_t points() const noexcept { return grid_.size(); }

    std::span<double> component(int c) noexcept;
    std::span<const double> component(int c) const noexcept;
    double& at(int c, std::size_t point) noexcept { return data_[c * points() + point]; }
    double at(int c, std::size_t point) const noexcept { return data_[c * points() + point]; }

    std::vector<double>& data() noexcept { return data_; }
    const std::vector<double>& data() const noexcept { return data_; }

    /// Rectangle-rule integral of sum_c f_c^2 (exact for resolved trigonometric polynomials).
    double l2_sq() const noexcept;
    double max_abs() const noexcept;

    friend bool operator==(const PhysicalField&, const PhysicalField&) = default;

private:
    Grid grid_;
    int components_;
    std::vector<double> data_;
};

/// Rectangle-rule integral of a sampled density over the box.
double grid_integral(const Grid& grid, std::span<const double> density) noexcept;

}  // namespace nsdamp
