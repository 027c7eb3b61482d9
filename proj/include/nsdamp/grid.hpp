#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <numbers>
#include <vector>

namespace nsdamp {

namespace detail {

struct Lattice {
    std::vector<double> xi[3];
    std::vector<double> xi_sq;
    std::vector<int> k_sq;
    std::vector<std::size_t> mirror;
    std::vector<unsigned char> nyquist;
    std::vector<unsigned char> kept;
    double max_xi = 0.0;
};

}  // namespace detail

/// Periodic box [0, L)^dim sampled with n points per direction.
///
/// Modes are stored in FFT order: index i maps to the integer wavenumber
/// i for i <= n/2 and i - n otherwise, so the lattice is {-n/2+1, ..., n/2}.
/// The physical frequency is 2*pi*k/L.
///
/// Two wavenumber maps are kept. `xi` is the directional one used by
/// first-derivative multipliers (gradient, divergence, Leray): its j-th
/// entry is zero on the Nyquist plane i_j = n/2, which keeps those
/// multipliers Hermitian. `xi_sq` and `k_sq` are magnitudes and use
/// |k_j| = n/2 on the Nyquist plane.
class Grid {
public:
    /// Throws ValidationError unless dim is 2 or 3 and n is even and >= 4.
    Grid(int dim, int n, double box_length = 2.0 * std::numbers::pi);

    int dim() const noexcept { return dim_; }
    int n() const noexcept { return n_; }
    double box_length() const noexcept { return box_length_; }

    std::size_t size() const noexcept { return size_; }  // n^dim
    double volume() const noexcept;
    double cell_volume() const noexcept;
    double spacing() const noexcept { return box_length_ / n_; }
    double wavenumber_unit() const noexcept { return 2.0 * std::numbers::pi / box_length_; }

    /// Signed integer wavenumber of storage index i along one direction.
    int frequency(int i) const noexcept { return i <= n_ / 2 ? i : i - n_; }

    /// Storage multi-index of a flat mode/point index (unused entries are 0).
    std::array<int, 3> unflatten(std::size_t flat) const noexcept;
    std::size_t flatten(const std::array<int, 3>& idx) const noexcept;

    /// Flat index of the mode -k.
    std::size_t mirror(std::size_t mode) const noexcept { return lattice_->mirror[mode]; }
    /// Flat index of the mode with the given signed wavenumbers.
    std::size_t mode_of(const std::array<int, 3>& k) const noexcept;

    /// Directional frequency xi_j of a mode (zero on the Nyquist plane of j).
    double xi(int j, std::size_t mode) const noexcept { return lattice_->xi[j][mode]; }
    /// |xi|^2 with the Nyquist entry counted as n/2.
    double xi_sq(std::size_t mode) const noexcept { return lattice_->xi_sq[mode]; }
    /// Integer |k|^2 with the Nyquist entry counted as n/2.
    int k_sq(std::size_t mode) const noexcept { return lattice_->k_sq[mode]; }
    /// True if any index of the mode lies on a Nyquist plane.
    bool on_nyquist(std::size_t mode) const noexcept { return lattice_->nyquist[mode] != 0; }
    /// Spherical two-thirds rule: kept iff |k| < n/3.
    bool dealias_kept(std::size_t mode) const noexcept { return lattice_->kept[mode] != 0; }

    /// Largest |xi| on the lattice.
    double max_xi() const noexcept { return lattice_->max_xi; }

    /// Physical coordinate of grid point index i along a direction.
    double coordinate(int i) const noexcept { return spacing() * i; }

    friend bool operator==(const Grid& a, const Grid& b) noexcept {
        return a.dim_ == b.dim_ && a.n_ == b.n_ && a.box_length_ == b.box_length_;
    }

private:
    int dim_;
    int n_;
    double box_length_;
    std::size_t size_;
    std::shared_ptr<const detail::Lattice> lattice_;
};

}  // namespace nsdamp
