#include "nsdamp/grid.hpp"

#include <cmath>
#include <string>

#include "nsdamp/error.hpp"

namespace nsdamp {


namespace {

std::shared_ptr<const detail::Lattice> build_lattice(const Grid& g) {
    auto lat = std::make_shared<detail::Lattice>();
    const std::size_t size = g.size();
    const int n = g.n();
    const double unit = g.wavenumber_unit();
    for (int j = 0; j < 3; ++j) lat->xi[j].assign(j < g.dim() ? size : 0, 0.0);
    lat->xi_sq.resize(size);
    lat->k_sq.resize(size);
    lat->mirror.resize(size);
    lat->nyquist.resize(size);
    lat->kept.resize(size);
    for (std::size_t m = 0; m < size; ++m) {
        auto idx = g.unflatten(m);
        std::array<int, 3> neg{0, 0, 0};
        int ksq = 0;
        bool nyq = false;
        for (int j = 0; j < g.dim(); ++j) {
            const int k = g.frequency(idx[j]);
            ksq += k * k;
            if (idx[j] == n / 2) {
                nyq = true;
                lat->xi[j][m] = 0.0;
            } else {
                lat->xi[j][m] = unit * k;
            }
            neg[j] = (n - idx[j]) % n;
        }
        lat->k_sq[m] = ksq;
        lat->xi_sq[m] = unit * unit * ksq;
        lat->mirror[m] = g.flatten(neg);
        lat->nyquist[m] = nyq;
        // |k| < n/3  <=>  9|k|^2 < n^2
        lat->kept[m] = 9L * ksq < static_cast<long>(n) * n;
        lat->max_xi = std::max(lat->max_xi, std::sqrt(lat->xi_sq[m]));
    }
    return lat;
}

}  // namespace

Grid::Grid(int dim, int n, double box_length) : dim_(dim), n_(n), box_length_(box_length) {
    if (dim != 2 && dim != 3) throw ValidationError("grid: dim must be 2 or 3, got " + std::to_string(dim));
    if (n < 4 || n % 2 != 0) throw ValidationError("grid: n must be even and >= 4, got " + std::to_string(n));
    if (!(box_length > 0.0) || !std::isfinite(box_length))
        throw ValidationError("grid: box_length must be positive and finite");
    size_ = 1;
    for (int j = 0; j < dim_; ++j) size_ *= static_cast<std::size_t>(n_);
    lattice_ = build_lattice(*this);
}

double Grid::volume() const noexcept { return std::pow(box_length_, dim_); }

double Grid::cell_volume() const noexcept { return std::pow(spacing(), dim_); }

std::array<int, 3> Grid::unflatten(std::size_t flat) const noexcept {
    std::array<int, 3> idx{0, 0, 0};
    for (int j = dim_ - 1; j >= 0; --j) {
        idx[j] = static_cast<int>(flat % n_);
        flat /= n_;
    }
    return idx;
}

std::size_t Grid::flatten(const std::array<int, 3>& idx) const noexcept {
    std::size_t flat = 0;
    for (int j = 0; j < dim_; ++j) flat = flat * n_ + static_cast<std::size_t>(idx[j]);
    return flat;
}

std::size_t Grid::mode_of(const std::array<int, 3>& k) const noexcept {
    std::array<int, 3> idx{0, 0, 0};
    for (int j = 0; j < dim_; ++j) idx[j] = ((k[j] % n_) + n_) % n_;
    return flatten(idx);
}


}  // namespace nsdamp
