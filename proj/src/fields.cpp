#include "nsdamp/fields.hpp"

#include <cmath>

#include "nsdamp/error.hpp"

namespace nsdamp {

namespace {

void require_same_shape(const SpectralField& a, const SpectralField& b) {
    if (!(a.grid() == b.grid()) || a.components() != b.components())
        throw ValidationError("spectral field: grid or component mismatch");
}

}  // namespace

SpectralField::SpectralField(Grid grid, int components)
    : grid_(std::move(grid)), components_(components) {
    if (components < 1) throw ValidationError("spectral field: components must be >= 1");
    data_.assign(static_cast<std::size_t>(components_) * grid_.size(), Complex{});
}

std::span<Complex> SpectralField::component(int c) noexcept {
    return {data_.data() + c * modes(), modes()};
}

std::span<const Complex> SpectralField::component(int c) const noexcept {
    return {data_.data() + c * modes(), modes()};
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
    require_same_shape(*this, other);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
    divergence_free_ = divergence_free_ && other.divergence_free_;
    return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
    require_same_shape(*this, other);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
    divergence_free_ = divergence_free_ && other.divergence_free_;
    return *this;
}

SpectralField& SpectralField::operator*=(double s) {
    for (auto& c : data_) c *= s;
    return *this;
}

SpectralField& SpectralField::axpy(double s, const SpectralField& other) {
    require_same_shape(*this, other);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += s * other.data_[i];
    divergence_free_ = divergence_free_ && other.divergence_free_;
    return *this;
}

double SpectralField::hermitian_defect() const noexcept {
    double defect = 0.0;
    for (int c = 0; c < components_; ++c) {
        auto comp = component(c);
        for (std::size_t m = 0; m < comp.size(); ++m)
            defect = std::max(defect, std::abs(comp[grid_.mirror(m)] - std::conj(comp[m])));
    }
    return defect;
}

double SpectralField::max_abs() const noexcept {
    double mx = 0.0;
    for (const auto& c : data_) mx = std::max(mx, std::abs(c));
    return mx;
}

bool SpectralField::all_finite() const noexcept {
    for (const auto& c : data_)
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
    return true;
}

PhysicalField::PhysicalField(Grid grid, int components)
    : grid_(std::move(grid)), components_(components) {
    if (components < 1) throw ValidationError("physical field: components must be >= 1");
    data_.assign(static_cast<std::size_t>(components_) * grid_.size(), 0.0);
}

std::span<double> PhysicalField::component(int c) noexcept {
    return {data_.data() + c * points(), points()};
}

std::span<const double> PhysicalField::component(int c) const noexcept {
    return {data_.data() + c * points(), points()};
}

double PhysicalField::l2_sq() const noexcept {
    double sum = 0.0;
    for (double v : data_) sum += v * v;
    return sum * grid_.cell_volume();
}

double PhysicalField::max_abs() const noexcept {
    double mx = 0.0;
    for (double v : data_) mx = std::max(mx, std::abs(v));
    return mx;
}

double grid_integral(const Grid& grid, std::span<const double> density) noexcept {
    double sum = 0.0;
    for (double v : density) sum += v;
    return sum * grid.cell_volume();
}

}  // namespace nsdamp
