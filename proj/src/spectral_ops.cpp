#include "nsdamp/spectral_ops.hpp"

#include <cmath>

#include "nsdamp/error.hpp"

namespace nsdamp {

namespace {

void require_vector(const SpectralField& g, const char* op) {
    if (g.components() != g.grid().dim())
        throw ValidationError(std::string(op) + ": expected a vector field with dim components");
}

}  // namespace

SpectralField leray_project(const SpectralField& g) {
    require_vector(g, "leray_project");
    const Grid& grid = g.grid();
    const int dim = grid.dim();
    SpectralField out = g;
    for (std::size_t m = 0; m < g.modes(); ++m) {
        double xi_sq = 0.0;
        for (int j = 0; j < dim; ++j) xi_sq += grid.xi(j, m) * grid.xi(j, m);
        if (xi_sq == 0.0) continue;
        Complex dot{};
        for (int j = 0; j < dim; ++j) dot += g.at(j, m) * grid.xi(j, m);
        const Complex coef = dot / xi_sq;
        for (int j = 0; j < dim; ++j) out.at(j, m) -= coef * grid.xi(j, m);
    }
    out.set_divergence_free(true);
    return out;
}

SpectralField friedrichs_truncate(const SpectralField& g, double radius) {
    if (!(radius > 0.0)) throw ValidationError("friedrichs_truncate: radius must be > 0");
    const Grid& grid = g.grid();
    const double r_sq = radius * radius;
    SpectralField out = g;
    for (int c = 0; c < g.components(); ++c) {
        auto comp = out.component(c);
        for (std::size_t m = 0; m < g.modes(); ++m)
            if (grid.xi_sq(m) >= r_sq) comp[m] = Complex{};
    }
    return out;
}

SpectralField spectral_gradient(const SpectralField& g) {
    const Grid& grid = g.grid();
    const int dim = grid.dim();
    SpectralField out(grid, g.components() * dim);
    for (int c = 0; c < g.components(); ++c) {
        auto in = g.component(c);
        for (int j = 0; j < dim; ++j) {
            auto d = out.component(c * dim + j);
            for (std::size_t m = 0; m < g.modes(); ++m) {
                if (grid.on_nyquist(m)) continue;
                const double k = grid.xi(j, m);
                d[m] = Complex(-k * in[m].imag(), k * in[m].real());
            }
        }
    }
    return out;
}

SpectralField laplacian(const SpectralField& g) {
    const Grid& grid = g.grid();
    SpectralField out(grid, g.components());
    for (int c = 0; c < g.components(); ++c) {
        auto in = g.component(c);
        auto d = out.component(c);
        for (std::size_t m = 0; m < g.modes(); ++m) {
            if (grid.on_nyquist(m)) continue;
            d[m] = -grid.xi_sq(m) * in[m];
        }
    }
    out.set_divergence_free(g.divergence_free());
    return out;
}

SpectralField divergence(const SpectralField& g) {
    require_vector(g, "divergence");
    const Grid& grid = g.grid();
    SpectralField out(grid, 1);
    auto d = out.component(0);
    for (std::size_t m = 0; m < g.modes(); ++m) {
        Complex sum{};
        for (int j = 0; j < grid.dim(); ++j) sum += grid.xi(j, m) * g.at(j, m);
        d[m] = Complex(-sum.imag(), sum.real());
    }
    return out;
}

double sobolev_norm(const SpectralField& g, double s, bool homogeneous) {
    const Grid& grid = g.grid();
    if (homogeneous && s < 0.0) {
        for (int c = 0; c < g.components(); ++c)
            if (g.at(c, 0) != Complex{})
                throw ValidationError("sobolev_norm: homogeneous norm with s < 0 needs a zero mean mode");
    }
    double sum = 0.0;
    for (std::size_t m = 0; m < g.modes(); ++m) {
        const double xsq = grid.xi_sq(m);
        double weight;
        if (homogeneous) {
            if (xsq == 0.0) continue;
            weight = s == 0.0 ? 1.0 : std::pow(xsq, s);
        } else {
            weight = s == 0.0 ? 1.0 : std::pow(1.0 + xsq, s);
        }
        double amp = 0.0;
        for (int c = 0; c < g.components(); ++c) amp += std::norm(g.at(c, m));
        sum += weight * amp;
    }
    return std::sqrt(sum);
}

double inner_product(const SpectralField& a, const SpectralField& b) {
    if (!(a.grid() == b.grid()) || a.components() != b.components())
        throw ValidationError("inner_product: grid or component mismatch");
    double sum = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i) {
        const Complex x = a.data()[i];
        const Complex y = b.data()[i];
        sum += x.real() * y.real() + x.imag() * y.imag();
    }
    return sum;
}

double l2_norm_sq(const SpectralField& g) noexcept {
    double sum = 0.0;
    for (const auto& c : g.data()) sum += std::norm(c);
    return sum;
}

void dealias(SpectralField& g) noexcept {
    const Grid& grid = g.grid();
    for (int c = 0; c < g.components(); ++c) {
        auto comp = g.component(c);
        for (std::size_t m = 0; m < g.modes(); ++m)
            if (!grid.dealias_kept(m)) comp[m] = Complex{};
    }
}

void zero_nyquist(SpectralField& g) noexcept {
    const Grid& grid = g.grid();
    for (int c = 0; c < g.components(); ++c) {
        auto comp = g.component(c);
        for (std::size_t m = 0; m < g.modes(); ++m)
            if (grid.on_nyquist(m)) comp[m] = Complex{};
    }
}

void remove_mean(SpectralField& g) noexcept {
    for (int c = 0; c < g.components(); ++c) g.at(c, 0) = Complex{};
}

double max_relative_divergence(const SpectralField& g) noexcept {
    const Grid& grid = g.grid();
    if (g.components() != grid.dim()) return 0.0;
    double worst = 0.0;
    for (std::size_t m = 0; m < g.modes(); ++m) {
        double xsq = 0.0, amp = 0.0;
        Complex dot{};
        for (int j = 0; j < grid.dim(); ++j) {
            xsq += grid.xi(j, m) * grid.xi(j, m);
            amp += std::norm(g.at(j, m));
            dot += grid.xi(j, m) * g.at(j, m);
        }
        if (xsq == 0.0 || amp == 0.0) continue;
        worst = std::max(worst, std::abs(dot) / std::sqrt(xsq * amp));
    }
    return worst;
}

}  // namespace nsdamp
