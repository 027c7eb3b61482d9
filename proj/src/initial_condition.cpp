#include "nsdamp/initial_condition.hpp"

#include <cmath>
#include <random>

#include "nsdamp/checkpoint.hpp"
#include "nsdamp/error.hpp"
#include "nsdamp/spectral_ops.hpp"
#include "nsdamp/transform.hpp"

namespace nsdamp {

std::string to_string(IcKind kind) {
    switch (kind) {
    case IcKind::taylor_green: return "taylor_green";
    case IcKind::random_divfree: return "random_divfree";
    case IcKind::single_mode: return "single_mode";
    case IcKind::from_checkpoint: return "from_checkpoint";
    }
    return "taylor_green";
}

IcKind ic_kind_from_string(const std::string& s) {
    if (s == "taylor_green") return IcKind::taylor_green;
    if (s == "random_divfree") return IcKind::random_divfree;
    if (s == "single_mode") return IcKind::single_mode;
    if (s == "from_checkpoint") return IcKind::from_checkpoint;
    throw ValidationError("unknown initial condition '" + s + "'");
}

namespace {

SpectralField taylor_green(const InitialCondition& ic, const Grid& grid) {
    if (ic.dim != 0 && ic.dim != grid.dim())
        throw ValidationError("taylor_green: requested for dim " + std::to_string(ic.dim) + " on a " +
                              std::to_string(grid.dim()) + "D grid");
    PhysicalField f(grid, grid.dim());
    const double w = grid.wavenumber_unit();
    for (std::size_t p = 0; p < grid.size(); ++p) {
        const auto idx = grid.unflatten(p);
        const double x = w * grid.coordinate(idx[0]);
        const double y = w * grid.coordinate(idx[1]);
        if (grid.dim() == 2) {
            f.at(0, p) = ic.amplitude * std::sin(x) * std::cos(y);
            f.at(1, p) = -ic.amplitude * std::cos(x) * std::sin(y);
        } else {
            const double z = w * grid.coordinate(idx[2]);
            f.at(0, p) = ic.amplitude * std::sin(x) * std::cos(y) * std::cos(z);
            f.at(1, p) = -ic.amplitude * std::cos(x) * std::sin(y) * std::cos(z);
            f.at(2, p) = 0.0;
        }
    }
    return forward_transform(f);
}

SpectralField random_divfree(const InitialCondition& ic, const Grid& grid) {
    const int dim = grid.dim();
    SpectralField raw(grid, dim);
    std::mt19937_64 rng(ic.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int c = 0; c < dim; ++c)
        for (std::size_t m = 0; m < grid.size(); ++m) {
            const double re = normal(rng);
            const double im = normal(rng);
            raw.at(c, m) = Complex(re, im);
        }
    SpectralField shaped(grid, dim);
    for (std::size_t m = 0; m < grid.size(); ++m) {
        const double kmag = std::sqrt(static_cast<double>(grid.k_sq(m)));
        if (kmag == 0.0) continue;
        const double r = kmag / ic.peak_wavenumber;
        const double amp = std::pow(kmag, ic.spectrum_slope) * std::exp(-r * r);
        const std::size_t mm = grid.mirror(m);
        for (int c = 0; c < dim; ++c)
            shaped.at(c, m) = 0.5 * amp * (raw.at(c, m) + std::conj(raw.at(c, mm)));
    }
    return shaped;
}

SpectralField single_mode(const InitialCondition& ic, const Grid& grid) {
    if (ic.component < 0 || ic.component >= grid.dim())
        throw ValidationError("single_mode: component out of range");
    SpectralField u(grid, grid.dim());
    const std::size_t m = grid.mode_of(ic.mode);
    if (m == 0) throw ValidationError("single_mode: mode must be nonzero");
    const std::size_t mm = grid.mirror(m);
    const double coef = 0.5 * ic.amplitude * std::sqrt(grid.volume());
    u.at(ic.component, m) += coef;
    u.at(ic.component, mm) += coef;
    return u;
}

}  // namespace

SpectralField build_ic(const InitialCondition& ic, const Grid& grid) {
    if (!std::isfinite(ic.amplitude)) throw ValidationError("ic.amplitude must be finite");
    SpectralField u(grid, grid.dim());
    switch (ic.kind) {
    case IcKind::taylor_green: u = taylor_green(ic, grid); break;
    case IcKind::random_divfree: u = random_divfree(ic, grid); break;
    case IcKind::single_mode: u = single_mode(ic, grid); break;
    case IcKind::from_checkpoint: {
        auto state = checkpoint_load_file(ic.checkpoint_path);
        if (!(state.u.grid() == grid)) throw CheckpointError("checkpoint grid does not match the configured grid");
        // already a solver state; reprocessing would perturb the last bits
        return std::move(state.u);
    }
    }
    zero_nyquist(u);
    dealias(u);
    remove_mean(u);
    u = leray_project(u);
    if (ic.kind == IcKind::random_divfree) {
        const double h1 = sobolev_norm(u, 1.0, true);
        if (h1 > 0.0) u *= ic.amplitude / h1;
    }
    return u;
}

}  // namespace nsdamp
