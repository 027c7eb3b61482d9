#include "nsdamp/nonlinear.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "nsdamp/error.hpp"
#include "nsdamp/spectral_ops.hpp"
#include "nsdamp/transform.hpp"

namespace nsdamp {

std::string to_string(DampingKind kind) {
    switch (kind) {
    case DampingKind::none: return "none";
    case DampingKind::power: return "power";
    case DampingKind::log: return "log";
    }
    return "none";
}

DampingKind damping_kind_from_string(const std::string& s) {
    if (s == "none") return DampingKind::none;
    if (s == "power") return DampingKind::power;
    if (s == "log") return DampingKind::log;
    throw ValidationError("unknown damping kind '" + s + "' (expected none, power or log)");
}

void DampingSpec::validate() const {
    if (!std::isfinite(alpha) || alpha < 0.0) throw ValidationError("alpha must be ≥ 0");
    if (kind == DampingKind::power && !(beta > 1.0 && std::isfinite(beta)))
        throw ValidationError("beta must be > 1 for power damping");
}

std::string DampingSpec::formula() const {
    switch (kind) {
    case DampingKind::none: return "0";
    case DampingKind::power: return "alpha*|u|^(beta-1)*u";
    case DampingKind::log: return "alpha*log(e+|u|^2)*|u|^2*u";
    }
    return "0";
}

double damping_factor(double speed_sq, const DampingSpec& spec) noexcept {
    switch (spec.kind) {
    case DampingKind::none: return 0.0;
    case DampingKind::log: return spec.alpha * std::log(std::numbers::e + speed_sq) * speed_sq;
    case DampingKind::power:
        if (speed_sq == 0.0) return 0.0;
        return spec.alpha * std::pow(speed_sq, 0.5 * (spec.beta - 1.0));
    }
    return 0.0;
}

Vec3 damping_pointwise(const Vec3& v, const DampingSpec& spec) noexcept {
    const double a = damping_factor(v[0] * v[0] + v[1] * v[1] + v[2] * v[2], spec);
    return {a * v[0], a * v[1], a * v[2]};
}

double monotonicity_gap(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw ValidationError("monotonicity_gap: dimension mismatch");
    double xx = 0.0, yy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        xx += x[i] * x[i];
        yy += y[i] * y[i];
    }
    const double ax = std::log(std::numbers::e + xx) * xx;
    const double ay = std::log(std::numbers::e + yy) * yy;
    double gap = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) gap += (ax * x[i] - ay * y[i]) * (x[i] - y[i]);
    return gap;
}

namespace {

void require_vector(const SpectralField& u, const char* op) {
    if (u.components() != u.grid().dim())
        throw ValidationError(std::string(op) + ": expected a vector field with dim components");
}

SpectralField finish(const PhysicalField& products) {
    SpectralField out = detail::forward_unchecked(products);
    dealias(out);
    return leray_project(out);
}

}  // namespace

SpectralField convective_term(const SpectralField& u) {
    require_vector(u, "convective_term");
    auto eval = detail::evaluate_nonlinear(u, DampingSpec::none(), true);
    eval.rhs *= -1.0;
    return std::move(eval.rhs);
}

SpectralField damping_term(const SpectralField& u, const DampingSpec& spec) {
    require_vector(u, "damping_term");
    spec.validate();
    if (spec.kind == DampingKind::none) {
        SpectralField zero(u.grid(), u.components());
        zero.set_divergence_free(true);
        return zero;
    }
    auto eval = detail::evaluate_nonlinear(u, spec, false);
    eval.rhs *= -1.0;
    return std::move(eval.rhs);
}

namespace detail {

NonlinearEvaluation evaluate_nonlinear(const SpectralField& u, const DampingSpec& spec, bool convection) {
    require_vector(u, "evaluate_nonlinear");
    const Grid& grid = u.grid();
    const int dim = grid.dim();
    const std::size_t points = grid.size();
    const PhysicalField vel = inverse_unchecked(u);

    PhysicalField acc(grid, dim);
    if (convection) {
        const PhysicalField grad = inverse_unchecked(spectral_gradient(u));
        for (int i = 0; i < dim; ++i) {
            auto out = acc.component(i);
            for (int j = 0; j < dim; ++j) {
                auto uj = vel.component(j);
                auto dj_ui = grad.component(i * dim + j);
                for (std::size_t p = 0; p < points; ++p) out[p] -= uj[p] * dj_ui[p];
            }
        }
    }

    NonlinearEvaluation result{SpectralField(grid, dim)};
    const bool damped = spec.kind != DampingKind::none;
    for (std::size_t p = 0; p < points; ++p) {
        double s = 0.0;
        for (int j = 0; j < dim; ++j) s += vel.at(j, p) * vel.at(j, p);
        result.max_speed = std::max(result.max_speed, std::sqrt(s));
        if (!damped) continue;
        const double a = damping_factor(s, spec);
        if (!std::isfinite(a))
            throw BlowUpError("damping evaluation overflowed (|u|^2 = " + std::to_string(s) + ")",
                              std::numeric_limits<double>::quiet_NaN(), 0.0, 0.0);
        result.max_damping_rate = std::max(result.max_damping_rate, a);
        for (int j = 0; j < dim; ++j) acc.at(j, p) -= a * vel.at(j, p);
    }
    if (!std::isfinite(result.max_speed))
        throw BlowUpError("non-finite velocity", std::numeric_limits<double>::quiet_NaN(), 0.0, 0.0);

    result.rhs = finish(acc);
    return result;
}

}  // namespace detail

}  // namespace nsdamp
