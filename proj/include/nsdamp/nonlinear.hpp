#pragma once

#include <array>
#include <span>
#include <string>

#include "nsdamp/fields.hpp"

namespace nsdamp {

enum class DampingKind { none, power, log };

std::string to_string(DampingKind kind);
/// Accepts "none", "power", "log"; throws ValidationError otherwise.
DampingKind damping_kind_from_string(const std::string& s);

/// Zeroth-order absorption term added to the momentum equation.
///   log:   alpha * log(e + |u|^2) * |u|^2 * u
///   power: alpha * |u|^(beta-1) * u
/// Viscosity is fixed to 1.
struct DampingSpec {
    DampingKind kind = DampingKind::none;
    double alpha = 0.0;
    double beta = 3.0;

    static DampingSpec none() { return {}; }
    static DampingSpec log(double alpha) { return {DampingKind::log, alpha, 3.0}; }
    static DampingSpec power(double alpha, double beta) { return {DampingKind::power, alpha, beta}; }

    /// alpha >= 0 (finite); beta > 1 when kind is power.
    void validate() const;
    bool active() const noexcept { return kind != DampingKind::none && alpha != 0.0; }
    /// Human-readable formula actually evaluated.
    std::string formula() const;

    friend bool operator==(const DampingSpec&, const DampingSpec&) = default;
};

using Vec3 = std::array<double, 3>;

/// Scalar a(|v|^2) with damping(v) = a * v.
double damping_factor(double speed_sq, const DampingSpec& spec) noexcept;

/// Pointwise damping vector; entries past the field dimension are ignored.
Vec3 damping_pointwise(const Vec3& v, const DampingSpec& spec) noexcept;

/// <log(e+|x|^2)|x|^2 x - log(e+|y|^2)|y|^2 y, x - y>, nonnegative for all x, y.
double monotonicity_gap(std::span<const double> x, std::span<const double> y);

/// P(u . grad u), dealiased. u must be a dealiased vector field.
SpectralField convective_term(const SpectralField& u);

/// P(damping(u)), evaluated pointwise on the grid, dealiased once.
/// Throws BlowUpError if the pointwise evaluation overflows.
SpectralField damping_term(const SpectralField& u, const DampingSpec& spec);

namespace detail {

struct NonlinearEvaluation {
    SpectralField rhs;
    double max_speed = 0.0;          // max pointwise |u|
    double max_damping_rate = 0.0;   // max pointwise a(|u|^2), alpha included
};

/// -P(u . grad u) - P(damping(u)) with a single physical-space pass.
/// Either term can be switched off.
NonlinearEvaluation evaluate_nonlinear(const SpectralField& u, const DampingSpec& spec, bool convection);

}  // namespace detail

}  // namespace nsdamp
