#pragma once

#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "nsdamp/diagnostics.hpp"
#include "nsdamp/fields.hpp"
#include "nsdamp/initial_condition.hpp"
#include "nsdamp/nonlinear.hpp"

namespace nsdamp {

struct SolverState {
    double t = 0.0;
    SpectralField u;
    std::int64_t step_count = 0;
    double dt = 0.0;
};

struct SimConfig {
    int dim = 3;
    int n = 32;
    double box_length = 2.0 * std::numbers::pi;
    DampingSpec damping{};
    double t_max = 1.0;
    std::optional<double> dt;     // fixed step; adaptive when empty
    double cfl = 0.5;
    double dt_max = 1e-2;
    InitialCondition ic{};
    std::uint64_t seed = 0;
    double output_interval = 1e-2;
    std::optional<double> friedrichs_radius;
    double blowup_ceiling = 1e6;
    bool strict_deterministic = true;
    double tol_budget = 1e-4;
    double stability_c = 0.5;
    // Test hook: drop the convective term (pure diffusion + damping).
    bool convection = true;

    Grid grid() const { return Grid(dim, n, box_length); }
    /// Throws ConfigError for out-of-range values.
    void validate() const;

    friend bool operator==(const SimConfig&, const SimConfig&) = default;
};

/// -P(u . grad u) - P(damping(u)). The viscous term is excluded.
SpectralField rhs_nonlinear(const SpectralField& u, const DampingSpec& spec);

/// One integrating-factor Heun step of size state.dt:
///   u* = E (u + dt N(u)),  u+ = E (u + dt/2 N(u)) + dt/2 N(u*),  E = exp(-|xi|^2 dt).
/// Throws BlowUpError on non-finite output or a velocity above the ceiling.
SolverState step(const SolverState& state, const SimConfig& config);

/// Step size: fixed config.dt, or cfl * min(dx / max|u|, 1 / (1 + max a(|u|^2))) capped by dt_max.
double choose_dt(const SolverState& state, const SimConfig& config);

struct RunSinks {
    std::function<void(const BudgetRow&)> on_row;
    std::function<void(const SolverState&)> on_state;  // called at every output time
};

struct RunResult {
    SolverState final_state;
    BudgetSeries series;
    bool blew_up = false;
    std::string blowup_message;
    std::vector<std::string> warnings;
};

/// Integrate from the configured initial condition (or `initial`, when given) to t_max,
/// emitting a budget row at t = 0 and every multiple of output_interval.
/// Output times are k * output_interval measured from t = 0 so that a resumed run
/// lands on the same nodes as an uninterrupted one.
RunResult run(const SimConfig& config, const RunSinks& sinks = {},
              std::optional<SolverState> initial = std::nullopt);

}  // namespace nsdamp
