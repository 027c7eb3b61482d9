#include "nsdamp/integrator.hpp"

#include <cmath>
#include <limits>

#include "nsdamp/config.hpp"
#include "nsdamp/error.hpp"
#include "nsdamp/spectral_ops.hpp"
#include "nsdamp/transform.hpp"

namespace nsdamp {

void SimConfig::validate() const {
    if (dim != 2 && dim != 3) throw ConfigError("dim", "dim must be 2 or 3");
    if (n < 4 || n % 2 != 0) throw ConfigError("n", "n must be even and >= 4");
    if (!(box_length > 0.0) || !std::isfinite(box_length)) throw ConfigError("box_length", "box_length must be > 0");
    try {
        damping.validate();
    } catch (const ValidationError& e) {
        throw ConfigError(std::string("damping.") + (std::string(e.what()).starts_with("alpha") ? "alpha" : "beta"),
                          e.what());
    }
    if (!(t_max >= 0.0) || !std::isfinite(t_max)) throw ConfigError("t_max", "t_max must be >= 0");
    if (dt && !(*dt > 0.0)) throw ConfigError("dt", "dt must be > 0");
    if (!(cfl > 0.0 && cfl <= 1.0)) throw ConfigError("cfl", "cfl must be in (0, 1]");
    if (!(dt_max > 0.0)) throw ConfigError("dt_max", "dt_max must be > 0");
    if (!(output_interval > 0.0)) throw ConfigError("output_interval", "output_interval must be > 0");
    if (friedrichs_radius && !(*friedrichs_radius > 0.0))
        throw ConfigError("friedrichs_radius", "friedrichs_radius must be > 0");
    if (!(blowup_ceiling > 0.0)) throw ConfigError("blowup_ceiling", "blowup_ceiling must be > 0");
    if (!(tol_budget > 0.0)) throw ConfigError("tol_budget", "tol_budget must be > 0");
    if (!(stability_c >= 0.0)) throw ConfigError("stability_c", "stability_c must be >= 0");
}

SpectralField rhs_nonlinear(const SpectralField& u, const DampingSpec& spec) {
    return detail::evaluate_nonlinear(u, spec, true).rhs;
}

namespace {

struct StageResult {
    SpectralField rhs;
    double max_speed;
};

StageResult stage_rhs(const SpectralField& u, const SimConfig& config, double t) {
    if (!config.convection && !config.damping.active()) {
        SpectralField zero(u.grid(), u.components());
        zero.set_divergence_free(true);
        return {std::move(zero), 0.0};
    }
    try {
        auto eval = detail::evaluate_nonlinear(u, config.damping, config.convection);
        return {std::move(eval.rhs), eval.max_speed};
    } catch (const BlowUpError& e) {
        throw BlowUpError(e.what(), t, l2_norm_sq(u), std::pow(sobolev_norm(u, 1.0, true), 2));
    }
}

void check_ceiling(double max_speed, const SpectralField& u, const SimConfig& config, double t) {
    if (!(max_speed <= config.blowup_ceiling))
        throw BlowUpError("velocity " + std::to_string(max_speed) + " exceeds ceiling " +
                              std::to_string(config.blowup_ceiling),
                          t, l2_norm_sq(u), std::pow(sobolev_norm(u, 1.0, true), 2));
}

}  // namespace

SolverState step(const SolverState& state, const SimConfig& config) {
    const double dt = state.dt;
    if (!(dt > 0.0)) throw ValidationError("step: dt must be > 0");
    const SpectralField& u = state.u;
    const Grid& grid = u.grid();
    const std::size_t modes = grid.size();
    const int comps = u.components();

    std::vector<double> decay(modes);
    for (std::size_t m = 0; m < modes; ++m) decay[m] = std::exp(-grid.xi_sq(m) * dt);

    auto first = stage_rhs(u, config, state.t);
    check_ceiling(first.max_speed, u, config, state.t);

    SpectralField predictor = u;
    predictor.axpy(dt, first.rhs);
    for (int c = 0; c < comps; ++c) {
        auto p = predictor.component(c);
        for (std::size_t m = 0; m < modes; ++m) p[m] *= decay[m];
    }
    auto second = stage_rhs(predictor, config, state.t + dt);
    check_ceiling(second.max_speed, predictor, config, state.t + dt);

    SpectralField next = u;
    next.axpy(0.5 * dt, first.rhs);
    for (int c = 0; c < comps; ++c) {
        auto p = next.component(c);
        for (std::size_t m = 0; m < modes; ++m) p[m] *= decay[m];
    }
    next.axpy(0.5 * dt, second.rhs);
    dealias(next);
    if (config.friedrichs_radius) next = friedrichs_truncate(next, *config.friedrichs_radius);
    next.set_divergence_free(true);

    if (!next.all_finite())
        throw BlowUpError("non-finite coefficients after step", state.t + dt, l2_norm_sq(u),
                          std::pow(sobolev_norm(u, 1.0, true), 2));
    return SolverState{state.t + dt, std::move(next), state.step_count + 1, dt};
}

double choose_dt(const SolverState& state, const SimConfig& config) {
    if (config.dt) return *config.dt;
    const PhysicalField vel = detail::inverse_unchecked(state.u);
    const int dim = vel.grid().dim();
    double max_speed_sq = 0.0, max_rate = 0.0;
    for (std::size_t p = 0; p < vel.points(); ++p) {
        double s = 0.0;
        for (int c = 0; c < dim; ++c) s += vel.at(c, p) * vel.at(c, p);
        max_speed_sq = std::max(max_speed_sq, s);
        max_rate = std::max(max_rate, damping_factor(s, config.damping));
    }
    const double advective = max_speed_sq > 0.0 ? vel.grid().spacing() / std::sqrt(max_speed_sq)
                                                : std::numeric_limits<double>::infinity();
    const double stiffness = 1.0 / (1.0 + max_rate);
    return std::min(config.dt_max, config.cfl * std::min(advective, stiffness));
}

RunResult run(const SimConfig& config, const RunSinks& sinks, std::optional<SolverState> initial) {
    config.validate();
    set_execution_policy({threads_from_environment(), config.strict_deterministic});
    const Grid grid = config.grid();

    SolverState state = initial ? std::move(*initial)
                                : SolverState{0.0, build_ic(config.ic, grid), 0, config.dt.value_or(config.dt_max)};
    if (!(state.u.grid() == grid)) throw ValidationError("run: initial state grid does not match the configuration");

    RunResult result{state, BudgetSeries(config.damping, config_echo(config).dump()), false, {}, {}};
    if (config.dt && config.output_interval > 10.0 * *config.dt * (1.0 + 1e-12))
        result.warnings.push_back("output_interval exceeds 10*dt; budget time integrals will be coarse");

    auto emit = [&](const SolverState& s) {
        BudgetRow row = compute_budget_row(s.u, s.t, config.damping);
        result.series.append(row);
        if (sinks.on_row) sinks.on_row(result.series.rows().back());
        if (sinks.on_state) sinks.on_state(s);
    };

    const double interval = config.output_interval;
    try {
        emit(state);
        auto next_k = static_cast<long long>(std::floor(state.t / interval * (1.0 + 1e-12))) + 1;
        while (state.t < config.t_max) {
            const double target = std::min(static_cast<double>(next_k) * interval, config.t_max);
            while (state.t < target) {
                double dt = choose_dt(state, config);
                const double remaining = target - state.t;
                const bool landing = dt >= remaining * (1.0 - 1e-9);
                state.dt = landing ? remaining : dt;
                state = step(state, config);
                if (landing) state.t = target;
            }
            emit(state);
            ++next_k;
        }
    } catch (const BlowUpError& e) {
        result.blew_up = true;
        result.blowup_message = e.what();
        const double t = std::isfinite(e.t()) ? e.t() : state.t;
        result.series.append_blowup(std::max(t, state.t));
        if (sinks.on_row) sinks.on_row(result.series.rows().back());
    }
    result.final_state = std::move(state);
    return result;
}

}  // namespace nsdamp
