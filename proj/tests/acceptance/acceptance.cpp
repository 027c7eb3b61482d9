// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <malloc.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "nsdamp/budget_io.hpp"
#include "nsdamp/checkpoint.hpp"
#include "nsdamp/diagnostics.hpp"
#include "nsdamp/integrator.hpp"
#include "nsdamp/spectral_ops.hpp"
#include "nsdamp/transform.hpp"

using namespace nsdamp;

namespace {

constexpr double pi = std::numbers::pi;

struct Outcome {
    bool pass = true;
    std::vector<std::string> details;

    void require(bool ok, const std::string& what) {
        pass = pass && ok;
        details.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
    }
    void note(const std::string& what) { details.push_back("     " + what); }
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

SimConfig tg3d(const DampingSpec& damping, double dt, int n = 32) {
    SimConfig c;
    c.dim = 3;
    c.n = n;
    c.t_max = 1.0;
    c.dt = dt;
    c.output_interval = dt;
    c.damping = damping;
    c.ic.kind = IcKind::taylor_green;
    return c;
}

// ---------------------------------------------------------------------------

Outcome classical_limit() {
    Outcome o;
    SimConfig c;
    c.dim = 2;
    c.n = 64;
    c.t_max = 1.0;
    c.dt = 1e-3;
    c.output_interval = 1e-3;
    c.damping = DampingSpec::none();
    const auto r = run(c);
    const double e0 = 2.0 * pi * pi;
    double err = 0.0;
    for (const auto& row : r.series.valid_rows())
        err = std::max(err, std::abs(row.l2_sq - e0 * std::exp(-4.0 * row.t)));
    o.require(!r.blew_up && r.final_state.t == 1.0, "run reached t = 1");
    o.require(err <= 1e-6 * e0, fmt("max |E(t) - 2pi^2 e^{-4t}| = %.3e <= %.3e", err, 1e-6 * e0));
    return o;
}

Outcome pure_diffusion() {
    Outcome o;
    SimConfig c;
    c.dim = 3;
    c.n = 16;
    c.convection = false;
    const Grid g = c.grid();
    SpectralField u(g, 3);
    const double half = std::sqrt(g.volume()) / 2.0;
    const auto plus = g.mode_of({1, 0, 0}), minus = g.mode_of({-1, 0, 0});
    u.at(0, plus) = u.at(0, minus) = half;
    double worst = 0.0;
    bool others_zero = true;
    for (double dt : {1e-3, 1e-2, 0.1}) {
        SolverState s{0.0, u, 0, dt};
        for (int i = 0; i < 50; ++i) {
            const Complex before = s.u.at(0, plus);
            s = step(s, c);
            worst = std::max(worst, std::abs(s.u.at(0, plus) / before - std::exp(-dt)) / std::exp(-dt));
            worst = std::max(worst, std::abs(s.u.at(0, minus) - s.u.at(0, plus)) / std::abs(s.u.at(0, plus)));
        }
        for (int comp = 0; comp < 3; ++comp)
            for (std::size_t m = 0; m < g.size(); ++m)
                if (!(comp == 0 && (m == plus || m == minus)) && s.u.at(comp, m) != Complex{}) others_zero = false;
    }
    o.require(worst <= 1e-14, fmt("max relative deviation of the per-step factor from e^{-dt} = %.3e", worst));
    o.require(others_zero, "no other mode is excited");
    return o;
}

struct LogRuns {
    double alpha;
    BudgetSeries coarse, fine;
};

std::vector<LogRuns> log_runs;

Outcome l2_inequality() {
    Outcome o;
    for (double alpha : {0.25, 0.5, 1.0}) {
        LogRuns lr{alpha, run(tg3d(DampingSpec::log(alpha), 1e-3)).series,
                   run(tg3d(DampingSpec::log(alpha), 5e-4)).series};
        const auto a = check_l2_inequality(lr.coarse, 1e-4);
        const auto b = check_l2_inequality(lr.fine, 1e-4);
        const double ratio = a.max_abs_residual / b.max_abs_residual;
        o.require(!lr.coarse.blew_up() && !lr.fine.blew_up(), fmt("alpha = %.2f: runs completed", alpha));
        o.require(a.pass && a.max_residual <= 1e-4 * a.reference,
                  fmt("alpha = %.2f: residual %.3e <= %.3e (dt = 1e-3)", alpha, a.max_residual, 1e-4 * a.reference));
        o.require(b.pass, fmt("alpha = %.2f: residual %.3e passes at dt = 5e-4", alpha, b.max_residual));
        o.require(ratio >= 3.5, fmt("alpha = %.2f: residual ratio under dt halving = %.3f >= 3.5", alpha, ratio));
        log_runs.push_back(std::move(lr));
    }
    return o;
}

Outcome h1_inequality() {
    Outcome o;
    if (log_runs.empty()) {
        o.require(false, "log-damping runs unavailable");
        return o;
    }
    for (const auto& lr : log_runs) {
        for (const auto* series : {&lr.coarse, &lr.fine}) {
            const auto r = check_h1_inequality(*series, 1e-4);
            const double dt = series == &lr.coarse ? 1e-3 : 5e-4;
            o.require(r.pass, fmt("alpha = %.2f, dt = %.0e: residual %.3e", lr.alpha, dt, r.max_residual) +
                                  fmt(" <= tol %.3e", r.tolerance));
            o.note(fmt("alpha = %.2f: a_alpha = %.6f, doubled-rate residual %.3e", lr.alpha, *r.a_alpha,
                       r.max_residual_doubled_rate) +
                   fmt(", theorem-display residual %.3e", r.max_residual_statement_form));
            if (lr.alpha >= 0.5) {
                double worst = 0.0;
                const auto rows = series->valid_rows();
                for (std::size_t k = 1; k < rows.size(); ++k)
                    worst = std::max(worst, rows[k].terms.h1dot_sq - rows[k - 1].terms.h1dot_sq);
                const double tol = 1e-4 * rows.front().terms.h1dot_sq;
                o.require(*r.a_alpha == 0.0 && worst <= tol,
                          fmt("alpha = %.2f: max increase of ||grad u||^2 = %.3e <= %.3e", lr.alpha, worst, tol));
            }
        }
    }
    return o;
}

Outcome power_damping() {
    Outcome o;
    {
        const auto r = run(tg3d(DampingSpec::power(1.0, 4.0), 1e-3));
        const auto l2 = check_l2_inequality(r.series, 1e-4);
        const auto h1 = check_h1_inequality(r.series, 1e-4);
        o.require(!r.blew_up, "beta = 4, alpha = 1: run completed");
        o.require(l2.pass, fmt("beta = 4, alpha = 1: L2 residual %.3e <= %.3e", l2.max_residual, l2.tolerance));
        o.require(h1.pass, fmt("beta = 4, alpha = 1: H1 residual %.3e <= %.3e", h1.max_residual, h1.tolerance));
        o.note(fmt("beta = 4, alpha = 1: H1 residual with coefficients (1, alpha(beta-1)/2) %.3e, (1, alpha(beta-1)) %.3e",
                   h1.max_residual_statement_form, h1.max_residual_unit_laplacian));
    }
    {
        const auto r = run(tg3d(DampingSpec::power(0.4, 3.0), 1e-3));
        o.require(!r.blew_up && !r.series.valid_rows().empty(), "beta = 3, alpha = 0.4: run completed with budgets");
        const auto l2 = check_l2_inequality(r.series, 1e-4);
        const auto h1 = check_h1_inequality(r.series, 1e-4);
        o.note(fmt("beta = 3, alpha = 0.4: L2 residual %.3e", l2.max_residual) + (l2.pass ? " (pass)" : " (violated)"));
        o.note(fmt("beta = 3, alpha = 0.4: H1 residual %.3e, (1, alpha(beta-1)/2) form %.3e, (1, alpha(beta-1)) form %.3e",
                   h1.max_residual, h1.max_residual_statement_form, h1.max_residual_unit_laplacian) +
               (h1.pass ? " (pass)" : " (violated; reported only)"));
    }
    return o;
}

Outcome monotonicity() {
    Outcome o;
    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> log_scale(-6.0, 3.0);
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int dim : {2, 3}) {
        double worst = 0.0;
        long failures = 0;
        for (long i = 0; i < 1000000; ++i) {
            double x[3] = {0, 0, 0}, y[3] = {0, 0, 0};
            auto draw = [&](double* v) {
                double n = 0.0;
                for (int j = 0; j < dim; ++j) n += (v[j] = normal(rng)) * v[j];
                const double s = std::pow(10.0, log_scale(rng)) / std::sqrt(n);
                for (int j = 0; j < dim; ++j) v[j] *= s;
            };
            draw(x);
            if (uni(rng) < 0.25) {
                // nearby pair: y = x + small relative perturbation
                draw(y);
                const double rel = std::pow(10.0, -12.0 * uni(rng));
                double nx = 0.0, ny = 0.0;
                for (int j = 0; j < dim; ++j) nx += x[j] * x[j], ny += y[j] * y[j];
                for (int j = 0; j < dim; ++j) y[j] = x[j] + rel * std::sqrt(nx / ny) * y[j];
            } else {
                draw(y);
            }
            double nx = 0.0, ny = 0.0;
            for (int j = 0; j < dim; ++j) nx += x[j] * x[j], ny += y[j] * y[j];
            const double bound = -1e-12 * std::pow(1.0 + std::sqrt(nx) + std::sqrt(ny), 4);
            const double gap = monotonicity_gap(std::span<const double>(x, dim), std::span<const double>(y, dim));
            if (gap < bound) ++failures;
            worst = std::min(worst, gap / std::pow(1.0 + std::sqrt(nx) + std::sqrt(ny), 4));
        }
        o.require(failures == 0, fmt("R^%.0f: 1e6 pairs, %.0f below bound, min gap/(1+|x|+|y|)^4 = %.3e", dim,
                                     static_cast<double>(failures), worst));
    }
    return o;
}

Outcome gronwall() {
    Outcome o;
    const std::size_t n = 1001;
    std::vector<double> t(n), f(n), g(n, 0.0), h(n, 1.0);
    for (std::size_t k = 0; k < n; ++k) {
        t[k] = 1e-3 * static_cast<double>(k);
        f[k] = std::exp(t[k]);
    }
    const auto closed = gronwall_envelope(1.0, t, f, g, h);
    o.require(closed.hypothesis_holds && closed.conclusion_holds, "closed form: hypothesis and conclusion hold");
    double worst = 0.0;
    for (double r : closed.residuals) worst = std::max(worst, std::abs(r));
    o.require(worst <= 1e-5, fmt("closed form: max |residual| = %.3e <= 1e-5", worst));

    std::mt19937_64 rng(31337);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    long violations = 0, trials = 20000;
    double max_excess = -1e300;
    for (long trial = 0; trial < trials; ++trial) {
        const std::size_t m = 2 + static_cast<std::size_t>(uni(rng) * 400);
        const double A = std::pow(10.0, 4.0 * uni(rng) - 2.0);
        const double hscale = 10.0 * uni(rng), gscale = 10.0 * uni(rng) * A;
        std::vector<double> ts(m), fs(m), gs(m), hs(m);
        double tk = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            ts[k] = tk;
            tk += 1e-4 + 2e-2 * uni(rng);
            gs[k] = gscale * uni(rng);
            hs[k] = hscale * uni(rng);
        }
        double G = 0.0, HF = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            double bound = A;
            if (k > 0) {
                const double dt = ts[k] - ts[k - 1];
                G += 0.5 * dt * (gs[k - 1] + gs[k]);
                HF += 0.5 * dt * hs[k - 1] * fs[k - 1];
                bound = (A + HF - G) / (1.0 - 0.5 * dt * hs[k]);
            }
            fs[k] = bound - uni(rng) * uni(rng) * A;
            if (k > 0) HF += 0.5 * (ts[k] - ts[k - 1]) * hs[k] * fs[k];
        }
        const auto r = gronwall_envelope(A, ts, fs, gs, hs);
        if (!r.hypothesis_holds) continue;
        if (!r.conclusion_holds) ++violations;
        max_excess = std::max(max_excess, r.max_excess / A);
    }
    o.require(violations == 0, fmt("randomized: %.0f of %.0f samples violate beyond quadrature tolerance",
                                   static_cast<double>(violations), static_cast<double>(trials)));
    o.note(fmt("randomized: max (residual - quadrature slack)/A = %.3e", max_excess));
    return o;
}

Outcome stability() {
    Outcome o;
    SimConfig c = tg3d(DampingSpec::log(0.5), 1e-3, 16);
    c.output_interval = 1e-2;
    c.ic.kind = IcKind::random_divfree;
    c.ic.amplitude = 3.0;
    c.ic.seed = 8;

    auto collect = [](std::vector<Snapshot>& into) {
        RunSinks sinks;
        sinks.on_state = [&into](const SolverState& s) { into.push_back({s.t, s.u}); };
        return sinks;
    };
    std::vector<Snapshot> a, b, p;
    const auto ra = run(c, collect(a));
    const auto rb = run(c, collect(b));
    std::ostringstream ca, cb;
    write_budget_csv(ra.series, ca);
    write_budget_csv(rb.series, cb);
    const auto same = stability_compare(a, b, c.stability_c);
    o.require(same.identical && ra.final_state.u == rb.final_state.u && ca.str() == cb.str(),
              "identical strict runs are bit-identical (states and budget CSV)");

    SpectralField u0 = build_ic(c.ic, c.grid());
    InitialCondition bump;
    bump.kind = IcKind::single_mode;
    bump.mode = {1, 0, 0};
    bump.component = 1;
    bump.amplitude = 1e-8;
    u0 += build_ic(bump, c.grid());
    run(c, collect(p), SolverState{0.0, u0, 0, *c.dt});
    const auto pert = stability_compare(a, p, c.stability_c);
    o.require(pert.pass, fmt("1e-8 perturbation: max ||w||^2 = %.3e, ||w0||^2 = %.3e, c = %.2f", pert.max_w_sq,
                             pert.w0_sq, pert.c));
    o.note(fmt("calibrated c_min = %.3e (bound holds for every c >= c_min)", pert.c_min));
    return o;
}

Outcome structural() {
    Outcome o;
    const Grid g(3, 16);
    PhysicalField f(g, 3);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    for (auto& v : f.data()) v = uni(rng);
    const auto u = forward_transform(f);

    const auto p = leray_project(u);
    const auto pp = leray_project(p);
    double idem = 0.0;
    for (std::size_t i = 0; i < p.data().size(); ++i) idem = std::max(idem, std::abs(pp.data()[i] - p.data()[i]));
    idem /= p.max_abs();
    o.require(idem <= 1e-12, fmt("Leray idempotence: %.3e <= 1e-12", idem));

    double quad = 0.0;
    for (double v : f.data()) quad += v * v;
    quad *= g.cell_volume();
    const double pars = std::abs(l2_norm_sq(u) - quad) / quad;
    o.require(pars <= 1e-12, fmt("Parseval: relative %.3e <= 1e-12", pars));

    o.require(friedrichs_truncate(u, g.max_xi() * 1.0001) == u, "J_R is the identity for R > max|xi|");

    SimConfig c = tg3d(DampingSpec::log(0.25), 1e-3, 16);
    c.t_max = 0.2;
    c.output_interval = 1e-2;
    c.ic.kind = IcKind::random_divfree;
    c.ic.amplitude = 4.0;
    double div = 0.0;
    SolverState s{0.0, build_ic(c.ic, c.grid()), 0, 1e-3};
    for (int i = 0; i < 100; ++i) {
        s = step(s, c);
        div = std::max(div, max_relative_divergence(s.u));
    }
    o.require(div <= 1e-10, fmt("post-step divergence: %.3e <= 1e-10", div));

    std::stringstream buf;
    checkpoint_save(s, buf);
    const auto back = checkpoint_load(buf);
    o.require(back.u == s.u && back.t == s.t && back.dt == s.dt && back.step_count == s.step_count,
              "checkpoint round trip is bit-exact");

    SimConfig half = c;
    half.t_max = 0.1;
    const auto first = run(half).final_state;
    std::stringstream mid;
    checkpoint_save(first, mid);
    const auto resumed = run(c, {}, checkpoint_load(mid)).final_state;
    const auto straight = run(c).final_state;
    o.require(resumed.u == straight.u && resumed.t == straight.t && resumed.step_count == straight.step_count,
              "resume at t = 0.1 then run to 0.2 equals the uninterrupted run bit for bit");
    return o;
}

Outcome l4_increments() {
    Outcome o;
    SimConfig c = tg3d(DampingSpec::log(0.5), 2e-3, 32);
    c.t_max = 5.0;
    c.output_interval = 1e-2;
    const auto r = run(c);
    o.require(!r.blew_up && r.final_state.t == 5.0, "run reached t = 5");
    const auto incs_v = l4_h1_window_increments(r.series, 1.0);
    o.require(incs_v.size() == 5, "five unit windows covered");
    bool decreasing = incs_v.size() == 5;
    std::string incs;
    for (std::size_t w = 0; w < incs_v.size(); ++w) {
        incs += fmt("%.4e ", incs_v[w]);
        if (w >= 1 && !(incs_v[w] < incs_v[w - 1])) decreasing = false;
    }
    o.require(decreasing, "unit-window increments strictly decreasing: " + incs);
    o.note(fmt("int_0^5 ||u||^4_{H1dot} = %.6e", l4_h1_diagnostic(r.series)));
    return o;
}

}  // namespace

int main() {
#ifdef __GLIBC__
    mallopt(M_MMAP_THRESHOLD, 32 << 20);
    mallopt(M_TRIM_THRESHOLD, 256 << 20);
#endif
    struct Criterion {
        int id;
        const char* name;
        std::function<Outcome()> fn;
    };
    const std::vector<Criterion> criteria{
        {1, "classical limit, 2D Taylor-Green energy", classical_limit},
        {2, "pure diffusion is exact", pure_diffusion},
        {3, "L2 budget, log damping, second-order residual", l2_inequality},
        {4, "H1 budget with envelope, log damping", h1_inequality},
        {5, "power damping budgets", power_damping},
        {6, "monotonicity of the log damping", monotonicity},
        {7, "Gronwall envelope checker", gronwall},
        {8, "determinism and two-run stability", stability},
        {9, "structural invariants", structural},
        {10, "L4-in-time H1 increments", l4_increments},
    };

    int failed = 0;
    std::vector<std::string> summary;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.fn();
        } catch (const std::exception& e) {
            o.require(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        for (const auto& d : o.details) std::printf("  [%d] %s\n", c.id, d.c_str());
        char line[256];
        std::snprintf(line, sizeof line, "criterion %2d: %s  %s (%.1f s)", c.id, o.pass ? "PASS" : "FAIL", c.name,
                      secs);
        std::printf("%s\n", line);
        std::fflush(stdout);
        summary.push_back(line);
        if (!o.pass) ++failed;
    }
    std::printf("\nsummary\n");
    for (const auto& s : summary) std::printf("%s\n", s.c_str());
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
