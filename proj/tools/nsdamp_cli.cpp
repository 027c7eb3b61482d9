// Command-line driver: solve, check, sweep.
//
// Exit codes: 0 all checks pass, 1 inequality violation, 2 blow-up, 3 usage/config error.

#include <fcntl.h>
#include <malloc.h>
#include <unistd.h>

#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "nsdamp/budget_io.hpp"
#include "nsdamp/checkpoint.hpp"
#include "nsdamp/config.hpp"
#include "nsdamp/error.hpp"

namespace fs = std::filesystem;
using namespace nsdamp;

namespace {

constexpr int exit_pass = 0;
constexpr int exit_violation = 1;
constexpr int exit_blowup = 2;
constexpr int exit_usage = 3;

// Held for the lifetime of a solve; concurrent solves into one directory fail fast.
class RunLock {
public:
    explicit RunLock(const fs::path& dir) : path_(dir / ".lock") {
        fd_ = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
        if (fd_ < 0) throw ConfigError("output", "run directory is locked (" + path_.string() + " exists)");
    }
    ~RunLock() {
        ::close(fd_);
        fs::remove(path_);
    }
    RunLock(const RunLock&) = delete;
    RunLock& operator=(const RunLock&) = delete;

private:
    fs::path path_;
    int fd_;
};

int solve_one(const SimConfig& config, const fs::path& out_dir, const std::string& resume) {
    fs::create_directories(out_dir);
    RunLock lock(out_dir);

    RunManifest manifest;
    manifest.config = config_echo(config);
    manifest.code_version = code_version();
    manifest.start_time = utc_timestamp();

    std::optional<SolverState> initial;
    if (!resume.empty()) {
        initial = checkpoint_load_file(resume);
        if (!(initial->u.grid() == config.grid()))
            throw CheckpointError("checkpoint grid does not match the configured grid");
    }

    const RunResult result = run(config, {}, std::move(initial));
    for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";

    const fs::path csv = out_dir / "budget.csv";
    {
        std::ofstream out(csv, std::ios::trunc);
        write_budget_csv(result.series, out);
    }
    manifest.outputs.push_back(csv.string());

    if (!result.blew_up) {
        const fs::path ckpt = out_dir / "final.ckpt";
        checkpoint_save_file(result.final_state, ckpt.string());
        manifest.outputs.push_back(ckpt.string());
    }

    int code = exit_pass;
    nlohmann::json checks;
    if (!result.series.valid_rows().empty()) {
        const auto l2 = check_l2_inequality(result.series, config.tol_budget);
        const auto h1 = check_h1_inequality(result.series, config.tol_budget);
        checks["l2"] = to_json(l2);
        checks["h1"] = to_json(h1);
        checks["l4_h1"] = l4_h1_diagnostic(result.series);
        if (!l2.pass || !h1.pass) code = exit_violation;
    }
    if (result.blew_up) {
        code = exit_blowup;
        manifest.blew_up = true;
        manifest.blowup_message = result.blowup_message;
    }
    manifest.checks = checks;
    manifest.end_time = utc_timestamp();
    const fs::path manifest_path = out_dir / "run_manifest.json";
    manifest.outputs.push_back(manifest_path.string());
    write_manifest(manifest, manifest_path.string());

    std::cout << nlohmann::json{{"output", out_dir.string()},
                                {"blew_up", result.blew_up},
                                {"final_t", result.final_state.t},
                                {"steps", result.final_state.step_count},
                                {"checks", checks}}
                     .dump(2)
              << "\n";
    return code;
}

DampingSpec damping_from_echo(const nlohmann::json& echo) {
    const auto& d = echo.at("damping");
    DampingSpec spec;
    spec.kind = damping_kind_from_string(d.at("kind").get<std::string>());
    spec.alpha = d.value("alpha", 0.0);
    spec.beta = d.value("beta", 3.0);
    return spec;
}

std::string canonical_key(const std::string& key) {
    if (key == "alpha" || key == "beta" || key == "kind") return "damping." + key;
    if (key == "amplitude") return "ic.amplitude";
    return key;
}

}  // namespace

int main(int argc, char** argv) {
#ifdef __GLIBC__
    // Field-sized buffers are allocated every stage; keep them on the heap instead of fresh mmaps.
    mallopt(M_MMAP_THRESHOLD, 32 << 20);
    mallopt(M_TRIM_THRESHOLD, 256 << 20);
#endif
    CLI::App app{"Pseudo-spectral Navier-Stokes solver with nonlinear damping and energy-budget checks"};
    app.require_subcommand(1);

    auto* solve = app.add_subcommand("solve", "Integrate one configuration and check its budgets");
    std::string config_path, output_dir = "run", resume;
    bool strict = false;
    solve->add_option("--config", config_path, "Configuration file")->required();
    solve->add_option("--output", output_dir, "Output directory");
    solve->add_flag("--strict-deterministic", strict, "Single-threaded, bit-reproducible execution");
    solve->add_option("--resume", resume, "Checkpoint to resume from");

    auto* check = app.add_subcommand("check", "Re-run inequality checks on a saved budget CSV");
    std::string budget_path, mode = "both";
    double tol = 1e-4;
    std::string kind_override;
    std::optional<double> alpha_override, beta_override;
    check->add_option("--budget", budget_path, "budget.csv from a solve")->required();
    check->add_option("--mode", mode, "l2, h1 or both")->check(CLI::IsMember({"l2", "h1", "both"}));
    check->add_option("--tol", tol, "Relative tolerance");
    check->add_option("--kind", kind_override, "Damping kind (defaults to the run manifest)");
    check->add_option("--alpha", alpha_override, "Damping alpha (defaults to the run manifest)");
    check->add_option("--beta", beta_override, "Damping beta (defaults to the run manifest)");

    auto* sweep = app.add_subcommand("sweep", "Run one solve per value of a varied key");
    std::string sweep_config, vary, sweep_output = "sweep";
    bool sweep_strict = false;
    sweep->add_option("--config", sweep_config, "Base configuration file")->required();
    sweep->add_option("--vary", vary, "key=start:stop:step, e.g. alpha=0.1:0.5:0.05")->required();
    sweep->add_option("--output", sweep_output, "Parent output directory");
    sweep->add_flag("--strict-deterministic", sweep_strict, "Single-threaded, bit-reproducible execution");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : exit_usage;
    }

    try {
        if (*solve) {
            SimConfig config = load_config_file(config_path);
            if (strict) config.strict_deterministic = true;
            return solve_one(config, output_dir, resume);
        }

        if (*check) {
            DampingSpec spec;
            const fs::path manifest_path = fs::path(budget_path).parent_path() / "run_manifest.json";
            if (fs::exists(manifest_path)) spec = damping_from_echo(read_manifest(manifest_path.string()).config);
            else if (kind_override.empty())
                throw ConfigError("check", "no run_manifest.json next to the CSV; pass --kind/--alpha/--beta");
            if (!kind_override.empty()) spec.kind = damping_kind_from_string(kind_override);
            if (alpha_override) spec.alpha = *alpha_override;
            if (beta_override) spec.beta = *beta_override;
            spec.validate();

            std::ifstream in(budget_path);
            if (!in) throw ConfigError("budget", "cannot open " + budget_path);
            const BudgetSeries series = read_budget_csv(in, spec);
            if (series.valid_rows().empty()) throw ConfigError("budget", "no budget rows");
            nlohmann::json out;
            bool pass = true;
            if (mode != "h1") {
                const auto r = check_l2_inequality(series, tol);
                out["l2"] = to_json(r);
                pass = pass && r.pass;
            }
            if (mode != "l2") {
                const auto r = check_h1_inequality(series, tol);
                out["h1"] = to_json(r);
                pass = pass && r.pass;
            }
            out["blew_up"] = series.blew_up();
            std::cout << out.dump(2) << "\n";
            if (series.blew_up()) return exit_blowup;
            return pass ? exit_pass : exit_violation;
        }

        if (*sweep) {
            const auto eq = vary.find('=');
            if (eq == std::string::npos) throw ConfigError("vary", "expected key=start:stop:step");
            const std::string key = canonical_key(vary.substr(0, eq));
            const std::string range = vary.substr(eq + 1);
            double start, stop, stride;
            char c1, c2;
            std::istringstream rs(range);
            if (!(rs >> start >> c1 >> stop >> c2 >> stride) || c1 != ':' || c2 != ':' || !(stride > 0.0) ||
                stop < start)
                throw ConfigError("vary", "expected start:stop:step with step > 0 and stop >= start");

            std::ifstream in(sweep_config);
            if (!in) throw ConfigError("", "cannot open config file " + sweep_config);
            std::stringstream ss;
            ss << in.rdbuf();
            const ConfigEntries base = parse_config_text(ss.str());

            int worst = exit_pass;
            const auto count = static_cast<long long>(std::floor((stop - start) / stride + 1e-9)) + 1;
            for (long long i = 0; i < count; ++i) {
                const double value = start + static_cast<double>(i) * stride;
                ConfigEntries entries = base;
                entries[key] = format_double(value);
                SimConfig config = build_config(entries);
                if (sweep_strict) config.strict_deterministic = true;
                const fs::path dir = fs::path(sweep_output) / (key + "_" + format_double(value));
                fs::create_directories(dir);
                std::ofstream(dir / "config.toml") << config_to_text(config);
                worst = std::max(worst, solve_one(config, dir, ""));
            }
            return worst;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_usage;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const CheckpointError& e) {
        std::cerr << "checkpoint error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    }
    return exit_usage;
}
