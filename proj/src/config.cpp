#include "nsdamp/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "nsdamp/diagnostics.hpp"
#include "nsdamp/error.hpp"

namespace nsdamp {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string strip_comment(const std::string& line) {
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') quoted = !quoted;
        if (line[i] == '#' && !quoted) return line.substr(0, i);
    }
    return line;
}

std::string unquote(const std::string& v) {
    if (v.size() >= 2 && v.front() == '"' && v.back() == '"') return v.substr(1, v.size() - 2);
    return v;
}

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "dim", "n", "box_length", "t_max", "dt", "cfl", "dt_max", "seed", "output_interval",
        "friedrichs_radius", "blowup_ceiling", "strict_deterministic", "tol_budget", "stability_c", "convection",
        "damping.kind", "damping.alpha", "damping.beta",
        "ic.kind", "ic.dim", "ic.amplitude", "ic.spectrum_slope", "ic.peak_wavenumber", "ic.seed", "ic.mode",
        "ic.component", "ic.checkpoint"};
    return keys;
}

class Reader {
public:
    explicit Reader(const ConfigEntries& e) : entries_(e) {}

    bool has(const std::string& key) const { return entries_.count(key) != 0; }

    double real(const std::string& key, double fallback) const {
        return has(key) ? real(key) : fallback;
    }
    double real(const std::string& key) const {
        const std::string v = require(key);
        double out = 0.0;
        auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
        if (ec != std::errc{} || ptr != v.data() + v.size() || !std::isfinite(out))
            throw ConfigError(key, "expected a finite number, got '" + v + "'");
        return out;
    }
    long long integer(const std::string& key, long long fallback) const {
        return has(key) ? integer(key) : fallback;
    }
    long long integer(const std::string& key) const {
        const std::string v = require(key);
        long long out = 0;
        auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
        if (ec != std::errc{} || ptr != v.data() + v.size())
            throw ConfigError(key, "expected an integer, got '" + v + "'");
        return out;
    }
    bool boolean(const std::string& key, bool fallback) const {
        if (!has(key)) return fallback;
        const std::string v = require(key);
        if (v == "true") return true;
        if (v == "false") return false;
        throw ConfigError(key, "expected true or false, got '" + v + "'");
    }
    std::string text(const std::string& key, const std::string& fallback) const {
        return has(key) ? text(key) : fallback;
    }
    std::string text(const std::string& key) const { return unquote(require(key)); }

    std::array<int, 3> triple(const std::string& key, std::array<int, 3> fallback) const {
        if (!has(key)) return fallback;
        std::string v = require(key);
        if (v.size() < 2 || v.front() != '[' || v.back() != ']')
            throw ConfigError(key, "expected a list like [1, 0, 0]");
        std::stringstream ss(v.substr(1, v.size() - 2));
        std::array<int, 3> out{0, 0, 0};
        std::string item;
        int i = 0;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (i >= 3) throw ConfigError(key, "at most 3 entries");
            auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), out[i]);
            if (ec != std::errc{} || ptr != item.data() + item.size())
                throw ConfigError(key, "expected integers, got '" + item + "'");
            ++i;
        }
        return out;
    }

private:
    std::string require(const std::string& key) const {
        auto it = entries_.find(key);
        if (it == entries_.end()) throw ConfigError(key, "missing required key");
        return it->second;
    }
    const ConfigEntries& entries_;
};

std::string format_real(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

}  // namespace

ConfigEntries parse_config_text(const std::string& text) {
    ConfigEntries entries;
    std::istringstream in(text);
    std::string line, section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string where = "line " + std::to_string(line_no);
        line = trim(strip_comment(line));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(where, "unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty()) throw ConfigError(where, "empty section name");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(where, "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError(where, "empty key");
        if (value.empty()) throw ConfigError(where, "empty value for '" + key + "'");
        const std::string path = section.empty() ? key : section + "." + key;
        if (!entries.emplace(path, value).second) throw ConfigError(path, "duplicate key");
    }
    return entries;
}

SimConfig build_config(const ConfigEntries& entries) {
    for (const auto& [key, value] : entries)
        if (!known_keys().count(key)) throw ConfigError(key, "unknown key");

    Reader r(entries);
    SimConfig c;
    c.dim = static_cast<int>(r.integer("dim", 3));
    c.n = static_cast<int>(r.integer("n"));
    c.box_length = r.real("box_length", c.box_length);
    c.t_max = r.real("t_max");
    if (r.has("dt") && r.text("dt") != "adaptive") c.dt = r.real("dt");
    c.cfl = r.real("cfl", c.cfl);
    c.dt_max = r.real("dt_max", c.dt_max);
    c.seed = static_cast<std::uint64_t>(r.integer("seed", 0));
    c.output_interval = r.real("output_interval", c.output_interval);
    if (r.has("friedrichs_radius")) c.friedrichs_radius = r.real("friedrichs_radius");
    c.blowup_ceiling = r.real("blowup_ceiling", c.blowup_ceiling);
    c.strict_deterministic = r.boolean("strict_deterministic", c.strict_deterministic);
    c.tol_budget = r.real("tol_budget", c.tol_budget);
    c.stability_c = r.real("stability_c", c.stability_c);
    c.convection = r.boolean("convection", c.convection);

    try {
        c.damping.kind = damping_kind_from_string(r.text("damping.kind"));
    } catch (const ValidationError& e) {
        throw ConfigError("damping.kind", e.what());
    }
    if (c.damping.kind != DampingKind::none) c.damping.alpha = r.real("damping.alpha");
    if (c.damping.kind == DampingKind::power) {
        c.damping.beta = r.real("damping.beta");
    } else if (r.has("damping.beta")) {
        throw ConfigError("damping.beta", "beta is only used with kind = power");
    }
    if (c.damping.alpha < 0.0) throw ConfigError("damping.alpha", "alpha must be ≥ 0");
    if (c.damping.kind == DampingKind::power && !(c.damping.beta > 1.0))
        throw ConfigError("damping.beta", "beta must be > 1");

    try {
        c.ic.kind = ic_kind_from_string(r.text("ic.kind", "taylor_green"));
    } catch (const ValidationError& e) {
        throw ConfigError("ic.kind", e.what());
    }
    c.ic.dim = static_cast<int>(r.integer("ic.dim", 0));
    c.ic.amplitude = r.real("ic.amplitude", c.ic.amplitude);
    c.ic.spectrum_slope = r.real("ic.spectrum_slope", c.ic.spectrum_slope);
    c.ic.peak_wavenumber = r.real("ic.peak_wavenumber", c.ic.peak_wavenumber);
    if (!(c.ic.peak_wavenumber > 0.0)) throw ConfigError("ic.peak_wavenumber", "must be > 0");
    c.ic.seed = static_cast<std::uint64_t>(r.integer("ic.seed", static_cast<long long>(c.seed)));
    c.ic.mode = r.triple("ic.mode", c.ic.mode);
    c.ic.component = static_cast<int>(r.integer("ic.component", c.ic.component));
    if (c.ic.component < 0 || c.ic.component >= c.dim)
        throw ConfigError("ic.component", "must be in [0, dim)");
    if (c.ic.kind == IcKind::from_checkpoint) c.ic.checkpoint_path = r.text("ic.checkpoint");
    if (c.ic.kind == IcKind::taylor_green && c.ic.dim != 0 && c.ic.dim != c.dim)
        throw ConfigError("ic.dim", "taylor_green dimension does not match grid dim");

    c.validate();
    return c;
}

SimConfig parse_config(const std::string& text) { return build_config(parse_config_text(text)); }

SimConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("", "cannot open config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

nlohmann::json config_echo(const SimConfig& c) {
    nlohmann::json j;
    j["dim"] = c.dim;
    j["n"] = c.n;
    j["box_length"] = c.box_length;
    j["t_max"] = c.t_max;
    j["dt"] = c.dt ? nlohmann::json(*c.dt) : nlohmann::json("adaptive");
    j["cfl"] = c.cfl;
    j["dt_max"] = c.dt_max;
    j["seed"] = c.seed;
    j["output_interval"] = c.output_interval;
    j["friedrichs_radius"] = c.friedrichs_radius ? nlohmann::json(*c.friedrichs_radius) : nlohmann::json(nullptr);
    j["blowup_ceiling"] = c.blowup_ceiling;
    j["strict_deterministic"] = c.strict_deterministic;
    j["tol_budget"] = c.tol_budget;
    j["stability_c"] = c.stability_c;
    j["convection"] = c.convection;
    j["viscosity"] = 1.0;
    j["damping"] = {{"kind", to_string(c.damping.kind)},
                    {"alpha", c.damping.alpha},
                    {"formula", c.damping.formula()}};
    if (c.damping.kind == DampingKind::power) j["damping"]["beta"] = c.damping.beta;
    if (c.damping.kind == DampingKind::log && c.damping.alpha > 0.0) j["damping"]["a_alpha"] = a_alpha(c.damping.alpha);
    j["ic"] = {{"kind", to_string(c.ic.kind)},
               {"dim", c.ic.dim},
               {"amplitude", c.ic.amplitude},
               {"spectrum_slope", c.ic.spectrum_slope},
               {"peak_wavenumber", c.ic.peak_wavenumber},
               {"seed", c.ic.seed},
               {"mode", c.ic.mode},
               {"component", c.ic.component}};
    if (c.ic.kind == IcKind::from_checkpoint) j["ic"]["checkpoint"] = c.ic.checkpoint_path;
    return j;
}

std::string config_to_text(const SimConfig& c) {
    std::ostringstream out;
    out << "dim = " << c.dim << "\n";
    out << "n = " << c.n << "\n";
    out << "box_length = " << format_real(c.box_length) << "\n";
    out << "t_max = " << format_real(c.t_max) << "\n";
    out << "dt = " << (c.dt ? format_real(*c.dt) : std::string("adaptive")) << "\n";
    out << "cfl = " << format_real(c.cfl) << "\n";
    out << "dt_max = " << format_real(c.dt_max) << "\n";
    out << "seed = " << c.seed << "\n";
    out << "output_interval = " << format_real(c.output_interval) << "\n";
    if (c.friedrichs_radius) out << "friedrichs_radius = " << format_real(*c.friedrichs_radius) << "\n";
    out << "blowup_ceiling = " << format_real(c.blowup_ceiling) << "\n";
    out << "strict_deterministic = " << (c.strict_deterministic ? "true" : "false") << "\n";
    out << "tol_budget = " << format_real(c.tol_budget) << "\n";
    out << "stability_c = " << format_real(c.stability_c) << "\n";
    out << "convection = " << (c.convection ? "true" : "false") << "\n";
    out << "\n[damping]\nkind = " << to_string(c.damping.kind) << "\n";
    if (c.damping.kind != DampingKind::none) out << "alpha = " << format_real(c.damping.alpha) << "\n";
    if (c.damping.kind == DampingKind::power) out << "beta = " << format_real(c.damping.beta) << "\n";
    out << "\n[ic]\nkind = " << to_string(c.ic.kind) << "\n";
    if (c.ic.dim != 0) out << "dim = " << c.ic.dim << "\n";
    out << "amplitude = " << format_real(c.ic.amplitude) << "\n";
    out << "spectrum_slope = " << format_real(c.ic.spectrum_slope) << "\n";
    out << "peak_wavenumber = " << format_real(c.ic.peak_wavenumber) << "\n";
    out << "seed = " << c.ic.seed << "\n";
    out << "mode = [" << c.ic.mode[0] << ", " << c.ic.mode[1] << ", " << c.ic.mode[2] << "]\n";
    out << "component = " << c.ic.component << "\n";
    if (c.ic.kind == IcKind::from_checkpoint) out << "checkpoint = \"" << c.ic.checkpoint_path << "\"\n";
    return out.str();
}

}  // namespace nsdamp
