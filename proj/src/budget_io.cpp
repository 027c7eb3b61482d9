#include "nsdamp/budget_io.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "nsdamp/error.hpp"

namespace nsdamp {

namespace {

constexpr const char* term_names[] = {"h1dot_sq",    "h2dot_sq",    "damp_l2",       "grad_sq_mod",
                                      "log_grad_sq", "grad_sq_thm", "weighted_grad", "forcing_rhs"};

std::vector<double*> term_fields(BudgetTerms& t) {
    return {&t.h1dot_sq,    &t.h2dot_sq,    &t.damp_l2,       &t.grad_sq_mod,
            &t.log_grad_sq, &t.grad_sq_thm, &t.weighted_grad, &t.forcing_rhs};
}

std::vector<double> term_values(const BudgetTerms& t) {
    return {t.h1dot_sq,    t.h2dot_sq,    t.damp_l2,       t.grad_sq_mod,
            t.log_grad_sq, t.grad_sq_thm, t.weighted_grad, t.forcing_rhs};
}

double parse_double(const std::string& field, std::size_t line) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || ptr != field.data() + field.size())
        throw ValidationError("budget csv line " + std::to_string(line) + ": bad number '" + field + "'");
    return v;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream ss(line);
    while (std::getline(ss, item, ',')) out.push_back(item);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

}  // namespace

const std::vector<std::string>& budget_csv_columns() {
    static const std::vector<std::string> cols = [] {
        std::vector<std::string> c{"t", "l2_sq"};
        for (auto* n : term_names) c.emplace_back(n);
        for (auto* n : term_names) c.push_back(std::string("int_") + n);
        c.insert(c.end(), {"h1_envelope", "l2_residual", "h1_residual", "status"});
        return c;
    }();
    return cols;
}

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

void write_budget_csv(const BudgetSeries& series, std::ostream& sink) {
    const auto& cols = budget_csv_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) sink << (i ? "," : "") << cols[i];
    sink << "\n";

    const auto valid = series.valid_rows();
    std::vector<double> l2_res, h1_res, envelope;
    bool h1_applicable = false;
    if (!valid.empty()) {
        l2_res = check_l2_inequality(series).residuals;
        const auto h1 = check_h1_inequality(series);
        h1_applicable = h1.applicable;
        if (h1_applicable) {
            h1_res = h1.residuals;
            const double ref = valid.front().terms.h1dot_sq;
            for (const auto& r : valid) {
                if (series.damping().kind == DampingKind::log)
                    envelope.push_back(ref * std::exp(*h1.a_alpha * (r.t - valid.front().t)));
                else
                    envelope.push_back(ref + r.integrals.forcing_rhs);
            }
        }
    }

    for (std::size_t k = 0; k < series.rows().size(); ++k) {
        const auto& r = series.rows()[k];
        sink << format_double(r.t);
        if (r.blowup) {
            for (std::size_t i = 1; i + 1 < cols.size(); ++i) sink << ",";
            sink << ",blowup\n";
            continue;
        }
        sink << "," << format_double(r.l2_sq);
        for (double v : term_values(r.terms)) sink << "," << format_double(v);
        for (double v : term_values(r.integrals)) sink << "," << format_double(v);
        if (h1_applicable)
            sink << "," << format_double(envelope[k]);
        else
            sink << ",";
        sink << "," << format_double(l2_res[k]);
        if (h1_applicable)
            sink << "," << format_double(h1_res[k]);
        else
            sink << ",";
        sink << ",ok\n";
    }
    sink.flush();
    if (!sink) throw std::runtime_error("write_budget_csv: write failed");
}

BudgetSeries read_budget_csv(std::istream& source, const DampingSpec& damping) {
    const auto& cols = budget_csv_columns();
    std::string line;
    if (!std::getline(source, line)) throw ValidationError("budget csv: missing header");
    if (split(line) != cols) throw ValidationError("budget csv: unexpected header");
    std::vector<BudgetRow> rows;
    std::size_t line_no = 1;
    while (std::getline(source, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto f = split(line);
        if (f.size() != cols.size())
            throw ValidationError("budget csv line " + std::to_string(line_no) + ": wrong field count");
        BudgetRow row;
        row.t = parse_double(f[0], line_no);
        if (f.back() == "blowup") {
            row.blowup = true;
            if (!rows.empty()) row.integrals = rows.back().integrals;
            rows.push_back(row);
            continue;
        }
        if (f.back() != "ok") throw ValidationError("budget csv line " + std::to_string(line_no) + ": bad status");
        row.l2_sq = parse_double(f[1], line_no);
        auto terms = term_fields(row.terms);
        auto ints = term_fields(row.integrals);
        for (std::size_t i = 0; i < terms.size(); ++i) *terms[i] = parse_double(f[2 + i], line_no);
        for (std::size_t i = 0; i < ints.size(); ++i) *ints[i] = parse_double(f[2 + terms.size() + i], line_no);
        rows.push_back(row);
    }
    return BudgetSeries::from_rows(damping, std::move(rows));
}

nlohmann::json to_json(const L2Report& r) {
    return {{"pass", r.pass},
            {"tolerance", r.tolerance},
            {"reference_l2_sq", r.reference},
            {"max_residual", r.max_residual},
            {"max_row", r.max_row},
            {"max_abs_residual", r.max_abs_residual},
            {"balance_defect", r.balance_defect}};
}

nlohmann::json to_json(const H1Report& r) {
    nlohmann::json j{{"applicable", r.applicable},
                     {"pass", r.pass},
                     {"tolerance", r.tolerance},
                     {"reference_h1dot_sq", r.reference},
                     {"max_residual", r.max_residual},
                     {"max_row", r.max_row},
                     {"max_residual_statement_form", r.max_residual_statement_form},
                     {"max_residual_doubled_rate", r.max_residual_doubled_rate},
                     {"max_residual_unit_laplacian", r.max_residual_unit_laplacian},
                     {"envelope_monotone", r.envelope_monotone},
                     {"max_envelope_increase", r.max_envelope_increase},
                     {"notes", r.notes}};
    j["a_alpha"] = r.a_alpha ? nlohmann::json(*r.a_alpha) : nlohmann::json(nullptr);
    return j;
}

nlohmann::json to_json(const GronwallReport& r) {
    nlohmann::json j{{"hypothesis_holds", r.hypothesis_holds},
                     {"conclusion_holds", r.conclusion_holds},
                     {"max_residual", r.max_residual},
                     {"max_excess", r.max_excess}};
    j["first_violation"] = r.first_violation ? nlohmann::json(*r.first_violation) : nlohmann::json(nullptr);
    return j;
}

nlohmann::json to_json(const StabilityReport& r) {
    return {{"pass", r.pass},         {"identical", r.identical}, {"c", r.c},
            {"c_min", std::isfinite(r.c_min) ? nlohmann::json(r.c_min) : nlohmann::json("inf")},
            {"w0_sq", r.w0_sq},       {"max_w_sq", r.max_w_sq}};
}

std::string code_version() { return "nsdamp 1.0.0"; }

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

nlohmann::json to_json(const RunManifest& m) {
    return {{"config", m.config},         {"code_version", m.code_version}, {"start_time", m.start_time},
            {"end_time", m.end_time},     {"blew_up", m.blew_up},           {"blowup_message", m.blowup_message},
            {"outputs", m.outputs},       {"checks", m.checks}};
}

void write_manifest(const RunManifest& m, const std::string& path) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw std::runtime_error("manifest: cannot open " + tmp);
        out << to_json(m).dump(2) << "\n";
        if (!out) throw std::runtime_error("manifest: write failed");
    }
    std::filesystem::rename(tmp, path);
}

RunManifest read_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("manifest: cannot open " + path);
    const auto j = nlohmann::json::parse(in);
    RunManifest m;
    m.config = j.at("config");
    m.code_version = j.value("code_version", "");
    m.start_time = j.value("start_time", "");
    m.end_time = j.value("end_time", "");
    m.blew_up = j.value("blew_up", false);
    m.blowup_message = j.value("blowup_message", "");
    m.outputs = j.value("outputs", std::vector<std::string>{});
    m.checks = j.value("checks", nlohmann::json::object());
    return m;
}

}  // namespace nsdamp
