#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nsdamp/fields.hpp"
#include "nsdamp/nonlinear.hpp"

namespace nsdamp {

/// Time-dependent terms of the energy budgets. Densities are integrated over
/// the box with the grid rectangle rule.
struct BudgetTerms {
    double h1dot_sq = 0.0;      // ||grad u||^2
    double h2dot_sq = 0.0;      // ||Lap u||^2
    double damp_l2 = 0.0;       // log: ||log(e+|u|^2)|u|^4||_1      power: ||u||_{beta+1}^{beta+1}
    double grad_sq_mod = 0.0;   // log: || |u|^2/(e+|u|^2) |grad|u|^2|^2 ||_1   power: || |u|^{beta-3} |grad|u|^2|^2 ||_1
    double log_grad_sq = 0.0;   // log: || log(e+|u|^2) |grad|u|^2|^2 ||_1       power: 0
    double grad_sq_thm = 0.0;   // log: || |u|/(e+|u|^2) |grad|u|^2|^2 ||_1      power: 0
    double weighted_grad = 0.0; // log: || log(e+|u|^2)|u|^2 |grad u|^2 ||_1    power: || |u|^{beta-1} |grad u|^2 ||_1
    double forcing_rhs = 0.0;   // || |u|^2 |grad u|^2 ||_1

    BudgetTerms& operator+=(const BudgetTerms& o);
    BudgetTerms operator*(double s) const;
    bool all_finite_nonnegative() const noexcept;
};

struct BudgetRow {
    double t = 0.0;
    double l2_sq = 0.0;
    BudgetTerms terms{};
    BudgetTerms integrals{};  // trapezoidal integrals of `terms` from the first row
    bool blowup = false;
};

/// Ordered budget rows of one run.
class BudgetSeries {
public:
    BudgetSeries() = default;
    explicit BudgetSeries(DampingSpec damping, std::string config_echo = {});
    /// Adopts rows as stored (integrals included); validates the time ordering.
    static BudgetSeries from_rows(DampingSpec damping, std::vector<BudgetRow> rows, std::string config_echo = {});

    /// Appends a row, filling its integrals from the previous row.
    /// Throws ValidationError unless t is strictly increasing.
    void append(BudgetRow row);
    /// Appends a final row marked as blow-up (its integrals repeat the previous ones).
    void append_blowup(double t);

    const std::vector<BudgetRow>& rows() const noexcept { return rows_; }
    bool empty() const noexcept { return rows_.empty(); }
    const DampingSpec& damping() const noexcept { return damping_; }
    /// Envelope rate for log damping with alpha > 0; empty otherwise.
    std::optional<double> a_alpha() const;
    const std::string& config_echo() const noexcept { return config_echo_; }
    bool blew_up() const noexcept { return !rows_.empty() && rows_.back().blowup; }

    /// Rows excluding a trailing blow-up marker.
    std::span<const BudgetRow> valid_rows() const noexcept;

private:
    DampingSpec damping_{};
    std::string config_echo_;
    std::vector<BudgetRow> rows_;
};

/// (e^{1/(2 alpha)} - e)_+ ; throws ValidationError for alpha <= 0.
double a_alpha(double alpha);

/// All budget densities of u at time t. Throws BlowUpError on a non-finite density.
BudgetRow compute_budget_row(const SpectralField& u, double t, const DampingSpec& spec);

struct L2Report {
    bool pass = true;
    double tolerance = 0.0;         // absolute
    double reference = 0.0;         // ||u0||^2
    double max_residual = 0.0;      // max_t LHS(t) - ||u0||^2
    std::size_t max_row = 0;
    double max_abs_residual = 0.0;  // used for convergence studies
    double balance_defect = 0.0;    // max |d/dt LHS|, forward differences
    std::vector<double> residuals;
};

/// ||u(t)||^2 + 2 int ||grad u||^2 + 2 alpha int damp_l2 <= ||u0||^2, checked row by row.
/// tol_rel is relative to ||u0||^2.
L2Report check_l2_inequality(const BudgetSeries& series, double tol_rel = 1e-4);

struct GronwallReport {
    bool hypothesis_holds = true;
    bool conclusion_holds = true;
    std::optional<std::size_t> first_violation;
    double max_residual = 0.0;            // max_k f + G - A exp(H)
    double max_excess = 0.0;              // max_k residual - quadrature tolerance
    std::vector<double> residuals;
    std::vector<double> envelope;         // A exp(H_k)
    std::vector<double> quadrature_tol;   // A (prod_j (1+a_j)/(1-b_j) - exp(H_k))
};

/// Discrete check of: f + int g <= A + int h f  implies  f + int g <= A exp(int h).
/// Integrals are trapezoidal on the sample mesh. The conclusion is accepted up to the
/// exact discrete slack of the trapezoid rule plus `tol`. Throws on a nonmonotone mesh,
/// mismatched lengths, A < 0, or negative g/h.
GronwallReport gronwall_envelope(double A, std::span<const double> t, std::span<const double> f,
                                 std::span<const double> g, std::span<const double> h, double tol = 0.0);

struct H1Report {
    bool applicable = true;  // false for undamped runs
    bool pass = true;
    double tolerance = 0.0;
    double reference = 0.0;           // ||grad u0||^2
    std::optional<double> a_alpha;
    double max_residual = 0.0;        // checked form
    std::size_t max_row = 0;
    std::vector<double> residuals;
    // log damping: proof display with envelope e^{a t}; power damping: forcing right side
    double max_residual_statement_form = 0.0;  // log: theorem display; power: derived-coefficient form
    double max_residual_doubled_rate = 0.0;    // log: same LHS against e^{2 a t}
    double max_residual_unit_laplacian = 0.0;  // power: coefficients 1, alpha(beta-1), 2 alpha
    bool envelope_monotone = true;             // log: e^{-a t} ||grad u||^2 nonincreasing
    double max_envelope_increase = 0.0;
    std::string notes;
};

/// H^1 budget. tol_rel is relative to ||grad u0||^2 e^{a t_max} (log) or ||grad u0||^2 (power).
H1Report check_h1_inequality(const BudgetSeries& series, double tol_rel = 1e-4);

/// Trapezoidal int_0^t ||u||_{H1dot}^4 at every row.
std::vector<double> l4_h1_cumulative(const BudgetSeries& series);
/// Final value of l4_h1_cumulative (0 for an empty series).
double l4_h1_diagnostic(const BudgetSeries& series);
/// int ||u||_{H1dot}^4 over consecutive windows [t0 + k w, t0 + (k+1) w] that the series fully
/// covers, each summed on its own so late small increments are not lost against the total.
/// Window edges must be output nodes (within 1e-9 w).
std::vector<double> l4_h1_window_increments(const BudgetSeries& series, double window);

struct Snapshot {
    double t;
    SpectralField u;
};

struct StabilityReport {
    bool pass = true;
    bool identical = true;       // w == 0 bit-exactly at every snapshot
    double c = 0.5;
    double c_min = 0.0;          // smallest c for which the bound holds
    double w0_sq = 0.0;
    double max_w_sq = 0.0;
    std::vector<double> w_sq;
    std::vector<double> envelope; // w0_sq * exp(c int ||grad u_a||^4)
};

/// ||w(t)||^2 <= ||w(0)||^2 exp(c int_0^t ||grad u_a||^4), w = u_a - u_b, on common snapshots.
StabilityReport stability_compare(std::span<const Snapshot> run_a, std::span<const Snapshot> run_b,
                                  double c = 0.5);

}  // namespace nsdamp
