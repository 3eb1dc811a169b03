#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "wavelife/blowup.hpp"
#include "wavelife/exponents.hpp"
#include "wavelife/initial_data.hpp"
#include "wavelife/solver.hpp"

namespace wavelife {

struct FitResult {
    /// d log T / d log eps, i.e. -k.
    double slope = 0.0;
    double intercept = 0.0;
    double stderr_slope = 0.0;
    double k_theory = 0.0;
    /// |slope + k_theory| / k_theory
    double rel_err = 0.0;
    int n_points = 0;

    [[nodiscard]] double k() const noexcept { return -slope; }
};

class FitRefused : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Least squares log T = slope log eps + intercept. Throws FitRefused for
/// fewer than four points or a degenerate eps spread.
FitResult fit_power_law(const std::vector<double>& eps, const std::vector<double>& T, double k_theory);

struct SweepConfig {
    ModelParams params{1.5, 1.5, 3.0, 1.0, 0.0};
    DataFamily family = DataFamily::Bump;
    double R = 1.0;
    double eps_max = 0.3;
    double eps_ratio = 0.8;
    int eps_count = 8;
    double dx = 0.02;
    /// <= 0 selects the default threshold per eps.
    double threshold = 0.0;
    double tol_refine = 0.05;
    double T_max = 2000.0;
    /// Fit uses grid indices [fit_first, fit_last); fit_last < 0 means the end.
    int fit_first = 1;
    int fit_last = -1;
    int threads = 0;
    std::uint64_t seed = 1;
    /// Output directory; empty disables file output.
    std::string out_dir;

    /// Throws std::invalid_argument on a bad grid or window.
    void validate() const;
    [[nodiscard]] std::vector<double> eps_grid() const;
};

struct SweepResult {
    std::vector<LifespanMeasurement> rows;
    /// Empty message means the fit succeeded.
    FitResult fit;
    std::string fit_error;

    [[nodiscard]] bool fitted() const noexcept { return fit_error.empty(); }
};

/// Measures the lifespan on the eps grid (threads across eps), fits the
/// accepted points in the window and, when out_dir is set, writes
/// sweep.csv, fit.txt and plot.dat there.
SweepResult run_sweep(const SweepConfig& cfg);

void write_sweep_outputs(const SweepConfig& cfg, const SweepResult& res);

// ---- verification suites ----

enum class Suite { Operators, Huygens, Picard, Blowup, SolverOrder };

Suite parse_suite(const std::string& name);
[[nodiscard]] std::string to_string(Suite s);

struct VerifyReport {
    std::string suite;
    std::vector<CheckRow> checks;
    double seconds = 0.0;

    [[nodiscard]] bool pass() const noexcept;
    /// JSON object with suite, pass, seconds and the list of checks.
    [[nodiscard]] std::string to_json() const;
};

VerifyReport verify(Suite suite);

// ---- exponent table ----

struct ExponentReport {
    ModelParams params;
    bool mean_zero = false;
    Regime regime;
    double this_law = 0.0;
    double general = 0.0;
    bool general_integer_inputs = true;
    ImprovementGap gap;
    CrossoverIdentities cross;
    /// p(r-1)/(r+1): the reference law with q = 0 and one space dimension.
    double reference_q0 = 0.0;
};

ExponentReport exponent_report(const ModelParams& params, bool mean_zero);
void print_exponent_report(std::ostream& os, const ExponentReport& rep);

}  // namespace wavelife
