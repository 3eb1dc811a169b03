#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "wavelife/exponents.hpp"
#include "wavelife/initial_data.hpp"
#include "wavelife/lattice.hpp"

namespace wavelife {

struct EvolveOptions {
    /// Keep every time level in EvolveResult::field.
    bool record = false;
};

struct EvolveResult {
    /// First time max(|u|, |w|) exceeds the threshold, log-linear interpolated.
    std::optional<double> crossing_time;
    /// A non-finite value appeared before the threshold was seen.
    bool nonfinite = false;
    /// Last level with both u and w available.
    int last_level = 0;
    double horizon = 0.0;
    /// Per-level diagnostics: t_n, F(t_n) = ∫u dx, max(|u|, |w|).
    std::vector<double> times;
    std::vector<double> integral_u;
    std::vector<double> max_norm;
    /// Filled when EvolveOptions::record is set.
    std::optional<Field> field;
};

/// Marches u = eps u^0 + U on the characteristic lattice, where the Duhamel
/// part U follows the diamond update
///   U(x,t+h) = U(x+h,t) + U(x-h,t) - U(x,t-h) + h^2 (S(x-h,t) + S(x+h,t))/2
/// with S = A|w|^p|u|^q + B|u|^r. The first step is the Taylor step
/// U(x,h) = h^2/2 S(x,0) (averaged over x±h). w = eps u^0_t + W, where W is the
/// centred difference of U. The source needs W at the current level, so it
/// uses second-order backward differences along the two characteristics,
/// which keeps the update explicit and the parity sublattices decoupled.
///
/// Throws std::invalid_argument when the cone |x| <= T_max + R does not fit
/// the lattice.
EvolveResult evolve(const InitialData& data, const ModelParams& params, const Lattice& lattice, double T_max,
                    double threshold = std::numeric_limits<double>::infinity(), const EvolveOptions& opts = {});

struct LifespanMeasurement {
    double eps = 0.0;
    /// Threshold crossing at dx; +inf when none within T_max.
    double T_num = std::numeric_limits<double>::infinity();
    double threshold = 0.0;
    double dx = 0.0;
    /// Threshold crossing at dx/2.
    double refined_T_num = std::numeric_limits<double>::infinity();
    double rel_change = std::numeric_limits<double>::infinity();
    bool accepted = false;
    bool nonfinite = false;
};

/// 1e6 · eps · max|f|, floored at 1e3.
double default_threshold(const InitialData& data);

/// Runs `evolve` at dx and dx/2 on data rescaled to `eps`; accepted iff both
/// cross and |T - T'|/T <= tol_refine.
LifespanMeasurement measure_lifespan(const InitialData& data, const ModelParams& params, double eps,
                                     double threshold, double dx, double tol_refine = 0.05, double T_max = 2000.0);

/// Appends one measurement row (eps, dx, T_num, refined_T_num, rel_change,
/// accepted) to a sweep CSV; writes the header when the file is new.
void append_sweep_row(const std::string& path, const LifespanMeasurement& m);

}  // namespace wavelife
