#pragma once

#include <string>
#include <vector>

#include "wavelife/exponents.hpp"
#include "wavelife/initial_data.hpp"
#include "wavelife/lattice.hpp"

namespace wavelife {

/// Exponent and amplitude sequences of the iteration argument on Σ.
struct BlowupSequences {
    /// Index n = 1..n_max stored at position n - 1.
    std::vector<double> a;
    std::vector<double> b;
    std::vector<double> c;
    /// log M_n with M_1 = f0 eps / 2.
    std::vector<double> logM;
    int n_max = 0;
    /// Stopped early because (p+q)^{n-1} left the double range.
    bool truncated = false;
    double C5 = 0.0;
    /// S_{p+q}
    double S = 0.0;
    /// exp(-2 log(A C5) / (p+q-1)); 0 when A = 0.
    double C6 = 0.0;
    /// max relative error of a_n against ((p+q)^{n-1} - 1)/(p+q-1).
    double closed_form_error = 0.0;
    /// max relative deviation of b_n + c_n from a_n. Vanishes only for p = q:
    /// in general b_n - c_n = 1 for n >= 2 and b + c obeys s' = (p+q)s + q - p + 1.
    double sum_identity_error = 0.0;
};

/// a_n, b_n, c_n, log M_n for n = 1..n_max. Requires p + q > 1.
BlowupSequences sequences(const ModelParams& params, int n_max, double f0 = 1.0, double eps = 1.0);

/// S_r = Σ_{j>=0} (j+1)/r^{j+1} = r/(r-1)^2 for r > 1.
double S_closed(double r);
/// Partial sum with `terms` terms.
double S_series(double r, int terms);

/// x >= 0, t + x >= R, 0 < t - x < R/2.
[[nodiscard]] inline bool in_sigma(double x, double t, double R) noexcept {
    return x >= 0.0 && t + x >= R && t - x > 0.0 && t - x < 0.5 * R;
}

/// Z(x,t) = log{(t+x-R)^2 (t-x)}/(p+q-1) + 2 log(A C5)/(p+q-1) - 4 S_{p+q} log(p+q) + 2 log(f0 eps/2).
/// Throws std::domain_error outside Σ or for A = 0; -inf on t + x = R.
double z_function(const ModelParams& params, const InitialData& data, double eps, double x, double t);

/// Root of Z along the ray t = x + R/4 (closed form).
double z_root_on_ray(const ModelParams& params, const InitialData& data, double eps);

/// C41 = (2/sqrt R) (p+q)^{2(p+q-1) S_{p+q}} / (A C5 (f0/2)^{p+q-1}).
double C41(double pq, double A, double R, double f0);

/// max(C41 eps^{-(p+q-1)}, 5R/4). Needs blowup-seed data and A > 0.
double upper_bound_T(const ModelParams& params, const InitialData& data, double eps);

/// min over lattice points of Σ of min(u, w) - f0 eps/2. Throws
/// std::domain_error when the field does not reach Σ.
double check_pointwise_seed(const Field& field, const InitialData& data, double eps);

struct FFunctionalReport {
    double F0 = 0.0;
    /// One-sided difference of F at t = 0.
    double Fprime0 = 0.0;
    /// min over interior levels of F'' - 2^{1-r} B (t+R)^{1-r} |F|^r.
    double odi_residual = 0.0;
    /// max over the same levels of 2^{1-r} B (t+R)^{1-r} |F|^r (natural scale).
    double odi_scale = 0.0;
    bool odi_skipped = false;
    /// min over t >= 2R of F - A R f0^{p+q} 2^{-(p+q+4)} eps^{p+q} t^2.
    double initial_residual = 0.0;
    double initial_scale = 0.0;
    bool initial_skipped = false;
};

/// F(t) = Σ u dx and its second differences on a recorded blowup-seed field.
FFunctionalReport f_functional_checks(const Field& field, const InitialData& data, const ModelParams& params,
                                      double eps);

struct CharacteristicReport {
    /// min over x >= R of P(x) - G eps - C7 ∫_R^x |P|^{p+q}, P(x) = u(x, x+R).
    double residual = 0.0;
    /// G eps, the size of the left-hand side at x = R.
    double scale = 0.0;
    double G = 0.0;
    double C7 = 0.0;
    double x_star = 0.0;
    /// Last abscissa sampled.
    double x_end = 0.0;
};

/// C7 = (A/2) (p/(p+q))^p (2R)^{1-p}.
double C7(const ModelParams& params, double R);

/// Blow-up abscissa R + 1/((p+q-1) C7 (G eps)^{p+q-1}) of y' = C7 y^{p+q}, y(R) = G eps.
double comparison_x_star(double G, double C7, double pq, double eps, double R);

/// Inequality along the characteristic t = x + R for data with ∫g > 0.
CharacteristicReport characteristic_inequality(const Field& field, const InitialData& data, const ModelParams& params,
                                         double eps);

struct CheckRow {
    std::string name;
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

/// Columns check, residual, tolerance, pass.
void write_check_csv(const std::string& path, const std::vector<CheckRow>& rows);

}  // namespace wavelife
