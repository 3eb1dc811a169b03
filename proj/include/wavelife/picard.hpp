#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "wavelife/exponents.hpp"
#include "wavelife/initial_data.hpp"
#include "wavelife/lattice.hpp"
#include "wavelife/norms.hpp"

namespace wavelife {

enum class PicardScheme { NonzeroMean, ZeroMean };

struct IterationTrace {
    PicardScheme scheme = PicardScheme::NonzeroMean;
    /// Norms of (u_j, w_j) and of (U_j, W_j) = (u_j - eps u0, w_j - eps u0_t), j = 1, 2, ...
    std::vector<NormReport> reports;
    /// d_j = |u_{j+1} - u_j| + |w_{j+1} - w_j| in the scheme's norm pair.
    std::vector<double> d;
    /// rho_j = d_{j+1} / d_j (NaN when d_j = 0).
    std::vector<double> rho;
    int iterations = 0;
    bool converged = false;
    bool diverged = false;

    /// Data-size constants; N and E only for the zero-mean scheme.
    double M = 0.0;
    double N = 0.0;
    double E = 0.0;
    /// M eps or N eps^{min(p+q, r)}: stopping tolerance is tol * scale.
    double scale = 0.0;
    /// 3 M eps or 5 N eps^{min(p+q, r)}.
    double band = 0.0;
    double tol = 0.0;
    double T = 0.0;
    double eps = 0.0;

    /// Largest rho_j over j >= first (NaN entries ignored); 0 when none.
    [[nodiscard]] double max_rho(std::size_t first = 1) const noexcept;
    /// Largest iterate norm in the scheme's pair (n1/n2 or n3/n4).
    [[nodiscard]] double max_iterate_norm() const noexcept;
};

class DivergenceError : public std::runtime_error {
public:
    DivergenceError(const std::string& what, IterationTrace trace)
        : std::runtime_error(what), trace_(std::move(trace)) {}
    [[nodiscard]] const IterationTrace& trace() const noexcept { return trace_; }

private:
    IterationTrace trace_;
};

struct PicardResult {
    Field field;
    IterationTrace trace;
};

struct PicardOptions {
    /// Overrides the measured a priori constant E entering N.
    std::optional<double> E;
};

/// Iterates u_{j+1} = eps u0 + L(S(w_j, u_j)), w_{j+1} = eps u0_t + L'(S(w_j, u_j))
/// from u_1 = eps u0, w_1 = eps u0_t on [0, T]. Stops when d_j < tol * M eps.
/// Throws DivergenceError on non-finite iterates or three consecutive
/// d_{j+1} > 10 d_j.
PicardResult picard_nonzero(const InitialData& data, const ModelParams& params, double T, const Lattice& lattice,
                            int max_iter = 60, double tol = 1e-10);

/// Same fixed point through the perturbation (U, W) with U_1 = W_1 = 0, measured
/// in the weighted norms n3/n4. Requires data with zero mean of g.
PicardResult picard_zero(const InitialData& data, const ModelParams& params, double T, const Lattice& lattice,
                         int max_iter = 60, double tol = 1e-10, const PicardOptions& opts = {});

/// sup norms of u0, u0_t, u0_x, u0_tx over the lattice up to T (unscaled).
struct FreeNorms {
    double u0 = 0.0;
    double u0_t = 0.0;
    double u0_x = 0.0;
    double u0_tx = 0.0;
};
FreeNorms free_norms(const InitialData& data, const Lattice& lattice, double T);

/// Empirical E: the largest ratio of the linear-type a priori estimates with
/// U0 taken from the free solution of `data` and random (U, W).
double measure_E(const InitialData& data, const ModelParams& params, double T, double dx, std::uint64_t seed = 7);

/// N built from E and the free-solution norms.
double zero_mean_N(const ModelParams& params, const FreeNorms& fn, double E);

/// max |w - (u(t+h) - u(t-h))/(2h)| over interior lattice points.
/// Throws std::invalid_argument when fewer than three levels are filled.
double consistency_wu(const Field& field);

/// Columns j, d_j, rho_j, n1, n2, n3, n4.
void write_trace_csv(const std::string& path, const IterationTrace& trace);

// ---- a priori constants ----

enum class AprioriKind {
    // unweighted / (t - |x| + 2R) pair
    L_wu_1,
    L_ur_1,
    Lp_wu_2,
    Lp_ur_2,
    Lp_wu_1,
    Lp_ur_1,
    // linear-type estimates with a strip-supported U0
    Lin_L_W_3,
    Lin_L_U_3,
    Lin_Lp_W_4,
    Lin_Lp_U_4,
    Lin_Lp_W_3,
    Lin_Lp_U_3,
    // weighted (n3, n4) pair
    Z_L_WU_3,
    Z_L_Ur_3,
    Z_Lp_WU_4,
    Z_Lp_Ur_4,
    Z_Lp_WU_3,
    Z_Lp_Ur_3,
};

inline constexpr int kAprioriKindCount = 18;

[[nodiscard]] std::string_view to_string(AprioriKind k) noexcept;
AprioriKind parse_apriori_kind(std::string_view name);
[[nodiscard]] AprioriKind apriori_kind_from_index(int i);

/// Power of (T + R) on the right-hand side of the estimate.
[[nodiscard]] double apriori_power(AprioriKind k, double p, double q, double r, int m) noexcept;

struct AprioriExponents {
    double p = 2.0;
    double q = 2.0;
    double r = 3.0;
    /// Index m of the linear-type estimates; needs p - m, q - m > 0.
    int m = 1;
    double R = 1.0;
    double dx = 0.05;
};

/// LHS / (RHS without the constant) for given fields on a lattice. `u0` is only
/// read by the linear-type kinds. Returns nullopt when the RHS vanishes.
std::optional<double> apriori_ratio(AprioriKind kind, const LatticeArray& u, const LatticeArray& w,
                                    const LatticeArray& u0, double T, const AprioriExponents& ex);

/// Max of apriori_ratio over `trials` random cone-supported bump fields.
double apriori_constant(AprioriKind kind, int trials, double T, std::uint64_t seed, const AprioriExponents& ex = {});

}  // namespace wavelife
