#pragma once

#include "wavelife/initial_data.hpp"
#include "wavelife/lattice.hpp"

namespace wavelife {

/// Weights of the four sup-norms.
enum class NormKind {
    /// sup |u|
    N1,
    /// sup (t - |x| + 2R)|w|
    N2,
    /// sup (t + |x| + R)^{-1} |U|
    N3,
    /// sup {χ_D + (1 - χ_D)(t + |x| + R)^{-1}} |W|, D = {t - |x| >= R}
    N4,
};

[[nodiscard]] double norm_weight(NormKind kind, double x, double t, double R) noexcept;

/// Region D where the free solution of zero-mean data vanishes.
[[nodiscard]] inline bool in_huygens_region(double x, double t, double R) noexcept {
    return t - (x < 0 ? -x : x) >= R;
}

/// Lattice supremum of the weighted quantity over the cone |x| <= t + R
/// and levels n with t_n <= T.
double weighted_sup(const LatticeArray& a, NormKind kind, double R, double T);

struct NormReport {
    double n1 = 0.0;
    double n2 = 0.0;
    double n3 = 0.0;
    double n4 = 0.0;
    double T_window = 0.0;
};

/// n1, n2 from field.u / field.w; n3, n4 from the same arrays read as (U, W).
NormReport norms(const Field& field, const InitialData& data, double T);
NormReport norms(const LatticeArray& u, const LatticeArray& w, double R, double T);

struct HuygensResult {
    double residual = 0.0;
    /// Data had nonzero ∫g, so a nonzero residual is expected.
    bool flagged_nonzero_mean = false;
};

/// max |eps u^0| over lattice points of D with t <= T.
HuygensResult huygens_residual(const InitialData& data, double T, double dx);

}  // namespace wavelife
