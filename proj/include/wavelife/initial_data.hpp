#pragma once

#include <string>
#include <string_view>

#include "wavelife/polynomial.hpp"

namespace wavelife {

enum class DataFamily {
    /// f = (1-(x/R)^2)^3, g = (1-(x/R)^2)^2; ∫g = 16R/15 > 0.
    Bump,
    /// f = (1-(x/R)^2)^3, g = f'; ∫g = 0.
    Dipole,
    /// g = 0, f >= 0 with f >= f0 and -f' = f0 on (-R/2, 0).
    BlowupSeed,
};

[[nodiscard]] std::string_view to_string(DataFamily f) noexcept;
/// Accepts "bump", "dipole", "blowup-seed"; throws std::invalid_argument otherwise.
DataFamily parse_family(std::string_view name);

/// Compactly supported data (f, g) scaled by eps.
struct InitialData {
    DataFamily family = DataFamily::Bump;
    PiecewisePolynomial f;
    PiecewisePolynomial g;
    double R = 1.0;
    double eps = 1.0;
    /// ∫g dx in closed form.
    double g_mean = 0.0;
    /// ∫f dx in closed form.
    double f_mean = 0.0;
    /// Lower bound constant of the blow-up seed; 0 for other families.
    double f0 = 0.0;

    [[nodiscard]] bool mean_zero() const noexcept { return g_mean == 0.0; }
    /// Sum of sup-norms of f, f', f'', ‖g‖_{L1}, sup |g|, sup |g'|.
    [[nodiscard]] double data_size_M() const;
};

/// Builds one of the data families. `f0` is only used by BlowupSeed.
InitialData make_data(DataFamily family, double R, double eps, double f0 = 1.0);

/// Free solution u^0 and its first derivatives, unscaled by eps.
struct FreeValues {
    double u0 = 0.0;
    double u0_t = 0.0;
    double u0_x = 0.0;
    double u0_tx = 0.0;
};

FreeValues free_solution(const InitialData& data, double x, double t) noexcept;

}  // namespace wavelife
