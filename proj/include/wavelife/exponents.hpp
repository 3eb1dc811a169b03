#pragma once

#include <string_view>

namespace wavelife {

/// Exponents and coefficients of the nonlinearity A|u_t|^p|u|^q + B|u|^r.
struct ModelParams {
    double p = 2.0;
    double q = 2.0;
    double r = 6.0;
    double A = 1.0;
    double B = 1.0;

    [[nodiscard]] double pq() const noexcept { return p + q; }
    /// Throws std::invalid_argument unless p, q, r > 1 and A, B >= 0.
    void validate() const;
};

enum class RegimeTag { BelowThreshold, CombinedEffect, AboveR };

[[nodiscard]] std::string_view to_string(RegimeTag tag) noexcept;

struct Regime {
    RegimeTag tag = RegimeTag::BelowThreshold;
    bool mean_zero = false;
    /// p+q sits on (r+1)/2 or on r; `tag` then holds the left-hand regime.
    bool boundary = false;
    /// (r+1)/2 < p+q < r away from both endpoints.
    bool strict_combined = false;
};

enum class LawSource { Combined, GeneralTheory, HighDim };

[[nodiscard]] std::string_view to_string(LawSource s) noexcept;

/// T(eps) ~ C eps^{-exponent_k}.
struct LifespanLaw {
    double exponent_k = 0.0;
    LawSource source = LawSource::Combined;
    Regime regime;
    /// Only meaningful for GeneralTheory: false when p, q or r is not an integer.
    bool integer_inputs = true;
};

inline constexpr double kBoundaryRelTol = 1e-12;

Regime classify_regime(const ModelParams& params, bool mean_zero);

/// Lifespan exponent of the combined problem (A, B > 0).
LifespanLaw lifespan_exponent(const ModelParams& params, bool mean_zero);

/// Exponent to expect from a simulation with the given coefficients: the
/// combined law when A, B > 0, p+q-1 when B = 0, and the pure-power law
/// ((r-1)/2, or r(r-1)/(r+1) for zero mean) when A = 0. +inf when A = B = 0.
double expected_exponent(const ModelParams& params, bool mean_zero);

/// Exponent delivered by the general theory for the smooth analogue u_t^p u^q + u^r.
LifespanLaw general_theory_exponent(const ModelParams& params, bool mean_zero);

struct ImprovementGap {
    double gap = 0.0;
    /// False outside the strict combined regime; gap is then defined as 0.
    bool in_strict_regime = false;
};

/// Zero-mean lifespan exponent minus the general-theory exponent.
ImprovementGap improvement_gap(const ModelParams& params);

struct HighDimExponent {
    double value = 0.0;
    /// (r-1){(n-1)p-2} < 4, 2 <= p <= r <= 2p-1, r > 2/(n-1).
    bool condition_holds = false;
};

/// 2p(r-1) / (2(r+1) - (n-1)p(r-1)); throws std::domain_error when the
/// denominator is not positive.
HighDimExponent highdim_reference_exponent(double p, double r, int n);

struct CrossoverIdentities {
    /// Value of p+q where p+q-1 = r(r-1)/(r+1).
    double crossover = 0.0;
    bool above_lower = false;  // (r+1)/2 < crossover
    bool below_upper = false;  // crossover < r
};

CrossoverIdentities crossover_identities(double r);

/// Relative closeness used for regime boundaries.
[[nodiscard]] bool nearly_equal(double a, double b, double rel = kBoundaryRelTol) noexcept;

}  // namespace wavelife
