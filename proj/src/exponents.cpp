#include "wavelife/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace wavelife {

void ModelParams::validate() const {
    if (!(p > 1.0) || !(q > 1.0) || !(r > 1.0))
        throw std::invalid_argument("exponents must satisfy p, q, r > 1 (got p=" + std::to_string(p) +
                                    ", q=" + std::to_string(q) + ", r=" + std::to_string(r) + ")");
    if (!(A >= 0.0) || !(B >= 0.0)) throw std::invalid_argument("coefficients must satisfy A, B >= 0");
}

std::string_view to_string(RegimeTag tag) noexcept {
    switch (tag) {
        case RegimeTag::BelowThreshold: return "below-threshold";
        case RegimeTag::CombinedEffect: return "combined";
        case RegimeTag::AboveR: return "above-r";
    }
    return "?";
}

std::string_view to_string(LawSource s) noexcept {
    switch (s) {
        case LawSource::Combined: return "combined-lifespan";
        case LawSource::GeneralTheory: return "general-theory";
        case LawSource::HighDim: return "high-dim";
    }
    return "?";
}

bool nearly_equal(double a, double b, double rel) noexcept {
    return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

Regime classify_regime(const ModelParams& params, bool mean_zero) {
    params.validate();
    const double s = params.pq();
    const double lo = 0.5 * (params.r + 1.0);
    const double hi = params.r;
    const bool at_lo = nearly_equal(s, lo);
    const bool at_hi = nearly_equal(s, hi);

    Regime reg;
    reg.mean_zero = mean_zero;
    reg.boundary = at_lo || at_hi;
    if (at_lo || s < lo)
        reg.tag = RegimeTag::BelowThreshold;
    else if (at_hi || s < hi)
        reg.tag = RegimeTag::CombinedEffect;
    else
        reg.tag = RegimeTag::AboveR;
    reg.strict_combined = reg.tag == RegimeTag::CombinedEffect && !reg.boundary;
    return reg;
}

LifespanLaw lifespan_exponent(const ModelParams& params, bool mean_zero) {
    const Regime reg = classify_regime(params, mean_zero);
    const double s = params.pq();
    const double r = params.r;
    LifespanLaw law;
    law.source = LawSource::Combined;
    law.regime = reg;
    if (!mean_zero)
        law.exponent_k = std::min(s - 1.0, 0.5 * (r - 1.0));
    else if (reg.tag == RegimeTag::CombinedEffect)
        law.exponent_k = s * (r - 1.0) / (r + 1.0);
    else
        law.exponent_k = std::min(s - 1.0, r * (r - 1.0) / (r + 1.0));
    return law;
}

double expected_exponent(const ModelParams& params, bool mean_zero) {
    params.validate();
    const double r = params.r;
    if (params.A == 0.0 && params.B == 0.0) return std::numeric_limits<double>::infinity();
    if (params.B == 0.0) return params.pq() - 1.0;
    if (params.A == 0.0) return mean_zero ? r * (r - 1.0) / (r + 1.0) : 0.5 * (r - 1.0);
    return lifespan_exponent(params, mean_zero).exponent_k;
}

namespace {
bool is_integer(double v) { return std::floor(v) == v; }
}  // namespace

LifespanLaw general_theory_exponent(const ModelParams& params, bool mean_zero) {
    const Regime reg = classify_regime(params, mean_zero);
    const double s = params.pq();
    const double r = params.r;
    LifespanLaw law;
    law.source = LawSource::GeneralTheory;
    law.regime = reg;
    law.integer_inputs = is_integer(params.p) && is_integer(params.q) && is_integer(params.r);
    switch (reg.tag) {
        case RegimeTag::BelowThreshold: law.exponent_k = s - 1.0; break;
        case RegimeTag::CombinedEffect:
            law.exponent_k = mean_zero ? std::max(0.5 * (r - 1.0), s * (s - 1.0) / (s + 1.0)) : 0.5 * (r - 1.0);
            break;
        case RegimeTag::AboveR:
            law.exponent_k = mean_zero ? r * (r - 1.0) / (r + 1.0) : 0.5 * (r - 1.0);
            break;
    }
    return law;
}

ImprovementGap improvement_gap(const ModelParams& params) {
    const Regime reg = classify_regime(params, true);
    if (!reg.strict_combined) return {};
    return {lifespan_exponent(params, true).exponent_k - general_theory_exponent(params, true).exponent_k, true};
}

HighDimExponent highdim_reference_exponent(double p, double r, int n) {
    if (n < 1) throw std::invalid_argument("space dimension must be >= 1");
    const double denom = 2.0 * (r + 1.0) - (n - 1) * p * (r - 1.0);
    if (!(denom > 0.0)) throw std::domain_error("high-dimensional exponent: denominator 2(r+1)-(n-1)p(r-1) <= 0");
    HighDimExponent out;
    out.value = 2.0 * p * (r - 1.0) / denom;
    out.condition_holds = n >= 2 && (r - 1.0) * ((n - 1) * p - 2.0) < 4.0 && 2.0 <= p && p <= r &&
                          r <= 2.0 * p - 1.0 && r > 2.0 / (n - 1);
    return out;
}

CrossoverIdentities crossover_identities(double r) {
    if (!(r > 1.0)) throw std::invalid_argument("crossover identities need r > 1");
    CrossoverIdentities out;
    out.crossover = (r * r + 1.0) / (r + 1.0);
    out.above_lower = 0.5 * (r + 1.0) < out.crossover;
    out.below_upper = out.crossover < r;
    return out;
}

}  // namespace wavelife
