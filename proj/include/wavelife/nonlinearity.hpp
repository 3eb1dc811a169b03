#pragma once

#include <cmath>

#include "wavelife/exponents.hpp"

namespace wavelife {

/// A|w|^p|u|^q + B|u|^r with zero short-cuts for the hot loops.
class Nonlinearity {
public:
    explicit Nonlinearity(const ModelParams& m) : A_(m.A), B_(m.B), p_(m.p), q_(m.q), r_(m.r) {}

    [[nodiscard]] double operator()(double w, double u) const noexcept {
        const double aw = std::abs(w);
        const double au = std::abs(u);
        double out = 0.0;
        if (au == 0.0) return 0.0;
        if (A_ != 0.0 && aw != 0.0) out += A_ * std::exp(p_ * std::log(aw) + q_ * std::log(au));
        if (B_ != 0.0) out += B_ * std::pow(au, r_);
        return out;
    }

private:
    double A_, B_, p_, q_, r_;
};

}  // namespace wavelife
