#include "wavelife/initial_data.hpp"

#include <stdexcept>
#include <string>

namespace wavelife {

std::string_view to_string(DataFamily f) noexcept {
    switch (f) {
        case DataFamily::Bump: return "bump";
        case DataFamily::Dipole: return "dipole";
        case DataFamily::BlowupSeed: return "blowup-seed";
    }
    return "?";
}

DataFamily parse_family(std::string_view name) {
    if (name == "bump") return DataFamily::Bump;
    if (name == "dipole") return DataFamily::Dipole;
    if (name == "blowup-seed") return DataFamily::BlowupSeed;
    throw std::invalid_argument("unknown data family '" + std::string(name) + "'");
}

double InitialData::data_size_M() const {
    return f.sup_norm(0) + f.sup_norm(1) + f.sup_norm(2) + g.l1_norm() + g.sup_norm(0) + g.sup_norm(1);
}

namespace {

// (1 - (x/R)^2)^n on [-R, R], in the global variable.
Polynomial bump_power(double R, unsigned n) {
    return (Polynomial({1.0, 0.0, -1.0 / (R * R)})).pow(n);
}

// C^2 profile: linear f0*(R - x) on [-R/2, 0], quintic tapers to zero at ±R.
PiecewisePolynomial seed_profile(double R, double f0) {
    const double left_val = f0 * 1.5 * R;
    const double mid_val = f0 * R;
    Polynomial rise = quintic_hermite(-R, -0.5 * R, 0.0, 0.0, 0.0, left_val, -f0, 0.0);
    Polynomial ramp({left_val, -f0});  // local variable s = x + R/2
    Polynomial fall = quintic_hermite(0.0, R, mid_val, -f0, 0.0, 0.0, 0.0, 0.0);
    return PiecewisePolynomial({-R, -0.5 * R, 0.0, R}, {rise, ramp, fall});
}

}  // namespace

InitialData make_data(DataFamily family, double R, double eps, double f0) {
    if (!(R >= 1.0)) throw std::invalid_argument("support radius R must be >= 1");
    if (!(eps > 0.0)) throw std::invalid_argument("amplitude eps must be > 0");

    InitialData d;
    d.family = family;
    d.R = R;
    d.eps = eps;
    switch (family) {
        case DataFamily::Bump:
            d.f = PiecewisePolynomial::from_global(-R, R, bump_power(R, 3));
            d.g = PiecewisePolynomial::from_global(-R, R, bump_power(R, 2));
            d.g_mean = 16.0 * R / 15.0;
            d.f_mean = 32.0 * R / 35.0;
            break;
        case DataFamily::Dipole:
            d.f = PiecewisePolynomial::from_global(-R, R, bump_power(R, 3));
            d.g = d.f.derivative();
            d.g_mean = 0.0;
            d.f_mean = 32.0 * R / 35.0;
            break;
        case DataFamily::BlowupSeed: {
            if (!(f0 > 0.0)) throw std::invalid_argument("blowup-seed needs f0 > 0");
            d.f = seed_profile(R, f0);
            d.f0 = f0;
            d.g_mean = 0.0;
            // quintic Hermite: ∫ = h[(v0+v1)/2 + h(s0-s1)/10 + h^2(c0+c1)/120]
            const double h = 0.5 * R;
            const double rise = h * (0.75 * R * f0 + h * f0 / 10.0);
            const double ramp = 0.5 * R * 0.5 * (1.5 * R * f0 + R * f0);
            const double fall = R * (0.5 * R * f0 - R * f0 / 10.0);
            d.f_mean = rise + ramp + fall;
            break;
        }
    }
    return d;
}

FreeValues free_solution(const InitialData& data, double x, double t) noexcept {
    const double xp = x + t;
    const double xm = x - t;
    const auto& f = data.f;
    const auto& g = data.g;
    FreeValues v;
    v.u0 = 0.5 * (f(xp) + f(xm)) + 0.5 * (g.cumulative(xp) - g.cumulative(xm));
    v.u0_t = 0.5 * (f.eval(xp, 1) - f.eval(xm, 1) + g(xp) + g(xm));
    v.u0_x = 0.5 * (f.eval(xp, 1) + f.eval(xm, 1) + g(xp) - g(xm));
    v.u0_tx = 0.5 * (f.eval(xp, 2) - f.eval(xm, 2) + g.eval(xp, 1) + g.eval(xm, 1));
    return v;
}

}  // namespace wavelife
