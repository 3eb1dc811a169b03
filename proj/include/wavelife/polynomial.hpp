#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

namespace wavelife {

/// Dense real polynomial, coefficients in ascending powers.
class Polynomial {
public:
    Polynomial() = default;
    Polynomial(std::initializer_list<double> coeffs) : c_(coeffs) {}
    explicit Polynomial(std::vector<double> coeffs) : c_(std::move(coeffs)) {}

    static Polynomial constant(double v) { return Polynomial({v}); }

    [[nodiscard]] double operator()(double x) const noexcept;
    [[nodiscard]] std::size_t degree() const noexcept { return c_.empty() ? 0 : c_.size() - 1; }
    [[nodiscard]] const std::vector<double>& coeffs() const noexcept { return c_; }

    [[nodiscard]] Polynomial derivative() const;
    /// Antiderivative vanishing at 0.
    [[nodiscard]] Polynomial integral() const;
    /// Returns s -> p(a*s + b).
    [[nodiscard]] Polynomial compose_affine(double a, double b) const;

    Polynomial& operator+=(const Polynomial& o);
    Polynomial& operator*=(double k);
    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator*(Polynomial a, double k) { return a *= k; }
    friend Polynomial operator*(double k, Polynomial a) { return a *= k; }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a += b * -1.0; }

    [[nodiscard]] Polynomial pow(unsigned n) const;

private:
    std::vector<double> c_;
};

/// Compactly supported piecewise polynomial. Each piece is stored in the
/// local variable s = x - left so that evaluation stays well conditioned.
/// Outside [breaks.front(), breaks.back()] the function is zero.
class PiecewisePolynomial {
public:
    PiecewisePolynomial() = default;
    /// `pieces[k]` lives on [breaks[k], breaks[k+1]] in the local variable.
    PiecewisePolynomial(std::vector<double> breaks, std::vector<Polynomial> pieces);

    /// Piece given in the global variable x, restricted to [a, b].
    static PiecewisePolynomial from_global(double a, double b, const Polynomial& p);

    [[nodiscard]] double operator()(double x) const noexcept { return eval(x, 0); }
    /// Value of the `order`-th derivative (orders 0..3).
    [[nodiscard]] double eval(double x, int order) const noexcept;
    /// Exact integral over (-inf, x].
    [[nodiscard]] double cumulative(double x) const noexcept;
    /// Exact integral over [a, b].
    [[nodiscard]] double integrate(double a, double b) const noexcept { return cumulative(b) - cumulative(a); }
    [[nodiscard]] double total_integral() const noexcept { return total_; }

    [[nodiscard]] PiecewisePolynomial derivative() const;
    [[nodiscard]] double support_left() const noexcept { return breaks_.empty() ? 0.0 : breaks_.front(); }
    [[nodiscard]] double support_right() const noexcept { return breaks_.empty() ? 0.0 : breaks_.back(); }
    [[nodiscard]] bool empty() const noexcept { return pieces_.empty(); }

    /// sup |f| estimated on a dense sample plus breakpoints.
    [[nodiscard]] double sup_norm(int order = 0, int samples = 4001) const;
    /// ∫|f| estimated by dense trapezoid; exact when f has one sign per piece
    /// and no interior roots (not relied upon for g_mean).
    [[nodiscard]] double l1_norm(int samples = 4001) const;

private:
    [[nodiscard]] std::ptrdiff_t locate(double x) const noexcept;

    std::vector<double> breaks_;
    std::vector<Polynomial> pieces_;
    std::vector<std::vector<Polynomial>> derivs_;  // orders 1..3 per piece
    std::vector<Polynomial> antiderivs_;
    std::vector<double> cum_left_;  // integral up to the left end of each piece
    double total_ = 0.0;
};

/// Quintic Hermite interpolant on [a, b] matching value, slope and curvature
/// at both ends. Returned in the local variable s = x - a.
Polynomial quintic_hermite(double a, double b, double v0, double s0, double c0, double v1, double s1,
                           double c1);

}  // namespace wavelife
