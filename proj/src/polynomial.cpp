#include "wavelife/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wavelife {

double Polynomial::operator()(double x) const noexcept {
    double acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

Polynomial Polynomial::derivative() const {
    if (c_.size() <= 1) return Polynomial::constant(0.0);
    std::vector<double> d(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = static_cast<double>(k) * c_[k];
    return Polynomial(std::move(d));
}

Polynomial Polynomial::integral() const {
    std::vector<double> d(c_.size() + 1, 0.0);
    for (std::size_t k = 0; k < c_.size(); ++k) d[k + 1] = c_[k] / static_cast<double>(k + 1);
    return Polynomial(std::move(d));
}

Polynomial Polynomial::compose_affine(double a, double b) const {
    // Horner in polynomial arithmetic.
    const Polynomial lin({b, a});
    Polynomial acc = Polynomial::constant(0.0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * lin + Polynomial::constant(*it);
    return acc;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0.0);
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
    return *this;
}

Polynomial& Polynomial::operator*=(double k) {
    for (double& v : c_) v *= k;
    return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.c_.empty() || b.c_.empty()) return Polynomial::constant(0.0);
    std::vector<double> out(a.c_.size() + b.c_.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
        for (std::size_t j = 0; j < b.c_.size(); ++j) out[i + j] += a.c_[i] * b.c_[j];
    return Polynomial(std::move(out));
}

Polynomial Polynomial::pow(unsigned n) const {
    Polynomial acc = Polynomial::constant(1.0);
    for (unsigned k = 0; k < n; ++k) acc = acc * *this;
    return acc;
}

PiecewisePolynomial::PiecewisePolynomial(std::vector<double> breaks, std::vector<Polynomial> pieces)
    : breaks_(std::move(breaks)), pieces_(std::move(pieces)) {
    if (pieces_.empty()) {
        breaks_.clear();
        return;
    }
    if (breaks_.size() != pieces_.size() + 1)
        throw std::invalid_argument("PiecewisePolynomial: need pieces+1 breakpoints");
    if (!std::is_sorted(breaks_.begin(), breaks_.end()))
        throw std::invalid_argument("PiecewisePolynomial: breakpoints must be sorted");

    derivs_.reserve(pieces_.size());
    antiderivs_.reserve(pieces_.size());
    cum_left_.reserve(pieces_.size());
    double acc = 0.0;
    for (std::size_t k = 0; k < pieces_.size(); ++k) {
        std::vector<Polynomial> d;
        Polynomial cur = pieces_[k];
        for (int o = 0; o < 3; ++o) {
            cur = cur.derivative();
            d.push_back(cur);
        }
        derivs_.push_back(std::move(d));
        antiderivs_.push_back(pieces_[k].integral());
        cum_left_.push_back(acc);
        acc += antiderivs_.back()(breaks_[k + 1] - breaks_[k]);
    }
    total_ = acc;
}

PiecewisePolynomial PiecewisePolynomial::from_global(double a, double b, const Polynomial& p) {
    return PiecewisePolynomial({a, b}, {p.compose_affine(1.0, a)});
}

std::ptrdiff_t PiecewisePolynomial::locate(double x) const noexcept {
    if (pieces_.empty() || x < breaks_.front() || x > breaks_.back()) return -1;
    auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
    auto k = std::distance(breaks_.begin(), it) - 1;
    return std::min<std::ptrdiff_t>(k, static_cast<std::ptrdiff_t>(pieces_.size()) - 1);
}

double PiecewisePolynomial::eval(double x, int order) const noexcept {
    const auto k = locate(x);
    if (k < 0) return 0.0;
    const double s = x - breaks_[static_cast<std::size_t>(k)];
    const auto& piece = pieces_[static_cast<std::size_t>(k)];
    if (order == 0) return piece(s);
    if (order < 0 || order > 3) return 0.0;
    return derivs_[static_cast<std::size_t>(k)][static_cast<std::size_t>(order - 1)](s);
}

double PiecewisePolynomial::cumulative(double x) const noexcept {
    if (pieces_.empty() || x <= breaks_.front()) return 0.0;
    if (x >= breaks_.back()) return total_;
    const auto k = static_cast<std::size_t>(locate(x));
    return cum_left_[k] + antiderivs_[k](x - breaks_[k]);
}

PiecewisePolynomial PiecewisePolynomial::derivative() const {
    std::vector<Polynomial> d;
    d.reserve(pieces_.size());
    for (const auto& p : pieces_) d.push_back(p.derivative());
    return PiecewisePolynomial(breaks_, std::move(d));
}

double PiecewisePolynomial::sup_norm(int order, int samples) const {
    if (pieces_.empty()) return 0.0;
    double best = 0.0;
    for (double b : breaks_) {
        // one-sided values at breakpoints
        best = std::max(best, std::abs(eval(b, order)));
        best = std::max(best, std::abs(eval(std::nextafter(b, -1e300), order)));
    }
    const double a = breaks_.front();
    const double w = breaks_.back() - a;
    for (int k = 0; k <= samples; ++k) best = std::max(best, std::abs(eval(a + w * k / samples, order)));
    return best;
}

double PiecewisePolynomial::l1_norm(int samples) const {
    if (pieces_.empty()) return 0.0;
    const double a = breaks_.front();
    const double h = (breaks_.back() - a) / samples;
    double acc = 0.5 * (std::abs(eval(a, 0)) + std::abs(eval(breaks_.back(), 0)));
    for (int k = 1; k < samples; ++k) acc += std::abs(eval(a + h * k, 0));
    return acc * h;
}

Polynomial quintic_hermite(double a, double b, double v0, double s0, double c0, double v1, double s1,
                           double c1) {
    const double h = b - a;
    // Hermite basis on [0,1].
    const Polynomial H0({1, 0, 0, -10, 15, -6});
    const Polynomial H1({0, 1, 0, -6, 8, -3});
    const Polynomial H2({0, 0, 0.5, -1.5, 1.5, -0.5});
    const Polynomial H3({0, 0, 0, 10, -15, 6});
    const Polynomial H4({0, 0, 0, -4, 7, -3});
    const Polynomial H5({0, 0, 0, 0.5, -1, 0.5});
    const Polynomial unit = v0 * H0 + (h * s0) * H1 + (h * h * c0) * H2 + v1 * H3 + (h * s1) * H4 +
                            (h * h * c1) * H5;
    return unit.compose_affine(1.0 / h, 0.0);
}

}  // namespace wavelife
