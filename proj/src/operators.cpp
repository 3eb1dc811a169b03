#include "wavelife/operators.hpp"

#include <cmath>
#include <stdexcept>

namespace wavelife {

namespace {

void check_point(const LatticeArray& v, int n, int i) {
    if (n < 0 || n >= v.rows()) throw std::out_of_range("time level outside the sampled horizon");
    if (i < 0 || i >= v.lattice().n_x()) throw std::out_of_range("space index outside the lattice");
}

std::pair<int, int> snap(const LatticeArray& v, double x, double t) {
    const Lattice& lat = v.lattice();
    const double nf = t / lat.dx;
    const double jf = x / lat.dx;
    const double n = std::round(nf);
    const double j = std::round(jf);
    if (std::abs(nf - n) > 1e-9 || std::abs(jf - j) > 1e-9)
        throw std::invalid_argument("operator evaluation point is not a lattice point");
    const int ni = static_cast<int>(n);
    const int ii = static_cast<int>(j) + lat.half_cells;
    check_point(v, ni, ii);
    return {ni, ii};
}

}  // namespace

double op_L(const LatticeArray& v, int n, int i) {
    check_point(v, n, i);
    if (n == 0) return 0.0;
    const double h = v.lattice().dx;
    double acc = 0.0;
    for (int m = 1; m <= n - 1; ++m) {
        const int half = n - 1 - m;
        for (int j = i - half; j <= i + half; j += 2) acc += 0.5 * (v.get(m, j - 1) + v.get(m, j + 1));
    }
    double base = 0.0;
    for (int j = i - (n - 1); j <= i + (n - 1); j += 2)
        base += (v.get(0, j - 1) + v.get(0, j + 1) + v.get(1, j)) / 3.0;
    // ½ × (2h² per diamond, h² per half-diamond)
    return h * h * acc + 0.5 * h * h * base;
}

namespace {

double characteristic_sum(const LatticeArray& v, int n, int i, int dir) {
    if (n == 0) return 0.0;
    const double h = v.lattice().dx;
    double acc = 0.5 * (v.get(0, i + dir * n) + v.get(n, i));
    for (int m = 1; m < n; ++m) acc += v.get(m, i + dir * (n - m));
    return 0.5 * h * acc;
}

}  // namespace

double op_Lprime(const LatticeArray& v, int n, int i) {
    check_point(v, n, i);
    return characteristic_sum(v, n, i, +1) + characteristic_sum(v, n, i, -1);
}

double op_Lbar(const LatticeArray& v, int n, int i) {
    check_point(v, n, i);
    return characteristic_sum(v, n, i, +1) - characteristic_sum(v, n, i, -1);
}

double op_L(const LatticeArray& v, double x, double t) {
    const auto [n, i] = snap(v, x, t);
    return op_L(v, n, i);
}

double op_Lprime(const LatticeArray& v, double x, double t) {
    const auto [n, i] = snap(v, x, t);
    return op_Lprime(v, n, i);
}

double op_Lbar(const LatticeArray& v, double x, double t) {
    const auto [n, i] = snap(v, x, t);
    return op_Lbar(v, n, i);
}

LatticeArray apply_L(const LatticeArray& v) {
    const Lattice& lat = v.lattice();
    const int rows = v.rows();
    const int nx = lat.n_x();
    const double h2 = lat.dx * lat.dx;
    LatticeArray out(lat, rows);
    if (rows < 2) return out;
    for (int i = 0; i < nx; ++i)
        out.at(1, i) = 0.5 * h2 * (v.get(0, i - 1) + v.get(0, i + 1) + v.get(1, i)) / 3.0;
    for (int n = 1; n + 1 < rows; ++n) {
        for (int i = 0; i < nx; ++i) {
            out.at(n + 1, i) = out.get(n, i + 1) + out.get(n, i - 1) - out.at(n - 1, i) +
                               0.5 * h2 * (v.get(n, i - 1) + v.get(n, i + 1));
        }
    }
    return out;
}

CharacteristicPair apply_Lprime(const LatticeArray& v) {
    const Lattice& lat = v.lattice();
    const int rows = v.rows();
    const int nx = lat.n_x();
    const double q = 0.25 * lat.dx;
    LatticeArray right(lat, rows);  // ½∫ v(x+t-s, s) ds
    LatticeArray left(lat, rows);   // ½∫ v(x-t+s, s) ds
    for (int n = 0; n + 1 < rows; ++n) {
        for (int i = 0; i < nx; ++i) {
            const double here = v.at(n + 1, i);
            right.at(n + 1, i) = right.get(n, i + 1) + q * (v.get(n, i + 1) + here);
            left.at(n + 1, i) = left.get(n, i - 1) + q * (v.get(n, i - 1) + here);
        }
    }
    CharacteristicPair out{LatticeArray(lat, rows), LatticeArray(lat, rows)};
    auto& lp = out.lprime.raw();
    auto& lb = out.lbar.raw();
    const auto& r = right.raw();
    const auto& l = left.raw();
    for (std::size_t k = 0; k < lp.size(); ++k) {
        lp[k] = r[k] + l[k];
        lb[k] = r[k] - l[k];
    }
    return out;
}

LatticeArray sample(const Lattice& lat, const std::function<double(double, double)>& v) {
    LatticeArray out(lat);
    for (int n = 0; n < out.rows(); ++n)
        for (int i = 0; i < lat.n_x(); ++i) out.at(n, i) = v(lat.x(i), lat.t(n));
    return out;
}

}  // namespace wavelife
