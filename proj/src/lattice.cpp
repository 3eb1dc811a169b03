#include "wavelife/lattice.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <stdexcept>

namespace wavelife {

Lattice Lattice::covering(double dx, double T, double R, int margin) {
    if (!(dx > 0.0)) throw std::invalid_argument("lattice spacing must be positive");
    if (!(T >= 0.0)) throw std::invalid_argument("lattice horizon must be nonnegative");
    Lattice lat;
    lat.dx = dx;
    lat.n_steps = static_cast<int>(std::ceil(T / dx - 1e-9));
    lat.half_cells = static_cast<int>(std::ceil((lat.horizon() + R) / dx - 1e-9)) + margin;
    return lat;
}

std::pair<int, int> Lattice::cone_range(int n, double R, int pad) const noexcept {
    const int reach = static_cast<int>(std::ceil((t(n) + R) / dx - 1e-9)) + pad;
    const int lo = std::max(0, half_cells - reach);
    const int hi = std::min(n_x() - 1, half_cells + reach);
    return {lo, hi};
}

bool Lattice::contains_cone(double T, double R) const noexcept {
    return (T + R) / dx + 1.0 <= static_cast<double>(half_cells) + 1e-9;
}

FreeTable::FreeTable(const InitialData& data, const Lattice& lat)
    : half_cells_(lat.half_cells), shift_(lat.half_cells + lat.n_steps + 1) {
    const std::size_t n = 2 * static_cast<std::size_t>(shift_) + 1;
    f_.resize(n);
    f1_.resize(n);
    f2_.resize(n);
    g_.resize(n);
    g1_.resize(n);
    gcum_.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double x = (static_cast<int>(j) - shift_) * lat.dx;
        f_[j] = data.f.eval(x, 0);
        f1_[j] = data.f.eval(x, 1);
        f2_[j] = data.f.eval(x, 2);
        g_[j] = data.g.eval(x, 0);
        g1_[j] = data.g.eval(x, 1);
        gcum_[j] = data.g.cumulative(x);
    }
}

double FreeTable::u0(int n, int i) const noexcept {
    const auto p = k(i - half_cells_ + n);
    const auto m = k(i - half_cells_ - n);
    return 0.5 * (f_[p] + f_[m]) + 0.5 * (gcum_[p] - gcum_[m]);
}

double FreeTable::u0_t(int n, int i) const noexcept {
    const auto p = k(i - half_cells_ + n);
    const auto m = k(i - half_cells_ - n);
    return 0.5 * (f1_[p] - f1_[m] + g_[p] + g_[m]);
}

FreeValues FreeTable::at(int n, int i) const noexcept {
    const auto p = k(i - half_cells_ + n);
    const auto m = k(i - half_cells_ - n);
    FreeValues v;
    v.u0 = 0.5 * (f_[p] + f_[m]) + 0.5 * (gcum_[p] - gcum_[m]);
    v.u0_t = 0.5 * (f1_[p] - f1_[m] + g_[p] + g_[m]);
    v.u0_x = 0.5 * (f1_[p] + f1_[m] + g_[p] - g_[m]);
    v.u0_tx = 0.5 * (f2_[p] - f2_[m] + g1_[p] + g1_[m]);
    return v;
}

void write_field_csv(const std::string& path, const Field& field, const InitialData& data, int stride) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    const Lattice& lat = field.lattice();
    out << "# dx=" << lat.dx << " half_cells=" << lat.half_cells << " n_steps=" << lat.n_steps
        << " last_level=" << field.last_level << " R=" << data.R << " eps=" << data.eps
        << " family=" << to_string(data.family) << '\n';
    out << "x,t,u,w\n";
    out << std::setprecision(17);
    stride = std::max(1, stride);
    for (int n = 0; n <= field.last_level; n += stride) {
        const auto [lo, hi] = lat.cone_range(n, data.R);
        for (int i = lo; i <= hi; ++i)
            out << lat.x(i) << ',' << lat.t(n) << ',' << field.u.at(n, i) << ',' << field.w.at(n, i) << '\n';
    }
}

}  // namespace wavelife
