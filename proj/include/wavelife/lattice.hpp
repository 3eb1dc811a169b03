#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "wavelife/initial_data.hpp"

namespace wavelife {

/// Characteristic lattice: dt = dx, x_i = (i - half_cells) dx, t_n = n dx.
struct Lattice {
    double dx = 0.02;
    int half_cells = 0;
    int n_steps = 0;

    /// Smallest origin-aligned lattice reaching time T whose spatial extent
    /// contains the cone |x| <= T + R plus `margin` cells.
    static Lattice covering(double dx, double T, double R, int margin = 2);

    [[nodiscard]] int n_x() const noexcept { return 2 * half_cells + 1; }
    [[nodiscard]] double x(int i) const noexcept { return (i - half_cells) * dx; }
    [[nodiscard]] double t(int n) const noexcept { return n * dx; }
    [[nodiscard]] double x_min() const noexcept { return -half_cells * dx; }
    [[nodiscard]] double x_max() const noexcept { return half_cells * dx; }
    [[nodiscard]] double horizon() const noexcept { return n_steps * dx; }
    /// Index range [lo, hi] of lattice points with |x| <= t_n + R (+ `pad` cells).
    [[nodiscard]] std::pair<int, int> cone_range(int n, double R, int pad = 1) const noexcept;
    /// True when |x| <= t + R leaves at least one zero cell at both ends up to `T`.
    [[nodiscard]] bool contains_cone(double T, double R) const noexcept;
};

/// Values on (time level n, space index i), row-major in n.
class LatticeArray {
public:
    LatticeArray() = default;
    LatticeArray(const Lattice& lat, int n_rows, double fill = 0.0)
        : lat_(lat), rows_(n_rows), data_(static_cast<std::size_t>(n_rows) * lat.n_x(), fill) {}
    explicit LatticeArray(const Lattice& lat) : LatticeArray(lat, lat.n_steps + 1) {}

    [[nodiscard]] const Lattice& lattice() const noexcept { return lat_; }
    [[nodiscard]] int rows() const noexcept { return rows_; }
    [[nodiscard]] double& at(int n, int i) noexcept { return data_[index(n, i)]; }
    [[nodiscard]] double at(int n, int i) const noexcept { return data_[index(n, i)]; }
    /// Zero outside the stored index range.
    [[nodiscard]] double get(int n, int i) const noexcept {
        return (i < 0 || i >= lat_.n_x() || n < 0 || n >= rows_) ? 0.0 : data_[index(n, i)];
    }
    [[nodiscard]] std::span<double> row(int n) noexcept {
        return {data_.data() + static_cast<std::size_t>(n) * lat_.n_x(), static_cast<std::size_t>(lat_.n_x())};
    }
    [[nodiscard]] std::span<const double> row(int n) const noexcept {
        return {data_.data() + static_cast<std::size_t>(n) * lat_.n_x(), static_cast<std::size_t>(lat_.n_x())};
    }
    [[nodiscard]] std::vector<double>& raw() noexcept { return data_; }
    [[nodiscard]] const std::vector<double>& raw() const noexcept { return data_; }

private:
    [[nodiscard]] std::size_t index(int n, int i) const noexcept {
        return static_cast<std::size_t>(n) * lat_.n_x() + static_cast<std::size_t>(i);
    }

    Lattice lat_;
    int rows_ = 0;
    std::vector<double> data_;
};

/// (u, w) on the lattice, w standing in for u_t.
struct Field {
    LatticeArray u;
    LatticeArray w;
    /// Last time level filled.
    int last_level = 0;

    [[nodiscard]] const Lattice& lattice() const noexcept { return u.lattice(); }
    [[nodiscard]] double horizon() const noexcept { return u.lattice().t(last_level); }
};

/// Profiles of (f, g) tabulated at the lattice points x = k dx, so that the
/// d'Alembert formula is evaluated exactly at every (x_i, t_n).
class FreeTable {
public:
    FreeTable(const InitialData& data, const Lattice& lat);

    /// Free solution at lattice point (n, i), unscaled.
    [[nodiscard]] FreeValues at(int n, int i) const noexcept;
    [[nodiscard]] double u0(int n, int i) const noexcept;
    [[nodiscard]] double u0_t(int n, int i) const noexcept;

private:
    [[nodiscard]] std::size_t k(int offset) const noexcept { return static_cast<std::size_t>(offset + shift_); }

    int half_cells_ = 0;
    int shift_ = 0;
    std::vector<double> f_, f1_, f2_, g_, g1_, gcum_;
};

/// Writes x, t, u, w rows for every `stride`-th stored level inside the cone.
void write_field_csv(const std::string& path, const Field& field, const InitialData& data, int stride = 1);

}  // namespace wavelife
