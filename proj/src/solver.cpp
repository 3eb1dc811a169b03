#include "wavelife/solver.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <stdexcept>

#include "wavelife/nonlinearity.hpp"

namespace wavelife {

EvolveResult evolve(const InitialData& data, const ModelParams& params, const Lattice& lat, double T_max,
                    double threshold, const EvolveOptions& opts) {
    params.validate();
    const double h = lat.dx;
    const double R = data.R;
    const double eps = data.eps;
    const int n_target = std::min(lat.n_steps, static_cast<int>(std::ceil(T_max / h - 1e-9)));
    if (!lat.contains_cone(lat.t(n_target + 1), R))
        throw std::invalid_argument("lattice too narrow: the support cone reaches the boundary");

    const int nx = lat.n_x();
    const FreeTable free(data, lat);
    const Nonlinearity source(params);

    std::vector<double> U_m2(nx, 0.0), U_m1(nx, 0.0), U_0(nx, 0.0), U_p1(nx, 0.0);
    std::vector<double> S(nx, 0.0), Wt(nx, 0.0);

    EvolveResult res;
    if (opts.record) {
        Field f{LatticeArray(lat, n_target + 1), LatticeArray(lat, n_target + 1), 0};
        res.field = std::move(f);
    }
    res.times.reserve(static_cast<std::size_t>(n_target) + 1);
    res.integral_u.reserve(static_cast<std::size_t>(n_target) + 1);
    res.max_norm.reserve(static_cast<std::size_t>(n_target) + 1);

    // Finalises level n from U_n and W_n; returns false when the run must stop.
    auto close_level = [&](int n, const std::vector<double>& Un, const std::vector<double>& Wn) {
        const auto [lo, hi] = lat.cone_range(n, R, 2);
        double integral = 0.0;
        double mx = 0.0;
        bool finite = true;
        for (int i = lo; i <= hi; ++i) {
            const double u = eps * free.u0(n, i) + Un[static_cast<std::size_t>(i)];
            const double w = eps * free.u0_t(n, i) + Wn[static_cast<std::size_t>(i)];
            if (!std::isfinite(u) || !std::isfinite(w)) finite = false;
            integral += u;
            mx = std::max({mx, std::abs(u), std::abs(w)});
            if (res.field) {
                res.field->u.at(n, i) = u;
                res.field->w.at(n, i) = w;
            }
        }
        const double t = lat.t(n);
        res.times.push_back(t);
        res.integral_u.push_back(integral * h);
        res.max_norm.push_back(finite ? mx : std::numeric_limits<double>::infinity());
        res.last_level = n;
        res.horizon = t;
        if (res.field) res.field->last_level = n;

        if (!finite) {
            res.nonfinite = true;
            res.crossing_time = t;
            return false;
        }
        if (mx > threshold) {
            if (n == 0) {
                res.crossing_time = 0.0;
            } else {
                const double m0 = std::max(res.max_norm[res.max_norm.size() - 2], 1e-300);
                const double frac = (std::log(threshold) - std::log(m0)) / (std::log(mx) - std::log(m0));
                res.crossing_time = lat.t(n - 1) + h * std::clamp(frac, 0.0, 1.0);
            }
            return false;
        }
        return true;
    };

    // Level 0 and the Taylor step to level 1.
    {
        const auto [lo, hi] = lat.cone_range(0, R, 2);
        for (int i = lo; i <= hi; ++i)
            S[static_cast<std::size_t>(i)] = source(eps * free.u0_t(0, i), eps * free.u0(0, i));
        const auto [lo1, hi1] = lat.cone_range(1, R, 1);
        for (int i = std::max(lo1, 1); i <= std::min(hi1, nx - 2); ++i) {
            const auto k = static_cast<std::size_t>(i);
            U_p1[k] = 0.25 * h * h * (S[k - 1] + S[k + 1]);
        }
        if (!close_level(0, U_0, Wt)) return res;
        std::swap(U_0, U_p1);  // U_0 now holds level 1, U_m1 level 0
    }

    for (int n = 1; n <= n_target; ++n) {
        const auto [lo, hi] = lat.cone_range(n, R, 2);
        for (int i = lo; i <= hi; ++i) {
            const auto k = static_cast<std::size_t>(i);
            // Backward differences along both characteristics; only points of the
            // same parity as (n, i) enter, otherwise the two sublattices of the
            // diamond scheme couple through the derivative term and a checkerboard
            // mode grows like exp(c t / sqrt(h)).
            double Wb;
            if (n == 1) {
                Wb = 2.0 * U_0[k] / h;
            } else {
                const double a = (k >= 2) ? U_m2[k - 2] : 0.0;
                const double b = (k + 2 < U_m2.size()) ? U_m2[k + 2] : 0.0;
                Wb = (6.0 * U_0[k] - 4.0 * (U_m1[k - 1] + U_m1[k + 1]) + a + b) / (4.0 * h);
            }
            S[k] = source(eps * free.u0_t(n, i) + Wb, eps * free.u0(n, i) + U_0[k]);
        }
        const auto [lo1, hi1] = lat.cone_range(n + 1, R, 1);
        for (int i = std::max(lo1, 1); i <= std::min(hi1, nx - 2); ++i) {
            const auto k = static_cast<std::size_t>(i);
            U_p1[k] = U_0[k + 1] + U_0[k - 1] - U_m1[k] + 0.5 * h * h * (S[k - 1] + S[k + 1]);
        }
        for (int i = lo; i <= hi; ++i) {
            const auto k = static_cast<std::size_t>(i);
            Wt[k] = (U_p1[k] - U_m1[k]) / (2.0 * h);
        }
        if (!close_level(n, U_0, Wt)) return res;
        std::swap(U_m2, U_m1);
        std::swap(U_m1, U_0);
        std::swap(U_0, U_p1);
    }
    return res;
}

double default_threshold(const InitialData& data) {
    return std::max(1e6 * data.eps * data.f.sup_norm(0), 1e3);
}

LifespanMeasurement measure_lifespan(const InitialData& data, const ModelParams& params, double eps,
                                     double threshold, double dx, double tol_refine, double T_max) {
    InitialData scaled = data;
    scaled.eps = eps;
    LifespanMeasurement m;
    m.eps = eps;
    m.dx = dx;
    m.threshold = threshold;

    const Lattice coarse = Lattice::covering(dx, T_max + 2 * dx, data.R);
    const EvolveResult a = evolve(scaled, params, coarse, T_max, threshold);
    m.nonfinite = a.nonfinite;
    if (!a.crossing_time) return m;
    m.T_num = *a.crossing_time;

    // The refined run only needs to get far enough to decide acceptance.
    const double T_fine = std::min(T_max, 2.0 * m.T_num + 1.0);
    const Lattice fine = Lattice::covering(0.5 * dx, T_fine + dx, data.R);
    const EvolveResult b = evolve(scaled, params, fine, T_fine, threshold);
    m.nonfinite = m.nonfinite || b.nonfinite;
    if (!b.crossing_time) return m;
    m.refined_T_num = *b.crossing_time;
    m.rel_change = std::abs(m.T_num - m.refined_T_num) / m.T_num;
    m.accepted = m.rel_change <= tol_refine;
    return m;
}

void append_sweep_row(const std::string& path, const LifespanMeasurement& m) {
    const bool fresh = !std::filesystem::exists(path) || std::filesystem::file_size(path) == 0;
    std::ofstream out(path, std::ios::app);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    if (fresh) out << "eps,dx,T_num,refined_T_num,rel_change,accepted\n";
    out << std::setprecision(17) << m.eps << ',' << m.dx << ',' << m.T_num << ',' << m.refined_T_num << ','
        << m.rel_change << ',' << (m.accepted ? 1 : 0) << '\n';
}

}  // namespace wavelife
