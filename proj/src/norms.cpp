#include "wavelife/norms.hpp"

#include <algorithm>
#include <cmath>

namespace wavelife {

double norm_weight(NormKind kind, double x, double t, double R) noexcept {
    const double ax = std::abs(x);
    switch (kind) {
        case NormKind::N1: return 1.0;
        case NormKind::N2: return t - ax + 2.0 * R;
        case NormKind::N3: return 1.0 / (t + ax + R);
        case NormKind::N4: return in_huygens_region(x, t, R) ? 1.0 : 1.0 / (t + ax + R);
    }
    return 1.0;
}

double weighted_sup(const LatticeArray& a, NormKind kind, double R, double T) {
    const Lattice& lat = a.lattice();
    double best = 0.0;
    for (int n = 0; n < a.rows() && lat.t(n) <= T + 1e-12; ++n) {
        const auto [lo, hi] = lat.cone_range(n, R, 0);
        const double t = lat.t(n);
        for (int i = lo; i <= hi; ++i) {
            const double x = lat.x(i);
            if (std::abs(x) > t + R + 1e-12) continue;
            best = std::max(best, std::abs(norm_weight(kind, x, t, R) * a.at(n, i)));
        }
    }
    return best;
}

NormReport norms(const LatticeArray& u, const LatticeArray& w, double R, double T) {
    NormReport rep;
    rep.T_window = T;
    rep.n1 = weighted_sup(u, NormKind::N1, R, T);
    rep.n2 = weighted_sup(w, NormKind::N2, R, T);
    rep.n3 = weighted_sup(u, NormKind::N3, R, T);
    rep.n4 = weighted_sup(w, NormKind::N4, R, T);
    return rep;
}

NormReport norms(const Field& field, const InitialData& data, double T) {
    return norms(field.u, field.w, data.R, std::min(T, field.horizon()));
}

HuygensResult huygens_residual(const InitialData& data, double T, double dx) {
    const Lattice lat = Lattice::covering(dx, T, data.R);
    const FreeTable free(data, lat);
    HuygensResult res;
    res.flagged_nonzero_mean = !data.mean_zero();
    for (int n = 0; n <= lat.n_steps; ++n) {
        const double t = lat.t(n);
        for (int i = 0; i < lat.n_x(); ++i) {
            if (!in_huygens_region(lat.x(i), t, data.R)) continue;
            res.residual = std::max(res.residual, std::abs(data.eps * free.u0(n, i)));
        }
    }
    return res;
}

}  // namespace wavelife
