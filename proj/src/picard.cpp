#include "wavelife/picard.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <functional>
#include <random>

#include "wavelife/nonlinearity.hpp"
#include "wavelife/operators.hpp"

namespace wavelife {

double IterationTrace::max_rho(std::size_t first) const noexcept {
    double best = 0.0;
    for (std::size_t j = first; j <= rho.size(); ++j) {
        const double r = rho[j - 1];
        if (std::isfinite(r)) best = std::max(best, r);
    }
    return best;
}

double IterationTrace::max_iterate_norm() const noexcept {
    double best = 0.0;
    for (const auto& rep : reports) {
        if (scheme == PicardScheme::NonzeroMean)
            best = std::max({best, rep.n1, rep.n2});
        else
            best = std::max({best, rep.n3, rep.n4});
    }
    return best;
}

namespace {

int levels_for(const Lattice& lat, double T) {
    const int n = static_cast<int>(std::lround(T / lat.dx));
    if (std::abs(n * lat.dx - T) > 1e-9 * std::max(1.0, T))
        throw std::invalid_argument("T must be a multiple of the lattice spacing");
    if (n > lat.n_steps) throw std::invalid_argument("T exceeds the lattice horizon");
    return n;
}

bool all_finite(const LatticeArray& a) {
    return std::all_of(a.raw().begin(), a.raw().end(), [](double v) { return std::isfinite(v); });
}

LatticeArray difference(const LatticeArray& a, const LatticeArray& b) {
    LatticeArray out = a;
    auto& o = out.raw();
    const auto& bb = b.raw();
    for (std::size_t k = 0; k < o.size(); ++k) o[k] -= bb[k];
    return out;
}

NormReport iterate_report(const LatticeArray& u, const LatticeArray& w, const LatticeArray& u0e,
                          const LatticeArray& ut0e, double R, double T) {
    NormReport rep;
    rep.T_window = T;
    rep.n1 = weighted_sup(u, NormKind::N1, R, T);
    rep.n2 = weighted_sup(w, NormKind::N2, R, T);
    rep.n3 = weighted_sup(difference(u, u0e), NormKind::N3, R, T);
    rep.n4 = weighted_sup(difference(w, ut0e), NormKind::N4, R, T);
    return rep;
}

PicardResult iterate(const InitialData& data, const ModelParams& params, double T, const Lattice& lat,
                     int max_iter, double tol, IterationTrace trace) {
    params.validate();
    if (!(data.eps > 0.0)) throw std::invalid_argument("eps must be positive");
    if (max_iter < 1) throw std::invalid_argument("max_iter must be at least 1");
    const int nT = levels_for(lat, T);
    if (!lat.contains_cone(lat.t(nT), data.R))
        throw std::invalid_argument("lattice too narrow: the support cone reaches the boundary");
    const int rows = nT + 1;
    const double R = data.R;
    const double eps = data.eps;

    const FreeTable free(data, lat);
    LatticeArray u0e(lat, rows), ut0e(lat, rows);
    for (int n = 0; n < rows; ++n) {
        const auto [lo, hi] = lat.cone_range(n, R, 1);
        for (int i = lo; i <= hi; ++i) {
            u0e.at(n, i) = eps * free.u0(n, i);
            ut0e.at(n, i) = eps * free.u0_t(n, i);
        }
    }

    const Nonlinearity source(params);
    const bool weighted = trace.scheme == PicardScheme::ZeroMean;
    const NormKind ku = weighted ? NormKind::N3 : NormKind::N1;
    const NormKind kw = weighted ? NormKind::N4 : NormKind::N2;

    LatticeArray u = u0e, w = ut0e;
    LatticeArray S(lat, rows);
    int blowups = 0;
    trace.T = T;
    trace.eps = eps;
    trace.tol = tol;

    for (int j = 1; j <= max_iter; ++j) {
        trace.reports.push_back(iterate_report(u, w, u0e, ut0e, R, T));
        for (int n = 0; n < rows; ++n) {
            const auto [lo, hi] = lat.cone_range(n, R, 1);
            for (int i = lo; i <= hi; ++i) S.at(n, i) = source(w.at(n, i), u.at(n, i));
        }
        LatticeArray un = apply_L(S);
        LatticeArray wn = apply_Lprime(S).lprime;
        {
            auto& a = un.raw();
            auto& b = wn.raw();
            const auto& a0 = u0e.raw();
            const auto& b0 = ut0e.raw();
            for (std::size_t k = 0; k < a.size(); ++k) {
                a[k] += a0[k];
                b[k] += b0[k];
            }
        }
        trace.iterations = j;
        if (!all_finite(un) || !all_finite(wn)) {
            trace.diverged = true;
            throw DivergenceError("non-finite Picard iterate", std::move(trace));
        }
        const double dj =
            weighted_sup(difference(un, u), ku, R, T) + weighted_sup(difference(wn, w), kw, R, T);
        if (!trace.d.empty()) {
            const double prev = trace.d.back();
            trace.rho.push_back(prev > 0.0 ? dj / prev : std::numeric_limits<double>::quiet_NaN());
            blowups = (dj > 10.0 * prev) ? blowups + 1 : 0;
        }
        trace.d.push_back(dj);
        u = std::move(un);
        w = std::move(wn);
        if (blowups >= 3) {
            trace.diverged = true;
            throw DivergenceError("Picard differences grew tenfold three times in a row", std::move(trace));
        }
        if (dj <= tol * trace.scale) {
            trace.converged = true;
            trace.reports.push_back(iterate_report(u, w, u0e, ut0e, R, T));
            break;
        }
    }

    PicardResult res{Field{std::move(u), std::move(w), nT}, std::move(trace)};
    return res;
}

}  // namespace

PicardResult picard_nonzero(const InitialData& data, const ModelParams& params, double T, const Lattice& lattice,
                            int max_iter, double tol) {
    IterationTrace trace;
    trace.scheme = PicardScheme::NonzeroMean;
    trace.M = data.data_size_M();
    trace.scale = trace.M * data.eps;
    trace.band = 3.0 * trace.scale;
    return iterate(data, params, T, lattice, max_iter, tol, std::move(trace));
}

PicardResult picard_zero(const InitialData& data, const ModelParams& params, double T, const Lattice& lattice,
                         int max_iter, double tol, const PicardOptions& opts) {
    if (!data.mean_zero()) throw std::invalid_argument("the perturbation scheme needs data with zero mean of g");
    params.validate();
    IterationTrace trace;
    trace.scheme = PicardScheme::ZeroMean;
    trace.M = data.data_size_M();
    trace.E = opts.E ? *opts.E : measure_E(data, params, T, std::max(lattice.dx, 0.05));
    trace.N = zero_mean_N(params, free_norms(data, lattice, T), trace.E);
    const double pw = std::min(params.p + params.q, params.r);
    trace.scale = trace.N * std::pow(data.eps, pw);
    trace.band = 5.0 * trace.scale;
    if (!(trace.scale > 0.0)) trace.scale = std::numeric_limits<double>::min();
    return iterate(data, params, T, lattice, max_iter, tol, std::move(trace));
}

FreeNorms free_norms(const InitialData& data, const Lattice& lat, double T) {
    const int nT = std::min(lat.n_steps, static_cast<int>(std::floor(T / lat.dx + 1e-9)));
    const FreeTable free(data, lat);
    FreeNorms fn;
    for (int n = 0; n <= nT; ++n) {
        const auto [lo, hi] = lat.cone_range(n, data.R, 1);
        for (int i = lo; i <= hi; ++i) {
            const FreeValues v = free.at(n, i);
            fn.u0 = std::max(fn.u0, std::abs(v.u0));
            fn.u0_t = std::max(fn.u0_t, std::abs(v.u0_t));
            fn.u0_x = std::max(fn.u0_x, std::abs(v.u0_x));
            fn.u0_tx = std::max(fn.u0_tx, std::abs(v.u0_tx));
        }
    }
    return fn;
}

double zero_mean_N(const ModelParams& m, const FreeNorms& fn, double E) {
    double a = 0.0, b = 0.0;
    for (int g = 0; g <= 1; ++g) {
        a += std::pow(fn.u0_t, m.p - g) * std::pow(fn.u0_tx, g) * std::pow(fn.u0, m.q) +
             std::pow(fn.u0_t, m.p) * std::pow(fn.u0, m.q - g) * std::pow(fn.u0_x, g);
        b += std::pow(2.0, m.r - g) * std::pow(fn.u0, m.r - g) * std::pow(fn.u0_x, g);
    }
    return std::pow(2.0, m.p + m.q - 1.0) * m.A * E * a + m.B * E * b;
}

double consistency_wu(const Field& field) {
    if (field.last_level < 2) throw std::invalid_argument("need at least three filled time levels");
    const Lattice& lat = field.lattice();
    const double h = lat.dx;
    double worst = 0.0;
    for (int n = 1; n < field.last_level; ++n) {
        for (int i = 0; i < lat.n_x(); ++i) {
            const double dt = (field.u.at(n + 1, i) - field.u.at(n - 1, i)) / (2.0 * h);
            worst = std::max(worst, std::abs(field.w.at(n, i) - dt));
        }
    }
    return worst;
}

void write_trace_csv(const std::string& path, const IterationTrace& trace) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << "j,d_j,rho_j,n1,n2,n3,n4\n" << std::setprecision(12);
    for (std::size_t k = 0; k < trace.d.size(); ++k) {
        out << k + 1 << ',' << trace.d[k] << ',';
        if (k < trace.rho.size()) out << trace.rho[k];
        out << ',';
        const NormReport& r = trace.reports[std::min(k, trace.reports.size() - 1)];
        out << r.n1 << ',' << r.n2 << ',' << r.n3 << ',' << r.n4 << '\n';
    }
}

// ---- a priori constants ----

namespace {

constexpr std::array<std::string_view, kAprioriKindCount> kKindNames = {
    "L-wu-1",      "L-ur-1",      "Lp-wu-2",     "Lp-ur-2",    "Lp-wu-1",     "Lp-ur-1",
    "lin-L-W-3",   "lin-L-U-3",   "lin-Lp-W-4",  "lin-Lp-U-4", "lin-Lp-W-3",  "lin-Lp-U-3",
    "zero-L-WU-3", "zero-L-Ur-3", "zero-Lp-WU-4", "zero-Lp-Ur-4", "zero-Lp-WU-3", "zero-Lp-Ur-3",
};

enum class Op { L, Lp };

struct KindSpec {
    Op op;
    NormKind lhs;
    // integrand: 0 = |w|^p|u|^q, 1 = |u|^r, 2 = |U0|^{q-m}|W|^m, 3 = |U0|^{p-m}|U|^m
    int integrand;
    NormKind nu;  // norm applied to u (or U)
    NormKind nw;  // norm applied to w (or W)
};

KindSpec spec_of(AprioriKind k) {
    using N = NormKind;
    switch (k) {
        case AprioriKind::L_wu_1: return {Op::L, N::N1, 0, N::N1, N::N2};
        case AprioriKind::L_ur_1: return {Op::L, N::N1, 1, N::N1, N::N2};
        case AprioriKind::Lp_wu_2: return {Op::Lp, N::N2, 0, N::N1, N::N2};
        case AprioriKind::Lp_ur_2: return {Op::Lp, N::N2, 1, N::N1, N::N2};
        case AprioriKind::Lp_wu_1: return {Op::Lp, N::N1, 0, N::N1, N::N2};
        case AprioriKind::Lp_ur_1: return {Op::Lp, N::N1, 1, N::N1, N::N2};
        case AprioriKind::Lin_L_W_3: return {Op::L, N::N3, 2, N::N3, N::N4};
        case AprioriKind::Lin_L_U_3: return {Op::L, N::N3, 3, N::N3, N::N4};
        case AprioriKind::Lin_Lp_W_4: return {Op::Lp, N::N4, 2, N::N3, N::N4};
        case AprioriKind::Lin_Lp_U_4: return {Op::Lp, N::N4, 3, N::N3, N::N4};
        case AprioriKind::Lin_Lp_W_3: return {Op::Lp, N::N3, 2, N::N3, N::N4};
        case AprioriKind::Lin_Lp_U_3: return {Op::Lp, N::N3, 3, N::N3, N::N4};
        case AprioriKind::Z_L_WU_3: return {Op::L, N::N3, 0, N::N3, N::N4};
        case AprioriKind::Z_L_Ur_3: return {Op::L, N::N3, 1, N::N3, N::N4};
        case AprioriKind::Z_Lp_WU_4: return {Op::Lp, N::N4, 0, N::N3, N::N4};
        case AprioriKind::Z_Lp_Ur_4: return {Op::Lp, N::N4, 1, N::N3, N::N4};
        case AprioriKind::Z_Lp_WU_3: return {Op::Lp, N::N3, 0, N::N3, N::N4};
        case AprioriKind::Z_Lp_Ur_3: return {Op::Lp, N::N3, 1, N::N3, N::N4};
    }
    throw std::invalid_argument("unknown a priori kind");
}

double sup_all(const LatticeArray& a, double T) {
    const Lattice& lat = a.lattice();
    double best = 0.0;
    for (int n = 0; n < a.rows() && lat.t(n) <= T + 1e-12; ++n)
        for (double v : a.row(n)) best = std::max(best, std::abs(v));
    return best;
}

double bump(double y) {
    if (std::abs(y) >= 1.0) return 0.0;
    const double s = 1.0 - y * y;
    return s * s * s;
}

// One random field: a bump riding with the cone plus a bump in the outgoing strip,
// each with a linear time profile.
struct TrialField {
    double a_cone, c, sigma, b_cone;
    double a_strip, b_strip;

    double operator()(double x, double t, double T, double R) const {
        const double y = (x / (t + R) - c) / sigma;
        const double cone = a_cone * bump(y) * (1.0 + b_cone * t / T);
        const double strip = a_strip * bump((std::abs(x) - t) / R) * (1.0 + b_strip * t / T);
        return cone + strip;
    }
};

TrialField random_trial(std::mt19937_64& rng, bool with_cone, bool with_strip) {
    std::uniform_real_distribution<double> amp(0.1, 1.0), unit(0.0, 1.0), centre(-0.5, 0.5);
    TrialField f{};
    f.a_cone = amp(rng);
    f.c = centre(rng);
    f.sigma = 0.2 + (0.8 - std::abs(f.c)) * unit(rng);
    f.b_cone = unit(rng);
    f.a_strip = amp(rng);
    f.b_strip = unit(rng);
    if (!with_cone) f.a_cone = 0.0;
    if (!with_strip) f.a_strip = 0.0;
    return f;
}

// Strip-supported profile for U0: vanishes unless t <= 2|x| and |x| - t in [-R, R].
struct StripField {
    double a, b;
    double operator()(double x, double t, double T, double R) const {
        if (t > 2.0 * std::abs(x)) return 0.0;
        return a * bump((std::abs(x) - t) / R) * (1.0 + b * t / T);
    }
};

LatticeArray tabulate(const Lattice& lat, int rows, double T, double R,
                      const std::function<double(double, double, double, double)>& fn) {
    LatticeArray out(lat, rows);
    for (int n = 0; n < rows; ++n) {
        const auto [lo, hi] = lat.cone_range(n, R, 0);
        for (int i = lo; i <= hi; ++i) {
            const double x = lat.x(i);
            const double t = lat.t(n);
            if (std::abs(x) > t + R) continue;
            out.at(n, i) = fn(x, t, T, R);
        }
    }
    return out;
}

}  // namespace

std::string_view to_string(AprioriKind k) noexcept { return kKindNames[static_cast<std::size_t>(k)]; }

AprioriKind apriori_kind_from_index(int i) {
    if (i < 0 || i >= kAprioriKindCount) throw std::out_of_range("a priori kind index out of range");
    return static_cast<AprioriKind>(i);
}

AprioriKind parse_apriori_kind(std::string_view name) {
    for (int i = 0; i < kAprioriKindCount; ++i)
        if (kKindNames[static_cast<std::size_t>(i)] == name) return static_cast<AprioriKind>(i);
    throw std::invalid_argument("unknown a priori kind: " + std::string(name));
}

double apriori_power(AprioriKind k, double p, double q, double r, int m) noexcept {
    const int idx = static_cast<int>(k);
    if (idx < 6) return (idx % 2 == 0) ? 1.0 : 2.0;
    if (idx < 12) return m;
    return (idx % 2 == 0) ? p + q : r + 1.0;
}

std::optional<double> apriori_ratio(AprioriKind kind, const LatticeArray& u, const LatticeArray& w,
                                    const LatticeArray& u0, double T, const AprioriExponents& ex) {
    const KindSpec ks = spec_of(kind);
    const Lattice& lat = u.lattice();
    const int nT = std::min(u.rows() - 1, static_cast<int>(std::floor(T / lat.dx + 1e-9)));
    const int rows = nT + 1;
    const double pm = ex.p - ex.m;
    const double qm = ex.q - ex.m;
    if ((ks.integrand >= 2) && (pm <= 0.0 || qm <= 0.0))
        throw std::invalid_argument("linear-type estimates need p - m, q - m > 0");

    LatticeArray v(lat, rows);
    for (int n = 0; n < rows; ++n) {
        for (int i = 0; i < lat.n_x(); ++i) {
            const double au = std::abs(u.at(n, i));
            const double aw = std::abs(w.at(n, i));
            double val = 0.0;
            switch (ks.integrand) {
                case 0: val = std::pow(aw, ex.p) * std::pow(au, ex.q); break;
                case 1: val = std::pow(au, ex.r); break;
                case 2: val = std::pow(std::abs(u0.at(n, i)), qm) * std::pow(aw, ex.m); break;
                case 3: val = std::pow(std::abs(u0.at(n, i)), pm) * std::pow(au, ex.m); break;
                default: break;
            }
            v.at(n, i) = val;
        }
    }
    const LatticeArray out = (ks.op == Op::L) ? apply_L(v) : apply_Lprime(v).lprime;
    const double lhs = weighted_sup(out, ks.lhs, ex.R, T);

    const double nu = weighted_sup(u, ks.nu, ex.R, T);
    const double nw = weighted_sup(w, ks.nw, ex.R, T);
    const double TR = T + ex.R;
    double rhs = 0.0;
    switch (ks.integrand) {
        case 0: rhs = std::pow(nw, ex.p) * std::pow(nu, ex.q); break;
        case 1: rhs = std::pow(nu, ex.r); break;
        case 2: rhs = std::pow(sup_all(u0, T), qm) * std::pow(nw, ex.m); break;
        case 3: rhs = std::pow(sup_all(u0, T), pm) * std::pow(nu, ex.m); break;
        default: break;
    }
    rhs *= std::pow(TR, apriori_power(kind, ex.p, ex.q, ex.r, ex.m));
    if (!(rhs > 0.0) || !std::isfinite(rhs)) return std::nullopt;
    return lhs / rhs;
}

double apriori_constant(AprioriKind kind, int trials, double T, std::uint64_t seed, const AprioriExponents& ex) {
    if (trials < 1) throw std::invalid_argument("need at least one trial");
    if (!(T > 0.0)) throw std::invalid_argument("T must be positive");
    const Lattice lat = Lattice::covering(ex.dx, T, ex.R);
    const int rows = lat.n_steps + 1;
    const double Tl = lat.horizon();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> amp(0.1, 1.0), unit(0.0, 1.0);
    double best = 0.0;
    for (int k = 0; k < trials; ++k) {
        // Alternate between cone-filling, strip-only and mixed fields.
        const int shape = k % 3;
        const TrialField fu = random_trial(rng, shape != 1, shape != 0);
        const TrialField fw = random_trial(rng, shape != 1, shape != 0);
        const StripField f0{amp(rng), unit(rng)};
        // Divide by the norm weight so that the trial can saturate the weighted sup.
        const KindSpec ks = spec_of(kind);
        const LatticeArray u = tabulate(lat, rows, Tl, ex.R, [&](double x, double t, double T, double R) {
            return fu(x, t, T, R) / norm_weight(ks.nu, x, t, R);
        });
        const LatticeArray w = tabulate(lat, rows, Tl, ex.R, [&](double x, double t, double T, double R) {
            return fw(x, t, T, R) / norm_weight(ks.nw, x, t, R);
        });
        const LatticeArray u0 = tabulate(lat, rows, Tl, ex.R, f0);
        if (const auto r = apriori_ratio(kind, u, w, u0, Tl, ex)) best = std::max(best, *r);
    }
    return best;
}

double measure_E(const InitialData& data, const ModelParams& params, double T, double dx, std::uint64_t seed) {
    const Lattice lat = Lattice::covering(dx, T, data.R);
    const int rows = lat.n_steps + 1;
    const double Tl = lat.horizon();
    const FreeTable free(data, lat);
    std::array<LatticeArray, 4> profiles{LatticeArray(lat, rows), LatticeArray(lat, rows), LatticeArray(lat, rows),
                                         LatticeArray(lat, rows)};
    for (int n = 0; n < rows; ++n) {
        for (int i = 0; i < lat.n_x(); ++i) {
            const FreeValues v = free.at(n, i);
            profiles[0].at(n, i) = v.u0;
            profiles[1].at(n, i) = v.u0_t;
            profiles[2].at(n, i) = v.u0_x;
            profiles[3].at(n, i) = v.u0_tx;
        }
    }
    std::mt19937_64 rng(seed);
    double best = 0.0;
    for (int m = 0; m <= 1; ++m) {
        AprioriExponents ex{params.p, params.q, params.r, m, data.R, dx};
        for (int trial = 0; trial < 2; ++trial) {
            const TrialField fu = random_trial(rng, true, trial == 1);
            const TrialField fw = random_trial(rng, true, trial == 1);
            const LatticeArray U = tabulate(lat, rows, Tl, data.R, fu);
            const LatticeArray W = tabulate(lat, rows, Tl, data.R, fw);
            for (const auto& u0 : profiles) {
                for (int k = 6; k < 12; ++k) {
                    if (const auto r = apriori_ratio(static_cast<AprioriKind>(k), U, W, u0, Tl, ex))
                        best = std::max(best, *r);
                }
            }
        }
    }
    return best;
}

}  // namespace wavelife
