// Acceptance run: one PASS/FAIL line per criterion, exit 0 only if all pass.
#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "wavelife/blowup.hpp"
#include "wavelife/cli.hpp"
#include "wavelife/norms.hpp"
#include "wavelife/operators.hpp"
#include "wavelife/picard.hpp"
#include "wavelife/solver.hpp"

using namespace wavelife;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;
constexpr double kInf = std::numeric_limits<double>::infinity();

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void report(const std::string& id, const std::string& title, const std::function<Outcome()>& body) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f s", seconds_since(t0));
    std::cout << (o.pass ? "PASS " : "FAIL ") << id << ' ' << title << " | " << o.detail << " (" << buf << ")"
              << std::endl;
}

std::string fmt(double v, int prec = 4) {
    std::ostringstream os;
    os.precision(prec);
    os << v;
    return os.str();
}

// ---- 1 ----
Outcome exponent_algebra() {
    const auto t0 = Clock::now();
    struct Row {
        ModelParams m;
        bool zero;
        double k;
    };
    // one row per branch: nonzero mean with either term smaller, zero mean in
    // each of the three regimes (and at both boundaries)
    const Row rows[] = {
        {{2, 2, 6, 1, 1}, false, 2.5},           // min(p+q-1, (r-1)/2) = (r-1)/2
        {{1.2, 1.2, 6, 1, 1}, false, 1.4},       // = p+q-1
        {{2, 2, 6, 1, 1}, true, 20.0 / 7.0},     // combined
        {{2, 2, 3, 1, 1}, true, 1.5},            // p+q >= r: r(r-1)/(r+1)
        {{1.2, 1.2, 6, 1, 1}, true, 1.4},        // p+q <= (r+1)/2: p+q-1
        {{2, 2, 7, 1, 1}, true, 3.0},            // boundary (r+1)/2
        {{2, 2, 4, 1, 1}, true, 2.4},            // boundary r
    };
    double worst = 0.0;
    for (const auto& r : rows) worst = std::max(worst, std::abs(lifespan_exponent(r.m, r.zero).exponent_k - r.k));
    const double k = lifespan_exponent({2, 2, 6, 1, 1}, true).exponent_k;
    const double g = general_theory_exponent({2, 2, 6, 1, 1}, true).exponent_k;
    const double us = seconds_since(t0) * 1e6;
    const bool ok = worst <= 1e-15 && k == 20.0 / 7.0 && g == 2.5 && k > g && us < 1000.0;
    return {ok, "max branch error " + fmt(worst) + ", k(2,2,6) = " + fmt(k, 10) + " > " + fmt(g) + ", " + fmt(us, 3) +
                    " us"};
}

// ---- 2 ----
Outcome huygens() {
    const auto t0 = Clock::now();
    const InitialData d = make_data(DataFamily::Dipole, 1.0, 1.0);
    const double scale = d.f.sup_norm(0);
    const auto h = huygens_residual(d, 20.0, 0.02);
    const double s = seconds_since(t0);
    return {h.residual <= 1e-14 * scale && s < 1.0, "max |u0| on D up to t = 20: " + fmt(h.residual) +
                                                          " (bound " + fmt(1e-14 * scale) + ")"};
}

// ---- 3 ----
template <class Fn>
double max_err(const LatticeArray& a, double T, double X, Fn exact) {
    const Lattice& lat = a.lattice();
    double e = 0.0;
    for (int n = 0; n < a.rows() && lat.t(n) <= T + 1e-12; ++n)
        for (int i = 0; i < lat.n_x(); ++i)
            if (std::abs(lat.x(i)) <= X + 1e-12) e = std::max(e, std::abs(a.at(n, i) - exact(lat.x(i), lat.t(n))));
    return e;
}

Outcome operators() {
    const auto t0 = Clock::now();
    // wide enough that every backward triangle with |x| <= 2, t <= 3 is sampled
    const Lattice lat = Lattice::covering(0.02, 3.0, 2.0);
    const auto one = sample(lat, [](double, double) { return 1.0; });
    const auto P = apply_Lprime(one);
    const double e1 = std::max({max_err(apply_L(one), 3.0, 2.0, [](double, double t) { return t * t / 2; }),
                                max_err(P.lprime, 3.0, 2.0, [](double, double t) { return t; }),
                                max_err(P.lbar, 3.0, 2.0, [](double, double) { return 0.0; })});

    // L, L' on cos y cos s; Lbar' on y^2 s (for even-in-y integrands it is exact)
    auto errs = [](double dx) {
        const Lattice l = Lattice::covering(dx, 2.0, 1.0);
        const auto c = sample(l, [](double y, double s) { return std::cos(y) * std::cos(s); });
        const auto v = sample(l, [](double y, double s) { return y * y * s; });
        const auto Pc = apply_Lprime(c);
        return std::array<double, 3>{
            max_err(apply_L(c), 2.0, 1.0, [](double x, double t) { return 0.5 * std::cos(x) * t * std::sin(t); }),
            max_err(Pc.lprime, 2.0, 1.0, [](double x, double t) { return 0.5 * std::cos(x) * (std::sin(t) + t * std::cos(t)); }),
            max_err(apply_Lprime(v).lbar, 2.0, 1.0, [](double x, double t) { return t * t * t * x / 3; })};
    };
    const auto c = errs(0.04), f = errs(0.02);
    double order = kInf;
    for (int k = 0; k < 3; ++k) order = std::min(order, std::log2(c[k] / f[k]));
    const double s = seconds_since(t0);
    return {e1 <= 1e-12 && order >= 1.9 && s < 10.0,
            "identity error " + fmt(e1) + ", min observed order " + fmt(order)};
}

// ---- 4 ----
bool converges(const std::function<PicardResult(double)>& run, double eps) {
    try {
        return run(eps).trace.converged;
    } catch (const DivergenceError&) {
        return false;
    }
}

// Bisection in log eps between a converging and a failing amplitude.
double boundary(const std::function<PicardResult(double)>& run, double lo, double hi) {
    while (!converges(run, lo)) lo /= 2;
    while (converges(run, hi)) hi *= 2;
    for (int k = 0; k < 8; ++k) {
        const double mid = std::sqrt(lo * hi);
        (converges(run, mid) ? lo : hi) = mid;
    }
    return lo;
}

Outcome picard_case(bool zero) {
    const ModelParams m{1.5, 1.5, 3.0, 1.0, 1.0};
    const double T = zero ? 4.0 : 5.0;
    const Lattice lat = Lattice::covering(0.02, T, 1.0);
    const InitialData base = make_data(zero ? DataFamily::Dipole : DataFamily::Bump, 1.0, 1.0);
    PicardOptions opts;
    if (zero) opts.E = measure_E(base, m, T, 0.05);
    auto run = [&](double eps) {
        InitialData d = base;
        d.eps = eps;
        return zero ? picard_zero(d, m, T, lat, 60, 1e-10, opts) : picard_nonzero(d, m, T, lat);
    };
    const double eb = boundary(run, 0.5, 1.0);
    const double eps = 0.5 * eb;
    const auto res = run(eps);
    const auto& tr = res.trace;
    const double k = lifespan_exponent(m, zero).exponent_k;
    const double rho = tr.max_rho(zero ? 2 : 1);
    const bool ok = tr.converged && rho <= 0.55 && tr.max_iterate_norm() <= tr.band;
    return {ok, std::string(zero ? "zero-mean" : "nonzero-mean") + " T = " + fmt(T) + ", boundary eps " + fmt(eb) +
                    ", run at eps " + fmt(eps) + " (c = T eps^k = " + fmt(T * std::pow(eps, k)) + "), max rho " +
                    fmt(rho) + ", max norm " + fmt(tr.max_iterate_norm()) + " <= band " + fmt(tr.band) + ", " +
                    std::to_string(tr.iterations) + " iterations"};
}

// ---- 5 ----
SweepResult sweep(ModelParams m, DataFamily fam, double eps_max, double ratio, int count) {
    SweepConfig c;
    c.params = m;
    c.family = fam;
    c.eps_max = eps_max;
    c.eps_ratio = ratio;
    c.eps_count = count;
    c.dx = 0.02;
    c.R = 1.0;
    c.fit_first = 1;
    return run_sweep(c);
}

std::string describe(const SweepResult& r) {
    if (!r.fitted()) return "fit refused: " + r.fit_error;
    double Tmax = 0.0;
    for (const auto& m : r.rows) Tmax = std::max(Tmax, m.T_num);
    return "k = " + fmt(r.fit.k()) + " +- " + fmt(r.fit.stderr_slope, 2) + " vs " + fmt(r.fit.k_theory) +
           " (rel " + fmt(r.fit.rel_err, 3) + "), largest T " + fmt(Tmax);
}

bool within_budget(const SweepResult& r) {
    for (const auto& m : r.rows)
        if (!(m.T_num <= 2000.0)) return false;
    return true;
}

Outcome slope_case(const ModelParams& m, DataFamily fam, double eps_max, double ratio) {
    const auto t0 = Clock::now();
    const auto r = sweep(m, fam, eps_max, ratio, 5);
    const double s = seconds_since(t0);
    return {r.fitted() && r.fit.rel_err <= 0.15 && within_budget(r) && s <= 600.0, describe(r)};
}

Outcome combined_case() {
    // p+q = 2.2 lies strictly between (r+1)/2 = 1.7 and r = 2.4
    const ModelParams both{1.1, 1.1, 2.4, 1.0, 1.0};
    ModelParams deriv = both;
    deriv.B = 0.0;
    auto t0 = Clock::now();
    const auto rc = sweep(both, DataFamily::BlowupSeed, 0.25, 0.5, 5);
    const double sc = seconds_since(t0);
    t0 = Clock::now();
    const auto rd = sweep(deriv, DataFamily::BlowupSeed, 0.25, 0.5, 5);
    const double sd = seconds_since(t0);
    const bool fitted = rc.fitted() && rd.fitted();
    const double below = fitted ? 1.0 - rc.fit.k() / rd.fit.k() : 0.0;
    const bool ok = fitted && rc.fit.rel_err <= 0.15 && below >= 0.10 && within_budget(rc) && within_budget(rd) &&
                    sc <= 600.0 && sd <= 600.0;
    return {ok, "combined " + describe(rc) + "; B = 0 " + describe(rd) + "; combined " + fmt(100 * below, 3) +
                    "% below"};
}

// ---- 6 ----
Outcome blowup_oracles() {
    const auto t0 = Clock::now();
    std::vector<std::string> bad;
    double seq = 0.0;
    for (const double p : {1.1, 1.5, 2.0, 3.0})
        for (const double q : {1.2, 2.0}) seq = std::max(seq, sequences({p, q, 3, 1, 1}, 60).closed_form_error);
    if (seq > 1e-12) bad.push_back("a_n");
    double sr = 0.0;
    for (double r = 1.2; r < 10.0; r += 0.35) sr = std::max(sr, std::abs(S_series(r, 6000) / S_closed(r) - 1.0));
    if (sr > 1e-12) bad.push_back("S_r");
    double zs = 0.0;
    const InitialData seed1 = make_data(DataFamily::BlowupSeed, 1.0, 1.0);
    for (const double s : {2.2, 3.0, 4.5}) {
        std::vector<double> es, ts;
        for (int k = 0; k < 6; ++k) {
            es.push_back(1e-12 * std::pow(0.5, k));
            ts.push_back(z_root_on_ray({s / 2, s / 2, 3, 1, 0}, seed1, es.back()));
        }
        zs = std::max(zs, std::abs(fit_power_law(es, ts, s - 1).slope + (s - 1)));
    }
    if (zs > 1e-6) bad.push_back("Z root");

    // inequality residuals on accepted, pre-blow-up runs at dx = 0.02
    const ModelParams mb{1.5, 1.5, 3.0, 1.0, 1.0};
    const InitialData sd = make_data(DataFamily::BlowupSeed, 1.0, 0.3);
    const auto meas = measure_lifespan(sd, mb, sd.eps, default_threshold(sd), 0.02);
    const double Tr = std::min(6.0, 0.5 * meas.T_num);
    const Lattice ls = Lattice::covering(0.02, Tr + 0.04, 1.0);
    const auto ev = evolve(sd, mb, ls, Tr, kInf, EvolveOptions{true});
    const double first = check_pointwise_seed(*ev.field, sd, sd.eps);
    const auto F = f_functional_checks(*ev.field, sd, mb, sd.eps);
    if (!meas.accepted) bad.push_back("seed run not accepted");
    if (first < -1e-6 * 0.5 * sd.f0 * sd.eps) bad.push_back("(seed)");
    if (F.odi_skipped || F.odi_residual < -1e-6 * F.odi_scale) bad.push_back("(ODI)");
    if (F.initial_skipped || F.initial_residual < -1e-6 * F.initial_scale) bad.push_back("(initial)");

    const ModelParams md{1.5, 1.5, 3.0, 1.0, 0.0};
    const InitialData bd = make_data(DataFamily::Bump, 1.0, 0.3);
    const auto mz = measure_lifespan(bd, md, bd.eps, default_threshold(bd), 0.02);
    const double Tz = std::min(10.0, 0.5 * mz.T_num);
    const Lattice lz = Lattice::covering(0.02, Tz + 0.04, 1.0);
    const auto ez = evolve(bd, md, lz, Tz, kInf, EvolveOptions{true});
    const auto Z = characteristic_inequality(*ez.field, bd, md, bd.eps);
    if (!mz.accepted) bad.push_back("characteristic run not accepted");
    if (Z.residual < -1e-6 * Z.scale) bad.push_back("(characteristic)");

    const double s = seconds_since(t0);
    if (s >= 120.0) bad.push_back("time");
    std::string failed;
    for (const auto& b : bad) failed += " " + b;
    return {bad.empty(), "a_n err " + fmt(seq, 2) + ", S_r err " + fmt(sr, 2) + ", Z slope err " + fmt(zs, 2) +
                             ", seed " + fmt(first) + ", ODI " + fmt(F.odi_residual) + ", initial " +
                             fmt(F.initial_residual) + ", characteristic " + fmt(Z.residual) +
                             (failed.empty() ? "" : "; failed:" + failed)};
}

// ---- 7 ----
std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome determinism() {
    const fs::path root = fs::temp_directory_path() / "wavelife_acceptance_det";
    fs::remove_all(root);
    std::string outs[2];
    for (int k = 0; k < 2; ++k) {
        const fs::path dir = root / std::to_string(k);
        const std::string cmd = std::string(WAVELIFE_CLI) +
                                " sweep --A 1 --B 0 --p 1.5 --q 1.5 --family bump --eps-max 0.5 --eps-ratio 0.8"
                                " --eps-count 5 --dx 0.04 --seed 3 --threads " + std::to_string(k == 0 ? 1 : 3) +
                                " --out " + dir.string() + " > /dev/null";
        if (std::system(cmd.c_str()) != 0) return {false, "sweep command failed"};
        outs[k] = slurp(dir / "sweep.csv") + slurp(dir / "fit.txt") + slurp(dir / "plot.dat");
    }
    fs::remove_all(root);
    const bool same = !outs[0].empty() && outs[0] == outs[1];
    return {same, same ? "two sweeps, " + std::to_string(outs[0].size()) + " identical bytes" : "outputs differ"};
}

}  // namespace

int main() {
    report("1", "exponent algebra", exponent_algebra);
    report("2", "strong Huygens principle", huygens);
    report("3", "operator identities and order", operators);
    report("4", "Picard contraction (nonzero mean)", [] { return picard_case(false); });
    report("4", "Picard contraction (zero mean)", [] { return picard_case(true); });
    report("5a", "lifespan slope, |u_t|^p|u|^q only",
           [] { return slope_case({1.5, 1.5, 3.0, 1.0, 0.0}, DataFamily::Bump, 0.3, 0.8); });
    report("5b", "lifespan slope, |u|^r only, zero mean",
           [] { return slope_case({1.5, 1.5, 3.0, 0.0, 1.0}, DataFamily::BlowupSeed, 0.35, 0.7); });
    report("5c", "lifespan slope, combined regime, zero mean", combined_case);
    report("6", "blow-up machinery oracles", blowup_oracles);
    report("7", "sweep determinism", determinism);
    std::cout << (failures == 0 ? "all criteria pass" : std::to_string(failures) + " criteria failed") << std::endl;
    return failures == 0 ? 0 : 1;
}
