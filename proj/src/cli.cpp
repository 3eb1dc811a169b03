#include "wavelife/cli.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "wavelife/norms.hpp"
#include "wavelife/operators.hpp"
#include "wavelife/picard.hpp"

namespace wavelife {

FitResult fit_power_law(const std::vector<double>& eps, const std::vector<double>& T, double k_theory) {
    if (eps.size() != T.size()) throw std::invalid_argument("eps and T differ in length");
    const std::size_t n = eps.size();
    if (n < 4) throw FitRefused("fit needs at least 4 accepted points, got " + std::to_string(n));
    double sx = 0, sy = 0;
    for (std::size_t k = 0; k < n; ++k) {
        if (!(eps[k] > 0.0) || !(T[k] > 0.0) || !std::isfinite(T[k]))
            throw FitRefused("fit needs positive finite eps and T");
        sx += std::log(eps[k]);
        sy += std::log(T[k]);
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < n; ++k) {
        const double dx = std::log(eps[k]) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(T[k]) - my);
    }
    if (!(sxx > 0.0)) throw FitRefused("fit needs at least two distinct eps");
    FitResult fr;
    fr.slope = sxy / sxx;
    fr.intercept = my - fr.slope * mx;
    double ss = 0;
    for (std::size_t k = 0; k < n; ++k) {
        const double e = std::log(T[k]) - (fr.intercept + fr.slope * std::log(eps[k]));
        ss += e * e;
    }
    fr.stderr_slope = std::sqrt(ss / static_cast<double>(n - 2) / sxx);
    fr.k_theory = k_theory;
    fr.rel_err = std::abs(fr.slope + k_theory) / k_theory;
    fr.n_points = static_cast<int>(n);
    return fr;
}

void SweepConfig::validate() const {
    params.validate();
    if (!(eps_max > 0.0)) throw std::invalid_argument("eps-max must be positive");
    if (!(eps_ratio > 0.0 && eps_ratio < 1.0)) throw std::invalid_argument("eps-ratio must lie in (0, 1)");
    if (eps_count < 4) throw std::invalid_argument("eps-count must be at least 4 for fitting");
    if (!(dx > 0.0)) throw std::invalid_argument("dx must be positive");
    if (!(tol_refine > 0.0)) throw std::invalid_argument("refinement tolerance must be positive");
    if (!(R >= 1.0)) throw std::invalid_argument("support radius must be >= 1");
    const int last = fit_last < 0 ? eps_count : fit_last;
    if (fit_first < 0 || last > eps_count || last - fit_first < 4)
        throw std::invalid_argument("fit window must hold at least 4 grid points");
}

std::vector<double> SweepConfig::eps_grid() const {
    std::vector<double> out;
    double e = eps_max;
    for (int k = 0; k < eps_count; ++k) {
        out.push_back(e);
        e *= eps_ratio;
    }
    return out;
}

SweepResult run_sweep(const SweepConfig& cfg) {
    cfg.validate();
    const std::vector<double> grid = cfg.eps_grid();
    const InitialData base = make_data(cfg.family, cfg.R, 1.0);
    SweepResult res;
    res.rows.resize(grid.size());

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next++; k < grid.size(); k = next++) {
            InitialData d = base;
            d.eps = grid[k];
            const double th = cfg.threshold > 0.0 ? cfg.threshold : default_threshold(d);
            res.rows[k] = measure_lifespan(base, cfg.params, grid[k], th, cfg.dx, cfg.tol_refine, cfg.T_max);
        }
    };
    unsigned n_threads = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads) : std::thread::hardware_concurrency();
    n_threads = std::clamp(n_threads, 1u, static_cast<unsigned>(grid.size()));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < n_threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    const int last = cfg.fit_last < 0 ? cfg.eps_count : cfg.fit_last;
    std::vector<double> fe, fT;
    std::ostringstream rejected;
    for (int k = cfg.fit_first; k < last; ++k) {
        const auto& m = res.rows[static_cast<std::size_t>(k)];
        if (m.accepted) {
            fe.push_back(m.eps);
            fT.push_back(m.T_num);
        } else {
            rejected << " eps=" << m.eps << (std::isfinite(m.T_num) ? " rel_change=" + std::to_string(m.rel_change)
                                                                     : std::string(" no crossing"));
        }
    }
    const double k_theory = expected_exponent(cfg.params, make_data(cfg.family, cfg.R, 1.0).mean_zero());
    try {
        res.fit = fit_power_law(fe, fT, k_theory);
    } catch (const FitRefused& e) {
        res.fit.k_theory = k_theory;
        res.fit_error = std::string(e.what()) + (rejected.str().empty() ? "" : "; rejected:" + rejected.str());
    }
    if (!cfg.out_dir.empty()) write_sweep_outputs(cfg, res);
    return res;
}

void write_sweep_outputs(const SweepConfig& cfg, const SweepResult& res) {
    namespace fs = std::filesystem;
    const fs::path dir(cfg.out_dir);
    fs::create_directories(dir);
    const fs::path csv = dir / "sweep.csv";
    fs::remove(csv);
    for (const auto& m : res.rows) append_sweep_row(csv.string(), m);

    std::ofstream fit(dir / "fit.txt");
    fit << std::setprecision(10);
    if (res.fitted()) {
        fit << "slope " << res.fit.slope << '\n'
            << "stderr " << res.fit.stderr_slope << '\n'
            << "k_theory " << res.fit.k_theory << '\n'
            << "rel_err " << res.fit.rel_err << '\n'
            << "intercept " << res.fit.intercept << '\n'
            << "points " << res.fit.n_points << '\n';
    } else {
        fit << "fit refused: " << res.fit_error << '\n' << "k_theory " << res.fit.k_theory << '\n';
    }
    fit << "seed " << cfg.seed << '\n';

    std::ofstream plot(dir / "plot.dat");
    plot << "# eps T_num (accepted measurements)\n";
    if (res.fitted())
        plot << "# fit: T = exp(" << std::setprecision(10) << res.fit.intercept << ") * eps^(" << res.fit.slope
             << ")\n";
    plot << std::setprecision(17);
    for (const auto& m : res.rows)
        if (m.accepted) plot << m.eps << ' ' << m.T_num << '\n';
}

// ---- verification suites ----

Suite parse_suite(const std::string& name) {
    if (name == "operators") return Suite::Operators;
    if (name == "huygens") return Suite::Huygens;
    if (name == "picard") return Suite::Picard;
    if (name == "blowup") return Suite::Blowup;
    if (name == "solver-order") return Suite::SolverOrder;
    throw std::invalid_argument("unknown suite: " + name);
}

std::string to_string(Suite s) {
    switch (s) {
        case Suite::Operators: return "operators";
        case Suite::Huygens: return "huygens";
        case Suite::Picard: return "picard";
        case Suite::Blowup: return "blowup";
        case Suite::SolverOrder: return "solver-order";
    }
    return "?";
}

bool VerifyReport::pass() const noexcept {
    return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const CheckRow& c) { return c.pass; });
}

std::string VerifyReport::to_json() const {
    nlohmann::json j;
    j["suite"] = suite;
    j["pass"] = pass();
    j["seconds"] = seconds;
    j["checks"] = nlohmann::json::array();
    for (const auto& c : checks)
        j["checks"].push_back({{"name", c.name}, {"residual", c.residual}, {"tolerance", c.tolerance}, {"pass", c.pass}});
    return j.dump(2);
}

namespace {

// residual <= tolerance
CheckRow at_most(std::string name, double residual, double tol) {
    return {std::move(name), residual, tol, std::isfinite(residual) && residual <= tol};
}
// residual >= -tolerance
CheckRow at_least(std::string name, double residual, double tol) {
    return {std::move(name), residual, tol, std::isfinite(residual) && residual >= -tol};
}

template <class Fn>
double max_error(const LatticeArray& a, double Tw, double Xw, Fn exact) {
    const Lattice& lat = a.lattice();
    double e = 0.0;
    for (int n = 0; n < a.rows() && lat.t(n) <= Tw + 1e-12; ++n)
        for (int i = 0; i < lat.n_x(); ++i)
            if (std::abs(lat.x(i)) <= Xw + 1e-12) e = std::max(e, std::abs(a.at(n, i) - exact(lat.x(i), lat.t(n))));
    return e;
}

void suite_operators(VerifyReport& rep) {
    const Lattice lat = Lattice::covering(0.05, 2.0, 1.0);
    const LatticeArray one = sample(lat, [](double, double) { return 1.0; });
    const LatticeArray lin = sample(lat, [](double, double s) { return s; });
    const auto Lone = apply_L(one);
    const auto Pone = apply_Lprime(one);
    rep.checks.push_back(at_most("L(1)=t^2/2", max_error(Lone, 2.0, 1.0, [](double, double t) { return t * t / 2; }), 1e-13));
    rep.checks.push_back(at_most("L'(1)=t", max_error(Pone.lprime, 2.0, 1.0, [](double, double t) { return t; }), 1e-13));
    rep.checks.push_back(at_most("Lbar'(1)=0", max_error(Pone.lbar, 2.0, 1.0, [](double, double) { return 0.0; }), 1e-13));
    rep.checks.push_back(at_most("L(s)=t^3/6", max_error(apply_L(lin), 2.0, 1.0, [](double, double t) { return t * t * t / 6; }), 1e-13));

    auto errs = [](double dx) {
        const Lattice l = Lattice::covering(dx, 2.0, 1.0);
        const LatticeArray v = sample(l, [](double y, double s) { return y * y * s; });
        const auto L = apply_L(v);
        const auto P = apply_Lprime(v);
        return std::array<double, 3>{
            max_error(L, 2.0, 1.0, [](double x, double t) { return std::pow(t, 5) / 60 + t * t * t * x * x / 6; }),
            max_error(P.lprime, 2.0, 1.0, [](double x, double t) { return std::pow(t, 4) / 12 + t * t * x * x / 2; }),
            max_error(P.lbar, 2.0, 1.0, [](double x, double t) { return t * t * t * x / 3; })};
    };
    const auto coarse = errs(0.04);
    const auto fine = errs(0.02);
    const char* names[3] = {"order L", "order L'", "order Lbar'"};
    for (int k = 0; k < 3; ++k)
        rep.checks.push_back(at_least(names[k], std::log2(coarse[static_cast<std::size_t>(k)] / fine[static_cast<std::size_t>(k)]) - 1.9, 0.0));
}

void suite_huygens(VerifyReport& rep) {
    const InitialData d = make_data(DataFamily::Dipole, 1.0, 1.0);
    const auto h = huygens_residual(d, 10.0, 0.02);
    rep.checks.push_back(at_most("dipole residual", h.residual, 1e-14 * d.f.sup_norm(0)));
    const auto b = huygens_residual(make_data(DataFamily::Bump, 1.0, 1.0), 4.0, 0.02);
    rep.checks.push_back({"bump flagged nonzero mean", b.residual, 0.0, b.flagged_nonzero_mean && b.residual > 0.0});
}

void suite_picard(VerifyReport& rep) {
    const ModelParams m{1.5, 1.5, 3.0, 1.0, 1.0};
    const Lattice lat = Lattice::covering(0.02, 4.0, 1.0);
    {
        const InitialData d = make_data(DataFamily::Bump, 1.0, 0.05);
        const auto lin = picard_nonzero(d, ModelParams{1.5, 1.5, 3.0, 0.0, 0.0}, 4.0, lat);
        rep.checks.push_back(at_most("linear d_1", lin.trace.d.front(), 0.0));
        const auto res = picard_nonzero(d, m, 4.0, lat);
        rep.checks.push_back({"nonzero converged", res.trace.d.back(), res.trace.tol * res.trace.scale, res.trace.converged});
        rep.checks.push_back(at_most("nonzero max rho", res.trace.max_rho(1), 0.5));
        rep.checks.push_back(at_most("nonzero band 3M eps", res.trace.max_iterate_norm(), res.trace.band));
        rep.checks.push_back(at_most("w = u_t (dx^2)", consistency_wu(res.field), 10.0 * lat.dx * lat.dx * d.data_size_M() * d.eps));
    }
    {
        const InitialData d = make_data(DataFamily::Dipole, 1.0, 0.05);
        const auto z = picard_zero(d, m, 4.0, lat);
        const auto nz = picard_nonzero(d, m, 4.0, lat);
        rep.checks.push_back({"zero-mean converged", z.trace.d.back(), z.trace.tol * z.trace.scale, z.trace.converged});
        rep.checks.push_back(at_most("zero-mean max rho (j>=2)", z.trace.max_rho(2), 0.5));
        rep.checks.push_back(at_most("zero-mean band 5N eps^min", z.trace.max_iterate_norm(), z.trace.band));
        double diff = 0.0;
        for (std::size_t k = 0; k < z.field.u.raw().size(); ++k)
            diff = std::max(diff, std::abs(z.field.u.raw()[k] - nz.field.u.raw()[k]));
        rep.checks.push_back(at_most("schemes agree", diff, 1e-9 * d.eps));
    }
    {
        bool diverged = false;
        try {
            (void)picard_nonzero(make_data(DataFamily::Bump, 1.0, 5.0), m, 4.0, lat);
        } catch (const DivergenceError&) {
            diverged = true;
        }
        rep.checks.push_back({"large eps diverges", 0.0, 0.0, diverged});
    }
}

void suite_blowup(VerifyReport& rep) {
    for (const double p : {1.5, 2.0, 3.0}) {
        const ModelParams m{p, p, 3.0, 1.0, 1.0};
        const auto seq = sequences(m, 60);
        rep.checks.push_back(at_most("a_n closed form p=q=" + std::to_string(p).substr(0, 3), seq.closed_form_error, 1e-12));
        rep.checks.push_back(at_most("b_n+c_n=a_n p=q=" + std::to_string(p).substr(0, 3), seq.sum_identity_error, 1e-12));
    }
    {
        const auto seq = sequences(ModelParams{2.0, 2.0, 3.0, 1.0, 1.0}, 3);
        const double e = std::abs(seq.a[0]) + std::abs(seq.a[1] - 1.0) + std::abs(seq.a[2] - 5.0);
        rep.checks.push_back(at_most("a_1..a_3 = 0,1,5", e, 0.0));
    }
    double s_err = 0.0;
    for (const double r : {1.5, 2.0, 3.0, 6.0})
        s_err = std::max(s_err, std::abs(S_series(r, 4000) - S_closed(r)) / S_closed(r));
    rep.checks.push_back(at_most("S_r closed form", s_err, 1e-12));

    const InitialData seed = make_data(DataFamily::BlowupSeed, 1.0, 1.0);
    for (const double s : {2.2, 3.0, 4.0}) {
        const ModelParams m{s / 2, s / 2, 3.0, 1.0, 0.0};
        std::vector<double> es, ts;
        for (int k = 0; k < 6; ++k) {
            const double e = 1e-12 * std::pow(0.5, k);
            es.push_back(e);
            ts.push_back(z_root_on_ray(m, seed, e));
        }
        const FitResult f = fit_power_law(es, ts, s - 1.0);
        rep.checks.push_back(at_most("Z-root slope p+q=" + std::to_string(s).substr(0, 3), std::abs(f.slope + (s - 1.0)), 1e-6));
    }
    rep.checks.push_back(at_most("C41(2,1,1,1)=256", std::abs(C41(2.0, 1.0, 1.0, 1.0) - 256.0), 1e-12));
    rep.checks.push_back(at_most("x* example = 11", std::abs(comparison_x_star(1.0, 1.0, 2.0, 0.1, 1.0) - 11.0), 1e-12));

    const ModelParams m{1.5, 1.5, 3.0, 1.0, 1.0};
    const InitialData d = make_data(DataFamily::BlowupSeed, 1.0, 0.3);
    const Lattice lat = Lattice::covering(0.02, 4.0, 1.0);
    const auto ev = evolve(d, m, lat, 3.0, std::numeric_limits<double>::infinity(), EvolveOptions{true});
    rep.checks.push_back(at_least("seed bound on Σ", check_pointwise_seed(*ev.field, d, d.eps), 1e-12));
    const auto F = f_functional_checks(*ev.field, d, m, d.eps);
    rep.checks.push_back(at_least("ODI", F.odi_residual, 1e-6 * F.odi_scale));
    rep.checks.push_back(at_least("initial growth", F.initial_residual, 1e-6 * F.initial_scale));
}

// Max difference on the coarse lattice between runs at dx and dx/2.
double level_difference(const Field& a, const Field& b, int n_a) {
    const Lattice& la = a.lattice();
    const Lattice& lb = b.lattice();
    double e = 0.0;
    for (int i = 0; i < la.n_x(); ++i) {
        const int j = lb.half_cells + 2 * (i - la.half_cells);
        if (j < 0 || j >= lb.n_x()) continue;
        e = std::max(e, std::abs(a.u.at(n_a, i) - b.u.at(2 * n_a, j)));
    }
    return e;
}

void suite_solver_order(VerifyReport& rep) {
    struct Case {
        const char* name;
        ModelParams m;
        DataFamily fam;
    };
    const Case cases[] = {{"order |u|^r", {1.5, 1.5, 3.0, 0.0, 1.0}, DataFamily::BlowupSeed},
                          {"order |u_t|^p|u|^q", {1.5, 1.5, 3.0, 1.0, 0.0}, DataFamily::Bump}};
    const double T = 2.0;
    for (const auto& c : cases) {
        const InitialData d = make_data(c.fam, 1.0, 0.5);
        std::vector<Field> runs;
        for (const double dx : {0.04, 0.02, 0.01}) {
            const Lattice lat = Lattice::covering(dx, T + 2 * dx, 1.0);
            runs.push_back(*evolve(d, c.m, lat, T, std::numeric_limits<double>::infinity(), EvolveOptions{true}).field);
        }
        const int n0 = static_cast<int>(std::lround(T / 0.04));
        const double e1 = level_difference(runs[0], runs[1], n0);
        const double e2 = level_difference(runs[1], runs[2], 2 * n0);
        rep.checks.push_back(at_least(c.name, std::log2(e1 / e2) - 1.9, 0.0));
    }
    // smooth linear solution u = cos x cos t, w from the exact time derivative
    std::vector<double> res;
    for (const double dx : {0.04, 0.02}) {
        const Lattice lat = Lattice::covering(dx, 2.0, 1.0);
        Field f{sample(lat, [](double x, double t) { return std::cos(x) * std::cos(t); }),
                sample(lat, [](double x, double t) { return -std::cos(x) * std::sin(t); }), lat.n_steps};
        res.push_back(consistency_wu(f));
    }
    rep.checks.push_back(at_least("order w - u_t (linear)", std::log2(res[0] / res[1]) - 1.9, 0.0));
}

}  // namespace

VerifyReport verify(Suite suite) {
    const auto t0 = std::chrono::steady_clock::now();
    VerifyReport rep;
    rep.suite = to_string(suite);
    switch (suite) {
        case Suite::Operators: suite_operators(rep); break;
        case Suite::Huygens: suite_huygens(rep); break;
        case Suite::Picard: suite_picard(rep); break;
        case Suite::Blowup: suite_blowup(rep); break;
        case Suite::SolverOrder: suite_solver_order(rep); break;
    }
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

// ---- exponent table ----

ExponentReport exponent_report(const ModelParams& params, bool mean_zero) {
    ExponentReport rep;
    rep.params = params;
    rep.mean_zero = mean_zero;
    rep.regime = classify_regime(params, mean_zero);
    rep.this_law = lifespan_exponent(params, mean_zero).exponent_k;
    const auto gen = general_theory_exponent(params, mean_zero);
    rep.general = gen.exponent_k;
    rep.general_integer_inputs = gen.integer_inputs;
    rep.gap = improvement_gap(params);
    rep.cross = crossover_identities(params.r);
    rep.reference_q0 = params.p * (params.r - 1.0) / (params.r + 1.0);
    return rep;
}

void print_exponent_report(std::ostream& os, const ExponentReport& rep) {
    const auto& m = rep.params;
    os << std::setprecision(10);
    os << "p q r            " << m.p << ' ' << m.q << ' ' << m.r << '\n';
    os << "mean             " << (rep.mean_zero ? "zero" : "nonzero") << '\n';
    os << "regime           " << to_string(rep.regime.tag) << (rep.regime.boundary ? " (boundary)" : "") << '\n';
    os << "k combined       " << rep.this_law << '\n';
    os << "k general theory " << rep.general << (rep.general_integer_inputs ? "" : " (non-integer inputs)") << '\n';
    os << "gap              " << rep.gap.gap << (rep.gap.in_strict_regime ? "" : " (outside strict regime)") << '\n';
    os << "crossover p+q    " << rep.cross.crossover << '\n';
    os << "reference q=0    " << rep.reference_q0 << '\n';
}

}  // namespace wavelife
