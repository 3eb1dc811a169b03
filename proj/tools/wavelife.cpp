// Command-line front end: exponent / simulate / sweep / picard / verify.
#include <cmath>
#include <filesystem>
#include <iostream>
#include <limits>
#include <string>

#include <CLI11.hpp>

#include "wavelife/cli.hpp"
#include "wavelife/picard.hpp"
#include "wavelife/solver.hpp"

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

struct Options {
    wavelife::SweepConfig sweep;
    std::string family = "bump";
    std::string out = "out";
    std::string suite;
    double t_max = 5.0;
    int stride = 10;
};

int cmd_exponent(const Options& o) {
    const auto data = wavelife::make_data(o.sweep.family, o.sweep.R, 1.0);
    wavelife::print_exponent_report(std::cout, wavelife::exponent_report(o.sweep.params, data.mean_zero()));
    return kPass;
}

int cmd_simulate(const Options& o) {
    const auto& c = o.sweep;
    auto data = wavelife::make_data(c.family, c.R, c.eps_max);
    const double th = c.threshold > 0 ? c.threshold : wavelife::default_threshold(data);
    const auto lat = wavelife::Lattice::covering(c.dx, o.t_max + 2 * c.dx, c.R);
    const auto res = wavelife::evolve(data, c.params, lat, o.t_max, th, wavelife::EvolveOptions{true});
    std::filesystem::create_directories(o.out);
    wavelife::write_field_csv((std::filesystem::path(o.out) / "field.csv").string(), *res.field, data, o.stride);
    if (res.crossing_time)
        std::cout << "crossing " << *res.crossing_time << (res.nonfinite ? " (non-finite)" : "") << '\n';
    else
        std::cout << "no crossing up to " << res.horizon << '\n';
    return kPass;
}

int cmd_sweep(const Options& o) {
    wavelife::SweepConfig c = o.sweep;
    c.out_dir = o.out;
    const auto res = wavelife::run_sweep(c);
    for (const auto& m : res.rows)
        std::cout << "eps " << m.eps << "  T " << m.T_num << "  T' " << m.refined_T_num << "  "
                  << (m.accepted ? "accepted" : "rejected") << '\n';
    if (!res.fitted()) {
        std::cerr << "fit refused: " << res.fit_error << '\n';
        return kFail;
    }
    std::cout << "k fitted " << res.fit.k() << " +- " << res.fit.stderr_slope << "  theory " << res.fit.k_theory
              << "  rel_err " << res.fit.rel_err << '\n';
    return kPass;
}

int cmd_picard(const Options& o) {
    const auto& c = o.sweep;
    const auto data = wavelife::make_data(c.family, c.R, c.eps_max);
    const double T = std::round(o.t_max / c.dx) * c.dx;
    const auto lat = wavelife::Lattice::covering(c.dx, T, c.R);
    std::filesystem::create_directories(o.out);
    const std::string trace_path = (std::filesystem::path(o.out) / "trace.csv").string();
    try {
        const auto res = data.mean_zero() ? wavelife::picard_zero(data, c.params, T, lat)
                                          : wavelife::picard_nonzero(data, c.params, T, lat);
        wavelife::write_trace_csv(trace_path, res.trace);
        std::cout << (res.trace.converged ? "converged" : "not converged") << " after " << res.trace.iterations
                  << " iterations, max rho " << res.trace.max_rho(1) << ", max norm " << res.trace.max_iterate_norm()
                  << " (band " << res.trace.band << ")\n";
        return res.trace.converged ? kPass : kFail;
    } catch (const wavelife::DivergenceError& e) {
        wavelife::write_trace_csv(trace_path, e.trace());
        std::cout << "diverged: " << e.what() << '\n';
        return kFail;
    }
}

int cmd_verify(const Options& o) {
    const auto rep = wavelife::verify(wavelife::parse_suite(o.suite));
    std::cout << rep.to_json() << '\n';
    return rep.pass() ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lifespan experiments for u_tt - u_xx = A|u_t|^p|u|^q + B|u|^r in one space dimension"};
    app.require_subcommand(1);
    Options o;
    auto& c = o.sweep;
    app.set_config("--config", "", "flat key=value file; command-line flags win");
    app.add_option("--p", c.params.p, "exponent of |u_t|");
    app.add_option("--q", c.params.q, "exponent of |u|");
    app.add_option("--r", c.params.r, "exponent of the pure power");
    app.add_option("--A", c.params.A, "coefficient of |u_t|^p|u|^q");
    app.add_option("--B", c.params.B, "coefficient of |u|^r");
    app.add_option("--family", o.family, "bump | dipole | blowup-seed");
    app.add_option("--eps-max", c.eps_max, "largest eps of the grid (the eps of single runs)");
    app.add_option("--eps-ratio", c.eps_ratio, "grid ratio in (0,1)");
    app.add_option("--eps-count", c.eps_count, "grid size");
    app.add_option("--dx", c.dx, "lattice spacing");
    app.add_option("--threshold", c.threshold, "blow-up threshold; <= 0 picks the default");
    app.add_option("--out", o.out, "output directory");
    app.add_option("--seed", c.seed, "seed recorded with the outputs");
    app.add_option("--tol-refine", c.tol_refine, "accepted when |T - T'|/T is below this");
    app.add_option("--fit-first", c.fit_first, "first grid index used by the fit");
    app.add_option("--fit-last", c.fit_last, "one past the last grid index used by the fit (-1: end)");
    app.add_option("--t-max", o.t_max, "horizon of simulate/picard");
    app.add_option("--sweep-t-max", c.T_max, "largest lifespan a sweep looks for");
    app.add_option("--threads", c.threads, "worker threads (0: all cores)");
    app.add_option("--stride", o.stride, "time-level stride of the field snapshot");

    auto* exponent = app.add_subcommand("exponent", "exponent table for (p, q, r)")->fallthrough();
    auto* simulate = app.add_subcommand("simulate", "evolve once at eps-max and write field.csv")->fallthrough();
    auto* sweep = app.add_subcommand("sweep", "lifespan sweep: sweep.csv, fit.txt, plot.dat")->fallthrough();
    auto* picard = app.add_subcommand("picard", "Picard iteration at eps-max up to t-max")->fallthrough();
    auto* verify = app.add_subcommand("verify", "run a verification suite")->fallthrough();
    verify->add_option("suite", o.suite, "operators | huygens | picard | blowup | solver-order")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e) == 0 ? kPass : kUsage;
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        c.family = wavelife::parse_family(o.family);
        c.params.validate();
        if (*verify) (void)wavelife::parse_suite(o.suite);
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kUsage;
    }

    try {
        if (*exponent) return cmd_exponent(o);
        if (*simulate) return cmd_simulate(o);
        if (*sweep) return cmd_sweep(o);
        if (*picard) return cmd_picard(o);
        if (*verify) return cmd_verify(o);
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kFail;
    }
    return kUsage;
}
