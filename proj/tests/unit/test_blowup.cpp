#include <catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include "wavelife/blowup.hpp"
#include "wavelife/cli.hpp"
#include "wavelife/solver.hpp"

using namespace wavelife;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

Field run(const InitialData& d, const ModelParams& m, double T, double dx = 0.02) {
    const Lattice lat = Lattice::covering(dx, T + 2 * dx, d.R);
    return *evolve(d, m, lat, T, kInf, EvolveOptions{true}).field;
}
}  // namespace

TEST_CASE("sequence values", "[blowup]") {
    const auto s = sequences(ModelParams{2, 2, 3, 1, 1}, 3);
    CHECK(s.a == std::vector<double>{0.0, 1.0, 5.0});
    CHECK(s.b[0] == 0.0);
    CHECK(s.c[0] == 0.0);
    CHECK_THAT(s.C5, WithinAbs(9.0 / 4.0, 1e-15));
}

TEST_CASE("log M recursion against direct products", "[blowup]") {
    // p + q = 3, A = 1: C5 = 1, M1 = eps/2, M_{n+1} = 3^{-2n} M_n^3
    const double eps = 0.4;
    const auto s = sequences(ModelParams{1.5, 1.5, 3, 1, 1}, 3, 1.0, eps);
    const double M1 = eps / 2;
    const double M2 = std::pow(3.0, -2) * M1 * M1 * M1;
    const double M3 = std::pow(3.0, -4) * M2 * M2 * M2;
    CHECK_THAT(s.logM[0], WithinRel(std::log(M1), 1e-14));
    CHECK_THAT(s.logM[1], WithinRel(std::log(M2), 1e-14));
    CHECK_THAT(s.logM[2], WithinRel(std::log(M3), 1e-14));
}

TEST_CASE("closed form of a_n up to n = 60", "[blowup][property]") {
    for (const double p : {1.1, 1.5, 2.0, 3.0})
        for (const double q : {1.2, 2.0}) {
            const auto s = sequences(ModelParams{p, q, 3, 1, 1}, 60);
            CHECK(s.closed_form_error <= 1e-12);
            CHECK_FALSE(s.truncated);
        }
}

TEST_CASE("b_n + c_n = a_n holds only for p = q", "[blowup]") {
    CHECK(sequences(ModelParams{2, 2, 3, 1, 1}, 60).sum_identity_error <= 1e-12);
    const auto s = sequences(ModelParams{2, 1.5, 3, 1, 1}, 3);
    // b_3 = q + 1, c_3 = q, a_3 = p + q + 1
    CHECK_THAT(s.b[2], WithinAbs(2.5, 1e-15));
    CHECK_THAT(s.c[2], WithinAbs(1.5, 1e-15));
    CHECK_THAT(s.a[2], WithinAbs(4.5, 1e-15));
    CHECK(s.sum_identity_error > 0.1);
    for (int n = 1; n < s.n_max; ++n) CHECK_THAT(s.b[n] - s.c[n], WithinAbs(1.0, 1e-12));
}

TEST_CASE("long sequences truncate", "[blowup]") {
    const auto s = sequences(ModelParams{2, 2, 3, 1, 1}, 2000);
    CHECK(s.truncated);
    CHECK(s.n_max < 2000);
    CHECK(std::isfinite(s.logM.back()));
    CHECK_THROWS_AS(sequences(ModelParams{2, 2, 3, 1, 1}, 0), std::invalid_argument);
}

TEST_CASE("S_r", "[blowup][property]") {
    CHECK_THAT(S_closed(2.0), WithinAbs(2.0, 1e-15));
    for (double r = 1.2; r < 10.0; r += 0.35) CHECK_THAT(S_series(r, 6000), WithinRel(S_closed(r), 1e-12));
    CHECK_THROWS_AS(S_closed(1.0), std::domain_error);
}

TEST_CASE("blow-up set", "[blowup]") {
    CHECK(in_sigma(0.5, 0.7, 1.0));
    CHECK_FALSE(in_sigma(-0.1, 1.2, 1.0));
    CHECK_FALSE(in_sigma(0.2, 0.5, 1.0));   // t + x < R
    CHECK_FALSE(in_sigma(0.5, 1.1, 1.0));   // t - x = R/2
    CHECK_FALSE(in_sigma(0.5, 0.5, 1.0));   // t = x
}

TEST_CASE("Z along the ray", "[blowup]") {
    const ModelParams m{1.5, 1.5, 3, 1, 0};
    const InitialData d = make_data(DataFamily::BlowupSeed, 1.0, 1.0);
    const double eps = 0.01;
    double prev = -kInf;
    for (double x = 0.4; x < 1e6; x *= 1.7) {
        const double z = z_function(m, d, eps, x, x + 0.25);
        CHECK(z > prev);
        prev = z;
    }
    CHECK(std::isinf(z_function(m, d, eps, 0.375, 0.625)));
    const double t0 = z_root_on_ray(m, d, eps);
    CHECK_THAT(z_function(m, d, eps, t0 - 0.25, t0), WithinAbs(0.0, 1e-9));
    CHECK_THROWS_AS(z_function(m, d, eps, 0.1, 0.2), std::domain_error);
    CHECK_THROWS_AS(z_function(ModelParams{1.5, 1.5, 3, 0, 1}, d, eps, 0.5, 0.75), std::domain_error);
}

TEST_CASE("Z is positive past the witness time", "[blowup]") {
    const ModelParams m{1.5, 1.5, 3, 1, 0};
    const InitialData d = make_data(DataFamily::BlowupSeed, 1.0, 1.0);
    const double eps = 0.05, s = m.pq(), R = d.R, f0 = d.f0;
    const double C5 = (s - 1) * (s - 1) / 4;
    const double t2 = 4.0 / R * std::pow(s, 4 * (s - 1) * S_closed(s)) / (std::pow(m.A * C5, 2) * std::pow(f0 / 2, 2 * (s - 1))) *
                      std::pow(eps, -2 * (s - 1));
    const double t0 = 1.01 * std::sqrt(t2);
    CHECK(z_function(m, d, eps, t0 - R / 4, t0) > 0.0);
}

TEST_CASE("Z root scales like eps^{-(p+q-1)}", "[blowup][property]") {
    const InitialData d = make_data(DataFamily::BlowupSeed, 1.0, 1.0);
    for (const double s : {2.2, 3.0, 4.5}) {
        const ModelParams m{s / 2, s / 2, 3, 1, 0};
        std::vector<double> es, ts;
        for (int k = 0; k < 6; ++k) {
            es.push_back(1e-12 * std::pow(0.5, k));
            ts.push_back(z_root_on_ray(m, d, es.back()));
        }
        CHECK_THAT(fit_power_law(es, ts, s - 1).slope, WithinAbs(-(s - 1), 1e-6));
    }
}

TEST_CASE("upper bound", "[blowup]") {
    CHECK_THAT(C41(2.0, 1.0, 1.0, 1.0), WithinRel(256.0, 1e-14));
    const ModelParams m{1.5, 1.5, 3, 1, 0};
    const InitialData d = make_data(DataFamily::BlowupSeed, 1.0, 1.0);
    const double e = 1e-3;
    CHECK_THAT(upper_bound_T(m, d, e) / upper_bound_T(m, d, 2 * e), WithinRel(std::pow(2.0, m.pq() - 1), 1e-12));
    CHECK(upper_bound_T(m, d, 1e6) == 1.25 * d.R);
    CHECK_THROWS_AS(upper_bound_T(ModelParams{1.5, 1.5, 3, 0, 1}, d, e), std::domain_error);
    CHECK_THROWS_AS(upper_bound_T(m, make_data(DataFamily::Bump, 1.0, 1.0), e), std::invalid_argument);
}

TEST_CASE("comparison abscissa", "[blowup]") {
    CHECK_THAT(comparison_x_star(1.0, 1.0, 2.0, 0.1, 1.0), WithinAbs(11.0, 1e-12));
    std::vector<double> es, xs;
    for (int k = 0; k < 5; ++k) {
        es.push_back(0.1 * std::pow(0.5, k));
        xs.push_back(comparison_x_star(1.0, 1.0, 3.0, es.back(), 1.0) - 1.0);
    }
    CHECK_THAT(fit_power_law(es, xs, 2.0).slope, WithinAbs(-2.0, 1e-12));
    CHECK_THAT(C7(ModelParams{2, 2, 3, 2, 0}, 0.5), WithinAbs(0.25, 1e-15));
}

TEST_CASE("pointwise seed bound on Σ", "[blowup]") {
    const InitialData d = make_data(DataFamily::BlowupSeed, 1.0, 0.3);
    CHECK(check_pointwise_seed(run(d, ModelParams{1.5, 1.5, 3, 0, 0}, 2.0), d, d.eps) >= -1e-12);
    CHECK(check_pointwise_seed(run(d, ModelParams{1.5, 1.5, 3, 1, 1}, 3.0), d, d.eps) >= -1e-12);
    CHECK_THROWS_AS(check_pointwise_seed(run(d, ModelParams{1.5, 1.5, 3, 0, 0}, 0.4), d, d.eps), std::domain_error);
}

TEST_CASE("F functional on a linear run", "[blowup]") {
    const InitialData d = make_data(DataFamily::BlowupSeed, 1.0, 0.3);
    const auto rep = f_functional_checks(run(d, ModelParams{1.5, 1.5, 3, 0, 0}, 3.0), d, ModelParams{1.5, 1.5, 3, 0, 0}, d.eps);
    CHECK_THAT(rep.F0, WithinRel(d.eps * d.f_mean, 1e-3));
    CHECK_THAT(rep.Fprime0, WithinAbs(0.0, 1e-12));
    CHECK(rep.odi_skipped);
    const auto shortrep = f_functional_checks(run(d, ModelParams{1.5, 1.5, 3, 0, 1}, 1.5), d, ModelParams{1.5, 1.5, 3, 0, 1}, d.eps);
    CHECK(shortrep.initial_skipped);
}

TEST_CASE("F functional inequalities on a nonlinear run", "[blowup]") {
    const ModelParams m{1.5, 1.5, 3, 1, 1};
    const InitialData d = make_data(DataFamily::BlowupSeed, 1.0, 0.3);
    const double h = 0.02;
    const auto rep = f_functional_checks(run(d, m, 4.0, h), d, m, d.eps);
    CHECK_FALSE(rep.odi_skipped);
    CHECK_FALSE(rep.initial_skipped);
    CHECK(rep.odi_residual >= -1e-6 * rep.odi_scale);
    CHECK(rep.initial_residual >= -1e-6 * rep.initial_scale);
    CHECK(rep.Fprime0 >= 0.0);
    CHECK(rep.Fprime0 <= h * d.eps);
}

TEST_CASE("characteristic inequality", "[blowup]") {
    const ModelParams m{1.5, 1.5, 3, 1, 0};
    const InitialData d = make_data(DataFamily::Bump, 1.0, 0.3);
    const auto rep = characteristic_inequality(run(d, m, 8.0), d, m, d.eps);
    CHECK(rep.residual >= -1e-6 * rep.scale);
    CHECK_THAT(rep.G, WithinRel(0.5 * d.g_mean, 1e-14));
    CHECK_THAT(rep.x_star, WithinRel(comparison_x_star(rep.G, rep.C7, m.pq(), d.eps, d.R), 1e-14));
    const InitialData dip = make_data(DataFamily::Dipole, 1.0, 0.3);
    CHECK_THROWS_AS(characteristic_inequality(run(dip, m, 2.0), dip, m, dip.eps), std::domain_error);
}

TEST_CASE("check CSV", "[blowup]") {
    const auto path = std::filesystem::temp_directory_path() / "wavelife_checks_test.csv";
    write_check_csv(path.string(), {{"a", 0.5, 1.0, true}, {"b", -2.0, 1.0, false}});
    std::ifstream in(path);
    std::string header, row;
    std::getline(in, header);
    std::getline(in, row);
    CHECK(header == "check,residual,tolerance,pass");
    CHECK(row.rfind("a,", 0) == 0);
    std::filesystem::remove(path);
}
