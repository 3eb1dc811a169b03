#include <catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "wavelife/picard.hpp"
#include "wavelife/solver.hpp"

using namespace wavelife;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
const ModelParams kDeriv{1.5, 1.5, 3.0, 1.0, 0.0};
const ModelParams kPower{1.5, 1.5, 3.0, 0.0, 1.0};
const ModelParams kLinear{1.5, 1.5, 3.0, 0.0, 0.0};
}  // namespace

TEST_CASE("linear evolution reproduces the free solution", "[solver]") {
    for (const auto fam : {DataFamily::Bump, DataFamily::Dipole, DataFamily::BlowupSeed}) {
        const InitialData d = make_data(fam, 1.0, 0.7);
        const Lattice lat = Lattice::covering(0.05, 3.0, 1.0);
        const auto res = evolve(d, kLinear, lat, 2.9, kInf, EvolveOptions{true});
        REQUIRE(res.field);
        CHECK_FALSE(res.crossing_time);
        double eu = 0.0;
        for (int n = 0; n <= res.last_level; ++n)
            for (int i = 0; i < lat.n_x(); ++i)
                eu = std::max(eu, std::abs(res.field->u.at(n, i) - d.eps * free_solution(d, lat.x(i), lat.t(n)).u0));
        CHECK(eu < 1e-13);
    }
}

TEST_CASE("support cone is preserved", "[solver][property]") {
    const InitialData d = make_data(DataFamily::Bump, 1.0, 0.4);
    const Lattice lat = Lattice::covering(0.04, 6.0, 1.0);
    const auto res = evolve(d, ModelParams{1.5, 1.5, 3.0, 1.0, 1.0}, lat, 5.9, kInf, EvolveOptions{true});
    for (int n = 0; n <= res.last_level; ++n)
        for (int i = 0; i < lat.n_x(); ++i)
            if (std::abs(lat.x(i)) > lat.t(n) + d.R + lat.dx + 1e-12) {
                CHECK(res.field->u.at(n, i) == 0.0);
                CHECK(res.field->w.at(n, i) == 0.0);
            }
}

TEST_CASE("infinite threshold never crosses", "[solver]") {
    const InitialData d = make_data(DataFamily::Bump, 1.0, 0.3);
    const Lattice lat = Lattice::covering(0.05, 2.0, 1.0);
    const auto res = evolve(d, kDeriv, lat, 2.0);
    CHECK_FALSE(res.crossing_time);
    CHECK_FALSE(res.nonfinite);
    CHECK_THAT(res.horizon, WithinAbs(2.0, 1e-12));
    CHECK_FALSE(res.field);
    CHECK(res.times.size() == res.max_norm.size());
}

TEST_CASE("cone must fit the lattice", "[solver]") {
    const InitialData d = make_data(DataFamily::Bump, 1.0, 0.3);
    const Lattice narrow{0.05, 40, 60};
    CHECK_THROWS_AS(evolve(d, kDeriv, narrow, 3.0), std::invalid_argument);
    // a horizon beyond the lattice is clamped instead
    const Lattice lat = Lattice::covering(0.05, 1.0, 1.0);
    CHECK_THAT(evolve(d, kDeriv, lat, 3.0).horizon, WithinAbs(1.0, 1e-12));
}

TEST_CASE("linear problem has no lifespan", "[solver]") {
    const InitialData d = make_data(DataFamily::Bump, 1.0, 1.0);
    const auto m = measure_lifespan(d, kLinear, 0.5, 1e3, 0.05, 0.05, 20.0);
    CHECK(std::isinf(m.T_num));
    CHECK_FALSE(m.accepted);
}

TEST_CASE("pure power blows up for blowup-seed data", "[solver]") {
    const InitialData s = make_data(DataFamily::BlowupSeed, 1.0, 1.0);
    const auto m = measure_lifespan(s, kPower, 0.5, default_threshold(make_data(DataFamily::BlowupSeed, 1.0, 0.5)), 0.04);
    CHECK(std::isfinite(m.T_num));
    CHECK(m.accepted);
    CHECK(m.rel_change <= 0.05);
}

TEST_CASE("lifespan grows as eps shrinks", "[solver][property]") {
    const InitialData d = make_data(DataFamily::Bump, 1.0, 1.0);
    double prev = 0.0;
    for (const double e : {0.5, 0.4, 0.3}) {
        const auto m = measure_lifespan(d, kDeriv, e, 1e6 * e, 0.04);
        REQUIRE(m.accepted);
        CHECK(m.T_num > prev);
        prev = m.T_num;
    }
}

TEST_CASE("crossing time is insensitive to the threshold", "[solver][property]") {
    const InitialData d = make_data(DataFamily::Bump, 1.0, 1.0);
    const auto lo = measure_lifespan(d, kDeriv, 0.3, 3e5, 0.04);
    const auto hi = measure_lifespan(d, kDeriv, 0.3, 3e6, 0.04);
    REQUIRE((lo.accepted && hi.accepted));
    CHECK(std::abs(hi.T_num - lo.T_num) / lo.T_num <= 0.10);
}

TEST_CASE("default threshold", "[solver]") {
    CHECK_THAT(default_threshold(make_data(DataFamily::Bump, 1.0, 0.5)), WithinRel(5e5, 1e-6));
    CHECK(default_threshold(make_data(DataFamily::Bump, 1.0, 1e-6)) == 1e3);
}

TEST_CASE("evolve agrees with the Picard fixed point", "[solver][picard]") {
    const ModelParams m{1.5, 1.5, 3.0, 1.0, 1.0};
    const InitialData d = make_data(DataFamily::Bump, 1.0, 0.1);
    double prev = 0.0;
    for (const double dx : {0.04, 0.02}) {
        const Lattice lat = Lattice::covering(dx, 4.0, 1.0);
        const auto ev = evolve(d, m, lat, 4.0, kInf, EvolveOptions{true});
        const auto pc = picard_nonzero(d, m, 4.0, lat);
        double du = 0.0, dw = 0.0;
        for (int n = 0; n <= ev.last_level; ++n)
            for (int i = 0; i < lat.n_x(); ++i) {
                du = std::max(du, std::abs(ev.field->u.at(n, i) - pc.field.u.at(n, i)));
                dw = std::max(dw, std::abs(ev.field->w.at(n, i) - pc.field.w.at(n, i)));
            }
        CHECK(du <= 5.0 * dx * dx * d.eps);
        CHECK(dw <= 0.01 * d.eps);
        if (prev > 0.0) CHECK(std::log2(prev / du) >= 1.8);
        prev = du;
    }
}

TEST_CASE("sweep rows append with one header", "[solver]") {
    const auto path = std::filesystem::temp_directory_path() / "wavelife_rows_test.csv";
    std::filesystem::remove(path);
    LifespanMeasurement a;
    a.eps = 0.5;
    a.dx = 0.02;
    a.T_num = 10.0;
    a.refined_T_num = 10.1;
    a.rel_change = 0.01;
    a.accepted = true;
    append_sweep_row(path.string(), a);
    append_sweep_row(path.string(), a);
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();
    CHECK(text.rfind("eps,dx,T_num,refined_T_num,rel_change,accepted\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 3);
    std::filesystem::remove(path);
}
