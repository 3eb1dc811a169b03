#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <limits>
#include <string>


#include "wavelife/blowup.hpp"
#include "wavelife/cli.hpp"
#include "wavelife/exponents.hpp"
#include "wavelife/picard.hpp"
#include "wavelife/solver.hpp"

namespace py = pybind11;
using namespace wavelife;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

py::array_t<double> to_numpy(const LatticeArray& a, int rows) {
    const int nx = a.lattice().n_x();
    py::array_t<double> out({rows, nx});
    auto m = out.mutable_unchecked<2>();
    for (int n = 0; n < rows; ++n)
        for (int i = 0; i < nx; ++i) m(n, i) = a.at(n, i);
    return out;
}

py::dict field_dict(const Field& f) {
    const Lattice& lat = f.lattice();
    py::array_t<double> x(lat.n_x()), t(f.last_level + 1);
    for (int i = 0; i < lat.n_x(); ++i) x.mutable_at(i) = lat.x(i);
    for (int n = 0; n <= f.last_level; ++n) t.mutable_at(n) = lat.t(n);
    py::dict d;
    d["x"] = x;
    d["t"] = t;
    d["u"] = to_numpy(f.u, f.last_level + 1);
    d["w"] = to_numpy(f.w, f.last_level + 1);
    return d;
}

py::dict trace_dict(const IterationTrace& tr) {
    py::list reports;
    for (const auto& r : tr.reports) {
        py::dict e;
        e["n1"] = r.n1;
        e["n2"] = r.n2;
        e["n3"] = r.n3;
        e["n4"] = r.n4;
        reports.append(e);
    }
    py::dict d;
    d["scheme"] = tr.scheme == PicardScheme::ZeroMean ? "zero" : "nonzero";
    d["d"] = tr.d;
    d["rho"] = tr.rho;
    d["norms"] = reports;
    d["iterations"] = tr.iterations;
    d["converged"] = tr.converged;
    d["diverged"] = tr.diverged;
    d["max_rho"] = tr.max_rho(tr.scheme == PicardScheme::ZeroMean ? 2 : 1);
    d["max_iterate_norm"] = tr.max_iterate_norm();
    d["M"] = tr.M;
    d["N"] = tr.N;
    d["E"] = tr.E;
    d["band"] = tr.band;
    d["T"] = tr.T;
    d["eps"] = tr.eps;
    return d;
}

InitialData data_at(DataFamily fam, double R, double eps, double f0) { return make_data(fam, R, eps, f0); }

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "wavelife core";
    static py::handle divergence = py::register_exception<DivergenceError>(m, "DivergenceError", PyExc_RuntimeError);
    py::register_exception<FitRefused>(m, "FitRefused", PyExc_ValueError);

    py::class_<ModelParams>(m, "ModelParams")
        .def(py::init([](double p, double q, double r, double A, double B) {
                 ModelParams mp{p, q, r, A, B};
                 mp.validate();
                 return mp;
             }),
             py::arg("p") = 2.0, py::arg("q") = 2.0, py::arg("r") = 6.0, py::arg("A") = 1.0, py::arg("B") = 1.0)
        .def_readwrite("p", &ModelParams::p)
        .def_readwrite("q", &ModelParams::q)
        .def_readwrite("r", &ModelParams::r)
        .def_readwrite("A", &ModelParams::A)
        .def_readwrite("B", &ModelParams::B)
        .def("__repr__", [](const ModelParams& p) {
            return "ModelParams(p=" + std::to_string(p.p) + ", q=" + std::to_string(p.q) + ", r=" + std::to_string(p.r) +
                   ", A=" + std::to_string(p.A) + ", B=" + std::to_string(p.B) + ")";
        });

    py::enum_<DataFamily>(m, "DataFamily")
        .value("bump", DataFamily::Bump)
        .value("dipole", DataFamily::Dipole)
        .value("blowup_seed", DataFamily::BlowupSeed);

    // ---- exponents ----
    m.def("classify", [](const ModelParams& p, bool mean_zero) {
        const Regime r = classify_regime(p, mean_zero);
        py::dict d;
        d["tag"] = std::string(to_string(r.tag));
        d["boundary"] = r.boundary;
        d["strict_combined"] = r.strict_combined;
        return d;
    }, py::arg("params"), py::arg("mean_zero"));
    m.def("lifespan_exponent", [](const ModelParams& p, bool mean_zero) { return lifespan_exponent(p, mean_zero).exponent_k; },
          py::arg("params"), py::arg("mean_zero"));
    m.def("general_theory_exponent",
          [](const ModelParams& p, bool mean_zero) { return general_theory_exponent(p, mean_zero).exponent_k; },
          py::arg("params"), py::arg("mean_zero"));
    m.def("expected_exponent", &expected_exponent, py::arg("params"), py::arg("mean_zero"));
    m.def("improvement_gap", [](const ModelParams& p) { return improvement_gap(p).gap; }, py::arg("params"));

    // ---- data and solver ----
    py::class_<InitialData>(m, "InitialData")
        .def_readonly("family", &InitialData::family)
        .def_readonly("R", &InitialData::R)
        .def_readwrite("eps", &InitialData::eps)
        .def_readonly("g_mean", &InitialData::g_mean)
        .def_readonly("f_mean", &InitialData::f_mean)
        .def_readonly("f0", &InitialData::f0)
        .def_property_readonly("mean_zero", &InitialData::mean_zero)
        .def("f", [](const InitialData& d, double x) { return d.f(x); })
        .def("g", [](const InitialData& d, double x) { return d.g(x); });
    m.def("make_data", [](const std::string& fam, double R, double eps, double f0) {
        return data_at(parse_family(fam), R, eps, f0);
    }, py::arg("family") = "bump", py::arg("R") = 1.0, py::arg("eps") = 1.0, py::arg("f0") = 1.0);
    m.def("free_solution", [](const InitialData& d, double x, double t) {
        const FreeValues v = free_solution(d, x, t);
        return py::make_tuple(v.u0, v.u0_t, v.u0_x, v.u0_tx);
    }, py::arg("data"), py::arg("x"), py::arg("t"));
    m.def("default_threshold", &default_threshold, py::arg("data"));

    m.def("evolve", [](const InitialData& d, const ModelParams& p, double T_max, double dx, double threshold, bool record) {
        EvolveResult r;
        {
            py::gil_scoped_release nogil;
            r = evolve(d, p, Lattice::covering(dx, T_max, d.R), T_max, threshold, EvolveOptions{record});
        }
        py::dict out;
        out["crossing_time"] = r.crossing_time ? py::cast(*r.crossing_time) : py::none();
        out["nonfinite"] = r.nonfinite;
        out["horizon"] = r.horizon;
        out["times"] = r.times;
        out["integral_u"] = r.integral_u;
        out["max_norm"] = r.max_norm;
        if (r.field) out["field"] = field_dict(*r.field);
        return out;
    }, py::arg("data"), py::arg("params"), py::arg("T_max"), py::arg("dx") = 0.02, py::arg("threshold") = kInf,
       py::arg("record") = false);

    m.def("measure_lifespan", [](const InitialData& d, const ModelParams& p, double eps, double threshold, double dx,
                                 double tol_refine, double T_max) {
        LifespanMeasurement r;
        {
            py::gil_scoped_release nogil;
            InitialData scaled = d;
            scaled.eps = eps;
            if (!(threshold > 0.0)) threshold = default_threshold(scaled);
            r = measure_lifespan(d, p, eps, threshold, dx, tol_refine, T_max);
        }
        py::dict out;
        out["eps"] = r.eps;
        out["T_num"] = r.T_num;
        out["refined_T_num"] = r.refined_T_num;
        out["rel_change"] = r.rel_change;
        out["threshold"] = r.threshold;
        out["accepted"] = r.accepted;
        return out;
    }, py::arg("data"), py::arg("params"), py::arg("eps"), py::arg("threshold") = 0.0, py::arg("dx") = 0.02,
       py::arg("tol_refine") = 0.05, py::arg("T_max") = 2000.0);

    // ---- picard ----
    m.def("picard", [](const InitialData& d, const ModelParams& p, double T, double dx, const std::string& scheme,
                       int max_iter, double tol) {
        const Lattice lat = Lattice::covering(dx, T, d.R);
        PicardResult r;
        try {
            py::gil_scoped_release nogil;
            if (scheme == "nonzero")
                r = picard_nonzero(d, p, T, lat, max_iter, tol);
            else if (scheme == "zero")
                r = picard_zero(d, p, T, lat, max_iter, tol);
            else
                throw std::invalid_argument("scheme must be 'nonzero' or 'zero'");
        } catch (const DivergenceError& e) {
            // keep the trace around for the caller
            py::object exc = py::reinterpret_borrow<py::object>(divergence)(e.what());
            exc.attr("trace") = trace_dict(e.trace());
            PyErr_SetObject(divergence.ptr(), exc.ptr());
            throw py::error_already_set();
        }
        py::dict out;
        out["trace"] = trace_dict(r.trace);
        out["field"] = field_dict(r.field);
        return out;
    }, py::arg("data"), py::arg("params"), py::arg("T"), py::arg("dx") = 0.02, py::arg("scheme") = "nonzero",
       py::arg("max_iter") = 60, py::arg("tol") = 1e-10);

    // ---- blow-up ----
    m.def("sequences", [](const ModelParams& p, int n_max, double f0, double eps) {
        const auto s = sequences(p, n_max, f0, eps);
        py::dict out;
        out["a"] = s.a;
        out["b"] = s.b;
        out["c"] = s.c;
        out["logM"] = s.logM;
        out["truncated"] = s.truncated;
        out["C5"] = s.C5;
        out["S"] = s.S;
        out["closed_form_error"] = s.closed_form_error;
        return out;
    }, py::arg("params"), py::arg("n_max"), py::arg("f0") = 1.0, py::arg("eps") = 1.0);
    m.def("S_closed", &S_closed, py::arg("r"));
    m.def("S_series", &S_series, py::arg("r"), py::arg("terms"));
    m.def("z_root_on_ray", &z_root_on_ray, py::arg("params"), py::arg("data"), py::arg("eps"));
    m.def("upper_bound_T", &upper_bound_T, py::arg("params"), py::arg("data"), py::arg("eps"));

    // ---- sweep / fit / verify ----
    m.def("fit_power_law", [](const std::vector<double>& e, const std::vector<double>& T, double k_theory) {
        const FitResult f = fit_power_law(e, T, k_theory);
        py::dict out;
        out["k"] = f.k();
        out["slope"] = f.slope;
        out["intercept"] = f.intercept;
        out["stderr"] = f.stderr_slope;
        out["rel_err"] = f.rel_err;
        out["n_points"] = f.n_points;
        return out;
    }, py::arg("eps"), py::arg("T"), py::arg("k_theory"));

    m.def("run_sweep", [](const ModelParams& p, const std::string& family, double eps_max, double eps_ratio, int eps_count,
                          double dx, double threshold, int fit_first, int threads, std::uint64_t seed,
                          const std::string& out) {
        SweepConfig c;
        c.params = p;
        c.family = parse_family(family);
        c.eps_max = eps_max;
        c.eps_ratio = eps_ratio;
        c.eps_count = eps_count;
        c.dx = dx;
        c.threshold = threshold;
        c.fit_first = fit_first;
        c.threads = threads;
        c.seed = seed;
        c.out_dir = out;
        c.validate();
        SweepResult r;
        {
            py::gil_scoped_release nogil;
            r = run_sweep(c);
        }
        py::list rows;
        for (const auto& row : r.rows) {
            py::dict d;
            d["eps"] = row.eps;
            d["T_num"] = row.T_num;
            d["refined_T_num"] = row.refined_T_num;
            d["accepted"] = row.accepted;
            rows.append(d);
        }
        py::dict outd;
        outd["rows"] = rows;
        if (r.fitted()) {
            outd["k"] = r.fit.k();
            outd["k_theory"] = r.fit.k_theory;
            outd["rel_err"] = r.fit.rel_err;
        } else {
            outd["fit_error"] = r.fit_error;
        }
        return outd;
    }, py::arg("params"), py::arg("family") = "bump", py::arg("eps_max") = 0.3, py::arg("eps_ratio") = 0.8,
       py::arg("eps_count") = 8, py::arg("dx") = 0.02, py::arg("threshold") = 0.0, py::arg("fit_first") = 1,
       py::arg("threads") = 0, py::arg("seed") = 1, py::arg("out") = "");

    m.def("verify", [](const std::string& suite) {
        VerifyReport r;
        {
            const Suite s = parse_suite(suite);
            py::gil_scoped_release nogil;
            r = verify(s);
        }
        return py::module_::import("json").attr("loads")(r.to_json());
    }, py::arg("suite"));

    m.attr("__all__") = py::make_tuple("ModelParams", "DataFamily", "InitialData", "DivergenceError", "FitRefused",
                                       "classify", "lifespan_exponent", "general_theory_exponent", "expected_exponent",
                                       "improvement_gap", "make_data", "free_solution", "default_threshold", "evolve",
                                       "measure_lifespan", "picard", "sequences", "S_closed", "S_series",
                                       "z_root_on_ray", "upper_bound_T", "fit_power_law", "run_sweep", "verify");
}
