#include "wavelife/blowup.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <stdexcept>

namespace wavelife {

double S_closed(double r) {
    if (!(r > 1.0)) throw std::domain_error("S_r needs r > 1");
    return r / ((r - 1.0) * (r - 1.0));
}

double S_series(double r, int terms) {
    if (!(r > 1.0)) throw std::domain_error("S_r needs r > 1");
    double sum = 0.0;
    double pw = 1.0 / r;
    for (int j = 0; j < terms; ++j) {
        sum += (j + 1) * pw;
        pw /= r;
    }
    return sum;
}

BlowupSequences sequences(const ModelParams& m, int n_max, double f0, double eps) {
    const double s = m.p + m.q;
    if (!(s > 1.0)) throw std::domain_error("sequences need p + q > 1");
    if (n_max < 1) throw std::invalid_argument("n_max must be at least 1");
    BlowupSequences out;
    out.C5 = (s - 1.0) * (s - 1.0) / 4.0;
    out.S = S_closed(s);
    out.C6 = m.A > 0.0 ? std::exp(-2.0 / (s - 1.0) * std::log(m.A * out.C5)) : 0.0;

    const double logAC5 = m.A > 0.0 ? std::log(m.A * out.C5) : -std::numeric_limits<double>::infinity();
    double a = 0.0, b = 0.0, c = 0.0;
    double logM = std::log(0.5 * f0 * eps);
    for (int n = 1; n <= n_max; ++n) {
        if ((n - 1) * std::log(s) > 700.0) {
            out.truncated = true;
            break;
        }
        out.a.push_back(a);
        out.b.push_back(b);
        out.c.push_back(c);
        out.logM.push_back(logM);
        out.n_max = n;

        const double closed = (std::pow(s, n - 1) - 1.0) / (s - 1.0);
        const double denom = std::max(1.0, std::abs(closed));
        out.closed_form_error = std::max(out.closed_form_error, std::abs(a - closed) / denom);
        out.sum_identity_error = std::max(out.sum_identity_error, std::abs(b + c - a) / std::max(1.0, a));

        const double bc = m.q * b + m.p * c;
        a = s * a + 1.0;
        b = bc + 1.0;
        c = bc;
        logM = logAC5 - 2.0 * n * std::log(s) + s * logM;
    }
    return out;
}

double z_function(const ModelParams& m, const InitialData& data, double eps, double x, double t) {
    const double R = data.R;
    if (!in_sigma(x, t, R)) throw std::domain_error("Z is only defined on the blow-up set");
    if (!(m.A > 0.0)) throw std::domain_error("Z needs A > 0");
    const double s = m.p + m.q;
    const double C5 = (s - 1.0) * (s - 1.0) / 4.0;
    const double arg = (t + x - R) * (t + x - R) * (t - x);
    const double head = arg > 0.0 ? std::log(arg) / (s - 1.0) : -std::numeric_limits<double>::infinity();
    return head + 2.0 / (s - 1.0) * std::log(m.A * C5) - 4.0 * S_closed(s) * std::log(s) +
           2.0 * std::log(0.5 * data.f0 * eps);
}

double z_root_on_ray(const ModelParams& m, const InitialData& data, double eps) {
    if (!(m.A > 0.0)) throw std::domain_error("Z needs A > 0");
    const double s = m.p + m.q;
    const double R = data.R;
    const double C5 = (s - 1.0) * (s - 1.0) / 4.0;
    const double K = 2.0 / (s - 1.0) * std::log(m.A * C5) - 4.0 * S_closed(s) * std::log(s) +
                     2.0 * std::log(0.5 * data.f0 * eps);
    // (2t - 5R/4)^2 (R/4) = exp(-(s-1) K); work with logs to keep tiny eps finite.
    const double log_rhs = -(s - 1.0) * K + std::log(4.0 / R);
    return 0.625 * R + 0.5 * std::exp(0.5 * log_rhs);
}

double C41(double pq, double A, double R, double f0) {
    if (!(A > 0.0)) throw std::domain_error("the upper bound needs A > 0");
    const double C5 = (pq - 1.0) * (pq - 1.0) / 4.0;
    const double S = S_closed(pq);
    return 2.0 / std::sqrt(R) * std::pow(pq, 2.0 * (pq - 1.0) * S) / (A * C5 * std::pow(0.5 * f0, pq - 1.0));
}

double upper_bound_T(const ModelParams& m, const InitialData& data, double eps) {
    if (data.family != DataFamily::BlowupSeed) throw std::invalid_argument("upper bound needs blowup-seed data");
    if (!(m.A > 0.0)) throw std::domain_error("the upper bound needs A > 0");
    const double s = m.p + m.q;
    const double T = C41(s, m.A, data.R, data.f0) * std::pow(eps, -(s - 1.0));
    return std::max(T, 1.25 * data.R);
}

double check_pointwise_seed(const Field& field, const InitialData& data, double eps) {
    const Lattice& lat = field.lattice();
    const double floor = 0.5 * data.f0 * eps;
    double worst = std::numeric_limits<double>::infinity();
    for (int n = 0; n <= field.last_level; ++n) {
        const double t = lat.t(n);
        for (int i = lat.half_cells; i < lat.n_x(); ++i) {
            const double x = lat.x(i);
            if (!in_sigma(x, t, data.R)) continue;
            worst = std::min(worst, std::min(field.u.at(n, i), field.w.at(n, i)) - floor);
        }
    }
    if (!std::isfinite(worst)) throw std::domain_error("field does not reach the blow-up set");
    return worst;
}

FFunctionalReport f_functional_checks(const Field& field, const InitialData& data, const ModelParams& m,
                                      double eps) {
    const Lattice& lat = field.lattice();
    const double h = lat.dx;
    const double R = data.R;
    const int last = field.last_level;
    std::vector<double> F(static_cast<std::size_t>(last) + 1, 0.0);
    for (int n = 0; n <= last; ++n) {
        double acc = 0.0;
        for (double v : field.u.row(n)) acc += v;
        F[static_cast<std::size_t>(n)] = acc * h;
    }
    FFunctionalReport rep;
    rep.F0 = F[0];
    rep.Fprime0 = last >= 1 ? (F[1] - F[0]) / h : 0.0;

    rep.odi_skipped = !(m.B > 0.0) || last < 2;
    if (!rep.odi_skipped) {
        rep.odi_residual = std::numeric_limits<double>::infinity();
        for (int n = 1; n < last; ++n) {
            const auto k = static_cast<std::size_t>(n);
            const double t = lat.t(n);
            const double F2 = (F[k + 1] - 2.0 * F[k] + F[k - 1]) / (h * h);
            const double rhs = std::pow(2.0, 1.0 - m.r) * m.B * std::pow(t + R, 1.0 - m.r) * std::pow(std::abs(F[k]), m.r);
            rep.odi_residual = std::min(rep.odi_residual, F2 - rhs);
            rep.odi_scale = std::max({rep.odi_scale, rhs, std::abs(F2)});
        }
    }

    rep.initial_skipped = lat.t(last) < 2.0 * R;
    if (!rep.initial_skipped) {
        const double s = m.p + m.q;
        const double coef = m.A * R * std::pow(data.f0, s) / std::pow(2.0, s + 4.0) * std::pow(eps, s);
        rep.initial_residual = std::numeric_limits<double>::infinity();
        for (int n = 0; n <= last; ++n) {
            const double t = lat.t(n);
            if (t < 2.0 * R - 1e-12) continue;
            const double rhs = coef * t * t;
            const double Fn = F[static_cast<std::size_t>(n)];
            rep.initial_residual = std::min(rep.initial_residual, Fn - rhs);
            rep.initial_scale = std::max({rep.initial_scale, rhs, std::abs(Fn)});
        }
    }
    return rep;
}

double C7(const ModelParams& m, double R) {
    return 0.5 * m.A * std::pow(m.p / (m.p + m.q), m.p) * std::pow(2.0 * R, 1.0 - m.p);
}

double comparison_x_star(double G, double c7, double pq, double eps, double R) {
    if (!(G > 0.0) || !(c7 > 0.0)) throw std::domain_error("comparison needs G > 0 and C7 > 0");
    return R + 1.0 / ((pq - 1.0) * c7 * std::pow(G * eps, pq - 1.0));
}

CharacteristicReport characteristic_inequality(const Field& field, const InitialData& data, const ModelParams& m,
                                         double eps) {
    const double G = 0.5 * data.g_mean;
    if (!(G > 0.0)) throw std::domain_error("characteristic inequality needs data with positive mean of g");
    if (!(m.A > 0.0)) throw std::domain_error("characteristic inequality needs A > 0");
    const Lattice& lat = field.lattice();
    const double h = lat.dx;
    const double R = data.R;
    const int nR = static_cast<int>(std::lround(R / h));
    if (std::abs(nR * h - R) > 1e-9 * R) throw std::invalid_argument("R must be a multiple of the lattice spacing");

    CharacteristicReport rep;
    rep.G = G;
    rep.C7 = C7(m, R);
    rep.scale = G * eps;
    rep.x_star = comparison_x_star(G, rep.C7, m.p + m.q, eps, R);
    const double s = m.p + m.q;

    // x = R sits at index half_cells + nR, time level 2 nR.
    double integral = 0.0;
    double prev = 0.0;
    rep.residual = std::numeric_limits<double>::infinity();
    for (int k = 0;; ++k) {
        const int i = lat.half_cells + nR + k;
        const int n = 2 * nR + k;
        if (n > field.last_level || i >= lat.n_x()) break;
        const double P = field.u.at(n, i);
        const double ap = std::pow(std::abs(P), s);
        if (k > 0) integral += 0.5 * h * (prev + ap);
        prev = ap;
        rep.residual = std::min(rep.residual, P - G * eps - rep.C7 * integral);
        rep.x_end = lat.x(i);
    }
    if (!std::isfinite(rep.residual)) throw std::domain_error("field does not reach the characteristic t = x + R");
    return rep;
}

void write_check_csv(const std::string& path, const std::vector<CheckRow>& rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << "check,residual,tolerance,pass\n" << std::setprecision(12);
    for (const auto& r : rows) out << r.name << ',' << r.residual << ',' << r.tolerance << ',' << (r.pass ? 1 : 0) << '\n';
}

}  // namespace wavelife
