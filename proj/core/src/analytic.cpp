#include "surfride/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include <Eigen/Dense>

#include "surfride/error.hpp"
#include "surfride/heteroclinic.hpp"
#include "surfride/numeric.hpp"

namespace surfride {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// int_a^b v^p dv
double moment(double a, double b, int p) {
    return (std::pow(b, p + 1) - std::pow(a, p + 1)) / (p + 1);
}

// Least squares of a residual on {v, v^2} over [a, b]; rhs[p-1] = int v^p r dv.
std::array<double, 2> fit_v_v2(double a, double b, const std::array<double, 2>& rhs) {
    const double m2 = moment(a, b, 2), m3 = moment(a, b, 3), m4 = moment(a, b, 4);
    const double det = m2 * m4 - m3 * m3;
    return {(rhs[0] * m4 - rhs[1] * m3) / det, (m2 * rhs[1] - m3 * rhs[0]) / det};
}

// int_a^b v^p D(v) dv
double damping_moment(const SurgeSystem& sys, double a, double b, int p) {
    double acc = 0.0;
    for (int j = 1; j <= sys.order; ++j) acc += sys.abar[j] * moment(a, b, p + j);
    return acc;
}

ThresholdResult make_result(const Scenario& sc, Method method, Branch branch, double n) {
    ThresholdResult r;
    r.method = method;
    r.branch = branch;
    r.n_cr = n;
    r.fn_cr = sc.nominal_froude(n);
    r.diagnostics["rbar"] = sc.rbar(n);
    return r;
}

using C = std::complex<double>;

struct PwlArc {
    C l3, l4, c3, c4;
    double target = 0.0;  // Range-2 offset at y = -5 pi / 2
    double z2 = 0.0;
    double y(double t) const { return (c3 * std::exp(l3 * t) + c4 * std::exp(l4 * t)).real(); }
    double rate(double t) const {
        return (c3 * l3 * std::exp(l3 * t) + c4 * l4 * std::exp(l4 * t)).real();
    }
};

PwlArc pwl_arc(double rbar, double beta) {
    const double root1 = std::sqrt(beta * beta + 8.0 / kPi);
    const double l1 = 0.5 * (-beta + root1);
    const double l2 = 0.5 * (-beta - root1);
    const C root2 = std::sqrt(C(beta * beta - 8.0 / kPi, 0.0));
    PwlArc a;
    a.l3 = 0.5 * (C(-beta, 0.0) + root2);
    a.l4 = 0.5 * (C(-beta, 0.0) - root2);
    if (std::abs(a.l3 - a.l4) < 1e-12)
        throw NoSolutionError("piecewise_linear: Range-2 eigenvalues coincide");
    const double y0 = 0.5 * kPi * (1.0 - rbar);
    const double z1 = -0.5 * kPi * l1 * (1.0 - rbar);
    a.c3 = (z1 - a.l4 * y0) / (a.l3 - a.l4);
    a.c4 = (a.l3 * y0 - z1) / (a.l3 - a.l4);
    a.target = -0.5 * kPi * (1.0 + rbar);
    a.z2 = 0.5 * kPi * l2 * (1.0 + rbar);
    return a;
}

}  // namespace

std::string to_string(Method m) {
    switch (m) {
        case Method::newton: return "newton";
        case Method::bisection: return "bisection";
        case Method::quad_damping: return "quad_damping";
        case Method::cubic: return "cubic";
        case Method::piecewise_linear: return "piecewise_linear";
        case Method::melnikov1: return "melnikov1";
        case Method::melnikov3: return "melnikov3";
        case Method::melnikov5: return "melnikov5";
        case Method::ext_melnikov_1: return "ext_melnikov_1";
        case Method::ext_melnikov_2: return "ext_melnikov_2";
    }
    return "unknown";
}

const std::vector<Method>& all_methods() {
    static const std::vector<Method> m{Method::newton,         Method::bisection,
                                       Method::quad_damping,   Method::cubic,
                                       Method::piecewise_linear, Method::melnikov1,
                                       Method::melnikov3,      Method::melnikov5,
                                       Method::ext_melnikov_1, Method::ext_melnikov_2};
    return m;
}

const std::vector<Method>& default_methods() {
    static const std::vector<Method> m{Method::newton,         Method::bisection,
                                       Method::quad_damping,   Method::cubic,
                                       Method::piecewise_linear, Method::melnikov5,
                                       Method::ext_melnikov_1, Method::ext_melnikov_2};
    return m;
}

Method parse_method(const std::string& name) {
    std::string valid;
    for (Method m : all_methods()) {
        if (to_string(m) == name) return m;
        valid += (valid.empty() ? "" : ", ") + to_string(m);
    }
    throw ValidationError("unknown method '" + name + "' (valid: " + valid + ", all)");
}

SurgeSystem oriented(const SurgeSystem& sys, Branch branch) {
    if (branch == Branch::surf_riding) return sys;
    SurgeSystem m = sys;
    m.rbar = -sys.rbar;
    for (int k = 2; k <= 5; k += 2) m.abar[k] = -sys.abar[k];
    return m;
}

double cos_power_integral(int k) {
    if (k < 0) throw ValidationError("cos_power_integral: k must be >= 0");
    return 2.0 * std::sqrt(kPi) * std::tgamma(0.5 * (k + 1)) / std::tgamma(0.5 * (k + 2));
}

double fit_quadratic_damping(const SurgeSystem& sys, double v_e) {
    if (v_e == 0.0 || !std::isfinite(v_e))
        throw ValidationError("fit_quadratic_damping: v_e must be nonzero");
    // int_0^ve v^(j+2) / int_0^ve v^4 = 5 ve^(j-2) / (j+3)
    double acc = 0.0;
    for (int j = 1; j <= sys.order; ++j)
        acc += sys.abar[j] * 5.0 * std::pow(v_e, j - 2) / (j + 3);
    return -acc;
}

double fit_linear_damping(const SurgeSystem& sys, double v_e) {
    if (v_e == 0.0 || !std::isfinite(v_e))
        throw ValidationError("fit_linear_damping: v_e must be nonzero");
    double acc = 0.0;
    for (int j = 1; j <= sys.order; ++j)
        acc += sys.abar[j] * 3.0 * std::pow(v_e, j - 1) / (j + 2);
    return acc;
}

DampingFit fit_damping(const SurgeSystem& sys) {
    DampingFit f;
    double ve = -2.0;
    double g = fit_quadratic_damping(sys, ve);
    for (int it = 0; it < 100; ++it) {
        const double ve_next = -2.0 * std::pow(1.0 + 4.0 * g * g, -0.25);
        const double g_next = fit_quadratic_damping(sys, ve_next);
        const bool done = std::abs(g_next - g) <= 1e-15 * std::max(1.0, std::abs(g));
        ve = ve_next;
        g = g_next;
        if (done) break;
    }
    f.v_e_gamma = ve;
    f.gamma = g;
    // Residual D(v) - gamma sgn(v) v^2 = D(v) + gamma v^2 on v < 0.
    const auto gc = fit_v_v2(ve, 0.0,
                             {damping_moment(sys, ve, 0.0, 1) + g * moment(ve, 0.0, 3),
                              damping_moment(sys, ve, 0.0, 2) + g * moment(ve, 0.0, 4)});
    f.gamma1 = gc[0];
    f.gamma2 = gc[1];

    const double vb = f.v_e_beta;
    f.beta = fit_linear_damping(sys, vb);
    const auto bc = fit_v_v2(vb, 0.0,
                             {damping_moment(sys, vb, 0.0, 1) - f.beta * moment(vb, 0.0, 2),
                              damping_moment(sys, vb, 0.0, 2) - f.beta * moment(vb, 0.0, 3)});
    f.beta1 = bc[0];
    f.beta2 = bc[1];
    return f;
}

std::array<double, 3> restoring_corrections() {
    // S_m = int_{-pi}^{pi} y^m sin y dy for odd m: S_m = 2 pi^m - m (m - 1) S_{m-2}.
    std::array<double, 12> s{};
    s[1] = 2.0 * kPi;
    for (int m = 3; m < 12; m += 2) s[m] = 2.0 * std::pow(kPi, m) - m * (m - 1) * s[m - 2];
    // Odd power moment: int y^m dy for even m.
    auto pm = [](int m) { return 2.0 * std::pow(kPi, m + 1) / (m + 1); };
    Eigen::Matrix3d g;
    Eigen::Vector3d rhs;
    for (int i = 0; i < 3; ++i) {
        const int pi_ = 2 * i + 1;
        for (int j = 0; j < 3; ++j) g(i, j) = pm(pi_ + 2 * j + 1);
        // residual sin y + mu (y^3 - pi^2 y)
        rhs[i] = s[pi_] + kCubicMu * (pm(pi_ + 3) - kPi * kPi * pm(pi_ + 1));
    }
    const Eigen::Vector3d x = g.fullPivLu().solve(rhs);
    return {x[0], x[1], x[2]};
}

double cubic_rbar_limit() { return 16.0 / (9.0 * std::sqrt(3.0)); }

CubicRestoring cubic_restoring(double rbar) {
    // y^3 + p y + q = 0 with p = -pi^2, q = rbar / mu.
    const double p = -kPi * kPi;
    const double q = rbar / kCubicMu;
    if (!(4.0 * p * p * p + 27.0 * q * q < 0.0))
        throw NoSolutionError("cubic_restoring: roots collapse (|rbar| >= 16 / (9 sqrt 3))");
    const double amp = 2.0 * std::sqrt(-p / 3.0);
    const double phi = std::acos(std::clamp(1.5 * q / p * std::sqrt(-3.0 / p), -1.0, 1.0)) / 3.0;
    CubicRestoring c;
    for (int k = 0; k < 3; ++k) c.roots[k] = amp * std::cos(phi - 2.0 * kPi * k / 3.0);
    std::sort(c.roots.begin(), c.roots.end());
    c.delta = c.roots[2] - c.roots[0];
    c.a_tilde = (c.roots[1] - c.roots[0]) / c.delta;
    c.mu_tilde = c.mu * c.delta * c.delta;
    c.c_tilde = -std::sqrt(0.5 * c.mu_tilde);
    return c;
}

double CubicRestoring::condition(double beta) const {
    const double h = std::sqrt(0.5 * mu_tilde);
    return 0.5 * mu_tilde - beta * h - mu_tilde * a_tilde;
}

double CubicRestoring::logistic(double tau, double d) const {
    return 1.0 / (1.0 + std::exp(-(c_tilde * tau - d)));
}

double CubicRestoring::logistic_rate(double tau, double d) const {
    const double e = std::exp(-(c_tilde * tau - d));
    return c_tilde * e / ((1.0 + e) * (1.0 + e));
}

double cubic_critical_rbar(double beta) {
    const double lim = cubic_rbar_limit() * (1.0 - 1e-9);
    const ScalarFn g = [beta](double r) { return cubic_restoring(r).condition(beta); };
    if (g(-lim) * g(lim) > 0.0)
        throw NoSolutionError("cubic: no connection for linear damping " + std::to_string(beta));
    return find_root(g, -lim, lim, 1e-15);
}

PwlMatch pwl_residual(double rbar, double beta, double tau_bar) {
    const PwlArc a = pwl_arc(rbar, beta);
    return {a.y(tau_bar) - a.target, a.rate(tau_bar) - a.z2};
}

double pwl_crossing_time(double rbar, double beta) {
    const PwlArc a = pwl_arc(rbar, beta);
    const double dt = 1e-2;
    double t0 = 0.0;
    for (int i = 1; i <= 20000; ++i) {
        const double t = i * dt;
        if (a.y(t) <= a.target) {
            const ScalarFn g = [&a](double s) { return a.y(s) - a.target; };
            return find_root(g, t0, t, 1e-15);
        }
        if (a.rate(t) >= 0.0) return -1.0;
        t0 = t;
    }
    return -1.0;
}

double melnikov_function(const SurgeSystem& sys, int order) {
    if (order < 1 || order > 5) throw ValidationError("melnikov: order must be in 1..5");
    double acc = 2.0 * kPi * sys.rbar;
    for (int k = 1; k <= std::min(order, sys.order); ++k)
        acc -= sys.abar[k] * std::pow(-2.0, k) * cos_power_integral(k);
    return acc;
}

double solve_in_tangent_interval(const Scenario& sc, Branch branch,
                                 const std::function<double(double)>& g, int samples) {
    if (samples < 2) throw ValidationError("solve_in_tangent_interval: need >= 2 samples");
    const TangentRates t = tangent_bifurcation_rates(sc);
    const double w = t.n_high - t.n_low;
    const double lo = t.n_low + 1e-9 * w;
    const double hi = t.n_high - 1e-9 * w;
    const auto safe = [&g](double n) {
        try {
            const double v = g(n);
            return std::isfinite(v) ? v : kNaN;
        } catch (const std::exception&) {
            return kNaN;
        }
    };
    const bool from_high = branch == Branch::wave_blocking;
    double prev_n = kNaN, prev_v = kNaN;
    for (int i = 0; i < samples; ++i) {
        const double frac = static_cast<double>(i) / (samples - 1);
        const double n = from_high ? hi - frac * (hi - lo) : lo + frac * (hi - lo);
        const double v = safe(n);
        if (v == 0.0) return n;
        if (std::isfinite(v) && std::isfinite(prev_v) && (v < 0.0) != (prev_v < 0.0))
            return find_root(safe, std::min(prev_n, n), std::max(prev_n, n), 1e-15);
        prev_n = n;
        prev_v = v;
    }
    throw NoSolutionError("no threshold inside the tangent interval [" + std::to_string(t.n_low) +
                          ", " + std::to_string(t.n_high) + "]");
}

ThresholdResult quad_damping_threshold(const Scenario& sc, Branch branch) {
    const auto g = [&](double n) {
        const SurgeSystem s = oriented(build_system(sc, n), branch);
        const double gam = fit_damping(s).gamma;
        return s.rbar + 2.0 * gam / std::sqrt(1.0 + 4.0 * gam * gam);
    };
    const double n = solve_in_tangent_interval(sc, branch, g);
    ThresholdResult r = make_result(sc, Method::quad_damping, branch, n);
    const DampingFit f = fit_damping(oriented(build_system(sc, n), branch));
    r.diagnostics["gamma"] = f.gamma;
    r.diagnostics["v_e"] = f.v_e_gamma;
    return r;
}

ThresholdResult cubic_threshold(const Scenario& sc, Branch branch) {
    const auto g = [&](double n) {
        const SurgeSystem s = oriented(build_system(sc, n), branch);
        return cubic_restoring(s.rbar).condition(fit_damping(s).beta);
    };
    const double n = solve_in_tangent_interval(sc, branch, g);
    ThresholdResult r = make_result(sc, Method::cubic, branch, n);
    const SurgeSystem s = oriented(build_system(sc, n), branch);
    const CubicRestoring c = cubic_restoring(s.rbar);
    r.diagnostics["beta"] = fit_damping(s).beta;
    r.diagnostics["a_tilde"] = c.a_tilde;
    r.diagnostics["mu_tilde"] = c.mu_tilde;
    r.diagnostics["c_tilde"] = c.c_tilde;
    return r;
}

ThresholdResult piecewise_linear_threshold(const Scenario& sc, Branch branch) {
    const auto params = [&](double n) {
        const SurgeSystem s = oriented(build_system(sc, n), branch);
        return std::pair{s.rbar, fit_damping(s).beta};
    };
    // Seed: sign of the Z2 defect at the first crossing; no crossing means capture.
    const auto h = [&](double n) {
        const auto [rb, be] = params(n);
        const double t = pwl_crossing_time(rb, be);
        return t < 0.0 ? 1.0 : pwl_residual(rb, be, t).rate_defect;
    };
    const TangentRates tr = tangent_bifurcation_rates(sc);
    const double w = tr.n_high - tr.n_low;
    const bool from_high = branch == Branch::wave_blocking;
    const int samples = 400;
    double n0 = kNaN, t0 = kNaN;
    double prev_n = kNaN, prev_h = kNaN, prev_t = kNaN;
    for (int i = 0; i < samples && std::isnan(n0); ++i) {
        const double frac = (i + 0.5) / samples;
        const double n = from_high ? tr.n_high - frac * w : tr.n_low + frac * w;
        const auto [rb, be] = params(n);
        const double t = pwl_crossing_time(rb, be);
        const double hv = t < 0.0 ? 1.0 : pwl_residual(rb, be, t).rate_defect;
        if (std::isfinite(prev_h) && (hv < 0.0) != (prev_h < 0.0)) {
            n0 = find_root(h, std::min(prev_n, n), std::max(prev_n, n), 1e-6);
            t0 = pwl_crossing_time(params(n0).first, params(n0).second);
            if (t0 < 0.0) t0 = t < 0.0 ? prev_t : t;
        }
        prev_n = n;
        prev_h = hv;
        prev_t = t;
    }
    if (std::isnan(n0) || !(t0 > 0.0))
        throw NoSolutionError("piecewise_linear: no connection inside the tangent interval");

    // 2-D Newton on (n, tau_bar) with a central-difference Jacobian.
    const auto resid = [&](const Eigen::Vector2d& x) {
        const auto [rb, be] = params(x[0]);
        const PwlMatch m = pwl_residual(rb, be, x[1]);
        return Eigen::Vector2d(m.y_defect, m.rate_defect);
    };
    Eigen::Vector2d x(n0, t0);
    Eigen::Vector2d r = resid(x);
    int it = 0;
    for (; it < 50 && r.norm() > 1e-12; ++it) {
        Eigen::Matrix2d jac;
        for (int c = 0; c < 2; ++c) {
            const double step = 1e-7 * std::max(std::abs(x[c]), 1.0);
            Eigen::Vector2d xp = x, xm = x;
            xp[c] += step;
            xm[c] -= step;
            jac.col(c) = (resid(xp) - resid(xm)) / (2.0 * step);
        }
        const Eigen::Vector2d dx = jac.fullPivLu().solve(-r);
        if (!dx.allFinite())
            throw ConvergenceError("piecewise_linear: singular Jacobian", r.norm());
        double lam = 1.0;
        Eigen::Vector2d xn = x + dx, rn = resid(xn);
        for (int k = 0; k < 20 && !(rn.norm() < r.norm()); ++k) {
            lam *= 0.5;
            xn = x + lam * dx;
            rn = resid(xn);
        }
        x = xn;
        r = rn;
        if (lam * dx.norm() < 1e-14 * x.norm()) break;
    }
    if (!(r.norm() < 1e-9))
        throw ConvergenceError("piecewise_linear: Newton did not converge", r.norm());
    ThresholdResult out = make_result(sc, Method::piecewise_linear, branch, x[0]);
    out.diagnostics["tau_bar"] = x[1];
    out.diagnostics["beta"] = params(x[0]).second;
    out.diagnostics["residual"] = r.norm();
    out.diagnostics["iterations"] = it;
    return out;
}

ThresholdResult melnikov_threshold(const Scenario& sc, int order, Branch branch) {
    if (order < 1 || order > 5) throw ValidationError("melnikov: order must be in 1..5");
    const auto g = [&](double n) {
        return melnikov_function(oriented(build_system(sc, n, order), branch), order);
    };
    const double n = solve_in_tangent_interval(sc, branch, g);
    const Method m = order == 1   ? Method::melnikov1
                     : order == 3 ? Method::melnikov3
                                  : Method::melnikov5;
    ThresholdResult r = make_result(sc, m, branch, n);
    r.diagnostics["order"] = order;
    return r;
}

double order1_closed_form_rate(const Scenario& sc) {
    const auto& prop = sc.vessel.prop;
    const double c = sc.wave.celerity;
    const double s = std::sqrt(sc.f_w * sc.wave.k_w * sc.vessel.ship.total_mass());
    const double k = 4.0 * sc.f_w / (kPi * s);
    const double a = prop.tau0();
    const double b = prop.tau1() * c - k * prop.tau1();
    const double c0 = prop.tau2() * c * c - resistance(sc.vessel.res, c) + k * sc.vessel.res.r[0];
    const double disc = b * b - 4.0 * a * c0;
    if (!(a > 0.0) || disc < 0.0) throw NoSolutionError("order-1 closed form: no real propeller rate");
    const double sq = std::sqrt(disc);
    return b <= 0.0 ? (-b + sq) / (2.0 * a) : (2.0 * c0) / (-b - sq);
}

ThresholdResult compute_threshold(const Scenario& sc, Method method, Branch branch) {
    switch (method) {
        case Method::newton: {
            const HeteroclinicSolution s = solve_heteroclinic(sc, branch);
            ThresholdResult r = make_result(sc, method, branch, s.n_p);
            r.diagnostics["tau_i"] = s.tau_i;
            r.diagnostics["residual"] = s.residual;
            r.diagnostics["iterations"] = s.iterations;
            return r;
        }
        case Method::bisection: {
            const double n = heteroclinic_bisection(sc, branch, default_bracket(sc, branch));
            return make_result(sc, method, branch, n);
        }
        case Method::quad_damping: return quad_damping_threshold(sc, branch);
        case Method::cubic: return cubic_threshold(sc, branch);
        case Method::piecewise_linear: return piecewise_linear_threshold(sc, branch);
        case Method::melnikov1: return melnikov_threshold(sc, 1, branch);
        case Method::melnikov3: return melnikov_threshold(sc, 3, branch);
        case Method::melnikov5: return melnikov_threshold(sc, 5, branch);
        case Method::ext_melnikov_1: return ext_melnikov_1_threshold(sc, branch);
        case Method::ext_melnikov_2: return ext_melnikov_2_threshold(sc, branch);
    }
    throw ValidationError("unknown method");
}

}  // namespace surfride
