#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "surfride/analytic.hpp"
#include "surfride/error.hpp"

namespace surfride {
namespace {

constexpr double kPi = std::numbers::pi;

double binomial(int n, int k) {
    double b = 1.0;
    for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
    return b;
}

// pi x / sin(pi x), continuous through x = 0.
double pi_x_csc(double x) {
    const double px = kPi * x;
    if (std::abs(px) < 1e-4) return 1.0 + px * px / 6.0 + 7.0 * px * px * px * px / 360.0;
    return px / std::sin(px);
}

}  // namespace

LogisticIntegrals logistic_integrals(double beta, double c, int nmax) {
    if (!(c != 0.0) || !std::isfinite(c) || !std::isfinite(beta))
        throw ValidationError("logistic_integrals: need finite beta and nonzero c");
    if (nmax < 1) throw ValidationError("logistic_integrals: nmax must be >= 1");
    const double x = beta / c;
    const double nearest = std::round(x);
    if (nearest != 0.0 && std::abs(x - nearest) < 1e-9)
        throw ValidationError("logistic_integrals: csc pole at beta/c = " +
                              std::to_string(nearest) + "; perturb beta and re-evaluate");
    LogisticIntegrals out;
    out.I.assign(static_cast<std::size_t>(nmax) + 1, 0.0);
    out.K.assign(static_cast<std::size_t>(nmax) + 1, 0.0);
    out.I[1] = (c > 0.0 ? 1.0 : -1.0) * pi_x_csc(x);
    for (int n = 1; n < nmax; ++n)
        out.I[n + 1] = -(beta * beta - n * n * c * c) / (2.0 * n * (2.0 * n + 1.0) * c) * out.I[n];
    out.K[0] = out.I[1];
    for (int n = 0; n < nmax; ++n)
        out.K[n + 1] = ((n + 1) * c + beta) / ((n + 2) * c) * out.K[n];
    return out;
}

ExtMelnikov1Terms ext_melnikov_1_terms(const SurgeSystem& sys) {
    ExtMelnikov1Terms t;
    t.fit = fit_damping(sys);
    const double g = t.fit.gamma;
    const double g1 = t.fit.gamma1;
    const double g2 = t.fit.gamma2;
    const double s4 = 1.0 + 4.0 * g * g;
    t.sigma = sys.rbar + 2.0 * g / std::sqrt(s4);
    t.eps_y = std::atan(-2.0 * g);
    const double amp = 2.0 * std::pow(s4, -0.25);
    const auto integrand = [&](double y) {
        const double v = -amp * std::abs(std::cos(0.5 * (y + t.eps_y)));
        return (t.sigma - g1 * v - g2 * v * v) * std::exp(-2.0 * g * y);
    };
    double err = 0.0;
    t.m_quadrature = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        integrand, -kPi - t.eps_y, kPi - t.eps_y, 15, 1e-13, &err);
    if (!(err <= 1e-9 * std::max(1.0, std::abs(t.m_quadrature))))
        throw ConvergenceError("ext_melnikov_1: quadrature did not converge", err);

    // Closed-form condition with the free y set to pi.
    const double e = std::exp(-4.0 * g * kPi);
    const double lhs = -t.sigma * (-1.0 + e) / g;
    const double rhs = 8.0 * g1 * (1.0 + e) / ((1.0 + 16.0 * g * g) * std::pow(s4, 0.25)) -
                       2.0 * g2 * (-1.0 + e) / (g * s4 * std::sqrt(s4));
    t.closed_form = lhs - rhs;
    return t;
}

ThresholdResult ext_melnikov_1_threshold(const Scenario& sc, Branch branch) {
    const auto m = [&](double n) {
        return ext_melnikov_1_terms(oriented(build_system(sc, n), branch)).m_quadrature;
    };
    const double n = solve_in_tangent_interval(sc, branch, m);
    ThresholdResult r;
    r.method = Method::ext_melnikov_1;
    r.branch = branch;
    r.n_cr = n;
    r.fn_cr = sc.nominal_froude(n);
    r.diagnostics["rbar"] = sc.rbar(n);
    const ExtMelnikov1Terms t = ext_melnikov_1_terms(oriented(build_system(sc, n), branch));
    r.diagnostics["gamma"] = t.fit.gamma;
    r.diagnostics["Gamma1"] = t.fit.gamma1;
    r.diagnostics["Gamma2"] = t.fit.gamma2;
    r.diagnostics["sigma"] = t.sigma;
    // Side-by-side closed form; flagged when its threshold differs by more than 1%.
    double cf_fn = std::numeric_limits<double>::quiet_NaN();
    try {
        const auto cf = [&](double nn) {
            return ext_melnikov_1_terms(oriented(build_system(sc, nn), branch)).closed_form;
        };
        cf_fn = sc.nominal_froude(solve_in_tangent_interval(sc, branch, cf));
    } catch (const std::exception&) {
    }
    const double rel = std::abs(cf_fn - r.fn_cr) / r.fn_cr;
    r.diagnostics["closed_form_fn_cr"] = cf_fn;
    r.diagnostics["closed_form_rel_diff"] = rel;
    r.diagnostics["closed_form_flag"] = std::isfinite(rel) && rel <= 0.01 ? 0.0 : 1.0;
    return r;
}

ExtMelnikov2Terms ext_melnikov_2_terms(const SurgeSystem& sys) {
    ExtMelnikov2Terms t;
    t.fit = fit_damping(sys);
    const double beta = t.fit.beta;
    t.rbar_star = cubic_critical_rbar(beta);
    t.sigma = sys.rbar - t.rbar_star;
    t.cubic = cubic_restoring(t.rbar_star);
    const double c = t.cubic.c_tilde;
    if (!(std::abs(beta) < std::abs(c)))
        throw NoSolutionError("ext_melnikov_2: integrals diverge for |beta| >= |c~|");
    const LogisticIntegrals li = logistic_integrals(beta, c, 5);
    const double d = t.cubic.delta;
    const double a1 = t.cubic.roots[0];
    // sigma1 y + sigma3 y^3 + sigma5 y^5 with y = a1 + d y~, as a polynomial in y~.
    const auto sc = restoring_corrections();
    double b[6] = {0, 0, 0, 0, 0, 0};
    const int powers[3] = {1, 3, 5};
    for (int i = 0; i < 3; ++i) {
        const int p = powers[i];
        for (int m = 0; m <= p; ++m)
            b[m] += sc[i] * binomial(p, m) * std::pow(a1, p - m) * std::pow(d, m);
    }
    double kb = 0.0;
    for (int m = 0; m <= 5; ++m) kb += b[m] * li.K[m];
    t.m = t.sigma * d * li.I[1] - t.fit.beta1 * d * d * li.I[2] -
          t.fit.beta2 * d * d * d * li.I[3] - d * kb;
    return t;
}

ThresholdResult ext_melnikov_2_threshold(const Scenario& sc, Branch branch) {
    const auto m = [&](double n) {
        return ext_melnikov_2_terms(oriented(build_system(sc, n), branch)).m;
    };
    const double n = solve_in_tangent_interval(sc, branch, m);
    ThresholdResult r;
    r.method = Method::ext_melnikov_2;
    r.branch = branch;
    r.n_cr = n;
    r.fn_cr = sc.nominal_froude(n);
    r.diagnostics["rbar"] = sc.rbar(n);
    const ExtMelnikov2Terms t = ext_melnikov_2_terms(oriented(build_system(sc, n), branch));
    r.diagnostics["beta"] = t.fit.beta;
    r.diagnostics["beta1"] = t.fit.beta1;
    r.diagnostics["beta2"] = t.fit.beta2;
    r.diagnostics["sigma"] = t.sigma;
    r.diagnostics["rbar_star"] = t.rbar_star;
    r.diagnostics["c_tilde"] = t.cubic.c_tilde;
    return r;
}

}  // namespace surfride
