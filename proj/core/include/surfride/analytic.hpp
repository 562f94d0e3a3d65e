#pragma once

#include <array>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "surfride/surge.hpp"

namespace surfride {

enum class Method {
    newton,
    bisection,
    quad_damping,
    cubic,
    piecewise_linear,
    melnikov1,
    melnikov3,
    melnikov5,
    ext_melnikov_1,
    ext_melnikov_2
};
std::string to_string(Method m);
// Throws ValidationError listing the valid names.
Method parse_method(const std::string& name);
const std::vector<Method>& all_methods();
// Rows produced by `--method all`: both numerical solvers and one estimator per family.
const std::vector<Method>& default_methods();

struct ThresholdResult {
    Method method = Method::newton;
    Branch branch = Branch::surf_riding;
    double n_cr = 0.0;   // [1/s]
    double fn_cr = 0.0;  // nominal Froude number at n_cr
    std::map<std::string, double> diagnostics;
};

// Every estimator below works on the surf-riding orientation (orbit with v < 0).
// Wave blocking maps onto it through y -> -y, which flips rbar and the even
// damping coefficients.
SurgeSystem oriented(const SurgeSystem& sys, Branch branch);

// I_k = int_{-pi}^{pi} cos^k(y/2) dy = 2 sqrt(pi) Gamma((k+1)/2) / Gamma((k+2)/2).
double cos_power_integral(int k);

// gamma = -sum abar_j int_0^{v_e} v^{j+2} dv / int_0^{v_e} v^4 dv. The sign of v_e
// selects the side of the fit; v_e < 0 is the least-squares fit of the damping by
// gamma sgn(v) v^2 over [v_e, 0].
double fit_quadratic_damping(const SurgeSystem& sys, double v_e);
// Least-squares fit of the damping by beta v over [min(0, v_e), max(0, v_e)].
double fit_linear_damping(const SurgeSystem& sys, double v_e);

struct DampingFit {
    double v_e_gamma = 0.0;  // signed, = -2 (1 + 4 gamma^2)^(-1/4) at convergence
    double v_e_beta = -2.0;
    double gamma = 0.0;
    double beta = 0.0;
    double gamma1 = 0.0;  // residual of the quadratic fit on {v, v^2}
    double gamma2 = 0.0;
    double beta1 = 0.0;  // residual of the linear fit on {v, v^2}
    double beta2 = 0.0;
};

// Fits on the v < 0 side of an oriented system.
DampingFit fit_damping(const SurgeSystem& oriented_sys);

// Restoring corrections: least squares of sin y + mu y (y - pi)(y + pi) on y, y^3, y^5
// over [-pi, pi].
std::array<double, 3> restoring_corrections();

inline constexpr double kCubicMu = 8.0 / (3.0 * 3.14159265358979323846 * 3.14159265358979323846 *
                                          3.14159265358979323846);

struct CubicRestoring {
    double mu = kCubicMu;
    std::array<double, 3> roots{};  // a1 < a2 < a3 of y^3 - pi^2 y + rbar / mu
    double delta = 0.0;             // a3 - a1
    double a_tilde = 0.0;
    double mu_tilde = 0.0;
    double c_tilde = 0.0;  // -sqrt(mu_tilde / 2): orbit from a3 down to a1

    // mu~/2 - beta sqrt(mu~/2) - mu~ a~; zero at the heteroclinic connection.
    double condition(double beta) const;
    // Logistic orbit y~(tau) = 1 / (1 + exp(-(c~ tau - d))).
    double logistic(double tau, double d = 0.0) const;
    double logistic_rate(double tau, double d = 0.0) const;
};

// Largest |rbar| with three real roots: 16 / (9 sqrt 3).
double cubic_rbar_limit();
// Throws NoSolutionError when the roots collapse (|rbar| >= cubic_rbar_limit()).
CubicRestoring cubic_restoring(double rbar);
// rbar at which the cubic system with linear damping beta has its connection.
double cubic_critical_rbar(double beta);

// Piecewise-linear connection in nondimensional form.
struct PwlMatch {
    double y_defect = 0.0;     // Range-2 position minus its -5 pi / 2 boundary value
    double rate_defect = 0.0;  // Range-2 rate minus Z2
};
PwlMatch pwl_residual(double rbar, double beta, double tau_bar);
// First time the Range-2 arc reaches y = -5 pi / 2; negative when it never does.
double pwl_crossing_time(double rbar, double beta);

// Extended-Melnikov closed forms for the logistic orbit with rate c and weight exp(beta tau).
struct LogisticIntegrals {
    std::vector<double> I;  // I[n], n = 1..nmax (I[0] unused)
    std::vector<double> K;  // K[n], n = 0..nmax
};
// Throws ValidationError at a csc pole (beta / c a nonzero integer).
LogisticIntegrals logistic_integrals(double beta, double c, int nmax);

// Melnikov condition for the Hamiltonian separatrix of an oriented system:
// 2 pi rbar - sum_{k <= order} abar_k (-2)^k I_k.
double melnikov_function(const SurgeSystem& oriented_sys, int order);

// Roots of g(n) inside the tangent interval, scanned from the branch's end
// (n_low for surf riding, n_high for wave blocking). Evaluations that throw or
// return non-finite values are skipped. Throws NoSolutionError without a root.
double solve_in_tangent_interval(const Scenario& sc, Branch branch,
                                 const std::function<double(double)>& g, int samples = 400);

ThresholdResult quad_damping_threshold(const Scenario& sc, Branch branch);
ThresholdResult cubic_threshold(const Scenario& sc, Branch branch);
ThresholdResult piecewise_linear_threshold(const Scenario& sc, Branch branch);
ThresholdResult melnikov_threshold(const Scenario& sc, int order, Branch branch);
ThresholdResult ext_melnikov_1_threshold(const Scenario& sc, Branch branch);
ThresholdResult ext_melnikov_2_threshold(const Scenario& sc, Branch branch);

// Order-1 closed form: tau0 n^2 + tau1 c n + tau2 c^2 - R(c) = -4 f c_1 / (pi sqrt(f k (M+Mx)))
// with c_1 = r_1 - tau1 n; larger root. Surf-riding branch only.
double order1_closed_form_rate(const Scenario& sc);

// Extended-Melnikov integrals evaluated at one propeller rate.
struct ExtMelnikov1Terms {
    double sigma = 0.0;
    double eps_y = 0.0;
    double m_quadrature = 0.0;
    double closed_form = 0.0;  // closed-form condition with y := pi, LHS - RHS
    DampingFit fit;
};
ExtMelnikov1Terms ext_melnikov_1_terms(const SurgeSystem& oriented_sys);

struct ExtMelnikov2Terms {
    double sigma = 0.0;
    double rbar_star = 0.0;
    double m = 0.0;
    CubicRestoring cubic;
    DampingFit fit;
};
ExtMelnikov2Terms ext_melnikov_2_terms(const SurgeSystem& oriented_sys);

// Dispatches to the numerical solvers or the estimators above.
ThresholdResult compute_threshold(const Scenario& sc, Method method, Branch branch);

}  // namespace surfride
