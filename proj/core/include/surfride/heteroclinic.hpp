#pragma once

#include <functional>
#include <utility>

#include "surfride/surge.hpp"

namespace surfride {

// Newton state: (s, u) = (xi / lambda, ship speed). Offsets h are sized so that
// their image in nondimensional (y, v) has norm eps_h.
struct SaddlePair {
    State2 x_alpha{};  // saddle whose unstable manifold leaves
    State2 x_omega{};  // saddle one wavelength away, reached along its stable manifold
    double mu_alpha = 0.0;  // > 0 [1/s]
    double mu_omega = 0.0;  // < 0 [1/s]
    State2 h_alpha{};
    State2 h_omega{};
    double eps_h = 0.0;
};

SaddlePair saddle_pair(const SurgeSystem& sys, Branch branch, double eps_h = 1e-5);

struct HeteroclinicOptions {
    double eps_h = 1e-5;
    double dtau = 1e-4;
    double fd_step = 1e-7;
    double update_tol = 1e-10;
    int max_iter = 50;
};

struct HeteroclinicSolution {
    Branch branch = Branch::surf_riding;
    double n_p = 0.0;
    double tau_i = 0.0;  // matching time [s]
    SaddlePair saddles;
    double residual = 0.0;  // matching defect in nondimensional (y, v)
    double update_norm = 0.0;
    int iterations = 0;
    double fn_cr = 0.0;
    double rbar = 0.0;
};

// Solves the full saddle/eigen/offset/matching condition set for (n, tau_i).
// Throws ConvergenceError carrying the last residual.
HeteroclinicSolution heteroclinic_newton(const Scenario& sc, Branch branch, double n_guess,
                                         const HeteroclinicOptions& opt = {});

// Fate of the unstable manifold launched from the principal saddle toward the
// next saddle: captured (turns back first) or escaped (passes the next saddle).
enum class ManifoldFate { captured, escaped };

struct ShootingOptions {
    double eps_h = 1e-5;
    double dtau = 1e-4;
    double tau_max = 1e4;
    double rel_tol = 1e-6;
};

ManifoldFate manifold_fate(const SurgeSystem& sys, Branch branch,
                           const ShootingOptions& opt = {});

using SystemFamily = std::function<SurgeSystem(double)>;

// Bisection on the family parameter until the relative bracket width is rel_tol.
// Throws ValidationError when both ends share a fate.
double bisect_family(const SystemFamily& family, double a, double b, Branch branch,
                     const ShootingOptions& opt = {});

double heteroclinic_bisection(const Scenario& sc, Branch branch,
                              std::pair<double, double> n_bracket,
                              const ShootingOptions& opt = {});

// Bracket inside the tangent interval: the branch end nudged inward and the
// zero-torque rate (the midpoint when that rate is unavailable).
std::pair<double, double> default_bracket(const Scenario& sc, Branch branch);

// Newton seeded by a 1e-9 relative bisection inside default_bracket, widened to
// the whole tangent interval when that bracket does not straddle. When Newton
// fails the seed is refined to 1e-11 and Newton rerun once.
HeteroclinicSolution solve_heteroclinic(const Scenario& sc, Branch branch,
                                        const HeteroclinicOptions& opt = {});

}  // namespace surfride
