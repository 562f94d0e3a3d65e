#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "surfride/hull.hpp"
#include "surfride/numeric.hpp"

namespace surfride {

// surf_riding: saddle-to-saddle orbit with v < 0 (ship overtaken by the wave).
// wave_blocking: orbit with v > 0 (ship overtaking the wave).
enum class Branch { surf_riding, wave_blocking };
std::string to_string(Branch b);
Branch parse_branch(const std::string& name);  // "surf" | "block" and the long names

struct WaveCondition {
    double lambda_ratio = 0.0;  // lambda / L
    double steepness = 0.0;     // H / lambda
    double wavelength = 0.0;    // [m]
    double k_w = 0.0;           // [1/m]
    double celerity = 0.0;      // [m/s]
    double amplitude = 0.0;     // [m]

    static WaveCondition from_ratio(double ship_length, double lambda_ratio, double steepness,
                                    double gravity = kStandardGravity);
};

// Ship in a regular following wave with surge force amplitude f_w.
struct Scenario {
    Vessel vessel;
    WaveCondition wave;
    double f_w = 0.0;

    double net_thrust(double n) const;  // T(c_w; n) - R(c_w)
    double rbar(double n) const;
    double q() const;  // f_w k_w / (M + Mx)
    double nominal_speed(double n) const;
    double nominal_froude(double n) const;
};

// f_w from the Froude-Krylov station sums.
Scenario make_scenario(const Vessel& vessel, const WaveCondition& wave);
Scenario make_scenario(const Vessel& vessel, const WaveCondition& wave, double f_w);

// f_w that places the lower tangent bifurcation at calm-water Froude number fn_lower.
double calibrate_fw_lower_tangent(const Vessel& vessel, const WaveCondition& wave,
                                  double fn_lower);

struct TangentRates {
    double n_low = 0.0;
    double n_high = 0.0;
    double fn_low = 0.0;
    double fn_high = 0.0;
};

// rbar(n_low) = -1 and rbar(n_high) = +1.
TangentRates tangent_bifurcation_rates(const Scenario& sc);

struct SurgeSystem {
    int order = 5;
    std::array<double, 6> abar{};  // abar[k] for k = 1..order; abar[0] unused
    double rbar = 0.0;
    double q = 1.0;
    double f_w = 0.0;
    double n_p = 0.0;
    double k_w = 0.0;
    double c_w = 0.0;
    double total_mass = 0.0;

    double damping(double v) const;        // sum_k abar_k v^k
    double damping_slope(double v) const;  // d/dv of damping
    State2 rhs(const State2& x) const {
        return {x[1], -damping(x[1]) - std::sin(x[0]) + rbar};
    }
};

// Nondimensional surge system y'' + sum abar_k y'^k + sin y = rbar at rate n_p.
// Resistance and thrust fits are both truncated at `order`.
SurgeSystem build_system(const Scenario& sc, double n_p, int order = 5);
// Bare nondimensional system (q = 1); abar[0] is abar_1.
SurgeSystem make_nondim_system(const std::array<double, 5>& abar, double rbar);

enum class EquilibriumKind { stable, saddle, unstable, degenerate };
std::string to_string(EquilibriumKind kind);

struct Equilibrium {
    double y = 0.0;  // principal interval (-pi, pi]
    EquilibriumKind kind = EquilibriumKind::degenerate;
    std::array<double, 2> eig_re{};  // real parts, descending
};

std::vector<Equilibrium> equilibria(const SurgeSystem& sys);
// Principal saddle y_s = pi - asin(rbar) (not wrapped). Requires |rbar| < 1.
double saddle_position(const SurgeSystem& sys);

struct PhasePoint {
    double y = 0.0;
    double v = 0.0;
};

struct TrajectorySample {
    double tau;
    PhasePoint p;
};

struct IntegrateOptions {
    double dtau = 1e-3;
    std::size_t stride = 1;       // keep every stride-th step
    bool estimate_error = false;  // rerun at dtau/2 and report the Richardson estimate
    double divergence_bound = 1e3;
};

struct Trajectory {
    std::vector<TrajectorySample> samples;
    double local_error = 0.0;  // |x(dtau) - x(dtau/2)| / 15 at tau_end
};

// Fixed-step RK4. Throws ConvergenceError when |v| exceeds the divergence bound.
Trajectory integrate(const SurgeSystem& sys, PhasePoint p0, double tau_end,
                     const IntegrateOptions& opt = {});

// v^2/2 - cos y - rbar y, conserved when every abar_k vanishes.
double hamiltonian(const SurgeSystem& sys, PhasePoint p);

enum class Asymptotic { surf_riding, overtaken_periodic, overtaking_periodic };
std::string to_string(Asymptotic a);

struct ClassifyOptions {
    double dtau = 1e-3;
    double tau_max = 1e4;
    double capture_radius = 1e-4;
    double period_tol = 1e-3;
    int troughs = 3;
};

// Throws ConvergenceError when neither outcome is reached by tau_max.
Asymptotic classify_asymptotics(const SurgeSystem& sys, PhasePoint p0,
                                const ClassifyOptions& opt = {});

// Dimensional state: xi = wave-fixed position of G [m], u = ship speed [m/s].
struct DimState {
    double xi = 0.0;
    double u = 0.0;
};

struct DimSample {
    double t;
    DimState x;
};

// Integrates (M+Mx) du/dt = T(u, n) - R(u) - f_w sin(k xi), dxi/dt = u - c_w.
std::vector<DimSample> integrate_dimensional(const Scenario& sc, double n_p, DimState x0,
                                             double t_end, double dt, std::size_t stride = 1);

PhasePoint to_phase(const SurgeSystem& sys, DimState x);
DimState to_dimensional(const SurgeSystem& sys, PhasePoint p);

}  // namespace surfride
