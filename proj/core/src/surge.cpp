#include "surfride/surge.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "surfride/error.hpp"

namespace surfride {
namespace {

constexpr double kPi = std::numbers::pi;

double wrap_pi(double y) {
    double w = std::remainder(y, 2.0 * kPi);
    if (w <= -kPi) w += 2.0 * kPi;
    return w;
}

double binomial(int n, int k) {
    double b = 1.0;
    for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
    return b;
}

}  // namespace

std::string to_string(Branch b) {
    return b == Branch::surf_riding ? "surf_riding" : "wave_blocking";
}

Branch parse_branch(const std::string& name) {
    if (name == "surf" || name == "surf_riding") return Branch::surf_riding;
    if (name == "block" || name == "wave_blocking") return Branch::wave_blocking;
    throw ValidationError("unknown branch '" + name + "' (expected surf or block)");
}

WaveCondition WaveCondition::from_ratio(double ship_length, double lambda_ratio,
                                        double steepness, double gravity) {
    if (!(ship_length > 0.0) || !(lambda_ratio > 0.0) || !(steepness > 0.0) ||
        !(gravity > 0.0))
        throw ValidationError("wave: need L, lambda/L, H/lambda and g all > 0");
    WaveCondition w;
    w.lambda_ratio = lambda_ratio;
    w.steepness = steepness;
    w.wavelength = lambda_ratio * ship_length;
    w.k_w = 2.0 * kPi / w.wavelength;
    w.celerity = std::sqrt(gravity / w.k_w);
    w.amplitude = 0.5 * steepness * w.wavelength;
    return w;
}

double Scenario::net_thrust(double n) const {
    return thrust(vessel.prop, wave.celerity, n) - resistance(vessel.res, wave.celerity);
}
double Scenario::rbar(double n) const { return net_thrust(n) / f_w; }
double Scenario::q() const { return f_w * wave.k_w / vessel.ship.total_mass(); }
double Scenario::nominal_speed(double n) const { return self_propulsion_speed(vessel, n); }
double Scenario::nominal_froude(double n) const { return vessel.froude(nominal_speed(n)); }

Scenario make_scenario(const Vessel& vessel, const WaveCondition& wave) {
    return make_scenario(vessel, wave, fk_amplitude(vessel.ship, wave.k_w, wave.amplitude).f_w);
}

Scenario make_scenario(const Vessel& vessel, const WaveCondition& wave, double f_w) {
    if (!(f_w > 0.0)) throw ValidationError("scenario: f_w must be > 0");
    vessel.ship.validate();
    return Scenario{vessel, wave, f_w};
}

double calibrate_fw_lower_tangent(const Vessel& vessel, const WaveCondition& wave,
                                  double fn_lower) {
    const double n_low = rate_for_speed(vessel.res, vessel.prop, fn_lower * vessel.speed_scale());
    const double f_w = resistance(vessel.res, wave.celerity) -
                       thrust(vessel.prop, wave.celerity, n_low);
    if (!(f_w > 0.0))
        throw NoSolutionError("calibration: lower tangent speed is not below wave celerity");
    return f_w;
}

TangentRates tangent_bifurcation_rates(const Scenario& sc) {
    if (!(sc.f_w > 0.0)) throw ValidationError("tangent_bifurcation_rates: f_w must be > 0");
    const auto& prop = sc.vessel.prop;
    const double c = sc.wave.celerity;
    // Net thrust at u = c grows with n above the vertex of the quadratic.
    const double vertex = std::max(-prop.tau1() * c / (2.0 * prop.tau0()), 0.0);
    auto solve = [&](double target) {
        const ScalarFn g = [&](double n) { return sc.net_thrust(n) - target; };
        double lo = vertex > 0.0 ? vertex : 1e-9;
        if (g(lo) > 0.0)
            throw NoSolutionError("tangent_bifurcation_rates: wave force exceeds the "
                                  "achievable net-thrust deficit");
        double hi = std::max(2.0 * lo, 1.0);
        for (int i = 0; g(hi) < 0.0; ++i) {
            if (i > 200) throw NoSolutionError("tangent_bifurcation_rates: no upper bracket");
            hi *= 2.0;
        }
        return find_root(g, lo, hi, 1e-15);
    };
    TangentRates out;
    out.n_low = solve(-sc.f_w);
    out.n_high = solve(sc.f_w);
    out.fn_low = sc.nominal_froude(out.n_low);
    out.fn_high = sc.nominal_froude(out.n_high);
    return out;
}

double SurgeSystem::damping(double v) const {
    double acc = 0.0;
    for (int k = order; k >= 1; --k) acc = (acc + abar[k]) * v;
    return acc;
}

double SurgeSystem::damping_slope(double v) const {
    double acc = 0.0;
    for (int k = order; k >= 1; --k) acc = acc * v + k * abar[k];
    return acc;
}

SurgeSystem build_system(const Scenario& sc, double n_p, int order) {
    if (!(n_p > 0.0)) throw ValidationError("build_system: n_p must be > 0");
    if (order < 1 || order > 5) throw ValidationError("build_system: order must be in 1..5");
    const auto& prop = sc.vessel.prop;
    const auto& r = sc.vessel.res.r;
    // c_j = r_j - (1-t)(1-w)^j rho kappa_j n^(2-j) D^(4-j); kappa_j = 0 for j >= 3.
    std::array<double, 6> cj{};
    for (int j = 1; j <= 5; ++j) cj[j] = r[j - 1];
    cj[1] -= prop.tau1() * n_p;
    cj[2] -= prop.tau2();

    SurgeSystem s;
    s.order = order;
    s.f_w = sc.f_w;
    s.n_p = n_p;
    s.k_w = sc.wave.k_w;
    s.c_w = sc.wave.celerity;
    s.total_mass = sc.vessel.ship.total_mass();
    s.q = sc.q();
    s.rbar = sc.rbar(n_p);
    for (int k = 1; k <= order; ++k) {
        double a = 0.0;
        for (int j = k; j <= order; ++j) a += cj[j] * binomial(j, k) * std::pow(s.c_w, j - k);
        a /= std::pow(s.k_w, k - 1) * s.total_mass;
        s.abar[k] = a * std::pow(s.q, 0.5 * k - 1.0);
    }
    return s;
}

SurgeSystem make_nondim_system(const std::array<double, 5>& abar, double rbar) {
    SurgeSystem s;
    s.order = 5;
    for (int k = 1; k <= 5; ++k) s.abar[k] = abar[k - 1];
    s.rbar = rbar;
    s.q = 1.0;
    s.k_w = 1.0;
    s.total_mass = 1.0;
    s.f_w = 1.0;
    return s;
}

std::string to_string(EquilibriumKind kind) {
    switch (kind) {
        case EquilibriumKind::stable: return "stable";
        case EquilibriumKind::saddle: return "saddle";
        case EquilibriumKind::unstable: return "unstable";
        case EquilibriumKind::degenerate: return "degenerate";
    }
    return "unknown";
}

std::vector<Equilibrium> equilibria(const SurgeSystem& sys) {
    std::vector<Equilibrium> out;
    if (std::abs(sys.rbar) > 1.0) return out;
    auto classify = [&](double y) {
        Equilibrium e;
        e.y = wrap_pi(y);
        // Jacobian [[0, 1], [-cos y, -abar_1]].
        const double tr = -sys.abar[1];
        const double det = std::cos(y);
        const double disc = tr * tr - 4.0 * det;
        if (disc >= 0.0) {
            const double s = std::sqrt(disc);
            e.eig_re = {0.5 * (tr + s), 0.5 * (tr - s)};
        } else {
            e.eig_re = {0.5 * tr, 0.5 * tr};
        }
        if (det < 0.0)
            e.kind = EquilibriumKind::saddle;
        else if (det == 0.0)
            e.kind = EquilibriumKind::degenerate;
        else
            e.kind = tr <= 0.0 ? EquilibriumKind::stable : EquilibriumKind::unstable;
        return e;
    };
    const double a = std::asin(sys.rbar);
    if (std::abs(sys.rbar) == 1.0) {
        out.push_back(classify(a));
        out.back().kind = EquilibriumKind::degenerate;
        return out;
    }
    out.push_back(classify(a));
    out.push_back(classify(kPi - a));
    return out;
}

double saddle_position(const SurgeSystem& sys) {
    if (!(std::abs(sys.rbar) < 1.0)) throw NoSolutionError("no saddle: |rbar| >= 1");
    return kPi - std::asin(sys.rbar);
}

Trajectory integrate(const SurgeSystem& sys, PhasePoint p0, double tau_end,
                     const IntegrateOptions& opt) {
    if (!(opt.dtau > 0.0) || !(tau_end > 0.0))
        throw ValidationError("integrate: dtau and tau_end must be > 0");
    const auto rhs = [&sys](const State2& x) { return sys.rhs(x); };
    auto run = [&](double h, Trajectory* keep) {
        const auto steps = static_cast<std::size_t>(std::ceil(tau_end / h - 1e-9));
        const double dt = tau_end / static_cast<double>(steps);
        State2 x{p0.y, p0.v};
        const std::size_t stride = std::max<std::size_t>(opt.stride, 1);
        if (keep) {
            keep->samples.reserve(steps / stride + 2);
            keep->samples.push_back({0.0, p0});
        }
        for (std::size_t i = 1; i <= steps; ++i) {
            x = rk4_step(rhs, x, dt);
            if (!(std::abs(x[1]) <= opt.divergence_bound))
                throw ConvergenceError("integrate: |v| exceeded divergence bound", x[1]);
            if (keep && (i % stride == 0 || i == steps))
                keep->samples.push_back({static_cast<double>(i) * dt, {x[0], x[1]}});
        }
        return x;
    };
    Trajectory out;
    const State2 coarse = run(opt.dtau, &out);
    if (opt.estimate_error) {
        const State2 fine = run(0.5 * opt.dtau, nullptr);
        out.local_error = std::hypot(coarse[0] - fine[0], coarse[1] - fine[1]) / 15.0;
    }
    return out;
}

double hamiltonian(const SurgeSystem& sys, PhasePoint p) {
    return 0.5 * p.v * p.v - std::cos(p.y) - sys.rbar * p.y;
}

std::string to_string(Asymptotic a) {
    switch (a) {
        case Asymptotic::surf_riding: return "surf_riding";
        case Asymptotic::overtaken_periodic: return "overtaken_periodic";
        case Asymptotic::overtaking_periodic: return "overtaking_periodic";
    }
    return "unknown";
}

Asymptotic classify_asymptotics(const SurgeSystem& sys, PhasePoint p0,
                                const ClassifyOptions& opt) {
    std::vector<double> stable;
    for (const auto& e : equilibria(sys))
        if (e.kind == EquilibriumKind::stable) stable.push_back(e.y);

    const auto rhs = [&sys](const State2& x) { return sys.rhs(x); };
    State2 x{p0.y, p0.v};
    double tau = 0.0;
    // Trough crossings: y passing an odd multiple of pi, all in one direction.
    std::vector<double> crossings;
    int direction = 0;
    auto trough_index = [](double y) { return std::floor((y + kPi) / (2.0 * kPi)); };
    double cell = trough_index(x[0]);
    const auto max_steps = static_cast<std::size_t>(std::ceil(opt.tau_max / opt.dtau));
    for (std::size_t i = 0; i < max_steps; ++i) {
        for (double ys : stable)
            if (std::hypot(wrap_pi(x[0] - ys), x[1]) < opt.capture_radius)
                return Asymptotic::surf_riding;
        const State2 nx = rk4_step(rhs, x, opt.dtau);
        tau += opt.dtau;
        if (!std::isfinite(nx[1]) || std::abs(nx[1]) > 1e3)
            throw ConvergenceError("classify_asymptotics: trajectory diverged", nx[1]);
        if ((nx[1] < 0.0) != (x[1] < 0.0) && x[1] != 0.0) {
            crossings.clear();
            direction = 0;
        }
        const double ncell = trough_index(nx[0]);
        if (ncell != cell) {
            const int dir = ncell > cell ? 1 : -1;
            if (dir != direction) {
                crossings.clear();
                direction = dir;
            }
            const double frac = (ncell > cell ? (2.0 * ncell - 1.0) * kPi - x[0]
                                              : (2.0 * cell - 1.0) * kPi - x[0]) /
                                (nx[0] - x[0]);
            crossings.push_back(tau - opt.dtau + frac * opt.dtau);
            cell = ncell;
            const auto m = crossings.size();
            if (m >= static_cast<std::size_t>(opt.troughs) + 1) {
                const double p1 = crossings[m - 1] - crossings[m - 2];
                const double p2 = crossings[m - 2] - crossings[m - 3];
                if (std::abs(p1 - p2) <= opt.period_tol * std::abs(p1))
                    return direction < 0 ? Asymptotic::overtaken_periodic
                                         : Asymptotic::overtaking_periodic;
            }
        }
        x = nx;
    }
    throw ConvergenceError("classify_asymptotics: undecided after tau_max");
}

PhasePoint to_phase(const SurgeSystem& sys, DimState x) {
    return {sys.k_w * x.xi, sys.k_w * (x.u - sys.c_w) / std::sqrt(sys.q)};
}

DimState to_dimensional(const SurgeSystem& sys, PhasePoint p) {
    return {p.y / sys.k_w, sys.c_w + p.v * std::sqrt(sys.q) / sys.k_w};
}

std::vector<DimSample> integrate_dimensional(const Scenario& sc, double n_p, DimState x0,
                                             double t_end, double dt, std::size_t stride) {
    if (!(dt > 0.0) || !(t_end > 0.0))
        throw ValidationError("integrate_dimensional: dt and t_end must be > 0");
    const double m = sc.vessel.ship.total_mass();
    const double k = sc.wave.k_w;
    const double c = sc.wave.celerity;
    const auto rhs = [&](const State2& x) {
        return State2{x[1] - c, (thrust(sc.vessel.prop, x[1], n_p) -
                                 resistance(sc.vessel.res, x[1]) - sc.f_w * std::sin(k * x[0])) /
                                    m};
    };
    const auto steps = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
    const double h = t_end / static_cast<double>(steps);
    stride = std::max<std::size_t>(stride, 1);
    std::vector<DimSample> out;
    out.reserve(steps / stride + 2);
    out.push_back({0.0, x0});
    State2 x{x0.xi, x0.u};
    for (std::size_t i = 1; i <= steps; ++i) {
        x = rk4_step(rhs, x, h);
        if (i % stride == 0 || i == steps)
            out.push_back({static_cast<double>(i) * h, {x[0], x[1]}});
    }
    return out;
}

}  // namespace surfride
