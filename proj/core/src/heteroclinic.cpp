#include "surfride/heteroclinic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "surfride/error.hpp"

namespace surfride {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Dimensional surge field in (s, u) = (xi / lambda, u).
struct DimField {
    const Scenario& sc;
    double lam, k, c, m, f, q, sq;

    explicit DimField(const Scenario& s)
        : sc(s),
          lam(s.wave.wavelength),
          k(s.wave.k_w),
          c(s.wave.celerity),
          m(s.vessel.ship.total_mass()),
          f(s.f_w),
          q(s.q()),
          sq(std::sqrt(s.q())) {}

    State2 rhs(const State2& x, double n) const {
        return {(x[1] - c) / lam, (thrust(sc.vessel.prop, x[1], n) -
                                   resistance(sc.vessel.res, x[1]) - f * std::sin(kTwoPi * x[0])) /
                                      m};
    }
    double a12() const { return 1.0 / lam; }
    double a21(double s) const { return -kTwoPi * f * std::cos(kTwoPi * s) / m; }
    double a22(double u, double n) const {
        const auto& p = sc.vessel.prop;
        return (p.tau1() * n + 2.0 * p.tau2() * u - resistance_slope(sc.vessel.res, u)) / m;
    }
    State2 nd_vec(const State2& d) const { return {kTwoPi * d[0], k * d[1] / sq}; }
    double nd_norm2(const State2& h) const {
        const State2 w = nd_vec(h);
        return w[0] * w[0] + w[1] * w[1];
    }
    // RK4 with compensated accumulation of the increments; the matching defect
    // amplifies roundoff by roughly 1 / eps_h over long orbits.
    State2 flow(State2 x, double n, double t, std::size_t steps) const {
        const double h = t / static_cast<double>(steps);
        const auto at = [&](const State2& a, double sc, const State2& k) {
            return rhs({a[0] + sc * k[0], a[1] + sc * k[1]}, n);
        };
        State2 comp{0.0, 0.0};
        for (std::size_t i = 0; i < steps; ++i) {
            const State2 k1 = rhs(x, n);
            const State2 k2 = at(x, 0.5 * h, k1);
            const State2 k3 = at(x, 0.5 * h, k2);
            const State2 k4 = at(x, h, k3);
            for (int c = 0; c < 2; ++c) {
                const double y = h / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]) - comp[c];
                const double sum = x[c] + y;
                comp[c] = (sum - x[c]) - y;
                x[c] = sum;
            }
        }
        return x;
    }
};

double eig_root(double a22, double prod, double sign) {
    return 0.5 * (a22 + sign * std::sqrt(a22 * a22 + 4.0 * prod));
}

using Vec12 = Eigen::Matrix<double, 12, 1>;
using Mat12 = Eigen::Matrix<double, 12, 12>;

// Unknowns: n, s_a, u_a, s_o, u_o, mu_a, mu_o, h_a(2), h_o(2), T.
enum Idx { N = 0, SA, UA, SO, UO, MA, MO, HA0, HA1, HO0, HO1, TI };

struct Problem {
    DimField fld;
    double eps;
    std::size_t steps = 1;

    // Rows 0..9, each scaled to nondimensional units.
    Eigen::Matrix<double, 10, 1> algebraic(const Vec12& z) const {
        Eigen::Matrix<double, 10, 1> r;
        const double n = z[N];
        const State2 fa = fld.rhs({z[SA], z[UA]}, n);
        const State2 fo = fld.rhs({z[SO], z[UO]}, n);
        r[0] = kTwoPi * fa[0] / fld.sq;
        r[1] = fld.k * fa[1] / fld.q;
        r[2] = kTwoPi * fo[0] / fld.sq;
        r[3] = fld.k * fo[1] / fld.q;
        const double pa = fld.a12() * fld.a21(z[SA]);
        const double po = fld.a12() * fld.a21(z[SO]);
        const double ga = fld.a22(z[UA], n);
        const double go = fld.a22(z[UO], n);
        if (!(ga * ga + 4.0 * pa >= 0.0) || !(go * go + 4.0 * po >= 0.0))
            throw ConvergenceError("heteroclinic_newton: iterate left the saddle region");
        r[4] = (z[MA] - eig_root(ga, pa, 1.0)) / fld.sq;
        r[5] = (z[MO] - eig_root(go, po, -1.0)) / fld.sq;
        const double row = kTwoPi / (fld.sq * eps);
        r[6] = (-z[MA] * z[HA0] + fld.a12() * z[HA1]) * row;
        r[7] = (-z[MO] * z[HO0] + fld.a12() * z[HO1]) * row;
        r[8] = fld.nd_norm2({z[HA0], z[HA1]}) / (eps * eps) - 1.0;
        r[9] = fld.nd_norm2({z[HO0], z[HO1]}) / (eps * eps) - 1.0;
        return r;
    }
    State2 forward(const Vec12& z) const {
        return fld.flow({z[SA] + z[HA0], z[UA] + z[HA1]}, z[N], z[TI], steps);
    }
    State2 backward(const Vec12& z) const {
        return fld.flow({z[SO] + z[HO0], z[UO] + z[HO1]}, z[N], -z[TI], steps);
    }
    State2 match(const State2& a, const State2& b) const {
        return fld.nd_vec({a[0] - b[0], a[1] - b[1]});
    }
    Vec12 residual(const Vec12& z) const {
        Vec12 r;
        r.head<10>() = algebraic(z);
        const State2 d = match(forward(z), backward(z));
        r[10] = d[0];
        r[11] = d[1];
        return r;
    }
};

// (s, t) samples along an orbit while s moves monotonically toward s_target.
std::vector<std::pair<double, double>> record_orbit(const DimField& fld, State2 x, double n,
                                                    double s_target, double dir, double dt,
                                                    double t_max) {
    std::vector<std::pair<double, double>> out{{x[0], 0.0}};
    const double toward = s_target > x[0] ? 1.0 : -1.0;
    const auto f_n = [&](const State2& s) { return fld.rhs(s, n); };
    for (double t = dt; t < t_max; t += dt) {
        const State2 nx = rk4_step(f_n, x, dir * dt);
        if (!std::isfinite(nx[1]) || (nx[0] - x[0]) * toward <= 0.0) break;
        out.emplace_back(nx[0], t);
        if ((nx[0] - s_target) * toward >= 0.0) break;
        x = nx;
    }
    return out;
}

double time_at(const std::vector<std::pair<double, double>>& orbit, double s) {
    const bool rising = orbit.back().first > orbit.front().first;
    auto it = std::lower_bound(orbit.begin(), orbit.end(), s, [&](const auto& p, double v) {
        return rising ? p.first < v : p.first > v;
    });
    if (it == orbit.begin()) return it->second;
    if (it == orbit.end()) return orbit.back().second;
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    return lo.second + (s - lo.first) / (hi.first - lo.first) * (hi.second - lo.second);
}

Vec12 pack(double n, const SaddlePair& p, double t) {
    Vec12 z;
    z << n, p.x_alpha[0], p.x_alpha[1], p.x_omega[0], p.x_omega[1], p.mu_alpha, p.mu_omega,
        p.h_alpha[0], p.h_alpha[1], p.h_omega[0], p.h_omega[1], t;
    return z;
}

SaddlePair unpack(const Vec12& z, double eps) {
    SaddlePair p;
    p.x_alpha = {z[SA], z[UA]};
    p.x_omega = {z[SO], z[UO]};
    p.mu_alpha = z[MA];
    p.mu_omega = z[MO];
    p.h_alpha = {z[HA0], z[HA1]};
    p.h_omega = {z[HO0], z[HO1]};
    p.eps_h = eps;
    return p;
}

std::optional<Vec12> initial_guess(const Scenario& sc, Branch branch, double n_guess,
                                   const HeteroclinicOptions& opt) {
    const SurgeSystem sys = build_system(sc, n_guess, 5);
    if (!(std::abs(sys.rbar) < 1.0)) return std::nullopt;
    DimField fld(sc);
    const SaddlePair p = saddle_pair(sys, branch, opt.eps_h);
    const double dt = opt.dtau / fld.sq;
    const double t_max = 1e3 / fld.sq;
    const auto fw = record_orbit(fld, {p.x_alpha[0] + p.h_alpha[0], p.x_alpha[1] + p.h_alpha[1]},
                                 n_guess, p.x_omega[0], 1.0, dt, t_max);
    const auto bw = record_orbit(fld, {p.x_omega[0] + p.h_omega[0], p.x_omega[1] + p.h_omega[1]},
                                 n_guess, p.x_alpha[0], -1.0, dt, t_max);
    if (fw.size() < 2 || bw.size() < 2) return std::nullopt;
    // Meeting plane where both orbits need the same time: t_f grows, t_b shrinks along s.
    const double s_lo = std::min(p.x_alpha[0], p.x_omega[0]);
    const double s_hi = std::max(p.x_alpha[0], p.x_omega[0]);
    const double f_reach = fw.back().first;
    const double b_reach = bw.back().first;
    const double a_end = std::clamp(b_reach, s_lo, s_hi);
    const double o_end = std::clamp(f_reach, s_lo, s_hi);
    const ScalarFn gap = [&](double s) { return time_at(fw, s) - time_at(bw, s); };
    const auto bracket = scan_sign_change(gap, a_end, o_end, 200);
    if (!bracket) {
        // No equal-time plane: stop at the shorter leg so neither flow overshoots its orbit.
        const double s_near = std::abs(gap(a_end)) < std::abs(gap(o_end)) ? a_end : o_end;
        return pack(n_guess, p, std::min(time_at(fw, s_near), time_at(bw, s_near)));
    }
    const double s_meet = bracket->first == bracket->second
                              ? bracket->first
                              : find_root(gap, bracket->first, bracket->second, 1e-12);
    const double tf = time_at(fw, s_meet);
    const double tb = time_at(bw, s_meet);
    return pack(n_guess, p, 0.5 * (tf + tb));
}

}  // namespace

SaddlePair saddle_pair(const SurgeSystem& sys, Branch branch, double eps_h) {
    if (!(std::abs(sys.rbar) < 1.0)) throw NoSolutionError("saddle_pair: |rbar| >= 1");
    if (!(eps_h > 0.0)) throw ValidationError("saddle_pair: eps_h must be > 0");
    const double lam = kTwoPi / sys.k_w;
    const double sq = std::sqrt(sys.q);
    const double ys = saddle_position(sys);
    const bool surf = branch == Branch::surf_riding;
    SaddlePair p;
    p.eps_h = eps_h;
    const double s_up = ys / kTwoPi;
    const double s_a = surf ? s_up : s_up - 1.0;
    const double s_o = surf ? s_up - 1.0 : s_up;
    p.x_alpha = {s_a, sys.c_w};
    p.x_omega = {s_o, sys.c_w};
    // Dimensional Jacobian [[0, 1/lam], [a21, a22]]; a21/lam = -q cos(2 pi s).
    const double a22 = -sys.abar[1] * sq;
    p.mu_alpha = eig_root(a22, -sys.q * std::cos(kTwoPi * s_a), 1.0);
    p.mu_omega = eig_root(a22, -sys.q * std::cos(kTwoPi * s_o), -1.0);
    auto scaled = [&](double mu, double sign) {
        const State2 h{1.0 / lam, mu};
        const double dy = kTwoPi * h[0];
        const double dv = sys.k_w * h[1] / sq;
        const double norm = std::hypot(dy, dv);
        return State2{sign * eps_h * h[0] / norm, sign * eps_h * h[1] / norm};
    };
    p.h_alpha = scaled(p.mu_alpha, surf ? -1.0 : 1.0);
    p.h_omega = scaled(p.mu_omega, surf ? 1.0 : -1.0);
    return p;
}

HeteroclinicSolution heteroclinic_newton(const Scenario& sc, Branch branch, double n_guess,
                                         const HeteroclinicOptions& opt) {
    const auto guess = initial_guess(sc, branch, n_guess, opt);
    if (!guess)
        throw ConvergenceError(
            "heteroclinic_newton: guess does not produce orbits reaching the mid-plane");
    Problem pb{DimField(sc), opt.eps_h};
    Vec12 z = *guess;
    Vec12 typ;
    typ << z[N], 1.0, pb.fld.c, 1.0, pb.fld.c, pb.fld.sq, pb.fld.sq,
        opt.eps_h / kTwoPi, opt.eps_h * pb.fld.sq / pb.fld.k, opt.eps_h / kTwoPi,
        opt.eps_h * pb.fld.sq / pb.fld.k, z[TI];
    auto set_steps = [&] {
        pb.steps = std::max<std::size_t>(
            1, static_cast<std::size_t>(std::ceil(z[TI] * pb.fld.sq / opt.dtau)));
    };

    HeteroclinicSolution sol;
    sol.branch = branch;
    double update = 0.0;
    int it = 0;
    for (; it < opt.max_iter; ++it) {
        set_steps();
        const State2 fw = pb.forward(z);
        const State2 bw = pb.backward(z);
        Vec12 r;
        r.head<10>() = pb.algebraic(z);
        {
            const State2 d = pb.match(fw, bw);
            r[10] = d[0];
            r[11] = d[1];
        }
        // Long orbits make the defect strongly curved in n and T; a failed line
        // search rebuilds the Jacobian with a smaller difference step.
        const double r0 = r.norm();
        Vec12 dz;
        Vec12 zn;
        bool descended = false;
        double fd = opt.fd_step;
        for (int attempt = 0; attempt < 3 && !descended; ++attempt, fd *= 0.1) {
            Mat12 jac = Mat12::Zero();
            for (int j = 0; j < 12; ++j) {
                const double h = fd * std::max(std::abs(z[j]), std::abs(typ[j]));
                Vec12 zp = z, zm = z;
                zp[j] += h;
                zm[j] -= h;
                jac.col(j).head<10>() = (pb.algebraic(zp) - pb.algebraic(zm)) / (2.0 * h);
                const bool moves_fw = j == N || j == SA || j == UA || j == HA0 || j == HA1 || j == TI;
                const bool moves_bw = j == N || j == SO || j == UO || j == HO0 || j == HO1 || j == TI;
                if (!moves_fw && !moves_bw) continue;
                const State2 fp = moves_fw ? pb.forward(zp) : fw;
                const State2 fm = moves_fw ? pb.forward(zm) : fw;
                const State2 bp = moves_bw ? pb.backward(zp) : bw;
                const State2 bm = moves_bw ? pb.backward(zm) : bw;
                const State2 dp = pb.match(fp, bp);
                const State2 dm = pb.match(fm, bm);
                jac(10, j) = (dp[0] - dm[0]) / (2.0 * h);
                jac(11, j) = (dp[1] - dm[1]) / (2.0 * h);
            }
            dz = jac.fullPivLu().solve(-r);
            if (!dz.allFinite())
                throw ConvergenceError("heteroclinic_newton: singular Jacobian", r0);
            // Backtrack while the residual grows.
            double step = 1.0;
            zn = z + dz;
            for (int ls = 0; ls < 8 && !descended; ++ls) {
                try {
                    descended = pb.residual(zn).norm() <= r0;
                } catch (const ConvergenceError&) {
                }
                if (!descended) {
                    step *= 0.5;
                    zn = z + step * dz;
                }
            }
        }
        if (!descended && !(r0 < 1e-8))
            throw ConvergenceError("heteroclinic_newton: line search found no descent after " +
                                       std::to_string(it + 1) + " iterations",
                                   r0);
        if (!descended) zn = z + dz;
        // Measured on the full step so that a damped step cannot fake convergence.
        update = 0.0;
        for (int j = 0; j < 12; ++j)
            update = std::max(update, std::abs(dz[j]) / std::max(std::abs(zn[j]), std::abs(typ[j])));
        z = zn;
        if (!(z[TI] > 0.0) || !(z[N] > 0.0))
            throw ConvergenceError("heteroclinic_newton: iterate left the admissible region",
                                   r0);
        if (update < opt.update_tol) {
            ++it;
            break;
        }
    }
    set_steps();
    const Vec12 r = pb.residual(z);
    sol.n_p = z[N];
    sol.tau_i = z[TI];
    sol.saddles = unpack(z, opt.eps_h);
    sol.residual = std::hypot(r[10], r[11]);
    sol.update_norm = update;
    sol.iterations = it;
    if (update >= opt.update_tol || !(r.norm() < 1e-8))
        throw ConvergenceError("heteroclinic_newton: no convergence after " +
                                   std::to_string(it) + " iterations",
                               r.norm());
    sol.rbar = sc.rbar(sol.n_p);
    sol.fn_cr = sc.nominal_froude(sol.n_p);
    return sol;
}

ManifoldFate manifold_fate(const SurgeSystem& sys, Branch branch, const ShootingOptions& opt) {
    const double ys = saddle_position(sys);
    const double a21 = -std::cos(ys);
    const double a22 = -sys.abar[1];
    const double mu = 0.5 * (a22 + std::sqrt(a22 * a22 + 4.0 * a21));
    const double norm = std::hypot(1.0, mu);
    const bool surf = branch == Branch::surf_riding;
    const double sign = surf ? -1.0 : 1.0;
    const double y0 = surf ? ys : ys - kTwoPi;
    const double y_end = surf ? ys - kTwoPi : ys;
    State2 x{y0 + sign * opt.eps_h / norm, sign * opt.eps_h * mu / norm};
    const auto rhs = [&sys](const State2& s) { return sys.rhs(s); };
    const auto steps = static_cast<std::size_t>(std::ceil(opt.tau_max / opt.dtau));
    for (std::size_t i = 0; i < steps; ++i) {
        x = rk4_step(rhs, x, opt.dtau);
        if (sign * x[1] <= 0.0) return ManifoldFate::captured;
        if (sign * (x[0] - y_end) >= 0.0) return ManifoldFate::escaped;
    }
    throw ConvergenceError("manifold_fate: undecided by tau_max");
}

double bisect_family(const SystemFamily& family, double a, double b, Branch branch,
                     const ShootingOptions& opt) {
    if (a > b) std::swap(a, b);
    const ManifoldFate fa = manifold_fate(family(a), branch, opt);
    const ManifoldFate fb = manifold_fate(family(b), branch, opt);
    if (fa == fb) throw ValidationError("heteroclinic_bisection: both bracket ends share a fate");
    while (b - a > opt.rel_tol * std::max(std::abs(a), std::abs(b))) {
        const double mid = 0.5 * (a + b);
        if (manifold_fate(family(mid), branch, opt) == fa)
            a = mid;
        else
            b = mid;
    }
    return 0.5 * (a + b);
}

double heteroclinic_bisection(const Scenario& sc, Branch branch,
                              std::pair<double, double> n_bracket, const ShootingOptions& opt) {
    const SystemFamily family = [&sc](double n) { return build_system(sc, n, 5); };
    return bisect_family(family, n_bracket.first, n_bracket.second, branch, opt);
}

std::pair<double, double> default_bracket(const Scenario& sc, Branch branch) {
    const TangentRates t = tangent_bifurcation_rates(sc);
    const double width = t.n_high - t.n_low;
    const double lo = t.n_low + 1e-4 * width;
    const double hi = t.n_high - 1e-4 * width;
    // Dissipative damping puts the surf-riding connection at rbar < 0 and the
    // wave-blocking one at rbar > 0, so the zero-torque rate separates them.
    double split = 0.5 * (t.n_low + t.n_high);
    try {
        const double n0 = rate_for_speed(sc.vessel.res, sc.vessel.prop, sc.wave.celerity);
        if (n0 > lo && n0 < hi) split = n0;
    } catch (const NoSolutionError&) {
    }
    if (branch == Branch::surf_riding) return {lo, split};
    return {split, hi};
}

HeteroclinicSolution solve_heteroclinic(const Scenario& sc, Branch branch,
                                        const HeteroclinicOptions& opt) {
    ShootingOptions so;
    so.eps_h = opt.eps_h;
    so.dtau = opt.dtau;
    so.rel_tol = 1e-9;
    double seed = 0.0;
    try {
        seed = heteroclinic_bisection(sc, branch, default_bracket(sc, branch), so);
    } catch (const ValidationError&) {
        // Non-dissipative damping can move the connection past the zero-torque rate.
        const TangentRates t = tangent_bifurcation_rates(sc);
        const double width = t.n_high - t.n_low;
        seed = heteroclinic_bisection(sc, branch,
                                      {t.n_low + 1e-4 * width, t.n_high - 1e-4 * width}, so);
    }
    // Weak damping narrows Newton's basin; tighten the seed once and retry.
    try {
        return heteroclinic_newton(sc, branch, seed, opt);
    } catch (const ConvergenceError&) {
    }
    const double half = so.rel_tol * seed;
    so.rel_tol = 1e-11;
    seed = heteroclinic_bisection(sc, branch, {seed - half, seed + half}, so);
    return heteroclinic_newton(sc, branch, seed, opt);
}

}  // namespace surfride
