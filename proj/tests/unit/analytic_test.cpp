#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/quadrature/sinh_sinh.hpp>
#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "surfride/analytic.hpp"
#include "surfride/error.hpp"
#include "surfride/heteroclinic.hpp"
#include "surfride/sgisc.hpp"

using namespace surfride;
using surfride::testing::calibrated_dtmb;
using surfride::testing::fullscale;

namespace {

constexpr double kPi = std::numbers::pi;

SurgeSystem nondim(std::array<double, 5> abar, double rbar) { return make_nondim_system(abar, rbar); }

// Composite Simpson on [a, b] with n (even) intervals.
template <class F>
double simpson(const F& f, double a, double b, int n) {
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + h * i);
    return s * h / 3.0;
}

// log(1 + exp(x)) without overflow.
double softplus(double x) { return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

double i_integral(int n, double beta, double c) {
    const auto f = [&](double t) {
        return std::exp((-n * c + beta) * t - 2.0 * n * softplus(-c * t));
    };
    return std::pow(c, n) * boost::math::quadrature::sinh_sinh<double>().integrate(f, 1e-13);
}

double k_integral(int n, double beta, double c) {
    const auto f = [&](double t) { return std::exp((-c + beta) * t - (n + 2.0) * softplus(-c * t)); };
    return c * boost::math::quadrature::sinh_sinh<double>().integrate(f, 1e-13);
}

const Scenario& dtmb() {
    static const Scenario sc = calibrated_dtmb();
    return sc;
}

}  // namespace

TEST(MethodNames, RoundTripAndErrors) {
    for (Method m : all_methods()) EXPECT_EQ(parse_method(to_string(m)), m);
    EXPECT_EQ(default_methods().size(), 8u);
    try {
        parse_method("bogus");
        FAIL();
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("ext_melnikov_2"), std::string::npos);
    }
}

TEST(QuadraticDampingFit, SelfFit) {
    for (double ve : {0.7, 1.0, -2.0}) EXPECT_NEAR(fit_quadratic_damping(nondim({0, 0.3, 0, 0, 0}, 0), ve), -0.3, 1e-15);
}

TEST(QuadraticDampingFit, LinearTermByHand) {
    EXPECT_NEAR(fit_quadratic_damping(nondim({0.2, 0, 0, 0, 0}, 0), 1.0), -1.25 * 0.2, 1e-15);
}

TEST(QuadraticDampingFit, LinearInCoefficients) {
    const SurgeSystem a = nondim({0.1, -0.2, 0.03, 0.01, -0.002}, 0);
    const SurgeSystem b = nondim({-0.4, 0.05, 0.2, -0.03, 0.004}, 0);
    const SurgeSystem ab = nondim({0.1 * 2 - 0.4 * 3, -0.2 * 2 + 0.05 * 3, 0.03 * 2 + 0.2 * 3,
                                   0.01 * 2 - 0.03 * 3, -0.002 * 2 + 0.004 * 3}, 0);
    for (double ve : {1.3, -1.7})
        EXPECT_NEAR(fit_quadratic_damping(ab, ve),
                    2 * fit_quadratic_damping(a, ve) + 3 * fit_quadratic_damping(b, ve), 1e-14);
}

TEST(QuadraticDampingFit, IsTheLeastSquaresSlope) {
    // Minimise int_ve^0 (D(v) - gamma sgn(v) v^2)^2 dv numerically.
    const SurgeSystem s = nondim({0.3, 0.1, -0.05, 0.02, 0.001}, 0);
    const double ve = -1.6;
    const double num = simpson([&](double v) { return -s.damping(v) * v * v; }, ve, 0.0, 2000);
    const double den = simpson([&](double v) { return std::pow(v, 4); }, ve, 0.0, 2000);
    EXPECT_NEAR(fit_quadratic_damping(s, ve), num / den, 1e-12);
}

TEST(DampingFit, CorrectionsVanishForExactForms) {
    const DampingFit q = fit_damping(nondim({0, -0.25, 0, 0, 0}, 0));
    EXPECT_NEAR(q.gamma, 0.25, 1e-15);
    EXPECT_NEAR(q.gamma1, 0.0, 1e-13);
    EXPECT_NEAR(q.gamma2, 0.0, 1e-13);
    EXPECT_NEAR(q.v_e_gamma, -2.0 * std::pow(1.25, -0.25), 1e-14);
    const DampingFit l = fit_damping(nondim({0.4, 0, 0, 0, 0}, 0));
    EXPECT_NEAR(l.beta, 0.4, 1e-15);
    EXPECT_NEAR(l.beta1, 0.0, 1e-13);
    EXPECT_NEAR(l.beta2, 0.0, 1e-13);
}

TEST(RestoringCorrections, LeastSquaresNormalEquations) {
    const auto sc = restoring_corrections();
    const double mu = kCubicMu;
    const auto target = [&](double y) { return std::sin(y) + mu * y * (y - kPi) * (y + kPi); };
    double g[3][3], r[3];
    for (int i = 0; i < 3; ++i) {
        r[i] = simpson([&](double y) { return target(y) * std::pow(y, 2 * i + 1); }, -kPi, kPi, 4000);
        for (int j = 0; j < 3; ++j)
            g[i][j] = simpson([&](double y) { return std::pow(y, 2 * i + 2 * j + 2); }, -kPi, kPi, 4000);
    }
    for (int i = 0; i < 3; ++i) {
        const double lhs = g[i][0] * sc[0] + g[i][1] * sc[1] + g[i][2] * sc[2];
        EXPECT_NEAR(lhs, r[i], 1e-9 * std::max(1.0, std::abs(r[i])));
    }
}

TEST(Cubic, SymmetricRoots) {
    const CubicRestoring c = cubic_restoring(0.0);
    EXPECT_NEAR(c.roots[0], -kPi, 1e-14);
    EXPECT_NEAR(c.roots[1], 0.0, 1e-14);
    EXPECT_NEAR(c.roots[2], kPi, 1e-14);
    EXPECT_NEAR(c.a_tilde, 0.5, 1e-15);
    EXPECT_NEAR(c.condition(0.0), 0.0, 1e-14);
    EXPECT_NEAR(cubic_critical_rbar(0.0), 0.0, 1e-12);
}

TEST(Cubic, RootsSolveTheCubic) {
    for (double r : {-0.9, -0.3, 0.45, 1.0}) {
        const CubicRestoring c = cubic_restoring(r);
        for (double a : c.roots) EXPECT_NEAR(kCubicMu * a * (a * a - kPi * kPi) + r, 0.0, 1e-12);
        EXPECT_LT(c.roots[0], c.roots[1]);
        EXPECT_LT(c.roots[1], c.roots[2]);
    }
    EXPECT_THROW(cubic_restoring(1.1), NoSolutionError);
}

TEST(Cubic, LogisticIdentity) {
    const CubicRestoring c = cubic_restoring(-0.4);
    for (double t = -8.0; t <= 8.0; t += 0.25) {
        const double y = c.logistic(t, 0.3);
        ASSERT_NEAR(c.logistic_rate(t, 0.3), c.c_tilde * y * (1.0 - y), 1e-12);
    }
}

TEST(Cubic, CriticalTorqueSatisfiesCondition) {
    for (double beta : {0.05, 0.3, 0.6}) {
        const double r = cubic_critical_rbar(beta);
        EXPECT_NEAR(cubic_restoring(r).condition(beta), 0.0, 1e-10);
        EXPECT_LT(r, 0.0);
    }
}

TEST(PiecewiseLinear, SymmetricUndampedConnection) {
    const double t = pwl_crossing_time(0.0, 0.0);
    ASSERT_GT(t, 0.0);
    const PwlMatch m = pwl_residual(0.0, 0.0, t);
    EXPECT_LT(std::abs(m.y_defect), 1e-10);
    EXPECT_LT(std::abs(m.rate_defect), 1e-10);
}

TEST(GammaIntegrals, PublishedValues) {
    EXPECT_NEAR(cos_power_integral(1), 4.0, 1e-14);
    EXPECT_NEAR(cos_power_integral(2), kPi, 1e-14);
    EXPECT_NEAR(cos_power_integral(3), 8.0 / 3.0, 1e-14);
    EXPECT_NEAR(cos_power_integral(4), 3.0 * kPi / 4.0, 1e-14);
    EXPECT_NEAR(cos_power_integral(5), 32.0 / 15.0, 1e-14);
}

TEST(GammaIntegrals, MatchQuadrature) {
    for (int k = 1; k <= 10; ++k) {
        const double q = simpson([&](double y) { return std::pow(std::cos(0.5 * y), k); }, -kPi, kPi, 20000);
        EXPECT_NEAR(cos_power_integral(k), q, 1e-10) << k;
    }
}

TEST(LogisticIntegrals, MatchQuadrature) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> dc(0.3, 2.0), dx(-0.9, 0.9), sign(-1.0, 1.0);
    for (int draw = 0; draw < 10; ++draw) {
        const double c = dc(rng) * (sign(rng) < 0 ? -1.0 : 1.0);
        const double beta = dx(rng) * std::abs(c);
        const LogisticIntegrals li = logistic_integrals(beta, c, 5);
        for (int n = 1; n <= 5; ++n) {
            const double q = i_integral(n, beta, c);
            ASSERT_NEAR(li.I[n], q, 1e-8 * std::abs(q)) << "I" << n << " beta " << beta << " c " << c;
        }
        for (int n = 0; n <= 5; ++n) {
            const double q = k_integral(n, beta, c);
            ASSERT_NEAR(li.K[n], q, 1e-8 * std::abs(q)) << "K" << n << " beta " << beta << " c " << c;
        }
    }
}

TEST(LogisticIntegrals, PoleIsRejected) {
    EXPECT_THROW(logistic_integrals(2.0, 1.0, 3), ValidationError);
    EXPECT_NO_THROW(logistic_integrals(0.0, 1.0, 3));
}

TEST(Melnikov, FirstOrderClosedForm) {
    const double r = 0.4 / kPi;
    EXPECT_NEAR(melnikov_function(nondim({-0.1, 0, 0, 0, 0}, r), 1), 0.0, 1e-14);
    EXPECT_NEAR(r, 0.12732, 1e-5);
}

TEST(Melnikov, FirstOrderAgreesWithShooting) {
    const SystemFamily fam = [](double r) { return nondim({0.1, 0, 0, 0, 0}, r); };
    const double r_surf = bisect_family(fam, -0.5, -0.01, Branch::surf_riding);
    const double r_block = bisect_family(fam, 0.01, 0.5, Branch::wave_blocking);
    EXPECT_NEAR(r_surf, -0.4 / kPi, 0.02 * 0.4 / kPi);
    EXPECT_NEAR(r_block, 0.4 / kPi, 0.02 * 0.4 / kPi);
}

TEST(Melnikov, SignSymmetryForOddDamping) {
    const std::array<double, 5> a{0.12, 0.0, 0.01, 0.0, 0.001};
    const SystemFamily fam = [&](double r) { return nondim(a, r); };
    const double rs = bisect_family(fam, -0.6, -0.01, Branch::surf_riding, {.rel_tol = 1e-8});
    const double rb = bisect_family(fam, 0.01, 0.6, Branch::wave_blocking, {.rel_tol = 1e-8});
    EXPECT_NEAR(rs, -rb, 1e-6 * std::abs(rb));
    EXPECT_EQ(melnikov_function(oriented(nondim(a, 0.2), Branch::surf_riding), 5),
              melnikov_function(oriented(nondim(a, -0.2), Branch::wave_blocking), 5));
}

TEST(Melnikov, OrientationFlipsTorqueAndEvenTerms) {
    const SurgeSystem s = nondim({0.1, 0.2, 0.3, 0.4, 0.5}, 0.25);
    const SurgeSystem o = oriented(s, Branch::wave_blocking);
    EXPECT_EQ(o.rbar, -0.25);
    EXPECT_EQ(o.abar[1], 0.1);
    EXPECT_EQ(o.abar[2], -0.2);
    EXPECT_EQ(o.abar[4], -0.4);
    EXPECT_EQ(o.abar[5], 0.5);
    EXPECT_EQ(oriented(s, Branch::surf_riding).abar[2], 0.2);
}

TEST(Melnikov, FirstOrderMatchesLinearDampingFormula) {
    const Vessel base = fullscale();
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> f(0.8, 1.2), g(0.98, 1.02), lr(1.0, 2.0), st(0.02, 0.035);
    int roots = 0;
    for (int draw = 0; draw < 20; ++draw) {
        Vessel v = base;
        const double common = f(rng);
        for (double& r : v.res.r) r *= common * g(rng);
        const auto w = WaveCondition::from_ratio(v.ship.length, lr(rng), st(rng), v.ship.gravity);
        const Scenario sc = make_scenario(v, w);
        const double k = 4.0 * sc.f_w / (kPi * std::sqrt(sc.f_w * w.k_w * v.ship.total_mass()));
        const double c = w.celerity;
        for (double n : {0.5, 1.0, 2.0}) {
            const double ref = sc.net_thrust(n) + k * (v.res.r[0] - v.prop.tau1() * n);
            const double m = melnikov_function(oriented(build_system(sc, n, 1), Branch::surf_riding), 1);
            ASSERT_NEAR(m * sc.f_w / (2.0 * kPi), ref, 1e-10 * (std::abs(ref) + std::abs(resistance(v.res, c))));
        }
        try {
            const double n_m = melnikov_threshold(sc, 1, Branch::surf_riding).n_cr;
            ASSERT_NEAR(order1_closed_form_rate(sc), n_m, 1e-10 * n_m);
            ++roots;
        } catch (const NoSolutionError&) {
        }
    }
    EXPECT_GT(roots, 10);
}

TEST(Melnikov, FifthOrderIsSgiscQuadratic) {
    const Vessel v = fullscale();
    int roots = 0;
    for (double r : {1.0, 1.25, 1.8, 2.6})
        for (double s : {0.02, 0.03, 0.05}) {
            const Scenario sc = make_scenario(v, WaveCondition::from_ratio(v.ship.length, r, s, v.ship.gravity));
            const ImoCoefficients imo = imo_coefficients(v, r, s);
            for (double n : {0.8, 1.5, 2.5}) {
                const double m = melnikov_function(oriented(build_system(sc, n), Branch::surf_riding), 5);
                ASSERT_NEAR(m, imo.residual(n), 1e-10 * (std::abs(m) + 2.0 * kPi * resistance(v.res, imo.c) / imo.f));
            }
            try {
                const double n_m = melnikov_threshold(sc, 5, Branch::surf_riding).n_cr;
                EXPECT_NEAR(critical_revs_imo(v, r, s), n_m, 1e-10 * n_m);
                ++roots;
            } catch (const NoSolutionError&) {
            }
        }
    EXPECT_GT(roots, 4);
}

TEST(ExtMelnikov1, OrbitSolvesQuadraticDampingOde) {
    // v = -2 (1 + 4 g^2)^(-1/4) |cos((y + eps) / 2)| solves v v' - g v^2 + sin y = -2 g / sqrt(1 + 4 g^2).
    const SurgeSystem s = nondim({0, -0.3, 0, 0, 0}, 0.0);
    const ExtMelnikov1Terms t = ext_melnikov_1_terms(s);
    const double g = t.fit.gamma;
    const double s4 = 1.0 + 4.0 * g * g;
    EXPECT_NEAR(t.eps_y, std::atan(-2.0 * g), 1e-15);
    const double amp = 2.0 * std::pow(s4, -0.25);
    for (int i = 0; i <= 1000; ++i) {
        const double y = -kPi - t.eps_y + 2.0 * kPi * i / 1000.0;
        const double phi = 0.5 * (y + t.eps_y);
        const double v = -amp * std::cos(phi);
        const double dv = 0.5 * amp * std::sin(phi);
        ASSERT_NEAR(v * dv - g * v * v + std::sin(y), -2.0 * g / std::sqrt(s4), 1e-9);
    }
}

TEST(ExtMelnikov1, ExactQuadraticDampingReducesToClosedForm) {
    const double g = 0.3;
    const double r = -2.0 * g / std::sqrt(1.0 + 4.0 * g * g);
    const ExtMelnikov1Terms t = ext_melnikov_1_terms(nondim({0, -g, 0, 0, 0}, r));
    EXPECT_NEAR(t.sigma, 0.0, 1e-14);
    EXPECT_NEAR(t.m_quadrature, 0.0, 1e-12);
}

TEST(ExtMelnikov2, LinearDampingUsesCubicCriticalTorque) {
    const double beta = 0.35;
    const ExtMelnikov2Terms t = ext_melnikov_2_terms(nondim({beta, 0, 0, 0, 0}, -0.3));
    EXPECT_NEAR(t.fit.beta, beta, 1e-15);
    EXPECT_NEAR(t.fit.beta1, 0.0, 1e-13);
    EXPECT_NEAR(t.fit.beta2, 0.0, 1e-13);
    EXPECT_DOUBLE_EQ(t.rbar_star, cubic_critical_rbar(beta));
    EXPECT_NEAR(t.sigma, -0.3 - t.rbar_star, 1e-15);
}

TEST(CrossMethod, CalibratedModelTolerances) {
    const Scenario& sc = dtmb();
    const TangentRates tr = tangent_bifurcation_rates(sc);
    const double newton = compute_threshold(sc, Method::newton, Branch::surf_riding).fn_cr;
    const double block = compute_threshold(sc, Method::newton, Branch::wave_blocking).fn_cr;
    const std::pair<Method, double> cases[] = {
        {Method::quad_damping, 0.08}, {Method::cubic, 0.08},          {Method::piecewise_linear, 0.10},
        {Method::melnikov5, 0.05},    {Method::ext_melnikov_1, 0.05}, {Method::ext_melnikov_2, 0.05}};
    for (const auto& [m, tol] : cases) {
        const double fn = compute_threshold(sc, m, Branch::surf_riding).fn_cr;
        EXPECT_NEAR(fn, newton, tol * newton) << to_string(m);
        EXPECT_GT(fn, tr.fn_low) << to_string(m);
        EXPECT_LT(fn, block) << to_string(m);
    }
}

TEST(CrossMethod, BlockingEstimatesStayInsideTangentInterval) {
    const Scenario& sc = dtmb();
    const TangentRates tr = tangent_bifurcation_rates(sc);
    for (Method m : {Method::quad_damping, Method::cubic, Method::piecewise_linear, Method::melnikov5,
                     Method::ext_melnikov_1, Method::ext_melnikov_2}) {
        const ThresholdResult r = compute_threshold(sc, m, Branch::wave_blocking);
        EXPECT_GT(r.n_cr, tr.n_low) << to_string(m);
        EXPECT_LT(r.n_cr, tr.n_high) << to_string(m);
        EXPECT_GT(sc.rbar(r.n_cr), 0.0) << to_string(m);
    }
}

TEST(CrossMethod, ThirdOrderHasNoRootOnModel) {
    EXPECT_THROW(melnikov_threshold(dtmb(), 3, Branch::surf_riding), NoSolutionError);
}
