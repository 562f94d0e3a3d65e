#include <cmath>
#include <numbers>
#include <utility>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "surfride/analytic.hpp"
#include "surfride/error.hpp"
#include "surfride/sgisc.hpp"

using namespace surfride;
using surfride::testing::fullscale;

namespace {

constexpr double kPi = std::numbers::pi;

// Local-wave probability mass written out term by term.
double pdf_oracle(double hs, double tz, double L, double r, double s) {
    const double g = kStandardGravity, nu = 0.425, t01 = 1.086 * tz;
    const double front = 4.0 * std::sqrt(g) / (kPi * nu) * std::pow(L, 2.5) * t01 / std::pow(hs, 3) *
                         s * s * std::pow(r, 1.5) * std::sqrt(1 + nu * nu) /
                         (1 + std::sqrt(1 + nu * nu)) * 0.025 * 0.0012;
    const double inner = 1.0 - std::sqrt(g * t01 * t01 / (2.0 * kPi * r * L));
    return front * std::exp(-2.0 * std::pow(L * r * s / hs, 2) * (1.0 + inner * inner / (nu * nu)));
}

const CriticalFroudeGrid& grid() {
    static const CriticalFroudeGrid g = critical_froude_grid(fullscale());
    return g;
}

}  // namespace

TEST(Level1, Examples) {
    EXPECT_EQ(level1_check(250.0, 0.4), Level1Verdict::not_vulnerable);
    EXPECT_EQ(level1_check(142.17, 0.3), Level1Verdict::not_vulnerable);
    EXPECT_EQ(level1_check(142.17, 0.35), Level1Verdict::proceed_to_level2);
    EXPECT_EQ(level1_check(200.0, 0.5), Level1Verdict::not_vulnerable);
    EXPECT_THROW(level1_check(0.0, 0.3), ValidationError);
    EXPECT_THROW(level1_check(100.0, -0.1), ValidationError);
}

TEST(ScatterTable, SpotChecks) {
    const WaveScatterTable& t = builtin_scatter_table();
    ASSERT_EQ(t.hs.size(), 17u);
    ASSERT_EQ(t.tz.size(), 16u);
    auto at = [&](double hs, double tz) {
        for (std::size_t i = 0; i < t.hs.size(); ++i)
            for (std::size_t j = 0; j < t.tz.size(); ++j)
                if (t.hs[i] == hs && t.tz[j] == tz) return t.count(i, j);
        return -1.0;
    };
    EXPECT_DOUBLE_EQ(at(0.5, 6.5), 1186.0);
    EXPECT_DOUBLE_EQ(at(2.5, 9.5), 4860.4);
    EXPECT_DOUBLE_EQ(at(4.5, 11.5), 1275.2);
    EXPECT_NEAR(t.total(), 100000.0, 1e-6);
}

TEST(ScatterTable, CsvParsing) {
    const WaveScatterTable t = parse_scatter_csv("hs,5.5,7.5\n# comment\n1.0,10,20\n3.0,30,40\n");
    EXPECT_EQ(t.hs.size(), 2u);
    EXPECT_DOUBLE_EQ(t.count(1, 0), 30.0);
    EXPECT_DOUBLE_EQ(t.total(), 100.0);
    try {
        parse_scatter_csv("hs,5.5,7.5\n1.0,10,20\n3.0,30\n");
        FAIL();
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
    }
    EXPECT_THROW(parse_scatter_csv("hs,5.5\n1.0,-1\n"), ValidationError);
    EXPECT_THROW(parse_scatter_csv("hs,5.5\n1.0,abc\n"), ValidationError);
}

TEST(LocalWavePdf, MatchesTermByTermEvaluation) {
    const double w = local_wave_pdf(5.5, 9.5, 142.17, 1.25, 0.06);
    EXPECT_NEAR(w, pdf_oracle(5.5, 9.5, 142.17, 1.25, 0.06), 1e-12 * w);
    EXPECT_GT(w, 0.0);
}

TEST(LocalWavePdf, TruncatedMassAtMostOne) {
    const WaveScatterTable& t = builtin_scatter_table();
    const double L = 142.175;
    for (std::size_t a = 0; a < t.hs.size(); ++a)
        for (std::size_t b = 0; b < t.tz.size(); ++b) {
            if (t.count(a, b) == 0.0) continue;
            double m = 0.0;
            for (int i = 0; i < LocalWaveGrid::n_r; ++i)
                for (int j = 0; j < LocalWaveGrid::n_s; ++j) {
                    const double w = local_wave_pdf(t.hs[a], t.tz[b], L, LocalWaveGrid::r(i), LocalWaveGrid::s(j));
                    ASSERT_GE(w, 0.0);
                    m += w;
                }
            ASSERT_LE(m, 1.0 + 1e-6) << t.hs[a] << " " << t.tz[b];
        }
}

TEST(LocalWaveGrid, BoundsAndSteps) {
    EXPECT_EQ(LocalWaveGrid::n_r * LocalWaveGrid::n_s, 81 * 101);
    EXPECT_DOUBLE_EQ(LocalWaveGrid::r(0), 1.0);
    EXPECT_NEAR(LocalWaveGrid::r(80), 3.0, 1e-14);
    EXPECT_DOUBLE_EQ(LocalWaveGrid::s(0), 0.03);
    EXPECT_NEAR(LocalWaveGrid::s(100), 0.15, 1e-14);
    EXPECT_EQ(grid().fn_cr.size(), 81u * 101u);
}

TEST(CriticalRevs, RootOfQuadraticAndLarger) {
    const Vessel v = fullscale();
    for (double r : {1.0, 1.5, 2.5})
        for (double s : {0.03, 0.05}) {
            const ImoCoefficients o = imo_coefficients(v, r, s);
            const double n = critical_revs_imo(v, r, s);
            EXPECT_LT(std::abs(o.residual(n)), 1e-9 * (std::abs(o.qb * n) + std::abs(o.qc)));
            const double other = o.qc / (o.qa * n);
            EXPECT_GE(n, other);
        }
}

TEST(CriticalRevs, CoefficientsFromDampingExpansion) {
    // a_0 = -tau1 / sqrt(f k M') and a_1 = (R'(c) - 2 tau2 c) / sqrt(f k M').
    const Vessel v = fullscale();
    const ImoCoefficients o = imo_coefficients(v, 1.25, 0.04);
    const double s = std::sqrt(o.f * o.k * v.ship.total_mass());
    EXPECT_NEAR(o.a[0], -v.prop.tau1() / s, 1e-15 * std::abs(o.a[0]));
    EXPECT_NEAR(o.a[1], (resistance_slope(v.res, o.c) - 2.0 * v.prop.tau2() * o.c) / s,
                1e-12 * std::abs(o.a[1]));
    EXPECT_NEAR(o.c, std::sqrt(v.ship.gravity * 1.25 * v.ship.length / (2.0 * kPi)), 1e-12);
}

TEST(CriticalSpeed, MatchesIndependentRootFinder) {
    const Vessel v = fullscale();
    const double n = 1.3;
    double lo = 0.0, hi = 3.0 * v.speed_scale();
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (thrust(v.prop, mid, n) - resistance(v.res, mid) > 0.0 ? lo : hi) = mid;
    }
    EXPECT_NEAR(critical_speed(v, n), 0.5 * (lo + hi), 1e-9);
    EXPECT_LT(critical_speed(v, 1.2), critical_speed(v, 1.3));
}

TEST(CriticalFroudeGrid, NonincreasingInSteepness) {
    EXPECT_EQ(grid().nonmonotone_in_s, 0u);
    EXPECT_EQ(grid().no_root, 0u);
}

TEST(Level2, ZeroSpeedGivesZero) {
    const Level2Result r = level2_assess(fullscale(), grid(), 0.0);
    EXPECT_EQ(r.c_value, 0.0);
    EXPECT_FALSE(r.vulnerable);
}

TEST(Level2, SaturatesAtTotalMass) {
    const Vessel v = fullscale();
    const WaveScatterTable& t = builtin_scatter_table();
    double max_c = 0.0;
    for (std::size_t a = 0; a < t.hs.size(); ++a)
        for (std::size_t b = 0; b < t.tz.size(); ++b) {
            double m = 0.0;
            for (int i = 0; i < LocalWaveGrid::n_r; ++i)
                for (int j = 0; j < LocalWaveGrid::n_s; ++j)
                    m += local_wave_pdf(t.hs[a], t.tz[b], v.ship.length, LocalWaveGrid::r(i), LocalWaveGrid::s(j));
            max_c += t.count(a, b) / t.total() * m;
        }
    const Level2Result r = level2_assess(v, grid(), 5.0);
    EXPECT_NEAR(r.c_value, max_c, 1e-12 * max_c);
}

TEST(Level2, NondecreasingInServiceSpeed) {
    const Vessel v = fullscale();
    double prev = -1.0;
    for (int k = 0; k <= 20; ++k) {
        const double c = level2_assess(v, grid(), 0.03 * k).c_value;
        ASSERT_GE(c, prev);
        prev = c;
    }
}

TEST(Level2, EqualityIsNotSurfRiding) {
    CriticalFroudeGrid g;
    g.fn_cr.assign(81 * 101, 0.3);
    const Vessel v = fullscale();
    EXPECT_EQ(level2_assess(v, g, 0.3).c_value, 0.0);
    EXPECT_GT(level2_assess(v, g, std::nextafter(0.3, 1.0)).c_value, 0.0);
}

TEST(Level2, NoRootCellsNeverCount) {
    CriticalFroudeGrid g;
    g.fn_cr.assign(81 * 101, std::nan(""));
    EXPECT_EQ(level2_assess(fullscale(), g, 2.0).c_value, 0.0);
}

TEST(Level2, PerCellSumsToTotal) {
    const Level2Result r = level2_assess(fullscale(), grid(), 0.35);
    double s = 0.0;
    for (const auto& c : r.per_cell) s += c.contribution;
    EXPECT_DOUBLE_EQ(s, r.c_value);
    EXPECT_EQ(r.per_cell.size(), 17u * 16u);
}

TEST(Level2, ParallelGridIsBitIdentical) {
    const Vessel v = fullscale();
    const CriticalFroudeGrid a = critical_froude_grid(v, 1);
    const CriticalFroudeGrid b = critical_froude_grid(v, 4);
    for (std::size_t i = 0; i < a.fn_cr.size(); ++i) ASSERT_EQ(a.fn_cr[i], b.fn_cr[i]);
}

TEST(Level2, SurfRidingCellsAgreeWithMelnikovFifthOrder) {
    // Cells with a lower tangent bifurcation, so the Melnikov path has a bracket.
    const Vessel v = fullscale();
    for (const auto [i, j] : {std::pair{0, 0}, std::pair{32, 0}, std::pair{64, 0}}) {
        const double r = LocalWaveGrid::r(i), s = LocalWaveGrid::s(j);
        const Scenario sc = make_scenario(v, WaveCondition::from_ratio(v.ship.length, r, s, v.ship.gravity));
        const double fn = melnikov_threshold(sc, 5, Branch::surf_riding).fn_cr;
        EXPECT_NEAR(grid().fn_cr[static_cast<std::size_t>(i * LocalWaveGrid::n_s + j)], fn, 1e-9) << r;
    }
}
