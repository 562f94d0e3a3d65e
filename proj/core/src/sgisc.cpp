#include "surfride/sgisc.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "surfride/error.hpp"
#include "surfride/numeric.hpp"

namespace surfride {
namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

std::string to_string(Level1Verdict v) {
    return v == Level1Verdict::not_vulnerable ? "not_vulnerable" : "proceed_to_level2";
}

Level1Verdict level1_check(double length_m, double fn_service) {
    if (!(length_m > 0.0)) throw ValidationError("level1: length must be > 0");
    if (!(fn_service >= 0.0)) throw ValidationError("level1: Froude number must be >= 0");
    return length_m >= 200.0 || fn_service <= 0.3 ? Level1Verdict::not_vulnerable
                                                   : Level1Verdict::proceed_to_level2;
}

double local_wave_pdf(double hs, double tz, double length_m, double r_i, double s_j,
                      double gravity, double dr, double ds) {
    if (!(hs > 0.0) || !(tz > 0.0) || !(length_m > 0.0) || !(r_i > 0.0) || !(s_j > 0.0))
        throw ValidationError("local_wave_pdf: hs, tz, length, r and s must be > 0");
    const double nu = kBandParameter;
    const double t01 = kT01OverTz * tz;
    const double root = std::sqrt(1.0 + nu * nu);
    const double pre = 4.0 * std::sqrt(gravity) / (kPi * nu) * std::pow(length_m, 2.5) * t01 /
                       (hs * hs * hs) * s_j * s_j * std::pow(r_i, 1.5) * root / (1.0 + root) *
                       dr * ds;
    const double h = length_m * r_i * s_j / hs;
    const double d = 1.0 - std::sqrt(gravity * t01 * t01 / (2.0 * kPi * r_i * length_m));
    return pre * std::exp(-2.0 * h * h * (1.0 + d * d / (nu * nu)));
}

ImoCoefficients imo_coefficients(const Vessel& vessel, double r_i, double s_j) {
    if (!(r_i > 0.0) || !(s_j > 0.0)) throw ValidationError("imo: need r_i > 0 and s_j > 0");
    const ShipModel& ship = vessel.ship;
    ImoCoefficients o;
    o.k = 2.0 * kPi / (r_i * ship.length);
    o.c = std::sqrt(ship.gravity / o.k);
    o.f = local_wave_force(ship, r_i, s_j);
    if (!(o.f > 0.0)) throw ValidationError("imo: local wave force must be > 0");
    const auto& r = vessel.res.r;
    const auto& p = vessel.prop;
    const double c = o.c;
    const double km = o.k * ship.total_mass();
    const double s = std::sqrt(o.f * km);
    o.a[0] = -p.tau1() / s;
    o.a[1] = (r[0] + c * (2.0 * r[1] + c * (3.0 * r[2] + c * (4.0 * r[3] + c * 5.0 * r[4]))) -
              2.0 * p.tau2() * c) /
             s;
    o.a[2] = (r[1] + c * (3.0 * r[2] + c * (6.0 * r[3] + c * 10.0 * r[4])) - p.tau2()) / km;
    o.a[3] = (r[2] + c * (4.0 * r[3] + c * 10.0 * r[4])) * std::sqrt(o.f) / std::pow(km, 1.5);
    o.a[4] = (r[3] + 5.0 * r[4] * c) * o.f / (km * km);
    o.a[5] = r[4] * std::pow(o.f, 1.5) / std::pow(km, 2.5);
    const double w = 2.0 * kPi / o.f;
    o.qa = w * p.tau0();
    o.qb = w * p.tau1() * c + 8.0 * o.a[0];
    o.qc = w * (p.tau2() * c * c - resistance(vessel.res, c)) + 8.0 * o.a[1] - 4.0 * kPi * o.a[2] +
           64.0 / 3.0 * o.a[3] - 12.0 * kPi * o.a[4] + 1024.0 / 15.0 * o.a[5];
    return o;
}

double critical_revs_imo(const Vessel& vessel, double r_i, double s_j) {
    const ImoCoefficients o = imo_coefficients(vessel, r_i, s_j);
    if (!(o.qa > 0.0)) throw NoSolutionError("critical_revs_imo: needs tau0 > 0");
    const double disc = o.qb * o.qb - 4.0 * o.qa * o.qc;
    if (disc < 0.0) throw NoSolutionError("critical_revs_imo: no real root");
    const double sq = std::sqrt(disc);
    const double n = o.qb <= 0.0 ? (-o.qb + sq) / (2.0 * o.qa) : (2.0 * o.qc) / (-o.qb - sq);
    if (!(n > 0.0)) throw NoSolutionError("critical_revs_imo: no positive root");
    return n;
}

double critical_speed(const Vessel& vessel, double n_cr) {
    return self_propulsion_speed(vessel, n_cr);
}

CriticalFroudeGrid critical_froude_grid(const Vessel& vessel, unsigned workers) {
    constexpr int nr = LocalWaveGrid::n_r;
    constexpr int ns = LocalWaveGrid::n_s;
    CriticalFroudeGrid g;
    g.fn_cr.assign(static_cast<std::size_t>(nr * ns), std::numeric_limits<double>::quiet_NaN());
    parallel_for(
        g.fn_cr.size(),
        [&](std::size_t idx) {
            const int i = static_cast<int>(idx) / ns;
            const int j = static_cast<int>(idx) % ns;
            try {
                const double n = critical_revs_imo(vessel, LocalWaveGrid::r(i), LocalWaveGrid::s(j));
                g.fn_cr[idx] = vessel.froude(critical_speed(vessel, n));
            } catch (const NoSolutionError&) {
            }
        },
        workers);
    for (int i = 0; i < nr; ++i)
        for (int j = 0; j < ns; ++j) {
            const double v = g.fn_cr[static_cast<std::size_t>(i * ns + j)];
            if (std::isnan(v)) {
                ++g.no_root;
            } else if (j > 0) {
                const double prev = g.fn_cr[static_cast<std::size_t>(i * ns + j - 1)];
                if (!std::isnan(prev) && v > prev) ++g.nonmonotone_in_s;
            }
        }
    return g;
}

Level2Result level2_assess(const Vessel& vessel, const CriticalFroudeGrid& grid,
                           double fn_service, const WaveScatterTable& table) {
    if (!(fn_service >= 0.0)) throw ValidationError("level2: Froude number must be >= 0");
    table.validate();
    constexpr int nr = LocalWaveGrid::n_r;
    constexpr int ns = LocalWaveGrid::n_s;
    if (grid.fn_cr.size() != static_cast<std::size_t>(nr * ns))
        throw ValidationError("level2: critical Froude grid has the wrong size");
    Level2Result out;
    out.fn_service = fn_service;
    out.table_total = table.total();
    out.cells_no_root = grid.no_root;
    out.cells_nonmonotone = grid.nonmonotone_in_s;
    const double length = vessel.ship.length;
    const double g = vessel.ship.gravity;
    for (std::size_t a = 0; a < table.hs.size(); ++a)
        for (std::size_t b = 0; b < table.tz.size(); ++b) {
            Level2CellContribution cell{table.hs[a], table.tz[b], table.count(a, b) / out.table_total,
                                        0.0};
            if (cell.w2 > 0.0) {
                double acc = 0.0;
                for (int i = 0; i < nr; ++i)
                    for (int j = 0; j < ns; ++j) {
                        const double fc = grid.fn_cr[static_cast<std::size_t>(i * ns + j)];
                        if (!(fn_service > fc)) continue;  // NaN: no surf riding possible
                        acc += local_wave_pdf(cell.hs, cell.tz, length, LocalWaveGrid::r(i),
                                              LocalWaveGrid::s(j), g);
                    }
                cell.contribution = cell.w2 * acc;
            }
            out.c_value += cell.contribution;
            out.per_cell.push_back(cell);
        }
    out.vulnerable = !(out.c_value <= out.r_sr);
    return out;
}

Level2Result level2_assess(const Vessel& vessel, double fn_service,
                           const WaveScatterTable& table, unsigned workers) {
    return level2_assess(vessel, critical_froude_grid(vessel, workers), fn_service, table);
}

}  // namespace surfride
