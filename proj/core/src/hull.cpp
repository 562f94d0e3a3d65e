#include "surfride/hull.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "surfride/error.hpp"
#include "surfride/numeric.hpp"

namespace surfride {

void ShipModel::validate() const {
    if (!(length > 0.0)) throw ValidationError("ship: length must be > 0");
    if (!(mass > 0.0)) throw ValidationError("ship: mass must be > 0");
    if (!(added_mass >= 0.0)) throw ValidationError("ship: added_mass must be >= 0");
    if (!(rho > 0.0)) throw ValidationError("ship: rho must be > 0");
    if (!(gravity > 0.0)) throw ValidationError("ship: gravity must be > 0");
    for (std::size_t m = 0; m < stations.size(); ++m) {
        const Station& s = stations[m];
        if (!(s.area >= 0.0) || !(s.draft >= 0.0) || !(s.seg_len > 0.0))
            throw ValidationError("ship: station " + std::to_string(m) +
                                  " needs area >= 0, draft >= 0, seg_len > 0");
        if (m > 0 && !(s.x > stations[m - 1].x))
            throw ValidationError("ship: stations must be strictly increasing in x");
    }
    if (!stations.empty()) {
        const double tol = 0.01 * length;
        if (std::abs(stations.front().x + 0.5 * length) > tol ||
            std::abs(stations.back().x - 0.5 * length) > tol)
            throw ValidationError("ship: stations must span [-L/2, L/2] within 1% of L");
    }
}

PropulsionModel::PropulsionModel(std::array<double, 3> kappa, double t_p, double w_p,
                                 double d_p, double rho)
    : kappa_(kappa), t_p_(t_p), w_p_(w_p), d_p_(d_p), rho_(rho) {
    if (!(t_p >= 0.0 && t_p < 1.0)) throw ValidationError("propulsion: need 0 <= t_p < 1");
    if (!(w_p >= 0.0 && w_p < 1.0)) throw ValidationError("propulsion: need 0 <= w_p < 1");
    if (!(d_p > 0.0)) throw ValidationError("propulsion: need d_p > 0");
    if (!(rho > 0.0)) throw ValidationError("propulsion: need rho > 0");
    const double a = (1.0 - t_p) * rho;
    const double b = 1.0 - w_p;
    tau_[0] = kappa[0] * a * std::pow(d_p, 4);
    tau_[1] = kappa[1] * a * b * std::pow(d_p, 3);
    tau_[2] = kappa[2] * a * b * b * d_p * d_p;
}

double Vessel::speed_scale() const { return std::sqrt(ship.length * ship.gravity); }
double Vessel::froude(double u) const { return u / speed_scale(); }

double resistance(const ResistanceModel& model, double u) {
    const auto& r = model.r;
    return u * (r[0] + u * (r[1] + u * (r[2] + u * (r[3] + u * r[4]))));
}

double resistance_slope(const ResistanceModel& model, double u) {
    const auto& r = model.r;
    return r[0] + u * (2.0 * r[1] + u * (3.0 * r[2] + u * (4.0 * r[3] + u * 5.0 * r[4])));
}

double thrust(const PropulsionModel& model, double u, double n) {
    if (!(n > 0.0)) throw ValidationError("thrust: propeller rate must be > 0");
    return model.tau0() * n * n + model.tau1() * u * n + model.tau2() * u * u;
}

double advance_ratio(const PropulsionModel& model, double u, double n) {
    if (!(n > 0.0)) throw ValidationError("advance_ratio: propeller rate must be > 0");
    return u * (1.0 - model.w_p()) / (n * model.d_p());
}

double thrust_kt(const PropulsionModel& model, double u, double n) {
    const double j = advance_ratio(model, u, n);
    const auto& k = model.kappa();
    const double kt = k[0] + j * (k[1] + j * k[2]);
    return (1.0 - model.t_p()) * model.rho() * n * n * std::pow(model.d_p(), 4) * kt;
}

SpeedResult self_propulsion(const ResistanceModel& res, const PropulsionModel& prop,
                            double n, double u_upper) {
    if (!(n > 0.0)) throw ValidationError("self_propulsion_speed: n must be > 0");
    if (!(u_upper > 0.0)) throw ValidationError("self_propulsion_speed: bad bracket");
    const ScalarFn g = [&](double u) { return thrust(prop, u, n) - resistance(res, u); };
    const auto bracket = scan_sign_change(g, 0.0, u_upper, 400);
    if (!bracket)
        throw NoSolutionError("self_propulsion_speed: thrust never balances resistance in [0, " +
                              std::to_string(u_upper) + "]");
    SpeedResult out;
    out.u = bracket->first == bracket->second
                ? bracket->first
                : find_root(g, bracket->first, bracket->second, 1e-15);
    if (!(out.u > 0.0)) throw NoSolutionError("self_propulsion_speed: no positive speed");
    out.extrapolated = res.u_max > 0.0 && out.u > res.u_max;
    return out;
}

double self_propulsion_speed(const ResistanceModel& res, const PropulsionModel& prop,
                             double n, double u_upper) {
    return self_propulsion(res, prop, n, u_upper).u;
}

double self_propulsion_speed(const Vessel& vessel, double n) {
    return self_propulsion_speed(vessel.res, vessel.prop, n, 3.0 * vessel.speed_scale());
}

double rate_for_speed(const ResistanceModel& res, const PropulsionModel& prop, double u) {
    // tau0 n^2 + tau1 u n + (tau2 u^2 - R(u)) = 0, larger root.
    const double a = prop.tau0();
    const double b = prop.tau1() * u;
    const double c = prop.tau2() * u * u - resistance(res, u);
    if (!(a > 0.0)) throw ValidationError("rate_for_speed: needs tau0 > 0");
    const double disc = b * b - 4.0 * a * c;
    if (disc < 0.0) throw NoSolutionError("rate_for_speed: no real propeller rate");
    const double sq = std::sqrt(disc);
    const double n = b <= 0.0 ? (-b + sq) / (2.0 * a) : (2.0 * c) / (-b - sq);
    if (!(n > 0.0)) throw NoSolutionError("rate_for_speed: no positive propeller rate");
    return n;
}

std::vector<StationContribution> fk_contributions(const ShipModel& ship, double k_w,
                                                  double zeta_w) {
    if (!(k_w > 0.0) || !(zeta_w > 0.0))
        throw ValidationError("fk_amplitude: need k_w > 0 and zeta_w > 0");
    if (ship.stations.empty()) throw ValidationError("fk_amplitude: ship has no stations");
    const double scale = ship.rho * ship.gravity * zeta_w * k_w;
    std::vector<StationContribution> out;
    out.reserve(ship.stations.size());
    for (const Station& s : ship.stations) {
        const double w = scale * s.seg_len * s.area * std::exp(-0.5 * k_w * s.draft);
        out.push_back({s.x, w * std::cos(k_w * s.x), w * std::sin(k_w * s.x)});
    }
    return out;
}

FkAmplitude fk_amplitude(const ShipModel& ship, double k_w, double zeta_w) {
    FkAmplitude out;
    for (const auto& c : fk_contributions(ship, k_w, zeta_w)) {
        out.i_cos += c.cos_part;
        out.i_sin += c.sin_part;
    }
    out.f_w = std::hypot(out.i_cos, out.i_sin);
    out.eps = std::atan2(out.i_sin, out.i_cos);
    return out;
}

double local_wave_force(const ShipModel& ship, double r_i, double s_j) {
    if (!(r_i > 0.0) || !(s_j > 0.0))
        throw ValidationError("local_wave_force: need r_i > 0 and s_j > 0");
    const double lambda = r_i * ship.length;
    const double height = s_j * lambda;
    return fk_amplitude(ship, 2.0 * std::numbers::pi / lambda, 0.5 * height).f_w;
}

std::vector<Station> refine_stations(const std::vector<Station>& stations, int factor) {
    if (factor < 1) throw ValidationError("refine_stations: factor must be >= 1");
    if (factor == 1 || stations.size() < 2) return stations;
    auto interp = [&](double x, double Station::*field) {
        if (x <= stations.front().x) return stations.front().*field;
        if (x >= stations.back().x) return stations.back().*field;
        const auto it = std::upper_bound(stations.begin(), stations.end(), x,
                                         [](double v, const Station& s) { return v < s.x; });
        const Station& hi = *it;
        const Station& lo = *(it - 1);
        const double t = (x - lo.x) / (hi.x - lo.x);
        return lo.*field + t * (hi.*field - lo.*field);
    };
    std::vector<Station> out;
    out.reserve(stations.size() * static_cast<std::size_t>(factor));
    const double x_min = stations.front().x;
    const double x_max = stations.back().x;
    for (const Station& s : stations) {
        const double h = s.seg_len / factor;
        // Strips are centred on their station except at the ends, where they stay inside.
        double lo = std::max(s.x - 0.5 * s.seg_len, x_min);
        if (lo + s.seg_len > x_max) lo = std::max(x_max - s.seg_len, x_min);
        for (int k = 0; k < factor; ++k) {
            const double x = lo + (k + 0.5) * h;
            out.push_back({x, interp(x, &Station::area), interp(x, &Station::draft), h});
        }
    }
    return out;
}

}  // namespace surfride
