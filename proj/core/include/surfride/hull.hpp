#pragma once

#include <array>
#include <string>
#include <vector>

namespace surfride {

inline constexpr double kStandardGravity = 9.80665;

struct Station {
    double x;        // from midship, positive toward bow [m]
    double area;     // submerged sectional area [m^2]
    double draft;    // local draft [m]
    double seg_len;  // strip length [m]
};

struct ShipModel {
    double length = 0.0;
    std::vector<Station> stations;  // may be empty when f_w is supplied externally
    double mass = 0.0;
    double added_mass = 0.0;
    double rho = 1000.0;
    double gravity = kStandardGravity;

    // Throws ValidationError on any violated invariant.
    void validate() const;
    double total_mass() const { return mass + added_mass; }
};

struct ResistanceModel {
    std::array<double, 5> r{};  // r1..r5 [N s^j / m^j]
    double u_max = 0.0;         // validity bound of the fit; 0 means unbounded
};

class PropulsionModel {
public:
    PropulsionModel() = default;
    PropulsionModel(std::array<double, 3> kappa, double t_p, double w_p, double d_p,
                    double rho);

    const std::array<double, 3>& kappa() const { return kappa_; }
    double t_p() const { return t_p_; }
    double w_p() const { return w_p_; }
    double d_p() const { return d_p_; }
    double rho() const { return rho_; }
    double tau0() const { return tau_[0]; }
    double tau1() const { return tau_[1]; }
    double tau2() const { return tau_[2]; }

private:
    std::array<double, 3> kappa_{};
    double t_p_ = 0.0;
    double w_p_ = 0.0;
    double d_p_ = 1.0;
    double rho_ = 1000.0;
    std::array<double, 3> tau_{};
};

struct Vessel {
    ShipModel ship;
    ResistanceModel res;
    PropulsionModel prop;

    double froude(double u) const;
    double speed_scale() const;  // sqrt(L g)
};

double resistance(const ResistanceModel& model, double u);
// dR/du
double resistance_slope(const ResistanceModel& model, double u);

// tau0 n^2 + tau1 u n + tau2 u^2. Throws ValidationError for n <= 0.
double thrust(const PropulsionModel& model, double u, double n);
// (1 - t) rho n^2 D^4 KT(J); same quantity as thrust() through the advance ratio.
double thrust_kt(const PropulsionModel& model, double u, double n);
double advance_ratio(const PropulsionModel& model, double u, double n);

struct SpeedResult {
    double u = 0.0;
    bool extrapolated = false;  // u beyond the resistance fit's u_max
};

// Unique u in (0, u_upper] with thrust = resistance.
SpeedResult self_propulsion(const ResistanceModel& res, const PropulsionModel& prop,
                            double n, double u_upper);
double self_propulsion_speed(const ResistanceModel& res, const PropulsionModel& prop,
                             double n, double u_upper);
// Bracket [0, 3 sqrt(L g)].
double self_propulsion_speed(const Vessel& vessel, double n);
// Propeller rate whose calm-water speed is u.
double rate_for_speed(const ResistanceModel& res, const PropulsionModel& prop, double u);

struct FkAmplitude {
    double f_w = 0.0;  // [N]
    double eps = 0.0;  // [rad]
    double i_cos = 0.0;
    double i_sin = 0.0;
};

struct StationContribution {
    double x;
    double cos_part;
    double sin_part;
};

FkAmplitude fk_amplitude(const ShipModel& ship, double k_w, double zeta_w);
std::vector<StationContribution> fk_contributions(const ShipModel& ship, double k_w,
                                                  double zeta_w);

// Force amplitude of the local regular wave with length ratio r_i and steepness s_j.
double local_wave_force(const ShipModel& ship, double r_i, double s_j);

// Splits every strip into `factor` equal sub-strips with linearly interpolated
// area and draft between neighbouring stations. End strips lie inside [x_front, x_back].
std::vector<Station> refine_stations(const std::vector<Station>& stations, int factor);

}  // namespace surfride
