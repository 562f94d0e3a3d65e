#pragma once

#include <string>

#include "surfride/analytic.hpp"
#include "surfride/ship_io.hpp"
#include "surfride/surge.hpp"

namespace surfride::testing {

inline std::string data_path(const std::string& rel) {
    return std::string(SURFRIDE_DATA_DIR) + "/" + rel;
}

inline Vessel dtmb_model() { return load_vessel(data_path("ships/dtmb5415_model.json")); }
inline Vessel fullscale() { return load_vessel(data_path("ships/synthetic_fullscale.json")); }

// DTMB model at lambda/L = 1.25, H/lambda = 0.04 with f_w placing the lower
// tangent bifurcation at Fn = 0.2602.
inline Scenario calibrated_dtmb(double added_mass_ratio = 0.0) {
    Vessel v = dtmb_model();
    v.ship.added_mass = added_mass_ratio * v.ship.mass;
    const auto w = WaveCondition::from_ratio(v.ship.length, 1.25, 0.04, v.ship.gravity);
    return make_scenario(v, w, calibrate_fw_lower_tangent(v, w, 0.2602));
}

}  // namespace surfride::testing
