#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "surfride/hull.hpp"

namespace surfride {

// Ship definition document. Required keys: length, mass, added_mass, rho,
// stations[{x, area, draft, seg_len}], resistance{r1..r5},
// propulsion{kappa0, kappa1, kappa2, t_p, w_p, d_p}. Optional: gravity,
// resistance.u_max. Errors name the offending key; parse errors carry the line.
Vessel vessel_from_json(const nlohmann::json& doc);
Vessel parse_vessel(const std::string& text);
Vessel load_vessel(const std::string& path);
nlohmann::json vessel_to_json(const Vessel& vessel);

}  // namespace surfride
