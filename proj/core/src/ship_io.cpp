#include "surfride/ship_io.hpp"

#include <fstream>
#include <sstream>

#include "surfride/error.hpp"

namespace surfride {
namespace {

using nlohmann::json;

const json& require(const json& obj, const char* key, const std::string& where) {
    if (!obj.is_object() || !obj.contains(key))
        throw ValidationError("ship file: missing key '" + where + key + "'");
    return obj.at(key);
}

double number(const json& obj, const char* key, const std::string& where) {
    const json& v = require(obj, key, where);
    if (!v.is_number())
        throw ValidationError("ship file: key '" + where + key + "' must be a number");
    return v.get<double>();
}

int line_of_offset(const std::string& text, std::size_t offset) {
    int line = 1;
    for (std::size_t i = 0; i < offset && i < text.size(); ++i)
        if (text[i] == '\n') ++line;
    return line;
}

}  // namespace

Vessel vessel_from_json(const json& doc) {
    if (!doc.is_object()) throw ValidationError("ship file: top level must be an object");
    Vessel v;
    ShipModel& s = v.ship;
    s.length = number(doc, "length", "");
    s.mass = number(doc, "mass", "");
    s.added_mass = number(doc, "added_mass", "");
    s.rho = number(doc, "rho", "");
    if (doc.contains("gravity")) s.gravity = number(doc, "gravity", "");

    const json& stations = require(doc, "stations", "");
    if (!stations.is_array()) throw ValidationError("ship file: 'stations' must be an array");
    for (std::size_t m = 0; m < stations.size(); ++m) {
        const std::string where = "stations[" + std::to_string(m) + "].";
        const json& st = stations[m];
        s.stations.push_back({number(st, "x", where), number(st, "area", where),
                              number(st, "draft", where), number(st, "seg_len", where)});
    }
    s.validate();

    const json& res = require(doc, "resistance", "");
    static const char* rkeys[] = {"r1", "r2", "r3", "r4", "r5"};
    for (int j = 0; j < 5; ++j) v.res.r[j] = number(res, rkeys[j], "resistance.");
    if (res.contains("u_max")) v.res.u_max = number(res, "u_max", "resistance.");

    const json& prop = require(doc, "propulsion", "");
    v.prop = PropulsionModel({number(prop, "kappa0", "propulsion."),
                              number(prop, "kappa1", "propulsion."),
                              number(prop, "kappa2", "propulsion.")},
                             number(prop, "t_p", "propulsion."),
                             number(prop, "w_p", "propulsion."),
                             number(prop, "d_p", "propulsion."), s.rho);
    return v;
}

Vessel parse_vessel(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError("ship file: parse error at line " +
                              std::to_string(line_of_offset(text, e.byte)) + ": " + e.what());
    }
    return vessel_from_json(doc);
}

Vessel load_vessel(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("ship file: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_vessel(buf.str());
}

json vessel_to_json(const Vessel& v) {
    json doc;
    doc["length"] = v.ship.length;
    doc["mass"] = v.ship.mass;
    doc["added_mass"] = v.ship.added_mass;
    doc["rho"] = v.ship.rho;
    doc["gravity"] = v.ship.gravity;
    doc["stations"] = json::array();
    for (const Station& st : v.ship.stations)
        doc["stations"].push_back(
            {{"x", st.x}, {"area", st.area}, {"draft", st.draft}, {"seg_len", st.seg_len}});
    doc["resistance"] = {{"r1", v.res.r[0]}, {"r2", v.res.r[1]}, {"r3", v.res.r[2]},
                         {"r4", v.res.r[3]}, {"r5", v.res.r[4]}};
    if (v.res.u_max > 0.0) doc["resistance"]["u_max"] = v.res.u_max;
    doc["propulsion"] = {{"kappa0", v.prop.kappa()[0]}, {"kappa1", v.prop.kappa()[1]},
                         {"kappa2", v.prop.kappa()[2]}, {"t_p", v.prop.t_p()},
                         {"w_p", v.prop.w_p()},         {"d_p", v.prop.d_p()}};
    return doc;
}

}  // namespace surfride
