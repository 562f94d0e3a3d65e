// surfride command-line front end.
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "surfride/analytic.hpp"
#include "surfride/error.hpp"
#include "surfride/heteroclinic.hpp"
#include "surfride/numeric.hpp"
#include "surfride/sgisc.hpp"
#include "surfride/ship_io.hpp"
#include "surfride/surge.hpp"

using nlohmann::json;
using namespace surfride;

namespace {

constexpr int kSchemaVersion = 1;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt(double x) {
    if (std::isnan(x)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

json num(double x) {
    if (!std::isfinite(x)) return nullptr;
    return std::stod(fmt(x));
}

std::string csv_quote(const std::string& s) {
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

json envelope(const std::string& command) {
    return json{{"schema_version", kSchemaVersion}, {"command", command}};
}

int exit_code(const std::exception& e) {
    if (dynamic_cast<const ValidationError*>(&e)) return 2;
    if (dynamic_cast<const ConvergenceError*>(&e)) return 3;
    if (dynamic_cast<const NoSolutionError*>(&e)) return 4;
    return 1;
}

// "a:b:step" -> inclusive values.
std::vector<double> parse_sweep(const std::string& text) {
    double a = 0, b = 0, step = 0;
    char c1 = 0, c2 = 0;
    std::istringstream in(text);
    if (!(in >> a >> c1 >> b >> c2 >> step) || c1 != ':' || c2 != ':' || !(step > 0.0) || b < a)
        throw ValidationError("sweep '" + text + "' must be a:b:step with step > 0 and b >= a");
    const auto count = static_cast<int>(std::floor((b - a) / step + 1e-9)) + 1;
    std::vector<double> out;
    for (int i = 0; i < count; ++i) out.push_back(a + i * step);
    return out;
}

// "lo:hi:count" -> count evenly spaced values (count may be 0).
std::vector<double> parse_grid(const std::string& text) {
    double lo = 0, hi = 0;
    long count = 0;
    char c1 = 0, c2 = 0;
    std::istringstream in(text);
    if (!(in >> lo >> c1 >> hi >> c2 >> count) || c1 != ':' || c2 != ':' || count < 0)
        throw ValidationError("grid '" + text + "' must be lo:hi:count with count >= 0");
    std::vector<double> out;
    for (long i = 0; i < count; ++i)
        out.push_back(count == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / (count - 1));
    return out;
}

struct ScenarioArgs {
    std::string ship;
    double lambda_ratio = 1.25;
    double steepness = 0.04;
    double fw = kNaN;
    double calibrate_fn = kNaN;
    double added_mass_ratio = kNaN;

    void add(CLI::App* app) {
        app->add_option("--ship", ship, "ship definition (JSON)")->required()->check(CLI::ExistingFile);
        app->add_option("--lambda-ratio", lambda_ratio, "wavelength / ship length");
        app->add_option("--steepness", steepness, "wave height / wavelength");
        app->add_option("--fw", fw, "surge force amplitude [N]; overrides the station sum");
        app->add_option("--calibrate-fn-low", calibrate_fn,
                        "choose f_w so the lower tangent bifurcation sits at this nominal Fn");
        app->add_option("--added-mass-ratio", added_mass_ratio, "replace Mx by ratio * M");
    }

    Vessel vessel() const {
        Vessel v = load_vessel(ship);
        if (!std::isnan(added_mass_ratio)) {
            if (!(added_mass_ratio >= 0.0))
                throw ValidationError("--added-mass-ratio must be >= 0");
            v.ship.added_mass = added_mass_ratio * v.ship.mass;
        }
        return v;
    }

    WaveCondition wave(const Vessel& v, double ratio) const {
        return WaveCondition::from_ratio(v.ship.length, ratio, steepness, v.ship.gravity);
    }

    Scenario scenario(const Vessel& v, double ratio) const {
        const WaveCondition w = wave(v, ratio);
        if (!std::isnan(fw)) return make_scenario(v, w, fw);
        if (!std::isnan(calibrate_fn))
            return make_scenario(v, w, calibrate_fw_lower_tangent(v, w, calibrate_fn));
        if (v.ship.stations.empty())
            throw ValidationError("ship has no stations; pass --fw or --calibrate-fn-low");
        return make_scenario(v, w);
    }
    Scenario scenario() const { return scenario(vessel(), lambda_ratio); }
};

struct RateArgs {
    double n = kNaN;
    double fn = kNaN;
    void add(CLI::App* app) {
        auto* on = app->add_option("--n", n, "propeller rate [1/s]");
        auto* of = app->add_option("--fn", fn, "nominal Froude number");
        on->excludes(of);
    }
    double rate(const Scenario& sc) const {
        if (!std::isnan(n)) return n;
        if (!std::isnan(fn))
            return rate_for_speed(sc.vessel.res, sc.vessel.prop, fn * sc.vessel.speed_scale());
        throw ValidationError("pass --n or --fn");
    }
};

int cmd_fk(const ScenarioArgs& a, bool as_json) {
    const Vessel v = a.vessel();
    const WaveCondition w = a.wave(v, a.lambda_ratio);
    const FkAmplitude f = fk_amplitude(v.ship, w.k_w, w.amplitude);
    const auto parts = fk_contributions(v.ship, w.k_w, w.amplitude);
    if (as_json) {
        json out = envelope("fk");
        out["f_w"] = num(f.f_w);
        out["eps"] = num(f.eps);
        out["i_cos"] = num(f.i_cos);
        out["i_sin"] = num(f.i_sin);
        out["stations"] = json::array();
        for (const auto& p : parts)
            out["stations"].push_back(
                {{"x", num(p.x)}, {"cos_part", num(p.cos_part)}, {"sin_part", num(p.sin_part)}});
        std::cout << out.dump(2) << "\n";
        return 0;
    }
    std::cout << "# f_w " << fmt(f.f_w) << " eps " << fmt(f.eps) << "\n";
    std::cout << "x,cos_part,sin_part\n";
    for (const auto& p : parts)
        std::cout << fmt(p.x) << "," << fmt(p.cos_part) << "," << fmt(p.sin_part) << "\n";
    return 0;
}

int cmd_equilibria(const ScenarioArgs& a, const RateArgs& r, bool as_json) {
    const Scenario sc = a.scenario();
    const double n = r.rate(sc);
    const SurgeSystem sys = build_system(sc, n);
    const auto eq = equilibria(sys);
    std::optional<TangentRates> tr;
    try {
        tr = tangent_bifurcation_rates(sc);
    } catch (const NoSolutionError&) {
    }
    if (as_json) {
        json out = envelope("equilibria");
        out["n_p"] = num(n);
        out["fn_nominal"] = num(sc.nominal_froude(n));
        out["f_w"] = num(sc.f_w);
        out["rbar"] = num(sys.rbar);
        out["q"] = num(sys.q);
        if (tr)
            out["tangent"] = {{"n_low", num(tr->n_low)},   {"n_high", num(tr->n_high)},
                              {"fn_low", num(tr->fn_low)}, {"fn_high", num(tr->fn_high)}};
        out["equilibria"] = json::array();
        for (const auto& e : eq)
            out["equilibria"].push_back({{"y", num(e.y)},
                                         {"kind", to_string(e.kind)},
                                         {"eig_re", {num(e.eig_re[0]), num(e.eig_re[1])}}});
        std::cout << out.dump(2) << "\n";
        return 0;
    }
    std::cout << "# n_p " << fmt(n) << " fn " << fmt(sc.nominal_froude(n)) << " f_w "
              << fmt(sc.f_w) << " rbar " << fmt(sys.rbar) << "\n";
    if (tr)
        std::cout << "# tangent n_low " << fmt(tr->n_low) << " (fn " << fmt(tr->fn_low)
                  << ") n_high " << fmt(tr->n_high) << " (fn " << fmt(tr->fn_high) << ")\n";
    std::cout << "y,kind,eig_re_1,eig_re_2\n";
    for (const auto& e : eq)
        std::cout << fmt(e.y) << "," << to_string(e.kind) << "," << fmt(e.eig_re[0]) << ","
                  << fmt(e.eig_re[1]) << "\n";
    return 0;
}

struct Row {
    double lambda_ratio = 0.0;
    Branch branch = Branch::surf_riding;
    Method method = Method::newton;
    std::optional<ThresholdResult> result;
    std::string error;
    int code = 0;
};

std::vector<Method> methods_from(const std::vector<std::string>& names) {
    std::vector<Method> out;
    for (const auto& name : names) {
        if (name == "all") {
            for (Method m : default_methods()) out.push_back(m);
            continue;
        }
        out.push_back(parse_method(name));
    }
    return out;
}

std::vector<Branch> branches_from(const std::string& b) {
    if (b == "both") return {Branch::surf_riding, Branch::wave_blocking};
    return {parse_branch(b)};
}

std::vector<Row> run_rows(const ScenarioArgs& a, const std::vector<double>& ratios,
                          const std::vector<Method>& methods,
                          const std::vector<Branch>& branches) {
    const Vessel v = a.vessel();
    std::vector<Row> rows;
    for (double ratio : ratios) {
        std::optional<Scenario> sc;
        std::string sc_error;
        int sc_code = 0;
        try {
            sc = a.scenario(v, ratio);
        } catch (const ValidationError&) {
            throw;
        } catch (const std::exception& e) {
            sc_error = e.what();
            sc_code = exit_code(e);
        }
        for (Branch b : branches)
            for (Method m : methods) {
                Row row{ratio, b, m, std::nullopt, sc_error, sc_code};
                if (sc) {
                    try {
                        row.result = compute_threshold(*sc, m, b);
                    } catch (const std::exception& e) {
                        row.error = e.what();
                        row.code = exit_code(e);
                    }
                }
                rows.push_back(std::move(row));
            }
    }
    return rows;
}

int rows_exit(const std::vector<Row>& rows) {
    for (const auto& r : rows)
        if (r.result) return 0;
    return rows.empty() ? 0 : rows.front().code;
}

json rows_json(const std::string& command, const std::vector<Row>& rows) {
    json out = envelope(command);
    out["rows"] = json::array();
    for (const auto& r : rows) {
        json j{{"lambda_ratio", num(r.lambda_ratio)},
               {"branch", to_string(r.branch)},
               {"method", to_string(r.method)}};
        if (r.result) {
            j["status"] = "ok";
            j["n_cr"] = num(r.result->n_cr);
            j["fn_cr"] = num(r.result->fn_cr);
            json d = json::object();
            for (const auto& [k, x] : r.result->diagnostics) d[k] = num(x);
            j["diagnostics"] = d;
        } else {
            j["status"] = "error";
            j["message"] = r.error;
        }
        out["rows"].push_back(j);
    }
    return out;
}

int cmd_threshold(const ScenarioArgs& a, const std::vector<std::string>& method_names,
                  const std::string& branch, const std::string& sweep, bool as_json) {
    const auto methods = methods_from(method_names);
    const auto branches = branches_from(branch);
    const std::vector<double> ratios = sweep.empty() ? std::vector<double>{a.lambda_ratio}
                                                     : parse_sweep(sweep);
    const auto rows = run_rows(a, ratios, methods, branches);
    if (as_json) {
        std::cout << rows_json("threshold", rows).dump(2) << "\n";
        return rows_exit(rows);
    }
    std::cout << "lambda_ratio,branch,method,n_cr,fn_cr,status,message\n";
    for (const auto& r : rows) {
        std::cout << fmt(r.lambda_ratio) << "," << to_string(r.branch) << ","
                  << to_string(r.method) << ",";
        if (r.result)
            std::cout << fmt(r.result->n_cr) << "," << fmt(r.result->fn_cr) << ",ok,\n";
        else
            std::cout << "nan,nan,error," << csv_quote(r.error) << "\n";
    }
    return rows_exit(rows);
}

// Wide table: one row per lambda/L, one Fn_cr column per branch and method.
int cmd_compare(const ScenarioArgs& a, const std::string& sweep, bool as_json) {
    const auto& methods = default_methods();
    const std::vector<Branch> branches{Branch::surf_riding, Branch::wave_blocking};
    const std::vector<double> ratios = sweep.empty() ? std::vector<double>{a.lambda_ratio}
                                                     : parse_sweep(sweep);
    const auto rows = run_rows(a, ratios, methods, branches);
    if (as_json) {
        std::cout << rows_json("compare", rows).dump(2) << "\n";
        return rows_exit(rows);
    }
    std::cout << "lambda_ratio";
    for (Branch b : branches)
        for (Method m : methods)
            std::cout << "," << (b == Branch::surf_riding ? "surf_" : "block_") << to_string(m);
    std::cout << "\n";
    const std::size_t per_ratio = branches.size() * methods.size();
    for (std::size_t i = 0; i < ratios.size(); ++i) {
        std::cout << fmt(ratios[i]);
        for (std::size_t k = 0; k < per_ratio; ++k) {
            const Row& r = rows[i * per_ratio + k];
            std::cout << "," << (r.result ? fmt(r.result->fn_cr) : "nan");
        }
        std::cout << "\n";
    }
    return rows_exit(rows);
}

int cmd_phase_portrait(const ScenarioArgs& a, const RateArgs& r, const std::string& y_grid,
                       const std::string& v_grid, double dtau, double tau_max, bool as_json) {
    const Scenario sc = a.scenario();
    const double n = r.rate(sc);
    const SurgeSystem sys = build_system(sc, n);
    const auto ys = parse_grid(y_grid);
    const auto vs = parse_grid(v_grid);
    ClassifyOptions opt;
    opt.dtau = dtau;
    opt.tau_max = tau_max;
    std::vector<std::string> tags(ys.size() * vs.size());
    parallel_for(tags.size(), [&](std::size_t idx) {
        const PhasePoint p{ys[idx / vs.size()], vs[idx % vs.size()]};
        try {
            tags[idx] = to_string(classify_asymptotics(sys, p, opt));
        } catch (const ConvergenceError&) {
            tags[idx] = "undecided";
        }
    });
    if (as_json) {
        json out = envelope("phase-portrait");
        out["n_p"] = num(n);
        out["fn_nominal"] = num(sc.nominal_froude(n));
        out["rbar"] = num(sys.rbar);
        out["points"] = json::array();
        for (std::size_t idx = 0; idx < tags.size(); ++idx)
            out["points"].push_back({{"y0", num(ys[idx / vs.size()])},
                                     {"v0", num(vs[idx % vs.size()])},
                                     {"class", tags[idx]}});
        std::cout << out.dump(2) << "\n";
        return 0;
    }
    std::cout << "y0,v0,class\n";
    for (std::size_t idx = 0; idx < tags.size(); ++idx)
        std::cout << fmt(ys[idx / vs.size()]) << "," << fmt(vs[idx % vs.size()]) << ","
                  << tags[idx] << "\n";
    return 0;
}

int cmd_level1(double length, double fn, bool as_json) {
    const Level1Verdict v = level1_check(length, fn);
    if (as_json) {
        json out = envelope("sgisc level1");
        out["length"] = num(length);
        out["fn"] = num(fn);
        out["verdict"] = to_string(v);
        std::cout << out.dump(2) << "\n";
        return 0;
    }
    std::cout << to_string(v) << "\n";
    return 0;
}

int cmd_level2(const std::string& ship, double fn, const std::string& scatter,
               const std::string& cells_csv) {
    const Vessel v = load_vessel(ship);
    const WaveScatterTable table = scatter.empty() ? builtin_scatter_table()
                                                   : load_scatter_csv(scatter);
    if (!scatter.empty())
        std::cerr << "scatter table '" << scatter << "' total occurrences " << fmt(table.total())
                  << "\n";
    const Level2Result r = level2_assess(v, fn, table);
    json out = envelope("sgisc level2");
    out["C"] = num(r.c_value);
    out["R_SR"] = num(r.r_sr);
    out["verdict"] = r.vulnerable ? "vulnerable" : "not_vulnerable";
    out["fn_service"] = num(r.fn_service);
    out["cells_no_root"] = r.cells_no_root;
    out["cells_nonmonotone_in_s"] = r.cells_nonmonotone;
    out["table_total"] = num(r.table_total);
    std::cout << out.dump(2) << "\n";
    if (!cells_csv.empty()) {
        std::ofstream f(cells_csv);
        if (!f) throw ValidationError("cannot write '" + cells_csv + "'");
        f << "hs,tz,w2,contribution\n";
        for (const auto& c : r.per_cell)
            f << fmt(c.hs) << "," << fmt(c.tz) << "," << fmt(c.w2) << "," << fmt(c.contribution)
              << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"surfride: surf-riding and wave-blocking thresholds in following seas"};
    app.require_subcommand(1);
    bool as_json = false;
    app.add_flag("--json", as_json, "machine-readable JSON output");

    ScenarioArgs fk_args;
    auto* fk = app.add_subcommand("fk", "Froude-Krylov surge force amplitude and phase");
    fk_args.add(fk);

    ScenarioArgs eq_args;
    RateArgs eq_rate;
    auto* eq = app.add_subcommand("equilibria", "equilibria and tangent bifurcation rates");
    eq_args.add(eq);
    eq_rate.add(eq);

    ScenarioArgs th_args;
    std::vector<std::string> th_methods{"all"};
    std::string th_branch = "both";
    std::string th_sweep;
    auto* th = app.add_subcommand("threshold", "surf-riding / wave-blocking thresholds");
    th_args.add(th);
    th->add_option("--method", th_methods, "method name(s) or 'all'")->delimiter(',');
    th->add_option("--branch", th_branch, "surf, block or both");
    th->add_option("--sweep-lambda", th_sweep, "a:b:step sweep of lambda/L");

    ScenarioArgs cmp_args;
    std::string cmp_sweep;
    auto* cmp = app.add_subcommand("compare", "all methods side by side as a CSV table");
    cmp_args.add(cmp);
    cmp->add_option("--sweep-lambda", cmp_sweep, "a:b:step sweep of lambda/L");

    ScenarioArgs pp_args;
    RateArgs pp_rate;
    std::string pp_y = "-3.14159:3.14159:9";
    std::string pp_v = "-3:3:7";
    double pp_dtau = 1e-2;
    double pp_tau_max = 2e3;
    auto* pp = app.add_subcommand("phase-portrait", "classify a grid of initial conditions");
    pp_args.add(pp);
    pp_rate.add(pp);
    pp->add_option("--y-grid", pp_y, "lo:hi:count of initial y");
    pp->add_option("--v-grid", pp_v, "lo:hi:count of initial v");
    pp->add_option("--dtau", pp_dtau, "integration step");
    pp->add_option("--tau-max", pp_tau_max, "integration horizon");

    auto* sg = app.add_subcommand("sgisc", "second-generation intact stability checks");
    sg->require_subcommand(1);
    double l1_length = 0.0, l1_fn = 0.0;
    auto* l1 = sg->add_subcommand("level1", "length / Froude number screening");
    l1->add_option("--length", l1_length, "ship length [m]")->required();
    l1->add_option("--fn", l1_fn, "service Froude number")->required();
    std::string l2_ship, l2_scatter, l2_cells;
    double l2_fn = 0.0;
    auto* l2 = sg->add_subcommand("level2", "probabilistic surf-riding C value");
    l2->add_option("--ship", l2_ship, "ship definition (JSON)")->required()->check(CLI::ExistingFile);
    l2->add_option("--fn", l2_fn, "service Froude number")->required();
    l2->add_option("--scatter", l2_scatter, "wave scatter CSV overriding the built-in table");
    l2->add_option("--cells-csv", l2_cells, "write per-sea-state contributions here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*fk) return cmd_fk(fk_args, as_json);
        if (*eq) return cmd_equilibria(eq_args, eq_rate, as_json);
        if (*th) return cmd_threshold(th_args, th_methods, th_branch, th_sweep, as_json);
        if (*cmp) return cmd_compare(cmp_args, cmp_sweep, as_json);
        if (*pp) return cmd_phase_portrait(pp_args, pp_rate, pp_y, pp_v, pp_dtau, pp_tau_max,
                                           as_json);
        if (*l1) return cmd_level1(l1_length, l1_fn, as_json);
        if (*l2) return cmd_level2(l2_ship, l2_fn, l2_scatter, l2_cells);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code(e);
    }
    return 0;
}
