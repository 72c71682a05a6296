#include "tpv/config.hpp"

#include "tpv/constants.hpp"
#include "tpv/errors.hpp"
#include "tpv/numeric.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <limits>
#include <set>
#include <sstream>

namespace tpv::cli {

std::string to_string(Pipeline p) {
    switch (p) {
    case Pipeline::optics: return "optics";
    case Pipeline::device: return "device";
    case Pipeline::storage: return "storage";
    case Pipeline::system: return "system";
    }
    return "?";
}

Pipeline pipeline_from_string(const std::string& s) {
    if (s == "optics") return Pipeline::optics;
    if (s == "device") return Pipeline::device;
    if (s == "storage") return Pipeline::storage;
    if (s == "system") return Pipeline::system;
    throw ConfigError("unknown pipeline '" + s + "'");
}

namespace {

using K = ParamInfo::Kind;
constexpr double inf = std::numeric_limits<double>::infinity();

ParamInfo num(std::string path, json def, double lo, double hi, std::string doc, bool lo_open = false,
              bool hi_open = false) {
    ParamInfo p;
    p.path = std::move(path);
    p.def = std::move(def);
    p.lo = lo;
    p.hi = hi;
    p.lo_open = lo_open;
    p.hi_open = hi_open;
    p.doc = std::move(doc);
    return p;
}

ParamInfo integer(std::string path, json def, double lo, double hi, std::string doc) {
    auto p = num(std::move(path), std::move(def), lo, hi, std::move(doc));
    p.kind = K::integer;
    return p;
}

ParamInfo str(std::string path, json def, std::vector<std::string> choices, std::string doc) {
    ParamInfo p;
    p.path = std::move(path);
    p.def = std::move(def);
    p.kind = K::string;
    p.choices = std::move(choices);
    p.doc = std::move(doc);
    return p;
}

ParamInfo boolean(std::string path, bool def, std::string doc) {
    ParamInfo p;
    p.path = std::move(path);
    p.def = def;
    p.kind = K::boolean;
    p.doc = std::move(doc);
    return p;
}

std::vector<ParamInfo> build_schema() {
    const json null = nullptr;
    return {
        str("scenario", "run", {}, "run name, used for output file names"),
        str("pipeline", "system", {"optics", "device", "storage", "system"}, "stages evaluated per sweep point"),

        num("grid.lambda_min_um", 0.3, 0, 100, "lower wavelength bound of the integration grid", true),
        num("grid.lambda_max_um", 20.0, 0, 1000, "upper wavelength bound of the integration grid", true),
        integer("grid.points", 2000, 2, 1e6, "log-spaced wavelength nodes"),

        num("source.T_bb_C", 1300.0, -273.15, 5000, "blackbody emitter temperature", true),
        num("source.view_factor", 1.0, 0, 1, "emitter-to-cell view factor"),

        str("cell.preset", "si_default", {"si_default", "ingaas_default"}, "cell preset the overrides apply to"),
        num("cell.E_g_eV", null, 0, 5, "bandgap", true),
        num("cell.t_abs_um", null, 0, 1e4, "absorber thickness", true),
        num("cell.N_doping_cm3", null, 0, 1e22, "free-carrier concentration"),
        num("cell.R_s_mohm_cm2", null, 0, 1e5, "series resistance"),
        num("cell.R_sh_ohm_cm2", null, 0, inf, "shunt resistance; null means none", true),
        num("cell.ideality", null, 0, 10, "diode ideality factor", true),
        num("cell.IQE", null, 0, 1, "internal quantum efficiency", true),
        num("cell.airbridge_fill", null, 0, 1, "air-bridge area fill factor", true),
        str("cell.inband_absorption", null, {"ideal", "stack"}, "above-gap absorptance model"),
        str("cell.oob_model", null, {"stack", "flat"}, "out-of-band optics: air-bridge stack or flat reflectance"),
        num("cell.oob_reflectance", null, 0, 1, "flat out-of-band reflectance"),
        num("cell.ref.V_oc_V", null, 0, 5, "reference open-circuit voltage", true),
        num("cell.ref.J_sc_A_cm2", null, 0, 1e3, "reference short-circuit current", true),
        num("cell.ref.FF", null, 0, 1, "reference fill factor", true, true),
        num("cell.ref.R_s_mohm_cm2", null, 0, 1e5, "series resistance of the reference cell"),
        num("cell.ref.T_C", null, -273.15, 500, "reference temperature", true),

        num("stack.gap_um", 600.0, 0, 1e5, "air gap between absorber and reflector", true),
        num("stack.au_um", 1.0, 0, 100, "Au reflector thickness", true),
        num("stack.fca_C", 2.0e-18, 0, 1e-10, "FCA prefactor, cm^-1 per cm^-3 per um^gamma", true),
        num("stack.fca_gamma", 2.0, 0, 5, "FCA wavelength exponent", true),
        str("stack.si_table", "", {}, "Si n,k CSV; empty uses the built-in table"),
        str("stack.au_table", "", {}, "Au n,k CSV; empty uses the built-in table"),

        num("thermal.T_heatsink_C", 25.0, -100, 500, "heat-sink temperature"),
        num("thermal.theta_cm2K_per_W", 1.5, 0, 1e3, "thermal boundary resistance"),

        num("battery.m_si_kg", 1e5, 0, 1e12, "silicon mass", true),
        num("battery.T_ini_C", 25.0, -273.15, 5000, "initial (discharged) temperature", true),
        num("battery.T_h_C", null, -273.15, 5000, "charged temperature; null follows source.T_bb_C", true),
        num("battery.wall_m", 0.1, 0, 10, "SiC wall thickness"),
        num("battery.aspect", 2.0, 0, 100, "height over inner radius", true),
        num("battery.cost_si_per_m3", 20000.0, 0, inf, "Si unit cost"),
        num("battery.cost_sic_per_m3", 35000.0, 0, inf, "SiC unit cost"),
        num("battery.rho_si", 2263.0, 0, inf, "Si density", true),
        num("battery.rho_sic", 3210.0, 0, inf, "SiC density", true),
        num("battery.L_heat_kJ_per_kg", 2000.0, 0, inf, "latent heat of fusion"),
        num("battery.T_melt_C", 1410.0, -273.15, 5000, "melting point", true),
        num("battery.liquid_cp", 1040.0, 0, inf, "liquid-phase heat capacity", true),
        num("battery.bop_factor", 0.2, 0, 10, "balance-of-plant factor on material cost"),
        boolean("battery.end_caps", true, "count SiC end caps in the vessel volume"),
        str("battery.cp_table", "", {}, "solid c_p CSV (T_K, cp_J_per_kgK); empty uses the built-in table"),
        str("battery.scenario", "full", {"full", "no_sic", "no_materials"}, "battery material CapEx scenario"),

        num("econ.t_c_h", 10.0, 0, 1e4, "charge time", true),
        num("econ.t_d_h", 10.0, 0, 1e4, "discharge time", true),
        num("econ.t_d_ref_h", 10.0, 0, 1e4, "reference discharge time", true),
        num("econ.N_cy", 730.0, 0, 1e5, "cycles per year", true),
        num("econ.lifetime_y", 25.0, 1, 200, "system lifetime"),
        num("econ.d_r", 0.05, 0, 1, "annual cell degradation"),
        num("econ.eta_ch", 0.9, 0, 1, "charging efficiency"),
        num("econ.k_loss", 0.1, 0, 1, "heat loss per cycle"),
        num("econ.heat_loss", 0.1, 0, 1, "heat-loss fraction used by LCOE", false, true),
        num("econ.r", 0.05, 0, 1, "discount rate", true, true),
        str("econ.crf_form", "paper", {"paper", "annuity"}, "capital recovery factor formula"),
        num("econ.cost_heatsink_per_kW", 50.0, 0, inf, "heat-sink cost"),
        num("econ.cost_fab_per_cm2", null, 0, inf, "cell fabrication cost; null uses Si 1, InGaAs 10"),
        num("econ.opex_per_kW_y", 12.5, 0, inf, "operating cost"),
        num("econ.pv_cost_per_m2", 150.0, 0, inf, "PV charging unit cost"),
        num("econ.pv_W_per_m2", 200.0, 0, inf, "PV nameplate power density", true),
        num("econ.csp_cost_per_m2", 200.0, 0, inf, "CSP charging unit cost"),
        num("econ.csp_W_per_m2", 600.0, 0, inf, "CSP nameplate power density", true),
        num("econ.charging_capacity_factor", 0.2, 0, 1, "average over nameplate charging power", true),
        num("econ.split_pv", 0.5, 0, 1, "PV share of charging energy; CSP takes the rest"),
        num("econ.cpp_in_per_W", 0.0, 0, inf, "charging-side power electronics cost"),

        str("output.dir", null, {}, "output directory"),
        boolean("output.curves", false, "write a J-V curve file per device row"),
        str("output.plot.x", null, {}, "sweep parameter for plot columns; default first axis"),
        str("output.plot.y", null, {}, "sweep parameter for plot rows; default second axis"),
        str("output.plot.value", null, {}, "column gridded into the plot-data file"),
    };
}

std::vector<std::string> split_path(const std::string& dotted) {
    std::vector<std::string> out;
    std::stringstream ss(dotted);
    std::string part;
    while (std::getline(ss, part, '.')) out.push_back(part);
    return out;
}

// Object keys allowed below each schema prefix ("" is the root).
const std::map<std::string, std::set<std::string>>& schema_children() {
    static const auto m = [] {
        std::map<std::string, std::set<std::string>> out;
        for (const auto& p : schema()) {
            auto parts = split_path(p.path);
            std::string prefix;
            for (const auto& part : parts) {
                out[prefix].insert(part);
                prefix = prefix.empty() ? part : prefix + "." + part;
            }
        }
        out[""].insert("sweep");
        return out;
    }();
    return m;
}

void merge_into(json& base, const json& over) {
    for (auto it = over.begin(); it != over.end(); ++it) {
        if (it.value().is_object() && base.contains(it.key()) && base[it.key()].is_object())
            merge_into(base[it.key()], it.value());
        else
            base[it.key()] = it.value();
    }
}

double number_at(const json& m, const std::string& path) {
    json v = get_path(m, path);
    if (!v.is_number()) throw ConfigError(path + ": expected a number");
    return v.get<double>();
}

std::string string_at(const json& m, const std::string& path) {
    json v = get_path(m, path);
    if (!v.is_string()) throw ConfigError(path + ": expected a string");
    return v.get<std::string>();
}

// Overwrite target only when the merged config supplies a value.
void opt_number(const json& m, const std::string& path, double& target) {
    json v = get_path(m, path);
    if (v.is_null()) return;
    if (!v.is_number()) throw ConfigError(path + ": expected a number");
    target = v.get<double>();
}

std::string check_leaf(const ParamInfo& p, const json& v) {
    if (v.is_null()) {
        if (p.def.is_null()) return {};
        return p.path + ": null is not allowed";
    }
    switch (p.kind) {
    case K::boolean:
        if (!v.is_boolean()) return p.path + ": expected true or false";
        return {};
    case K::string:
        if (!v.is_string()) return p.path + ": expected a string";
        if (!p.choices.empty()) {
            auto s = v.get<std::string>();
            bool found = false;
            for (const auto& c : p.choices) found = found || c == s;
            if (!found) {
                std::string list;
                for (const auto& c : p.choices) list += (list.empty() ? "" : ", ") + c;
                return p.path + ": '" + s + "' is not one of " + list;
            }
        }
        return {};
    case K::integer:
    case K::number: {
        if (!v.is_number()) return p.path + ": expected a number";
        double x = v.get<double>();
        if (p.kind == K::integer && std::floor(x) != x) return p.path + ": expected an integer";
        bool below = p.lo_open ? !(x > p.lo) : !(x >= p.lo);
        bool above = p.hi_open ? !(x < p.hi) : !(x <= p.hi);
        if (below || above) {
            std::ostringstream os;
            os << p.path << " = " << format_number(x) << " is out of range " << (p.lo_open ? "(" : "[")
               << format_number(p.lo) << ", " << format_number(p.hi) << (p.hi_open ? ")" : "]");
            return os.str();
        }
        return {};
    }
    }
    return {};
}

std::string nearest(const std::string& key, const std::set<std::string>& options) {
    std::string best;
    std::size_t bd = std::numeric_limits<std::size_t>::max();
    for (const auto& o : options) {
        std::size_t d = num::edit_distance(key, o);
        if (d < bd) {
            bd = d;
            best = o;
        }
    }
    return best;
}

void walk_unknown(const json& j, const std::string& prefix, ValidationReport& rep) {
    const auto& children = schema_children();
    auto it = children.find(prefix);
    if (it == children.end()) return;
    for (auto kv = j.begin(); kv != j.end(); ++kv) {
        std::string path = prefix.empty() ? kv.key() : prefix + "." + kv.key();
        if (!it->second.count(kv.key())) {
            std::string hint = nearest(kv.key(), it->second);
            std::string near_path = prefix.empty() ? hint : prefix + "." + hint;
            rep.warnings.push_back("unknown key '" + path + "'; did you mean '" + near_path + "'?");
            continue;
        }
        if (path == "sweep") continue;
        if (kv.value().is_object()) {
            if (!children.count(path) && !find_param(path))
                rep.errors.push_back(path + ": unexpected object");
            else if (children.count(path))
                walk_unknown(kv.value(), path, rep);
            else
                rep.errors.push_back(path + ": expected a value, got an object");
        } else if (children.count(path) && !kv.value().is_null()) {
            rep.errors.push_back(path + ": expected an object");
        }
    }
}

}

const std::vector<ParamInfo>& schema() {
    static const std::vector<ParamInfo> s = build_schema();
    return s;
}

const ParamInfo* find_param(const std::string& path) {
    for (const auto& p : schema())
        if (p.path == path) return &p;
    return nullptr;
}

json get_path(const json& j, const std::string& dotted) {
    const json* cur = &j;
    for (const auto& part : split_path(dotted)) {
        if (!cur->is_object() || !cur->contains(part)) return nullptr;
        cur = &(*cur)[part];
    }
    return *cur;
}

void set_path(json& j, const std::string& dotted, const json& value) {
    json* cur = &j;
    auto parts = split_path(dotted);
    for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
        if (!(*cur)[parts[i]].is_object()) (*cur)[parts[i]] = json::object();
        cur = &(*cur)[parts[i]];
    }
    (*cur)[parts.back()] = value;
}

json default_config() {
    json j = json::object();
    for (const auto& p : schema()) set_path(j, p.path, p.def);
    j["sweep"] = {{"axes", json::array()}};
    return j;
}

json merge_config(const json& user) {
    json base = default_config();
    if (!user.is_null()) {
        if (!user.is_object()) throw ConfigError("configuration must be a JSON object");
        merge_into(base, user);
    }
    return base;
}

Resolved resolve(const json& m) {
    for (const auto& p : schema()) {
        auto err = check_leaf(p, get_path(m, p.path));
        if (!err.empty()) throw ConfigError(err);
    }
    Resolved r;
    r.scenario = string_at(m, "scenario");
    r.pipeline = pipeline_from_string(string_at(m, "pipeline"));
    r.grid.lambda_min_um = number_at(m, "grid.lambda_min_um");
    r.grid.lambda_max_um = number_at(m, "grid.lambda_max_um");
    r.grid.points = static_cast<std::size_t>(number_at(m, "grid.points"));
    r.T_bb_C = number_at(m, "source.T_bb_C");
    r.view_factor = number_at(m, "source.view_factor");

    CellDesign& c = r.cell;
    c = cell_preset(string_at(m, "cell.preset"));
    opt_number(m, "cell.E_g_eV", c.E_g_eV);
    opt_number(m, "cell.t_abs_um", c.t_abs_um);
    opt_number(m, "cell.N_doping_cm3", c.N_doping);
    opt_number(m, "cell.R_s_mohm_cm2", c.R_s_mohm);
    opt_number(m, "cell.R_sh_ohm_cm2", c.R_sh_ohm);
    opt_number(m, "cell.ideality", c.ideality);
    opt_number(m, "cell.IQE", c.IQE);
    opt_number(m, "cell.airbridge_fill", c.airbridge_fill);
    opt_number(m, "cell.oob_reflectance", c.oob_reflectance);
    if (auto v = get_path(m, "cell.inband_absorption"); v.is_string())
        c.inband = v == "ideal" ? InbandModel::ideal : InbandModel::stack;
    if (auto v = get_path(m, "cell.oob_model"); v.is_string())
        c.oob = v == "stack" ? OobModel::stack : OobModel::flat;
    opt_number(m, "cell.ref.V_oc_V", c.ref.V_oc);
    opt_number(m, "cell.ref.J_sc_A_cm2", c.ref.J_sc);
    opt_number(m, "cell.ref.FF", c.ref.FF);
    opt_number(m, "cell.ref.R_s_mohm_cm2", c.ref.R_s_mohm);
    if (auto v = get_path(m, "cell.ref.T_C"); v.is_number()) c.ref.T_K = phys::to_kelvin(v.get<double>());

    c.stack.gap_um = number_at(m, "stack.gap_um");
    c.stack.au_um = number_at(m, "stack.au_um");
    c.stack.fca.C = number_at(m, "stack.fca_C");
    c.stack.fca.gamma = number_at(m, "stack.fca_gamma");
    r.si_table = string_at(m, "stack.si_table");
    r.au_table = string_at(m, "stack.au_table");
    if (!r.si_table.empty()) c.stack.si_base = TabulatedMaterial::from_csv_file("Si", r.si_table);
    if (!r.au_table.empty()) c.stack.au = TabulatedMaterial::from_csv_file("Au", r.au_table);
    c.validate();

    r.thermal.T_heatsink_C = number_at(m, "thermal.T_heatsink_C");
    r.thermal.theta_cm2K_per_W = number_at(m, "thermal.theta_cm2K_per_W");

    BatterySpec& b = r.battery;
    b.m_si_kg = number_at(m, "battery.m_si_kg");
    b.T_ini_C = number_at(m, "battery.T_ini_C");
    b.T_h_C = r.T_bb_C;
    opt_number(m, "battery.T_h_C", b.T_h_C);
    b.wall_m = number_at(m, "battery.wall_m");
    b.aspect = number_at(m, "battery.aspect");
    b.cost_si_per_m3 = number_at(m, "battery.cost_si_per_m3");
    b.cost_sic_per_m3 = number_at(m, "battery.cost_sic_per_m3");
    b.rho_si = number_at(m, "battery.rho_si");
    b.rho_sic = number_at(m, "battery.rho_sic");
    b.L_heat_kJ_per_kg = number_at(m, "battery.L_heat_kJ_per_kg");
    b.T_melt_C = number_at(m, "battery.T_melt_C");
    b.liquid_cp = number_at(m, "battery.liquid_cp");
    b.bop_factor = number_at(m, "battery.bop_factor");
    b.end_caps = get_path(m, "battery.end_caps").get<bool>();
    b.cp_table = string_at(m, "battery.cp_table");
    b.validate();
    r.capex_scenario = capex_scenario_from_string(string_at(m, "battery.scenario"));

    EconParams& e = r.econ;
    e.t_c_h = number_at(m, "econ.t_c_h");
    e.t_d_h = number_at(m, "econ.t_d_h");
    e.t_d_ref_h = number_at(m, "econ.t_d_ref_h");
    e.N_cy = number_at(m, "econ.N_cy");
    e.lifetime_y = number_at(m, "econ.lifetime_y");
    e.d_r = number_at(m, "econ.d_r");
    e.eta_ch = number_at(m, "econ.eta_ch");
    e.k_loss = number_at(m, "econ.k_loss");
    e.heat_loss = number_at(m, "econ.heat_loss");
    e.r = number_at(m, "econ.r");
    e.crf_form = crf_form_from_string(string_at(m, "econ.crf_form"));
    e.cost_heatsink_per_kW = number_at(m, "econ.cost_heatsink_per_kW");
    e.cost_fab_per_cm2 = default_fab_cost(c.material);
    opt_number(m, "econ.cost_fab_per_cm2", e.cost_fab_per_cm2);
    e.opex_per_kW_y = number_at(m, "econ.opex_per_kW_y");
    e.pv_cost_per_m2 = number_at(m, "econ.pv_cost_per_m2");
    e.pv_W_per_m2 = number_at(m, "econ.pv_W_per_m2");
    e.csp_cost_per_m2 = number_at(m, "econ.csp_cost_per_m2");
    e.csp_W_per_m2 = number_at(m, "econ.csp_W_per_m2");
    e.charging_capacity_factor = number_at(m, "econ.charging_capacity_factor");
    e.split_pv = number_at(m, "econ.split_pv");
    e.cpp_in_per_W = number_at(m, "econ.cpp_in_per_W");
    e.validate();

    r.curves = get_path(m, "output.curves").get<bool>();
    return r;
}

json effective_parameters(const Resolved& r) {
    json j;
    j["scenario"] = r.scenario;
    j["pipeline"] = to_string(r.pipeline);
    j["grid"] = {{"lambda_min_um", r.grid.lambda_min_um},
                 {"lambda_max_um", r.grid.lambda_max_um},
                 {"points", r.grid.points},
                 {"spacing", "log"}};
    j["source"] = {{"T_bb_C", r.T_bb_C}, {"view_factor", r.view_factor}};
    const CellDesign& c = r.cell;
    j["cell"] = {{"preset", c.preset},
                 {"material", to_string(c.material)},
                 {"E_g_eV", c.E_g_eV},
                 {"lambda_g_um", c.lambda_g_um()},
                 {"t_abs_um", c.t_abs_um},
                 {"N_doping_cm3", c.N_doping},
                 {"R_s_mohm_cm2", c.R_s_mohm},
                 {"R_sh_ohm_cm2", std::isinf(c.R_sh_ohm) ? json(nullptr) : json(c.R_sh_ohm)},
                 {"ideality", c.ideality},
                 {"IQE", c.IQE},
                 {"airbridge_fill", c.airbridge_fill},
                 {"inband_absorption", to_string(c.inband)},
                 {"oob_model", to_string(c.oob)},
                 {"oob_reflectance", c.oob_reflectance},
                 {"ref",
                  {{"V_oc_V", c.ref.V_oc},
                   {"J_sc_A_cm2", c.ref.J_sc},
                   {"FF", c.ref.FF},
                   {"R_s_mohm_cm2", c.ref.R_s_mohm},
                   {"T_C", phys::to_celsius(c.ref.T_K)}}}};
    j["stack"] = {{"gap_um", c.stack.gap_um},
                  {"au_um", c.stack.au_um},
                  {"fca_C", c.stack.fca.C},
                  {"fca_gamma", c.stack.fca.gamma},
                  {"si_table", r.si_table.empty() ? "builtin:si_nk.csv v1" : r.si_table},
                  {"au_table", r.au_table.empty() ? "builtin:au_nk.csv v1" : r.au_table},
                  {"coherence_threshold_um", coherence_threshold_um}};
    j["thermal"] = {{"T_heatsink_C", r.thermal.T_heatsink_C}, {"theta_cm2K_per_W", r.thermal.theta_cm2K_per_W}};
    const BatterySpec& b = r.battery;
    j["battery"] = {{"m_si_kg", b.m_si_kg},
                    {"T_ini_C", b.T_ini_C},
                    {"T_h_C", b.T_h_C},
                    {"wall_m", b.wall_m},
                    {"aspect", b.aspect},
                    {"cost_si_per_m3", b.cost_si_per_m3},
                    {"cost_sic_per_m3", b.cost_sic_per_m3},
                    {"rho_si", b.rho_si},
                    {"rho_sic", b.rho_sic},
                    {"L_heat_kJ_per_kg", b.L_heat_kJ_per_kg},
                    {"T_melt_C", b.T_melt_C},
                    {"liquid_cp", b.liquid_cp},
                    {"bop_factor", b.bop_factor},
                    {"end_caps", b.end_caps},
                    {"cp_table", b.cp_table.empty() ? "builtin:si_cp.csv v1" : b.cp_table},
                    {"scenario", to_string(r.capex_scenario)}};
    const EconParams& e = r.econ;
    j["econ"] = {{"t_c_h", e.t_c_h},
                 {"t_d_h", e.t_d_h},
                 {"t_d_ref_h", e.t_d_ref_h},
                 {"N_cy", e.N_cy},
                 {"lifetime_y", e.lifetime_y},
                 {"d_r", e.d_r},
                 {"eta_ch", e.eta_ch},
                 {"k_loss", e.k_loss},
                 {"heat_loss", e.heat_loss},
                 {"r", e.r},
                 {"crf_form", to_string(e.crf_form)},
                 {"cost_heatsink_per_kW", e.cost_heatsink_per_kW},
                 {"cost_fab_per_cm2", e.cost_fab_per_cm2},
                 {"opex_per_kW_y", e.opex_per_kW_y},
                 {"pv_cost_per_m2", e.pv_cost_per_m2},
                 {"pv_W_per_m2", e.pv_W_per_m2},
                 {"csp_cost_per_m2", e.csp_cost_per_m2},
                 {"csp_W_per_m2", e.csp_W_per_m2},
                 {"charging_capacity_factor", e.charging_capacity_factor},
                 {"split_pv", e.split_pv},
                 {"cpp_in_per_W", e.cpp_in_per_W}};
    return j;
}

std::string ValidationReport::format() const {
    std::ostringstream os;
    for (const auto& e : errors) os << "error: " << e << "\n";
    for (const auto& w : warnings) os << "warning: " << w << "\n";
    for (const auto& d : defaults) os << "default: " << d << "\n";
    os << (ok() ? "config OK" : "config has errors") << " (" << errors.size() << " errors, " << warnings.size()
       << " warnings, " << defaults.size() << " defaults applied)\n";
    return os.str();
}

ValidationReport validate_config(const json& user) {
    ValidationReport rep;
    if (!user.is_null() && !user.is_object()) {
        rep.errors.push_back("configuration must be a JSON object");
        return rep;
    }
    json u = user.is_null() ? json::object() : user;
    walk_unknown(u, "", rep);

    for (const auto& p : schema()) {
        json v = get_path(u, p.path);
        if (v.is_null()) {
            std::string shown = p.def.is_null() ? "(from preset or linked field)" : p.def.dump();
            rep.defaults.push_back(p.path + " = " + shown);
            continue;
        }
        auto err = check_leaf(p, v);
        if (!err.empty()) rep.errors.push_back(err);
    }

    json axes = get_path(u, "sweep.axes");
    if (!axes.is_null()) {
        if (!axes.is_array()) {
            rep.errors.push_back("sweep.axes: expected an array");
        } else {
            for (std::size_t i = 0; i < axes.size(); ++i) {
                const json& a = axes[i];
                std::string where = "sweep.axes[" + std::to_string(i) + "]";
                if (!a.is_object() || !a.contains("param") || !a["param"].is_string()) {
                    rep.errors.push_back(where + ": needs a 'param' string");
                    continue;
                }
                std::string param = a["param"];
                if (param == "variant") {
                    if (!a.contains("values") || !a["values"].is_array() || a["values"].empty())
                        rep.errors.push_back(where + ": variant axis needs a non-empty 'values' list");
                    else
                        for (const auto& v : a["values"]) {
                            if (!v.is_object()) {
                                rep.errors.push_back(where + ": variant values must be objects");
                                continue;
                            }
                            for (auto kv = v.begin(); kv != v.end(); ++kv) {
                                if (kv.key() == "label") continue;
                                const ParamInfo* p = find_param(kv.key());
                                if (!p)
                                    rep.errors.push_back(where + ": unknown parameter '" + kv.key() + "'");
                                else if (auto err = check_leaf(*p, kv.value()); !err.empty())
                                    rep.errors.push_back(where + ": " + err);
                            }
                        }
                    continue;
                }
                const ParamInfo* p = find_param(param);
                if (!p) {
                    std::set<std::string> all;
                    for (const auto& q : schema()) all.insert(q.path);
                    rep.errors.push_back(where + ": unknown parameter '" + param + "'; did you mean '" +
                                         nearest(param, all) + "'?");
                    continue;
                }
                if (a.contains("values")) {
                    if (!a["values"].is_array() || a["values"].empty())
                        rep.errors.push_back(where + ": 'values' must be a non-empty list");
                    else
                        for (const auto& v : a["values"])
                            if (auto err = check_leaf(*p, v); !err.empty()) rep.errors.push_back(where + ": " + err);
                    continue;
                }
                for (const char* k : {"min", "max", "steps"})
                    if (!a.contains(k) || !a[k].is_number()) rep.errors.push_back(where + ": needs numeric '" + std::string(k) + "'");
                if (!rep.ok()) continue;
                std::string scale = a.value("scale", "linear");
                if (scale != "linear" && scale != "log") rep.errors.push_back(where + ": scale must be linear or log");
                if (a["steps"].get<double>() < 1 || std::floor(a["steps"].get<double>()) != a["steps"].get<double>())
                    rep.errors.push_back(where + ": steps must be a positive integer");
                if (scale == "log" && !(a["min"].get<double>() > 0 && a["max"].get<double>() > 0))
                    rep.errors.push_back(where + ": log scale needs positive bounds");
                for (const char* k : {"min", "max"})
                    if (auto err = check_leaf(*p, a[k]); !err.empty()) rep.errors.push_back(where + ": " + err);
                for (auto kv = a.begin(); kv != a.end(); ++kv) {
                    static const std::set<std::string> keys{"param", "min", "max", "steps", "scale", "values", "label"};
                    if (!keys.count(kv.key()))
                        rep.warnings.push_back(where + ": unknown key '" + kv.key() + "'; did you mean '" +
                                               nearest(kv.key(), keys) + "'?");
                }
            }
        }
    }

    if (rep.ok()) {
        try {
            resolve(merge_config(u));
        } catch (const std::exception& e) {
            rep.errors.push_back(e.what());
        }
    }
    return rep;
}

json parse_config_text(const std::string& text, const std::string& origin) {
    if (text.find_first_not_of(" \t\r\n") == std::string::npos) return json::object();
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        std::string msg = e.what();
        auto pos = msg.find("parse error");
        throw ConfigError(origin + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " +
                          (pos == std::string::npos ? msg : msg.substr(pos)));
    }
}

json load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), path);
}

std::string config_hash(const json& j) {
    std::string s = j.dump();
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    std::ostringstream os;
    os << std::hex;
    os.width(16);
    os.fill('0');
    os << h;
    return os.str();
}

std::string format_number(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

}
