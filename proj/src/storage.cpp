#include "tpv/storage.hpp"

#include "tpv/constants.hpp"
#include "tpv/errors.hpp"
#include "tpv/numeric.hpp"
#include "tpv/tables.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace tpv {

HeatCapacity::HeatCapacity(std::vector<double> T_K, std::vector<double> cp, double liquid_cp, double T_melt_K)
    : T_(std::move(T_K)), cp_(std::move(cp)), liquid_cp_(liquid_cp), T_melt_K_(T_melt_K) {
    if (T_.size() < 2 || T_.size() != cp_.size()) throw DomainError("c_p table needs at least two rows");
    for (std::size_t i = 0; i < T_.size(); ++i) {
        if (i > 0 && !(T_[i] > T_[i - 1])) throw DomainError("c_p table temperatures must increase");
        if (!(cp_[i] > 0)) throw DomainError("c_p table values must be positive");
    }
    if (!(liquid_cp_ > 0)) throw DomainError("liquid c_p must be positive");
}

HeatCapacity HeatCapacity::from_csv_text(const std::string& text, double liquid_cp, double T_melt_K) {
    std::istringstream in(text);
    std::string line;
    std::vector<double> T, cp;
    bool header = true;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        if (header) {
            header = false;
            continue;
        }
        auto comma = line.find(',');
        if (comma == std::string::npos)
            throw ConfigError("c_p table line " + std::to_string(lineno) + ": expected 2 columns");
        try {
            T.push_back(std::stod(line.substr(0, comma)));
            cp.push_back(std::stod(line.substr(comma + 1)));
        } catch (const std::exception&) {
            throw ConfigError("c_p table line " + std::to_string(lineno) + ": bad number");
        }
    }
    return HeatCapacity(std::move(T), std::move(cp), liquid_cp, T_melt_K);
}

HeatCapacity HeatCapacity::from_csv_file(const std::string& path, double liquid_cp, double T_melt_K) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open c_p table " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_csv_text(ss.str(), liquid_cp, T_melt_K);
}

HeatCapacity HeatCapacity::silicon_default() {
    return from_csv_text(tables::si_cp(), 1040.0, phys::to_kelvin(1410.0));
}

double HeatCapacity::at(double T_K) const {
    if (T_K >= T_melt_K_) return liquid_cp_;
    return num::interp(T_, cp_, T_K);
}

double HeatCapacity::integrate(double a, double b) const {
    if (b < a) return -integrate(b, a);
    double sum = 0;
    // liquid part
    if (b > T_melt_K_) {
        double lo = std::max(a, T_melt_K_);
        sum += liquid_cp_ * (b - lo);
        b = lo;
    }
    if (b <= a) return sum;
    // solid part: breakpoints at table nodes, sub-steps of at most 1 K
    std::vector<double> cuts{a};
    for (double t : T_)
        if (t > a && t < b) cuts.push_back(t);
    cuts.push_back(b);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        double x0 = cuts[i], x1 = cuts[i + 1];
        int steps = std::max(1, static_cast<int>(std::ceil(x1 - x0)));
        double h = (x1 - x0) / steps;
        for (int k = 0; k < steps; ++k) {
            double u = x0 + k * h, v = (k + 1 == steps) ? x1 : x0 + (k + 1) * h;
            sum += 0.5 * (num::interp(T_, cp_, u) + num::interp(T_, cp_, v)) * (v - u);
        }
    }
    return sum;
}

std::string to_string(CapexScenario s) {
    switch (s) {
    case CapexScenario::full: return "full";
    case CapexScenario::no_sic: return "no_sic";
    case CapexScenario::no_materials: return "no_materials";
    }
    return "?";
}

CapexScenario capex_scenario_from_string(const std::string& s) {
    if (s == "full") return CapexScenario::full;
    if (s == "no_sic") return CapexScenario::no_sic;
    if (s == "no_materials") return CapexScenario::no_materials;
    throw ConfigError("unknown scenario '" + s + "' (known: full, no_sic, no_materials)");
}

void BatterySpec::validate() const {
    auto bad = [](const std::string& w) { throw DomainError("battery: " + w); };
    if (!(m_si_kg > 0)) bad("silicon mass must be positive");
    if (!(wall_m >= 0)) bad("wall thickness must be non-negative");
    if (!(aspect > 0)) bad("aspect ratio must be positive");
    if (!(rho_si > 0) || !(rho_sic > 0)) bad("densities must be positive");
    if (!(cost_si_per_m3 >= 0) || !(cost_sic_per_m3 >= 0)) bad("unit costs must be non-negative");
    if (!(L_heat_kJ_per_kg >= 0)) bad("latent heat must be non-negative");
    if (!(bop_factor >= 0)) bad("bop_factor must be non-negative");
    if (!(T_ini_C > -phys::zero_celsius)) bad("T_ini must be above absolute zero");
}

HeatCapacity BatterySpec::heat_capacity() const {
    double Tm = phys::to_kelvin(T_melt_C);
    if (cp_table.empty()) return HeatCapacity::from_csv_text(tables::si_cp(), liquid_cp, Tm);
    return HeatCapacity::from_csv_file(cp_table, liquid_cp, Tm);
}

double stored_energy_J(const BatterySpec& spec) {
    spec.validate();
    if (spec.T_h_C < spec.T_ini_C) throw DomainError("battery: T_h below T_ini");
    auto cp = spec.heat_capacity();
    double Q = spec.m_si_kg * cp.integrate(phys::to_kelvin(spec.T_ini_C), phys::to_kelvin(spec.T_h_C));
    // latent heat counts once, on the segment that reaches the melting point
    if (spec.T_ini_C < spec.T_melt_C && spec.T_h_C >= spec.T_melt_C) Q += spec.m_si_kg * spec.L_heat_kJ_per_kg * 1e3;
    return Q;
}

double stored_energy_kWh(const BatterySpec& spec) { return stored_energy_J(spec) / phys::J_per_kWh; }

VesselGeometry vessel_geometry(const BatterySpec& spec) {
    spec.validate();
    VesselGeometry g;
    g.V_si_m3 = spec.m_si_kg / spec.rho_si;
    g.r_i_m = std::cbrt(g.V_si_m3 / (phys::pi * spec.aspect));
    g.h_m = spec.aspect * g.r_i_m;
    g.r_o_m = g.r_i_m + spec.wall_m;
    g.V_sic_m3 = phys::pi * (g.r_o_m * g.r_o_m - g.r_i_m * g.r_i_m) * g.h_m;
    if (spec.end_caps) g.V_sic_m3 += 2 * phys::pi * g.r_o_m * g.r_o_m * spec.wall_m;
    g.A_emit_m2 = 2 * phys::pi * g.r_o_m * g.h_m;
    return g;
}

double battery_capex(const BatterySpec& spec, CapexScenario scenario) {
    auto g = vessel_geometry(spec);
    double si = g.V_si_m3 * spec.cost_si_per_m3;
    double sic = g.V_sic_m3 * spec.cost_sic_per_m3;
    switch (scenario) {
    case CapexScenario::full: return (si + sic) * (1 + spec.bop_factor);
    case CapexScenario::no_sic: return si * (1 + spec.bop_factor);
    case CapexScenario::no_materials: return 0.0;
    }
    return 0.0;
}

double cpe(const BatterySpec& spec, CapexScenario scenario) {
    double Q = stored_energy_kWh(spec);
    if (!(Q > 0)) throw DomainError("CPE undefined: no stored energy");
    return battery_capex(spec, scenario) / Q;
}

}
