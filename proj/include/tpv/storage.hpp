#pragma once

#include <memory>
#include <string>
#include <vector>

namespace tpv {

// Solid-phase c_p from a table (T in K), constant above the melting point.
class HeatCapacity {
public:
    HeatCapacity(std::vector<double> T_K, std::vector<double> cp, double liquid_cp, double T_melt_K);
    static HeatCapacity silicon_default();
    static HeatCapacity from_csv_text(const std::string& text, double liquid_cp, double T_melt_K);
    static HeatCapacity from_csv_file(const std::string& path, double liquid_cp, double T_melt_K);

    double at(double T_K) const;  // J/(kg K)
    // Exact integral of the interpolant from a to b (K), split at T_melt and table nodes.
    double integrate(double a_K, double b_K) const;

private:
    std::vector<double> T_, cp_;
    double liquid_cp_;
    double T_melt_K_;
};

enum class CapexScenario { full, no_sic, no_materials };

std::string to_string(CapexScenario s);
CapexScenario capex_scenario_from_string(const std::string& s);

struct BatterySpec {
    double m_si_kg = 1e5;
    double T_ini_C = 25.0;
    double T_h_C = 1800.0;
    double wall_m = 0.1;             // r_o - r_i
    double aspect = 2.0;             // h / r_i
    double cost_si_per_m3 = 20000.0;
    double cost_sic_per_m3 = 35000.0;
    double rho_si = 2263.0;          // kg/m^3
    double rho_sic = 3210.0;
    double L_heat_kJ_per_kg = 2000.0;
    double T_melt_C = 1410.0;
    double liquid_cp = 1040.0;       // J/(kg K)
    double bop_factor = 0.20;
    bool end_caps = true;
    std::string cp_table;            // optional CSV path; empty = built-in

    void validate() const;
    HeatCapacity heat_capacity() const;
};

double stored_energy_J(const BatterySpec& spec);
double stored_energy_kWh(const BatterySpec& spec);

struct VesselGeometry {
    double V_si_m3;
    double V_sic_m3;
    double A_emit_m2;
    double r_i_m;
    double r_o_m;
    double h_m;
};

VesselGeometry vessel_geometry(const BatterySpec& spec);

double battery_capex(const BatterySpec& spec, CapexScenario scenario);
double cpe(const BatterySpec& spec, CapexScenario scenario);  // $/kWh

}
