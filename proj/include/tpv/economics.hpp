#pragma once

#include "tpv/device.hpp"
#include "tpv/storage.hpp"

#include <string>

namespace tpv {

enum class CrfForm { paper, annuity };

std::string to_string(CrfForm f);
CrfForm crf_form_from_string(const std::string& s);

struct EconParams {
    double t_c_h = 10.0;
    double t_d_h = 10.0;
    double t_d_ref_h = 10.0;
    double N_cy = 730.0;             // cycles per year
    double lifetime_y = 25.0;
    double d_r = 0.05;               // cell degradation per year
    double eta_ch = 0.90;
    double k_loss = 0.10;            // heat loss per cycle
    double heat_loss = 0.10;         // LCOE heat-loss fraction
    double r = 0.05;                 // discount rate
    CrfForm crf_form = CrfForm::paper;
    double cost_heatsink_per_kW = 50.0;
    double cost_fab_per_cm2 = -1.0; // negative: use the cell material default
    double opex_per_kW_y = 12.5;
    double pv_cost_per_m2 = 150.0;
    double pv_W_per_m2 = 200.0;
    double csp_cost_per_m2 = 200.0;
    double csp_W_per_m2 = 600.0;
    double charging_capacity_factor = 0.2;
    double split_pv = 0.5;           // CSP gets the rest
    double cpp_in_per_W = 0.0;       // charging-side power electronics

    void validate() const;
    double fab_cost(CellMaterial m) const;
};

double default_fab_cost(CellMaterial m);  // $/cm^2

struct SystemDesign {
    IVResult cell;
    CellMaterial material = CellMaterial::Si;
    double R_s_mohm = 0;
    BatterySpec battery;
    CapexScenario scenario = CapexScenario::full;
};

struct EffectiveDissipation {
    double f_loss;
    double P_diss_dynamic;  // W/cm^2
    double P_diss_eff;
    double P_out_eff;
};

EffectiveDissipation effective_dissipation(const IVResult& iv, double R_s_mohm, double t_d_h, double t_d_ref_h);

struct CppBreakdown {
    double cpp_per_W;
    double area_cm2;
    double P_out_eff_W;      // system electrical output
    double P_diss_eff_W;
    double fab_cost;
    double heatsink_cost;
    EffectiveDissipation diss;
};

CppBreakdown cpp(const SystemDesign& sys, const EconParams& p);

double crf(double r, double n, CrfForm form = CrfForm::paper);

struct RoundTrip {
    double eta_in, eta_out, eta_rt;
};

RoundTrip round_trip(double eta_ch, double eta_cell, double k_loss, double t_c_h, double t_d_h);

struct ChargingSource {
    double cpp_plus_per_W_y;  // annualized, per W of charging input
    double area_m2;
    double capex;
    double lcos_term;         // $/kWh
};

struct ChargingCost {
    ChargingSource pv, csp;
    double P_in_W;            // average charging input
};

// eta_in sizes the charge; eta_rt scales the LCOS terms.
ChargingCost charging_cpp(double Q_h_kWh, const EconParams& p, double eta_in, double eta_rt);

struct LcosBreakdown {
    double lcos;
    double pv, csp, in, out, storage;  // $/kWh terms
    RoundTrip rt;
    double eta_cell;
    double crf;
    double cpe;
    double Q_h_kWh;
    CppBreakdown power;
};

LcosBreakdown lcos(const SystemDesign& sys, const EconParams& p);

struct LcoeBreakdown {
    double lcoe;
    double capex_battery, capex_tpv, capex_charging, capex_total;
    double opex_total;
    double energy_kWh;
    double eta_out;
};

LcoeBreakdown lcoe(const SystemDesign& sys, const EconParams& p, double heat_loss, double lifetime_y);

}
