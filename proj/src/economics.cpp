#include "tpv/economics.hpp"

#include "tpv/errors.hpp"

#include <cmath>

namespace tpv {

std::string to_string(CrfForm f) { return f == CrfForm::paper ? "paper" : "annuity"; }

CrfForm crf_form_from_string(const std::string& s) {
    if (s == "paper") return CrfForm::paper;
    if (s == "annuity") return CrfForm::annuity;
    throw ConfigError("unknown crf form '" + s + "' (known: paper, annuity)");
}

double default_fab_cost(CellMaterial m) { return m == CellMaterial::Si ? 1.0 : 10.0; }

double EconParams::fab_cost(CellMaterial m) const {
    return cost_fab_per_cm2 >= 0 ? cost_fab_per_cm2 : default_fab_cost(m);
}

void EconParams::validate() const {
    auto bad = [](const std::string& w) { throw DomainError("econ: " + w); };
    if (!(t_c_h > 0) || !(t_d_h > 0) || !(t_d_ref_h > 0)) bad("times must be positive");
    if (!(N_cy > 0)) bad("N_cy must be positive");
    if (!(lifetime_y >= 1)) bad("lifetime must be at least one year");
    for (double f : {d_r, eta_ch, k_loss, heat_loss, split_pv})
        if (!(f >= 0 && f <= 1)) bad("fractions must lie in [0, 1]");
    if (!(r > 0 && r < 1)) bad("discount rate must lie in (0, 1)");
    if (!(charging_capacity_factor > 0 && charging_capacity_factor <= 1))
        bad("charging capacity factor must lie in (0, 1]");
    if (!(pv_W_per_m2 > 0) || !(csp_W_per_m2 > 0)) throw ConfigError("charging power densities must be positive");
}

EffectiveDissipation effective_dissipation(const IVResult& iv, double R_s_mohm, double t_d_h, double t_d_ref_h) {
    if (!(t_d_h > 0)) throw DomainError("discharge time must be positive");
    EffectiveDissipation e;
    double P_abs = iv.P_out + iv.P_diss_static;
    e.f_loss = P_abs > 0 ? iv.J_mpp * iv.J_mpp * R_s_mohm * 1e-3 / P_abs : 0.0;
    double s = t_d_ref_h / t_d_h;
    e.P_diss_dynamic = iv.P_out * e.f_loss * s * s;
    e.P_diss_eff = iv.P_diss_static + e.P_diss_dynamic;
    e.P_out_eff = iv.P_out - e.P_diss_dynamic;
    if (!(e.P_out_eff > 0))
        throw InfeasibleError("discharge too fast for this R_s: effective output power is not positive");
    return e;
}

CppBreakdown cpp(const SystemDesign& sys, const EconParams& p) {
    p.validate();
    CppBreakdown b;
    b.diss = effective_dissipation(sys.cell, sys.R_s_mohm, p.t_d_h, p.t_d_ref_h);
    b.area_cm2 = vessel_geometry(sys.battery).A_emit_m2 * 1e4;
    b.P_out_eff_W = b.diss.P_out_eff * b.area_cm2;
    b.P_diss_eff_W = b.diss.P_diss_eff * b.area_cm2;
    if (!(b.P_out_eff_W > 0)) throw InfeasibleError("CPP undefined: zero effective power");
    b.fab_cost = p.fab_cost(sys.material) * b.area_cm2;
    b.heatsink_cost = p.cost_heatsink_per_kW * b.P_diss_eff_W * 1e-3;
    b.cpp_per_W = (b.fab_cost + b.heatsink_cost) / b.P_out_eff_W;
    return b;
}

double crf(double r, double n, CrfForm form) {
    if (!(r > 0 && r < 1) || !(n >= 1)) throw DomainError("crf: need 0 < r < 1 and n >= 1");
    if (form == CrfForm::paper) return r / (1.0 - std::pow(1.0 - r, n));
    return r / (1.0 - std::pow(1.0 + r, -n));
}

RoundTrip round_trip(double eta_ch, double eta_cell, double k_loss, double t_c_h, double t_d_h) {
    double tt = t_c_h + t_d_h;
    if (!(tt > 0)) throw DomainError("round_trip: t_c + t_d must be positive");
    RoundTrip rt;
    rt.eta_in = eta_ch / (1.0 + k_loss * t_c_h / tt);
    rt.eta_out = eta_cell * (1.0 - k_loss * t_d_h / tt);
    rt.eta_rt = rt.eta_in * rt.eta_out;
    return rt;
}

ChargingCost charging_cpp(double Q_h_kWh, const EconParams& p, double eta_in, double eta_rt) {
    if (!(Q_h_kWh > 0)) throw DomainError("charging cost needs positive stored energy");
    if (!(p.pv_W_per_m2 > 0) || !(p.csp_W_per_m2 > 0)) throw ConfigError("charging power densities must be positive");
    if (!(eta_in > 0) || !(eta_rt > 0)) throw DomainError("charging cost needs positive efficiencies");
    const double k = crf(p.r, p.lifetime_y, p.crf_form);
    ChargingCost c;
    c.P_in_W = Q_h_kWh * 1e3 / (eta_in * p.t_c_h);
    auto source = [&](double share, double unit_cost, double W_per_m2) {
        ChargingSource s;
        double W_eff = W_per_m2 * p.charging_capacity_factor;
        s.area_m2 = share * c.P_in_W / W_eff;
        s.capex = s.area_m2 * unit_cost;
        s.cpp_plus_per_W_y = k * share * unit_cost / W_eff;
        s.lcos_term = s.cpp_plus_per_W_y / (eta_rt * p.t_c_h) / p.N_cy * 1e3;
        return s;
    };
    c.pv = source(p.split_pv, p.pv_cost_per_m2, p.pv_W_per_m2);
    c.csp = source(1.0 - p.split_pv, p.csp_cost_per_m2, p.csp_W_per_m2);
    return c;
}

LcosBreakdown lcos(const SystemDesign& sys, const EconParams& p) {
    p.validate();
    LcosBreakdown b;
    b.power = cpp(sys, p);
    b.Q_h_kWh = stored_energy_kWh(sys.battery);
    b.eta_cell = b.power.diss.P_out_eff / (sys.cell.P_out + sys.cell.P_diss_static);
    b.rt = round_trip(p.eta_ch, b.eta_cell, p.k_loss, p.t_c_h, p.t_d_h);
    if (!(b.rt.eta_rt > 0)) throw DomainError("LCOS undefined: zero round-trip efficiency");
    b.crf = crf(p.r, p.lifetime_y, p.crf_form);
    b.cpe = battery_capex(sys.battery, sys.scenario) / b.Q_h_kWh;
    auto ch = charging_cpp(b.Q_h_kWh, p, b.rt.eta_in, b.rt.eta_rt);
    b.pv = ch.pv.lcos_term;
    b.csp = ch.csp.lcos_term;
    // $/W-yr over hours gives $/Wh-yr; per cycle and per kWh
    b.in = b.crf * p.cpp_in_per_W / (b.rt.eta_rt * p.t_c_h) / p.N_cy * 1e3;
    b.out = b.crf * b.power.cpp_per_W / p.t_d_h / p.N_cy * 1e3;
    b.storage = b.crf * b.cpe / b.rt.eta_out / p.N_cy;
    b.lcos = b.pv + b.csp + b.in + b.out + b.storage;
    return b;
}

LcoeBreakdown lcoe(const SystemDesign& sys, const EconParams& p, double heat_loss, double lifetime_y) {
    p.validate();
    if (!(lifetime_y >= 1)) throw DomainError("LCOE lifetime must be at least one year");
    if (!(heat_loss >= 0 && heat_loss < 1)) throw DomainError("heat loss must lie in [0, 1)");
    LcoeBreakdown b;
    auto power = cpp(sys, p);
    double Q = stored_energy_kWh(sys.battery);
    b.eta_out = power.diss.P_out_eff / (sys.cell.P_out + sys.cell.P_diss_static);
    auto rt = round_trip(p.eta_ch, b.eta_out, p.k_loss, p.t_c_h, p.t_d_h);
    auto ch = charging_cpp(Q, p, rt.eta_in, rt.eta_rt);
    b.capex_battery = battery_capex(sys.battery, sys.scenario);
    b.capex_tpv = power.cpp_per_W * power.P_out_eff_W;
    b.capex_charging = ch.pv.capex + ch.csp.capex;
    b.capex_total = b.capex_battery + b.capex_tpv + b.capex_charging;
    const int years = static_cast<int>(std::floor(lifetime_y));
    b.opex_total = 0;
    b.energy_kWh = 0;
    for (int y = 1; y <= years; ++y) {
        b.opex_total += p.opex_per_kW_y * power.P_out_eff_W * 1e-3;
        b.energy_kWh += p.N_cy * Q * b.eta_out * (1.0 - heat_loss) * std::pow(1.0 - p.d_r, y - 1);
    }
    if (!(b.energy_kWh > 0)) throw InfeasibleError("LCOE undefined: no delivered energy");
    b.lcoe = (b.capex_total + b.opex_total) / b.energy_kWh;
    return b;
}

}
