#include "tpv/presets.hpp"

#include "tpv/errors.hpp"

namespace tpv::cli {

namespace {

json range(const std::string& param, double lo, double hi, int steps, const std::string& scale = "linear") {
    return {{"param", param}, {"min", lo}, {"max", hi}, {"steps", steps}, {"scale", scale}};
}

json values(const std::string& param, json v) { return {{"param", param}, {"values", std::move(v)}}; }

std::vector<Preset> build() {
    std::vector<Preset> p;

    p.push_back({"fig1d", "out-of-band reflectance and SE of the air-bridge stack vs t_Si and T_BB",
                 {{"scenario", "fig1d"},
                  {"pipeline", "optics"},
                  {"sweep",
                   {{"axes", {values("cell.t_abs_um", {10, 50, 200, 500}), range("source.T_bb_C", 1000, 1800, 17)}}}},
                  {"output", {{"plot", {{"value", "r_oob"}}}}}}});

    p.push_back({"fig2a", "reference and 1300 C J-V curves of the Si cell",
                 {{"scenario", "fig2a"},
                  {"pipeline", "device"},
                  {"source", {{"T_bb_C", 1300}}},
                  {"sweep", {{"axes", {values("cell.R_s_mohm_cm2", {80.6, 80, 30, 10})}}}},
                  {"output", {{"curves", true}, {"plot", {{"value", "P_out_W_cm2"}}}}}}});

    p.push_back({"fig2c", "Si cell efficiency vs R_s and T_BB",
                 {{"scenario", "fig2c"},
                  {"pipeline", "device"},
                  {"sweep",
                   {{"axes", {range("cell.R_s_mohm_cm2", 5, 100, 20), range("source.T_bb_C", 1000, 2000, 21)}}}},
                  {"output", {{"plot", {{"value", "eta"}}}}}}});

    p.push_back({"fig3b", "Si cell output power density vs R_s and T_BB",
                 {{"scenario", "fig3b"},
                  {"pipeline", "device"},
                  {"sweep",
                   {{"axes", {range("cell.R_s_mohm_cm2", 5, 100, 20), range("source.T_bb_C", 1000, 1800, 17)}}}},
                  {"output", {{"plot", {{"value", "P_out_W_cm2"}}}}}}});

    p.push_back({"fig4b", "thermal battery CPE vs silicon mass and charged temperature",
                 {{"scenario", "fig4b"},
                  {"pipeline", "storage"},
                  {"sweep",
                   {{"axes",
                     {range("battery.m_si_kg", 1e3, 1e5, 21, "log"), range("source.T_bb_C", 1000, 1800, 9)}}}},
                  {"output", {{"plot", {{"value", "cpe_usd_per_kwh"}}}}}}});

    p.push_back({"fig5", "InGaAs system LCOS by battery cost scenario and heat loss",
                 {{"scenario", "fig5"},
                  {"pipeline", "system"},
                  {"cell", {{"preset", "ingaas_default"}}},
                  {"source", {{"T_bb_C", 1800}}},
                  {"battery", {{"m_si_kg", 1e5}}},
                  {"sweep",
                   {{"axes",
                     {values("battery.scenario", {"full", "no_sic", "no_materials"}),
                      range("econ.k_loss", 0, 0.5, 11)}}}},
                  {"output", {{"plot", {{"value", "lcos_usd_per_kwh"}}}}}}});

    json variants = json::array();
    variants.push_back({{"label", "Si_Rs80"}, {"cell.preset", "si_default"}, {"cell.R_s_mohm_cm2", 80}});
    variants.push_back({{"label", "Si_Rs30"}, {"cell.preset", "si_default"}, {"cell.R_s_mohm_cm2", 30}});
    variants.push_back({{"label", "InGaAs_Rs7"}, {"cell.preset", "ingaas_default"}});
    p.push_back({"fig6d", "LCOE vs silicon mass for InGaAs and Si cells",
                 {{"scenario", "fig6d"},
                  {"pipeline", "system"},
                  {"source", {{"T_bb_C", 1800}}},
                  {"sweep",
                   {{"axes", {{{"param", "variant"}, {"values", variants}},
                              range("battery.m_si_kg", 1e5, 1e7, 9, "log")}}}},
                  {"output", {{"plot", {{"value", "lcoe_usd_per_kwh"}}}}}}});
    return p;
}

}

const std::vector<Preset>& presets() {
    static const std::vector<Preset> p = build();
    return p;
}

const Preset& find_preset(const std::string& name) {
    for (const auto& p : presets())
        if (p.name == name) return p;
    std::string known;
    for (const auto& p : presets()) known += (known.empty() ? "" : ", ") + p.name;
    throw ConfigError("unknown preset '" + name + "' (available: " + known + ")");
}

}
