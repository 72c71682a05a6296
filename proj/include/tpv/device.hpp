#pragma once

#include "tpv/optics.hpp"
#include "tpv/radiometry.hpp"
#include "tpv/spectrum.hpp"

#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace tpv {

enum class CellMaterial { Si, InGaAs };
enum class InbandModel { ideal, stack };
enum class OobModel { stack, flat };

std::string to_string(CellMaterial m);
std::string to_string(InbandModel m);
std::string to_string(OobModel m);

// Conventional-cell measurement the dark current is calibrated against.
struct ReferenceCalibration {
    double V_oc = 0.67;       // V
    double J_sc = 0.036;      // A/cm^2
    double FF = 0.821;
    double R_s_mohm = 80.6;   // mOhm cm^2
    double T_K = 298.15;
};

struct CellDesign {
    std::string preset = "si_default";
    CellMaterial material = CellMaterial::Si;
    double E_g_eV = 1.12;
    double t_abs_um = 50.0;
    double N_doping = 1e16;                                   // cm^-3
    double R_s_mohm = 80.0;                                   // mOhm cm^2
    double R_sh_ohm = std::numeric_limits<double>::infinity();  // Ohm cm^2
    double ideality = 1.15;
    double IQE = 0.98;
    double airbridge_fill = 0.875;
    ReferenceCalibration ref;
    InbandModel inband = InbandModel::ideal;
    OobModel oob = OobModel::stack;
    double oob_reflectance = 0.99;  // used when oob == flat
    AirBridgeSpec stack;            // t_si_um and fca.N follow t_abs_um and N_doping

    void validate() const;
    double lambda_g_um() const;
    double R_s_ohm() const { return R_s_mohm * 1e-3; }
    AirBridgeSpec stack_spec() const;
};

CellDesign si_default();
CellDesign ingaas_default();
CellDesign cell_preset(const std::string& name);
std::vector<std::string> cell_preset_names();

struct ThermalEnv {
    double T_heatsink_C = 25.0;
    double theta_cm2K_per_W = 1.5;
};

// Effective absorptance seen by the cell plus the bare stack response (Si).
struct CellOptics {
    Spectrum absorptance;
    std::optional<StackResponse> stack;
};

CellOptics cell_optics(const CellDesign& cell, const std::vector<double>& grid);

double thermal_voltage(double T_K);

// J_0 reproducing V_oc_ref at J_ph = J_sc_ref for the cell's ideality at T.
double calibrate_dark_current(const CellDesign& cell, double T_K);
// Diffusion-current scaling from T_ref to T.
double dark_current_at(double J0_ref, double T_ref_K, double T_K, double E_g_eV);
// Ideality that reproduces FF_ref at reference conditions with R_s_ref.
double calibrate_ideality(const CellDesign& cell);

// A/cm^2
double photocurrent(const CellDesign& cell, const BlackbodySource& src, const Spectrum& absorptance);
double photocurrent_reference(const CellDesign& cell);

struct Diode {
    double J_ph;   // A/cm^2
    double J_0;    // A/cm^2
    double R_s;    // Ohm cm^2
    double R_sh;   // Ohm cm^2
    double n;
    double T_K;
};

double diode_residual(const Diode& d, double V, double J);
double current_at(const Diode& d, double V);
double open_circuit_voltage(const Diode& d);

struct IVPoint {
    double V, J;
};

struct IVCurve {
    std::vector<IVPoint> points;
    double V_oc = 0, J_sc = 0, FF = 0;
    double V_mpp = 0, J_mpp = 0, P_mpp = 0;
};

double find_mpp_voltage(const Diode& d, double V_oc);
IVCurve solve_iv(double J_ph, double J_0, const CellDesign& cell, double T_j_K, std::size_t points = 101);
IVCurve solve_iv(const Diode& d, std::size_t points = 101);
IVCurve reference_iv(const CellDesign& cell);

struct IVResult {
    double V_oc = 0, J_sc = 0, FF = 0, V_F = 0;
    double P_out = 0, P_abs = 0, P_diss_static = 0;  // W/cm^2
    double eta = 0;
    double T_j_C = 0;
    double J_mpp = 0, V_mpp = 0;
    double J_ph = 0, J_0 = 0;
    double E_g_eV = 0;
    double se_usable = 0;  // fill * E_g * q * Phi_in / P_abs
    int iterations = 0;
    std::vector<IVPoint> curve;
};

IVResult operating_point(const CellDesign& cell, const BlackbodySource& src, const Spectrum& absorptance,
                         const ThermalEnv& env);

struct FomDecomposition {
    double se_iqe;
    double vf_ff;
    double eta_product;
    double residual;
};

FomDecomposition fom_decomposition(const IVResult& r, double SE, double IQE);

struct MapCell {
    double T_bb_C;
    double R_s_mohm;
    std::optional<IVResult> result;
    std::string error;
};

// Row-major over T_BB, then R_s.
std::vector<MapCell> power_density_map(const CellDesign& cell, const std::vector<double>& T_bb_C,
                                       const std::vector<double>& R_s_mohm, const ThermalEnv& env,
                                       const std::vector<double>& grid, unsigned threads = 1);

// comment_block lines must already carry their '#' prefix
void write_iv_csv(const std::string& path, const IVCurve& c, const std::string& comment_block = {});

}
