#include "tpv/device.hpp"

#include "tpv/constants.hpp"
#include "tpv/errors.hpp"
#include "tpv/numeric.hpp"
#include "tpv/parallel.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace tpv {

std::string to_string(CellMaterial m) { return m == CellMaterial::Si ? "Si" : "InGaAs"; }
std::string to_string(InbandModel m) { return m == InbandModel::ideal ? "ideal" : "stack"; }
std::string to_string(OobModel m) { return m == OobModel::stack ? "stack" : "flat"; }

void CellDesign::validate() const {
    auto bad = [](const std::string& what) { throw DomainError("cell: " + what); };
    if (!(E_g_eV > 0)) bad("E_g must be positive");
    if (!(t_abs_um > 0)) bad("absorber thickness must be positive");
    if (!(N_doping >= 0)) bad("doping must be non-negative");
    if (!(R_s_mohm >= 0)) bad("R_s must be non-negative");
    if (!(R_sh_ohm > 0)) bad("R_sh must be positive");
    if (!(ideality > 0)) bad("ideality must be positive");
    if (!(IQE > 0 && IQE <= 1)) bad("IQE must lie in (0, 1]");
    if (!(airbridge_fill > 0 && airbridge_fill <= 1)) bad("airbridge_fill must lie in (0, 1]");
    if (!(oob_reflectance >= 0 && oob_reflectance <= 1)) bad("oob_reflectance must lie in [0, 1]");
    if (!(ref.V_oc > 0) || !(ref.J_sc > 0) || !(ref.T_K > 0)) bad("reference V_oc, J_sc and T must be positive");
    if (!(ref.FF > 0 && ref.FF < 1)) bad("reference FF must lie in (0, 1)");
    if (!(ref.R_s_mohm >= 0)) bad("reference R_s must be non-negative");
}

double CellDesign::lambda_g_um() const { return bandgap_wavelength(E_g_eV); }

AirBridgeSpec CellDesign::stack_spec() const {
    AirBridgeSpec s = stack;
    s.t_si_um = t_abs_um;
    s.fca.N = N_doping;
    return s;
}

CellDesign si_default() { return CellDesign{}; }

CellDesign ingaas_default() {
    CellDesign c;
    c.preset = "ingaas_default";
    c.material = CellMaterial::InGaAs;
    c.E_g_eV = 0.74;
    c.t_abs_um = 2.0;
    c.N_doping = 1e17;
    c.R_s_mohm = 7.0;
    c.ideality = 1.0;
    c.ref = {0.53, 1.0, 0.80, 7.0, 298.15};
    c.oob = OobModel::flat;
    c.oob_reflectance = 0.99;
    return c;
}

CellDesign cell_preset(const std::string& name) {
    if (name == "si_default") return si_default();
    if (name == "ingaas_default") return ingaas_default();
    throw ConfigError("unknown cell preset '" + name + "' (known: si_default, ingaas_default)");
}

std::vector<std::string> cell_preset_names() { return {"si_default", "ingaas_default"}; }

CellOptics cell_optics(const CellDesign& cell, const std::vector<double>& grid) {
    cell.validate();
    const double lg = cell.lambda_g_um();
    CellOptics out;
    std::vector<double> A(grid.size());
    if (cell.oob == OobModel::stack || cell.inband == InbandModel::stack) {
        out.stack = stack_response(make_airbridge_stack(cell.stack_spec()), grid);
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const bool inband = grid[i] <= lg;
        if (inband)
            A[i] = cell.inband == InbandModel::ideal ? 1.0 : out.stack->A.values()[i];
        else
            A[i] = cell.oob == OobModel::flat ? 1.0 - cell.oob_reflectance : out.stack->A.values()[i];
    }
    out.absorptance = Spectrum(grid, std::move(A));
    return out;
}

double thermal_voltage(double T_K) { return phys::k_B * T_K / phys::q; }

double calibrate_dark_current(const CellDesign& cell, double T_K) {
    if (!(T_K > 0)) throw DomainError("calibration temperature must be positive");
    if (!(cell.ref.V_oc > 0) || !(cell.ref.J_sc > 0))
        throw DomainError("dark-current calibration needs V_oc_ref and J_sc_ref");
    double x = cell.ref.V_oc / (cell.ideality * thermal_voltage(T_K));
    if (x > 700) return std::exp(std::log(cell.ref.J_sc) - x);
    return cell.ref.J_sc / std::expm1(x);
}

double dark_current_at(double J0_ref, double T_ref_K, double T_K, double E_g_eV) {
    double r = T_K / T_ref_K;
    return J0_ref * r * r * r * std::exp(-E_g_eV * phys::q / phys::k_B * (1.0 / T_K - 1.0 / T_ref_K));
}

double photocurrent(const CellDesign& cell, const BlackbodySource& src, const Spectrum& absorptance) {
    double phi = photon_flux_above_gap(src, absorptance, cell.lambda_g_um());  // m^-2 s^-1
    return phys::q * cell.airbridge_fill * cell.IQE * phi * 1e-4;
}

double photocurrent_reference(const CellDesign& cell) { return cell.ref.J_sc; }

double diode_residual(const Diode& d, double V, double J) {
    double vj = V + J * d.R_s;
    double shunt = std::isinf(d.R_sh) ? 0.0 : vj / d.R_sh;
    return d.J_ph - d.J_0 * std::expm1(vj / (d.n * thermal_voltage(d.T_K))) - shunt - J;
}

double current_at(const Diode& d, double V) {
    const double nvt = d.n * thermal_voltage(d.T_K);
    auto f = [&](double J) { return diode_residual(d, V, J); };
    auto df = [&](double J) {
        double g = d.J_0 / nvt * std::exp((V + J * d.R_s) / nvt);
        double s = std::isinf(d.R_sh) ? 0.0 : 1.0 / d.R_sh;
        return -(g + s) * d.R_s - 1.0;
    };
    double hi = d.J_ph, lo = d.J_ph - 1.0;
    double step = std::max(1.0, std::abs(d.J_ph));
    for (int k = 0; f(hi) > 0; ++k) {
        hi += step;
        step *= 2;
        if (k > 200) throw SolverError("current_at: cannot bracket from above");
    }
    step = std::max(1.0, std::abs(d.J_ph));
    for (int k = 0; f(lo) < 0; ++k) {
        lo -= step;
        step *= 2;
        if (k > 200) throw SolverError("current_at: cannot bracket from below");
    }
    return num::bracketed_root(f, df, lo, hi, 1e-12).x;
}

double open_circuit_voltage(const Diode& d) {
    if (d.J_ph <= 0) return 0.0;
    const double nvt = d.n * thermal_voltage(d.T_K);
    double v_ideal = nvt * std::log1p(d.J_ph / d.J_0);
    if (std::isinf(d.R_sh)) return v_ideal;
    auto g = [&](double V) { return diode_residual(d, V, 0.0); };
    auto dg = [&](double V) { return -d.J_0 / nvt * std::exp(V / nvt) - 1.0 / d.R_sh; };
    if (g(v_ideal) >= 0) return v_ideal;
    return num::bracketed_root(g, dg, 0.0, v_ideal, 1e-14).x;
}

double find_mpp_voltage(const Diode& d, double V_oc) {
    if (V_oc <= 0) return 0.0;
    return num::golden_max([&](double V) { return V * current_at(d, V); }, 0.0, V_oc, 1e-9);
}

IVCurve solve_iv(const Diode& d, std::size_t points) {
    if (!(d.J_ph >= 0)) throw DomainError("photocurrent must be non-negative");
    if (!(d.J_0 > 0)) throw DomainError("dark current must be positive");
    if (points < 2) throw DomainError("IV curve needs at least two points");
    IVCurve c;
    c.V_oc = open_circuit_voltage(d);
    c.J_sc = current_at(d, 0.0);
    if (c.V_oc <= 0 || c.J_sc <= 0) {
        c.points = {{0.0, c.J_sc}};
        return c;
    }
    c.V_mpp = find_mpp_voltage(d, c.V_oc);
    c.J_mpp = current_at(d, c.V_mpp);
    c.P_mpp = c.V_mpp * c.J_mpp;
    c.FF = c.P_mpp / (c.V_oc * c.J_sc);

    // quadratic spacing packs points toward the knee and V_oc
    std::vector<double> Vs;
    for (std::size_t k = 0; k < points; ++k) {
        double s = static_cast<double>(k) / static_cast<double>(points - 1);
        Vs.push_back(c.V_oc * (1.0 - (1.0 - s) * (1.0 - s)));
    }
    Vs.back() = c.V_oc;
    Vs.insert(std::upper_bound(Vs.begin(), Vs.end(), c.V_mpp), c.V_mpp);
    Vs.erase(std::unique(Vs.begin(), Vs.end()), Vs.end());
    for (double V : Vs) c.points.push_back({V, current_at(d, V)});
    return c;
}

IVCurve solve_iv(double J_ph, double J_0, const CellDesign& cell, double T_j_K, std::size_t points) {
    return solve_iv(Diode{J_ph, J_0, cell.R_s_ohm(), cell.R_sh_ohm, cell.ideality, T_j_K}, points);
}

IVCurve reference_iv(const CellDesign& cell) {
    double J0 = calibrate_dark_current(cell, cell.ref.T_K);
    Diode d{cell.ref.J_sc, J0, cell.ref.R_s_mohm * 1e-3, cell.R_sh_ohm, cell.ideality, cell.ref.T_K};
    return solve_iv(d);
}

double calibrate_ideality(const CellDesign& cell) {
    auto ff = [&](double n) {
        CellDesign c = cell;
        c.ideality = n;
        return reference_iv(c).FF - cell.ref.FF;
    };
    return num::bracketed_root(ff, {}, 0.5, 3.0, 1e-12).x;
}

IVResult operating_point(const CellDesign& cell, const BlackbodySource& src, const Spectrum& absorptance,
                         const ThermalEnv& env) {
    cell.validate();
    if (!(env.theta_cm2K_per_W >= 0)) throw DomainError("thermal boundary resistance must be non-negative");
    const double lg = cell.lambda_g_um();
    const double phi = photon_flux_above_gap(src, absorptance, lg);
    const double J_ph = phys::q * cell.airbridge_fill * cell.IQE * phi * 1e-4;
    const double P_abs = band_power(src, absorptance, absorptance.lambda_min(), absorptance.lambda_max()) * 1e-4;
    const double J0_ref = calibrate_dark_current(cell, cell.ref.T_K);
    const double T_hs = phys::to_kelvin(env.T_heatsink_C);

    auto diode_at = [&](double T) {
        return Diode{J_ph, dark_current_at(J0_ref, cell.ref.T_K, T, cell.E_g_eV), cell.R_s_ohm(), cell.R_sh_ohm,
                     cell.ideality, T};
    };
    auto p_out_at = [&](double T) {
        Diode d = diode_at(T);
        double voc = open_circuit_voltage(d);
        double vm = find_mpp_voltage(d, voc);
        return vm * current_at(d, vm);
    };

    double T_j = T_hs, prev = T_hs;
    int it = 0;
    const int max_iter = 200;
    for (;;) {
        ++it;
        double T_new = T_hs + env.theta_cm2K_per_W * (P_abs - p_out_at(T_j));
        if (!std::isfinite(T_new)) throw ThermalRunawayError("junction temperature became non-finite", T_j, T_new);
        bool done = std::abs(T_new - T_j) < 0.01;
        prev = T_j;
        T_j = T_new;
        if (done) break;
        if (it >= max_iter) {
            std::ostringstream os;
            os << "junction temperature did not settle after " << max_iter << " iterations (last iterates "
               << prev << " K, " << T_j << " K)";
            throw ThermalRunawayError(os.str(), prev, T_j);
        }
    }

    IVCurve c = solve_iv(diode_at(T_j));
    IVResult r;
    r.V_oc = c.V_oc;
    r.J_sc = c.J_sc;
    r.FF = c.FF;
    r.E_g_eV = cell.E_g_eV;
    r.V_F = c.V_oc / cell.E_g_eV;
    r.V_mpp = c.V_mpp;
    r.J_mpp = c.J_mpp;
    r.P_out = c.P_mpp;
    r.P_diss_static = P_abs - r.P_out;
    r.P_abs = r.P_out + r.P_diss_static;
    r.eta = r.P_abs > 0 ? r.P_out / r.P_abs : 0.0;
    r.T_j_C = phys::to_celsius(T_j);
    r.J_ph = J_ph;
    r.J_0 = dark_current_at(J0_ref, cell.ref.T_K, T_j, cell.E_g_eV);
    r.se_usable = r.P_abs > 0 ? cell.airbridge_fill * cell.E_g_eV * phys::q * phi * 1e-4 / r.P_abs : 0.0;
    r.iterations = it;
    r.curve = std::move(c.points);
    return r;
}

FomDecomposition fom_decomposition(const IVResult& r, double SE, double IQE) {
    FomDecomposition f;
    f.se_iqe = SE * IQE;
    f.vf_ff = r.V_F * r.FF;
    f.eta_product = f.se_iqe * f.vf_ff;
    f.residual = std::abs(f.eta_product - r.eta);
    return f;
}

std::vector<MapCell> power_density_map(const CellDesign& cell, const std::vector<double>& T_bb_C,
                                       const std::vector<double>& R_s_mohm, const ThermalEnv& env,
                                       const std::vector<double>& grid, unsigned threads) {
    if (T_bb_C.empty() || R_s_mohm.empty()) throw DomainError("power_density_map: empty range");
    const CellOptics optics = cell_optics(cell, grid);
    std::vector<MapCell> out(T_bb_C.size() * R_s_mohm.size());
    parallel_for(out.size(), threads, [&](std::size_t idx) {
        MapCell& m = out[idx];
        m.T_bb_C = T_bb_C[idx / R_s_mohm.size()];
        m.R_s_mohm = R_s_mohm[idx % R_s_mohm.size()];
        try {
            CellDesign c = cell;
            c.R_s_mohm = m.R_s_mohm;
            m.result = operating_point(c, BlackbodySource::from_celsius(m.T_bb_C), optics.absorptance, env);
        } catch (const std::exception& e) {
            m.error = e.what();
        }
    });
    return out;
}

void write_iv_csv(const std::string& path, const IVCurve& c, const std::string& comment_block) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path);
    out << comment_block;
    out << "V,J_A_per_cm2,P_W_per_cm2\n";
    char buf[64];
    auto put = [&](double v) {
        auto r = std::to_chars(buf, buf + sizeof buf, v);
        out.write(buf, r.ptr - buf);
    };
    for (const auto& p : c.points) {
        put(p.V);
        out << ',';
        put(p.J);
        out << ',';
        put(p.V * p.J);
        out << '\n';
    }
}

}
