#include "tpv/pipeline.hpp"

#include "tpv/errors.hpp"
#include "tpv/numeric.hpp"
#include "tpv/parallel.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <sstream>

namespace tpv::cli {

std::vector<Axis> parse_axes(const json& merged) {
    std::vector<Axis> axes;
    json list = get_path(merged, "sweep.axes");
    if (list.is_null()) return axes;
    if (!list.is_array()) throw ConfigError("sweep.axes: expected an array");
    for (const auto& a : list) {
        Axis ax;
        ax.param = a.at("param").get<std::string>();
        if (ax.param != "variant" && !find_param(ax.param))
            throw ConfigError("sweep axis references unknown parameter '" + ax.param + "'");
        if (a.contains("values")) {
            for (const auto& v : a["values"]) {
                ax.values.push_back(v);
                if (v.is_object() && v.contains("label"))
                    ax.labels.push_back(v["label"].get<std::string>());
                else if (v.is_object())
                    ax.labels.push_back("variant" + std::to_string(ax.labels.size()));
                else if (v.is_string())
                    ax.labels.push_back(v.get<std::string>());
                else
                    ax.labels.push_back(format_number(v.get<double>()));
            }
        } else {
            double lo = a.at("min").get<double>(), hi = a.at("max").get<double>();
            auto n = static_cast<std::size_t>(a.at("steps").get<double>());
            std::string scale = a.value("scale", "linear");
            auto pts = scale == "log" ? num::logspace(lo, hi, n) : num::linspace(lo, hi, n);
            for (double v : pts) {
                ax.values.push_back(v);
                ax.labels.push_back(format_number(v));
            }
        }
        if (ax.values.empty()) throw ConfigError("sweep axis '" + ax.param + "' has no values");
        axes.push_back(std::move(ax));
    }
    return axes;
}

namespace {

const std::vector<std::string> context_cols{"cell", "T_bb_C", "t_abs_um", "R_s_mohm_cm2", "m_si_kg", "T_h_C",
                                            "scenario"};
const std::vector<std::string> optics_cols{"lambda_g_um", "r_oob", "r_ftir", "se"};
const std::vector<std::string> device_cols{
    "J_ph_A_cm2", "J_0_A_cm2",  "V_oc_V",    "J_sc_A_cm2",  "FF",     "V_F",         "V_mpp_V",
    "J_mpp_A_cm2", "P_out_W_cm2", "P_abs_W_cm2", "P_diss_static_W_cm2", "eta", "T_j_C", "se_usable",
    "se_iqe",     "vf_ff",      "eta_product", "fom_residual"};
const std::vector<std::string> storage_cols{"Q_h_kWh", "capex_usd", "cpe_usd_per_kwh", "V_si_m3", "V_sic_m3",
                                            "A_emit_m2"};
const std::vector<std::string> system_cols{
    "f_loss",         "P_diss_dynamic_W_cm2", "P_out_eff_W_cm2", "P_diss_eff_W_cm2", "system_power_W",
    "cpp_usd_per_W",  "crf",                  "eta_cell",        "eta_in",           "eta_out",
    "eta_rt",         "lcos_pv",              "lcos_csp",        "lcos_in",          "lcos_out",
    "lcos_storage",   "lcos_usd_per_kwh",     "capex_tpv_usd",   "capex_charging_usd", "capex_total_usd",
    "opex_total_usd", "energy_kWh",           "lcoe_usd_per_kwh"};

void append(std::vector<std::string>& a, const std::vector<std::string>& b) { a.insert(a.end(), b.begin(), b.end()); }

std::string optics_key(const Resolved& r) {
    const CellDesign& c = r.cell;
    std::ostringstream os;
    os.precision(17);
    os << to_string(c.material) << '|' << c.E_g_eV << '|' << c.t_abs_um << '|' << c.N_doping << '|'
       << to_string(c.inband) << '|' << to_string(c.oob) << '|' << c.oob_reflectance << '|' << c.stack.gap_um << '|'
       << c.stack.au_um << '|' << c.stack.fca.C << '|' << c.stack.fca.gamma << '|' << r.si_table << '|'
       << r.au_table << '|' << r.grid.lambda_min_um << '|' << r.grid.lambda_max_um << '|' << r.grid.points;
    return os.str();
}

}

std::vector<std::string> columns_for(Pipeline p) {
    std::vector<std::string> cols = context_cols;
    switch (p) {
    case Pipeline::optics: append(cols, optics_cols); break;
    case Pipeline::device:
        append(cols, optics_cols);
        append(cols, device_cols);
        break;
    case Pipeline::storage: append(cols, storage_cols); break;
    case Pipeline::system:
        append(cols, optics_cols);
        append(cols, device_cols);
        append(cols, storage_cols);
        append(cols, system_cols);
        break;
    }
    return cols;
}

std::shared_ptr<const CellOptics> OpticsCache::get(const Resolved& r, const std::vector<double>& grid) {
    std::string key = optics_key(r);
    std::promise<std::shared_ptr<const CellOptics>> promise;
    std::shared_future<std::shared_ptr<const CellOptics>> fut;
    bool owner = false;
    {
        std::lock_guard lk(mu_);
        auto it = entries_.find(key);
        if (it == entries_.end()) {
            fut = promise.get_future().share();
            entries_.emplace(key, fut);
            owner = true;
        } else {
            fut = it->second;
        }
    }
    if (owner) {
        try {
            promise.set_value(std::make_shared<const CellOptics>(cell_optics(r.cell, grid)));
        } catch (...) {
            promise.set_exception(std::current_exception());
        }
    }
    return fut.get();
}

PointResult evaluate_point(const Resolved& r, OpticsCache& cache) {
    PointResult out;
    const auto cols = columns_for(r.pipeline);
    out.values.assign(cols.size(), nullptr);
    std::size_t k = 0;
    auto put = [&](json v) { out.values[k++] = std::move(v); };
    auto putn = [&](double v) { out.values[k++] = std::isfinite(v) ? json(v) : json(nullptr); };

    put(r.cell.preset);
    putn(r.T_bb_C);
    putn(r.cell.t_abs_um);
    putn(r.cell.R_s_mohm);
    putn(r.battery.m_si_kg);
    putn(r.battery.T_h_C);
    put(to_string(r.capex_scenario));

    try {
        const bool optics = r.pipeline != Pipeline::storage;
        const bool device = r.pipeline == Pipeline::device || r.pipeline == Pipeline::system;
        const bool storage = r.pipeline == Pipeline::storage || r.pipeline == Pipeline::system;
        const bool system = r.pipeline == Pipeline::system;
        const auto src = r.source();
        std::optional<IVResult> iv;

        if (optics) {
            const auto grid = make_grid(r.grid);
            auto co = cache.get(r, grid);
            const double lg = r.cell.lambda_g_um();
            Spectrum R, A;
            if (co->stack) {
                R = co->stack->R;
                A = co->stack->A;
            } else {
                std::vector<double> rv(grid.size());
                for (std::size_t i = 0; i < grid.size(); ++i) rv[i] = 1.0 - co->absorptance.values()[i];
                R = Spectrum(grid, std::move(rv));
                A = co->absorptance;
            }
            putn(lg);
            putn(r_oob(R, src, lg));
            bool ftir_on_grid = R.lambda_min() <= 1.3 && R.lambda_max() >= 15.4;
            putn(ftir_on_grid ? band_mean_reflectance(R) : std::nan(""));
            putn(spectral_efficiency(A, src, lg));

            if (device) {
                iv = operating_point(r.cell, src, co->absorptance, r.thermal);
                auto f = fom_decomposition(*iv, iv->se_usable, r.cell.IQE);
                for (double v : {iv->J_ph, iv->J_0, iv->V_oc, iv->J_sc, iv->FF, iv->V_F, iv->V_mpp, iv->J_mpp,
                                 iv->P_out, iv->P_abs, iv->P_diss_static, iv->eta, iv->T_j_C, iv->se_usable,
                                 f.se_iqe, f.vf_ff, f.eta_product, f.residual})
                    putn(v);
                if (r.curves) out.curve = iv->curve;
            }
        }
        if (storage) {
            double Q = stored_energy_kWh(r.battery);
            auto g = vessel_geometry(r.battery);
            double capex = battery_capex(r.battery, r.capex_scenario);
            putn(Q);
            putn(capex);
            putn(Q > 0 ? capex / Q : std::nan(""));
            putn(g.V_si_m3);
            putn(g.V_sic_m3);
            putn(g.A_emit_m2);
        }
        if (system) {
            SystemDesign sys{*iv, r.cell.material, r.cell.R_s_mohm, r.battery, r.capex_scenario};
            auto l = lcos(sys, r.econ);
            auto e = lcoe(sys, r.econ, r.econ.heat_loss, r.econ.lifetime_y);
            const auto& d = l.power.diss;
            for (double v : {d.f_loss, d.P_diss_dynamic, d.P_out_eff, d.P_diss_eff, l.power.P_out_eff_W,
                             l.power.cpp_per_W, l.crf, l.eta_cell, l.rt.eta_in, l.rt.eta_out, l.rt.eta_rt, l.pv,
                             l.csp, l.in, l.out, l.storage, l.lcos, e.capex_tpv, e.capex_charging, e.capex_total,
                             e.opex_total, e.energy_kWh, e.lcoe})
                putn(v);
        }
    } catch (const std::exception& e) {
        out.error = e.what();
    }
    return out;
}

std::size_t SweepTable::failures() const {
    std::size_t n = 0;
    for (const auto& r : rows) n += r.error.empty() ? 0 : 1;
    return n;
}

int SweepTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == name) return static_cast<int>(i);
    return -1;
}

SweepTable run_sweep(const json& merged, unsigned threads) {
    SweepTable t;
    Resolved base = resolve(merged);
    t.name = base.scenario;
    t.pipeline = base.pipeline;
    t.axes = parse_axes(merged);
    t.columns = columns_for(t.pipeline);
    t.effective = effective_parameters(base);
    t.hash = config_hash(json{{"effective", t.effective},
                              {"sweep", get_path(merged, "sweep")},
                              {"output", get_path(merged, "output")}});

    std::size_t total = 1;
    for (const auto& a : t.axes) total *= a.values.size();
    t.index.resize(total);
    for (std::size_t i = 0; i < total; ++i) {
        std::size_t rem = i;
        std::vector<std::size_t> idx(t.axes.size());
        for (std::size_t a = t.axes.size(); a-- > 0;) {
            idx[a] = rem % t.axes[a].values.size();
            rem /= t.axes[a].values.size();
        }
        t.index[i] = std::move(idx);
    }

    OpticsCache cache;
    t.rows.resize(total);
    parallel_for(total, threads, [&](std::size_t i) {
        json point = merged;
        for (std::size_t a = 0; a < t.axes.size(); ++a) {
            const json& v = t.axes[a].values[t.index[i][a]];
            if (t.axes[a].param == "variant") {
                for (auto kv = v.begin(); kv != v.end(); ++kv)
                    if (kv.key() != "label") set_path(point, kv.key(), kv.value());
            } else {
                set_path(point, t.axes[a].param, v);
            }
        }
        try {
            Resolved r = resolve(point);
            r.pipeline = t.pipeline;
            t.rows[i] = evaluate_point(r, cache);
        } catch (const std::exception& e) {
            t.rows[i].values.assign(t.columns.size(), nullptr);
            t.rows[i].error = e.what();
        }
    });
    return t;
}

std::string resolve_out_dir(const RunOptions& opt, const json& merged) {
    if (!opt.out_dir.empty()) return opt.out_dir;
    json d = get_path(merged, "output.dir");
    if (d.is_string() && !d.get<std::string>().empty()) return d.get<std::string>();
    if (const char* env = std::getenv("TPVSIM_OUT_DIR"); env && *env) return env;
    return "tpvsim_out";
}

RunSummary run_and_write(const json& user_config, const RunOptions& opt) {
    auto report = validate_config(user_config);
    if (!report.ok()) {
        std::string msg = "invalid configuration:";
        for (const auto& e : report.errors) msg += "\n  " + e;
        throw ConfigError(msg);
    }
    json merged = merge_config(user_config);
    if (opt.grid_points) merged["grid"]["points"] = *opt.grid_points;
    if (!opt.name.empty()) merged["scenario"] = opt.name;

    SweepTable t = run_sweep(merged, opt.threads);
    namespace fs = std::filesystem;
    fs::path dir = resolve_out_dir(opt, merged);
    fs::create_directories(dir);

    RunSummary s;
    s.name = t.name;
    s.rows = t.rows.size();
    s.failures = t.failures();
    for (std::size_t i = 0; i < t.rows.size(); ++i)
        if (!t.rows[i].error.empty()) s.errors.push_back("row " + std::to_string(i) + ": " + t.rows[i].error);

    std::vector<std::string> names{t.name + ".csv", t.name + ".plot.csv"};
    Resolved base = resolve(merged);
    if (base.curves) {
        names.push_back(t.name + ".reference_iv.csv");
        for (std::size_t i = 0; i < t.rows.size(); ++i)
            if (!t.rows[i].curve.empty()) names.push_back(t.name + ".iv." + std::to_string(i) + ".csv");
    }
    names.push_back(t.name + ".meta.json");

    write_csv((dir / names[0]).string(), t);
    write_plot((dir / names[1]).string(), t, get_path(merged, "output.plot"));
    if (base.curves) {
        write_iv_csv((dir / (t.name + ".reference_iv.csv")).string(), reference_iv(base.cell),
                     header_block(t) + "# curve: reference cell at reference conditions\n");
        for (std::size_t i = 0; i < t.rows.size(); ++i) {
            if (t.rows[i].curve.empty()) continue;
            IVCurve c;
            c.points = t.rows[i].curve;
            write_iv_csv((dir / (t.name + ".iv." + std::to_string(i) + ".csv")).string(), c,
                         header_block(t) + "# curve: operating point of row " + std::to_string(i) + "\n");
        }
    }
    write_metadata((dir / names.back()).string(), t, names);
    for (const auto& n : names) s.files.push_back((dir / n).string());
    return s;
}

}
