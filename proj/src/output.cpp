#include "tpv/pipeline.hpp"

#include "tpv/errors.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace tpv::cli {

namespace {

void flatten(const json& j, const std::string& prefix, std::vector<std::pair<std::string, json>>& out) {
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it)
            flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
    } else {
        out.emplace_back(prefix, j);
    }
}

std::string cell_text(const json& v) {
    if (v.is_null()) return "";
    if (v.is_number()) return format_number(v.get<double>());
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    std::string s = v.is_string() ? v.get<std::string>() : v.dump();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) {
        if (ch == '"') q += "\"\"";
        else if (ch == '\n') q += ' ';
        else q += ch;
    }
    return q + "\"";
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path);
    return out;
}

}

std::string header_block(const SweepTable& t) {
    std::ostringstream os;
    os << "# tool: tpvsim " << TPV_VERSION << "\n";
    os << "# config_hash: " << t.hash << "\n";
    os << "# scenario: " << t.name << "\n";
    os << "# pipeline: " << to_string(t.pipeline) << "\n";
    for (const auto& a : t.axes) {
        os << "# axis: " << a.param << " =";
        for (const auto& l : a.labels) os << ' ' << l;
        os << "\n";
    }
    os << "# note: wavelength integration bounds are a modeling choice (grid.lambda_min_um, grid.lambda_max_um)\n";
    std::vector<std::pair<std::string, json>> flat;
    flatten(t.effective, "", flat);
    for (const auto& [k, v] : flat) os << "# param: " << k << " = " << (v.is_null() ? "null" : cell_text(v)) << "\n";
    return os.str();
}

void write_csv(const std::string& path, const SweepTable& t) {
    auto out = open_out(path);
    out << header_block(t);
    std::set<std::string> own(t.columns.begin(), t.columns.end());
    for (const auto& a : t.axes) out << (a.param == "variant" ? "variant" : "axis:" + a.param) << ',';
    for (const auto& c : t.columns) out << c << ',';
    out << "error\n";
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        for (std::size_t a = 0; a < t.axes.size(); ++a) {
            const auto& ax = t.axes[a];
            std::size_t k = t.index[i][a];
            out << cell_text(ax.param == "variant" ? json(ax.labels[k]) : ax.values[k]) << ',';
        }
        for (const auto& v : t.rows[i].values) out << cell_text(v) << ',';
        out << cell_text(t.rows[i].error) << '\n';
    }
}

void write_plot(const std::string& path, const SweepTable& t, const json& plot_spec) {
    std::string value;
    switch (t.pipeline) {
    case Pipeline::optics: value = "r_oob"; break;
    case Pipeline::device: value = "eta"; break;
    case Pipeline::storage: value = "cpe_usd_per_kwh"; break;
    case Pipeline::system: value = "lcoe_usd_per_kwh"; break;
    }
    auto find_axis = [&](const json& name) -> int {
        if (!name.is_string()) return -1;
        for (std::size_t a = 0; a < t.axes.size(); ++a)
            if (t.axes[a].param == name.get<std::string>()) return static_cast<int>(a);
        throw ConfigError("output.plot: '" + name.get<std::string>() + "' is not a sweep axis");
    };
    int xa = -1, ya = -1;
    if (plot_spec.is_object()) {
        if (plot_spec.contains("value") && plot_spec["value"].is_string()) value = plot_spec["value"];
        xa = find_axis(plot_spec.value("x", json(nullptr)));
        ya = find_axis(plot_spec.value("y", json(nullptr)));
    }
    const int na = static_cast<int>(t.axes.size());
    if (xa < 0 && na >= 1) xa = na >= 2 ? 1 : 0;
    if (ya < 0 && na >= 2) ya = xa == 0 ? 1 : 0;
    if (xa == ya) ya = -1;
    int col = t.column(value);
    if (col < 0) throw ConfigError("output.plot.value: unknown column '" + value + "'");

    auto out = open_out(path);
    out << header_block(t);
    out << "# plot-data: value = " << value;
    if (ya >= 0) out << ", rows = " << t.axes[ya].param;
    if (xa >= 0) out << ", columns = " << t.axes[xa].param;
    out << "\n";

    // one block per combination of the remaining axes
    std::vector<int> rest;
    for (int a = 0; a < na; ++a)
        if (a != xa && a != ya) rest.push_back(a);
    std::map<std::vector<std::size_t>, std::vector<std::size_t>> blocks;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        std::vector<std::size_t> key;
        for (int a : rest) key.push_back(t.index[i][static_cast<std::size_t>(a)]);
        blocks[key].push_back(i);
    }
    const std::size_t nx = xa >= 0 ? t.axes[xa].values.size() : 1;
    const std::size_t ny = ya >= 0 ? t.axes[ya].values.size() : 1;
    for (const auto& [key, members] : blocks) {
        if (!rest.empty()) {
            out << "# block:";
            for (std::size_t k = 0; k < rest.size(); ++k)
                out << ' ' << t.axes[rest[k]].param << '=' << t.axes[rest[k]].labels[key[k]];
            out << "\n";
        }
        std::vector<std::vector<json>> grid(ny, std::vector<json>(nx, nullptr));
        for (std::size_t i : members) {
            std::size_t xi = xa >= 0 ? t.index[i][xa] : 0, yi = ya >= 0 ? t.index[i][ya] : 0;
            grid[yi][xi] = t.rows[i].values[col];
        }
        out << (ya >= 0 ? t.axes[ya].param : std::string("-")) << '\\' << (xa >= 0 ? t.axes[xa].param : value);
        for (std::size_t x = 0; x < nx; ++x) out << ',' << (xa >= 0 ? t.axes[xa].labels[x] : value);
        out << "\n";
        for (std::size_t y = 0; y < ny; ++y) {
            out << (ya >= 0 ? t.axes[ya].labels[y] : value);
            for (std::size_t x = 0; x < nx; ++x) out << ',' << cell_text(grid[y][x]);
            out << "\n";
        }
    }
}

void write_metadata(const std::string& path, const SweepTable& t, const std::vector<std::string>& files) {
    json m;
    m["tool"] = "tpvsim";
    m["version"] = TPV_VERSION;
    m["config_hash"] = t.hash;
    m["scenario"] = t.name;
    m["pipeline"] = to_string(t.pipeline);
    m["effective_parameters"] = t.effective;
    json axes = json::array();
    for (const auto& a : t.axes) axes.push_back({{"param", a.param}, {"values", a.values}, {"labels", a.labels}});
    m["sweep_axes"] = axes;
    m["columns"] = t.columns;
    m["rows"] = t.rows.size();
    m["failures"] = t.failures();
    json failed = json::array();
    for (std::size_t i = 0; i < t.rows.size(); ++i)
        if (!t.rows[i].error.empty()) failed.push_back({{"row", i}, {"error", t.rows[i].error}});
    m["failed_rows"] = failed;
    m["files"] = files;
    m["assumptions"] = {
        {"wavelength_grid", "log-spaced; bounds are a modeling choice and out-of-grid emission is ignored"},
        {"vessel_end_caps", t.effective["battery"]["end_caps"]},
        {"charging_capacity_factor", t.effective["econ"]["charging_capacity_factor"]},
        {"crf_form", t.effective["econ"]["crf_form"]},
        {"discount_rate", t.effective["econ"]["r"]},
        {"inband_absorption", t.effective["cell"]["inband_absorption"]},
        {"p_abs_accounting", "full cell area; photocurrent carries the air-bridge fill factor and IQE"},
        {"lcoe_eta_out", "cell efficiency after dynamic dissipation; heat loss applied as (1 - heat_loss)"},
        {"dark_current_scaling", "J0 ~ T^3 exp(-E_g/kT) from the reference temperature"},
    };
    auto out = open_out(path);
    out << m.dump(2) << "\n";
}

}
