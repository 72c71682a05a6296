#pragma once

#include "tpv/device.hpp"
#include "tpv/economics.hpp"
#include "tpv/radiometry.hpp"
#include "tpv/storage.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace tpv::cli {

using json = nlohmann::json;

enum class Pipeline { optics, device, storage, system };

std::string to_string(Pipeline p);
Pipeline pipeline_from_string(const std::string& s);

// One leaf of the configuration schema.
struct ParamInfo {
    enum class Kind { number, integer, string, boolean };
    std::string path;  // dotted, e.g. "econ.k_loss"
    json def;          // null: resolved from another field or the cell preset
    Kind kind = Kind::number;
    double lo = -1e300, hi = 1e300;
    bool lo_open = false, hi_open = false;
    std::vector<std::string> choices;
    std::string doc;
};

const std::vector<ParamInfo>& schema();
const ParamInfo* find_param(const std::string& path);

// Fully typed run inputs.
struct Resolved {
    std::string scenario;
    Pipeline pipeline = Pipeline::system;
    GridSpec grid;
    double T_bb_C = 1300;
    double view_factor = 1;
    CellDesign cell;
    std::string si_table, au_table;
    ThermalEnv thermal;
    BatterySpec battery;
    CapexScenario capex_scenario = CapexScenario::full;
    EconParams econ;
    bool curves = false;

    BlackbodySource source() const { return BlackbodySource::from_celsius(T_bb_C, view_factor); }
};

json default_config();
// Schema defaults overlaid with the user's values (objects merged key by key).
json merge_config(const json& user);
Resolved resolve(const json& merged);
// Every parameter with its effective value, for headers and sidecars.
json effective_parameters(const Resolved& r);

json get_path(const json& j, const std::string& dotted);
void set_path(json& j, const std::string& dotted, const json& value);

struct ValidationReport {
    std::vector<std::string> errors;
    std::vector<std::string> warnings;
    std::vector<std::string> defaults;

    bool ok() const { return errors.empty(); }
    std::string format() const;
};

ValidationReport validate_config(const json& user);

json parse_config_text(const std::string& text, const std::string& origin);
json load_config_file(const std::string& path);

std::string config_hash(const json& j);
std::string format_number(double v);

}
