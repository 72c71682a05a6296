#include <doctest.h>

#include "tpv/config.hpp"
#include "tpv/errors.hpp"
#include "tpv/pipeline.hpp"
#include "tpv/presets.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace tpv;
using namespace tpv::cli;
namespace fs = std::filesystem;

namespace {

bool contains(const std::vector<std::string>& v, const std::string& needle) {
    for (const auto& s : v)
        if (s.find(needle) != std::string::npos) return true;
    return false;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

fs::path scratch(const std::string& name) {
    auto p = fs::temp_directory_path() / ("tpv_cli_test_" + name);
    fs::remove_all(p);
    return p;
}

json axis(const std::string& param, json values) { return {{"param", param}, {"values", std::move(values)}}; }

double num_at(const SweepTable& t, std::size_t row, const std::string& col) {
    return t.rows[row].values[static_cast<std::size_t>(t.column(col))].get<double>();
}

}

TEST_CASE("validate: empty config reports every default") {
    auto rep = validate_config(parse_config_text("", "empty.json"));
    CHECK(rep.ok());
    CHECK(rep.warnings.empty());
    CHECK(rep.defaults.size() == schema().size());
    CHECK(rep.format().find("config OK") != std::string::npos);
    CHECK(validate_config(json::object()).defaults.size() == schema().size());
}

TEST_CASE("validate: range, choice and type errors name the field") {
    auto rep = validate_config({{"econ", {{"k_loss", 1.5}}}});
    CHECK(!rep.ok());
    CHECK(contains(rep.errors, "econ.k_loss"));
    CHECK(contains(rep.errors, "out of range"));

    CHECK(contains(validate_config({{"econ", {{"crf_form", "exotic"}}}}).errors, "econ.crf_form"));
    CHECK(contains(validate_config({{"cell", {{"IQE", "high"}}}}).errors, "cell.IQE: expected a number"));
    CHECK(contains(validate_config({{"grid", {{"points", 10.5}}}}).errors, "grid.points"));
    CHECK(contains(validate_config({{"battery", 3}}).errors, "battery: expected an object"));
    CHECK(!validate_config(json::array()).ok());
}

TEST_CASE("validate: misspelled keys suggest the nearest name") {
    auto rep = validate_config({{"econ", {{"k_los", 0.2}}}, {"batery", {{"m_si_kg", 1e4}}}});
    CHECK(rep.ok());
    CHECK(contains(rep.warnings, "unknown key 'econ.k_los'; did you mean 'econ.k_loss'?"));
    CHECK(contains(rep.warnings, "did you mean 'battery'?"));

    auto bad_axis = validate_config({{"sweep", {{"axes", {{{"param", "econ.kloss"}, {"values", {0.1}}}}}}}});
    CHECK(!bad_axis.ok());
    CHECK(contains(bad_axis.errors, "did you mean 'econ.k_loss'"));
}

TEST_CASE("validate: sweep axis checks") {
    auto bad_steps = validate_config(
        {{"sweep", {{"axes", {{{"param", "econ.k_loss"}, {"min", 0}, {"max", 0.5}, {"steps", 0}}}}}}});
    CHECK(contains(bad_steps.errors, "steps"));
    auto bad_log = validate_config({{"sweep",
                                     {{"axes",
                                       {{{"param", "battery.m_si_kg"},
                                         {"min", -1},
                                         {"max", 10},
                                         {"steps", 3},
                                         {"scale", "log"}}}}}}});
    CHECK(!bad_log.ok());
    auto bad_value = validate_config({{"sweep", {{"axes", {axis("econ.k_loss", {0.1, 2.0})}}}}});
    CHECK(contains(bad_value.errors, "econ.k_loss"));
}

TEST_CASE("parse errors carry file, line and column") {
    try {
        parse_config_text("{\n  \"econ\": {\n    \"k_loss\": ,\n  }\n}", "broken.json");
        FAIL("expected a parse error");
    } catch (const ConfigError& e) {
        std::string w = e.what();
        CHECK(w.find("broken.json:3:") == 0);
    }
    CHECK_THROWS_AS(load_config_file("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("merge and resolve") {
    auto merged = merge_config({{"econ", {{"k_loss", 0.2}}}, {"source", {{"T_bb_C", 1500}}}});
    CHECK(get_path(merged, "econ.k_loss") == 0.2);
    CHECK(get_path(merged, "econ.N_cy") == 730);
    auto r = resolve(merged);
    CHECK(r.econ.k_loss == 0.2);
    // battery temperature follows the source unless set
    CHECK(r.battery.T_h_C == 1500);
    CHECK(resolve(merge_config({{"battery", {{"T_h_C", 1600}}}})).battery.T_h_C == 1600);

    auto ig = resolve(merge_config({{"cell", {{"preset", "ingaas_default"}}}}));
    CHECK(ig.cell.material == CellMaterial::InGaAs);
    CHECK(ig.cell.R_s_mohm == 7.0);
    auto ig30 = resolve(merge_config({{"cell", {{"preset", "ingaas_default"}, {"R_s_mohm_cm2", 30}}}}));
    CHECK(ig30.cell.R_s_mohm == 30.0);
    CHECK(ig30.cell.E_g_eV == 0.74);

    auto eff = effective_parameters(r);
    CHECK(eff.contains("econ"));
    json j;
    set_path(j, "a.b.c", 3);
    CHECK(get_path(j, "a.b.c") == 3);
    CHECK(get_path(j, "a.x").is_null());
}

TEST_CASE("config hash and number format") {
    json a = merge_config({});
    json b = merge_config({{"econ", {{"k_loss", 0.2}}}});
    CHECK(config_hash(a) == config_hash(merge_config({})));
    CHECK(config_hash(a) != config_hash(b));
    CHECK(config_hash(a).size() == 16);
    for (double v : {0.1, 1.0 / 3, 1e-300, 123456789.123, -2.5e17}) CHECK(std::stod(format_number(v)) == v);
    CHECK(format_number(1e5) == "1e+05");
}

TEST_CASE("axes") {
    auto merged = merge_config({{"sweep",
                                 {{"axes",
                                   {{{"param", "battery.m_si_kg"}, {"min", 1e3}, {"max", 1e5}, {"steps", 3}, {"scale", "log"}},
                                    {{"param", "econ.k_loss"}, {"min", 0}, {"max", 0.5}, {"steps", 6}}}}}}});
    auto axes = parse_axes(merged);
    REQUIRE(axes.size() == 2);
    CHECK(axes[0].values[1].get<double>() == doctest::Approx(1e4).epsilon(1e-14));
    CHECK(axes[1].values.size() == 6);
    CHECK(axes[1].values[5].get<double>() == 0.5);
    CHECK_THROWS_AS(parse_axes(merge_config({{"sweep", {{"axes", {axis("nope.x", {1})}}}}})), ConfigError);
}

TEST_CASE("sweep: single point equals direct evaluation") {
    json cfg = {{"pipeline", "device"},
                {"source", {{"T_bb_C", 1300}}},
                {"sweep", {{"axes", {axis("cell.R_s_mohm_cm2", {80})}}}}};
    auto t = run_sweep(merge_config(cfg), 1);
    REQUIRE(t.rows.size() == 1);

    auto cell = si_default();
    auto optics = cell_optics(cell, make_grid({}));
    auto direct = operating_point(cell, BlackbodySource::from_celsius(1300), optics.absorptance, {});
    CHECK(num_at(t, 0, "eta") == direct.eta);
    CHECK(num_at(t, 0, "P_out_W_cm2") == direct.P_out);
    CHECK(num_at(t, 0, "V_oc_V") == direct.V_oc);

    // no axes at all is a single evaluation too
    auto bare = run_sweep(merge_config({{"pipeline", "device"}, {"source", {{"T_bb_C", 1300}}}}), 1);
    REQUIRE(bare.rows.size() == 1);
    CHECK(num_at(bare, 0, "eta") == direct.eta);
}

TEST_CASE("sweep: storage pipeline matches the library") {
    auto t = run_sweep(merge_config({{"pipeline", "storage"},
                                     {"source", {{"T_bb_C", 1800}}},
                                     {"sweep", {{"axes", {axis("battery.m_si_kg", {1e5})}}}}}),
                       1);
    BatterySpec b;
    CHECK(num_at(t, 0, "Q_h_kWh") == stored_energy_kWh(b));
    CHECK(num_at(t, 0, "cpe_usd_per_kwh") == cpe(b, CapexScenario::full));
    CHECK(num_at(t, 0, "A_emit_m2") == vessel_geometry(b).A_emit_m2);
}

TEST_CASE("sweep: row count and axis-major order") {
    json cfg = {{"pipeline", "storage"},
                {"sweep",
                 {{"axes",
                   {{{"param", "battery.m_si_kg"}, {"min", 1e3}, {"max", 1e5}, {"steps", 4}, {"scale", "log"}},
                    axis("source.T_bb_C", {1000, 1400, 1800})}}}}};
    auto t = run_sweep(merge_config(cfg), 3);
    REQUIRE(t.rows.size() == 12);
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        CHECK(t.index[i][0] == i / 3);
        CHECK(t.index[i][1] == i % 3);
        CHECK(num_at(t, i, "T_h_C") == t.axes[1].values[i % 3].get<double>());
    }
}

TEST_CASE("sweep: fig6d-style LCOE falls with scale") {
    auto t = run_sweep(merge_config(find_preset("fig6d").config), 2);
    REQUIRE(t.failures() == 0);
    const std::size_t n = t.axes[1].values.size();
    for (std::size_t v = 0; v < t.axes[0].values.size(); ++v)
        for (std::size_t i = 1; i < n; ++i)
            CHECK(num_at(t, v * n + i, "lcoe_usd_per_kwh") < num_at(t, v * n + i - 1, "lcoe_usd_per_kwh"));
}

TEST_CASE("sweep: failures become rows with an error") {
    json cfg = {{"pipeline", "system"},
                {"source", {{"T_bb_C", 1800}}},
                {"sweep", {{"axes", {axis("econ.t_d_h", {10, 1})}}}}};
    auto t = run_sweep(merge_config(cfg), 1);
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[0].error.empty());
    CHECK(!t.rows[1].error.empty());
    CHECK(t.failures() == 1);
    // upstream stages are still reported for the failed row
    CHECK(t.rows[1].values[static_cast<std::size_t>(t.column("eta"))].is_number());

    auto dir = scratch("fail");
    RunOptions opt;
    opt.out_dir = dir.string();
    auto s = run_and_write(cfg, opt);
    CHECK(s.rows == 2);
    CHECK(s.failures == 1);
    auto csv = slurp(dir / "run.csv");
    CHECK(csv.find("discharge too fast") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("sweep: invalid configs are refused before running") {
    RunOptions opt;
    opt.out_dir = scratch("invalid").string();
    CHECK_THROWS_AS(run_and_write({{"econ", {{"k_loss", 3}}}}, opt), ConfigError);
    CHECK(!fs::exists(opt.out_dir));
}

TEST_CASE("output files: headers, plot grid and metadata") {
    auto dir = scratch("out");
    RunOptions opt;
    opt.out_dir = dir.string();
    opt.threads = 2;
    json cfg = {{"scenario", "probe"},
                {"pipeline", "device"},
                {"sweep",
                 {{"axes", {axis("cell.R_s_mohm_cm2", {10, 80}), axis("source.T_bb_C", {1200, 1400, 1600})}}}},
                {"output", {{"curves", true}}}};
    auto s = run_and_write(cfg, opt);
    CHECK(s.rows == 6);
    CHECK(s.failures == 0);
    for (const auto& f : s.files) CHECK(fs::exists(f));
    CHECK(fs::exists(dir / "probe.reference_iv.csv"));
    CHECK(fs::exists(dir / "probe.iv.5.csv"));

    auto csv = slurp(dir / "probe.csv");
    CHECK(csv.rfind("# tool: tpvsim ", 0) == 0);
    CHECK(csv.find("# config_hash: ") != std::string::npos);
    CHECK(csv.find("# param: econ.r = 0.05") != std::string::npos);
    CHECK(csv.find("# param: grid.points = 2000") != std::string::npos);
    // every schema parameter is echoed
    for (const auto& p : schema())
        if (p.path.rfind("output.", 0) != 0) CHECK(csv.find("# param: " + p.path + " = ") != std::string::npos);
    CHECK(csv.find("axis:cell.R_s_mohm_cm2,axis:source.T_bb_C,cell,") != std::string::npos);

    std::istringstream plot(slurp(dir / "probe.plot.csv"));
    std::vector<std::string> body;
    for (std::string line; std::getline(plot, line);)
        if (!line.empty() && line[0] != '#') body.push_back(line);
    REQUIRE(body.size() == 3);
    CHECK(body[0].rfind("cell.R_s_mohm_cm2\\source.T_bb_C,1200,1400,1600", 0) == 0);

    auto meta = json::parse(slurp(dir / "probe.meta.json"));
    CHECK(meta["rows"] == 6);
    CHECK(meta["failures"] == 0);
    CHECK(meta["effective_parameters"]["econ"]["crf_form"] == "paper");
    CHECK(meta["assumptions"].is_object());
    CHECK(meta["config_hash"] == csv.substr(csv.find("# config_hash: ") + 15, 16));
    fs::remove_all(dir);
}

TEST_CASE("determinism across runs and thread counts") {
    auto a = scratch("det_a"), b = scratch("det_b");
    RunOptions oa, ob;
    oa.out_dir = a.string();
    oa.threads = 1;
    ob.out_dir = b.string();
    ob.threads = 4;
    const auto& cfg = find_preset("fig5").config;
    run_and_write(cfg, oa);
    run_and_write(cfg, ob);
    for (const auto* f : {"fig5.csv", "fig5.plot.csv", "fig5.meta.json"}) CHECK(slurp(a / f) == slurp(b / f));
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST_CASE("output directory precedence") {
    RunOptions opt;
    json merged = merge_config({});
    ::unsetenv("TPVSIM_OUT_DIR");
    CHECK(resolve_out_dir(opt, merged) == "tpvsim_out");
    ::setenv("TPVSIM_OUT_DIR", "/tmp/from_env", 1);
    CHECK(resolve_out_dir(opt, merged) == "/tmp/from_env");
    json with_dir = merge_config({{"output", {{"dir", "from_config"}}}});
    CHECK(resolve_out_dir(opt, with_dir) == "from_config");
    opt.out_dir = "from_flag";
    CHECK(resolve_out_dir(opt, with_dir) == "from_flag");
    ::unsetenv("TPVSIM_OUT_DIR");
}

TEST_CASE("presets") {
    std::vector<std::string> names;
    for (const auto& p : presets()) {
        names.push_back(p.name);
        auto rep = validate_config(p.config);
        INFO(p.name << "\n" << rep.format());
        CHECK(rep.ok());
        CHECK(rep.warnings.empty());
    }
    for (const auto* n : {"fig1d", "fig2a", "fig2c", "fig3b", "fig4b", "fig5", "fig6d"})
        CHECK(std::find(names.begin(), names.end(), n) != names.end());
    CHECK_THROWS_AS(find_preset("fig9"), ConfigError);

    auto fig1d = run_sweep(merge_config(find_preset("fig1d").config), 2);
    CHECK(fig1d.rows.size() == 4 * 17);
    CHECK(fig1d.failures() == 0);

    // fig2c contains the (80, 1300 C) design point
    auto fig2c = run_sweep(merge_config(find_preset("fig2c").config), 2);
    bool found = false;
    for (std::size_t i = 0; i < fig2c.rows.size(); ++i)
        if (num_at(fig2c, i, "R_s_mohm_cm2") == 80 && num_at(fig2c, i, "T_bb_C") == 1300) {
            found = true;
            CHECK(std::abs(num_at(fig2c, i, "eta") - 0.29) < 0.03);
        }
    CHECK(found);
}
