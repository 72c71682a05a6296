#pragma once

#include "tpv/config.hpp"

#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace tpv::cli {

struct Axis {
    std::string param;  // schema path, or "variant"
    std::vector<json> values;
    std::vector<std::string> labels;
};

std::vector<Axis> parse_axes(const json& merged);

// Columns written for a pipeline, after the axis columns.
std::vector<std::string> columns_for(Pipeline p);

// Shares cell optics between sweep points with identical optical inputs.
class OpticsCache {
public:
    std::shared_ptr<const CellOptics> get(const Resolved& r, const std::vector<double>& grid);

private:
    std::mutex mu_;
    std::map<std::string, std::shared_future<std::shared_ptr<const CellOptics>>> entries_;
};

struct PointResult {
    std::vector<json> values;  // aligned with columns_for(pipeline); null when not computed
    std::string error;
    std::vector<IVPoint> curve;
};

PointResult evaluate_point(const Resolved& r, OpticsCache& cache);

struct SweepTable {
    std::string name;
    Pipeline pipeline = Pipeline::system;
    std::vector<Axis> axes;
    std::vector<std::string> columns;
    std::vector<std::vector<std::size_t>> index;  // per row, index into each axis
    std::vector<PointResult> rows;
    json effective;  // base effective parameters
    std::string hash;

    std::size_t failures() const;
    int column(const std::string& name) const;
};

// Evaluates the Cartesian product of the axes, first axis outermost.
SweepTable run_sweep(const json& merged, unsigned threads);

struct RunOptions {
    std::string out_dir;     // empty: config, then TPVSIM_OUT_DIR, then ./tpvsim_out
    unsigned threads = 1;
    std::optional<std::size_t> grid_points;
    std::string name;        // empty: config scenario
};

struct RunSummary {
    std::string name;
    std::size_t rows = 0;
    std::size_t failures = 0;
    std::vector<std::string> files;
    std::vector<std::string> errors;  // "row i: message"
};

RunSummary run_and_write(const json& user_config, const RunOptions& opt);

std::string resolve_out_dir(const RunOptions& opt, const json& merged);

// Output writers.
std::string header_block(const SweepTable& t);
void write_csv(const std::string& path, const SweepTable& t);
void write_plot(const std::string& path, const SweepTable& t, const json& plot_spec);
void write_metadata(const std::string& path, const SweepTable& t, const std::vector<std::string>& files);

}
