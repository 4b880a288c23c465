#ifndef SWARMOPT_IO_HPP
#define SWARMOPT_IO_HPP

#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "common.hpp"
#include "harness.hpp"

namespace swarmopt {

inline constexpr std::string_view version_string = "swarmopt 0.1.0";

enum class OutputFormat { csv, json };

/// Shortest decimal text that parses back to exactly `v`.
inline std::string format_double(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

/// Summary line for a single battery (the `run` subcommand).
struct BatteryRow {
    std::string function;
    std::string algorithm;
    double gamma = 0.0;
    double mean_final = 0.0;
    double std_final = 0.0;
    double pct_computations = 0.0;
    std::size_t effective_iterations = 0;
    std::size_t runs = 0;
    std::uint64_t seed = 0;
};

inline BatteryRow make_battery_row(const ExperimentSpec& spec, const BatchSummary& s)
{
    return BatteryRow{
        .function = spec.function_name,
        .algorithm = std::string(to_string(spec.algorithm)),
        .gamma = spec.gamma,
        .mean_final = s.mean_final,
        .std_final = s.std_final,
        .pct_computations = 100.0 * s.computation_ratio_mean,
        .effective_iterations = s.effective_iterations,
        .runs = s.num_runs,
        .seed = spec.master_seed,
    };
}

namespace detail {

// Writes `content` to `path` through a temporary sibling so a failed write
// never leaves a partial file behind.
inline void write_file_atomically(const std::filesystem::path& path, const std::string& content)
{
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw io_error("cannot open '" + path.string() + "' for writing");
        out << content;
        out.flush();
        if (!out) {
            std::error_code ignored;
            std::filesystem::remove(tmp, ignored);
            throw io_error("failed writing '" + path.string() + "'");
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::error_code ignored;
        std::filesystem::remove(tmp, ignored);
        throw io_error("cannot move output into place at '" + path.string() + "': " + ec.message());
    }
}

inline nlohmann::json json_number(double v)
{
    if (!std::isfinite(v))
        return nullptr;
    return v;
}

inline nlohmann::json to_json(const ComparisonRow& r)
{
    return {{"function", r.function},
            {"gamma", json_number(r.gamma)},
            {"clpso_mean", json_number(r.clpso_mean)},
            {"aclpso_mean", json_number(r.aclpso_mean)},
            {"pct_computations", json_number(r.pct_computations)},
            {"effective_iterations", r.effective_iterations},
            {"clpso_effective_mean", json_number(r.clpso_effective_mean)},
            {"runs", r.runs},
            {"seed", r.seed}};
}

inline nlohmann::json to_json(const BatteryRow& r)
{
    return {{"function", r.function},
            {"algorithm", r.algorithm},
            {"gamma", json_number(r.gamma)},
            {"mean_final", json_number(r.mean_final)},
            {"std_final", json_number(r.std_final)},
            {"pct_computations", json_number(r.pct_computations)},
            {"effective_iterations", r.effective_iterations},
            {"runs", r.runs},
            {"seed", r.seed}};
}

template <class Row>
std::string render_json(const std::vector<Row>& rows)
{
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows)
        arr.push_back(to_json(r));
    return arr.dump(2) + "\n";
}

inline std::string render_csv(const std::vector<ComparisonRow>& rows)
{
    std::string out =
        "function,gamma,clpso_mean,aclpso_mean,pct_computations,effective_iterations,clpso_effective_mean,runs,seed\n";
    for (const auto& r : rows) {
        out += r.function + ',' + format_double(r.gamma) + ',' + format_double(r.clpso_mean) + ',' +
               format_double(r.aclpso_mean) + ',' + format_double(r.pct_computations) + ',' +
               std::to_string(r.effective_iterations) + ',' + format_double(r.clpso_effective_mean) + ',' +
               std::to_string(r.runs) + ',' + std::to_string(r.seed) + '\n';
    }
    return out;
}

inline std::string render_csv(const std::vector<BatteryRow>& rows)
{
    std::string out = "function,algorithm,gamma,mean_final,std_final,pct_computations,effective_iterations,runs,seed\n";
    for (const auto& r : rows) {
        out += r.function + ',' + r.algorithm + ',' + format_double(r.gamma) + ',' + format_double(r.mean_final) +
               ',' + format_double(r.std_final) + ',' + format_double(r.pct_computations) + ',' +
               std::to_string(r.effective_iterations) + ',' + std::to_string(r.runs) + ',' +
               std::to_string(r.seed) + '\n';
    }
    return out;
}

} // namespace detail

/// Writes summary rows as CSV (one header line, one line per row) or as a
/// JSON array of objects with the same fields. Throws io_error.
template <class Row>
void write_summary(const std::vector<Row>& rows, OutputFormat format, const std::filesystem::path& path)
{
    if (rows.empty())
        throw std::invalid_argument("write_summary: no rows");
    detail::write_file_atomically(path, format == OutputFormat::csv ? detail::render_csv(rows)
                                                                    : detail::render_json(rows));
}

inline std::string render_trace_csv(const RunRecord& rec)
{
    std::string out = "iteration,best_fitness,cumulative_multiplications\n";
    for (std::size_t i = 0; i < rec.best_fitness_trace.size(); ++i)
        out += std::to_string(i + 1) + ',' + format_double(rec.best_fitness_trace[i]) + ',' +
               std::to_string(rec.multiplication_trace[i]) + '\n';
    return out;
}

/// Convergence trace of one run: iteration, best_fitness,
/// cumulative_multiplications.
inline void write_trace(const RunRecord& rec, const std::filesystem::path& path)
{
    detail::write_file_atomically(path, render_trace_csv(rec));
}

/// One trace file per run, named `<stem>_run<index>.csv` inside `dir`.
/// Returns the paths written, in run order.
inline std::vector<std::filesystem::path> write_traces(const std::vector<RunRecord>& records,
                                                       const std::filesystem::path& dir, std::string_view stem)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw io_error("cannot create trace directory '" + dir.string() + "': " + ec.message());
    std::vector<std::filesystem::path> paths;
    paths.reserve(records.size());
    for (const auto& rec : records) {
        auto p = dir / (std::string(stem) + "_run" + std::to_string(rec.run_index) + ".csv");
        write_trace(rec, p);
        paths.push_back(std::move(p));
    }
    return paths;
}

/// Parsed trace file; used by consumers that post-process emitted traces.
struct TraceData {
    std::vector<std::size_t> iteration;
    std::vector<double> best_fitness;
    std::vector<std::uint64_t> cumulative_multiplications;
};

inline TraceData read_trace(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw io_error("cannot open trace '" + path.string() + "'");
    std::string line;
    if (!std::getline(in, line) || line != "iteration,best_fitness,cumulative_multiplications")
        throw io_error("unexpected trace header in '" + path.string() + "'");
    TraceData t;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos)
            throw io_error("malformed trace line in '" + path.string() + "'");
        t.iteration.push_back(std::stoull(line.substr(0, c1)));
        t.best_fitness.push_back(std::stod(line.substr(c1 + 1, c2 - c1 - 1)));
        t.cumulative_multiplications.push_back(std::stoull(line.substr(c2 + 1)));
    }
    return t;
}

inline nlohmann::json spec_to_json(const ExperimentSpec& s)
{
    nlohmann::json j{{"function", s.function_name},
                     {"algorithm", std::string(to_string(s.algorithm))},
                     {"gamma", s.gamma},
                     {"particles", s.swarm.num_particles},
                     {"dims", s.swarm.dimension},
                     {"iterations", s.swarm.max_iterations},
                     {"v_max", s.swarm.v_max},
                     {"x_min", s.swarm.x_min},
                     {"x_max", s.swarm.x_max},
                     {"runs", s.num_runs},
                     {"master_seed", s.master_seed},
                     {"clpso",
                      {{"c", s.clpso_params.c},
                       {"w_start", s.clpso_params.w_start},
                       {"w_end", s.clpso_params.w_end},
                       {"refresh_gap", s.clpso_params.refresh_gap}}}};
    if (s.clpso_params.learning_prob)
        j["clpso"]["learning_prob"] = *s.clpso_params.learning_prob;
    if (s.algorithm == Algorithm::pso) {
        j["pso_c1"] = s.pso_c1;
        j["pso_c2"] = s.pso_c2;
    }
    return j;
}

/// Provenance sidecar: `extra` plus the code version and RNG scheme.
inline void write_metadata(nlohmann::json extra, const std::filesystem::path& path)
{
    extra["version"] = std::string(version_string);
    extra["rng"] = std::string(rng_algorithm);
    detail::write_file_atomically(path, extra.dump(2) + "\n");
}

} // namespace swarmopt

#endif // SWARMOPT_IO_HPP
