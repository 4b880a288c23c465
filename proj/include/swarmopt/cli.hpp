#ifndef SWARMOPT_CLI_HPP
#define SWARMOPT_CLI_HPP

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "harness.hpp"
#include "io.hpp"
#include "objectives.hpp"

namespace swarmopt {

enum class Subcommand { run, compare, suite };

struct CliConfig {
    Subcommand subcommand = Subcommand::run;
    std::string function_name = "sphere";
    Algorithm algorithm = Algorithm::aclpso;
    double gamma = 1e-3;
    std::size_t particles = 40;
    std::size_t dims = 30;
    std::size_t iterations = 5000;
    std::size_t runs = 20;
    std::uint64_t seed = 1;
    std::filesystem::path output_path;
    bool trace_enabled = false;
    OutputFormat output_format = OutputFormat::csv;
    std::size_t threads = Execution{}.threads;

    friend bool operator==(const CliConfig&, const CliConfig&) = default;
};

/// Thrown by parse_args when the program should exit instead of running:
/// usage errors (status 2) or --help (status 0, message is the help text).
class CliExit : public std::runtime_error {
public:
    CliExit(int status, std::string message) : std::runtime_error(std::move(message)), status_(status) {}
    int status() const noexcept { return status_; }

private:
    int status_;
};

inline std::string_view to_string(Subcommand s) noexcept
{
    switch (s) {
    case Subcommand::run: return "run";
    case Subcommand::compare: return "compare";
    case Subcommand::suite: return "suite";
    }
    return "?";
}

namespace detail {

inline void add_common_options(CLI::App& sub, CliConfig& cfg, std::string& format, bool with_function,
                               bool with_algo, bool with_gamma)
{
    if (with_function) {
        sub.add_option("--function", cfg.function_name, "sphere | rosenbrock | rastrigin | griewank | ackley")
            ->transform(CLI::Validator(
                [](std::string& v) -> std::string {
                    const auto kind = parse_objective_kind(v);
                    if (!kind)
                        return "unknown function '" + v + "'";
                    v = lowercase(v);
                    return {};
                },
                "FUNCTION"));
    }
    if (with_algo) {
        sub.add_option_function<std::string>(
               "--algo",
               [&cfg](const std::string& v) {
                   const auto a = parse_algorithm(v);
                   if (!a)
                       throw CLI::ValidationError("--algo", "unknown algorithm '" + v + "'");
                   cfg.algorithm = *a;
               },
               "pso | clpso | aclpso (default aclpso)");
    }
    if (with_gamma)
        sub.add_option("--gamma", cfg.gamma, "trigger threshold (default 1e-3)")->check(CLI::NonNegativeNumber);
    sub.add_option("--particles", cfg.particles, "swarm size (default 40)")->check(CLI::Range(3ul, 1ul << 30));
    sub.add_option("--dims", cfg.dims, "problem dimension (default 30)")->check(CLI::PositiveNumber);
    sub.add_option("--iters", cfg.iterations, "iterations per run (default 5000)")->check(CLI::PositiveNumber);
    sub.add_option("--runs", cfg.runs, "independent runs (default 20)")->check(CLI::PositiveNumber);
    sub.add_option("--seed", cfg.seed, "master seed (default 1)");
    sub.add_option("--out", cfg.output_path, "summary output path");
    sub.add_flag("--trace", cfg.trace_enabled, "also write per-run convergence traces");
    sub.add_option("--format", format, "csv | json (default csv)")->check(CLI::IsMember({"csv", "json"}));
    sub.add_option("--threads", cfg.threads, "worker threads")->check(CLI::PositiveNumber);
}

} // namespace detail

/// Parses a command line (without the program name). Throws CliExit.
inline CliConfig parse_args(std::vector<std::string> argv)
{
    CliConfig cfg;
    std::string format = "csv";

    CLI::App app{"Particle swarm optimizers with event-triggered comprehensive learning", "swarmopt"};
    app.require_subcommand(1, 1);
    auto* run = app.add_subcommand("run", "run one battery of a single algorithm");
    auto* compare = app.add_subcommand("compare", "run aclpso and clpso batteries and report one comparison row");
    auto* suite = app.add_subcommand("suite", "run the full comparison table (5 functions x 2 thresholds)");
    detail::add_common_options(*run, cfg, format, true, true, true);
    detail::add_common_options(*compare, cfg, format, true, false, true);
    detail::add_common_options(*suite, cfg, format, false, false, false);

    // CLI11 parses a reversed vector.
    std::vector<std::string> args(argv.rbegin(), argv.rend());
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        std::string help = app.help();
        for (auto* sub : {run, compare, suite})
            if (sub->parsed())
                help = sub->help();
        throw CliExit(0, help);
    } catch (const CLI::ParseError& e) {
        throw CliExit(2, e.what());
    }

    if (run->parsed())
        cfg.subcommand = Subcommand::run;
    else if (compare->parsed())
        cfg.subcommand = Subcommand::compare;
    else
        cfg.subcommand = Subcommand::suite;
    if (cfg.subcommand != Subcommand::run)
        cfg.algorithm = Algorithm::aclpso;
    cfg.output_format = format == "json" ? OutputFormat::json : OutputFormat::csv;
    if (cfg.output_path.empty())
        cfg.output_path = "swarmopt_" + std::string(to_string(cfg.subcommand)) +
                          (cfg.output_format == OutputFormat::csv ? ".csv" : ".json");
    return cfg;
}

/// The battery (run) or the comparison pairs (compare, suite) a config asks
/// for, in output order.
inline std::vector<std::pair<ExperimentSpec, ExperimentSpec>> plan(const CliConfig& cfg)
{
    if (cfg.subcommand == Subcommand::suite)
        return suite_pairs(cfg.particles, cfg.dims, cfg.iterations, cfg.runs, cfg.seed);
    auto a = make_experiment(cfg.function_name, cfg.algorithm, cfg.gamma, cfg.particles, cfg.dims, cfg.iterations,
                             cfg.runs, cfg.seed);
    auto c = a;
    c.algorithm = Algorithm::clpso;
    return {{std::move(a), std::move(c)}};
}

inline nlohmann::json config_to_json(const CliConfig& cfg)
{
    return {{"subcommand", std::string(to_string(cfg.subcommand))},
            {"function", cfg.function_name},
            {"algorithm", std::string(to_string(cfg.algorithm))},
            {"gamma", cfg.gamma},
            {"particles", cfg.particles},
            {"dims", cfg.dims},
            {"iterations", cfg.iterations},
            {"runs", cfg.runs},
            {"seed", cfg.seed},
            {"out", cfg.output_path.string()},
            {"trace", cfg.trace_enabled},
            {"format", cfg.output_format == OutputFormat::csv ? "csv" : "json"}};
}

namespace detail {

inline std::string trace_stem(const ExperimentSpec& s)
{
    std::string stem = s.function_name + "_" + std::string(to_string(s.algorithm));
    if (s.algorithm == Algorithm::aclpso)
        stem += "_gamma" + format_double(s.gamma);
    return stem;
}

} // namespace detail

/// Paths of the sidecar files that accompany a summary at `out`.
inline std::filesystem::path metadata_path(const std::filesystem::path& out)
{
    auto p = out;
    p += ".meta.json";
    return p;
}

inline std::filesystem::path trace_dir(const std::filesystem::path& out)
{
    auto p = out;
    p += ".traces";
    return p;
}

/// Executes a parsed config, writing the summary, the metadata sidecar and,
/// with --trace, per-run traces. Progress goes to `log`. Returns the exit
/// status.
inline int run_cli(const CliConfig& cfg, std::ostream& log)
{
    const Execution exec{cfg.threads};
    nlohmann::json meta{{"config", config_to_json(cfg)}, {"experiments", nlohmann::json::array()}};
    try {
        const auto pairs = plan(cfg);
        for (const auto& [a, c] : pairs)
            validate(cfg.subcommand == Subcommand::run ? a : c);

        if (cfg.subcommand == Subcommand::run) {
            const auto& spec = pairs.front().first;
            const auto records = run_experiment(spec, exec);
            const auto summary = summarize(records, spec.swarm.max_iterations);
            write_summary(std::vector{make_battery_row(spec, summary)}, cfg.output_format, cfg.output_path);
            meta["experiments"].push_back(spec_to_json(spec));
            if (cfg.trace_enabled)
                write_traces(records, trace_dir(cfg.output_path), detail::trace_stem(spec));
            log << spec.function_name << ' ' << to_string(spec.algorithm) << ": mean "
                << format_double(summary.mean_final) << ", computations "
                << format_double(100.0 * summary.computation_ratio_mean) << "%\n";
        } else {
            std::vector<ComparisonRow> rows;
            std::vector<PairResult> results;
            for (const auto& [a, c] : pairs) {
                results.push_back(compare_pair(a, c, exec));
                rows.push_back(make_row(results.back()));
                meta["experiments"].push_back({{"aclpso", spec_to_json(a)}, {"clpso", spec_to_json(c)}});
                const auto& r = rows.back();
                log << r.function << " gamma=" << format_double(r.gamma) << ": clpso "
                    << format_double(r.clpso_mean) << ", aclpso " << format_double(r.aclpso_mean) << ", "
                    << format_double(r.pct_computations) << "% computations\n";
            }
            write_summary(rows, cfg.output_format, cfg.output_path);
            if (cfg.trace_enabled) {
                for (const auto& res : results) {
                    write_traces(res.aclpso_records, trace_dir(cfg.output_path), detail::trace_stem(res.aclpso_spec));
                    write_traces(res.clpso_records, trace_dir(cfg.output_path), detail::trace_stem(res.clpso_spec));
                }
            }
        }
        write_metadata(std::move(meta), metadata_path(cfg.output_path));
    } catch (const config_error& e) {
        log << "configuration error: " << e.what() << '\n';
        return 2;
    } catch (const io_error& e) {
        log << "I/O error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}

} // namespace swarmopt

#endif // SWARMOPT_CLI_HPP
