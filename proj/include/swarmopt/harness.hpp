#ifndef SWARMOPT_HARNESS_HPP
#define SWARMOPT_HARNESS_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "aclpso.hpp"
#include "clpso.hpp"
#include "common.hpp"
#include "objectives.hpp"
#include "rng.hpp"
#include "swarm.hpp"

namespace swarmopt {

enum class Algorithm { pso, clpso, aclpso };

inline std::string_view to_string(Algorithm a) noexcept
{
    switch (a) {
    case Algorithm::pso: return "pso";
    case Algorithm::clpso: return "clpso";
    case Algorithm::aclpso: return "aclpso";
    }
    return "?";
}

inline std::optional<Algorithm> parse_algorithm(std::string_view name)
{
    const std::string lower = detail::lowercase(name);
    for (Algorithm a : {Algorithm::pso, Algorithm::clpso, Algorithm::aclpso})
        if (to_string(a) == lower)
            return a;
    return std::nullopt;
}

/// One battery of independent runs. `swarm.seed` is ignored; run r is
/// seeded with derive_run_seed(master_seed, r).
struct ExperimentSpec {
    std::string function_name;
    Algorithm algorithm = Algorithm::aclpso;
    double gamma = 1e-3;
    SwarmConfig swarm;
    ClpsoParams clpso_params;
    std::size_t num_runs = 20;
    std::uint64_t master_seed = 0;
    /// Acceleration coefficients of the baseline PSO update.
    double pso_c1 = 1.49445;
    double pso_c2 = 1.49445;

    friend bool operator==(const ExperimentSpec&, const ExperimentSpec&) = default;
};

/// Spec whose search box and velocity clamp come from the named function's
/// standard domain. Throws config_error for an unknown function.
inline ExperimentSpec make_experiment(std::string_view function_name, Algorithm algorithm, double gamma,
                                      std::size_t num_particles, std::size_t dimension, std::size_t max_iterations,
                                      std::size_t num_runs, std::uint64_t master_seed)
{
    const ObjectiveFunction f = make_objective(function_name, dimension);
    ExperimentSpec spec;
    spec.function_name = f.name;
    spec.algorithm = algorithm;
    spec.gamma = gamma;
    spec.swarm = make_swarm_config(f, num_particles, max_iterations, 0);
    spec.num_runs = num_runs;
    spec.master_seed = master_seed;
    return spec;
}

inline void validate(const ExperimentSpec& spec)
{
    if (!parse_objective_kind(spec.function_name))
        throw config_error("unknown function '" + spec.function_name + "'");
    if (spec.num_runs < 1)
        throw config_error("num_runs must be at least 1");
    if (spec.algorithm == Algorithm::aclpso && !(spec.gamma >= 0.0))
        throw config_error("gamma must be non-negative");
    validate(spec.swarm);
    if (spec.algorithm != Algorithm::pso) {
        validate(spec.clpso_params);
        if (spec.swarm.num_particles < 3)
            throw config_error("comprehensive learning needs at least 3 particles");
    }
}

struct RunRecord {
    std::size_t run_index = 0;
    std::uint64_t seed = 0;
    /// Best-so-far fitness after each iteration.
    std::vector<double> best_fitness_trace;
    /// Executed multiplications accumulated up to and including each iteration.
    std::vector<std::uint64_t> multiplication_trace;
    double final_best = 0.0;
    OpCounter counter;

    friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

/// Executes run `run_index` of `spec`.
///
/// For pso the counter records the four multiplications of its update as
/// always-executed, so its computation ratio is 1.
inline RunRecord run_single(const ExperimentSpec& spec, std::size_t run_index)
{
    validate(spec);
    const ObjectiveFunction f = make_objective(spec.function_name, spec.swarm.dimension);
    SwarmConfig config = spec.swarm;
    config.seed = derive_run_seed(spec.master_seed, run_index);
    RngStream rng(config.seed);

    RunRecord rec;
    rec.run_index = run_index;
    rec.seed = config.seed;
    rec.best_fitness_trace.reserve(config.max_iterations);
    rec.multiplication_trace.reserve(config.max_iterations);

    SwarmState state = initialize(config, f, rng);
    const std::uint64_t pairs = static_cast<std::uint64_t>(config.num_particles) * config.dimension;

    auto record = [&] {
        rec.best_fitness_trace.push_back(state.global_best_value);
        rec.multiplication_trace.push_back(rec.counter.executed());
    };

    if (spec.algorithm == Algorithm::pso) {
        for (std::size_t i = 0; i < config.max_iterations; ++i) {
            pso_step(state, f, spec.pso_c1, spec.pso_c2, rng);
            rec.counter.always_mults += 4 * pairs;
            record();
        }
    } else {
        ExemplarTable table = initialize_exemplars(state, spec.clpso_params, rng);
        if (spec.algorithm == Algorithm::clpso) {
            for (std::size_t i = 0; i < config.max_iterations; ++i) {
                clpso_step(state, table, f, spec.clpso_params, rng);
                rec.counter += ungated_count(1, config.num_particles, config.dimension);
                record();
            }
        } else {
            const TriggerPolicy policy{spec.gamma, spec.clpso_params.c};
            validate(policy);
            for (std::size_t i = 0; i < config.max_iterations; ++i) {
                aclpso_step(state, table, f, spec.clpso_params, policy, rec.counter, rng);
                record();
            }
        }
    }
    rec.final_best = rec.best_fitness_trace.back();
    return rec;
}

/// Worker threads for a battery. 1 runs everything on the calling thread.
struct Execution {
    std::size_t threads = std::max(1u, std::thread::hardware_concurrency());
};

inline std::vector<RunRecord> run_experiment(const ExperimentSpec& spec, Execution exec = {})
{
    validate(spec);
    std::vector<RunRecord> records(spec.num_runs);
    const std::size_t workers = std::clamp<std::size_t>(exec.threads, 1, spec.num_runs);
    if (workers == 1) {
        for (std::size_t r = 0; r < spec.num_runs; ++r)
            records[r] = run_single(spec, r);
        return records;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t t = 0; t < workers; ++t) {
            pool.emplace_back([&] {
                for (std::size_t r = next++; r < spec.num_runs; r = next++) {
                    try {
                        records[r] = run_single(spec, r);
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure)
                            failure = std::current_exception();
                    }
                }
            });
        }
    }
    if (failure)
        std::rethrow_exception(failure);
    return records;
}

struct BatchSummary {
    double mean_final = 0.0;
    double std_final = 0.0;
    double computation_ratio_mean = 1.0;
    std::size_t effective_iterations = 0;
    std::optional<double> effective_mean;
    std::size_t num_runs = 0;

    friend bool operator==(const BatchSummary&, const BatchSummary&) = default;
};

/// round(ratio * max_iterations), halves rounded away from zero.
inline std::size_t effective_iterations(double ratio, std::size_t max_iterations)
{
    return static_cast<std::size_t>(std::llround(ratio * static_cast<double>(max_iterations)));
}

inline BatchSummary summarize(const std::vector<RunRecord>& records, std::size_t max_iterations)
{
    if (records.empty())
        throw std::invalid_argument("summarize: no records");
    const std::size_t len = records.front().best_fitness_trace.size();
    for (const auto& r : records)
        if (r.best_fitness_trace.size() != len)
            throw std::invalid_argument("summarize: traces have different lengths");

    const double n = static_cast<double>(records.size());
    BatchSummary s;
    s.num_runs = records.size();
    double sum = 0.0;
    double ratio_sum = 0.0;
    for (const auto& r : records) {
        sum += r.final_best;
        ratio_sum += computation_ratio(r.counter);
    }
    s.mean_final = sum / n;
    s.computation_ratio_mean = ratio_sum / n;
    if (records.size() > 1) {
        double sq = 0.0;
        for (const auto& r : records)
            sq += (r.final_best - s.mean_final) * (r.final_best - s.mean_final);
        s.std_final = std::sqrt(sq / (n - 1.0));
    }
    s.effective_iterations = effective_iterations(s.computation_ratio_mean, max_iterations);
    return s;
}

/// Mean over runs of the best fitness after `iterations` iterations
/// (1-based), i.e. trace element iterations - 1.
inline double effective_mean(const std::vector<RunRecord>& records, std::size_t iterations)
{
    if (records.empty())
        throw std::invalid_argument("effective_mean: no records");
    double sum = 0.0;
    for (const auto& r : records) {
        if (iterations < 1 || iterations > r.best_fitness_trace.size())
            throw std::invalid_argument("effective_mean: iteration " + std::to_string(iterations) +
                                        " outside trace of length " + std::to_string(r.best_fitness_trace.size()));
        sum += r.best_fitness_trace[iterations - 1];
    }
    return sum / static_cast<double>(records.size());
}

/// Mean best-so-far curve across runs.
inline std::vector<double> mean_trace(const std::vector<RunRecord>& records)
{
    if (records.empty())
        return {};
    std::vector<double> out(records.front().best_fitness_trace.size(), 0.0);
    for (const auto& r : records)
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] += r.best_fitness_trace[i];
    for (double& v : out)
        v /= static_cast<double>(records.size());
    return out;
}

/// Both batteries of one gated-vs-ungated comparison.
struct PairResult {
    ExperimentSpec aclpso_spec;
    ExperimentSpec clpso_spec;
    std::vector<RunRecord> aclpso_records;
    std::vector<RunRecord> clpso_records;
    BatchSummary aclpso;
    BatchSummary clpso;
};

/// Runs a gated battery and its ungated reference. The specs must agree
/// on everything except algorithm and gamma; the aclpso summary gets its
/// effective_mean from the clpso traces at its effective iteration count.
inline PairResult compare_pair(const ExperimentSpec& aclpso_spec, const ExperimentSpec& clpso_spec, Execution exec = {})
{
    if (aclpso_spec.algorithm != Algorithm::aclpso || clpso_spec.algorithm != Algorithm::clpso)
        throw config_error("compare_pair: expected an aclpso spec and a clpso spec");
    ExperimentSpec normalized = clpso_spec;
    normalized.algorithm = aclpso_spec.algorithm;
    normalized.gamma = aclpso_spec.gamma;
    if (!(normalized == aclpso_spec))
        throw config_error("compare_pair: specs differ beyond algorithm and gamma");

    PairResult out{aclpso_spec, clpso_spec, run_experiment(aclpso_spec, exec), run_experiment(clpso_spec, exec), {}, {}};
    const std::size_t iters = aclpso_spec.swarm.max_iterations;
    out.aclpso = summarize(out.aclpso_records, iters);
    out.clpso = summarize(out.clpso_records, iters);
    out.clpso.effective_mean = out.clpso.mean_final;
    if (out.aclpso.effective_iterations >= 1)
        out.aclpso.effective_mean = effective_mean(out.clpso_records, out.aclpso.effective_iterations);
    return out;
}

/// One line of the comparison table.
struct ComparisonRow {
    std::string function;
    double gamma = 0.0;
    double clpso_mean = 0.0;
    double aclpso_mean = 0.0;
    double pct_computations = 0.0;
    std::size_t effective_iterations = 0;
    double clpso_effective_mean = 0.0;
    std::size_t runs = 0;
    std::uint64_t seed = 0;

    friend bool operator==(const ComparisonRow&, const ComparisonRow&) = default;
};

inline ComparisonRow make_row(const PairResult& p)
{
    return ComparisonRow{
        .function = p.aclpso_spec.function_name,
        .gamma = p.aclpso_spec.gamma,
        .clpso_mean = p.clpso.mean_final,
        .aclpso_mean = p.aclpso.mean_final,
        .pct_computations = 100.0 * p.aclpso.computation_ratio_mean,
        .effective_iterations = p.aclpso.effective_iterations,
        .clpso_effective_mean = p.aclpso.effective_mean.value_or(std::nan("")),
        .runs = p.aclpso_spec.num_runs,
        .seed = p.aclpso_spec.master_seed,
    };
}

/// Thresholds of the standard comparison table, larger first.
inline constexpr double suite_gammas[] = {1e-1, 1e-3};

/// (aclpso, clpso) spec pairs for every function of the standard suite and
/// every threshold in suite_gammas, function-major.
inline std::vector<std::pair<ExperimentSpec, ExperimentSpec>>
suite_pairs(std::size_t num_particles, std::size_t dimension, std::size_t max_iterations, std::size_t num_runs,
            std::uint64_t master_seed)
{
    std::vector<std::pair<ExperimentSpec, ExperimentSpec>> out;
    for (const auto& f : standard_suite(dimension)) {
        for (double gamma : suite_gammas) {
            auto a = make_experiment(f.name, Algorithm::aclpso, gamma, num_particles, dimension, max_iterations,
                                     num_runs, master_seed);
            auto c = a;
            c.algorithm = Algorithm::clpso;
            out.emplace_back(std::move(a), std::move(c));
        }
    }
    return out;
}

} // namespace swarmopt

#endif // SWARMOPT_HARNESS_HPP
