#ifndef SWARMOPT_SWARM_HPP
#define SWARMOPT_SWARM_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "common.hpp"
#include "objectives.hpp"
#include "rng.hpp"

namespace swarmopt {

struct SwarmConfig {
    std::size_t num_particles = 40;
    std::size_t dimension = 30;
    std::size_t max_iterations = 5000;
    double v_max = 0.0;
    double x_min = 0.0;
    double x_max = 0.0;
    std::uint64_t seed = 0;

    friend bool operator==(const SwarmConfig&, const SwarmConfig&) = default;
};

/// Default velocity clamp: a fifth of the search range.
constexpr double default_v_max(double x_min, double x_max) noexcept { return 0.2 * (x_max - x_min); }

/// Config with the search box and velocity clamp taken from `f`.
inline SwarmConfig make_swarm_config(const ObjectiveFunction& f, std::size_t num_particles,
                                     std::size_t max_iterations, std::uint64_t seed)
{
    return SwarmConfig{
        .num_particles = num_particles,
        .dimension = f.dimension,
        .max_iterations = max_iterations,
        .v_max = default_v_max(f.lower_bound, f.upper_bound),
        .x_min = f.lower_bound,
        .x_max = f.upper_bound,
        .seed = seed,
    };
}

inline void validate(const SwarmConfig& c)
{
    if (c.num_particles < 2)
        throw config_error("swarm needs at least 2 particles");
    if (c.dimension == 0)
        throw config_error("swarm dimension must be positive");
    if (c.max_iterations == 0)
        throw config_error("max_iterations must be positive");
    if (!(c.v_max > 0.0))
        throw config_error("v_max must be positive");
    if (!(c.x_min < c.x_max))
        throw config_error("x_min must be below x_max");
}

struct SwarmState {
    SwarmConfig config;
    Matrix positions;
    Matrix velocities;
    Matrix personal_best_positions;
    std::vector<double> personal_best_values;
    std::vector<double> global_best_position;
    double global_best_value = std::numeric_limits<double>::infinity();
    std::size_t iteration = 0;

    std::size_t num_particles() const noexcept { return config.num_particles; }
    std::size_t dimension() const noexcept { return config.dimension; }

    friend bool operator==(const SwarmState&, const SwarmState&) = default;
};

/// Throws std::invalid_argument when lo > hi.
inline double clamp(double value, double lo, double hi)
{
    if (lo > hi)
        throw std::invalid_argument("clamp: lo > hi");
    return std::min(hi, std::max(lo, value));
}

namespace detail {

// Unchecked variant for inner loops where the bounds are already validated.
inline double clamp_unchecked(double value, double lo, double hi) noexcept
{
    return std::min(hi, std::max(lo, value));
}

// Recomputes the global best from the personal bests. Ties go to the lowest
// particle index.
inline void refresh_global_best(SwarmState& s)
{
    std::size_t best = 0;
    for (std::size_t k = 1; k < s.num_particles(); ++k)
        if (s.personal_best_values[k] < s.personal_best_values[best])
            best = k;
    s.global_best_value = s.personal_best_values[best];
    const auto row = s.personal_best_positions.row(best);
    s.global_best_position.assign(row.begin(), row.end());
}

// Moves every particle by its current velocity, clamps, evaluates, and
// updates personal bests. improved[k] is set when particle k strictly
// improved.
inline void move_and_evaluate(SwarmState& s, const ObjectiveFunction& f, std::vector<bool>& improved)
{
    const auto& c = s.config;
    improved.assign(s.num_particles(), false);
    for (std::size_t k = 0; k < s.num_particles(); ++k) {
        auto x = s.positions.row(k);
        const auto v = s.velocities.row(k);
        for (std::size_t d = 0; d < x.size(); ++d)
            x[d] = clamp_unchecked(x[d] + v[d], c.x_min, c.x_max);
        const double value = evaluate(f, x);
        if (value < s.personal_best_values[k]) {
            s.personal_best_values[k] = value;
            auto p = s.personal_best_positions.row(k);
            std::copy(x.begin(), x.end(), p.begin());
            improved[k] = true;
        }
    }
    refresh_global_best(s);
}

} // namespace detail

/// Draws a fresh swarm. Draw order: all positions (particle-major,
/// dimension-minor), then all velocities in the same order.
inline SwarmState initialize(const SwarmConfig& config, const ObjectiveFunction& f, RngStream& rng)
{
    validate(config);
    if (config.dimension != f.dimension)
        throw std::invalid_argument("initialize: swarm dimension " + std::to_string(config.dimension) +
                                    " does not match function dimension " + std::to_string(f.dimension));

    const std::size_t n = config.num_particles;
    const std::size_t dim = config.dimension;
    SwarmState s;
    s.config = config;
    s.positions = Matrix(n, dim);
    s.velocities = Matrix(n, dim);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t d = 0; d < dim; ++d)
            s.positions(k, d) = rng.uniform(config.x_min, config.x_max);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t d = 0; d < dim; ++d)
            s.velocities(k, d) = rng.uniform(-config.v_max, config.v_max);

    s.personal_best_positions = s.positions;
    s.personal_best_values.resize(n);
    for (std::size_t k = 0; k < n; ++k)
        s.personal_best_values[k] = evaluate(f, s.positions.row(k));
    detail::refresh_global_best(s);
    s.iteration = 0;
    return s;
}

/// One iteration of global-best PSO without inertia:
///   v += c1*r1*(p - x) + c2*r2*(g - x),  x += v
/// r1 then r2 are drawn per (particle, dimension), particle-major, so a step
/// consumes exactly 2*N*D draws. Velocities and positions are clamped.
inline void pso_step(SwarmState& s, const ObjectiveFunction& f, double c1, double c2, RngStream& rng)
{
    const auto& c = s.config;
    const auto& g = s.global_best_position;
    for (std::size_t k = 0; k < s.num_particles(); ++k) {
        const auto x = s.positions.row(k);
        const auto p = s.personal_best_positions.row(k);
        auto v = s.velocities.row(k);
        for (std::size_t d = 0; d < s.dimension(); ++d) {
            const double r1 = rng.uniform();
            const double r2 = rng.uniform();
            const double nv = v[d] + c1 * r1 * (p[d] - x[d]) + c2 * r2 * (g[d] - x[d]);
            v[d] = detail::clamp_unchecked(nv, -c.v_max, c.v_max);
        }
    }
    std::vector<bool> improved;
    detail::move_and_evaluate(s, f, improved);
    ++s.iteration;
}

} // namespace swarmopt

#endif // SWARMOPT_SWARM_HPP
