#ifndef SWARMOPT_CLPSO_HPP
#define SWARMOPT_CLPSO_HPP

#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "common.hpp"
#include "objectives.hpp"
#include "rng.hpp"
#include "swarm.hpp"

namespace swarmopt {

struct ClpsoParams {
    /// Acceleration coefficient applied to the exemplar term.
    double c = 1.49445;
    double w_start = 0.9;
    double w_end = 0.4;
    /// Non-improving iterations tolerated before an exemplar is reassigned.
    std::size_t refresh_gap = 7;
    /// When set, every particle uses this learning probability instead of
    /// the per-particle schedule of learning_probability().
    std::optional<double> learning_prob;

    friend bool operator==(const ClpsoParams&, const ClpsoParams&) = default;
};

inline void validate(const ClpsoParams& p)
{
    if (!(p.c > 0.0))
        throw config_error("CLPSO acceleration coefficient must be positive");
    if (!(p.w_end > 0.0 && p.w_end <= p.w_start && p.w_start < 1.5))
        throw config_error("CLPSO inertia endpoints must satisfy 0 < w_end <= w_start < 1.5");
    if (p.refresh_gap < 1)
        throw config_error("CLPSO refresh gap must be at least 1");
    if (p.learning_prob && !(*p.learning_prob >= 0.0 && *p.learning_prob <= 1.0))
        throw config_error("learning probability must lie in [0, 1]");
}

/// One particle's exemplar: the guidance value and the particle it was
/// copied from, per dimension.
struct ExemplarRow {
    std::vector<double> positions;
    std::vector<std::size_t> sources;
};

/// Exemplars for the whole swarm. Entries are copies of personal-best
/// components taken at assignment time; they do not follow later changes
/// to the source particle's personal best.
struct ExemplarTable {
    Matrix exemplar_positions;
    std::vector<std::size_t> source_particle; // N x D, row-major
    std::vector<std::size_t> stagnation_count;
    /// Number of times each particle's row has been (re)assigned.
    std::vector<std::size_t> assignment_count;

    ExemplarTable() = default;
    ExemplarTable(std::size_t n, std::size_t dim)
        : exemplar_positions(n, dim), source_particle(n * dim, 0), stagnation_count(n, 0), assignment_count(n, 0)
    {
    }

    std::size_t num_particles() const noexcept { return exemplar_positions.rows(); }
    std::size_t dimension() const noexcept { return exemplar_positions.cols(); }

    std::size_t source(std::size_t k, std::size_t d) const noexcept { return source_particle[k * dimension() + d]; }

    void set_row(std::size_t k, const ExemplarRow& row)
    {
        auto dst = exemplar_positions.row(k);
        for (std::size_t d = 0; d < dimension(); ++d) {
            dst[d] = row.positions[d];
            source_particle[k * dimension() + d] = row.sources[d];
        }
        stagnation_count[k] = 0;
        ++assignment_count[k];
    }

    friend bool operator==(const ExemplarTable&, const ExemplarTable&) = default;
};

/// Inertia weight at `iteration`, interpolated linearly from w_start at 0 to
/// w_end at max_iterations - 1.
inline double inertia_weight(std::size_t iteration, std::size_t max_iterations, const ClpsoParams& p)
{
    if (max_iterations <= 1)
        return p.w_start;
    return p.w_start + (p.w_end - p.w_start) * static_cast<double>(iteration) /
                           static_cast<double>(max_iterations - 1);
}

/// Learning probability of the particle at zero-based index `particle`:
///   Pc = 0.05 + 0.45 * (exp(10 k / (N - 1)) - 1) / (exp(10) - 1),  k = particle
/// rising from 0.05 for the first particle to 0.5 for the last.
inline double learning_probability(std::size_t particle, std::size_t num_particles)
{
    if (num_particles < 2)
        throw config_error("learning probability needs at least 2 particles");
    const double t = 10.0 * static_cast<double>(particle) / static_cast<double>(num_particles - 1);
    return 0.05 + 0.45 * std::expm1(t) / std::expm1(10.0);
}

inline double particle_learning_probability(std::size_t particle, std::size_t num_particles, const ClpsoParams& p)
{
    return p.learning_prob ? *p.learning_prob : learning_probability(particle, num_particles);
}

/// Builds a new exemplar row for particle k.
///
/// Per dimension, one uniform draw decides whether to learn from others
/// (probability learning_prob). If so, two distinct particles other than k
/// are drawn and the one with the lower personal-best value supplies that
/// dimension (ties go to the first drawn). Otherwise k's own personal best
/// is used. If no dimension ended up learning from another particle, one
/// random dimension is taken from a random particle other than k.
inline ExemplarRow assign_exemplar(std::size_t k, const SwarmState& s, double learning_prob, RngStream& rng)
{
    const std::size_t n = s.num_particles();
    const std::size_t dim = s.dimension();
    if (n < 3)
        throw config_error("exemplar assignment needs at least 3 particles");

    ExemplarRow row{std::vector<double>(dim), std::vector<std::size_t>(dim, k)};
    bool learned = false;
    for (std::size_t d = 0; d < dim; ++d) {
        if (rng.uniform() < learning_prob) {
            const std::size_t a = rng.below_excluding(n, k);
            std::size_t b = rng.below_excluding(n, k);
            while (b == a)
                b = rng.below_excluding(n, k);
            row.sources[d] = s.personal_best_values[b] < s.personal_best_values[a] ? b : a;
            learned = true;
        }
    }
    if (!learned) {
        const std::size_t d = rng.below(dim);
        row.sources[d] = rng.below_excluding(n, k);
    }
    for (std::size_t d = 0; d < dim; ++d)
        row.positions[d] = s.personal_best_positions(row.sources[d], d);
    return row;
}

/// Exemplar rows for every particle, assigned in particle order.
inline ExemplarTable initialize_exemplars(const SwarmState& s, const ClpsoParams& p, RngStream& rng)
{
    ExemplarTable table(s.num_particles(), s.dimension());
    for (std::size_t k = 0; k < s.num_particles(); ++k)
        table.set_row(k, assign_exemplar(k, s, particle_learning_probability(k, s.num_particles(), p), rng));
    return table;
}

namespace detail {

// Shared tail of a comprehensive-learning step: move, evaluate, update
// stagnation counters, and reassign exemplars of stalled particles.
inline void finish_comprehensive_step(SwarmState& s, ExemplarTable& table, const ObjectiveFunction& f,
                                      const ClpsoParams& p, RngStream& rng)
{
    std::vector<bool> improved;
    move_and_evaluate(s, f, improved);
    for (std::size_t k = 0; k < s.num_particles(); ++k) {
        if (improved[k])
            table.stagnation_count[k] = 0;
        else
            ++table.stagnation_count[k];
    }
    for (std::size_t k = 0; k < s.num_particles(); ++k)
        if (table.stagnation_count[k] >= p.refresh_gap)
            table.set_row(k, assign_exemplar(k, s, particle_learning_probability(k, s.num_particles(), p), rng));
    ++s.iteration;
}

} // namespace detail

/// One CLPSO iteration:
///   v = w(i)*v + c*r*(exemplar - x),  x += v
/// with one r per (particle, dimension), drawn particle-major. The velocity
/// phase consumes exactly N*D draws; exemplar reassignment afterwards draws
/// a state-dependent number.
inline void clpso_step(SwarmState& s, ExemplarTable& table, const ObjectiveFunction& f, const ClpsoParams& p,
                       RngStream& rng)
{
    const double w = inertia_weight(s.iteration, s.config.max_iterations, p);
    const double v_max = s.config.v_max;
    for (std::size_t k = 0; k < s.num_particles(); ++k) {
        const auto x = s.positions.row(k);
        const auto e = table.exemplar_positions.row(k);
        auto v = s.velocities.row(k);
        for (std::size_t d = 0; d < s.dimension(); ++d) {
            const double r = rng.uniform();
            v[d] = detail::clamp_unchecked(w * v[d] + p.c * r * (e[d] - x[d]), -v_max, v_max);
        }
    }
    detail::finish_comprehensive_step(s, table, f, p, rng);
}

} // namespace swarmopt

#endif // SWARMOPT_CLPSO_HPP
