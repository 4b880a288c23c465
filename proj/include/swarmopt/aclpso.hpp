#ifndef SWARMOPT_ACLPSO_HPP
#define SWARMOPT_ACLPSO_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "clpso.hpp"
#include "common.hpp"
#include "objectives.hpp"
#include "rng.hpp"
#include "swarm.hpp"

namespace swarmopt {

/// Event trigger for the exemplar term. A (particle, dimension) pair whose
/// distance to its exemplar is within `gamma` gets a zero acceleration
/// coefficient for that iteration; otherwise it gets `base_coefficient`.
struct TriggerPolicy {
    double gamma = 1e-3;
    double base_coefficient = ClpsoParams{}.c;

    friend bool operator==(const TriggerPolicy&, const TriggerPolicy&) = default;
};

inline void validate(const TriggerPolicy& t)
{
    if (!(t.gamma >= 0.0))
        throw config_error("trigger threshold gamma must be non-negative");
    if (!(t.base_coefficient > 0.0))
        throw config_error("trigger base coefficient must be positive");
}

/// Multiplication counts under the three-per-(particle, dimension) cost
/// model of the comprehensive-learning velocity update: one for w*v, always
/// executed, and two for c*r*(exemplar - x), which the trigger can skip.
struct OpCounter {
    std::uint64_t always_mults = 0;
    std::uint64_t gated_mults = 0;
    std::uint64_t total_possible_gated = 0;

    std::uint64_t executed() const noexcept { return always_mults + gated_mults; }
    std::uint64_t possible() const noexcept { return always_mults + total_possible_gated; }

    OpCounter& operator+=(const OpCounter& o) noexcept
    {
        always_mults += o.always_mults;
        gated_mults += o.gated_mults;
        total_possible_gated += o.total_possible_gated;
        return *this;
    }

    friend bool operator==(const OpCounter&, const OpCounter&) = default;
};

/// Counter for `steps` ungated iterations of an N x D swarm, i.e. what plain
/// CLPSO executes.
constexpr OpCounter ungated_count(std::uint64_t steps, std::uint64_t n, std::uint64_t dim) noexcept
{
    const std::uint64_t pairs = steps * n * dim;
    return OpCounter{pairs, 2 * pairs, 2 * pairs};
}

/// Executed multiplications relative to the ungated algorithm, in [1/3, 1].
/// Throws undefined_ratio_error on an empty counter.
inline double computation_ratio(const OpCounter& c)
{
    if (c.always_mults == 0)
        throw undefined_ratio_error("computation_ratio: counter has no recorded multiplications");
    return static_cast<double>(c.executed()) / static_cast<double>(c.possible());
}

/// Acceleration coefficient for one (particle, dimension) pair.
inline double triggered_coefficient(double exemplar_component, double position_component, const TriggerPolicy& policy)
{
    if (!std::isfinite(exemplar_component) || !std::isfinite(position_component))
        throw std::invalid_argument("triggered_coefficient: non-finite input");
    return std::abs(exemplar_component - position_component) <= policy.gamma ? 0.0 : policy.base_coefficient;
}

/// Row-major N x D mask of pairs the trigger would gate (coefficient zero)
/// in the current state.
inline std::vector<bool> gated_mask(const SwarmState& s, const ExemplarTable& table, const TriggerPolicy& policy)
{
    std::vector<bool> mask(s.num_particles() * s.dimension());
    for (std::size_t k = 0; k < s.num_particles(); ++k)
        for (std::size_t d = 0; d < s.dimension(); ++d)
            mask[k * s.dimension() + d] =
                triggered_coefficient(table.exemplar_positions(k, d), s.positions(k, d), policy) == 0.0;
    return mask;
}

/// One event-triggered CLPSO iteration. Identical to clpso_step except that
/// the acceleration coefficient of each (particle, dimension) pair comes
/// from triggered_coefficient(); gated pairs reduce to v = w*v and skip the
/// two exemplar-term multiplications. The r draw for a pair is consumed
/// whether or not the pair is gated, so the draw sequence matches
/// clpso_step exactly.
inline void aclpso_step(SwarmState& s, ExemplarTable& table, const ObjectiveFunction& f, const ClpsoParams& p,
                        const TriggerPolicy& policy, OpCounter& counter, RngStream& rng)
{
    const double w = inertia_weight(s.iteration, s.config.max_iterations, p);
    const double v_max = s.config.v_max;
    std::uint64_t executed_gated = 0;
    for (std::size_t k = 0; k < s.num_particles(); ++k) {
        const auto x = s.positions.row(k);
        const auto e = table.exemplar_positions.row(k);
        auto v = s.velocities.row(k);
        for (std::size_t d = 0; d < s.dimension(); ++d) {
            const double r = rng.uniform();
            const double coeff = triggered_coefficient(e[d], x[d], policy);
            double nv = w * v[d];
            if (coeff != 0.0) {
                nv += coeff * r * (e[d] - x[d]);
                executed_gated += 2;
            }
            v[d] = detail::clamp_unchecked(nv, -v_max, v_max);
        }
    }
    const std::uint64_t pairs = static_cast<std::uint64_t>(s.num_particles()) * s.dimension();
    counter.always_mults += pairs;
    counter.total_possible_gated += 2 * pairs;
    counter.gated_mults += executed_gated;

    detail::finish_comprehensive_step(s, table, f, p, rng);
}

} // namespace swarmopt

#endif // SWARMOPT_ACLPSO_HPP
