#ifndef SWARMOPT_OBJECTIVES_HPP
#define SWARMOPT_OBJECTIVES_HPP

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "common.hpp"

namespace swarmopt {

enum class ObjectiveKind { sphere, rosenbrock, rastrigin, griewank, ackley };

/// Benchmark function on the box [lower_bound, upper_bound]^dimension.
struct ObjectiveFunction {
    ObjectiveKind kind;
    std::string name;
    std::size_t dimension;
    double lower_bound;
    double upper_bound;
    std::vector<double> optimum_position;
    double optimum_value;

    double operator()(std::span<const double> x) const;
};

namespace detail {

inline double sphere(std::span<const double> x)
{
    double s = 0.0;
    for (double xi : x)
        s += xi * xi;
    return s;
}

// Sum over consecutive pairs, i = 1..D-1.
inline double rosenbrock(std::span<const double> x)
{
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        const double a = x[i] * x[i] - x[i + 1];
        const double b = x[i] - 1.0;
        s += 100.0 * a * a + b * b;
    }
    return s;
}

inline double rastrigin(std::span<const double> x)
{
    double s = 0.0;
    for (double xi : x)
        s += xi * xi - 10.0 * std::cos(2.0 * std::numbers::pi * xi) + 10.0;
    return s;
}

inline double griewank(std::span<const double> x)
{
    double sum = 0.0;
    double prod = 1.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sum += x[i] * x[i] / 4000.0;
        prod *= std::cos(x[i] / std::sqrt(static_cast<double>(i + 1)));
    }
    return sum - prod + 1.0;
}

inline double ackley(std::span<const double> x)
{
    const double n = static_cast<double>(x.size());
    double sq = 0.0;
    double cs = 0.0;
    for (double xi : x) {
        sq += xi * xi;
        cs += std::cos(2.0 * std::numbers::pi * xi);
    }
    return -20.0 * std::exp(-0.2 * std::sqrt(sq / n)) - std::exp(cs / n) + 20.0 + std::numbers::e;
}

struct KindInfo {
    ObjectiveKind kind;
    std::string_view name;
    double lower;
    double upper;
    double optimum_coordinate;
};

inline constexpr std::array<KindInfo, 5> kind_table{{
    {ObjectiveKind::sphere, "sphere", -100.0, 100.0, 0.0},
    {ObjectiveKind::rosenbrock, "rosenbrock", -2.048, 2.048, 1.0},
    {ObjectiveKind::rastrigin, "rastrigin", -5.12, 5.12, 0.0},
    {ObjectiveKind::griewank, "griewank", -600.0, 600.0, 0.0},
    {ObjectiveKind::ackley, "ackley", -32.768, 32.768, 0.0},
}};

inline std::string lowercase(std::string_view s)
{
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

} // namespace detail

/// Evaluates f at x. Throws std::invalid_argument on a dimension mismatch or
/// a non-finite component.
inline double evaluate(const ObjectiveFunction& f, std::span<const double> x)
{
    if (x.size() != f.dimension)
        throw std::invalid_argument("evaluate: expected " + std::to_string(f.dimension) +
                                    " components, got " + std::to_string(x.size()));
    for (double xi : x)
        if (!std::isfinite(xi))
            throw std::invalid_argument("evaluate: non-finite input component");

    switch (f.kind) {
    case ObjectiveKind::sphere: return detail::sphere(x);
    case ObjectiveKind::rosenbrock: return detail::rosenbrock(x);
    case ObjectiveKind::rastrigin: return detail::rastrigin(x);
    case ObjectiveKind::griewank: return detail::griewank(x);
    case ObjectiveKind::ackley: return detail::ackley(x);
    }
    throw std::logic_error("evaluate: unhandled objective kind");
}

inline double ObjectiveFunction::operator()(std::span<const double> x) const { return evaluate(*this, x); }

inline ObjectiveFunction make_objective(ObjectiveKind kind, std::size_t dimension)
{
    if (dimension == 0)
        throw config_error("objective dimension must be positive");
    for (const auto& info : detail::kind_table) {
        if (info.kind != kind)
            continue;
        return ObjectiveFunction{
            .kind = kind,
            .name = std::string(info.name),
            .dimension = dimension,
            .lower_bound = info.lower,
            .upper_bound = info.upper,
            .optimum_position = std::vector<double>(dimension, info.optimum_coordinate),
            .optimum_value = 0.0,
        };
    }
    throw std::logic_error("make_objective: unhandled objective kind");
}

/// Case-insensitive lookup of a function by name.
inline std::optional<ObjectiveKind> parse_objective_kind(std::string_view name)
{
    const std::string lower = detail::lowercase(name);
    for (const auto& info : detail::kind_table)
        if (info.name == lower)
            return info.kind;
    return std::nullopt;
}

/// Throws config_error for an unknown name.
inline ObjectiveFunction make_objective(std::string_view name, std::size_t dimension)
{
    const auto kind = parse_objective_kind(name);
    if (!kind)
        throw config_error("unknown function '" + std::string(name) + "'");
    return make_objective(*kind, dimension);
}

/// The five benchmark functions, in the order sphere, rosenbrock, rastrigin,
/// griewank, ackley.
inline std::vector<ObjectiveFunction> standard_suite(std::size_t dimension = 30)
{
    std::vector<ObjectiveFunction> out;
    out.reserve(detail::kind_table.size());
    for (const auto& info : detail::kind_table)
        out.push_back(make_objective(info.kind, dimension));
    return out;
}

} // namespace swarmopt

#endif // SWARMOPT_OBJECTIVES_HPP
