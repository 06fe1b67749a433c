#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace boundrat {

/// Index into the finite set of world actions.
struct WorldAction {
    std::uint32_t id = 0;
    auto operator<=>(const WorldAction&) const = default;
};

/// Opaque policy identifier, resolved through a SelfModModel.
struct PolicyName {
    std::uint32_t id = 0;
    auto operator<=>(const PolicyName&) const = default;
};

struct Percept {
    std::uint32_t id = 0;
    auto operator<=>(const Percept&) const = default;
};

/// An action is a world action together with the name of the policy that
/// decides the next step.
struct Action {
    WorldAction world;
    PolicyName next_policy;
    auto operator<=>(const Action&) const = default;
};

struct Step {
    Action action;
    Percept percept;
    auto operator<=>(const Step&) const = default;
};

using History = std::vector<Step>;
using HistoryView = std::span<const Step>;

struct StrippedStep {
    WorldAction world;
    Percept percept;
    auto operator<=>(const StrippedStep&) const = default;
};

using StrippedHistory = std::vector<StrippedStep>;

StrippedHistory strip_modifications(HistoryView h);

/// Stable byte encoding of the stripped form of h. Equal strings iff equal
/// stripped histories.
std::string stripped_key(HistoryView h);

class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed model: unresolvable names, invalid distributions, histories that
/// are inconsistent with a policy chain.
class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using PerceptDistribution = std::vector<double>;

inline constexpr double kSumTolerance = 1e-12;
inline constexpr double kMinProbability = 1e-15;
inline constexpr double kClampLow = 1e-12;
inline constexpr double kClampHigh = 1.0 - 1e-12;

/// Clamp a probability that a construction wants to be exactly 0 or 1 into
/// [1e-12, 1 - 1e-12].
double clamp_full_support(double p);

/// Full-support conditional distribution over the next percept.
class Belief {
public:
    using Kernel = std::function<PerceptDistribution(HistoryView, const Action&)>;

    Belief(std::size_t percept_count, Kernel kernel, bool modification_independent);

    /// Evaluates and validates the kernel; throws ModelError if the vector has
    /// the wrong size, does not sum to one, or violates full support.
    PerceptDistribution operator()(HistoryView h, const Action& a) const;

    std::size_t percept_count() const { return percept_count_; }
    bool modification_independent() const { return modification_independent_; }

private:
    std::size_t percept_count_;
    Kernel kernel_;
    bool modification_independent_;
};

/// Instantaneous utility u : history -> [0, 1].
///
/// `support_horizon`, when set, declares u(h) = 0 for every history longer
/// than the horizon. The value engine uses it to drop the geometric tail once
/// the truncation horizon covers the support.
class UtilityFunction {
public:
    using Eval = std::function<double(HistoryView)>;

    UtilityFunction(Eval eval, bool modification_independent,
                    std::optional<std::size_t> support_horizon = std::nullopt);

    double operator()(HistoryView h) const;

    bool modification_independent() const { return modification_independent_; }
    std::optional<std::size_t> support_horizon() const { return support_horizon_; }

private:
    Eval eval_;
    bool modification_independent_;
    std::optional<std::size_t> support_horizon_;
};

/// The triple (utility, belief, discount).
struct Knowledge {
    Knowledge(UtilityFunction utility, Belief belief, double discount, std::string id = {});

    UtilityFunction utility;
    Belief belief;
    double discount;
    std::string id;

    bool modification_independent() const {
        return utility.modification_independent() && belief.modification_independent();
    }
};

double tv_distance(std::span<const double> p, std::span<const double> q);

}  // namespace boundrat
