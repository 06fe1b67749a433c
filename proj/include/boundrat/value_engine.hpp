#pragma once

// Discounted value computation over the history tree.
//
// Every value is returned as an enclosure of the infinite-horizon quantity:
// the lower end is the sum of the first T utility terms (exact recursion,
// utilities are non-negative) and the upper end adds the geometric tail
// gamma^T / (1 - gamma) that the remaining terms can contribute at most.
//
// V and Q follow the self-modification semantics: the name chosen at step t
// selects the policy that decides step t + 1.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "boundrat/model.hpp"
#include "boundrat/types.hpp"

namespace boundrat {

struct ValueInterval {
    double lower = 0.0;
    double upper = 0.0;
    int horizon = 0;

    double width() const { return upper - lower; }
    double midpoint() const { return 0.5 * (lower + upper); }
    bool contains(double x, double slack = 0.0) const {
        return lower - slack <= x && x <= upper + slack;
    }
};

/// Interval difference [a.lo - b.hi, a.hi - b.lo].
ValueInterval operator-(const ValueInterval& a, const ValueInterval& b);

/// gamma^T / (1 - gamma).
double geometric_tail(double gamma, int horizon);

/// Smallest T with gamma^T / (1 - gamma) < tolerance.
int auto_horizon(double gamma, double tolerance);

enum class TieBreakMode { lowest_index, adversarial, seeded_random };

/// Resolution of argmax ties in optimal_policy. Actions whose Q is within
/// `tolerance` of the maximum are tied. Adversarial mode picks, among the tied
/// actions, the one with the lowest optimal Q under `truth`; seeded-random
/// mode hashes the seed with the state key (the stripped history when the
/// model has none).
struct TieBreak {
    TieBreakMode mode = TieBreakMode::lowest_index;
    std::shared_ptr<const Knowledge> truth;
    std::uint64_t seed = 0;
    double tolerance = 1e-10;

    static TieBreak lowest_index();
    static TieBreak adversarial(Knowledge truth);
    static TieBreak seeded_random(std::uint64_t seed);
};

/// How the policy after a committed action is determined.
enum class Continuation {
    chain,   ///< the named policy decides, and so on along the chosen names
    frozen,  ///< the named policy decides forever, its own name choices ignored
    optimal  ///< optimal continuation (name irrelevant unless u depends on names)
};

/// V of the chain that starts with `pi` deciding at h.
ValueInterval v_value(const PolicyRule& pi, const Knowledge& kappa, const SelfModModel& model,
                      HistoryView h, int horizon);

/// V of the chain that starts with the policy named `start` deciding at h.
ValueInterval v_value(PolicyName start, const Knowledge& kappa, const SelfModModel& model,
                      HistoryView h, int horizon);

/// Q(h a): expectation over the next percept of u plus the gamma-discounted
/// continuation selected by `continuation` starting from a.next_policy.
ValueInterval q_value(const Knowledge& kappa, const SelfModModel& model, HistoryView h,
                      const Action& a, int horizon,
                      Continuation continuation = Continuation::chain);

/// sup over policies of V at h, by backward induction.
ValueInterval optimal_value(const Knowledge& kappa, const SelfModModel& model, HistoryView h,
                            int horizon);

/// Candidate actions at a decision node: all world actions with `self_name`
/// when kappa is modification-independent, every enumerable name otherwise.
std::vector<Action> decision_candidates(const Knowledge& kappa, const SelfModModel& model,
                                        PolicyName self_name);

/// A rule that at every history maximizes the horizon-T optimal Q (receding
/// horizon). When kappa is modification-independent the rule names
/// `self_name`; otherwise the name is part of the maximization.
PolicyRule optimal_policy(const Knowledge& kappa, const SelfModModel& model, int horizon,
                          TieBreak tie_break, PolicyName self_name = PolicyName{0});

struct Suboptimality {
    /// sup_a Q*(h a) - Q(h pi(h)), continuation of the sup replaced by the
    /// optimal value.
    ValueInterval ideal;
    /// max over (world action, enumerable name) of Q(h a) under the chain
    /// started by that name, minus Q(h pi(h)).
    ValueInterval name_constrained;
    Action chosen;
};

/// The per-history epsilon' of pi: how far pi's action falls below the best
/// available one.
Suboptimality min_suboptimality(const PolicyRule& pi, const Knowledge& kappa,
                                const SelfModModel& model, HistoryView h, int horizon);

/// Total-variation distance between the distributions over the next t steps
/// after h induced by the chain starting with `pi` under two beliefs.
double history_distribution_tv(const PolicyRule& pi, const Belief& rho, const Belief& rho_star,
                               const SelfModModel& model, HistoryView h, int steps);

/// Exhaustive evaluation over deterministic policy tables (no chain semantics:
/// each reachable decision node picks any enumerable action).
///
/// Calls visit(value) with the horizon-limited V of every policy table rooted
/// at h, evaluated simultaneously under both knowledges: visit(v_a, v_b).
void for_each_policy_table(const SelfModModel& model, const Knowledge& a, const Knowledge& b,
                           HistoryView h, int horizon,
                           const std::function<void(double, double)>& visit);

}  // namespace boundrat
