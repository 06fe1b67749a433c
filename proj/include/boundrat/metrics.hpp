#pragma once

// Error metrics between an agent's knowledge and the correct knowledge.
//
// The definitional quantities are suprema over all histories; these functions
// enumerate every history up to a given depth and therefore return lower
// bounds of the sups (exact whenever the compared functions only look at a
// bounded suffix).

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "boundrat/model.hpp"
#include "boundrat/types.hpp"

namespace boundrat {

inline constexpr std::size_t kDefaultNodeBudget = 2'000'000;

/// Node cap for exhaustive enumeration. BOUNDRAT_NODE_BUDGET overrides the
/// default of 2e6.
std::size_t node_budget();

/// Number of histories of length 0..depth over the model's enumerable action
/// and percept sets; saturates instead of overflowing.
std::size_t enumeration_size(const SelfModModel& model, std::size_t depth);

/// Calls visit(h) for every history of length 0..depth (prefix order).
/// Throws BudgetExceeded if the count exceeds `budget`.
void for_each_history(const SelfModModel& model, std::size_t depth,
                      const std::function<void(HistoryView)>& visit,
                      std::size_t budget = node_budget());

/// Every action of the model's enumerable action set, world-major.
std::vector<Action> enumerable_actions(const SelfModModel& model);

/// True iff f agrees (within `tolerance`) on every pair of histories of length
/// <= depth with equal stripped forms.
bool is_modification_independent(const std::function<double(HistoryView)>& f,
                                 const SelfModModel& model, std::size_t depth,
                                 double tolerance = 1e-12);

/// Belief overload: compares the percept vectors of every (history, action)
/// pair whose stripped history and world action agree.
bool is_modification_independent(const Belief& belief, const SelfModModel& model,
                                 std::size_t depth, double tolerance = 1e-12);

/// max |u(h) - u*(h)| over histories of length 1..depth.
double utility_abs_error(const UtilityFunction& u, const UtilityFunction& u_star,
                         const SelfModModel& model, std::size_t depth);

/// max total-variation distance over histories of length < depth and all actions.
double belief_tv_error(const Belief& rho, const Belief& rho_star, const SelfModModel& model,
                       std::size_t depth);

/// Smallest eps with 1/(1+eps) <= rho/rho* <= 1+eps entrywise. `percepts`
/// restricts the check to a subset of the alphabet (all percepts if empty).
double belief_rel_error(const Belief& rho, const Belief& rho_star, const SelfModModel& model,
                        std::size_t depth, const std::vector<Percept>& percepts = {});

}  // namespace boundrat
