#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "boundrat/model.hpp"
#include "boundrat/types.hpp"
#include "boundrat/value_engine.hpp"

namespace boundrat {

struct StepRecord {
    int t = 0;
    PolicyName policy_name;
    Action action;
    Percept percept;
    ValueInterval q_current;  ///< Q of pi_t's action, chain continuation
    ValueInterval q_initial;  ///< Q of the unmodified pi_1 at the same history
};

struct Trajectory {
    std::vector<StepRecord> records;
    std::uint64_t seed = 0;
    std::string model_id;
    std::string kappa_id;
};

/// Runs the policy chain from the model's initial name for `steps` steps,
/// sampling percepts from `rho_true` with a counter-based stream of `seed`.
Trajectory simulate_trajectory(const SelfModModel& model, const Knowledge& kappa,
                               const Belief& rho_true, int steps, std::uint64_t seed,
                               int horizon);

/// One JSON object per record, fields in the order t, policy_name,
/// world_action, percept, q_current_lo, q_current_hi, q_initial_lo,
/// q_initial_hi.
std::string serialize_trajectory(const Trajectory& trajectory, const SelfModModel& model);

/// Q of the non-modifying agent: pi_1's world action at h, continuing with
/// pi_1 forever.
ValueInterval q_initial_policy(const SelfModModel& model, const Knowledge& kappa, HistoryView h,
                               int horizon);

/// The name of the policy deciding at h under the chain from the initial
/// name. Throws ModelError when h is not generated by the chain.
PolicyName chain_policy_at(const SelfModModel& model, HistoryView h);

/// A history of length t - 1 generated by the chain, with its probability.
struct ChainHistory {
    History history;
    double probability = 0.0;
    PolicyName deciding;
};

/// Every on-chain history of length `length` with its probability under
/// kappa.belief (actions forced by the chain, so |E|^length leaves).
std::vector<ChainHistory> chain_histories(const SelfModModel& model, const Knowledge& kappa,
                                          int length);

/// E[Q(h pi_1(h)) - Q(h pi_t(h))] over on-chain histories of length t - 1.
ValueInterval q_gap_expectation(const SelfModModel& model, const Knowledge& kappa, int t,
                                int horizon);

/// Q(h pi_t(h)) - Q(h pi_1(h)) at an on-chain history h.
ValueInterval q_gap_pointwise(const SelfModModel& model, const Knowledge& kappa, HistoryView h,
                              int horizon);

}  // namespace boundrat
