#pragma once

// Environment/agent pairs that realize the worst-case and average-case
// losses of the bounded-rationality theorems, parameterized by (eps, gamma).

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "boundrat/model.hpp"
#include "boundrat/types.hpp"
#include "boundrat/value_engine.hpp"

namespace boundrat {

enum class ErrorMode { absolute, relative };

const char* to_string(ErrorMode mode);

/// Which agent a bundle's loss refers to.
enum class AgentKind {
    chain,     ///< the model's policy chain from its initial name
    optimizer  ///< optimal_policy(kappa_agent) with adversarial ties against kappa_true
};

struct ConstructionBundle {
    ConstructionBundle(std::string id_, SelfModModel model_, Knowledge agent, Knowledge truth)
        : id(std::move(id_)), model(std::move(model_)), kappa_agent(std::move(agent)),
          kappa_true(std::move(truth)) {}

    std::string id;
    SelfModModel model;
    Knowledge kappa_agent;
    Knowledge kappa_true;
    double epsilon = 0.0;
    double gamma = 0.5;
    double gamma_star = 0.5;
    double predicted_loss = 0.0;
    std::string loss_formula_id;
    double tightness_factor = 1.0;
    AgentKind agent = AgentKind::optimizer;
    /// Percepts the declared relative belief error refers to (empty: all).
    std::vector<Percept> error_percepts;
};

/// Stable construction identifiers.
const std::vector<std::string>& construction_ids();

/// ceil(b) with b = ln((1 - gamma) eps) / ln gamma + 1; pi_i plays world
/// action 1 iff i < ceil(b).
int chain_switch_index(double eps, double gamma);

/// Deterministic single-percept world, utility = last world action, names
/// pi_1, pi_2, ... (ids 0, 1, ...) with pi_i naming pi_{i+1}.
ConstructionBundle deteriorating_chain(double eps, double gamma);

/// First percept alpha (id 0) with probability eps (1 - gamma), else beta.
/// Utility from step 2 on is 1 iff the step-2 world action is a (id 0).
/// pi_1 plays a and names the gate policy, which plays b right after alpha.
ConstructionBundle expectation_gate(double eps, double gamma);

/// u* = 1 after world action 1 and 1 - 2 eps after 0; the agent's u is 1 - eps.
ConstructionBundle misaligned_pair(double eps, double gamma);

/// u = 1 iff every percept but the latest is 1; rho* keeps percept 1 after
/// action 1 and gives it probability p1 after action 0; the agent believes p2
/// for both actions.
ConstructionBundle ignorant_pair(double eps, double gamma, ErrorMode mode);

/// abs: {max(0, p - eps), min(1, p + eps)}; rel: {p / (1 + eps), min(1, (1 + eps) p)}.
double perturb_probability(double p_star, double eps, ErrorMode mode, bool upward);

/// The binary tree of the average-case belief theorem: rho* keeps percept 1
/// after action 1 and gives it 1 - eps after action 0; the agent's belief in
/// percept 1 is perturbed independently per (node, action) by the two-point
/// scheme of `mode`, seeded by `seed`. With `support_horizon` set the
/// utility vanishes beyond that depth (finite tree for exact evaluation).
ConstructionBundle random_belief_env(double eps, ErrorMode mode, std::uint64_t seed,
                                     double gamma = 0.9,
                                     std::optional<std::size_t> support_horizon = std::nullopt);

/// Single percept, u*(...0) = 1 - 2 eps, u*(...1) = 1; the agent's utility of
/// world action a at time t is drawn from the two-point set per (t, a).
ConstructionBundle random_utility_env(double eps, std::uint64_t seed, double gamma = 0.5);

/// Two committed utility streams built from the discount program's solution:
/// the first world action picks the stream for the rest of time. A
/// gamma-discounting agent is indifferent between them; the gamma*-loss of
/// the worse one equals the program optimum.
ConstructionBundle discount_streams(double gamma, double gamma_star, int horizon);

/// Builds a construction by identifier. `gamma_star` is used by
/// discount-streams only; `seed` by the random constructions.
ConstructionBundle make_construction(const std::string& id, double eps, double gamma,
                                     double gamma_star = 0.0, std::uint64_t seed = 0,
                                     int horizon = 0);

/// The agent a bundle describes, as a policy named by the model's initial name.
PolicyRule agent_policy(const ConstructionBundle& bundle, int horizon);

/// The construction's realized loss under kappa_true: optimal value minus the
/// agent's value at the empty history. For expectation-gate this is the
/// conditional loss after the rare percept, discounted to time 1.
ValueInterval measure_loss(const ConstructionBundle& bundle, int horizon);

struct RandomEnvironmentOptions {
    std::size_t world_actions = 2;
    std::size_t percepts = 2;
    std::size_t states = 3;
    std::optional<std::size_t> support_horizon;
    double gamma = 0.5;
    double min_probability = 0.05;
    /// Extra world actions that behave exactly like world action 0 (exact ties).
    std::size_t duplicate_actions = 0;
};

/// Finite-state environment with random tables: a hidden state follows a
/// deterministic transition of (state, world action, percept), utility and
/// percept probabilities depend on the state. Modification-independent; the
/// returned model has a single name and a state key but no policy yet.
struct RandomEnvironment {
    SelfModModel model;
    Knowledge kappa;
};

RandomEnvironment random_environment(std::uint64_t seed, const RandomEnvironmentOptions& options);

/// A belief within total variation `eps` of `base` at every node: per
/// (state key, action) some mass moves between two percepts. Requires a model
/// with a state key.
Belief perturbed_belief(const Belief& base, const SelfModModel& model, double eps,
                        std::uint64_t seed);

/// Utility within `eps` of `base`, perturbed per (state key).
UtilityFunction perturbed_utility(const UtilityFunction& base, const SelfModModel& model,
                                  double eps, std::uint64_t seed);

/// Average-case belief experiment, one replica: the agent plans over the
/// depth-`depth` tree with its perturbed belief (ties go to world action 0),
/// and the returned value is the true discounted utility lost over the first
/// `depth` steps. Exact branch-and-bound; no sampling beyond the perturbation.
struct BeliefReplica {
    double loss = 0.0;
    std::vector<std::uint32_t> actions;  ///< planned world actions on the surviving path
};

BeliefReplica sample_random_belief_loss(ErrorMode mode, double eps, double gamma, int depth,
                                        std::uint64_t seed);

/// Average-case utility experiment, one replica over `depth` steps.
double sample_random_utility_loss(double eps, double gamma, int depth, std::uint64_t seed);

/// The agent's perturbed utility value for world action `a` at step t (1-based).
double random_utility_value(double eps, std::uint64_t seed, int t, std::uint32_t a);

}  // namespace boundrat
