#include "boundrat/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

#include "boundrat/bounds.hpp"
#include "boundrat/rng.hpp"
#include "boundrat/selfmod.hpp"

namespace boundrat {

const char* to_string(ErrorMode mode) { return mode == ErrorMode::absolute ? "abs" : "rel"; }

const std::vector<std::string>& construction_ids() {
    static const std::vector<std::string> ids = {
        "det-chain",         "expectation-gate",  "misaligned",    "ignorant-abs",     "ignorant-rel",
        "random-belief-abs", "random-belief-rel", "random-utility", "discount-streams"};
    return ids;
}

namespace {

constexpr std::uint32_t kLastAction = 2;  // state key of the empty history

void require(bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument(what);
}

void require_gamma(double gamma) { require(gamma > 0.0 && gamma < 1.0, "gamma must lie in (0, 1)"); }

Belief single_percept() {
    return Belief(1, [](HistoryView, const Action&) { return PerceptDistribution{1.0}; }, true);
}

PerceptDistribution binary(double p1) {
    p1 = clamp_full_support(p1);
    return {1.0 - p1, p1};
}

std::uint64_t last_action_key(HistoryView h) {
    return h.empty() ? kLastAction : h.back().action.world.id;
}

// 1 iff every percept except the latest is 1.
double survived(HistoryView h) {
    for (std::size_t i = 0; i + 1 < h.size(); ++i)
        if (h[i].percept.id != 1) return 0.0;
    return 1.0;
}

std::uint64_t survival_key(HistoryView h) {
    if (h.empty()) return 0;
    return 1 + 2 * static_cast<std::uint64_t>(survived(h)) + (h.back().percept.id == 1 ? 1 : 0);
}

PolicyRule constant_policy(std::uint32_t world, std::uint32_t next) {
    return PolicyRule([world, next](HistoryView) { return Action{WorldAction{world}, PolicyName{next}}; },
                      true);
}

SelfModModel optimizer_model(std::string id, std::size_t worlds, std::size_t percepts) {
    return SelfModModel::bare(std::move(id), worlds, percepts, 1);
}

rng::PathHash node_hash(std::uint64_t seed, HistoryView h) {
    rng::PathHash node(seed);
    for (const Step& s : h) node = node.extend(s.action.world.id, s.percept.id);
    return node;
}

}  // namespace

int chain_switch_index(double eps, double gamma) {
    require_gamma(gamma);
    require(eps > 0.0 && eps <= 1.0 / (1.0 - gamma) + 1e-12, "det-chain needs 0 < eps <= 1/(1-gamma)");
    double b = std::log((1.0 - gamma) * eps) / std::log(gamma) + 1.0;
    return std::max(1, static_cast<int>(std::ceil(b - 1e-9)));
}

ConstructionBundle deteriorating_chain(double eps, double gamma) {
    int switch_at = chain_switch_index(eps, gamma);
    constexpr std::size_t kNames = std::size_t{1} << 30;
    SelfModModel model("det-chain", 2, 1, kNames,
                       [switch_at](PolicyName n) -> std::shared_ptr<const PolicyRule> {
                           std::uint32_t world = static_cast<int>(n.id) + 1 < switch_at ? 1 : 0;
                           std::uint32_t next = std::min<std::uint32_t>(n.id + 1, kNames - 1);
                           return std::make_shared<const PolicyRule>(constant_policy(world, next));
                       },
                       PolicyName{0});
    model.set_state_key(last_action_key)
        .set_enumeration_name_limit(2)
        .set_labeler([](PolicyName n) { return "pi_" + std::to_string(n.id + 1); });

    UtilityFunction u([](HistoryView h) { return static_cast<double>(h.back().action.world.id); }, true);
    Knowledge kappa(u, single_percept(), gamma, "det-chain");
    ConstructionBundle b{"det-chain", model, kappa, kappa};
    b.epsilon = eps;
    b.gamma = b.gamma_star = gamma;
    b.predicted_loss = std::pow(gamma, switch_at - 1) / (1.0 - gamma);
    b.loss_formula_id = "f_opt";
    b.tightness_factor = 1.0 / gamma;
    b.agent = AgentKind::chain;
    return b;
}

ConstructionBundle expectation_gate(double eps, double gamma) {
    require_gamma(gamma);
    double p_alpha = eps * (1.0 - gamma);
    require(eps > 0.0 && p_alpha < 1.0, "expectation-gate needs 0 < eps(1-gamma) < 1");
    constexpr std::uint32_t a = 0, b = 1, alpha = 0;

    std::vector<PolicyRule> policies;
    policies.push_back(constant_policy(a, 1));
    policies.push_back(PolicyRule(
        [](HistoryView h) {
            bool after_alpha = h.size() == 1 && h[0].percept.id == alpha;
            return Action{WorldAction{after_alpha ? b : a}, PolicyName{1}};
        },
        true));
    policies.push_back(constant_policy(a, 2));
    SelfModModel model = SelfModModel::with_policies("expectation-gate", 2, 2, std::move(policies));
    model.set_state_key([](HistoryView h) -> std::uint64_t {
        std::uint64_t len = std::min<std::size_t>(h.size(), 2);
        std::uint64_t first = h.empty() ? 0 : h[0].percept.id;
        std::uint64_t second = h.size() >= 2 ? h[1].action.world.id : 0;
        return len * 4 + first * 2 + second;
    });
    model.set_labeler([](PolicyName n) {
        static const char* names[] = {"pi_1", "pi_gate", "always_a"};
        return std::string(names[n.id]);
    });

    UtilityFunction u([](HistoryView h) { return h.size() >= 2 && h[1].action.world.id == a ? 1.0 : 0.0; },
                      true);
    Belief rho(2, [p_alpha](HistoryView, const Action&) { return PerceptDistribution{p_alpha, 1.0 - p_alpha}; },
               true);
    Knowledge kappa(u, rho, gamma, "expectation-gate");
    ConstructionBundle bundle{"expectation-gate", model, kappa, kappa};
    bundle.epsilon = eps;
    bundle.gamma = bundle.gamma_star = gamma;
    bundle.predicted_loss = gamma / (1.0 - gamma);
    bundle.loss_formula_id = "expectation-gate";
    bundle.agent = AgentKind::chain;
    return bundle;
}

ConstructionBundle misaligned_pair(double eps, double gamma) {
    require_gamma(gamma);
    require(eps >= 0.0 && eps <= 0.5, "misaligned needs 0 <= eps <= 1/2");
    SelfModModel model = optimizer_model("misaligned", 2, 1);
    model.set_state_key(last_action_key);
    UtilityFunction u_star(
        [eps](HistoryView h) { return h.back().action.world.id == 1 ? 1.0 : 1.0 - 2.0 * eps; }, true);
    UtilityFunction u([eps](HistoryView) { return 1.0 - eps; }, true);
    ConstructionBundle b{"misaligned", model, Knowledge(u, single_percept(), gamma, "misaligned-agent"),
                         Knowledge(u_star, single_percept(), gamma, "misaligned-true")};
    b.epsilon = eps;
    b.gamma = b.gamma_star = gamma;
    b.predicted_loss = f_util(eps, gamma);
    b.loss_formula_id = "f_util";
    b.tightness_factor = 1.0;
    return b;
}

ConstructionBundle ignorant_pair(double eps, double gamma, ErrorMode mode) {
    require_gamma(gamma);
    double p1 = 0.0, p2 = 0.0;
    if (mode == ErrorMode::absolute) {
        require(eps >= 0.0 && eps <= 0.5, "ignorant-abs needs 0 <= eps <= 1/2");
        p1 = 1.0 - 2.0 * eps;
        p2 = 1.0 - eps;
    } else {
        require(eps >= 0.0, "ignorant-rel needs eps >= 0");
        p1 = 1.0 / ((1.0 + eps) * (1.0 + eps));
        p2 = 1.0 / (1.0 + eps);
    }
    std::string id = mode == ErrorMode::absolute ? "ignorant-abs" : "ignorant-rel";
    SelfModModel model = optimizer_model(id, 2, 2);
    model.set_state_key(survival_key);
    UtilityFunction u(survived, true);
    Belief rho_star(2, [p1](HistoryView, const Action& a) { return binary(a.world.id == 1 ? 1.0 : p1); },
                    true);
    Belief rho(2, [p2](HistoryView, const Action&) { return binary(p2); }, true);
    ConstructionBundle b{id, model, Knowledge(u, rho, gamma, id + "-agent"),
                         Knowledge(u, rho_star, gamma, id + "-true")};
    b.epsilon = eps;
    b.gamma = b.gamma_star = gamma;
    b.predicted_loss = 1.0 / (1.0 - gamma) - 1.0 / (1.0 - gamma * p1);
    b.loss_formula_id = "f_bel";
    b.tightness_factor = mode == ErrorMode::absolute ? 2.0 : 4.0;
    if (mode == ErrorMode::relative) b.error_percepts = {Percept{1}};
    return b;
}

double perturb_probability(double p_star, double eps, ErrorMode mode, bool upward) {
    if (mode == ErrorMode::absolute)
        return upward ? std::min(1.0, p_star + eps) : std::max(0.0, p_star - eps);
    return upward ? std::min(1.0, (1.0 + eps) * p_star) : p_star / (1.0 + eps);
}

namespace {

double random_belief_true(double eps, std::uint32_t world) { return world == 1 ? 1.0 : 1.0 - eps; }

bool random_belief_upward(const rng::PathHash& node, std::uint32_t world) {
    return (node.draw(world) & 1U) != 0;
}

double random_belief_bound(double eps, double gamma, ErrorMode mode) {
    double shrink = mode == ErrorMode::absolute ? eps / 8.0 : eps / 16.0;
    return 1.0 / (1.0 - gamma) - 1.0 / (1.0 - gamma * (1.0 - shrink));
}

}  // namespace

ConstructionBundle random_belief_env(double eps, ErrorMode mode, std::uint64_t seed, double gamma,
                                     std::optional<std::size_t> support_horizon) {
    require_gamma(gamma);
    if (mode == ErrorMode::absolute)
        require(eps >= 0.0 && eps <= 0.5, "random-belief-abs needs 0 <= eps <= 1/2");
    else
        require(eps >= 0.0 && eps < 1.0, "random-belief-rel needs 0 <= eps < 1");
    std::string id = std::string("random-belief-") + to_string(mode);
    SelfModModel model = optimizer_model(id, 2, 2);
    UtilityFunction u(survived, true, support_horizon);
    Belief rho_star(2, [eps](HistoryView, const Action& a) {
        return binary(random_belief_true(eps, a.world.id));
    }, true);
    Belief rho(2, [eps, mode, seed](HistoryView h, const Action& a) {
        rng::PathHash node = node_hash(seed, h);
        double p = perturb_probability(random_belief_true(eps, a.world.id), eps, mode,
                                       random_belief_upward(node, a.world.id));
        return binary(p);
    }, true);
    ConstructionBundle b{id, model, Knowledge(u, rho, gamma, id + "-agent"),
                         Knowledge(u, rho_star, gamma, id + "-true")};
    b.epsilon = eps;
    b.gamma = b.gamma_star = gamma;
    b.predicted_loss = random_belief_bound(eps, gamma, mode);
    b.loss_formula_id = "f_bel";
    b.tightness_factor = mode == ErrorMode::absolute ? 16.0 : 32.0;
    if (mode == ErrorMode::relative) b.error_percepts = {Percept{1}};
    return b;
}

double random_utility_value(double eps, std::uint64_t seed, int t, std::uint32_t a) {
    double u_star = a == 1 ? 1.0 : 1.0 - 2.0 * eps;
    bool up = (rng::derive(rng::derive(seed, static_cast<std::uint64_t>(t)), a) & 1U) != 0;
    return up ? std::min(1.0, u_star + eps) : std::max(0.0, u_star - eps);
}

ConstructionBundle random_utility_env(double eps, std::uint64_t seed, double gamma) {
    require_gamma(gamma);
    require(eps >= 0.0 && eps <= 0.5, "random-utility needs 0 <= eps <= 1/2");
    SelfModModel model = optimizer_model("random-utility", 2, 1);
    model.set_state_key([](HistoryView h) { return 3 * static_cast<std::uint64_t>(h.size()) + last_action_key(h); });
    UtilityFunction u_star(
        [eps](HistoryView h) { return h.back().action.world.id == 1 ? 1.0 : 1.0 - 2.0 * eps; }, true);
    UtilityFunction u([eps, seed](HistoryView h) {
        return random_utility_value(eps, seed, static_cast<int>(h.size()), h.back().action.world.id);
    }, true);
    ConstructionBundle b{"random-utility", model,
                         Knowledge(u, single_percept(), gamma, "random-utility-agent"),
                         Knowledge(u_star, single_percept(), gamma, "random-utility-true")};
    b.epsilon = eps;
    b.gamma = b.gamma_star = gamma;
    b.predicted_loss = eps / (2.0 * (1.0 - gamma));
    b.loss_formula_id = "f_util";
    b.tightness_factor = 4.0;
    return b;
}

ConstructionBundle discount_streams(double gamma, double gamma_star, int horizon) {
    DiscountProgramSolution sol = solve_discount_program(gamma, gamma_star, horizon);
    auto delta = std::make_shared<const std::vector<double>>(sol.delta_u);
    SelfModModel model = optimizer_model("discount-streams", 2, 1);
    std::uint64_t span = static_cast<std::uint64_t>(horizon) + 2;
    model.set_state_key([span](HistoryView h) -> std::uint64_t {
        std::uint64_t first = h.empty() ? kLastAction : h[0].action.world.id;
        return first * span + std::min<std::uint64_t>(h.size(), span - 1);
    });
    UtilityFunction u(
        [delta](HistoryView h) {
            double d = (*delta)[h.size() - 1];
            return h[0].action.world.id == 1 ? std::max(d, 0.0) : std::max(-d, 0.0);
        },
        true, static_cast<std::size_t>(horizon));
    ConstructionBundle b{"discount-streams", model,
                         Knowledge(u, single_percept(), gamma, "discount-streams-agent"),
                         Knowledge(u, single_percept(), gamma_star, "discount-streams-true")};
    b.epsilon = 0.0;
    b.gamma = gamma;
    b.gamma_star = gamma_star;
    b.predicted_loss = sol.epsilon;
    b.loss_formula_id = "f_disc";
    b.tightness_factor = 1.0;
    return b;
}

ConstructionBundle make_construction(const std::string& id, double eps, double gamma,
                                     double gamma_star, std::uint64_t seed, int horizon) {
    if (id == "det-chain") return deteriorating_chain(eps, gamma);
    if (id == "expectation-gate") return expectation_gate(eps, gamma);
    if (id == "misaligned") return misaligned_pair(eps, gamma);
    if (id == "ignorant-abs") return ignorant_pair(eps, gamma, ErrorMode::absolute);
    if (id == "ignorant-rel") return ignorant_pair(eps, gamma, ErrorMode::relative);
    std::optional<std::size_t> support;
    if (horizon > 0) support = static_cast<std::size_t>(horizon);
    if (id == "random-belief-abs") return random_belief_env(eps, ErrorMode::absolute, seed, gamma, support);
    if (id == "random-belief-rel") return random_belief_env(eps, ErrorMode::relative, seed, gamma, support);
    if (id == "random-utility") return random_utility_env(eps, seed, gamma);
    if (id == "discount-streams") {
        int t = horizon > 0 ? horizon : auto_horizon(gamma_star, 1e-9);
        return discount_streams(gamma, gamma_star, t);
    }
    throw std::invalid_argument("unknown construction id: " + id);
}

PolicyRule agent_policy(const ConstructionBundle& bundle, int horizon) {
    if (bundle.agent == AgentKind::chain) return *bundle.model.resolve(bundle.model.initial());
    return optimal_policy(bundle.kappa_agent, bundle.model, horizon,
                          TieBreak::adversarial(bundle.kappa_true), bundle.model.initial());
}

ValueInterval measure_loss(const ConstructionBundle& bundle, int horizon) {
    SelfModModel model = bundle.model;
    if (bundle.agent == AgentKind::optimizer)
        model = model.with_policies({agent_policy(bundle, horizon)}, PolicyName{0});
    const Knowledge& truth = bundle.kappa_true;
    if (bundle.id == "expectation-gate") {
        // The agent's history after the rare first percept.
        History h{{Action{WorldAction{0}, PolicyName{1}}, Percept{0}}};
        ValueInterval gap = optimal_value(truth, model, h, horizon) -
                            v_value(chain_policy_at(model, h), truth, model, h, horizon);
        return {bundle.gamma * gap.lower, bundle.gamma * gap.upper, horizon};
    }
    History empty;
    return optimal_value(truth, model, empty, horizon) -
           v_value(model.initial(), truth, model, empty, horizon);
}

RandomEnvironment random_environment(std::uint64_t seed, const RandomEnvironmentOptions& o) {
    require_gamma(o.gamma);
    require(o.world_actions > 0 && o.percepts > 0 && o.states > 0, "random environment needs non-empty sets");
    require(o.min_probability * static_cast<double>(o.percepts) < 1.0, "min_probability too large");
    std::size_t cells = o.states * o.world_actions;
    std::uint64_t counter = 0;
    auto next = [&] { return rng::to_unit(rng::derive(seed, counter++)); };

    auto transition = std::make_shared<std::vector<std::uint32_t>>(cells * o.percepts);
    auto reward = std::make_shared<std::vector<double>>(cells * o.percepts);
    auto probs = std::make_shared<std::vector<double>>(cells * o.percepts);
    for (auto& s : *transition)
        s = std::min<std::uint32_t>(static_cast<std::uint32_t>(next() * o.states), o.states - 1);
    for (double& r : *reward) r = next();
    for (std::size_t c = 0; c < cells; ++c) {
        std::vector<double> raw(o.percepts);
        double sum = 0.0;
        for (double& x : raw) sum += (x = 0.05 + next());
        double free = 1.0 - o.min_probability * static_cast<double>(o.percepts);
        double total = 0.0;
        for (std::size_t e = 0; e < o.percepts; ++e) {
            double p = o.min_probability + free * raw[e] / sum;
            (*probs)[c * o.percepts + e] = p;
            total += p;
        }
        // Push the rounding residue into the first entry so rows sum to 1.
        (*probs)[c * o.percepts] += 1.0 - total;
    }

    std::size_t na = o.world_actions, ne = o.percepts;
    auto cell = [na](std::uint32_t s, std::uint32_t a) { return s * na + (a < na ? a : 0); };
    auto state_of = [transition, cell, ne](HistoryView h) {
        std::uint32_t s = 0;
        for (const Step& st : h) s = (*transition)[cell(s, st.action.world.id) * ne + st.percept.id];
        return s;
    };
    SelfModModel model = SelfModModel::bare("random-env-" + std::to_string(seed),
                                            na + o.duplicate_actions, ne, 1);
    std::uint64_t span = o.support_horizon ? *o.support_horizon + 2 : 1;
    model.set_state_key([state_of, span](HistoryView h) -> std::uint64_t {
        return state_of(h) * span + std::min<std::uint64_t>(h.size(), span - 1);
    });
    UtilityFunction u(
        [state_of, reward, cell, ne](HistoryView h) {
            std::uint32_t s = state_of(h.first(h.size() - 1));
            const Step& last = h.back();
            return (*reward)[cell(s, last.action.world.id) * ne + last.percept.id];
        },
        true, o.support_horizon);
    Belief rho(ne, [state_of, probs, cell, ne](HistoryView h, const Action& a) {
        std::size_t base = cell(state_of(h), a.world.id) * ne;
        return PerceptDistribution(probs->begin() + base, probs->begin() + base + ne);
    }, true);
    return {model, Knowledge(u, rho, o.gamma, "random-env-" + std::to_string(seed))};
}

Belief perturbed_belief(const Belief& base, const SelfModModel& model, double eps,
                        std::uint64_t seed) {
    require(model.has_state_key(), "perturbed_belief needs a model with a state key");
    require(eps >= 0.0, "perturbed_belief needs eps >= 0");
    std::size_t ne = base.percept_count();
    return Belief(ne, [base, model, eps, seed, ne](HistoryView h, const Action& a) {
        PerceptDistribution p = base(h, a);
        if (ne < 2) return p;
        std::uint64_t r = rng::derive(rng::derive(seed, model.state_key(h)), a.world.id);
        std::size_t from = r % ne;
        std::size_t to = (from + 1 + (r >> 16) % (ne - 1)) % ne;
        double amount = std::min(eps, 0.5 * p[from]);
        p[from] -= amount;
        p[to] += amount;
        return p;
    }, base.modification_independent());
}

UtilityFunction perturbed_utility(const UtilityFunction& base, const SelfModModel& model,
                                  double eps, std::uint64_t seed) {
    require(model.has_state_key(), "perturbed_utility needs a model with a state key");
    require(eps >= 0.0, "perturbed_utility needs eps >= 0");
    return UtilityFunction(
        [base, model, eps, seed](HistoryView h) {
            const Step& last = h.back();
            std::uint64_t r = rng::derive(rng::derive(seed, model.state_key(h.first(h.size() - 1))),
                                          (std::uint64_t{last.action.world.id} << 32) | last.percept.id);
            double shift = (r & 1U) ? eps : -eps;
            return std::clamp(base(h) + shift, 0.0, 1.0);
        },
        base.modification_independent(), base.support_horizon());
}

namespace {

// Depth-first branch-and-bound over the agent's believed tree. Only the
// all-ones percept path carries utility, so the tree branches on actions only.
class BeliefPlanner {
public:
    BeliefPlanner(ErrorMode mode, double eps, double gamma, int depth, std::uint64_t seed)
        : mode_(mode), eps_(eps), gamma_(gamma), depth_(depth), root_(seed) {
        // rest_[k]: sum of gamma^j for j = k .. depth - 1.
        rest_.assign(depth + 1, 0.0);
        for (int k = depth - 1; k >= 0; --k) rest_[k] = rest_[k + 1] + std::pow(gamma, k);
        powers_.resize(depth + 1);
        for (int k = 0; k <= depth; ++k) powers_[k] = std::pow(gamma, k);
    }

    std::vector<std::uint32_t> plan() {
        best_ = -1.0;
        maximize(root_, 0, 0.0, 1.0);
        target_ = best_ - kTieTolerance * std::max(1.0, best_);
        path_.clear();
        if (!first_reaching(root_, 0, 0.0, 1.0)) throw std::logic_error("planner lost its optimum");
        return path_;
    }

private:
    static constexpr double kTieTolerance = 1e-12;

    double believed(const rng::PathHash& node, std::uint32_t a) const {
        return perturb_probability(random_belief_true(eps_, a), eps_, mode_, random_belief_upward(node, a));
    }

    // gained: sum of gamma^j P_j for j < k; mass: P_k.
    void maximize(const rng::PathHash& node, int k, double gained, double mass) {
        if (k == depth_) {
            best_ = std::max(best_, gained);
            return;
        }
        if (gained + mass * rest_[k] <= best_) return;
        double here = gained + mass * powers_[k];
        double p0 = believed(node, 0), p1 = believed(node, 1);
        std::uint32_t first = p1 > p0 ? 1 : 0;
        for (std::uint32_t a : {first, 1 - first}) {
            double p = a == 0 ? p0 : p1;
            maximize(node.extend(a, 1), k + 1, here, mass * p);
        }
    }

    bool first_reaching(const rng::PathHash& node, int k, double gained, double mass) {
        if (k == depth_) return gained >= target_;
        if (gained + mass * rest_[k] < target_) return false;
        double here = gained + mass * powers_[k];
        for (std::uint32_t a : {0U, 1U}) {
            path_.push_back(a);
            if (first_reaching(node.extend(a, 1), k + 1, here, mass * believed(node, a))) return true;
            path_.pop_back();
        }
        return false;
    }

    ErrorMode mode_;
    double eps_;
    double gamma_;
    int depth_;
    rng::PathHash root_;
    std::vector<double> rest_;
    std::vector<double> powers_;
    double best_ = -1.0;
    double target_ = 0.0;
    std::vector<std::uint32_t> path_;
};

}  // namespace

BeliefReplica sample_random_belief_loss(ErrorMode mode, double eps, double gamma, int depth,
                                        std::uint64_t seed) {
    require_gamma(gamma);
    require(depth >= 1, "depth must be >= 1");
    BeliefReplica out;
    if (eps == 0.0) {
        out.actions.assign(depth, 0);
        return out;
    }
    out.actions = BeliefPlanner(mode, eps, gamma, depth, seed).plan();
    double survive = 1.0, weight = 1.0;
    for (int k = 0; k < depth; ++k) {
        out.loss += weight * (1.0 - survive);
        if (out.actions[k] == 0) survive *= random_belief_true(eps, 0);
        weight *= gamma;
    }
    return out;
}

double sample_random_utility_loss(double eps, double gamma, int depth, std::uint64_t seed) {
    require_gamma(gamma);
    double loss = 0.0, weight = 1.0;
    for (int t = 1; t <= depth; ++t) {
        double u0 = random_utility_value(eps, seed, t, 0);
        double u1 = random_utility_value(eps, seed, t, 1);
        // Ties go to the action that is worse under the true utility.
        if (u0 >= u1 - 1e-12) loss += weight * 2.0 * eps;
        weight *= gamma;
    }
    return loss;
}

}  // namespace boundrat
