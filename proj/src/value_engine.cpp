#include "boundrat/value_engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <mutex>
#include <string>
#include <unordered_map>
#include <utility>

#include "boundrat/metrics.hpp"
#include "boundrat/rng.hpp"

namespace boundrat {

ValueInterval operator-(const ValueInterval& a, const ValueInterval& b) {
    return {a.lower - b.upper, a.upper - b.lower, std::min(a.horizon, b.horizon)};
}

double geometric_tail(double gamma, int horizon) {
    return std::pow(gamma, horizon) / (1.0 - gamma);
}

int auto_horizon(double gamma, double tolerance) {
    if (!(tolerance > 0.0)) throw std::invalid_argument("auto_horizon: tolerance must be positive");
    int t = std::max(0, static_cast<int>(std::ceil(std::log(tolerance * (1.0 - gamma)) / std::log(gamma))));
    while (t > 0 && geometric_tail(gamma, t - 1) < tolerance) --t;
    while (!(geometric_tail(gamma, t) < tolerance)) ++t;
    return t;
}

TieBreak TieBreak::lowest_index() { return TieBreak{}; }

TieBreak TieBreak::adversarial(Knowledge truth) {
    TieBreak tb;
    tb.mode = TieBreakMode::adversarial;
    tb.truth = std::make_shared<const Knowledge>(std::move(truth));
    return tb;
}

TieBreak TieBreak::seeded_random(std::uint64_t seed) {
    TieBreak tb;
    tb.mode = TieBreakMode::seeded_random;
    tb.seed = seed;
    return tb;
}

namespace {

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

double tail_for(const Knowledge& kappa, std::size_t length, int horizon) {
    auto support = kappa.utility.support_horizon();
    if (support && length + static_cast<std::size_t>(horizon) >= *support) return 0.0;
    return geometric_tail(kappa.discount, horizon);
}

ValueInterval enclose(double lower, const Knowledge& kappa, std::size_t length, int horizon) {
    return {lower, lower + tail_for(kappa, length, horizon), horizon};
}

// Recursive evaluator with a memo table. Not thread-safe; callers that share
// one across threads serialize access.
class Evaluator {
public:
    Evaluator(const Knowledge& kappa, const SelfModModel& model)
        : kappa_(kappa), model_(model), mod_indep_(kappa.modification_independent()) {}

    void reset_budget() {
        charged_ = 0;
        budget_ = node_budget();
    }

    double chain(History& h, PolicyName name, int d) {
        if (done(h, d)) return 0.0;
        d = effective_depth(h, d);
        auto rule = model_.resolve(name);
        std::string key;
        if (rule->key_determined()) {
            key = memo_key(h, 'c', d, name.id);
            if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        }
        Action a = (*rule)(h);
        check_action(a);
        double v = q_chain(h, a, d);
        if (!key.empty()) memo_.emplace(std::move(key), v);
        return v;
    }

    double q_chain(History& h, const Action& a, int d) {
        return expect(h, a, d, [&](History& next) { return chain(next, a.next_policy, d - 1); });
    }

    double frozen(History& h, PolicyName name, int d) {
        if (done(h, d)) return 0.0;
        d = effective_depth(h, d);
        auto rule = model_.resolve(name);
        std::string key;
        if (rule->key_determined()) {
            key = memo_key(h, 'f', d, name.id);
            if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        }
        Action a = (*rule)(h);
        check_action(a);
        double v = q_frozen(h, Action{a.world, name}, d);
        if (!key.empty()) memo_.emplace(std::move(key), v);
        return v;
    }

    double q_frozen(History& h, const Action& a, int d) {
        return expect(h, a, d, [&](History& next) { return frozen(next, a.next_policy, d - 1); });
    }

    double optimal(History& h, int d) {
        if (done(h, d)) return 0.0;
        d = effective_depth(h, d);
        std::string key = memo_key(h, 'o', d, 0);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        double best = -std::numeric_limits<double>::infinity();
        for (const Action& a : candidates()) best = std::max(best, q_optimal(h, a, d));
        memo_.emplace(std::move(key), best);
        return best;
    }

    double q_optimal(History& h, const Action& a, int d) {
        return expect(h, a, d, [&](History& next) { return optimal(next, d - 1); });
    }

    double q(History& h, const Action& a, int d, Continuation c) {
        switch (c) {
            case Continuation::chain: return q_chain(h, a, d);
            case Continuation::frozen: return q_frozen(h, a, d);
            case Continuation::optimal: return q_optimal(h, a, d);
        }
        return 0.0;
    }

    const std::vector<Action>& candidates() {
        if (candidates_.empty()) candidates_ = decision_candidates(kappa_, model_, PolicyName{0});
        return candidates_;
    }

private:
    bool done(HistoryView h, int d) const {
        if (d <= 0) return true;
        auto support = kappa_.utility.support_horizon();
        return support && h.size() >= *support;
    }

    // Steps beyond the utility's support add nothing, so depths past it share
    // memo entries.
    int effective_depth(HistoryView h, int d) const {
        auto support = kappa_.utility.support_horizon();
        if (!support) return d;
        return static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(d), *support - h.size()));
    }

    void check_action(const Action& a) const {
        if (!model_.valid_world(a.world)) throw ModelError("policy returned an invalid world action");
        if (!model_.valid_name(a.next_policy)) throw ModelError("policy returned an invalid name");
    }

    template <class Continue>
    double expect(History& h, const Action& a, int d, Continue&& cont) {
        if (++charged_ > budget_)
            throw BudgetExceeded("value recursion exceeded node budget " + std::to_string(budget_));
        PerceptDistribution p = kappa_.belief(h, a);
        double total = 0.0;
        for (std::uint32_t e = 0; e < p.size(); ++e) {
            h.push_back({a, Percept{e}});
            double v = kappa_.utility(h);
            if (d > 1) v += kappa_.discount * cont(h);
            h.pop_back();
            total += p[e] * v;
        }
        return total;
    }

    std::string memo_key(HistoryView h, char kind, int d, std::uint32_t name) const {
        std::string key(1 + sizeof(int) + sizeof(std::uint32_t), '\0');
        key[0] = kind;
        std::memcpy(key.data() + 1, &d, sizeof d);
        std::memcpy(key.data() + 1 + sizeof d, &name, sizeof name);
        if (model_.has_state_key()) {
            std::uint64_t s = model_.state_key(h);
            key.append(reinterpret_cast<const char*>(&s), sizeof s);
        } else if (mod_indep_) {
            key += stripped_key(h);
        } else {
            key += stripped_key(h);
            for (const Step& s : h) key.append(reinterpret_cast<const char*>(&s.action.next_policy.id), 4);
        }
        return key;
    }

    const Knowledge& kappa_;
    const SelfModModel& model_;
    bool mod_indep_;
    std::unordered_map<std::string, double> memo_;
    std::vector<Action> candidates_;
    std::size_t charged_ = 0;
    std::size_t budget_ = node_budget();
};

History to_history(HistoryView h) { return History(h.begin(), h.end()); }

}  // namespace

ValueInterval v_value(const PolicyRule& pi, const Knowledge& kappa, const SelfModModel& model,
                      HistoryView h, int horizon) {
    History buf = to_history(h);
    Evaluator ev(kappa, model);
    auto support = kappa.utility.support_horizon();
    double lower = 0.0;
    if (horizon > 0 && !(support && h.size() >= *support)) lower = ev.q_chain(buf, pi(h), horizon);
    return enclose(lower, kappa, h.size(), horizon);
}

ValueInterval v_value(PolicyName start, const Knowledge& kappa, const SelfModModel& model,
                      HistoryView h, int horizon) {
    History buf = to_history(h);
    Evaluator ev(kappa, model);
    return enclose(ev.chain(buf, start, horizon), kappa, h.size(), horizon);
}

ValueInterval q_value(const Knowledge& kappa, const SelfModModel& model, HistoryView h,
                      const Action& a, int horizon, Continuation continuation) {
    History buf = to_history(h);
    Evaluator ev(kappa, model);
    auto support = kappa.utility.support_horizon();
    double lower = 0.0;
    if (horizon > 0 && !(support && h.size() >= *support)) lower = ev.q(buf, a, horizon, continuation);
    return enclose(lower, kappa, h.size(), horizon);
}

ValueInterval optimal_value(const Knowledge& kappa, const SelfModModel& model, HistoryView h,
                            int horizon) {
    History buf = to_history(h);
    Evaluator ev(kappa, model);
    return enclose(ev.optimal(buf, horizon), kappa, h.size(), horizon);
}

std::vector<Action> decision_candidates(const Knowledge& kappa, const SelfModModel& model,
                                        PolicyName self_name) {
    if (!kappa.modification_independent()) return enumerable_actions(model);
    std::vector<Action> out;
    for (std::uint32_t w = 0; w < model.world_action_count(); ++w)
        out.push_back({WorldAction{w}, self_name});
    return out;
}

namespace {

struct OptimalPolicyState {
    OptimalPolicyState(const Knowledge& k, const SelfModModel& m, int t, TieBreak b, PolicyName s)
        : kappa(k), model(m), horizon(t), tie_break(std::move(b)), self(s), eval(kappa, model) {
        if (tie_break.mode == TieBreakMode::adversarial) {
            if (!tie_break.truth) throw ModelError("adversarial tie-break without a true knowledge");
            truth_eval.emplace(*tie_break.truth, model);
        }
        candidates = decision_candidates(kappa, model, self);
    }

    Action decide(HistoryView h) {
        std::lock_guard lock(mu);
        History buf = to_history(h);
        auto support = kappa.utility.support_horizon();
        if (support && h.size() >= *support) return candidates.front();
        eval.reset_budget();
        std::vector<double> qs;
        qs.reserve(candidates.size());
        for (const Action& a : candidates) qs.push_back(eval.q_optimal(buf, a, horizon));
        double best = *std::max_element(qs.begin(), qs.end());
        std::vector<std::size_t> tied;
        for (std::size_t i = 0; i < qs.size(); ++i)
            if (qs[i] >= best - tie_break.tolerance) tied.push_back(i);
        if (tied.size() == 1) return candidates[tied.front()];
        switch (tie_break.mode) {
            case TieBreakMode::lowest_index: return candidates[tied.front()];
            case TieBreakMode::seeded_random: {
                // Hash what the memo tables key on, so the rule stays key-determined.
                std::uint64_t node = model.has_state_key() ? rng::mix64(model.state_key(h))
                                                           : fnv1a(stripped_key(h));
                std::uint64_t r = rng::mix64(tie_break.seed ^ node);
                return candidates[tied[r % tied.size()]];
            }
            case TieBreakMode::adversarial: {
                truth_eval->reset_budget();
                std::size_t worst = tied.front();
                double worst_q = std::numeric_limits<double>::infinity();
                for (std::size_t i : tied) {
                    double qt = truth_eval->q_optimal(buf, candidates[i], horizon);
                    if (qt < worst_q - tie_break.tolerance) {
                        worst_q = qt;
                        worst = i;
                    }
                }
                return candidates[worst];
            }
        }
        return candidates[tied.front()];
    }

    Knowledge kappa;
    SelfModModel model;
    int horizon;
    TieBreak tie_break;
    PolicyName self;
    Evaluator eval;
    std::optional<Evaluator> truth_eval;
    std::vector<Action> candidates;
    std::mutex mu;
};

}  // namespace

PolicyRule optimal_policy(const Knowledge& kappa, const SelfModModel& model, int horizon,
                          TieBreak tie_break, PolicyName self_name) {
    auto state = std::make_shared<OptimalPolicyState>(kappa, model, horizon, std::move(tie_break),
                                                      self_name);
    bool keyed = model.has_state_key() || kappa.modification_independent();
    return PolicyRule([state](HistoryView h) { return state->decide(h); }, keyed);
}

Suboptimality min_suboptimality(const PolicyRule& pi, const Knowledge& kappa,
                                const SelfModModel& model, HistoryView h, int horizon) {
    Suboptimality out;
    out.chosen = pi(h);
    ValueInterval chosen = q_value(kappa, model, h, out.chosen, horizon, Continuation::chain);

    History buf = to_history(h);
    Evaluator ev(kappa, model);
    double ideal = -std::numeric_limits<double>::infinity();
    for (const Action& a : decision_candidates(kappa, model, out.chosen.next_policy))
        ideal = std::max(ideal, ev.q_optimal(buf, a, horizon));
    double named = -std::numeric_limits<double>::infinity();
    for (const Action& a : enumerable_actions(model)) named = std::max(named, ev.q_chain(buf, a, horizon));

    out.ideal = enclose(ideal, kappa, h.size(), horizon) - chosen;
    out.name_constrained = enclose(named, kappa, h.size(), horizon) - chosen;
    return out;
}

namespace {

double tv_walk(const PolicyRule& rule, const Belief& rho, const Belief& rho_star,
               const SelfModModel& model, History& h, int steps, double p, double q,
               std::size_t& charged, std::size_t budget) {
    if (steps == 0) return std::abs(p - q);
    if (++charged > budget) throw BudgetExceeded("history distribution exceeded node budget");
    Action a = rule(h);
    PerceptDistribution pa = rho(h, a);
    PerceptDistribution pb = rho_star(h, a);
    auto next = model.resolve(a.next_policy);
    double total = 0.0;
    for (std::uint32_t e = 0; e < pa.size(); ++e) {
        h.push_back({a, Percept{e}});
        total += tv_walk(*next, rho, rho_star, model, h, steps - 1, p * pa[e], q * pb[e], charged, budget);
        h.pop_back();
    }
    return total;
}

using ValuePairs = std::vector<std::pair<double, double>>;

ValuePairs tables(const SelfModModel& model, const Knowledge& ka, const Knowledge& kb,
                  const std::vector<Action>& actions, History& h, int d, std::size_t& charged,
                  std::size_t budget) {
    auto sa = ka.utility.support_horizon();
    auto sb = kb.utility.support_horizon();
    if (d == 0 || (sa && sb && h.size() >= std::max(*sa, *sb))) return {{0.0, 0.0}};
    ValuePairs out;
    for (const Action& a : actions) {
        PerceptDistribution pa = ka.belief(h, a);
        PerceptDistribution pb = kb.belief(h, a);
        std::vector<ValuePairs> children;
        std::vector<std::pair<double, double>> utils;
        for (std::uint32_t e = 0; e < pa.size(); ++e) {
            h.push_back({a, Percept{e}});
            utils.emplace_back(ka.utility(h), kb.utility(h));
            children.push_back(tables(model, ka, kb, actions, h, d - 1, charged, budget));
            h.pop_back();
        }
        // Cartesian product over the percept branches.
        std::vector<std::size_t> idx(children.size(), 0);
        while (true) {
            if (++charged > budget) throw BudgetExceeded("policy-table enumeration exceeded node budget");
            double va = 0.0, vb = 0.0;
            for (std::size_t e = 0; e < children.size(); ++e) {
                const auto& [ca, cb] = children[e][idx[e]];
                va += pa[e] * (utils[e].first + ka.discount * ca);
                vb += pb[e] * (utils[e].second + kb.discount * cb);
            }
            out.emplace_back(va, vb);
            std::size_t e = 0;
            while (e < idx.size() && ++idx[e] == children[e].size()) idx[e++] = 0;
            if (e == idx.size()) break;
        }
    }
    return out;
}

}  // namespace

double history_distribution_tv(const PolicyRule& pi, const Belief& rho, const Belief& rho_star,
                               const SelfModModel& model, HistoryView h, int steps) {
    History buf = to_history(h);
    std::size_t charged = 0;
    return 0.5 * tv_walk(pi, rho, rho_star, model, buf, steps, 1.0, 1.0, charged, node_budget());
}

void for_each_policy_table(const SelfModModel& model, const Knowledge& a, const Knowledge& b,
                           HistoryView h, int horizon,
                           const std::function<void(double, double)>& visit) {
    std::vector<Action> actions;
    if (a.modification_independent() && b.modification_independent())
        actions = decision_candidates(a, model, PolicyName{0});
    else
        actions = enumerable_actions(model);
    History buf = to_history(h);
    std::size_t charged = 0;
    for (const auto& [va, vb] : tables(model, a, b, actions, buf, horizon, charged, node_budget()))
        visit(va, vb);
}

}  // namespace boundrat
