#include "boundrat/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>
#include <unordered_map>

namespace boundrat {

std::size_t node_budget() {
    if (const char* env = std::getenv("BOUNDRAT_NODE_BUDGET")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    }
    return kDefaultNodeBudget;
}

namespace {

std::size_t saturating_mul(std::size_t a, std::size_t b) {
    if (a != 0 && b > std::numeric_limits<std::size_t>::max() / a)
        return std::numeric_limits<std::size_t>::max();
    return a * b;
}

std::size_t saturating_add(std::size_t a, std::size_t b) {
    return a > std::numeric_limits<std::size_t>::max() - b ? std::numeric_limits<std::size_t>::max()
                                                            : a + b;
}

void walk(const SelfModModel& model, const std::vector<Action>& actions, History& h,
          std::size_t depth, const std::function<void(HistoryView)>& visit) {
    visit(h);
    if (h.size() == depth) return;
    for (const Action& a : actions) {
        for (std::uint32_t e = 0; e < model.percept_count(); ++e) {
            h.push_back({a, Percept{e}});
            walk(model, actions, h, depth, visit);
            h.pop_back();
        }
    }
}

}  // namespace

std::size_t enumeration_size(const SelfModModel& model, std::size_t depth) {
    std::size_t branching = saturating_mul(
        saturating_mul(model.world_action_count(), model.enumeration_name_count()),
        model.percept_count());
    std::size_t total = 0;
    std::size_t level = 1;
    for (std::size_t d = 0; d <= depth; ++d) {
        total = saturating_add(total, level);
        level = saturating_mul(level, branching);
    }
    return total;
}

void for_each_history(const SelfModModel& model, std::size_t depth,
                      const std::function<void(HistoryView)>& visit, std::size_t budget) {
    std::size_t n = enumeration_size(model, depth);
    if (n > budget)
        throw BudgetExceeded("enumerating " + std::to_string(n) + " histories exceeds budget " +
                             std::to_string(budget));
    auto actions = enumerable_actions(model);
    History h;
    h.reserve(depth);
    walk(model, actions, h, depth, visit);
}

std::vector<Action> enumerable_actions(const SelfModModel& model) {
    std::vector<Action> out;
    for (std::uint32_t w = 0; w < model.world_action_count(); ++w)
        for (std::uint32_t n = 0; n < model.enumeration_name_count(); ++n)
            out.push_back({WorldAction{w}, PolicyName{n}});
    return out;
}

bool is_modification_independent(const std::function<double(HistoryView)>& f,
                                  const SelfModModel& model, std::size_t depth,
                                  double tolerance) {
    std::unordered_map<std::string, double> seen;
    bool ok = true;
    for_each_history(model, depth, [&](HistoryView h) {
        if (!ok) return;
        double v = f(h);
        auto [it, inserted] = seen.emplace(stripped_key(h), v);
        if (!inserted && std::abs(it->second - v) > tolerance) ok = false;
    });
    return ok;
}

bool is_modification_independent(const Belief& belief, const SelfModModel& model,
                                 std::size_t depth, double tolerance) {
    if (depth == 0) return true;
    std::unordered_map<std::string, PerceptDistribution> seen;
    auto actions = enumerable_actions(model);
    bool ok = true;
    for_each_history(model, depth - 1, [&](HistoryView h) {
        if (!ok) return;
        std::string base = stripped_key(h);
        for (const Action& a : actions) {
            PerceptDistribution p = belief(h, a);
            std::string key = base + '|' + std::to_string(a.world.id);
            auto [it, inserted] = seen.emplace(std::move(key), p);
            if (inserted) continue;
            for (std::size_t i = 0; i < p.size(); ++i)
                if (std::abs(it->second[i] - p[i]) > tolerance) ok = false;
        }
    });
    return ok;
}

double utility_abs_error(const UtilityFunction& u, const UtilityFunction& u_star,
                         const SelfModModel& model, std::size_t depth) {
    double err = 0.0;
    for_each_history(model, depth, [&](HistoryView h) {
        if (h.empty()) return;
        err = std::max(err, std::abs(u(h) - u_star(h)));
    });
    return err;
}

double belief_tv_error(const Belief& rho, const Belief& rho_star, const SelfModModel& model,
                       std::size_t depth) {
    if (depth == 0) return 0.0;
    double err = 0.0;
    auto actions = enumerable_actions(model);
    for_each_history(model, depth - 1, [&](HistoryView h) {
        for (const Action& a : actions) err = std::max(err, tv_distance(rho(h, a), rho_star(h, a)));
    });
    return err;
}

double belief_rel_error(const Belief& rho, const Belief& rho_star, const SelfModModel& model,
                        std::size_t depth, const std::vector<Percept>& percepts) {
    if (depth == 0) return 0.0;
    std::vector<std::size_t> idx;
    if (percepts.empty()) {
        for (std::size_t e = 0; e < model.percept_count(); ++e) idx.push_back(e);
    } else {
        for (Percept e : percepts) idx.push_back(e.id);
    }
    double err = 0.0;
    auto actions = enumerable_actions(model);
    for_each_history(model, depth - 1, [&](HistoryView h) {
        for (const Action& a : actions) {
            PerceptDistribution p = rho(h, a);
            PerceptDistribution q = rho_star(h, a);
            for (std::size_t e : idx) {
                double r = p.at(e) / q.at(e);
                err = std::max({err, r - 1.0, 1.0 / r - 1.0});
            }
        }
    });
    return err;
}

}  // namespace boundrat
