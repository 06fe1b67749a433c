#pragma once

// Reference computations for the test suite. Deliberately naive: no memo
// tables, no state keys, no shortcuts shared with the library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "boundrat/model.hpp"
#include "boundrat/types.hpp"

namespace oracle {

using boundrat::Action;
using boundrat::History;
using boundrat::Knowledge;
using boundrat::Percept;
using boundrat::PolicyName;
using boundrat::SelfModModel;
using boundrat::WorldAction;

/// depth-step discounted utility of the chain starting with `name` at h.
inline double chain_value(const SelfModModel& m, const Knowledge& k, History& h, PolicyName name,
                          int depth) {
    if (depth == 0) return 0.0;
    Action a = (*m.resolve(name))(h);
    auto p = k.belief(h, a);
    double total = 0.0;
    for (std::uint32_t e = 0; e < p.size(); ++e) {
        h.push_back({a, Percept{e}});
        total += p[e] * (k.utility(h) + k.discount * chain_value(m, k, h, a.next_policy, depth - 1));
        h.pop_back();
    }
    return total;
}

inline std::vector<Action> all_actions(const SelfModModel& m, std::size_t names) {
    std::vector<Action> out;
    for (std::uint32_t w = 0; w < m.world_action_count(); ++w)
        for (std::uint32_t n = 0; n < names; ++n) out.push_back({WorldAction{w}, PolicyName{n}});
    return out;
}

/// Values of every deterministic policy tree of the given depth rooted at h.
/// A tree fixes one action at the root and one subtree per percept.
inline std::vector<double> all_table_values(const SelfModModel& m, const Knowledge& k, History& h,
                                            int depth, const std::vector<Action>& actions) {
    if (depth == 0) return {0.0};
    std::vector<double> out;
    for (const Action& a : actions) {
        auto p = k.belief(h, a);
        std::vector<double> instant(p.size());
        std::vector<std::vector<double>> sub(p.size());
        for (std::uint32_t e = 0; e < p.size(); ++e) {
            h.push_back({a, Percept{e}});
            instant[e] = k.utility(h);
            sub[e] = all_table_values(m, k, h, depth - 1, actions);
            h.pop_back();
        }
        // Cartesian product over the percept subtrees.
        std::vector<std::size_t> idx(p.size(), 0);
        while (true) {
            double v = 0.0;
            for (std::size_t e = 0; e < p.size(); ++e)
                v += p[e] * (instant[e] + k.discount * sub[e][idx[e]]);
            out.push_back(v);
            std::size_t e = 0;
            while (e < idx.size() && ++idx[e] == sub[e].size()) idx[e++] = 0;
            if (e == idx.size()) break;
        }
    }
    return out;
}

inline double best_table_value(const SelfModModel& m, const Knowledge& k, History h, int depth,
                               std::size_t names = 1) {
    auto values = all_table_values(m, k, h, depth, all_actions(m, names));
    return *std::max_element(values.begin(), values.end());
}

/// Greedy solution of max sum c_t d_t s.t. sum w_t d_t <= 0, d in [-1, 1]
/// with c_t = gs^(t-1), w_t = g^(t-1). Shifting x = d + 1 gives a fractional
/// knapsack; ratios c_t / w_t grow with t, so fill from the back.
inline double discount_lp_greedy(double g, double gs, int horizon) {
    std::vector<double> w(horizon), c(horizon);
    for (int t = 0; t < horizon; ++t) {
        w[t] = std::pow(g, t);
        c[t] = std::pow(gs, t);
    }
    double budget = 0.0;
    for (double x : w) budget += x;
    double obj = 0.0;
    for (int t = horizon - 1; t >= 0; --t) {
        double x = std::min(2.0, budget / w[t]);
        if (x <= 0.0) x = 0.0;
        budget -= x * w[t];
        obj += c[t] * (x - 1.0);
    }
    return obj;
}

/// Closed form of the discount-mismatch loss, written out term by term.
inline double discount_closed_form(double g, double gs) {
    int k = static_cast<int>(std::ceil(-1.0 / std::log2(g)));
    double first = (std::pow(gs, k) + std::pow(gs, k - 1) - 1.0) / (1.0 - gs);
    double second = std::pow(gs, k - 1) * (std::pow(g, k) + std::pow(g, k - 1) - 1.0) /
                    (std::pow(g, k - 1) * (1.0 - g));
    return first - second;
}

/// Hand-rolled generator for property tests: SplitMix64 stream.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : s_(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (s_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double uniform(double a, double b) { return a + (b - a) * unit(); }
    int integer(int lo, int hi) { return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1)); }

private:
    std::uint64_t s_;
};

}  // namespace oracle
