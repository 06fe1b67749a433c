#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "boundrat/constructions.hpp"
#include "boundrat/metrics.hpp"
#include "boundrat/model.hpp"
#include "boundrat/types.hpp"
#include "oracles.hpp"

using namespace boundrat;

namespace {

Step step(std::uint32_t w, std::uint32_t p, std::uint32_t e) {
    return {{WorldAction{w}, PolicyName{p}}, Percept{e}};
}

SelfModModel two_name_model() {
    PolicyRule self([](HistoryView) { return Action{WorldAction{0}, PolicyName{0}}; }, true);
    PolicyRule other([](HistoryView) { return Action{WorldAction{1}, PolicyName{1}}; }, true);
    return SelfModModel::with_policies("two", 2, 2, {self, other});
}

Belief table_belief(double p0_action0, double p0_action1) {
    return Belief(2, [=](HistoryView, const Action& a) {
        double p = a.world.id == 0 ? p0_action0 : p0_action1;
        return PerceptDistribution{p, 1.0 - p};
    }, true);
}

}  // namespace

TEST_CASE("strip_modifications drops names and keeps length") {
    CHECK(strip_modifications(History{}).empty());

    History h{step(1, 1, 0)};
    StrippedHistory s = strip_modifications(h);
    REQUIRE(s.size() == 1);
    CHECK(s[0].world.id == 1);
    CHECK(s[0].percept.id == 0);

    History a{step(0, 0, 1), step(1, 0, 0), step(1, 1, 1)};
    History b{step(0, 1, 1), step(1, 1, 0), step(1, 0, 1)};
    CHECK(strip_modifications(a) == strip_modifications(b));
    CHECK(stripped_key(a) == stripped_key(b));
    b[1].action.world.id = 0;
    CHECK(stripped_key(a) != stripped_key(b));
}

TEST_CASE("stripped_key separates histories of different lengths") {
    History a{step(0, 0, 0)};
    History b{step(0, 0, 0), step(0, 0, 0)};
    CHECK(stripped_key(a) != stripped_key(b));
    CHECK(stripped_key(History{}) != stripped_key(a));
}

TEST_CASE("modification independence detection") {
    SelfModModel m = two_name_model();
    auto world_only = [](HistoryView h) { return h.empty() ? 0.0 : 0.5 * h.back().action.world.id; };
    CHECK(is_modification_independent(world_only, m, 3));

    auto name_bonus = [](HistoryView h) {
        if (h.empty()) return 0.0;
        return 0.5 * h.back().action.world.id + (h.back().action.next_policy.id == 1 ? 0.1 : 0.0);
    };
    CHECK_FALSE(is_modification_independent(name_bonus, m, 3));

    // Anything composed with strip_modifications is independent.
    auto via_strip = [](HistoryView h) {
        auto s = strip_modifications(h);
        double v = 0.0;
        for (const auto& x : s) v = 0.5 * v + 0.25 * (x.world.id + x.percept.id);
        return v;
    };
    CHECK(is_modification_independent(via_strip, m, 3));

    ConstructionBundle chain = deteriorating_chain(0.125, 0.5);
    auto u = chain.kappa_true.utility;
    CHECK(is_modification_independent([u](HistoryView h) { return h.empty() ? 0.0 : u(h); }, chain.model, 3));

    Belief name_dependent(2, [](HistoryView, const Action& a) {
        double p = a.next_policy.id == 0 ? 0.5 : 0.6;
        return PerceptDistribution{p, 1.0 - p};
    }, false);
    CHECK_FALSE(is_modification_independent(name_dependent, m, 2));
    CHECK(is_modification_independent(table_belief(0.3, 0.6), m, 2));
}

TEST_CASE("utility_abs_error") {
    ConstructionBundle b = misaligned_pair(0.1, 0.5);
    CHECK(utility_abs_error(b.kappa_true.utility, b.kappa_true.utility, b.model, 3) == 0.0);
    CHECK(utility_abs_error(b.kappa_agent.utility, b.kappa_true.utility, b.model, 3) ==
          doctest::Approx(0.1).epsilon(1e-12));
    CHECK(utility_abs_error(b.kappa_true.utility, b.kappa_agent.utility, b.model, 3) ==
          utility_abs_error(b.kappa_agent.utility, b.kappa_true.utility, b.model, 3));

    RandomEnvironment env = random_environment(11, {});
    UtilityFunction shifted([u = env.kappa.utility](HistoryView h) { return std::min(1.0, u(h) + 0.05); },
                            true);
    CHECK(utility_abs_error(shifted, env.kappa.utility, env.model, 3) == doctest::Approx(0.05).epsilon(1e-12));
}

TEST_CASE("belief_tv_error") {
    SelfModModel m = two_name_model();
    Belief a = table_belief(0.5, 0.4);
    Belief b = table_belief(0.7, 0.4);
    CHECK(belief_tv_error(a, a, m, 2) == 0.0);
    CHECK(belief_tv_error(a, b, m, 2) == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(belief_tv_error(b, a, m, 2) == belief_tv_error(a, b, m, 2));

    ConstructionBundle ig = ignorant_pair(0.1, 0.5, ErrorMode::absolute);
    CHECK(belief_tv_error(ig.kappa_agent.belief, ig.kappa_true.belief, ig.model, 3) ==
          doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("belief_rel_error") {
    SelfModModel m = two_name_model();
    Belief a = table_belief(0.5, 0.5);
    Belief b = table_belief(0.25, 0.5);
    CHECK(belief_rel_error(a, a, m, 2) == 0.0);
    CHECK(belief_rel_error(a, b, m, 2) == doctest::Approx(1.0).epsilon(1e-12));

    ConstructionBundle ig = ignorant_pair(0.2, 0.5, ErrorMode::relative);
    CHECK(belief_rel_error(ig.kappa_agent.belief, ig.kappa_true.belief, ig.model, 3, ig.error_percepts) ==
          doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("belief validation rejects malformed kernels") {
    History h;
    Action a{};
    Belief short_vec(2, [](HistoryView, const Action&) { return PerceptDistribution{1.0}; }, true);
    CHECK_THROWS_AS(short_vec(h, a), ModelError);
    Belief bad_sum(2, [](HistoryView, const Action&) { return PerceptDistribution{0.5, 0.6}; }, true);
    CHECK_THROWS_AS(bad_sum(h, a), ModelError);
    Belief zero(2, [](HistoryView, const Action&) { return PerceptDistribution{0.0, 1.0}; }, true);
    CHECK_THROWS_AS(zero(h, a), ModelError);
    CHECK(clamp_full_support(1.0) == kClampHigh);
    CHECK(clamp_full_support(0.0) == kClampLow);
    CHECK(clamp_full_support(0.3) == 0.3);
}

TEST_CASE("enumeration respects the node budget") {
    SelfModModel m = two_name_model();
    // 4 actions x 2 percepts: 1 + 8 + 64 histories up to depth 2.
    CHECK(enumeration_size(m, 2) == 73);
    std::size_t count = 0;
    for_each_history(m, 2, [&](HistoryView) { ++count; });
    CHECK(count == 73);
    CHECK_THROWS_AS(for_each_history(m, 2, [](HistoryView) {}, 50), BudgetExceeded);
}

TEST_CASE("property: two-percept TV is bounded by the relative error") {
    oracle::Gen gen(0xC0FFEE);
    for (int i = 0; i < 20000; ++i) {
        double p = gen.uniform(0.01, 0.99);
        double q = gen.uniform(0.01, 0.99);
        std::vector<double> a{p, 1.0 - p}, b{q, 1.0 - q};
        double eps = std::max({p / q, q / p, (1 - p) / (1 - q), (1 - q) / (1 - p)}) - 1.0;
        CHECK(tv_distance(a, b) <= eps / (1.0 + eps) + 1e-15);
    }
}

TEST_CASE("property: metrics are symmetric on random environments") {
    oracle::Gen gen(7);
    for (int i = 0; i < 10; ++i) {
        RandomEnvironment env = random_environment(gen.next(), {});
        double eps = gen.uniform(0.0, 0.3);
        Belief rho = perturbed_belief(env.kappa.belief, env.model, eps, gen.next());
        UtilityFunction u = perturbed_utility(env.kappa.utility, env.model, eps, gen.next());
        double tv = belief_tv_error(rho, env.kappa.belief, env.model, 3);
        CHECK(tv == belief_tv_error(env.kappa.belief, rho, env.model, 3));
        CHECK(tv <= eps + 1e-12);
        double ue = utility_abs_error(u, env.kappa.utility, env.model, 3);
        CHECK(ue == utility_abs_error(env.kappa.utility, u, env.model, 3));
        CHECK(ue <= eps + 1e-12);
        CHECK(is_modification_independent(rho, env.model, 2));
    }
}
