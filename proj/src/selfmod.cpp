#include "boundrat/selfmod.hpp"

#include <json.hpp>

#include "boundrat/metrics.hpp"
#include "boundrat/rng.hpp"

namespace boundrat {

namespace {

Percept sample_percept(const PerceptDistribution& p, double u) {
    double acc = 0.0;
    for (std::uint32_t e = 0; e < p.size(); ++e) {
        acc += p[e];
        if (u < acc) return Percept{e};
    }
    return Percept{static_cast<std::uint32_t>(p.size() - 1)};
}

}  // namespace

Trajectory simulate_trajectory(const SelfModModel& model, const Knowledge& kappa,
                               const Belief& rho_true, int steps, std::uint64_t seed,
                               int horizon) {
    if (steps < 1) throw std::invalid_argument("simulate_trajectory: steps must be >= 1");
    Trajectory traj;
    traj.seed = seed;
    traj.model_id = model.id();
    traj.kappa_id = kappa.id;
    History h;
    PolicyName name = model.initial();
    for (int t = 1; t <= steps; ++t) {
        Action a = (*model.resolve(name))(h);
        StepRecord rec;
        rec.t = t;
        rec.policy_name = name;
        rec.action = a;
        rec.q_current = q_value(kappa, model, h, a, horizon, Continuation::chain);
        rec.q_initial = q_initial_policy(model, kappa, h, horizon);
        double u = rng::to_unit(rng::derive(seed, static_cast<std::uint64_t>(t)));
        rec.percept = sample_percept(rho_true(h, a), u);
        h.push_back({a, rec.percept});
        traj.records.push_back(rec);
        name = a.next_policy;
    }
    return traj;
}

std::string serialize_trajectory(const Trajectory& trajectory, const SelfModModel& model) {
    std::string out;
    for (const StepRecord& r : trajectory.records) {
        nlohmann::ordered_json j;
        j["t"] = r.t;
        j["policy_name"] = model.label(r.policy_name);
        j["world_action"] = r.action.world.id;
        j["percept"] = r.percept.id;
        j["q_current_lo"] = r.q_current.lower;
        j["q_current_hi"] = r.q_current.upper;
        j["q_initial_lo"] = r.q_initial.lower;
        j["q_initial_hi"] = r.q_initial.upper;
        out += j.dump();
        out += '\n';
    }
    return out;
}

ValueInterval q_initial_policy(const SelfModModel& model, const Knowledge& kappa, HistoryView h,
                               int horizon) {
    PolicyName first = model.initial();
    Action a = (*model.resolve(first))(h);
    return q_value(kappa, model, h, Action{a.world, first}, horizon, Continuation::frozen);
}

PolicyName chain_policy_at(const SelfModModel& model, HistoryView h) {
    PolicyName name = model.initial();
    for (std::size_t i = 0; i < h.size(); ++i) {
        Action a = (*model.resolve(name))(h.first(i));
        if (a != h[i].action)
            throw ModelError("history is not generated by the policy chain at step " +
                             std::to_string(i + 1));
        name = a.next_policy;
    }
    return name;
}

namespace {

void collect(const SelfModModel& model, const Knowledge& kappa, History& h, PolicyName name,
             double p, int remaining, std::vector<ChainHistory>& out, std::size_t budget) {
    if (remaining == 0) {
        out.push_back({h, p, name});
        return;
    }
    if (out.size() > budget) throw BudgetExceeded("chain history enumeration exceeded node budget");
    Action a = (*model.resolve(name))(h);
    PerceptDistribution dist = kappa.belief(h, a);
    for (std::uint32_t e = 0; e < dist.size(); ++e) {
        h.push_back({a, Percept{e}});
        collect(model, kappa, h, a.next_policy, p * dist[e], remaining - 1, out, budget);
        h.pop_back();
    }
}

}  // namespace

std::vector<ChainHistory> chain_histories(const SelfModModel& model, const Knowledge& kappa,
                                          int length) {
    std::vector<ChainHistory> out;
    History h;
    collect(model, kappa, h, model.initial(), 1.0, length, out, node_budget());
    return out;
}

ValueInterval q_gap_expectation(const SelfModModel& model, const Knowledge& kappa, int t,
                                int horizon) {
    if (t < 1) throw std::invalid_argument("q_gap_expectation: t must be >= 1");
    ValueInterval gap{0.0, 0.0, horizon};
    for (const ChainHistory& ch : chain_histories(model, kappa, t - 1)) {
        Action a = (*model.resolve(ch.deciding))(ch.history);
        ValueInterval current = q_value(kappa, model, ch.history, a, horizon, Continuation::chain);
        ValueInterval initial = q_initial_policy(model, kappa, ch.history, horizon);
        ValueInterval d = initial - current;
        gap.lower += ch.probability * d.lower;
        gap.upper += ch.probability * d.upper;
    }
    return gap;
}

ValueInterval q_gap_pointwise(const SelfModModel& model, const Knowledge& kappa, HistoryView h,
                              int horizon) {
    PolicyName name = chain_policy_at(model, h);
    Action a = (*model.resolve(name))(h);
    return q_value(kappa, model, h, a, horizon, Continuation::chain) -
           q_initial_policy(model, kappa, h, horizon);
}

}  // namespace boundrat
