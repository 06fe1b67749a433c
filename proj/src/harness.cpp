#include "boundrat/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <stdexcept>
#include <thread>

#include "boundrat/bounds.hpp"
#include "boundrat/constructions.hpp"
#include "boundrat/metrics.hpp"
#include "boundrat/rng.hpp"
#include "boundrat/selfmod.hpp"

namespace boundrat::harness {

namespace {

constexpr double kSlack = 1e-12;

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> out;
    for (int i = 0; i < n; ++i) out.push_back(n == 1 ? a : a + (b - a) * i / (n - 1));
    return out;
}

VerificationReport make_report(const std::string& id, const ExperimentConfig& config,
                               std::vector<std::string> columns) {
    VerificationReport r;
    r.theorem_id = id;
    r.seed = config.seed;
    r.param_names = std::move(columns);
    return r;
}

TieBreak tie_break_for(const ExperimentConfig& config, const Knowledge& truth) {
    switch (config.tie_break) {
        case TieBreakMode::lowest_index: return TieBreak::lowest_index();
        case TieBreakMode::seeded_random: return TieBreak::seeded_random(config.seed);
        case TieBreakMode::adversarial: return TieBreak::adversarial(truth);
    }
    return TieBreak::lowest_index();
}

ValueInterval bundle_loss(const ConstructionBundle& b, const ExperimentConfig& config, int horizon) {
    if (b.agent == AgentKind::optimizer && config.tie_break != TieBreakMode::adversarial) {
        SelfModModel m = b.model.with_policies(
            {optimal_policy(b.kappa_agent, b.model, horizon, tie_break_for(config, b.kappa_true))},
            PolicyName{0});
        History empty;
        return optimal_value(b.kappa_true, m, empty, horizon) -
               v_value(m.initial(), b.kappa_true, m, empty, horizon);
    }
    return measure_loss(b, horizon);
}

// ---- policy-mod -------------------------------------------------------------

VerificationReport verify_policy_mod(const ExperimentConfig& config) {
    auto report = make_report("policy-mod", config, {"epsilon", "gamma", "t"});
    for (double eps : config.epsilons) {
        for (double gamma : config.gammas) {
            ConstructionBundle b = deteriorating_chain(eps, gamma);
            int horizon = config.horizon_for(gamma);
            for (int t = config.t_min; t <= config.t_max; ++t) {
                ValueInterval gap = q_gap_expectation(b.model, b.kappa_true, t, horizon);
                double f = f_opt(eps, gamma, t);
                bool ok = gap.lower <= f + kSlack && gap.upper >= gamma * f - kSlack && gap.width() <= 1e-6;
                report.add({eps, gamma, std::int64_t{t}}, gap.lower, gap.upper, f, ok);
            }
        }
    }
    return report;
}

// ---- everitt-recovery -------------------------------------------------------

SelfModModel two_name_model(const RandomEnvironment& env, std::vector<PolicyRule> policies) {
    const SelfModModel& base = env.model;
    SelfModModel m = SelfModModel::bare(base.id(), base.world_action_count(), base.percept_count(), 2)
                         .with_policies(std::move(policies), PolicyName{0});
    m.set_state_key([base](HistoryView h) { return base.state_key(h); });
    return m;
}

VerificationReport verify_everitt(const ExperimentConfig& config) {
    auto report = make_report("everitt-recovery", config, {"environment", "gamma", "t"});
    for (double gamma : config.gammas) {
        int horizon = config.horizon_for(gamma);
        for (int e = 0; e < config.replicates; ++e) {
            RandomEnvironmentOptions opts;
            opts.gamma = gamma;
            opts.duplicate_actions = 1;
            std::uint64_t env_seed = rng::derive(config.seed, static_cast<std::uint64_t>(e));
            RandomEnvironment env = random_environment(env_seed, opts);
            // Two optimal policies with different tie-breaks that name each other.
            PolicyRule first = optimal_policy(env.kappa, env.model, horizon, TieBreak::lowest_index(),
                                              PolicyName{1});
            PolicyRule second = optimal_policy(env.kappa, env.model, horizon,
                                               TieBreak::seeded_random(env_seed), PolicyName{0});
            SelfModModel m = two_name_model(env, {first, second});
            // Every rule here is determined by the state key, so the gap at a
            // history depends only on its state and the active name.
            std::map<std::pair<std::uint64_t, std::uint32_t>, ValueInterval> seen;
            for (int t = config.t_min; t <= config.t_max; ++t) {
                double lo = 0.0, hi = 0.0, width = 0.0, mean_lo = 0.0, mean_hi = 0.0;
                bool ok = true;
                for (const ChainHistory& ch : chain_histories(m, env.kappa, t - 1)) {
                    auto key = std::make_pair(m.state_key(ch.history), ch.deciding.id);
                    auto it = seen.find(key);
                    if (it == seen.end())
                        it = seen.emplace(key, q_gap_pointwise(m, env.kappa, ch.history, horizon)).first;
                    const ValueInterval& gap = it->second;
                    lo = std::min(lo, gap.lower);
                    hi = std::max(hi, gap.upper);
                    width = std::max(width, gap.width());
                    ok = ok && std::max(std::abs(gap.lower), std::abs(gap.upper)) <= gap.width() + kSlack;
                    mean_lo += ch.probability * gap.lower;
                    mean_hi += ch.probability * gap.upper;
                }
                // The expected gap over the chain's history measure.
                ok = ok && std::max(std::abs(mean_lo), std::abs(mean_hi)) <= width + kSlack;
                report.add({std::int64_t{e}, gamma, std::int64_t{t}}, lo, hi, width, ok);
            }
        }
    }
    return report;
}

// ---- misaligned / ignorant ----------------------------------------------------

VerificationReport verify_misaligned(const ExperimentConfig& config) {
    auto report = make_report("misaligned", config, {"epsilon", "gamma"});
    for (double eps : config.epsilons) {
        for (double gamma : config.gammas) {
            ConstructionBundle b = misaligned_pair(eps, gamma);
            ValueInterval loss = bundle_loss(b, config, config.horizon_for(gamma));
            double f = f_util(eps, gamma);
            report.add({eps, gamma}, loss.lower, loss.upper, f, loss.contains(f, 1e-9));
        }
    }
    return report;
}

VerificationReport verify_ignorant(const ExperimentConfig& config, ErrorMode mode) {
    std::string id = mode == ErrorMode::absolute ? "ignorant-abs" : "ignorant-rel";
    double cap = mode == ErrorMode::absolute ? 2.0 : 4.0;
    auto report = make_report(id, config, {"epsilon", "gamma"});
    for (double eps : config.epsilons) {
        for (double gamma : config.gammas) {
            ConstructionBundle b = ignorant_pair(eps, gamma, mode);
            ValueInterval loss = bundle_loss(b, config, config.horizon_for(gamma));
            double f = f_bel(eps, gamma);
            bool ok = loss.contains(b.predicted_loss, 1e-9) && f >= loss.lower - 1e-9 &&
                      f <= (cap + 1e-6) * loss.upper + 1e-9;
            report.add({eps, gamma}, loss.lower, loss.upper, f, ok);
        }
    }
    return report;
}

// ---- impatient ----------------------------------------------------------------

bool program_structure_ok(const DiscountProgramSolution& sol) {
    int interior = 0;
    for (std::size_t t = 0; t < sol.delta_u.size(); ++t) {
        double d = sol.delta_u[t];
        if (d < -1.0 || d > 1.0) return false;
        if (d > -1.0 && d < 1.0) ++interior;
        if (t > 0 && d < sol.delta_u[t - 1]) return false;
    }
    return interior <= 1;
}

VerificationReport verify_impatient(const ExperimentConfig& config) {
    auto report = make_report("impatient", config, {"gamma", "gamma_star", "horizon"});
    for (double gamma : config.gammas) {
        std::vector<double> stars = config.gamma_stars;
        if (stars.empty()) stars = linspace(gamma, 0.99, 10);
        for (double gs : stars) {
            if (gs < gamma) continue;
            int horizon = std::max(discount_k(gamma) + 1, config.horizon_for(gs));
            DiscountProgramSolution sol = solve_discount_program(gamma, gs, horizon);
            double exact = f_disc_exact(gamma, gs);
            bool ok = std::abs(sol.epsilon - exact) <= geometric_tail(gs, horizon) + 1e-9 &&
                      discount_program_constraint(sol, gamma) <= 1e-9 &&
                      discount_program_improvement(sol, gamma, gs) <= 1e-9 && program_structure_ok(sol);
            report.add({gamma, gs, std::int64_t{horizon}}, sol.epsilon, sol.epsilon, exact, ok);
        }
    }
    return report;
}

// ---- Monte Carlo theorems -----------------------------------------------------

VerificationReport verify_avg_belief(const ExperimentConfig& config) {
    auto report = make_report("avg-belief", config, {"mode", "epsilon", "gamma", "depth", "replicates"});
    std::vector<std::string> ids;
    if (config.construction.empty()) ids = {"random-belief-abs", "random-belief-rel"};
    else ids = {config.construction};
    for (const std::string& cid : ids) {
        for (double eps : config.epsilons) {
            for (double gamma : config.gammas) {
                ConstructionBundle b = make_construction(cid, eps, gamma, gamma, config.seed);
                McEstimate est = mc_estimate(cid, config, eps, gamma);
                double band = 3.0 * est.standard_error;
                bool ok = est.mean + band + est.tail_correction >= b.predicted_loss;
                report.add({cid.substr(cid.rfind('-') + 1), eps, gamma, std::int64_t{config.depth},
                            std::int64_t{config.replicates}},
                           est.mean - band, est.mean + band, b.predicted_loss, ok);
            }
        }
    }
    return report;
}

VerificationReport verify_avg_utility(const ExperimentConfig& config) {
    auto report = make_report("avg-utility", config, {"epsilon", "gamma", "depth", "replicates"});
    for (double eps : config.epsilons) {
        for (double gamma : config.gammas) {
            McEstimate est = mc_estimate("random-utility", config, eps, gamma);
            double predicted = eps / (2.0 * (1.0 - gamma));
            double band = 3.0 * est.standard_error;
            bool ok = std::abs(est.mean - predicted) <= band + est.tail_correction + kSlack;
            report.add({eps, gamma, std::int64_t{config.depth}, std::int64_t{config.replicates}},
                       est.mean - band, est.mean + band, predicted, ok);
        }
    }
    return report;
}

// ---- combining ----------------------------------------------------------------

VerificationReport verify_combining(const ExperimentConfig& config) {
    auto report = make_report("combining", config, {"construction", "epsilon", "gamma", "gamma_star"});
    auto check = [&](const std::string& cid, double eps, double gamma, double gs, ValueInterval loss,
                     double bound, double term) {
        bool ok = loss.lower <= bound + kSlack && 8.0 * loss.upper >= term - kSlack;
        report.add({cid, eps, gamma, gs}, loss.lower, loss.upper, bound, ok);
    };
    for (double gamma : config.gammas) {
        if (gamma < 0.5) continue;
        int horizon = config.horizon_for(gamma);
        for (double eps : config.epsilons) {
            if (eps <= 1.0 / (1.0 - gamma)) {
                ConstructionBundle b = deteriorating_chain(eps, gamma);
                double bound = combined_bound(eps, 0.0, 0.0, gamma, gamma, 1).self_modifying;
                check(b.id, eps, gamma, gamma, measure_loss(b, horizon), bound, f_opt(eps, gamma, 1));
            }
            if (eps <= 0.5) {
                ConstructionBundle b = misaligned_pair(eps, gamma);
                double bound = combined_bound(0.0, eps, 0.0, gamma, gamma, 1).non_self_modifying;
                check(b.id, eps, gamma, gamma, bundle_loss(b, config, horizon), bound, f_util(eps, gamma));
            }
            for (ErrorMode mode : {ErrorMode::absolute, ErrorMode::relative}) {
                if (mode == ErrorMode::absolute && eps > 0.5) continue;
                if (eps > 1.0) continue;
                ConstructionBundle b = ignorant_pair(eps, gamma, mode);
                double bound = combined_bound(0.0, 0.0, eps, gamma, gamma, 1).non_self_modifying;
                check(b.id, eps, gamma, gamma, bundle_loss(b, config, horizon), bound, f_bel(eps, gamma));
            }
        }
        for (double gs : config.gamma_stars) {
            if (gs < gamma) continue;
            int program_horizon = std::max(discount_k(gamma) + 1, config.horizon_for(gs));
            ConstructionBundle b = discount_streams(gamma, gs, program_horizon);
            double bound = combined_bound(0.0, 0.0, 0.0, gamma, gs, 1).non_self_modifying;
            check(b.id, 0.0, gamma, gs, bundle_loss(b, config, program_horizon), bound,
                  f_disc_exact(gamma, gs));
        }
    }
    return report;
}

// ---- opt-lemma ----------------------------------------------------------------

VerificationReport verify_opt_lemma(const ExperimentConfig& config) {
    auto report = make_report("opt-lemma", config, {"environment", "perturbation", "gamma", "epsilon"});
    constexpr int kDepth = 3;
    for (double delta : config.epsilons) {
        for (double gamma : config.gammas) {
            for (int e = 0; e < config.replicates; ++e) {
                RandomEnvironmentOptions opts;
                opts.gamma = gamma;
                opts.support_horizon = kDepth;
                std::uint64_t env_seed = rng::derive(config.seed, static_cast<std::uint64_t>(e));
                RandomEnvironment env = random_environment(env_seed, opts);
                const Knowledge& truth = env.kappa;
                Knowledge agent(perturbed_utility(truth.utility, env.model, delta, env_seed ^ 1),
                                perturbed_belief(truth.belief, env.model, delta, env_seed ^ 2), gamma,
                                "perturbed");
                // Engineered eps: the largest per-policy value gap from any decision history.
                double eps = 0.0;
                std::vector<History> decisions;
                for_each_history(env.model, kDepth - 1, [&](HistoryView h) {
                    decisions.emplace_back(h.begin(), h.end());
                    for_each_policy_table(env.model, agent, truth, h, kDepth,
                                          [&](double va, double vb) { eps = std::max(eps, std::abs(va - vb)); });
                });
                SelfModModel m = env.model.with_policies(
                    {optimal_policy(agent, env.model, kDepth, TieBreak::lowest_index())}, PolicyName{0});
                PolicyRule pi = *m.resolve(PolicyName{0});
                double lo = -1.0, hi = -1.0;
                for (const History& h : decisions) {
                    ValueInterval gap = min_suboptimality(pi, truth, m, h, kDepth).ideal;
                    if (gap.upper > hi) {
                        lo = gap.lower;
                        hi = gap.upper;
                    }
                }
                report.add({std::int64_t{e}, delta, gamma, eps}, lo, hi, 2.0 * eps, hi <= 2.0 * eps + kSlack);
            }
        }
    }
    return report;
}

// ---- tv-growth ----------------------------------------------------------------

VerificationReport verify_tv_growth(const ExperimentConfig& config) {
    auto report = make_report("tv-growth", config, {"source", "epsilon", "t"});
    auto add_rows = [&](const std::string& source, double eps, const PolicyRule& pi, const Belief& rho,
                        const Belief& rho_star, const SelfModModel& m) {
        for (int t = config.t_min; t <= config.t_max; ++t) {
            double tv = history_distribution_tv(pi, rho, rho_star, m, {}, t);
            double bound = 1.0 - std::pow(1.0 - eps, t);
            report.add({source, eps, std::int64_t{t}}, tv, tv, bound, tv <= bound + 1e-9);
        }
    };
    for (double eps : config.epsilons) {
        for (double gamma : config.gammas) {
            ConstructionBundle b = ignorant_pair(eps, gamma, ErrorMode::absolute);
            int horizon = config.horizon_for(gamma);
            SelfModModel m = b.model.with_policies({agent_policy(b, horizon)}, PolicyName{0});
            add_rows("ignorant-abs", eps, *m.resolve(PolicyName{0}), b.kappa_agent.belief, b.kappa_true.belief, m);
            for (int e = 0; e < config.replicates; ++e) {
                RandomEnvironmentOptions opts;
                opts.gamma = gamma;
                std::uint64_t env_seed = rng::derive(config.seed, static_cast<std::uint64_t>(e));
                RandomEnvironment env = random_environment(env_seed, opts);
                Belief rho = perturbed_belief(env.kappa.belief, env.model, eps, env_seed ^ 2);
                SelfModModel em = env.model.with_policies(
                    {optimal_policy(env.kappa, env.model, 4, TieBreak::lowest_index())}, PolicyName{0});
                char name[32];
                std::snprintf(name, sizeof name, "env-%02d", e);
                add_rows(name, eps, *em.resolve(PolicyName{0}), rho, env.kappa.belief, em);
            }
        }
    }
    return report;
}

template <class F>
VerificationReport timed(F&& run) {
    auto start = std::chrono::steady_clock::now();
    VerificationReport report = run();
    report.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

}  // namespace

const std::vector<std::string>& theorem_ids() {
    static const std::vector<std::string> ids = {
        "policy-mod", "everitt-recovery", "misaligned", "ignorant-abs", "ignorant-rel", "impatient",
        "avg-belief", "avg-utility",      "combining",  "opt-lemma",    "tv-growth"};
    return ids;
}

ExperimentConfig default_config(const std::string& id) {
    ExperimentConfig c;
    c.tolerance = 1e-10;
    if (id == "policy-mod") {
        c.epsilons = {0.125};
        c.gammas = {0.5};
        c.tolerance = 5e-7;
    } else if (id == "everitt-recovery") {
        c.gammas = {0.5};
        c.replicates = 5;
        c.t_max = 10;
        c.tolerance = 1e-9;
    } else if (id == "misaligned") {
        c.epsilons = {0.05, 0.1, 0.25};
        c.gammas = {0.5, 0.9};
    } else if (id == "ignorant-abs" || id == "ignorant-rel") {
        c.epsilons = {0.05, 0.1, 0.2, 0.3, 0.4, 0.5};
        c.gammas = {0.5, 0.9};
    } else if (id == "impatient") {
        c.gammas = linspace(0.3, 0.95, 10);
        c.tolerance = 1e-9;
    } else if (id == "avg-belief") {
        c.epsilons = {0.2};
        c.gammas = {0.9};
        c.depth = 30;
        c.replicates = 10000;
    } else if (id == "avg-utility") {
        c.epsilons = {0.2};
        c.gammas = {0.5};
        c.depth = 60;
        c.replicates = 100000;
    } else if (id == "combining") {
        c.epsilons = {0.05, 0.1, 0.25, 0.5};
        c.gammas = {0.5, 0.75, 0.9};
        c.gamma_stars = {0.95, 0.99};
    } else if (id == "opt-lemma") {
        c.epsilons = {0.05};
        c.gammas = {0.5};
        c.replicates = 100;
        c.tie_break = TieBreakMode::lowest_index;
    } else if (id == "tv-growth") {
        c.epsilons = {0.1};
        c.gammas = {0.5};
        c.replicates = 20;
        c.t_max = 8;
    }
    return c;
}

VerificationReport verify_theorem(const std::string& id, const ExperimentConfig& config) {
    config.validate();
    return timed([&]() -> VerificationReport {
        if (id == "policy-mod") return verify_policy_mod(config);
        if (id == "everitt-recovery") return verify_everitt(config);
        if (id == "misaligned") return verify_misaligned(config);
        if (id == "ignorant-abs") return verify_ignorant(config, ErrorMode::absolute);
        if (id == "ignorant-rel") return verify_ignorant(config, ErrorMode::relative);
        if (id == "impatient") return verify_impatient(config);
        if (id == "avg-belief") return verify_avg_belief(config);
        if (id == "avg-utility") return verify_avg_utility(config);
        if (id == "combining") return verify_combining(config);
        if (id == "opt-lemma") return verify_opt_lemma(config);
        if (id == "tv-growth") return verify_tv_growth(config);
        throw std::invalid_argument("unknown theorem id: " + id);
    });
}

namespace {

bool is_random(const std::string& cid) {
    return cid == "random-utility" || cid == "random-belief-abs" || cid == "random-belief-rel";
}

double f_term(const ConstructionBundle& b) {
    if (b.loss_formula_id == "f_util") return f_util(b.epsilon, b.gamma);
    if (b.loss_formula_id == "f_bel") return f_bel(b.epsilon, b.gamma);
    if (b.loss_formula_id == "f_disc") return f_disc_exact(b.gamma, b.gamma_star);
    if (b.loss_formula_id == "f_opt") return f_opt(b.epsilon, b.gamma, 1);
    return b.predicted_loss;
}

VerificationReport run_sweep(const ExperimentConfig& config) {
    const std::string& cid = config.construction;
    if (cid == "det-chain") {
        auto report = make_report("sweep:" + cid, config, {"epsilon", "gamma", "t"});
        for (double eps : config.epsilons) {
            for (double gamma : config.gammas) {
                ConstructionBundle b = deteriorating_chain(eps, gamma);
                int horizon = config.horizon_for(gamma);
                for (int t = config.t_min; t <= config.t_max; ++t) {
                    ValueInterval gap = q_gap_expectation(b.model, b.kappa_true, t, horizon);
                    double f = f_opt(eps, gamma, t);
                    report.add({eps, gamma, std::int64_t{t}}, gap.lower, gap.upper, f,
                               gap.lower <= f + kSlack && gap.upper >= gamma * f - kSlack);
                }
            }
        }
        return report;
    }
    if (cid == "discount-streams") {
        auto report = make_report("sweep:" + cid, config, {"gamma", "gamma_star"});
        for (double gamma : config.gammas) {
            for (double gs : config.gamma_stars) {
                if (gs < gamma) continue;
                int horizon = std::max(discount_k(gamma) + 1, config.horizon_for(gs));
                ConstructionBundle b = discount_streams(gamma, gs, horizon);
                ValueInterval loss = bundle_loss(b, config, horizon);
                double f = f_disc_exact(gamma, gs);
                report.add({gamma, gs}, loss.lower, loss.upper, f,
                           loss.contains(f, geometric_tail(gs, horizon) + 1e-9));
            }
        }
        return report;
    }
    if (is_random(cid)) {
        auto report = make_report("sweep:" + cid, config, {"epsilon", "gamma", "depth", "replicates"});
        for (double eps : config.epsilons) {
            for (double gamma : config.gammas) {
                ConstructionBundle b = make_construction(cid, eps, gamma, gamma, config.seed);
                McEstimate est = mc_estimate(cid, config, eps, gamma);
                double band = 3.0 * est.standard_error;
                bool ok = cid == "random-utility"
                              ? std::abs(est.mean - b.predicted_loss) <= band + est.tail_correction + kSlack
                              : est.mean + band + est.tail_correction >= b.predicted_loss;
                report.add({eps, gamma, std::int64_t{config.depth}, std::int64_t{config.replicates}},
                           est.mean - band, est.mean + band, b.predicted_loss, ok);
            }
        }
        return report;
    }
    auto report = make_report("sweep:" + cid, config, {"epsilon", "gamma"});
    for (double eps : config.epsilons) {
        for (double gamma : config.gammas) {
            ConstructionBundle b = make_construction(cid, eps, gamma, gamma, config.seed);
            ValueInterval loss = bundle_loss(b, config, config.horizon_for(gamma));
            double f = f_term(b);
            bool ok = cid == "expectation-gate"
                          ? loss.contains(f, 1e-9)
                          : loss.lower <= f + 1e-9 && b.tightness_factor * loss.upper >= f - 1e-9;
            report.add({eps, gamma}, loss.lower, loss.upper, f, ok);
        }
    }
    return report;
}

}  // namespace

VerificationReport sweep(const ExperimentConfig& config) {
    config.validate();
    const auto& ids = construction_ids();
    if (std::find(ids.begin(), ids.end(), config.construction) == ids.end())
        throw std::invalid_argument("sweep: unknown construction id '" + config.construction + "'");
    VerificationReport report = timed([&] { return run_sweep(config); });
    report.sort_rows();
    return report;
}

McEstimate mc_estimate(const std::string& cid, const ExperimentConfig& config, double eps, double gamma) {
    config.validate();
    std::function<double(std::uint64_t)> replica;
    if (cid == "random-utility") {
        replica = [&](std::uint64_t s) { return sample_random_utility_loss(eps, gamma, config.depth, s); };
    } else if (cid == "random-belief-abs" || cid == "random-belief-rel") {
        ErrorMode mode = cid == "random-belief-abs" ? ErrorMode::absolute : ErrorMode::relative;
        replica = [&, mode](std::uint64_t s) {
            return sample_random_belief_loss(mode, eps, gamma, config.depth, s).loss;
        };
    } else {
        throw std::invalid_argument("mc_estimate: no Monte Carlo sampler for '" + cid + "'");
    }
    std::size_t n = static_cast<std::size_t>(config.replicates);
    std::vector<double> losses(n);
    unsigned workers = config.threads > 0 ? static_cast<unsigned>(config.threads)
                                          : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
    auto work = [&](unsigned w) {
        for (std::size_t r = w; r < n; r += workers) losses[r] = replica(rng::derive(config.seed, r));
    };
    if (workers <= 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
        for (auto& t : pool) t.join();
    }
    McEstimate est;
    est.replicates = config.replicates;
    double sum = 0.0;
    for (double x : losses) sum += x;
    est.mean = sum / static_cast<double>(n);
    if (n > 1) {
        double ss = 0.0;
        for (double x : losses) ss += (x - est.mean) * (x - est.mean);
        est.standard_error = std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n));
    }
    est.tail_correction = geometric_tail(gamma, config.depth);
    return est;
}

}  // namespace boundrat::harness
