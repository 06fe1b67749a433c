// boundrat: run theorem verifications, parameter sweeps and trajectory
// simulations from the command line.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

#include "boundrat/constructions.hpp"
#include "boundrat/harness.hpp"
#include "boundrat/selfmod.hpp"
#include "boundrat/types.hpp"

namespace br = boundrat;
namespace hr = boundrat::harness;

namespace {

struct Overrides {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<double> tol;
    std::optional<int> horizon;
    std::string format = "human";
    std::string out = "-";
};

hr::ExperimentConfig apply(hr::ExperimentConfig config, const Overrides& o) {
    if (!o.config_path.empty()) config = hr::load_config(o.config_path, std::move(config));
    if (o.seed) config.seed = *o.seed;
    if (o.tol || o.horizon) {
        config.tolerance.reset();
        config.horizon.reset();
        if (o.tol) config.tolerance = *o.tol;
        if (o.horizon) config.horizon = *o.horizon;
    }
    config.validate();
    return config;
}

int emit(const hr::VerificationReport& report, const Overrides& o) {
    hr::write_report(report, hr::parse_format(o.format), o.out);
    std::fprintf(stderr, "%s: %s in %.3f s\n", report.theorem_id.c_str(), report.pass ? "pass" : "FAIL",
                 report.runtime_seconds);
    return report.pass ? 0 : 1;
}

void add_common(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--seed", o.seed, "Master seed");
    auto* tol = cmd->add_option("--tol", o.tol, "Tail tolerance for the automatic horizon");
    auto* horizon = cmd->add_option("--horizon", o.horizon, "Fixed truncation horizon");
    tol->excludes(horizon);
    cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "jsonl", "human"}));
    cmd->add_option("--out", o.out, "Output file ('-' for stdout)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Value-loss bounds for bounded-rational self-modifying agents"};
    app.require_subcommand(1);

    Overrides verify_opts;
    std::string theorem;
    auto* verify = app.add_subcommand("verify", "Run the checks of one theorem");
    verify->add_option("theorem", theorem, "Theorem id (see `list`)")->required();
    verify->add_option("--config", verify_opts.config_path, "INI configuration file");
    add_common(verify, verify_opts);

    Overrides sweep_opts;
    auto* sweep = app.add_subcommand("sweep", "Tabulate a construction over a parameter grid");
    sweep->add_option("--config", sweep_opts.config_path, "INI configuration file")->required();
    add_common(sweep, sweep_opts);
    sweep_opts.format = "csv";

    std::string construction;
    int steps = 10;
    std::uint64_t sim_seed = 0;
    double eps = 0.125, gamma = 0.5;
    double tol = 1e-9;
    std::string sim_out = "-";
    auto* simulate = app.add_subcommand("simulate", "Simulate the policy chain of a construction");
    simulate->add_option("--construction", construction, "Construction id")->required();
    simulate->add_option("--steps", steps, "Number of steps")->required()->check(CLI::PositiveNumber);
    simulate->add_option("--seed", sim_seed, "Percept sampling seed")->required();
    simulate->add_option("--epsilon", eps, "Error parameter");
    simulate->add_option("--gamma", gamma, "Discount factor");
    simulate->add_option("--tol", tol, "Tail tolerance for the Q enclosures");
    simulate->add_option("--out", sim_out, "Output file ('-' for stdout)");

    auto* list = app.add_subcommand("list", "Print theorem and construction ids");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*verify) {
            auto config = apply(hr::default_config(theorem), verify_opts);
            return emit(hr::verify_theorem(theorem, config), verify_opts);
        }
        if (*sweep) {
            auto config = apply(hr::default_config(""), sweep_opts);
            return emit(hr::sweep(config), sweep_opts);
        }
        if (*simulate) {
            int horizon = br::auto_horizon(gamma, tol);
            br::ConstructionBundle b = br::make_construction(construction, eps, gamma, gamma, sim_seed);
            br::SelfModModel model = b.model;
            if (b.agent == br::AgentKind::optimizer)
                model = model.with_policies({br::agent_policy(b, horizon)}, br::PolicyName{0});
            br::Trajectory traj =
                br::simulate_trajectory(model, b.kappa_true, b.kappa_true.belief, steps, sim_seed, horizon);
            std::string body = br::serialize_trajectory(traj, model);
            if (sim_out == "-") {
                std::cout << body;
            } else {
                std::ofstream out(sim_out, std::ios::binary);
                if (!(out << body)) throw std::runtime_error("cannot write " + sim_out);
            }
            return 0;
        }
        if (*list) {
            std::cout << "theorems:\n";
            for (const auto& id : hr::theorem_ids()) std::cout << "  " << id << '\n';
            std::cout << "constructions:\n";
            for (const auto& id : br::construction_ids()) std::cout << "  " << id << '\n';
            return 0;
        }
    } catch (const br::BudgetExceeded& e) {
        std::cerr << "budget exceeded: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
