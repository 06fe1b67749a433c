#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "boundrat/harness.hpp"

namespace boundrat::harness {

namespace pt = boost::property_tree;

void ExperimentConfig::validate() const {
    if (horizon.has_value() == tolerance.has_value())
        throw std::invalid_argument("config: set exactly one of horizon and tolerance");
    if (horizon && *horizon < 0) throw std::invalid_argument("config: horizon must be >= 0");
    if (tolerance && !(*tolerance > 0.0)) throw std::invalid_argument("config: tolerance must be > 0");
    if (replicates < 1) throw std::invalid_argument("config: replicates must be >= 1");
    if (depth < 1) throw std::invalid_argument("config: depth must be >= 1");
    if (threads < 0) throw std::invalid_argument("config: threads must be >= 0");
}

int ExperimentConfig::horizon_for(double gamma) const {
    if (horizon) return *horizon;
    return auto_horizon(gamma, tolerance.value_or(1e-9));
}

TieBreakMode parse_tie_break(const std::string& name) {
    if (name == "lowest-index") return TieBreakMode::lowest_index;
    if (name == "adversarial") return TieBreakMode::adversarial;
    if (name == "seeded-random") return TieBreakMode::seeded_random;
    throw std::invalid_argument("unknown tie-break mode: " + name);
}

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return {};
    return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

double to_double(const std::string& key, const std::string& text) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != text.size() || !std::isfinite(v))
        throw std::invalid_argument("config: " + key + ": not a number: '" + text + "'");
    return v;
}

long long to_integer(const std::string& key, const std::string& text) {
    std::size_t used = 0;
    long long v = 0;
    try {
        v = std::stoll(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != text.size()) throw std::invalid_argument("config: " + key + ": not an integer: '" + text + "'");
    return v;
}

std::vector<double> to_list(const std::string& key, const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(to_double(key, item));
    }
    return out;
}

const std::map<std::string, std::set<std::string>>& known_keys() {
    static const std::map<std::string, std::set<std::string>> keys = {
        {"construction", {"id", "epsilon", "gamma", "gamma_star"}},
        {"horizon", {"horizon", "tolerance"}},
        {"run", {"tie_break", "seed", "replicates", "depth", "threads"}},
        {"sweep", {"t_min", "t_max"}},
    };
    return keys;
}

}  // namespace

ExperimentConfig parse_config(std::istream& in, ExperimentConfig config) {
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }
    for (const auto& [section, body] : tree) {
        auto known = known_keys().find(section);
        if (known == known_keys().end() || !body.data().empty())
            throw std::invalid_argument("config: unknown section or top-level key '" + section + "'");
        for (const auto& [key, node] : body) {
            if (!known->second.count(key))
                throw std::invalid_argument("config: unknown key '" + section + "." + key + "'");
        }
    }
    auto get = [&](const std::string& path) -> std::optional<std::string> {
        if (auto v = tree.get_optional<std::string>(pt::ptree::path_type(path, '.'))) return trim(*v);
        return std::nullopt;
    };
    if (auto v = get("construction.id")) config.construction = *v;
    if (auto v = get("construction.epsilon")) config.epsilons = to_list("epsilon", *v);
    if (auto v = get("construction.gamma")) config.gammas = to_list("gamma", *v);
    if (auto v = get("construction.gamma_star")) config.gamma_stars = to_list("gamma_star", *v);
    auto h = get("horizon.horizon");
    auto tol = get("horizon.tolerance");
    if (h || tol) {
        config.horizon.reset();
        config.tolerance.reset();
        if (h) config.horizon = static_cast<int>(to_integer("horizon", *h));
        if (tol) config.tolerance = to_double("tolerance", *tol);
    }
    if (auto v = get("run.tie_break")) config.tie_break = parse_tie_break(*v);
    if (auto v = get("run.seed")) config.seed = static_cast<std::uint64_t>(to_integer("seed", *v));
    if (auto v = get("run.replicates")) config.replicates = static_cast<int>(to_integer("replicates", *v));
    if (auto v = get("run.depth")) config.depth = static_cast<int>(to_integer("depth", *v));
    if (auto v = get("run.threads")) config.threads = static_cast<int>(to_integer("threads", *v));
    if (auto v = get("sweep.t_min")) config.t_min = static_cast<int>(to_integer("t_min", *v));
    if (auto v = get("sweep.t_max")) config.t_max = static_cast<int>(to_integer("t_max", *v));
    config.validate();
    return config;
}

ExperimentConfig load_config(const std::string& path, ExperimentConfig base) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file " + path);
    return parse_config(in, std::move(base));
}

}  // namespace boundrat::harness
