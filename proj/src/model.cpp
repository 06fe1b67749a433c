#include "boundrat/model.hpp"

#include <algorithm>

namespace boundrat {

SelfModModel::SelfModModel(std::string id, std::size_t world_action_count,
                           std::size_t percept_count, std::size_t name_count, Resolver iota,
                           PolicyName initial)
    : id_(std::move(id)),
      world_action_count_(world_action_count),
      percept_count_(percept_count),
      name_count_(name_count),
      enumeration_name_limit_(name_count),
      iota_(std::move(iota)),
      initial_(initial) {
    if (world_action_count_ == 0 || percept_count_ == 0 || name_count_ == 0)
        throw ModelError("model " + id_ + ": empty action, percept or name set");
    if (!valid_name(initial_)) throw ModelError("model " + id_ + ": initial name out of range");
}

SelfModModel SelfModModel::with_policies(std::string id, std::size_t world_action_count,
                                         std::size_t percept_count,
                                         std::vector<PolicyRule> policies, PolicyName initial) {
    SelfModModel m = bare(std::move(id), world_action_count, percept_count,
                          std::max<std::size_t>(policies.size(), 1));
    return m.with_policies(std::move(policies), initial);
}

SelfModModel SelfModModel::bare(std::string id, std::size_t world_action_count,
                                std::size_t percept_count, std::size_t name_count) {
    return SelfModModel(std::move(id), world_action_count, percept_count, name_count, Resolver{},
                        PolicyName{0});
}

std::size_t SelfModModel::enumeration_name_count() const {
    return std::min(name_count_, enumeration_name_limit_);
}

std::shared_ptr<const PolicyRule> SelfModModel::resolve(PolicyName name) const {
    if (!valid_name(name))
        throw ModelError("model " + id_ + ": name " + std::to_string(name.id) + " out of range");
    if (!iota_) throw ModelError("model " + id_ + ": no policies attached");
    auto rule = iota_(name);
    if (!rule) throw ModelError("model " + id_ + ": name " + std::to_string(name.id) + " unresolved");
    return rule;
}

std::string SelfModModel::label(PolicyName name) const {
    if (labeler_) return labeler_(name);
    return "p" + std::to_string(name.id);
}

SelfModModel SelfModModel::with_resolver(Resolver iota, PolicyName initial) const {
    SelfModModel m = *this;
    m.iota_ = std::move(iota);
    if (!m.valid_name(initial)) throw ModelError("model " + id_ + ": initial name out of range");
    m.initial_ = initial;
    return m;
}

SelfModModel SelfModModel::with_policies(std::vector<PolicyRule> policies,
                                         PolicyName initial) const {
    if (policies.size() != name_count_)
        throw ModelError("model " + id_ + ": " + std::to_string(policies.size()) +
                         " policies for " + std::to_string(name_count_) + " names");
    std::vector<std::shared_ptr<const PolicyRule>> table;
    table.reserve(policies.size());
    for (auto& p : policies) table.push_back(std::make_shared<const PolicyRule>(std::move(p)));
    return with_resolver(
        [table = std::move(table)](PolicyName n) -> std::shared_ptr<const PolicyRule> {
            return n.id < table.size() ? table[n.id] : nullptr;
        },
        initial);
}

SelfModModel& SelfModModel::set_state_key(StateKey key) {
    state_key_ = std::move(key);
    return *this;
}

SelfModModel& SelfModModel::set_labeler(Labeler labeler) {
    labeler_ = std::move(labeler);
    return *this;
}

SelfModModel& SelfModModel::set_enumeration_name_limit(std::size_t limit) {
    enumeration_name_limit_ = std::max<std::size_t>(limit, 1);
    return *this;
}

SelfModModel& SelfModModel::set_id(std::string id) {
    id_ = std::move(id);
    return *this;
}

}  // namespace boundrat
