#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "boundrat/types.hpp"

namespace boundrat {

/// A deterministic policy: history -> action (world action + next name).
///
/// A rule flagged `key_determined` promises that its decision depends on the
/// history only through the owning model's state key (or through the stripped
/// history when the model has no key). The value engine memoizes chain values
/// of such rules.
class PolicyRule {
public:
    using Decide = std::function<Action(HistoryView)>;

    explicit PolicyRule(Decide decide, bool key_determined = false)
        : decide_(std::move(decide)), key_determined_(key_determined) {}

    Action operator()(HistoryView h) const { return decide_(h); }
    bool key_determined() const { return key_determined_; }

private:
    Decide decide_;
    bool key_determined_;
};

/// Policy self-modification model: world actions, percepts, names and the
/// name -> policy map.
///
/// Names are the integers [0, name_count). Countable name families use a
/// large name_count with a lazily materializing resolver; exhaustive
/// operators only enumerate the first `enumeration_name_count()` names.
class SelfModModel {
public:
    using Resolver = std::function<std::shared_ptr<const PolicyRule>(PolicyName)>;
    using StateKey = std::function<std::uint64_t(HistoryView)>;
    using Labeler = std::function<std::string(PolicyName)>;

    SelfModModel(std::string id, std::size_t world_action_count, std::size_t percept_count,
                 std::size_t name_count, Resolver iota, PolicyName initial);

    /// Model over an explicit finite policy list; name i resolves to policies[i].
    static SelfModModel with_policies(std::string id, std::size_t world_action_count,
                                      std::size_t percept_count,
                                      std::vector<PolicyRule> policies,
                                      PolicyName initial = PolicyName{0});

    /// Model with a single name whose policy is filled in later via
    /// with_resolver(); used to compute policies that must live in the model.
    static SelfModModel bare(std::string id, std::size_t world_action_count,
                             std::size_t percept_count, std::size_t name_count = 1);

    const std::string& id() const { return id_; }
    std::size_t world_action_count() const { return world_action_count_; }
    std::size_t percept_count() const { return percept_count_; }
    std::size_t name_count() const { return name_count_; }
    std::size_t enumeration_name_count() const;
    PolicyName initial() const { return initial_; }

    /// Throws ModelError for names outside the set or an unset resolver.
    std::shared_ptr<const PolicyRule> resolve(PolicyName name) const;

    bool has_state_key() const { return static_cast<bool>(state_key_); }
    std::uint64_t state_key(HistoryView h) const { return state_key_(h); }

    std::string label(PolicyName name) const;

    SelfModModel with_resolver(Resolver iota, PolicyName initial) const;
    SelfModModel with_policies(std::vector<PolicyRule> policies, PolicyName initial) const;
    SelfModModel& set_state_key(StateKey key);
    SelfModModel& set_labeler(Labeler labeler);
    SelfModModel& set_enumeration_name_limit(std::size_t limit);
    SelfModModel& set_id(std::string id);

    bool valid_world(WorldAction a) const { return a.id < world_action_count_; }
    bool valid_name(PolicyName p) const { return p.id < name_count_; }

private:
    std::string id_;
    std::size_t world_action_count_;
    std::size_t percept_count_;
    std::size_t name_count_;
    std::size_t enumeration_name_limit_;
    Resolver iota_;
    PolicyName initial_;
    StateKey state_key_;
    Labeler labeler_;
};

}  // namespace boundrat
