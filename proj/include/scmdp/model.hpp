#pragma once

#include "scmdp/profile.hpp"
#include "scmdp/rational.hpp"
#include "scmdp/welfare.hpp"

#include <compare>
#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace scmdp {

struct Transition {
    std::size_t next_state = 0;
    Rational probability;

    friend bool operator==(const Transition&, const Transition&) = default;
};

/// Sparse successor distribution for one (state, action) pair.
using KernelRow = std::vector<Transition>;

/**
 * P(s' | s, a), stored sparsely by (state, action).
 *
 * Missing pairs are representable so that validate_mdp can report them;
 * a valid kernel defines every pair.
 */
class TransitionKernel {
public:
    using Key = std::pair<std::size_t, std::size_t>;  // (state, action)

    void set_row(std::size_t state, std::size_t action, KernelRow row) { rows_[{state, action}] = std::move(row); }
    void erase_row(std::size_t state, std::size_t action) { rows_.erase({state, action}); }

    bool has_row(std::size_t state, std::size_t action) const { return rows_.contains({state, action}); }
    /// Throws InputError if the pair is missing.
    const KernelRow& row(std::size_t state, std::size_t action) const;

    const std::map<Key, KernelRow>& rows() const noexcept { return rows_; }

    friend bool operator==(const TransitionKernel&, const TransitionKernel&) = default;

private:
    std::map<Key, KernelRow> rows_;
};

struct SocialChoiceMDP {
    std::vector<Member> members;
    std::vector<Alternative> alternatives;
    std::vector<Profile> states;
    std::vector<std::string> state_names;  // parallel to states
    TransitionKernel kernel;
    RewardSpec reward = UtilitarianReward{};

    std::size_t state_count() const noexcept { return states.size(); }
    std::size_t action_count() const noexcept { return alternatives.size(); }

    /// Index of `profile` in states, or npos.
    std::size_t find_state(const Profile& profile) const;
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

/// Deterministic policy; choice[s] is the alternative taken in state s.
struct Policy {
    std::vector<std::size_t> choice;

    friend bool operator==(const Policy&, const Policy&) = default;
    friend auto operator<=>(const Policy&, const Policy&) = default;
};

struct ValidationIssue {
    std::string location;  // e.g. "kernel[U_A,x]", "states[2]"
    std::string message;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;

    bool ok() const noexcept { return issues.empty(); }
};

/// Reports every broken structural invariant; never throws.
ValidationReport validate_mdp(const SocialChoiceMDP& m);

/// Copy of m with a different reward.
SocialChoiceMDP with_reward(SocialChoiceMDP m, RewardSpec reward);

/// Tabular reward over m's states built by evaluating `reward` on each (state, action).
TabularReward tabulate_reward(const SocialChoiceMDP& m, const RewardSpec& reward);

}  // namespace scmdp
