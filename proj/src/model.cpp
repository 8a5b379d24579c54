#include "scmdp/model.hpp"

#include "scmdp/errors.hpp"

#include <set>

namespace scmdp {

const KernelRow& TransitionKernel::row(std::size_t state, std::size_t action) const {
    const auto it = rows_.find({state, action});
    if (it == rows_.end()) {
        throw InputError("kernel has no row for state " + std::to_string(state) + ", action " + std::to_string(action));
    }
    return it->second;
}

std::size_t SocialChoiceMDP::find_state(const Profile& profile) const {
    for (std::size_t s = 0; s < states.size(); ++s) {
        if (states[s] == profile) return s;
    }
    return npos;
}

namespace {

std::string state_ref(const SocialChoiceMDP& m, std::size_t s) {
    if (s < m.state_names.size() && !m.state_names[s].empty()) return m.state_names[s];
    return std::to_string(s);
}

std::string action_ref(const SocialChoiceMDP& m, std::size_t a) {
    if (a < m.alternatives.size() && !m.alternatives[a].label.empty()) return m.alternatives[a].label;
    return std::to_string(a);
}

template <class T>
void check_roster(const std::vector<T>& roster, const std::string& what, ValidationReport& report) {
    std::set<std::string> labels;
    for (std::size_t i = 0; i < roster.size(); ++i) {
        if (roster[i].id != i) {
            report.issues.push_back({what + "[" + std::to_string(i) + "]", "id " + std::to_string(roster[i].id) +
                                                                               " does not match position"});
        }
        if (!labels.insert(roster[i].label).second) {
            report.issues.push_back({what + "[" + std::to_string(i) + "]", "duplicate label '" + roster[i].label + "'"});
        }
    }
}

}  // namespace

ValidationReport validate_mdp(const SocialChoiceMDP& m) {
    ValidationReport report;
    auto add = [&](std::string where, std::string what) { report.issues.push_back({std::move(where), std::move(what)}); };

    const std::size_t n_members = m.members.size();
    const std::size_t n_alts = m.alternatives.size();
    const std::size_t n_states = m.states.size();

    if (n_members == 0) add("members", "no group members");
    if (n_alts == 0) add("alternatives", "no alternatives");
    if (n_states == 0) add("states", "no states");
    check_roster(m.members, "members", report);
    check_roster(m.alternatives, "alternatives", report);

    if (m.state_names.size() != n_states) {
        add("state_names", "expected " + std::to_string(n_states) + " names, got " + std::to_string(m.state_names.size()));
    } else {
        std::set<std::string> names;
        for (std::size_t s = 0; s < n_states; ++s) {
            if (!names.insert(m.state_names[s]).second) add("state_names[" + std::to_string(s) + "]", "duplicate name");
        }
    }

    bool shapes_ok = true;
    for (std::size_t s = 0; s < n_states; ++s) {
        const Profile& p = m.states[s];
        const std::string where = "states[" + state_ref(m, s) + "]";
        if (p.member_count() != n_members) {
            add(where, "has " + std::to_string(p.member_count()) + " member rows, expected " + std::to_string(n_members));
            shapes_ok = false;
        }
        for (std::size_t i = 0; i < p.rows.size(); ++i) {
            if (p.rows[i].values.size() != n_alts) {
                add(where + ".rows[" + std::to_string(i) + "]",
                    "has " + std::to_string(p.rows[i].values.size()) + " utilities, expected " + std::to_string(n_alts));
                shapes_ok = false;
            }
        }
        for (std::size_t t = 0; t < s; ++t) {
            if (m.states[t] == p) add(where, "duplicate state (same profile as " + state_ref(m, t) + ")");
        }
    }

    for (const auto& [key, row] : m.kernel.rows()) {
        if (key.first >= n_states || key.second >= n_alts) {
            add("kernel[" + std::to_string(key.first) + "," + std::to_string(key.second) + "]",
                "row for a state/action outside the roster");
        }
    }
    for (std::size_t s = 0; s < n_states; ++s) {
        for (std::size_t a = 0; a < n_alts; ++a) {
            const std::string where = "kernel[" + state_ref(m, s) + "," + action_ref(m, a) + "]";
            if (!m.kernel.has_row(s, a)) {
                add(where, "missing row");
                continue;
            }
            Rational total;
            std::set<std::size_t> seen;
            for (const auto& tr : m.kernel.row(s, a)) {
                if (tr.next_state >= n_states) {
                    add(where, "successor index " + std::to_string(tr.next_state) + " out of range");
                }
                if (!seen.insert(tr.next_state).second) {
                    add(where, "successor " + std::to_string(tr.next_state) + " listed twice");
                }
                if (tr.probability < 0) {
                    add(where, "negative probability " + tr.probability.to_string());
                }
                total += tr.probability;
            }
            if (total != 1) add(where, "row sums to " + total.to_string());
        }
    }

    if (const auto* tab = std::get_if<TabularReward>(&m.reward)) {
        for (std::size_t k = 0; k < tab->entries.size(); ++k) {
            if (tab->entries[k].values.size() != n_alts) {
                add("reward.values[" + std::to_string(k) + "]", "expected one value per alternative");
            }
        }
    }
    if (const auto* custom = std::get_if<CustomReward>(&m.reward)) {
        if (const auto mm = custom->expr.max_member_literal(); mm && *mm >= n_members) {
            add("reward.expr", "references member " + std::to_string(*mm) + " outside the roster");
            shapes_ok = false;
        }
        if (const auto ma = custom->expr.max_alternative_literal(); ma && *ma >= n_alts) {
            add("reward.expr", "references alternative " + std::to_string(*ma) + " outside the roster");
            shapes_ok = false;
        }
    }
    if (shapes_ok) {
        for (std::size_t s = 0; s < n_states; ++s) {
            for (std::size_t a = 0; a < n_alts; ++a) {
                try {
                    (void)eval_reward(m.reward, m.states[s], a);
                } catch (const std::exception& e) {
                    add("reward[" + state_ref(m, s) + "," + action_ref(m, a) + "]", e.what());
                }
            }
        }
    }
    return report;
}

SocialChoiceMDP with_reward(SocialChoiceMDP m, RewardSpec reward) {
    m.reward = std::move(reward);
    return m;
}

TabularReward tabulate_reward(const SocialChoiceMDP& m, const RewardSpec& reward) {
    TabularReward table;
    for (const auto& p : m.states) {
        TabularReward::Entry e{p, {}};
        for (std::size_t a = 0; a < m.action_count(); ++a) e.values.push_back(eval_reward(reward, p, a));
        table.entries.push_back(std::move(e));
    }
    return table;
}

}  // namespace scmdp
