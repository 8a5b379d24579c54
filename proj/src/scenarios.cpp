#include "scmdp/scenarios.hpp"

#include "scmdp/axioms.hpp"
#include "scmdp/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

namespace scmdp {

SocialChoiceMDP fixture_f1() {
    SocialChoiceMDP m;
    m.members = {{0, "1"}, {1, "2"}};
    m.alternatives = {{0, "x"}, {1, "y"}};
    m.states = {Profile{{1, 0}, {1, 0}}, Profile{{10, 10}, {10, 10}}};
    m.state_names = {"U_A", "U_B"};
    constexpr std::size_t ua = 0, ub = 1, x = 0, y = 1;
    m.kernel.set_row(ua, x, {{ua, 1}});
    m.kernel.set_row(ua, y, {{ub, 1}});
    m.kernel.set_row(ub, x, {{ub, 1}});
    m.kernel.set_row(ub, y, {{ub, 1}});
    m.reward = UtilitarianReward{};
    return m;
}

SocialChoiceMDP gen_drift_mdp(std::size_t members, std::size_t alternatives, std::size_t states,
                              const DriftParams& params) {
    if (members == 0 || alternatives == 0 || states == 0) {
        throw InputError("generator needs at least one member, alternative and state");
    }
    if (params.stickiness < 0 || params.stickiness > 1 || params.attraction < 0 || params.attraction > 1) {
        throw InputError("drift probabilities must lie in [0, 1]");
    }
    if (params.utility_min > params.utility_max) throw InputError("empty utility grid");

    const double grid = static_cast<double>(params.utility_max - params.utility_min + 1);
    const double capacity = std::pow(grid, static_cast<double>(members * alternatives));
    if (capacity < static_cast<double>(states)) {
        throw GenerationError("utility grid admits only " + std::to_string(capacity) + " distinct profiles, " +
                              std::to_string(states) + " requested");
    }

    SocialChoiceMDP m;
    for (std::size_t i = 0; i < members; ++i) m.members.push_back({i, "m" + std::to_string(i)});
    for (std::size_t a = 0; a < alternatives; ++a) m.alternatives.push_back({a, "a" + std::to_string(a)});

    std::mt19937_64 rng(params.seed);
    std::uniform_int_distribution<int> utility(params.utility_min, params.utility_max);
    std::set<Profile> seen;
    const std::size_t max_attempts = 1000 * states + 1000;
    for (std::size_t attempt = 0; m.states.size() < states; ++attempt) {
        if (attempt >= max_attempts) {
            throw GenerationError("could not draw " + std::to_string(states) + " distinct profiles");
        }
        Profile p;
        p.rows.resize(members);
        for (auto& row : p.rows) {
            row.values.resize(alternatives);
            for (auto& v : row.values) v = utility(rng);
        }
        if (seen.insert(p).second) {
            m.state_names.push_back("s" + std::to_string(m.states.size()));
            m.states.push_back(std::move(p));
        }
    }

    const Rational rest = 1 - params.stickiness;
    const Rational uniform_share = rest * (1 - params.attraction) / static_cast<std::int64_t>(states);
    for (std::size_t a = 0; a < alternatives; ++a) {
        std::vector<Rational> score(states);
        for (std::size_t s = 0; s < states; ++s) {
            if (params.action_independent) {
                for (std::size_t b = 0; b < alternatives; ++b) score[s] += utilitarian_sum(m.states[s], b);
            } else {
                score[s] = utilitarian_sum(m.states[s], a);
            }
        }
        const Rational low = *std::min_element(score.begin(), score.end());
        std::vector<Rational> weight(states);
        Rational total;
        for (std::size_t s = 0; s < states; ++s) {
            weight[s] = 1 + (score[s] - low);
            total += weight[s];
        }
        for (std::size_t s = 0; s < states; ++s) {
            KernelRow row;
            for (std::size_t t = 0; t < states; ++t) {
                Rational p = uniform_share + rest * params.attraction * weight[t] / total;
                if (t == s) p += params.stickiness;
                if (p != 0) row.push_back({t, p});
            }
            m.kernel.set_row(s, a, std::move(row));
        }
    }
    m.reward = UtilitarianReward{};
    return m;
}

std::optional<ParetoScfViolation> find_pareto_scf_violation(const SocialChoiceMDP& m, DiscountFactor gamma,
                                                            const SolveConfig& cfg) {
    const DenseModel dense(m);
    const auto solution = value_iteration(dense, gamma, cfg);
    const auto report = check_pareto_scf(solution.greedy, m, 1);
    if (report.passed()) return std::nullopt;

    const Witness& w = report.witnesses.front();
    ParetoScfViolation out;
    out.state = w.instance;
    out.dominating = w.alternatives[0];
    out.chosen = w.alternatives[1];
    out.policy = solution.greedy;
    const auto& v = solution.values.values;
    out.dominating_value = dense.reward(out.state, out.dominating) + gamma.value() * dense.expected_next(out.state, out.dominating, v);
    out.chosen_value = dense.reward(out.state, out.chosen) + gamma.value() * dense.expected_next(out.state, out.chosen, v);
    return out;
}

}  // namespace scmdp
