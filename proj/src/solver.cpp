#include "scmdp/solver.hpp"

#include "scmdp/errors.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <iterator>

namespace scmdp {

namespace {

constexpr double kZ95 = 1.959963984540054;

// Successive-iterate change that bounds the fixed-point error by epsilon,
// floored at a few ulps of the current magnitude so large-valued models still terminate.
double stopping_threshold(double epsilon, double gamma, const std::vector<double>& v) {
    double scale = 0.0;
    for (double x : v) scale = std::max(scale, std::abs(x));
    return std::max(epsilon * (1.0 - gamma) / (2.0 * gamma), 8.0 * DBL_EPSILON * scale);
}

double sup_distance(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

void check_policy(const DenseModel& m, const Policy& pi) {
    if (pi.choice.size() != m.states()) {
        throw InputError("policy covers " + std::to_string(pi.choice.size()) + " states, model has " +
                         std::to_string(m.states()));
    }
    for (std::size_t a : pi.choice) {
        if (a >= m.actions()) throw InputError("policy action " + std::to_string(a) + " out of range");
    }
}

// Solves (I - gamma P_pi) v = r_pi by Gaussian elimination with partial pivoting.
std::vector<double> solve_linear(const DenseModel& m, const Policy& pi, double gamma) {
    const std::size_t n = m.states();
    std::vector<double> a(n * (n + 1), 0.0);
    auto at = [&](std::size_t r, std::size_t c) -> double& { return a[r * (n + 1) + c]; };
    for (std::size_t s = 0; s < n; ++s) {
        at(s, s) = 1.0;
        for (const auto& [next, p] : m.successors(s, pi.choice[s])) at(s, next) -= gamma * p;
        at(s, n) = m.reward(s, pi.choice[s]);
    }
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(at(r, col)) > std::abs(at(pivot, col))) pivot = r;
        if (pivot != col)
            for (std::size_t c = col; c <= n; ++c) std::swap(at(col, c), at(pivot, c));
        const double diag = at(col, col);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = at(r, col) / diag;
            if (f == 0.0) continue;
            for (std::size_t c = col; c <= n; ++c) at(r, c) -= f * at(col, c);
        }
    }
    std::vector<double> v(n, 0.0);
    for (std::size_t r = n; r-- > 0;) {
        double acc = at(r, n);
        for (std::size_t c = r + 1; c < n; ++c) acc -= at(r, c) * v[c];
        v[r] = acc / at(r, r);
    }
    return v;
}

std::vector<double> q_values(const DenseModel& m, std::size_t s, const std::vector<double>& v, double gamma) {
    std::vector<double> q(m.actions());
    for (std::size_t a = 0; a < m.actions(); ++a) q[a] = m.reward(s, a) + gamma * m.expected_next(s, a, v);
    return q;
}

}  // namespace

DiscountFactor::DiscountFactor(double gamma) : gamma_(gamma) {
    if (!(gamma > 0.0 && gamma < 1.0)) {
        throw InputError("discount factor must lie strictly between 0 and 1, got " + std::to_string(gamma));
    }
}

void SolveConfig::validate() const {
    if (!(epsilon > 0.0)) throw InputError("epsilon must be positive");
    if (!(tie_tolerance > 0.0)) throw InputError("tie tolerance must be positive");
    if (max_iterations == 0) throw InputError("max_iterations must be positive");
    if (trajectories == 0) throw InputError("trajectory count must be positive");
}

DenseModel::DenseModel(const SocialChoiceMDP& m) : n_states_(m.state_count()), n_actions_(m.action_count()) {
    if (const auto report = validate_mdp(m); !report.ok()) {
        const auto& first = report.issues.front();
        throw InputError("invalid MDP: " + first.location + ": " + first.message);
    }
    rewards_.resize(n_states_ * n_actions_);
    rows_.resize(n_states_ * n_actions_);
    cumulative_.resize(n_states_ * n_actions_);
    for (std::size_t s = 0; s < n_states_; ++s) {
        for (std::size_t a = 0; a < n_actions_; ++a) {
            const std::size_t k = s * n_actions_ + a;
            rewards_[k] = eval_reward(m.reward, m.states[s], a).to_double();
            max_abs_reward_ = std::max(max_abs_reward_, std::abs(rewards_[k]));
            double acc = 0.0;
            for (const auto& tr : m.kernel.row(s, a)) {
                if (tr.probability == 0) continue;
                rows_[k].emplace_back(tr.next_state, tr.probability.to_double());
                acc += tr.probability.to_double();
                cumulative_[k].push_back(acc);
            }
            if (rows_[k].size() != 1) deterministic_ = false;
        }
    }
}

std::size_t DenseModel::sample(std::size_t s, std::size_t a, std::mt19937_64& rng) const {
    const std::size_t k = s * n_actions_ + a;
    const auto& row = rows_[k];
    if (row.size() == 1) return row.front().first;
    const auto& cum = cumulative_[k];
    const double u = std::uniform_real_distribution<double>(0.0, cum.back())(rng);
    const auto it = std::upper_bound(cum.begin(), cum.end(), u);
    const std::size_t idx = std::min<std::size_t>(static_cast<std::size_t>(std::distance(cum.begin(), it)), row.size() - 1);
    return row[idx].first;
}

double DenseModel::expected_next(std::size_t s, std::size_t a, std::span<const double> v) const {
    double acc = 0.0;
    for (const auto& [next, p] : successors(s, a)) acc += p * v[next];
    return acc;
}

ValueTable bellman_backup(const DenseModel& m, const Policy& pi, const ValueTable& v, DiscountFactor gamma) {
    check_policy(m, pi);
    if (v.values.size() != m.states()) throw InputError("value table does not cover every state");
    ValueTable out{std::vector<double>(m.states())};
    for (std::size_t s = 0; s < m.states(); ++s) {
        const std::size_t a = pi.choice[s];
        out.values[s] = m.reward(s, a) + gamma.value() * m.expected_next(s, a, v.values);
    }
    return out;
}

ValueTable bellman_backup(const SocialChoiceMDP& m, const Policy& pi, const ValueTable& v, DiscountFactor gamma) {
    return bellman_backup(DenseModel(m), pi, v, gamma);
}

double bellman_residual(const DenseModel& m, const Policy& pi, const ValueTable& v, DiscountFactor gamma) {
    return sup_distance(bellman_backup(m, pi, v, gamma).values, v.values);
}

double bellman_optimality_residual(const DenseModel& m, const ValueTable& v, DiscountFactor gamma) {
    double worst = 0.0;
    for (std::size_t s = 0; s < m.states(); ++s) {
        const auto q = q_values(m, s, v.values, gamma.value());
        worst = std::max(worst, std::abs(*std::max_element(q.begin(), q.end()) - v.values[s]));
    }
    return worst;
}

ValueTable policy_evaluation(const DenseModel& m, const Policy& pi, DiscountFactor gamma, const SolveConfig& cfg) {
    cfg.validate();
    check_policy(m, pi);
    if (m.states() <= cfg.direct_solve_limit) {
        return ValueTable{solve_linear(m, pi, gamma.value())};
    }
    ValueTable v{std::vector<double>(m.states(), 0.0)};
    double change = 0.0;
    for (std::size_t it = 0; it < cfg.max_iterations; ++it) {
        ValueTable next = bellman_backup(m, pi, v, gamma);
        change = sup_distance(next.values, v.values);
        v = std::move(next);
        if (change <= stopping_threshold(cfg.epsilon, gamma.value(), v.values)) return v;
    }
    throw ConvergenceError("policy evaluation did not converge in " + std::to_string(cfg.max_iterations) + " iterations",
                           change);
}

ValueTable policy_evaluation(const SocialChoiceMDP& m, const Policy& pi, DiscountFactor gamma, const SolveConfig& cfg) {
    return policy_evaluation(DenseModel(m), pi, gamma, cfg);
}

OptimalSolution value_iteration(const DenseModel& m, DiscountFactor gamma, const SolveConfig& cfg) {
    cfg.validate();
    const double g = gamma.value();
    OptimalSolution sol;
    std::vector<double> v(m.states(), 0.0);
    std::vector<double> next(m.states());
    double change = 0.0;
    bool converged = false;
    for (std::size_t it = 0; it < cfg.max_iterations; ++it) {
        for (std::size_t s = 0; s < m.states(); ++s) {
            const auto q = q_values(m, s, v, g);
            next[s] = *std::max_element(q.begin(), q.end());
        }
        change = sup_distance(next, v);
        v.swap(next);
        sol.iterations = it + 1;
        if (change <= stopping_threshold(cfg.epsilon, g, v)) {
            converged = true;
            break;
        }
    }
    if (!converged) {
        throw ConvergenceError("value iteration did not converge in " + std::to_string(cfg.max_iterations) + " iterations",
                               change);
    }

    sol.greedy.choice.resize(m.states());
    sol.optimal_actions.resize(m.states());
    for (std::size_t s = 0; s < m.states(); ++s) {
        const auto q = q_values(m, s, v, g);
        const double best = *std::max_element(q.begin(), q.end());
        for (std::size_t a = 0; a < q.size(); ++a) {
            if (q[a] >= best - cfg.tie_tolerance) sol.optimal_actions[s].push_back(a);
        }
        sol.greedy.choice[s] = sol.optimal_actions[s].front();
    }
    sol.values.values = std::move(v);
    sol.residual = bellman_optimality_residual(m, sol.values, gamma);
    return sol;
}

OptimalSolution value_iteration(const SocialChoiceMDP& m, DiscountFactor gamma, const SolveConfig& cfg) {
    return value_iteration(DenseModel(m), gamma, cfg);
}

std::set<Policy> policies_from_action_sets(const std::vector<std::vector<std::size_t>>& sets, std::size_t cap) {
    double total = 1.0;
    for (const auto& s : sets) total *= static_cast<double>(s.size());
    if (total > static_cast<double>(cap)) {
        throw SizeError("optimal policy set has " + std::to_string(total) + " members, above the cap of " +
                        std::to_string(cap));
    }
    std::set<Policy> out;
    if (std::any_of(sets.begin(), sets.end(), [](const auto& s) { return s.empty(); })) return out;
    std::vector<std::size_t> idx(sets.size(), 0);
    while (true) {
        Policy p;
        p.choice.reserve(sets.size());
        for (std::size_t s = 0; s < sets.size(); ++s) p.choice.push_back(sets[s][idx[s]]);
        out.insert(std::move(p));
        std::size_t k = sets.size();
        while (k > 0 && ++idx[k - 1] == sets[k - 1].size()) {
            idx[k - 1] = 0;
            --k;
        }
        if (k == 0) break;
    }
    return out;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t trajectory_seed(std::uint64_t seed, std::size_t start, std::size_t k) {
    return splitmix64(splitmix64(splitmix64(seed) ^ start) ^ k);
}

}  // namespace

std::size_t truncation_horizon(double max_abs_reward, DiscountFactor gamma, double epsilon) {
    if (max_abs_reward == 0.0) return 0;
    const double ratio = epsilon * (1.0 - gamma.value()) / max_abs_reward;
    if (ratio >= 1.0) return 0;
    return static_cast<std::size_t>(std::ceil(std::log(ratio) / std::log(gamma.value())));
}

MonteCarloEstimate monte_carlo_return(const DenseModel& m, const Policy& pi, std::size_t start, DiscountFactor gamma,
                                      const SolveConfig& cfg) {
    cfg.validate();
    check_policy(m, pi);
    if (start >= m.states()) throw InputError("start state out of range");

    MonteCarloEstimate out;
    out.trajectories = cfg.trajectories;
    out.horizon = truncation_horizon(m.max_abs_reward(), gamma, cfg.epsilon);
    if (cfg.horizon_cap) out.horizon = std::min(out.horizon, *cfg.horizon_cap);

    // Welford: identical returns give exactly zero variance.
    double mean = 0.0;
    double m2 = 0.0;
    for (std::size_t k = 0; k < cfg.trajectories; ++k) {
        std::mt19937_64 rng(trajectory_seed(cfg.seed, start, k));
        double ret = 0.0;
        double discount = 1.0;
        std::size_t s = start;
        for (std::size_t t = 0; t < out.horizon; ++t) {
            const std::size_t a = pi.choice[s];
            ret += discount * m.reward(s, a);
            discount *= gamma.value();
            s = m.sample(s, a, rng);
        }
        const double delta = ret - mean;
        mean += delta / static_cast<double>(k + 1);
        m2 += delta * (ret - mean);
    }
    out.estimate = mean;
    if (cfg.trajectories > 1) {
        const double variance = m2 / static_cast<double>(cfg.trajectories - 1);
        out.half_width = kZ95 * std::sqrt(variance / static_cast<double>(cfg.trajectories));
    }
    return out;
}

std::set<Policy> brute_force_optimal_policies(const DenseModel& m, DiscountFactor gamma, const SolveConfig& cfg) {
    cfg.validate();
    const double count = std::pow(static_cast<double>(m.actions()), static_cast<double>(m.states()));
    if (count > static_cast<double>(cfg.enumeration_cap)) {
        throw SizeError("enumerating " + std::to_string(m.actions()) + "^" + std::to_string(m.states()) +
                        " policies exceeds the cap of " + std::to_string(cfg.enumeration_cap));
    }
    std::vector<std::pair<Policy, std::vector<double>>> evaluated;
    std::vector<double> best(m.states(), -INFINITY);
    Policy pi{std::vector<std::size_t>(m.states(), 0)};
    while (true) {
        auto v = policy_evaluation(m, pi, gamma, cfg).values;
        for (std::size_t s = 0; s < m.states(); ++s) best[s] = std::max(best[s], v[s]);
        evaluated.emplace_back(pi, std::move(v));
        std::size_t k = m.states();
        while (k > 0 && ++pi.choice[k - 1] == m.actions()) {
            pi.choice[k - 1] = 0;
            --k;
        }
        if (k == 0) break;
    }
    std::set<Policy> out;
    for (auto& [policy, v] : evaluated) {
        bool optimal = true;
        for (std::size_t s = 0; s < m.states() && optimal; ++s) optimal = v[s] >= best[s] - cfg.tie_tolerance;
        if (optimal) out.insert(std::move(policy));
    }
    return out;
}

std::set<Policy> brute_force_optimal_policies(const SocialChoiceMDP& m, DiscountFactor gamma, const SolveConfig& cfg) {
    return brute_force_optimal_policies(DenseModel(m), gamma, cfg);
}

BellmanSumReport verify_theorem3(const DenseModel& m, const Policy& pi, DiscountFactor gamma, const SolveConfig& cfg) {
    BellmanSumReport report;
    report.policy = pi;
    const ValueTable v = policy_evaluation(m, pi, gamma, cfg);
    for (std::size_t s = 0; s < m.states(); ++s) {
        const auto mc = monte_carlo_return(m, pi, s, gamma, cfg);
        StateAgreement row;
        row.state = s;
        row.bellman_value = v.values[s];
        row.monte_carlo_value = mc.estimate;
        row.half_width = mc.half_width;
        row.tolerance = cfg.epsilon + mc.half_width;
        row.agrees = std::abs(row.bellman_value - row.monte_carlo_value) <= row.tolerance;
        report.all_agree = report.all_agree && row.agrees;
        report.states.push_back(row);
    }
    return report;
}

BellmanSumReport verify_theorem3(const SocialChoiceMDP& m, const Policy& pi, DiscountFactor gamma,
                                 const SolveConfig& cfg) {
    return verify_theorem3(DenseModel(m), pi, gamma, cfg);
}

OptimalSetReport verify_theorem4(const SocialChoiceMDP& m, DiscountFactor gamma, const SolveConfig& cfg) {
    if (!is_quasi_utilitarian(m.reward)) {
        throw InputError("optimal-set verification needs a quasi-utilitarian reward, got " + reward_kind_name(m.reward));
    }
    const DenseModel dense(m);
    OptimalSetReport report;
    const auto vi = value_iteration(dense, gamma, cfg);
    report.from_value_iteration = policies_from_action_sets(vi.optimal_actions, cfg.enumeration_cap);
    report.from_enumeration = brute_force_optimal_policies(dense, gamma, cfg);
    std::set_difference(report.from_value_iteration.begin(), report.from_value_iteration.end(),
                        report.from_enumeration.begin(), report.from_enumeration.end(),
                        std::inserter(report.only_value_iteration, report.only_value_iteration.end()));
    std::set_difference(report.from_enumeration.begin(), report.from_enumeration.end(),
                        report.from_value_iteration.begin(), report.from_value_iteration.end(),
                        std::inserter(report.only_enumeration, report.only_enumeration.end()));
    report.equal = report.only_value_iteration.empty() && report.only_enumeration.empty();
    return report;
}

}  // namespace scmdp
