#pragma once

#include "scmdp/model.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <utility>
#include <vector>

namespace scmdp {

/// Discount in the open interval (0, 1).
class DiscountFactor {
public:
    explicit DiscountFactor(double gamma);
    double value() const noexcept { return gamma_; }

private:
    double gamma_;
};

/// Per-state value of one policy (or of the optimum).
struct ValueTable {
    std::vector<double> values;
};

struct SolveConfig {
    double epsilon = 1e-9;                ///< sup-norm accuracy target
    std::size_t max_iterations = 1'000'000;
    double tie_tolerance = 1e-7;          ///< action values this close count as tied
    std::uint64_t seed = 0;               ///< Monte Carlo stream seed
    std::optional<std::size_t> horizon_cap;
    std::size_t trajectories = 10'000;
    std::size_t enumeration_cap = 1'000'000;
    /// Policy evaluation solves the linear system directly up to this many states.
    std::size_t direct_solve_limit = 64;

    void validate() const;
};

/**
 * Floating-point view of a validated SocialChoiceMDP: rewards evaluated once
 * per (state, action) and kernel rows converted to doubles.
 */
class DenseModel {
public:
    /// Throws InputError if `m` fails validation.
    explicit DenseModel(const SocialChoiceMDP& m);

    std::size_t states() const noexcept { return n_states_; }
    std::size_t actions() const noexcept { return n_actions_; }
    double reward(std::size_t s, std::size_t a) const { return rewards_[s * n_actions_ + a]; }
    std::span<const std::pair<std::size_t, double>> successors(std::size_t s, std::size_t a) const {
        return rows_[s * n_actions_ + a];
    }
    double max_abs_reward() const noexcept { return max_abs_reward_; }
    bool deterministic() const noexcept { return deterministic_; }

    /// Draws a successor of (s, a).
    std::size_t sample(std::size_t s, std::size_t a, std::mt19937_64& rng) const;

    /// Expected value of `v` after taking a in s.
    double expected_next(std::size_t s, std::size_t a, std::span<const double> v) const;

private:
    std::size_t n_states_;
    std::size_t n_actions_;
    std::vector<double> rewards_;
    std::vector<std::vector<std::pair<std::size_t, double>>> rows_;
    std::vector<std::vector<double>> cumulative_;
    double max_abs_reward_ = 0.0;
    bool deterministic_ = true;
};

/// One application of the policy's Bellman operator.
ValueTable bellman_backup(const DenseModel& m, const Policy& pi, const ValueTable& v, DiscountFactor gamma);
ValueTable bellman_backup(const SocialChoiceMDP& m, const Policy& pi, const ValueTable& v, DiscountFactor gamma);

/// max_s |v(s) - backup(v)(s)|.
double bellman_residual(const DenseModel& m, const Policy& pi, const ValueTable& v, DiscountFactor gamma);
/// Residual of the optimality operator.
double bellman_optimality_residual(const DenseModel& m, const ValueTable& v, DiscountFactor gamma);

ValueTable policy_evaluation(const DenseModel& m, const Policy& pi, DiscountFactor gamma, const SolveConfig& cfg);
ValueTable policy_evaluation(const SocialChoiceMDP& m, const Policy& pi, DiscountFactor gamma, const SolveConfig& cfg);

struct OptimalSolution {
    ValueTable values;
    Policy greedy;  ///< smallest action index among the tied best
    std::vector<std::vector<std::size_t>> optimal_actions;  ///< per state, ascending
    std::size_t iterations = 0;
    double residual = 0.0;
};

OptimalSolution value_iteration(const DenseModel& m, DiscountFactor gamma, const SolveConfig& cfg);
OptimalSolution value_iteration(const SocialChoiceMDP& m, DiscountFactor gamma, const SolveConfig& cfg);

/// Every policy whose choices lie in the per-state optimal action sets.
std::set<Policy> policies_from_action_sets(const std::vector<std::vector<std::size_t>>& sets, std::size_t cap);

struct MonteCarloEstimate {
    double estimate = 0.0;
    double half_width = 0.0;  ///< 95% normal-approximation
    std::size_t horizon = 0;
    std::size_t trajectories = 0;
};

/// Truncation horizon T with gamma^T * max|R| / (1 - gamma) <= epsilon.
std::size_t truncation_horizon(double max_abs_reward, DiscountFactor gamma, double epsilon);

/**
 * Mean discounted return sum_{t=0}^{T-1} gamma^t R(s_t, pi(s_t)) from s_0 = start
 * over cfg.trajectories sampled paths. Trajectory k draws from a generator
 * seeded by (cfg.seed, start, k), so results do not depend on evaluation order.
 */
MonteCarloEstimate monte_carlo_return(const DenseModel& m, const Policy& pi, std::size_t start, DiscountFactor gamma,
                                      const SolveConfig& cfg);

/// All deterministic policies within tie_tolerance of the per-state optimum at
/// every state. Throws SizeError when |A|^|S| exceeds cfg.enumeration_cap.
std::set<Policy> brute_force_optimal_policies(const DenseModel& m, DiscountFactor gamma, const SolveConfig& cfg);
std::set<Policy> brute_force_optimal_policies(const SocialChoiceMDP& m, DiscountFactor gamma, const SolveConfig& cfg);

struct StateAgreement {
    std::size_t state = 0;
    double bellman_value = 0.0;
    double monte_carlo_value = 0.0;
    double half_width = 0.0;
    double tolerance = 0.0;
    bool agrees = false;
};

/// Bellman fixed point versus sampled discounted returns, state by state.
struct BellmanSumReport {
    Policy policy;
    std::vector<StateAgreement> states;
    bool all_agree = true;
};

BellmanSumReport verify_theorem3(const DenseModel& m, const Policy& pi, DiscountFactor gamma, const SolveConfig& cfg);
BellmanSumReport verify_theorem3(const SocialChoiceMDP& m, const Policy& pi, DiscountFactor gamma,
                                 const SolveConfig& cfg);

/// Optimal-policy set from value iteration versus exhaustive search.
struct OptimalSetReport {
    std::set<Policy> from_value_iteration;
    std::set<Policy> from_enumeration;
    std::set<Policy> only_value_iteration;
    std::set<Policy> only_enumeration;
    bool equal = true;
};

/// Requires a quasi-utilitarian reward (InputError otherwise).
OptimalSetReport verify_theorem4(const SocialChoiceMDP& m, DiscountFactor gamma, const SolveConfig& cfg);

}  // namespace scmdp
