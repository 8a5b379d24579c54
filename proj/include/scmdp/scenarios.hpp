#pragma once

#include "scmdp/model.hpp"
#include "scmdp/solver.hpp"

#include <cstdint>
#include <optional>

namespace scmdp {

/**
 * Two identical members choosing between x and y.
 *
 *   U_A: both members have (x: 1, y: 0)     x keeps the group in U_A
 *   U_B: both members have (x: 10, y: 10)   y moves U_A to U_B; U_B is absorbing
 *
 * Utilitarian reward. In U_A everyone prefers x, yet for gamma above 1/10
 * choosing y is optimal.
 */
SocialChoiceMDP fixture_f1();

/**
 * Parameters of the preference-drift transition family.
 *
 * Row (s, a) puts `stickiness` on s. Of the remaining mass, a (1 - attraction)
 * share is spread evenly over all states and an `attraction` share goes to
 * state s' in proportion to 1 + (sum_a(s') - min_s sum_a(s)), so states where
 * a's utilitarian sum is higher draw more mass. With `action_independent`, the
 * weights use the sum over all alternatives instead, so rows ignore a.
 */
struct DriftParams {
    Rational stickiness = Rational(1, 2);
    Rational attraction = Rational(1, 2);
    std::uint64_t seed = 0;
    bool action_independent = false;
    int utility_min = -10;
    int utility_max = 10;
};

/// Random instance with utilitarian reward. Throws GenerationError when the
/// utility grid cannot supply `states` distinct profiles, InputError on bad counts.
SocialChoiceMDP gen_drift_mdp(std::size_t members, std::size_t alternatives, std::size_t states,
                              const DriftParams& params);

struct ParetoScfViolation {
    std::size_t state = 0;
    std::size_t dominating = 0;  ///< alternative every member prefers
    std::size_t chosen = 0;      ///< what the optimal policy picks
    double dominating_value = 0.0;  ///< long-run action value of `dominating`
    double chosen_value = 0.0;
    Policy policy;
};

/// Greedy optimal policy, then the first unanimously dominated choice it makes.
std::optional<ParetoScfViolation> find_pareto_scf_violation(const SocialChoiceMDP& m, DiscountFactor gamma,
                                                            const SolveConfig& cfg);

}  // namespace scmdp
