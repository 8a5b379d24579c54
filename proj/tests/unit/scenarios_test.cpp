#include "scmdp/axioms.hpp"
#include "scmdp/errors.hpp"
#include "scmdp/scenarios.hpp"

#include "doctest.h"

#include <cmath>

using namespace scmdp;

namespace {

// Hand values for the fixture at U_A: staying with x forever earns 2 per step,
// moving with y earns 0 now and 20 per step from the next step on.
double stay_value(double g) { return 2 / (1 - g); }
double move_value(double g) { return 20 * g / (1 - g); }

}  // namespace

TEST_CASE("fixture_f1 shape") {
    const auto m = fixture_f1();
    CHECK(validate_mdp(m).ok());
    CHECK(m.state_names == std::vector<std::string>{"U_A", "U_B"});
    CHECK(unanimously_prefers(m.states[0], 0, 1));
    CHECK_FALSE(unanimously_prefers(m.states[1], 0, 1));
    CHECK(std::holds_alternative<UtilitarianReward>(m.reward));
}

TEST_CASE("fixture_f1: reward passes the SWF axioms while the optimal policy breaks Pareto (SCF)") {
    const auto m = fixture_f1();
    const auto report = verify_theorem2(m.reward, m.states, CheckMode::both());
    CHECK(report.axioms_hold);
    CHECK(report.agreement_holds);

    const auto sol = value_iteration(m, DiscountFactor(0.9), SolveConfig{});
    CHECK(sol.greedy.choice[0] == 1);
    CHECK_FALSE(check_pareto_scf(sol.greedy, m).passed());
}

TEST_CASE("find_pareto_scf_violation on the fixture") {
    const auto m = fixture_f1();
    const auto v = find_pareto_scf_violation(m, DiscountFactor(0.9), SolveConfig{});
    REQUIRE(v);
    CHECK(v->state == 0);
    CHECK(v->dominating == 0);
    CHECK(v->chosen == 1);
    CHECK(std::abs(v->dominating_value - stay_value(0.9) * 0 - (2 + 0.9 * 180)) <= 1e-6);
    CHECK(std::abs(v->chosen_value - 180) <= 1e-6);
    CHECK(v->chosen_value > v->dominating_value);

    CHECK_FALSE(find_pareto_scf_violation(m, DiscountFactor(0.01), SolveConfig{}));
    // Myopic regime arithmetic: x is worth about 2.02, y about 0.202.
    CHECK(stay_value(0.01) == doctest::Approx(2.0202).epsilon(1e-4));
    CHECK(move_value(0.01) == doctest::Approx(0.20202).epsilon(1e-4));
}

TEST_CASE("the violation appears exactly when moving beats staying") {
    const auto m = fixture_f1();
    for (double g : {0.02, 0.05, 0.09, 0.11, 0.2, 0.5, 0.95}) {
        CAPTURE(g);
        const bool expected = move_value(g) > stay_value(g);
        CHECK(find_pareto_scf_violation(m, DiscountFactor(g), SolveConfig{}).has_value() == expected);
    }
}

TEST_CASE("gen_drift_mdp basics") {
    DriftParams params;
    params.seed = 4;
    const auto m = gen_drift_mdp(3, 2, 5, params);
    CHECK(validate_mdp(m).ok());
    CHECK(m.state_count() == 5);
    CHECK(m.members.size() == 3);
    CHECK(m.action_count() == 2);
    for (const auto& p : m.states) {
        for (const auto& row : p.rows) {
            for (const auto& v : row.values) {
                CHECK(v.is_integer());
                CHECK(v >= -10);
                CHECK(v <= 10);
            }
        }
    }
}

TEST_CASE("gen_drift_mdp is a pure function of its arguments") {
    DriftParams params;
    params.seed = 77;
    const auto a = gen_drift_mdp(2, 3, 4, params);
    const auto b = gen_drift_mdp(2, 3, 4, params);
    CHECK(a.states == b.states);
    CHECK(a.kernel == b.kernel);
    params.seed = 78;
    CHECK(gen_drift_mdp(2, 3, 4, params).states != a.states);
}

TEST_CASE("stickiness 1 gives the identity kernel") {
    DriftParams params;
    params.stickiness = 1;
    const auto m = gen_drift_mdp(2, 3, 4, params);
    for (std::size_t s = 0; s < 4; ++s) {
        for (std::size_t a = 0; a < 3; ++a) CHECK(m.kernel.row(s, a) == KernelRow{{s, 1}});
    }
}

TEST_CASE("a single state gives unit rows") {
    const auto m = gen_drift_mdp(2, 3, 1, DriftParams{});
    for (std::size_t a = 0; a < 3; ++a) CHECK(m.kernel.row(0, a) == KernelRow{{0, 1}});
}

TEST_CASE("attraction favours states where the chosen action scores higher") {
    DriftParams params;
    params.stickiness = 0;
    params.attraction = 1;
    params.seed = 2;
    const auto m = gen_drift_mdp(2, 2, 4, params);
    for (std::size_t a = 0; a < 2; ++a) {
        const auto& row = m.kernel.row(0, a);
        for (const auto& t1 : row) {
            for (const auto& t2 : row) {
                if (utilitarian_sum(m.states[t1.next_state], a) > utilitarian_sum(m.states[t2.next_state], a)) {
                    CHECK(t1.probability > t2.probability);
                }
            }
        }
    }
}

TEST_CASE("generator errors") {
    DriftParams narrow;
    narrow.utility_min = 0;
    narrow.utility_max = 1;
    CHECK_THROWS_AS(gen_drift_mdp(1, 2, 5, narrow), GenerationError);
    CHECK(gen_drift_mdp(1, 2, 4, narrow).state_count() == 4);
    CHECK_THROWS_AS(gen_drift_mdp(0, 2, 2, DriftParams{}), InputError);
    DriftParams bad;
    bad.stickiness = Rational(3, 2);
    CHECK_THROWS_AS(gen_drift_mdp(1, 2, 2, bad), InputError);
}

TEST_CASE("action-independent kernels never produce a Pareto (SCF) violation") {
    DriftParams params;
    params.action_independent = true;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        params.seed = seed;
        const auto m = gen_drift_mdp(1 + seed % 3, 2 + seed % 3, 2 + seed % 5, params);
        CHECK_FALSE(find_pareto_scf_violation(m, DiscountFactor(0.9), SolveConfig{}));
        if (m.state_count() <= 4) {
            // Brute force agrees: every optimal policy maximises the immediate sum.
            for (const auto& pi : brute_force_optimal_policies(m, DiscountFactor(0.9), SolveConfig{})) {
                CHECK(check_pareto_scf(pi, m).passed());
            }
        }
    }
}
