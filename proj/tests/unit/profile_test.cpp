#include "scmdp/errors.hpp"
#include "scmdp/profile.hpp"
#include "scmdp/scenarios.hpp"

#include "support/generators.hpp"

#include "doctest.h"

using namespace scmdp;

TEST_CASE("utilitarian_sum on the drift fixture") {
    const auto f1 = fixture_f1();
    const Profile& ua = f1.states[0];
    CHECK(utilitarian_sum(ua, 0) == 2);
    CHECK(utilitarian_sum(ua, 1) == 0);

    const Profile single{{Rational(3, 7), -4}};
    CHECK(utilitarian_sum(single, 0) == Rational(3, 7));
    CHECK(utilitarian_sum(single, 1) == -4);

    CHECK_THROWS_AS(utilitarian_sum(ua, 2), InputError);
}

TEST_CASE("profiles_cuc_related: identity gives beta 1 and zero shifts") {
    const Profile u{{1, 4, -2}, {0, 3, 5}};
    const auto w = profiles_cuc_related(u, u);
    REQUIRE(w);
    CHECK(w->beta == 1);
    CHECK(w->alphas == std::vector<Rational>{0, 0});
}

TEST_CASE("profiles_cuc_related recovers a doubled and shifted profile") {
    // v = 2u + shifts  =>  u = v/2 - shifts/2, i.e. beta = 1/2, alpha = -shifts/2.
    const Profile u{{1, 4, -2}, {0, 3, 5}};
    const Profile v{{2 * 1 + 3, 2 * 4 + 3, 2 * -2 + 3}, {2 * 0 - 5, 2 * 3 - 5, 2 * 5 - 5}};
    const auto w = profiles_cuc_related(u, v);
    REQUIRE(w);
    CHECK(w->beta == Rational(1, 2));
    CHECK(w->alphas == std::vector<Rational>{Rational(-3, 2), Rational(5, 2)});
    CHECK(apply_cuc(v, *w) == u);
}

TEST_CASE("profiles_cuc_related: constant rows cannot map to non-constant rows") {
    const auto f1 = fixture_f1();
    CHECK_FALSE(profiles_cuc_related(f1.states[0], f1.states[1]));
    // Degenerate direction: both constant gives beta 1 and the row offsets.
    const Profile c1{{3, 3}, {1, 1}};
    const Profile c2{{5, 5}, {-2, -2}};
    const auto w = profiles_cuc_related(c1, c2);
    REQUIRE(w);
    CHECK(w->beta == 1);
    CHECK(w->alphas == std::vector<Rational>{-2, 3});
}

TEST_CASE("profiles_cuc_related rejects negative scales and inconsistent shifts") {
    const Profile u{{1, 0}, {0, 1}};
    CHECK_FALSE(profiles_cuc_related(u, Profile{{0, 1}, {1, 0}}));      // beta = -1
    CHECK_FALSE(profiles_cuc_related(u, Profile{{2, 0}, {0, 1}}));      // member-specific scale
    CHECK_THROWS_AS(profiles_cuc_related(u, Profile{{1, 0, 0}, {0, 1, 0}}), InputError);
}

TEST_CASE("CUC witnesses are symmetric: (beta, alpha) yields (1/beta, -alpha/beta)") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 300; ++trial) {
        const Profile v = testing::random_profile(rng, 3, 3, -5, 5);
        const Profile u = testing::random_cuc_image(rng, v);
        const auto forward = profiles_cuc_related(u, v);
        REQUIRE(forward);
        CHECK(apply_cuc(v, *forward) == u);
        const auto backward = profiles_cuc_related(v, u);
        REQUIRE(backward);
        CHECK(apply_cuc(u, *backward) == v);
        if (!v.rows[0].is_constant() || !v.rows[1].is_constant() || !v.rows[2].is_constant()) {
            CHECK(backward->beta == 1 / forward->beta);
            for (std::size_t i = 0; i < 3; ++i) CHECK(backward->alphas[i] == -forward->alphas[i] / forward->beta);
        }
    }
}

TEST_CASE("profiles_permutation_related") {
    const Profile u{{1, 2}, {3, 4}, {5, 6}};
    SUBCASE("identity") {
        const auto rho = profiles_permutation_related(u, u);
        REQUIRE(rho);
        CHECK(*rho == Permutation{0, 1, 2});
    }
    SUBCASE("swap of two distinct rows gives the transposition") {
        const Profile v{{3, 4}, {1, 2}, {5, 6}};
        const auto rho = profiles_permutation_related(u, v);
        REQUIRE(rho);
        CHECK(*rho == Permutation{1, 0, 2});
    }
    SUBCASE("different multisets of rows") {
        CHECK_FALSE(profiles_permutation_related(u, Profile{{1, 2}, {1, 2}, {5, 6}}));
    }
    SUBCASE("repeated rows pick the lexicographically smallest permutation") {
        const Profile w{{1, 1}, {2, 2}, {1, 1}};
        const Profile w2{{2, 2}, {1, 1}, {1, 1}};
        const auto rho = profiles_permutation_related(w, w2);
        REQUIRE(rho);
        CHECK(*rho == Permutation{1, 0, 2});
    }
}

TEST_CASE("a returned permutation reproduces the target profile") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 300; ++trial) {
        const Profile u = testing::random_profile(rng, 4, 2, -1, 1);
        Permutation rho{0, 1, 2, 3};
        std::shuffle(rho.begin(), rho.end(), rng);
        const Profile v = apply_permutation(u, rho);
        const auto found = profiles_permutation_related(u, v);
        REQUIRE(found);
        CHECK(apply_permutation(u, *found) == v);
        CHECK(*found <= rho);
    }
}

TEST_CASE("apply_permutation rejects non-permutations") {
    const Profile u{{1, 2}, {3, 4}};
    CHECK_THROWS_AS(apply_permutation(u, Permutation{0, 0}), InputError);
    CHECK_THROWS_AS(apply_permutation(u, Permutation{0}), InputError);
}
