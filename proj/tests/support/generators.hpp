#pragma once

#include "scmdp/profile.hpp"
#include "scmdp/welfare.hpp"

#include <random>

namespace scmdp::testing {

inline Rational random_rational(std::mt19937_64& rng, int lo, int hi) {
    std::uniform_int_distribution<int> num(lo * 4, hi * 4);
    return Rational(num(rng), 4);
}

inline Profile random_profile(std::mt19937_64& rng, std::size_t members, std::size_t alternatives, int lo, int hi) {
    std::uniform_int_distribution<int> dist(lo, hi);
    Profile p;
    p.rows.resize(members);
    for (auto& row : p.rows) {
        for (std::size_t x = 0; x < alternatives; ++x) row.values.emplace_back(dist(rng));
    }
    return p;
}

/// alpha + beta * base with beta drawn from a small positive set.
inline Profile random_cuc_image(std::mt19937_64& rng, const Profile& base) {
    static const Rational betas[] = {Rational(1, 3), Rational(1, 2), 1, 2, Rational(5, 2), 3};
    std::uniform_int_distribution<std::size_t> pick(0, std::size(betas) - 1);
    CucWitness w;
    w.beta = betas[pick(rng)];
    for (std::size_t i = 0; i < base.member_count(); ++i) w.alphas.push_back(random_rational(rng, -3, 3));
    return apply_cuc(base, w);
}

/// Reward drawn from every kind: utilitarian, each registry transform, a few
/// custom expressions, and a nearest-by-sum table over `anchors`.
inline RewardSpec random_reward(std::mt19937_64& rng, const std::vector<Profile>& anchors) {
    static const char* const custom[] = {
        "(utility 0 alt)",
        "0",
        "(sum-over-members (pow (utility member alt) 3))",
        "(sum-over-members (max (utility member alt) 0))",
        "(min (utility 0 alt) (sum-over-members (utility member alt)))",
        "(* (utility 0 alt) (sum-over-members (utility member alt)))",
        "(if-pos (utility 0 0) (utility 0 alt) (- (sum-over-members (utility member alt))))",
    };
    const auto transforms = transform_registry();
    const std::size_t kinds = 1 + transforms.size() + std::size(custom) + 1;
    const std::size_t k = std::uniform_int_distribution<std::size_t>(0, kinds - 1)(rng);
    if (k == 0) return UtilitarianReward{};
    if (k <= transforms.size()) return QuasiUtilitarianReward{transforms[k - 1]};
    if (k <= transforms.size() + std::size(custom)) {
        return CustomReward{Expression::parse(custom[k - 1 - transforms.size()])};
    }
    TabularReward t;
    t.extension = TabularExtension::NearestBySum;
    for (const auto& p : anchors) {
        std::vector<Rational> values;
        for (std::size_t x = 0; x < p.alternative_count(); ++x) values.push_back(random_rational(rng, -5, 5));
        t.entries.push_back({p, std::move(values)});
    }
    return t;
}

}  // namespace scmdp::testing
