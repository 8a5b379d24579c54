#pragma once

#include "scmdp/expression.hpp"
#include "scmdp/profile.hpp"
#include "scmdp/rational.hpp"

#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace scmdp {

// ---------------------------------------------------------------------------
// Strictly increasing transforms of the utilitarian sum.
// ---------------------------------------------------------------------------

struct IdentityTransform {
    friend bool operator==(const IdentityTransform&, const IdentityTransform&) = default;
};

/// v -> a*v + b, a > 0.
struct AffineTransform {
    Rational a = 1;
    Rational b = 0;
    friend bool operator==(const AffineTransform&, const AffineTransform&) = default;
};

/// v -> v^k, k odd.
struct OddPowerTransform {
    unsigned k = 1;
    friend bool operator==(const OddPowerTransform&, const OddPowerTransform&) = default;
};

/// Linear interpolation between breakpoints that increase strictly in both
/// coordinates; undefined outside [first.x, last.x].
struct PiecewiseLinearTransform {
    std::vector<std::pair<Rational, Rational>> points;
    friend bool operator==(const PiecewiseLinearTransform&, const PiecewiseLinearTransform&) = default;
};

class MonotoneTransform {
public:
    using Kind = std::variant<IdentityTransform, AffineTransform, OddPowerTransform, PiecewiseLinearTransform>;

    MonotoneTransform() = default;

    static MonotoneTransform identity();
    /// Throws InputError unless a > 0.
    static MonotoneTransform affine(const Rational& a, const Rational& b);
    /// Throws InputError unless k is odd.
    static MonotoneTransform odd_power(unsigned k);
    /// Throws InputError unless there are >= 2 points, strictly increasing in x and y.
    static MonotoneTransform piecewise_linear(std::vector<std::pair<Rational, Rational>> points);

    const Kind& kind() const noexcept { return kind_; }
    std::string name() const;

    friend bool operator==(const MonotoneTransform&, const MonotoneTransform&) = default;

private:
    explicit MonotoneTransform(Kind k) : kind_(std::move(k)) {}
    Kind kind_;
};

/// Exact image of v. Piecewise-linear transforms throw DomainError outside their range.
Rational transform_apply(const MonotoneTransform& t, const Rational& v);

/// Transforms used by the property and acceptance suites.
std::vector<MonotoneTransform> transform_registry();

// ---------------------------------------------------------------------------
// Reward specifications.
// ---------------------------------------------------------------------------

struct UtilitarianReward {
    friend bool operator==(const UtilitarianReward&, const UtilitarianReward&) = default;
};

struct QuasiUtilitarianReward {
    MonotoneTransform transform;
    friend bool operator==(const QuasiUtilitarianReward&, const QuasiUtilitarianReward&) = default;
};

enum class TabularExtension {
    None,
    /// Unknown profiles borrow the row of the stored profile whose vector of
    /// utilitarian sums is closest in L1 distance (first one on ties).
    NearestBySum,
};

struct TabularReward {
    struct Entry {
        Profile profile;
        std::vector<Rational> values;  // one per alternative
        friend bool operator==(const Entry&, const Entry&) = default;
    };
    std::vector<Entry> entries;
    TabularExtension extension = TabularExtension::None;

    friend bool operator==(const TabularReward&, const TabularReward&) = default;
};

struct CustomReward {
    Expression expr;
    friend bool operator==(const CustomReward&, const CustomReward&) = default;
};

using RewardSpec = std::variant<UtilitarianReward, QuasiUtilitarianReward, TabularReward, CustomReward>;

std::string reward_kind_name(const RewardSpec& r);
/// Utilitarian counts: it is the identity-transform case.
bool is_quasi_utilitarian(const RewardSpec& r);
/// Whether the reward is defined on profiles it has never seen.
bool is_total(const RewardSpec& r);

/// R(profile, alternative). Throws DomainError for tabular misses without an
/// extension rule and InputError for out-of-range indices.
Rational eval_reward(const RewardSpec& r, const Profile& profile, std::size_t alternative);

// ---------------------------------------------------------------------------
// Social relations.
// ---------------------------------------------------------------------------

/// Weak social preference over alternatives for one profile.
class SocialRelation {
public:
    SocialRelation() = default;
    explicit SocialRelation(std::size_t alternatives) : n_(alternatives), weak_(alternatives * alternatives, 0) {}

    std::size_t size() const noexcept { return n_; }
    bool weak(std::size_t x, std::size_t y) const { return weak_.at(x * n_ + y) != 0; }
    void set_weak(std::size_t x, std::size_t y, bool value) { weak_.at(x * n_ + y) = value ? 1 : 0; }

    bool is_complete() const;
    bool is_transitive() const;

    friend bool operator==(const SocialRelation&, const SocialRelation&) = default;

private:
    std::size_t n_ = 0;
    std::vector<unsigned char> weak_;
};

/// x weakly above y iff R(profile, x) >= R(profile, y).
SocialRelation induced_swf(const RewardSpec& r, const Profile& profile);

/// Relation built from a precomputed reward vector.
SocialRelation relation_from_values(const std::vector<Rational>& values);

/// Utilitarianism computed directly from the member sums.
SocialRelation utilitarian_swf(const Profile& profile);

bool strictly_prefers(const SocialRelation& rel, std::size_t x, std::size_t y);

}  // namespace scmdp
