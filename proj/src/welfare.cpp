#include "scmdp/welfare.hpp"

#include "scmdp/errors.hpp"

#include <algorithm>

namespace scmdp {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

const TabularReward::Entry& tabular_row(const TabularReward& t, const Profile& profile) {
    for (const auto& e : t.entries) {
        if (e.profile == profile) return e;
    }
    if (t.extension == TabularExtension::None || t.entries.empty()) {
        throw DomainError("tabular reward has no value for this profile and no extension rule");
    }
    const TabularReward::Entry* best = nullptr;
    Rational best_distance;
    for (const auto& e : t.entries) {
        if (e.profile.alternative_count() != profile.alternative_count()) continue;
        Rational distance;
        for (std::size_t x = 0; x < profile.alternative_count(); ++x) {
            distance += abs(utilitarian_sum(e.profile, x) - utilitarian_sum(profile, x));
        }
        if (best == nullptr || distance < best_distance) {
            best = &e;
            best_distance = distance;
        }
    }
    if (best == nullptr) {
        throw DomainError("tabular reward has no entry over a matching alternative roster");
    }
    return *best;
}

}  // namespace

MonotoneTransform MonotoneTransform::identity() { return MonotoneTransform(IdentityTransform{}); }

MonotoneTransform MonotoneTransform::affine(const Rational& a, const Rational& b) {
    if (a <= 0) throw InputError("affine transform needs a > 0, got " + a.to_string());
    return MonotoneTransform(AffineTransform{a, b});
}

MonotoneTransform MonotoneTransform::odd_power(unsigned k) {
    if (k % 2 == 0) throw InputError("power transform needs an odd exponent, got " + std::to_string(k));
    return MonotoneTransform(OddPowerTransform{k});
}

MonotoneTransform MonotoneTransform::piecewise_linear(std::vector<std::pair<Rational, Rational>> points) {
    if (points.size() < 2) throw InputError("piecewise-linear transform needs at least two breakpoints");
    for (std::size_t i = 1; i < points.size(); ++i) {
        if (!(points[i - 1].first < points[i].first) || !(points[i - 1].second < points[i].second)) {
            throw InputError("piecewise-linear breakpoints must increase strictly in both coordinates");
        }
    }
    return MonotoneTransform(PiecewiseLinearTransform{std::move(points)});
}

std::string MonotoneTransform::name() const {
    return std::visit(overloaded{
                          [](const IdentityTransform&) { return std::string("identity"); },
                          [](const AffineTransform& t) {
                              return "affine(" + t.a.to_string() + "," + t.b.to_string() + ")";
                          },
                          [](const OddPowerTransform& t) { return "odd-power(" + std::to_string(t.k) + ")"; },
                          [](const PiecewiseLinearTransform& t) {
                              return "piecewise-linear(" + std::to_string(t.points.size()) + " points)";
                          },
                      },
                      kind_);
}

Rational transform_apply(const MonotoneTransform& t, const Rational& v) {
    return std::visit(overloaded{
                          [&](const IdentityTransform&) { return v; },
                          [&](const AffineTransform& a) { return a.a * v + a.b; },
                          [&](const OddPowerTransform& p) { return pow(v, p.k); },
                          [&](const PiecewiseLinearTransform& p) {
                              const auto& pts = p.points;
                              if (v < pts.front().first || v > pts.back().first) {
                                  throw DomainError("value " + v.to_string() + " outside piecewise-linear range [" +
                                                    pts.front().first.to_string() + ", " +
                                                    pts.back().first.to_string() + "]");
                              }
                              const auto hi = std::lower_bound(pts.begin(), pts.end(), v,
                                                               [](const auto& pt, const Rational& x) {
                                                                   return pt.first < x;
                                                               });
                              if (hi->first == v) return hi->second;
                              const auto lo = hi - 1;
                              return lo->second +
                                     (hi->second - lo->second) * (v - lo->first) / (hi->first - lo->first);
                          },
                      },
                      t.kind());
}

std::vector<MonotoneTransform> transform_registry() {
    return {
        MonotoneTransform::identity(),
        MonotoneTransform::affine(3, 5),
        MonotoneTransform::affine(Rational(1, 2), -7),
        MonotoneTransform::odd_power(3),
        MonotoneTransform::odd_power(5),
        MonotoneTransform::piecewise_linear({{-100000, -300000}, {-1, -3}, {0, 0}, {1, Rational(1, 2)}, {100000, 50000}}),
    };
}

std::string reward_kind_name(const RewardSpec& r) {
    return std::visit(overloaded{
                          [](const UtilitarianReward&) { return std::string("utilitarian"); },
                          [](const QuasiUtilitarianReward& q) { return "quasi(" + q.transform.name() + ")"; },
                          [](const TabularReward&) { return std::string("tabular"); },
                          [](const CustomReward& c) { return "custom(" + c.expr.to_string() + ")"; },
                      },
                      r);
}

bool is_quasi_utilitarian(const RewardSpec& r) {
    return std::holds_alternative<QuasiUtilitarianReward>(r) || std::holds_alternative<UtilitarianReward>(r);
}

bool is_total(const RewardSpec& r) {
    if (const auto* t = std::get_if<TabularReward>(&r)) return t->extension != TabularExtension::None;
    return true;
}

Rational eval_reward(const RewardSpec& r, const Profile& profile, std::size_t alternative) {
    if (alternative >= profile.alternative_count()) {
        throw InputError("alternative index " + std::to_string(alternative) + " out of range");
    }
    return std::visit(overloaded{
                          [&](const UtilitarianReward&) { return utilitarian_sum(profile, alternative); },
                          [&](const QuasiUtilitarianReward& q) {
                              return transform_apply(q.transform, utilitarian_sum(profile, alternative));
                          },
                          [&](const TabularReward& t) {
                              const auto& row = tabular_row(t, profile);
                              if (alternative >= row.values.size()) {
                                  throw DomainError("tabular reward row is shorter than the alternative roster");
                              }
                              return row.values[alternative];
                          },
                          [&](const CustomReward& c) { return c.expr.evaluate(profile, alternative); },
                      },
                      r);
}

bool SocialRelation::is_complete() const {
    for (std::size_t x = 0; x < n_; ++x)
        for (std::size_t y = 0; y < n_; ++y)
            if (!weak(x, y) && !weak(y, x)) return false;
    return true;
}

bool SocialRelation::is_transitive() const {
    for (std::size_t x = 0; x < n_; ++x)
        for (std::size_t y = 0; y < n_; ++y)
            if (weak(x, y))
                for (std::size_t z = 0; z < n_; ++z)
                    if (weak(y, z) && !weak(x, z)) return false;
    return true;
}

SocialRelation relation_from_values(const std::vector<Rational>& values) {
    SocialRelation rel(values.size());
    for (std::size_t x = 0; x < values.size(); ++x)
        for (std::size_t y = 0; y < values.size(); ++y) rel.set_weak(x, y, values[x] >= values[y]);
    return rel;
}

SocialRelation induced_swf(const RewardSpec& r, const Profile& profile) {
    std::vector<Rational> values(profile.alternative_count());
    for (std::size_t x = 0; x < values.size(); ++x) values[x] = eval_reward(r, profile, x);
    return relation_from_values(values);
}

SocialRelation utilitarian_swf(const Profile& profile) {
    const std::size_t n = profile.alternative_count();
    SocialRelation rel(n);
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y) rel.set_weak(x, y, utilitarian_sum(profile, x) >= utilitarian_sum(profile, y));
    return rel;
}

bool strictly_prefers(const SocialRelation& rel, std::size_t x, std::size_t y) {
    return rel.weak(x, y) && !rel.weak(y, x);
}

}  // namespace scmdp
