#pragma once

#include "scmdp/rational.hpp"

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace scmdp {

struct Member {
    std::size_t id = 0;
    std::string label;

    friend bool operator==(const Member&, const Member&) = default;
};

struct Alternative {
    std::size_t id = 0;
    std::string label;

    friend bool operator==(const Alternative&, const Alternative&) = default;
};

/// One member's utility for every alternative, indexed by alternative id.
struct UtilityFunction {
    std::vector<Rational> values;

    bool is_constant() const;

    friend bool operator==(const UtilityFunction&, const UtilityFunction&) = default;
    friend auto operator<=>(const UtilityFunction&, const UtilityFunction&) = default;
};

/**
 * Assignment of a utility function to every group member.
 *
 * rows[i].values[x] is member i's utility for alternative x. A well-formed
 * profile is rectangular; use is_rectangular() or validate_mdp() to check.
 */
struct Profile {
    std::vector<UtilityFunction> rows;

    Profile() = default;
    explicit Profile(std::vector<UtilityFunction> r) : rows(std::move(r)) {}
    /// Convenience for literals: one inner vector per member.
    Profile(std::initializer_list<std::initializer_list<Rational>> utilities);

    std::size_t member_count() const noexcept { return rows.size(); }
    std::size_t alternative_count() const noexcept { return rows.empty() ? 0 : rows.front().values.size(); }
    bool is_rectangular() const noexcept;

    /// Bounds-checked access; throws InputError.
    const Rational& utility(std::size_t member, std::size_t alternative) const;

    friend bool operator==(const Profile&, const Profile&) = default;
    friend auto operator<=>(const Profile&, const Profile&) = default;
};

/// Sum over members of their utility for `alternative`.
Rational utilitarian_sum(const Profile& profile, std::size_t alternative);

/// True when every member strictly prefers `x` to `y` (vacuously true for no members).
bool unanimously_prefers(const Profile& profile, std::size_t x, std::size_t y);

/// Witness for cardinal unit comparability: u_i(x) = alphas[i] + beta * v_i(x).
struct CucWitness {
    Rational beta;
    std::vector<Rational> alphas;

    friend bool operator==(const CucWitness&, const CucWitness&) = default;
};

/// Builds alphas + beta * base. beta must be positive.
Profile apply_cuc(const Profile& base, const CucWitness& witness);

std::optional<CucWitness> profiles_cuc_related(const Profile& u, const Profile& v);

/// A permutation of members; entry i is rho(i).
using Permutation = std::vector<std::size_t>;

/// Returns the profile whose row i is base.rows[rho[i]].
Profile apply_permutation(const Profile& base, std::span<const std::size_t> rho);

/// Lexicographically smallest rho with v.rows[i] == u.rows[rho[i]] for all i, if any.
std::optional<Permutation> profiles_permutation_related(const Profile& u, const Profile& v);

}  // namespace scmdp
