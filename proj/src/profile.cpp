#include "scmdp/profile.hpp"

#include "scmdp/errors.hpp"

#include <algorithm>

namespace scmdp {

namespace {

void require_same_roster(const Profile& u, const Profile& v) {
    if (!u.is_rectangular() || !v.is_rectangular()) {
        throw InputError("profile rows have inconsistent lengths");
    }
    if (u.member_count() != v.member_count() || u.alternative_count() != v.alternative_count()) {
        throw InputError("profiles are over different member/alternative rosters");
    }
}

}  // namespace

bool UtilityFunction::is_constant() const {
    return std::adjacent_find(values.begin(), values.end(), std::not_equal_to<>{}) == values.end();
}

Profile::Profile(std::initializer_list<std::initializer_list<Rational>> utilities) {
    rows.reserve(utilities.size());
    for (const auto& row : utilities) {
        rows.push_back(UtilityFunction{std::vector<Rational>(row)});
    }
}

bool Profile::is_rectangular() const noexcept {
    const std::size_t width = alternative_count();
    return std::all_of(rows.begin(), rows.end(), [width](const UtilityFunction& r) { return r.values.size() == width; });
}

const Rational& Profile::utility(std::size_t member, std::size_t alternative) const {
    if (member >= rows.size() || alternative >= rows[member].values.size()) {
        throw InputError("utility index out of range: member " + std::to_string(member) + ", alternative " +
                         std::to_string(alternative));
    }
    return rows[member].values[alternative];
}

Rational utilitarian_sum(const Profile& profile, std::size_t alternative) {
    Rational total;
    for (std::size_t i = 0; i < profile.member_count(); ++i) {
        total += profile.utility(i, alternative);
    }
    return total;
}

bool unanimously_prefers(const Profile& profile, std::size_t x, std::size_t y) {
    for (std::size_t i = 0; i < profile.member_count(); ++i) {
        if (!(profile.utility(i, x) > profile.utility(i, y))) {
            return false;
        }
    }
    return true;
}

Profile apply_cuc(const Profile& base, const CucWitness& witness) {
    if (witness.beta <= 0) {
        throw InputError("CUC scale must be positive");
    }
    if (witness.alphas.size() != base.member_count()) {
        throw InputError("CUC shift vector length differs from member count");
    }
    Profile out = base;
    for (std::size_t i = 0; i < out.rows.size(); ++i) {
        for (auto& value : out.rows[i].values) {
            value = witness.alphas[i] + witness.beta * value;
        }
    }
    return out;
}

std::optional<CucWitness> profiles_cuc_related(const Profile& u, const Profile& v) {
    require_same_roster(u, v);
    const std::size_t members = u.member_count();
    const std::size_t alts = u.alternative_count();

    std::optional<Rational> beta;
    for (std::size_t i = 0; i < members && !beta; ++i) {
        for (std::size_t x = 1; x < alts; ++x) {
            const Rational dv = v.rows[i].values[x] - v.rows[i].values[0];
            if (dv != 0) {
                beta = (u.rows[i].values[x] - u.rows[i].values[0]) / dv;
                break;
            }
        }
    }

    CucWitness witness;
    if (!beta) {
        // Every v row is constant: only constant u rows can match, and any beta works.
        for (const auto& row : u.rows) {
            if (!row.is_constant()) return std::nullopt;
        }
        witness.beta = 1;
    } else {
        if (*beta <= 0) return std::nullopt;
        witness.beta = *beta;
    }

    witness.alphas.reserve(members);
    for (std::size_t i = 0; i < members; ++i) {
        const Rational alpha = alts == 0 ? Rational{} : u.rows[i].values[0] - witness.beta * v.rows[i].values[0];
        for (std::size_t x = 0; x < alts; ++x) {
            if (u.rows[i].values[x] != alpha + witness.beta * v.rows[i].values[x]) {
                return std::nullopt;
            }
        }
        witness.alphas.push_back(alpha);
    }
    return witness;
}

Profile apply_permutation(const Profile& base, std::span<const std::size_t> rho) {
    if (rho.size() != base.member_count()) {
        throw InputError("permutation length differs from member count");
    }
    std::vector<bool> seen(rho.size(), false);
    Profile out;
    out.rows.reserve(rho.size());
    for (const std::size_t j : rho) {
        if (j >= rho.size() || seen[j]) {
            throw InputError("not a permutation of the member roster");
        }
        seen[j] = true;
        out.rows.push_back(base.rows[j]);
    }
    return out;
}

std::optional<Permutation> profiles_permutation_related(const Profile& u, const Profile& v) {
    require_same_roster(u, v);
    // Greedy smallest-unused choice is lexicographically minimal: rows with equal
    // content are interchangeable, so an early small choice never blocks a later match.
    const std::size_t n = u.member_count();
    Permutation rho(n);
    std::vector<bool> used(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        bool found = false;
        for (std::size_t j = 0; j < n; ++j) {
            if (!used[j] && u.rows[j] == v.rows[i]) {
                rho[i] = j;
                used[j] = true;
                found = true;
                break;
            }
        }
        if (!found) return std::nullopt;
    }
    return rho;
}

}  // namespace scmdp
