#pragma once

#include "scmdp/profile.hpp"
#include "scmdp/rational.hpp"

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace scmdp {

/**
 * Closed arithmetic expression over a profile's utilities, written in prefix
 * notation.
 *
 *   expr := RATIONAL                       literal: "3", "-1/2", "0.25"
 *         | (utility MEMBER ALT)           MEMBER: index or `member`; ALT: index or `alt`
 *         | (+ expr expr...) | (* expr expr...)
 *         | (- expr) | (- expr expr)
 *         | (pow expr K)                   K: non-negative integer literal
 *         | (min expr expr...) | (max expr expr...)
 *         | (sum-over-members expr)        binds `member` for its body
 *         | (if-pos expr expr expr)        second arg if first > 0, else third
 *
 * `alt` is the alternative the reward is evaluated for. `sum` and `product`
 * are accepted as spellings of `+` and `*`. There is no division, so every
 * well-formed expression is total on profiles whose rosters cover the literal
 * indices it mentions.
 */
class Expression {
public:
    enum class Op { Constant, Utility, Add, Sub, Neg, Mul, Pow, Min, Max, SumOverMembers, IfPositive };

    struct Node {
        Op op = Op::Constant;
        Rational constant;
        std::optional<std::size_t> member;       // nullopt: bound `member`
        std::optional<std::size_t> alternative;  // nullopt: `alt`
        unsigned exponent = 0;
        std::vector<std::shared_ptr<const Node>> args;
    };

    /// Throws InputError with the offending position on malformed input.
    static Expression parse(std::string_view text);
    static Expression constant(const Rational& value);

    /// Canonical prefix form; parse(to_string()) reproduces the same tree.
    std::string to_string() const;

    Rational evaluate(const Profile& profile, std::size_t alternative) const;

    /// Largest literal member / alternative index referenced, if any.
    std::optional<std::size_t> max_member_literal() const;
    std::optional<std::size_t> max_alternative_literal() const;

    const Node& root() const { return *root_; }

    friend bool operator==(const Expression& a, const Expression& b) { return a.to_string() == b.to_string(); }

private:
    explicit Expression(std::shared_ptr<const Node> root) : root_(std::move(root)) {}
    std::shared_ptr<const Node> root_;
};

}  // namespace scmdp
