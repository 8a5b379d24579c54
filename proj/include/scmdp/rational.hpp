#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>

namespace scmdp {

/**
 * Exact rational number over 64-bit integers, always kept in reduced form with
 * a positive denominator.
 *
 * Intermediate products are formed in 128 bits and reduced before narrowing;
 * a result that still does not fit throws std::overflow_error instead of
 * wrapping.
 */
class Rational {
public:
    constexpr Rational() noexcept = default;
    constexpr Rational(std::int64_t value) noexcept : num_(value) {}  // NOLINT(implicit)
    Rational(std::int64_t numerator, std::int64_t denominator);

    /// Accepts "p", "p/q" and plain decimals such as "-0.25" (converted exactly).
    static Rational parse(std::string_view text);

    constexpr std::int64_t numerator() const noexcept { return num_; }
    constexpr std::int64_t denominator() const noexcept { return den_; }
    constexpr bool is_integer() const noexcept { return den_ == 1; }

    double to_double() const noexcept;
    /// "p" for integers, "p/q" otherwise. parse(to_string()) == *this.
    std::string to_string() const;

    Rational operator-() const;
    Rational& operator+=(const Rational& rhs);
    Rational& operator-=(const Rational& rhs);
    Rational& operator*=(const Rational& rhs);
    Rational& operator/=(const Rational& rhs);

    friend Rational operator+(Rational lhs, const Rational& rhs) { return lhs += rhs; }
    friend Rational operator-(Rational lhs, const Rational& rhs) { return lhs -= rhs; }
    friend Rational operator*(Rational lhs, const Rational& rhs) { return lhs *= rhs; }
    friend Rational operator/(Rational lhs, const Rational& rhs) { return lhs /= rhs; }

    friend constexpr bool operator==(const Rational&, const Rational&) noexcept = default;
    friend std::strong_ordering operator<=>(const Rational& lhs, const Rational& rhs) noexcept;

private:
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

Rational abs(const Rational& value);
Rational pow(const Rational& base, unsigned exponent);

std::ostream& operator<<(std::ostream& os, const Rational& value);

}  // namespace scmdp

template <>
struct std::hash<scmdp::Rational> {
    std::size_t operator()(const scmdp::Rational& r) const noexcept {
        const std::size_t h = std::hash<std::int64_t>{}(r.numerator());
        return h ^ (std::hash<std::int64_t>{}(r.denominator()) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
    }
};
