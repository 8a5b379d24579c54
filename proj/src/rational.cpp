#include "scmdp/rational.hpp"

#include "scmdp/errors.hpp"

#include <charconv>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace scmdp {

namespace {

using i128 = __int128;
using u128 = unsigned __int128;

u128 uabs(i128 v) { return v < 0 ? static_cast<u128>(-v) : static_cast<u128>(v); }

u128 gcd128(u128 a, u128 b) {
    while (b != 0) {
        const u128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

std::int64_t narrow(i128 v) {
    if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min()) {
        throw std::overflow_error("rational arithmetic overflow");
    }
    return static_cast<std::int64_t>(v);
}

// Reduces num/den (den != 0) and narrows to 64 bits.
void reduce_into(i128 num, i128 den, std::int64_t& out_num, std::int64_t& out_den) {
    if (den < 0) {
        num = -num;
        den = -den;
    }
    if (num == 0) {
        out_num = 0;
        out_den = 1;
        return;
    }
    const u128 g = gcd128(uabs(num), static_cast<u128>(den));
    if (g > 1) {
        num /= static_cast<i128>(g);
        den /= static_cast<i128>(g);
    }
    out_num = narrow(num);
    out_den = narrow(den);
}

std::int64_t parse_int(std::string_view text, std::string_view whole) {
    if (!text.empty() && text.front() == '+') {
        text.remove_prefix(1);
    }
    std::int64_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
        throw InputError("not a rational number: '" + std::string(whole) + "'");
    }
    return value;
}

}  // namespace

Rational::Rational(std::int64_t numerator, std::int64_t denominator) {
    if (denominator == 0) {
        throw InputError("rational with zero denominator");
    }
    reduce_into(numerator, denominator, num_, den_);
}

Rational Rational::parse(std::string_view text) {
    const std::string_view whole = text;
    while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
    while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
    if (text.empty()) {
        throw InputError("empty rational literal");
    }
    if (const auto slash = text.find('/'); slash != std::string_view::npos) {
        const std::int64_t p = parse_int(text.substr(0, slash), whole);
        const std::int64_t q = parse_int(text.substr(slash + 1), whole);
        if (q == 0) {
            throw InputError("zero denominator in '" + std::string(whole) + "'");
        }
        return Rational(p, q);
    }
    if (const auto dot = text.find('.'); dot != std::string_view::npos) {
        std::string_view int_part = text.substr(0, dot);
        const std::string_view frac_part = text.substr(dot + 1);
        bool negative = false;
        if (!int_part.empty() && (int_part.front() == '-' || int_part.front() == '+')) {
            negative = int_part.front() == '-';
            int_part.remove_prefix(1);
        }
        if (frac_part.empty() || frac_part.size() > 18 || frac_part.find_first_not_of("0123456789") != std::string_view::npos) {
            throw InputError("not a rational number: '" + std::string(whole) + "'");
        }
        const std::int64_t whole_units = int_part.empty() ? 0 : parse_int(int_part, whole);
        if (whole_units < 0) {
            throw InputError("not a rational number: '" + std::string(whole) + "'");
        }
        i128 scale = 1;
        for (std::size_t i = 0; i < frac_part.size(); ++i) scale *= 10;
        const i128 frac = parse_int(frac_part, whole);
        i128 num = static_cast<i128>(whole_units) * scale + frac;
        if (negative) num = -num;
        Rational r;
        reduce_into(num, scale, r.num_, r.den_);
        return r;
    }
    return Rational(parse_int(text, whole));
}

double Rational::to_double() const noexcept {
    return static_cast<double>(num_) / static_cast<double>(den_);
}

std::string Rational::to_string() const {
    if (den_ == 1) {
        return std::to_string(num_);
    }
    return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::operator-() const {
    Rational r;
    r.num_ = narrow(-static_cast<i128>(num_));
    r.den_ = den_;
    return r;
}

Rational& Rational::operator+=(const Rational& rhs) {
    if (den_ == 1 && rhs.den_ == 1) {
        if (__builtin_add_overflow(num_, rhs.num_, &num_)) {
            throw std::overflow_error("rational arithmetic overflow");
        }
        return *this;
    }
    const i128 num = static_cast<i128>(num_) * rhs.den_ + static_cast<i128>(rhs.num_) * den_;
    const i128 den = static_cast<i128>(den_) * rhs.den_;
    reduce_into(num, den, num_, den_);
    return *this;
}

Rational& Rational::operator-=(const Rational& rhs) { return *this += -rhs; }

Rational& Rational::operator*=(const Rational& rhs) {
    if (den_ == 1 && rhs.den_ == 1) {
        if (__builtin_mul_overflow(num_, rhs.num_, &num_)) {
            throw std::overflow_error("rational arithmetic overflow");
        }
        return *this;
    }
    reduce_into(static_cast<i128>(num_) * rhs.num_, static_cast<i128>(den_) * rhs.den_, num_, den_);
    return *this;
}

Rational& Rational::operator/=(const Rational& rhs) {
    if (rhs.num_ == 0) {
        throw DomainError("rational division by zero");
    }
    reduce_into(static_cast<i128>(num_) * rhs.den_, static_cast<i128>(den_) * rhs.num_, num_, den_);
    return *this;
}

std::strong_ordering operator<=>(const Rational& lhs, const Rational& rhs) noexcept {
    if (lhs.den_ == rhs.den_) {
        return lhs.num_ <=> rhs.num_;
    }
    const i128 l = static_cast<i128>(lhs.num_) * rhs.den_;
    const i128 r = static_cast<i128>(rhs.num_) * lhs.den_;
    return l < r ? std::strong_ordering::less : (l > r ? std::strong_ordering::greater : std::strong_ordering::equal);
}

Rational abs(const Rational& value) { return value < 0 ? -value : value; }

Rational pow(const Rational& base, unsigned exponent) {
    Rational result = 1;
    for (unsigned i = 0; i < exponent; ++i) {
        result *= base;
    }
    return result;
}

std::ostream& operator<<(std::ostream& os, const Rational& value) { return os << value.to_string(); }

}  // namespace scmdp
