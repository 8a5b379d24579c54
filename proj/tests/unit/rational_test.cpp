#include "scmdp/errors.hpp"
#include "scmdp/rational.hpp"

#include "doctest.h"

#include <random>
#include <stdexcept>

using scmdp::Rational;

TEST_CASE("rationals are stored reduced with a positive denominator") {
    const Rational r(6, -4);
    CHECK(r.numerator() == -3);
    CHECK(r.denominator() == 2);
    CHECK(Rational(0, -7) == Rational(0));
    CHECK(Rational(0, -7).denominator() == 1);
    CHECK_THROWS_AS(Rational(1, 0), scmdp::InputError);
}

TEST_CASE("parse accepts integers, fractions and exact decimals") {
    CHECK(Rational::parse("7") == 7);
    CHECK(Rational::parse("-3/6") == Rational(-1, 2));
    CHECK(Rational::parse("0.9") == Rational(9, 10));
    CHECK(Rational::parse("-1.25") == Rational(-5, 4));
    CHECK(Rational::parse(".5") == Rational(1, 2));
    CHECK(Rational::parse(" 2/3 ") == Rational(2, 3));
    CHECK_THROWS_AS(Rational::parse(""), scmdp::InputError);
    CHECK_THROWS_AS(Rational::parse("1/0"), scmdp::InputError);
    CHECK_THROWS_AS(Rational::parse("abc"), scmdp::InputError);
    CHECK_THROWS_AS(Rational::parse("1e-3"), scmdp::InputError);
    CHECK_THROWS_AS(Rational::parse("1."), scmdp::InputError);
}

TEST_CASE("to_string round-trips through parse") {
    for (const Rational r : {Rational(0), Rational(-5), Rational(9, 10), Rational(-22, 7)}) {
        CHECK(Rational::parse(r.to_string()) == r);
    }
    CHECK(Rational(9, 10).to_string() == "9/10");
    CHECK(Rational(4, 2).to_string() == "2");
}

TEST_CASE("ordering agrees with real-number order") {
    CHECK(Rational(1, 3) < Rational(1, 2));
    CHECK(Rational(-1, 2) < Rational(-1, 3));
    CHECK(Rational(2, 4) == Rational(1, 2));
    CHECK(Rational(7, 3) > 2);
}

TEST_CASE("arithmetic is exact: (a + b) - b == a") {
    std::mt19937_64 rng(42);
    std::uniform_int_distribution<int> num(-1000, 1000);
    std::uniform_int_distribution<int> den(1, 1000);
    for (int i = 0; i < 2000; ++i) {
        const Rational a(num(rng), den(rng));
        const Rational b(num(rng), den(rng));
        CHECK((a + b) - b == a);
        CHECK((a * b) == (b * a));
        if (b != 0) CHECK((a / b) * b == a);
        CHECK(((a < b) == (a.to_double() < b.to_double()) || a == b));
    }
}

TEST_CASE("pow and abs") {
    CHECK(pow(Rational(-2), 3) == -8);
    CHECK(pow(Rational(2, 3), 2) == Rational(4, 9));
    CHECK(pow(Rational(5), 0) == 1);
    CHECK(abs(Rational(-3, 4)) == Rational(3, 4));
}

TEST_CASE("overflow is reported, not wrapped") {
    const Rational big(INT64_MAX / 2 + 1);
    CHECK_THROWS_AS(big + big, std::overflow_error);
    CHECK_THROWS_AS(big * 3, std::overflow_error);
    CHECK_THROWS_AS(Rational(1, 3) / 0, scmdp::DomainError);
}
