/*
Copyright 2026 The strongsched Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "strongsched/errors.hpp"
#include "strongsched/rational.hpp"

using strongsched::Rational;
using strongsched::ValidationError;

TEST(Rational, KeepsLowestTermsWithPositiveDenominator) {
    Rational r(6, -4);
    EXPECT_EQ(r.num(), -3);
    EXPECT_EQ(r.den(), 2);
    EXPECT_EQ(Rational(0, 7), Rational(0));
    EXPECT_THROW(Rational(1, 0), std::domain_error);
}

TEST(Rational, ParsesIntegersDecimalsAndFractions) {
    EXPECT_EQ(Rational::parse("7"), Rational(7));
    EXPECT_EQ(Rational::parse("-3"), Rational(-3));
    EXPECT_EQ(Rational::parse("1.633"), Rational(1633, 1000));
    EXPECT_EQ(Rational::parse("10/4"), Rational(5, 2));
    for (const char* bad : {"", "abc", "1/0", "1.2.3", "1/", "/2", "1e5"}) {
        EXPECT_THROW(Rational::parse(bad), ValidationError) << bad;
    }
}

TEST(Rational, TextRoundTripsExactly) {
    EXPECT_EQ(Rational(5).to_string(), "5");
    EXPECT_EQ(Rational(1633, 1000).to_string(), "1.633");
    EXPECT_EQ(Rational(1, 3).to_string(), "1/3");
    EXPECT_EQ(Rational(-1, 4).to_string(), "-0.25");
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::int64_t> num(-100000, 100000);
    std::uniform_int_distribution<std::int64_t> den(1, 5000);
    for (int t = 0; t < 2000; ++t) {
        Rational r(num(rng), den(rng));
        EXPECT_EQ(Rational::parse(r.to_string()), r) << r.to_string();
    }
}

TEST(Rational, ArithmeticMatchesCrossMultiplication) {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<std::int64_t> d(-50, 50);
    std::uniform_int_distribution<std::int64_t> pos(1, 50);
    for (int t = 0; t < 2000; ++t) {
        std::int64_t a = d(rng), b = pos(rng), c = d(rng), e = pos(rng);
        Rational x(a, b), y(c, e);
        EXPECT_EQ(x + y, Rational(a * e + c * b, b * e));
        EXPECT_EQ(x - y, Rational(a * e - c * b, b * e));
        EXPECT_EQ(x * y, Rational(a * c, b * e));
        if (c != 0) {
            EXPECT_EQ(x / y, Rational(a * e, b * c));
        }
        EXPECT_EQ(x < y, a * e < c * b);
    }
}

TEST(Rational, FloorAndCeil) {
    EXPECT_EQ(Rational(7, 2).floor(), 3);
    EXPECT_EQ(Rational(7, 2).ceil(), 4);
    EXPECT_EQ(Rational(-7, 2).floor(), -4);
    EXPECT_EQ(Rational(-7, 2).ceil(), -3);
    EXPECT_EQ(Rational(4).ceil(), 4);
}

TEST(Rational, OverflowThrowsInsteadOfWrapping) {
    Rational big(std::numeric_limits<std::int64_t>::max() / 2);
    EXPECT_THROW(big * Rational(4), std::overflow_error);
    Rational tiny(1, std::numeric_limits<std::int64_t>::max() / 2);
    EXPECT_THROW(tiny * Rational(1, 3), std::overflow_error);
}

TEST(Rational, SqrtSixBoundAgreesWithLongDouble) {
    const long double bound = 0.5L + std::sqrt(6.0L) / 4.0L;
    EXPECT_TRUE(strongsched::at_most_half_plus_sqrt6_quarter(Rational(1)));
    EXPECT_TRUE(strongsched::at_most_half_plus_sqrt6_quarter(Rational(111237, 100000)));
    EXPECT_FALSE(strongsched::at_most_half_plus_sqrt6_quarter(Rational(111238, 100000)));
    EXPECT_FALSE(strongsched::at_most_half_plus_sqrt6_quarter(Rational(5, 4)));
    for (std::int64_t den = 1; den <= 300; ++den) {
        for (std::int64_t num = den; num <= 2 * den; ++num) {
            Rational x(num, den);
            const long double v = static_cast<long double>(num) / den;
            if (std::fabs(v - bound) < 1e-12L) continue;
            EXPECT_EQ(strongsched::at_most_half_plus_sqrt6_quarter(x), v <= bound) << x;
        }
    }
}
