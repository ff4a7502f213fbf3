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

#ifndef STRONGSCHED_RATIONAL_HPP
#define STRONGSCHED_RATIONAL_HPP

#include <algorithm>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

#include "strongsched/errors.hpp"

namespace strongsched {

namespace detail {

using wide_int = __int128;

inline std::int64_t narrow_checked(wide_int v) {
    if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min()) {
        throw std::overflow_error("strongsched: rational arithmetic overflow");
    }
    return static_cast<std::int64_t>(v);
}

inline wide_int wide_gcd(wide_int a, wide_int b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        wide_int t = a % b;
        a = b;
        b = t;
    }
    return a;
}

}  // namespace detail

/// Exact rational number with 64-bit numerator and denominator.
///
/// Always kept in lowest terms with a positive denominator. Intermediate
/// products are formed in 128 bits; a result that does not fit back into
/// 64 bits throws std::overflow_error rather than wrapping.
class Rational {
  public:
    constexpr Rational() = default;
    constexpr Rational(std::int64_t value) : num_(value), den_(1) {}  // NOLINT(implicit)
    Rational(std::int64_t num, std::int64_t den) { assign(num, den); }

    [[nodiscard]] constexpr std::int64_t num() const { return num_; }
    [[nodiscard]] constexpr std::int64_t den() const { return den_; }

    /// Parses "7", "-3", "1.633", "a/b" exactly.
    static Rational parse(std::string_view text);

    /// Canonical text: integers as "5", terminating decimals as "1.633",
    /// everything else as "a/b". parse(to_string(x)) == x.
    [[nodiscard]] std::string to_string() const;

    [[nodiscard]] double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    [[nodiscard]] std::int64_t floor() const {
        std::int64_t q = num_ / den_;
        if ((num_ % den_ != 0) && (num_ < 0)) --q;
        return q;
    }
    [[nodiscard]] std::int64_t ceil() const {
        std::int64_t q = num_ / den_;
        if ((num_ % den_ != 0) && (num_ > 0)) ++q;
        return q;
    }

    Rational operator-() const { return from_wide(-static_cast<detail::wide_int>(num_), den_); }

    friend Rational operator+(const Rational& a, const Rational& b) {
        using detail::wide_int;
        return from_wide(static_cast<wide_int>(a.num_) * b.den_ + static_cast<wide_int>(b.num_) * a.den_,
                         static_cast<wide_int>(a.den_) * b.den_);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        using detail::wide_int;
        return from_wide(static_cast<wide_int>(a.num_) * b.den_ - static_cast<wide_int>(b.num_) * a.den_,
                         static_cast<wide_int>(a.den_) * b.den_);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        using detail::wide_int;
        return from_wide(static_cast<wide_int>(a.num_) * b.num_, static_cast<wide_int>(a.den_) * b.den_);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        using detail::wide_int;
        if (b.num_ == 0) throw std::domain_error("strongsched: division by zero");
        return from_wide(static_cast<wide_int>(a.num_) * b.den_, static_cast<wide_int>(a.den_) * b.num_);
    }
    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    friend bool operator==(const Rational& a, const Rational& b) = default;
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        using detail::wide_int;
        return static_cast<wide_int>(a.num_) * b.den_ <=> static_cast<wide_int>(b.num_) * a.den_;
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

  private:
    static Rational from_wide(detail::wide_int num, detail::wide_int den) {
        if (den == 0) throw std::domain_error("strongsched: zero denominator");
        if (den < 0) {
            num = -num;
            den = -den;
        }
        detail::wide_int g = detail::wide_gcd(num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
        Rational r;
        r.num_ = detail::narrow_checked(num);
        r.den_ = detail::narrow_checked(den);
        return r;
    }
    void assign(std::int64_t num, std::int64_t den) { *this = from_wide(num, den); }

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

inline Rational Rational::parse(std::string_view text) {
    auto fail = [&]() -> Rational {
        throw ValidationError("not an exact rational: \"" + std::string(text) + "\"");
    };
    auto parse_digits = [&](std::string_view digits) -> detail::wide_int {
        if (digits.empty()) fail();
        detail::wide_int v = 0;
        for (char c : digits) {
            if (c < '0' || c > '9') fail();
            v = v * 10 + (c - '0');
            if (v > std::numeric_limits<std::int64_t>::max()) fail();
        }
        return v;
    };

    std::string_view s = text;
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    bool negative = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    if (s.empty()) return fail();

    detail::wide_int num = 0;
    detail::wide_int den = 1;
    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        num = parse_digits(s.substr(0, slash));
        den = parse_digits(s.substr(slash + 1));
        if (den == 0) fail();
    } else if (auto dot = s.find('.'); dot != std::string_view::npos) {
        std::string_view whole = s.substr(0, dot);
        std::string_view frac = s.substr(dot + 1);
        if (whole.empty() && frac.empty()) fail();
        num = whole.empty() ? 0 : parse_digits(whole);
        for (char c : frac) {
            if (c < '0' || c > '9') fail();
            num = num * 10 + (c - '0');
            den *= 10;
            if (num > std::numeric_limits<std::int64_t>::max() || den > std::numeric_limits<std::int64_t>::max()) fail();
        }
    } else {
        num = parse_digits(s);
    }
    return from_wide(negative ? -num : num, den);
}

inline std::string Rational::to_string() const {
    if (den_ == 1) return std::to_string(num_);
    // Terminating decimal iff the denominator has no prime factors but 2 and 5.
    std::int64_t rest = den_;
    int twos = 0;
    int fives = 0;
    while (rest % 2 == 0) {
        rest /= 2;
        ++twos;
    }
    while (rest % 5 == 0) {
        rest /= 5;
        ++fives;
    }
    if (rest != 1 || std::max(twos, fives) > 18) return std::to_string(num_) + "/" + std::to_string(den_);

    int digits = std::max(twos, fives);
    detail::wide_int scale = 1;
    for (int i = 0; i < digits; ++i) scale *= 10;
    detail::wide_int scaled = static_cast<detail::wide_int>(num_) * (scale / den_);
    bool negative = scaled < 0;
    if (negative) scaled = -scaled;
    detail::wide_int whole = scaled / scale;
    detail::wide_int frac = scaled % scale;
    std::string frac_text(static_cast<std::size_t>(digits), '0');
    for (int i = digits - 1; i >= 0; --i) {
        frac_text[static_cast<std::size_t>(i)] = static_cast<char>('0' + static_cast<int>(frac % 10));
        frac /= 10;
    }
    return (negative ? "-" : "") + std::to_string(static_cast<std::int64_t>(whole)) + "." + frac_text;
}

/// Exact test of `x <= 1/2 + sqrt(6)/4` without leaving the rationals.
inline bool at_most_half_plus_sqrt6_quarter(const Rational& x) {
    // x - 1/2 <= sqrt(6)/4  <=>  (4a - 2b)/b <= sqrt(6), with x = a/b, b > 0.
    using detail::wide_int;
    wide_int lhs = 4 * static_cast<wide_int>(x.num()) - 2 * static_cast<wide_int>(x.den());
    if (lhs <= 0) return true;
    return lhs * lhs <= 6 * static_cast<wide_int>(x.den()) * x.den();
}

}  // namespace strongsched

#endif  // STRONGSCHED_RATIONAL_HPP
