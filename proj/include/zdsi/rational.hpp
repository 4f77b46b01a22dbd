#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

#include "zdsi/error.hpp"

namespace zdsi {

using BigInt = boost::multiprecision::cpp_int;

/// Exact rational number, always in canonical form (gcd 1, positive denominator).
///
/// Probabilities and distortions on the analytic path live here, so values such
/// as 13/60 or 7/5 compare bit-exactly in tests. Backed by an arbitrary precision
/// rational so long chains of exact arithmetic (the membership LP in particular)
/// cannot overflow.
class Rational {
public:
    using value_type = boost::multiprecision::cpp_rational;

    Rational() = default;
    Rational(std::int64_t n) : v_(n) {} // NOLINT(google-explicit-constructor)
    Rational(std::int64_t n, std::int64_t d)
    {
        if (d == 0) fail(Errc::DomainError, "zero denominator");
        v_ = d < 0 ? value_type(-BigInt(n), -BigInt(d)) : value_type(BigInt(n), BigInt(d));
    }
    Rational(const BigInt& n, const BigInt& d)
    {
        if (d == 0) fail(Errc::DomainError, "zero denominator");
        v_ = d < 0 ? value_type(BigInt(-n), BigInt(-d)) : value_type(n, d);
    }
    explicit Rational(value_type v) : v_(std::move(v)) {}

    /// Parses "num/den" or a bare integer. Whitespace around the tokens is not accepted.
    static Rational parse(std::string_view text)
    {
        auto parse_int = [&](std::string_view s) {
            if (s.empty()) fail(Errc::ParseError, "malformed rational '" + std::string(text) + "'");
            std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
            if (i == s.size()) fail(Errc::ParseError, "malformed rational '" + std::string(text) + "'");
            for (std::size_t k = i; k < s.size(); ++k) {
                if (s[k] < '0' || s[k] > '9') fail(Errc::ParseError, "malformed rational '" + std::string(text) + "'");
            }
            while (i + 1 < s.size() && s[i] == '0') ++i; // cpp_int reads a leading 0 as octal
            BigInt v(std::string(s.substr(i)));
            return s[0] == '-' ? BigInt(-v) : v;
        };
        auto slash = text.find('/');
        if (slash == std::string_view::npos) return Rational(parse_int(text), BigInt(1));
        BigInt n = parse_int(text.substr(0, slash));
        BigInt d = parse_int(text.substr(slash + 1));
        if (d == 0) fail(Errc::ParseError, "zero denominator in '" + std::string(text) + "'");
        return Rational(n, d);
    }

    BigInt num() const { return boost::multiprecision::numerator(v_); }
    BigInt den() const { return boost::multiprecision::denominator(v_); }
    const value_type& value() const { return v_; }

    double to_double() const { return v_.convert_to<double>(); }

    /// "num/den", or just "num" when the denominator is one.
    std::string str() const
    {
        auto d = den();
        if (d == 1) return num().str();
        return num().str() + "/" + d.str();
    }

    bool is_zero() const { return v_ == 0; }
    int sign() const { return v_.sign(); }

    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o)
    {
        if (o.v_ == 0) fail(Errc::DomainError, "division by zero");
        v_ /= o.v_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    friend Rational operator-(const Rational& a) { return Rational(value_type(-a.v_)); }

    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b)
    {
        if (a.v_ < b.v_) return std::strong_ordering::less;
        if (a.v_ > b.v_) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

private:
    value_type v_{0};
};

inline Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }
inline double to_double(const Rational& r) { return r.to_double(); }
inline double to_double(double v) { return v; }

} // namespace zdsi
