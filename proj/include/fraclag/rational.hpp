#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

#include "fraclag/error.hpp"

namespace fraclag {

// Exact rational number. Invariant: always canonical (gcd-reduced, positive
// denominator, zero stored as 0/1); mpq_class maintains this after every
// canonicalize(), and all arithmetic below preserves it.
class Rational {
public:
    Rational() : value_(0) {}
    Rational(long n) : value_(n) {}  // NOLINT(google-explicit-constructor)
    Rational(long n, long d) {
        if (d == 0) throw Error(ErrorCode::DomainError, "rational with zero denominator");
        value_ = mpq_class(n, d);
        value_.canonicalize();
    }
    explicit Rational(mpq_class v) : value_(std::move(v)) { value_.canonicalize(); }

    // Parses "123", "-4", "3/4". Arbitrary precision.
    static Rational from_string(const std::string& text) {
        mpq_class v;
        if (v.set_str(text, 10) != 0)
            throw Error(ErrorCode::DomainError, "not a rational literal: '" + text + "'");
        if (v.get_den() == 0)
            throw Error(ErrorCode::DomainError, "rational with zero denominator: '" + text + "'");
        v.canonicalize();
        return Rational(std::move(v));
    }

    bool is_zero() const { return value_ == 0; }
    bool is_one() const { return value_ == 1; }
    bool is_integer() const { return value_.get_den() == 1; }
    int sign() const { return sgn(value_); }

    Rational operator-() const { return Rational(mpq_class(-value_)); }
    Rational& operator+=(const Rational& o) { value_ += o.value_; return *this; }
    Rational& operator-=(const Rational& o) { value_ -= o.value_; return *this; }
    Rational& operator*=(const Rational& o) { value_ *= o.value_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.is_zero()) throw Error(ErrorCode::DomainError, "division by zero rational");
        value_ /= o.value_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.value_ == b.value_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return a.value_ != b.value_; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.value_ < b.value_; }
    friend bool operator<=(const Rational& a, const Rational& b) { return a.value_ <= b.value_; }
    friend bool operator>(const Rational& a, const Rational& b) { return a.value_ > b.value_; }
    friend bool operator>=(const Rational& a, const Rational& b) { return a.value_ >= b.value_; }

    Rational abs() const { return Rational(mpq_class(::abs(value_))); }

    Rational inverse() const {
        if (is_zero()) throw Error(ErrorCode::DomainError, "inverse of zero rational");
        return Rational(mpq_class(1) / value_);
    }

    // "3", "-3", "1/2", "-1/2"
    std::string str() const { return value_.get_str(); }
    std::string numerator_str() const { return value_.get_num().get_str(); }
    std::string denominator_str() const { return value_.get_den().get_str(); }

    double to_double() const { return value_.get_d(); }

    const mpq_class& raw() const { return value_; }

private:
    mpq_class value_;
};

}  // namespace fraclag
