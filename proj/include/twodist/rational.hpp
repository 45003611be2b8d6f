// Exact rationals over BigInt, used for population deviations and proposal
// probabilities where boundary comparisons must not round.
#pragma once

#include <compare>
#include <string>

#include "twodist/bigint.hpp"

namespace twodist {

class Rational {
public:
    Rational() : num_(std::int64_t{0}), den_(std::int64_t{1}) {}
    Rational(std::int64_t v) : num_(v), den_(std::int64_t{1}) {}
    Rational(BigInt num, BigInt den);

    const BigInt& num() const { return num_; }
    const BigInt& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }

    Rational operator+(const Rational& o) const;
    Rational operator-(const Rational& o) const;
    Rational operator*(const Rational& o) const;
    Rational operator/(const Rational& o) const;

    std::strong_ordering operator<=>(const Rational& o) const;
    bool operator==(const Rational& o) const = default;

    double to_double() const;

    // Round-half-up decimal with the given number of significant digits,
    // in plain or scientific notation depending on magnitude.
    std::string to_decimal(int significant_digits) const;

private:
    BigInt num_, den_;  // den_ > 0, gcd(|num_|, den_) == 1
    void normalize();
};

}  // namespace twodist
