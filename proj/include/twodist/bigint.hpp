// Arbitrary-precision signed integers.
//
// Spanning-tree determinants on county-scale Laplacians overflow 64-bit by
// dozens of digits, and proposal probabilities are ratios of such numbers,
// so the counting paths run on exact big integers throughout.
#pragma once

#include <compare>
#include <concepts>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace twodist {

class BigInt {
public:
    BigInt() = default;
    template <typename T>
        requires std::signed_integral<T>
    BigInt(T v) {
        init_signed(static_cast<std::int64_t>(v));
    }
    template <typename T>
        requires std::unsigned_integral<T>
    BigInt(T v) {
        init_unsigned(static_cast<std::uint64_t>(v));
    }

    // Parses an optional leading '-' followed by decimal digits.
    static BigInt from_decimal(std::string_view s);

    bool is_zero() const { return sign_ == 0; }
    int sign() const { return sign_; }
    bool is_negative() const { return sign_ < 0; }

    BigInt operator-() const;
    BigInt abs() const;

    BigInt& operator+=(const BigInt& o);
    BigInt& operator-=(const BigInt& o);
    BigInt& operator*=(const BigInt& o);

    friend BigInt operator+(BigInt a, const BigInt& b) { return a += b; }
    friend BigInt operator-(BigInt a, const BigInt& b) { return a -= b; }
    friend BigInt operator*(const BigInt& a, const BigInt& b);

    // Truncated division (C semantics): quotient rounds toward zero and
    // the remainder carries the dividend's sign. Division by zero throws.
    static void divmod(const BigInt& num, const BigInt& den, BigInt& quot, BigInt& rem);
    friend BigInt operator/(const BigInt& a, const BigInt& b);
    friend BigInt operator%(const BigInt& a, const BigInt& b);

    // Floor division: rounds toward negative infinity.
    static BigInt floor_div(const BigInt& num, const BigInt& den);

    BigInt& operator<<=(unsigned bits);
    friend BigInt operator<<(BigInt a, unsigned bits) { return a <<= bits; }

    static BigInt pow2(unsigned bits);  // 2^bits
    static BigInt pow(const BigInt& base, unsigned exp);
    static BigInt gcd(BigInt a, BigInt b);

    std::strong_ordering operator<=>(const BigInt& o) const;
    bool operator==(const BigInt& o) const = default;

    // Fits in int64 / best-effort double conversion (may lose precision).
    bool fits_int64() const;
    std::int64_t to_int64() const;  // throws if out of range
    double to_double() const;

    std::string to_string() const;

    // Number of significant bits of |x|; 0 for x == 0.
    std::size_t bit_length() const;

private:
    // sign_ in {-1, 0, +1}; mag_ little-endian base 2^64, no trailing zeros.
    int sign_ = 0;
    std::vector<std::uint64_t> mag_;

    void init_signed(std::int64_t v);
    void init_unsigned(std::uint64_t v);
    void trim();
    static int cmp_mag(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b);
    static std::vector<std::uint64_t> add_mag(const std::vector<std::uint64_t>& a,
                                              const std::vector<std::uint64_t>& b);
    // requires |a| >= |b|
    static std::vector<std::uint64_t> sub_mag(const std::vector<std::uint64_t>& a,
                                              const std::vector<std::uint64_t>& b);
    static std::vector<std::uint64_t> mul_mag(const std::vector<std::uint64_t>& a,
                                              const std::vector<std::uint64_t>& b);
    static void divmod_mag(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b,
                           std::vector<std::uint64_t>& q, std::vector<std::uint64_t>& r);
};

}  // namespace twodist
