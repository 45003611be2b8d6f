#include "twodist/bigint.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <stdexcept>

namespace twodist {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

// Splits a base-2^64 magnitude into base-2^32 digits (little-endian).
std::vector<std::uint32_t> to_u32(const std::vector<u64>& a) {
    std::vector<std::uint32_t> out;
    out.reserve(a.size() * 2);
    for (u64 w : a) {
        out.push_back(static_cast<std::uint32_t>(w));
        out.push_back(static_cast<std::uint32_t>(w >> 32));
    }
    while (!out.empty() && out.back() == 0) out.pop_back();
    return out;
}

std::vector<u64> from_u32(const std::vector<std::uint32_t>& a) {
    std::vector<u64> out;
    out.reserve((a.size() + 1) / 2);
    for (std::size_t i = 0; i < a.size(); i += 2) {
        u64 w = a[i];
        if (i + 1 < a.size()) w |= static_cast<u64>(a[i + 1]) << 32;
        out.push_back(w);
    }
    while (!out.empty() && out.back() == 0) out.pop_back();
    return out;
}

}  // namespace

void BigInt::init_signed(std::int64_t v) {
    if (v == 0) return;
    sign_ = v < 0 ? -1 : 1;
    // careful with INT64_MIN
    u64 m = v < 0 ? ~static_cast<u64>(v) + 1 : static_cast<u64>(v);
    mag_.push_back(m);
}

void BigInt::init_unsigned(std::uint64_t v) {
    if (v == 0) return;
    sign_ = 1;
    mag_.push_back(v);
}

BigInt BigInt::from_decimal(std::string_view s) {
    bool neg = false;
    std::size_t i = 0;
    if (i < s.size() && (s[i] == '-' || s[i] == '+')) {
        neg = s[i] == '-';
        ++i;
    }
    if (i == s.size()) throw std::invalid_argument("BigInt::from_decimal: empty");
    BigInt r;
    BigInt ten(std::int64_t{10});
    for (; i < s.size(); ++i) {
        char c = s[i];
        if (c < '0' || c > '9') throw std::invalid_argument("BigInt::from_decimal: bad digit");
        r *= ten;
        r += BigInt(static_cast<std::int64_t>(c - '0'));
    }
    if (neg && !r.is_zero()) r.sign_ = -1;
    return r;
}

void BigInt::trim() {
    while (!mag_.empty() && mag_.back() == 0) mag_.pop_back();
    if (mag_.empty()) sign_ = 0;
}

int BigInt::cmp_mag(const std::vector<u64>& a, const std::vector<u64>& b) {
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    for (std::size_t i = a.size(); i-- > 0;) {
        if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
    }
    return 0;
}

std::vector<u64> BigInt::add_mag(const std::vector<u64>& a, const std::vector<u64>& b) {
    const auto& big = a.size() >= b.size() ? a : b;
    const auto& sml = a.size() >= b.size() ? b : a;
    std::vector<u64> r(big.size() + 1, 0);
    u64 carry = 0;
    for (std::size_t i = 0; i < big.size(); ++i) {
        u128 cur = static_cast<u128>(big[i]) + (i < sml.size() ? sml[i] : 0) + carry;
        r[i] = static_cast<u64>(cur);
        carry = static_cast<u64>(cur >> 64);
    }
    r[big.size()] = carry;
    while (!r.empty() && r.back() == 0) r.pop_back();
    return r;
}

std::vector<u64> BigInt::sub_mag(const std::vector<u64>& a, const std::vector<u64>& b) {
    std::vector<u64> r(a.size(), 0);
    u64 borrow = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        u64 bi = i < b.size() ? b[i] : 0;
        u64 cur = a[i] - bi;
        u64 borrow2 = a[i] < bi;
        u64 out = cur - borrow;
        borrow2 |= cur < borrow;
        r[i] = out;
        borrow = borrow2;
    }
    while (!r.empty() && r.back() == 0) r.pop_back();
    return r;
}

std::vector<u64> BigInt::mul_mag(const std::vector<u64>& a, const std::vector<u64>& b) {
    if (a.empty() || b.empty()) return {};
    std::vector<u64> r(a.size() + b.size(), 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        u64 carry = 0;
        for (std::size_t j = 0; j < b.size(); ++j) {
            u128 cur = static_cast<u128>(a[i]) * b[j] + r[i + j] + carry;
            r[i + j] = static_cast<u64>(cur);
            carry = static_cast<u64>(cur >> 64);
        }
        r[i + b.size()] = carry;
    }
    while (!r.empty() && r.back() == 0) r.pop_back();
    return r;
}

// Knuth Algorithm D over base-2^32 digits; intermediates fit in uint64.
void BigInt::divmod_mag(const std::vector<u64>& a64, const std::vector<u64>& b64,
                        std::vector<u64>& q64, std::vector<u64>& r64) {
    std::vector<std::uint32_t> u = to_u32(a64), v = to_u32(b64);
    if (v.empty()) throw std::domain_error("BigInt: division by zero");
    if (u.size() < v.size()) {
        q64.clear();
        r64 = a64;
        return;
    }
    constexpr u64 BASE = u64{1} << 32;
    if (v.size() == 1) {
        u64 d = v[0], rem = 0;
        std::vector<std::uint32_t> q(u.size());
        for (std::size_t i = u.size(); i-- > 0;) {
            u64 cur = (rem << 32) | u[i];
            q[i] = static_cast<std::uint32_t>(cur / d);
            rem = cur % d;
        }
        q64 = from_u32(q);
        r64 = rem ? std::vector<u64>{rem} : std::vector<u64>{};
        return;
    }

    const int n = static_cast<int>(v.size());
    const int m = static_cast<int>(u.size()) - n;
    const int shift = std::countl_zero(v[n - 1]);

    // normalize so the divisor's top digit has its high bit set
    std::vector<std::uint32_t> vn(n), un(u.size() + 1);
    for (int i = n - 1; i > 0; --i)
        vn[i] = shift ? (v[i] << shift) | (v[i - 1] >> (32 - shift)) : v[i];
    vn[0] = v[0] << shift;
    un[u.size()] = shift ? (u[u.size() - 1] >> (32 - shift)) : 0;
    for (std::size_t i = u.size() - 1; i > 0; --i)
        un[i] = shift ? (u[i] << shift) | (u[i - 1] >> (32 - shift)) : u[i];
    un[0] = u[0] << shift;

    std::vector<std::uint32_t> q(m + 1, 0);
    for (int j = m; j >= 0; --j) {
        u64 num = (static_cast<u64>(un[j + n]) << 32) | un[j + n - 1];
        u64 qhat = num / vn[n - 1];
        u64 rhat = num % vn[n - 1];
        while (qhat >= BASE ||
               qhat * vn[n - 2] > ((rhat << 32) | un[j + n - 2])) {
            --qhat;
            rhat += vn[n - 1];
            if (rhat >= BASE) break;
        }
        // multiply and subtract
        std::int64_t borrow = 0;
        u64 carry = 0;
        for (int i = 0; i < n; ++i) {
            u64 p = qhat * vn[i] + carry;
            carry = p >> 32;
            std::int64_t t = static_cast<std::int64_t>(un[i + j]) -
                             static_cast<std::int64_t>(p & 0xFFFFFFFFu) - borrow;
            borrow = 0;
            while (t < 0) {
                t += static_cast<std::int64_t>(BASE);
                ++borrow;
            }
            un[i + j] = static_cast<std::uint32_t>(t);
        }
        std::int64_t t = static_cast<std::int64_t>(un[j + n]) -
                         static_cast<std::int64_t>(carry) - borrow;
        if (t < 0) {
            // qhat was one too large: add the divisor back
            --qhat;
            u64 c2 = 0;
            for (int i = 0; i < n; ++i) {
                u64 s = static_cast<u64>(un[i + j]) + vn[i] + c2;
                un[i + j] = static_cast<std::uint32_t>(s);
                c2 = s >> 32;
            }
            t += static_cast<std::int64_t>(c2);
        }
        un[j + n] = static_cast<std::uint32_t>(t);
        q[j] = static_cast<std::uint32_t>(qhat);
    }

    // denormalize remainder
    std::vector<std::uint32_t> r(n);
    for (int i = 0; i < n - 1; ++i)
        r[i] = shift ? (un[i] >> shift) | (un[i + 1] << (32 - shift)) : un[i];
    r[n - 1] = un[n - 1] >> shift;

    q64 = from_u32(q);
    r64 = from_u32(r);
}

BigInt BigInt::operator-() const {
    BigInt r = *this;
    r.sign_ = -r.sign_;
    return r;
}

BigInt BigInt::abs() const {
    BigInt r = *this;
    if (r.sign_ < 0) r.sign_ = 1;
    return r;
}

BigInt& BigInt::operator+=(const BigInt& o) {
    if (o.sign_ == 0) return *this;
    if (sign_ == 0) {
        *this = o;
        return *this;
    }
    if (sign_ == o.sign_) {
        mag_ = add_mag(mag_, o.mag_);
    } else {
        int c = cmp_mag(mag_, o.mag_);
        if (c == 0) {
            sign_ = 0;
            mag_.clear();
        } else if (c > 0) {
            mag_ = sub_mag(mag_, o.mag_);
        } else {
            mag_ = sub_mag(o.mag_, mag_);
            sign_ = o.sign_;
        }
    }
    trim();
    return *this;
}

BigInt& BigInt::operator-=(const BigInt& o) { return *this += -o; }

BigInt operator*(const BigInt& a, const BigInt& b) {
    BigInt r;
    if (a.sign_ == 0 || b.sign_ == 0) return r;
    r.sign_ = a.sign_ * b.sign_;
    r.mag_ = BigInt::mul_mag(a.mag_, b.mag_);
    r.trim();
    return r;
}

BigInt& BigInt::operator*=(const BigInt& o) {
    *this = *this * o;
    return *this;
}

void BigInt::divmod(const BigInt& num, const BigInt& den, BigInt& quot, BigInt& rem) {
    if (den.sign_ == 0) throw std::domain_error("BigInt: division by zero");
    std::vector<u64> q, r;
    divmod_mag(num.mag_, den.mag_, q, r);
    quot.mag_ = std::move(q);
    quot.sign_ = quot.mag_.empty() ? 0 : num.sign_ * den.sign_;
    rem.mag_ = std::move(r);
    rem.sign_ = rem.mag_.empty() ? 0 : num.sign_;
    quot.trim();
    rem.trim();
}

BigInt operator/(const BigInt& a, const BigInt& b) {
    BigInt q, r;
    BigInt::divmod(a, b, q, r);
    return q;
}

BigInt operator%(const BigInt& a, const BigInt& b) {
    BigInt q, r;
    BigInt::divmod(a, b, q, r);
    return r;
}

BigInt BigInt::floor_div(const BigInt& num, const BigInt& den) {
    BigInt q, r;
    divmod(num, den, q, r);
    if (!r.is_zero() && (num.sign_ * den.sign_) < 0) q -= BigInt(std::int64_t{1});
    return q;
}

BigInt& BigInt::operator<<=(unsigned bits) {
    if (sign_ == 0 || bits == 0) return *this;
    unsigned words = bits / 64, rem = bits % 64;
    mag_.insert(mag_.begin(), words, 0);
    if (rem) {
        u64 carry = 0;
        for (std::size_t i = words; i < mag_.size(); ++i) {
            u64 nc = mag_[i] >> (64 - rem);
            mag_[i] = (mag_[i] << rem) | carry;
            carry = nc;
        }
        if (carry) mag_.push_back(carry);
    }
    return *this;
}

BigInt BigInt::pow2(unsigned bits) {
    BigInt r(std::int64_t{1});
    return r <<= bits;
}

BigInt BigInt::pow(const BigInt& base, unsigned exp) {
    BigInt r(std::int64_t{1}), b = base;
    while (exp) {
        if (exp & 1u) r *= b;
        exp >>= 1;
        if (exp) b *= b;
    }
    return r;
}

BigInt BigInt::gcd(BigInt a, BigInt b) {
    a = a.abs();
    b = b.abs();
    while (!b.is_zero()) {
        BigInt r = a % b;
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

std::strong_ordering BigInt::operator<=>(const BigInt& o) const {
    if (sign_ != o.sign_) return sign_ <=> o.sign_;
    int c = cmp_mag(mag_, o.mag_) * sign_;
    return c <=> 0;
}

bool BigInt::fits_int64() const {
    if (mag_.size() > 1) return false;
    if (mag_.empty()) return true;
    if (sign_ > 0) return mag_[0] <= static_cast<u64>(INT64_MAX);
    return mag_[0] <= static_cast<u64>(INT64_MAX) + 1;
}

std::int64_t BigInt::to_int64() const {
    if (!fits_int64()) throw std::overflow_error("BigInt::to_int64: out of range");
    if (mag_.empty()) return 0;
    if (sign_ > 0) return static_cast<std::int64_t>(mag_[0]);
    return -static_cast<std::int64_t>(mag_[0] - 1) - 1;
}

double BigInt::to_double() const {
    double r = 0;
    for (std::size_t i = mag_.size(); i-- > 0;) r = r * 18446744073709551616.0 + static_cast<double>(mag_[i]);
    return sign_ < 0 ? -r : r;
}

std::size_t BigInt::bit_length() const {
    if (mag_.empty()) return 0;
    return (mag_.size() - 1) * 64 + (64 - std::countl_zero(mag_.back()));
}

std::string BigInt::to_string() const {
    if (sign_ == 0) return "0";
    std::vector<std::uint32_t> digits = to_u32(mag_);
    std::string out;
    // peel 9 decimal digits at a time
    while (!digits.empty()) {
        u64 rem = 0;
        for (std::size_t i = digits.size(); i-- > 0;) {
            u64 cur = (rem << 32) | digits[i];
            digits[i] = static_cast<std::uint32_t>(cur / 1000000000u);
            rem = cur % 1000000000u;
        }
        while (!digits.empty() && digits.back() == 0) digits.pop_back();
        for (int k = 0; k < 9; ++k) {
            out.push_back(static_cast<char>('0' + rem % 10));
            rem /= 10;
        }
    }
    while (out.size() > 1 && out.back() == '0') out.pop_back();
    if (sign_ < 0) out.push_back('-');
    std::reverse(out.begin(), out.end());
    return out;
}

}  // namespace twodist
