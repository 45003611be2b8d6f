#include "twodist/rational.hpp"

#include <cstdlib>
#include <stdexcept>

namespace twodist {

Rational::Rational(BigInt num, BigInt den) : num_(std::move(num)), den_(std::move(den)) {
    normalize();
}

void Rational::normalize() {
    if (den_.is_zero()) throw std::domain_error("Rational: zero denominator");
    if (den_.is_negative()) {
        den_ = -den_;
        num_ = -num_;
    }
    if (num_.is_zero()) {
        den_ = BigInt(std::int64_t{1});
        return;
    }
    BigInt g = BigInt::gcd(num_, den_);
    if (g > BigInt(std::int64_t{1})) {
        num_ = num_ / g;
        den_ = den_ / g;
    }
}

Rational Rational::operator+(const Rational& o) const {
    return Rational(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

Rational Rational::operator-(const Rational& o) const {
    return Rational(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
}

Rational Rational::operator*(const Rational& o) const {
    return Rational(num_ * o.num_, den_ * o.den_);
}

Rational Rational::operator/(const Rational& o) const {
    if (o.num_.is_zero()) throw std::domain_error("Rational: division by zero");
    return Rational(num_ * o.den_, den_ * o.num_);
}

std::strong_ordering Rational::operator<=>(const Rational& o) const {
    // denominators positive, so cross-multiplication preserves order
    return (num_ * o.den_) <=> (o.num_ * den_);
}

double Rational::to_double() const {
    // via decimal string: immune to overflow when both parts are huge
    return std::strtod(to_decimal(17).c_str(), nullptr);
}

std::string Rational::to_decimal(int sig) const {
    if (sig < 1) sig = 1;
    if (num_.is_zero()) return "0";
    const bool neg = num_.is_negative();
    BigInt a = num_.abs();
    const BigInt& b = den_;
    const BigInt ten(std::int64_t{10});

    // collect sig+1 significant digits and the exponent e with
    // value = 0.d1 d2 ... * 10^e (d1 != 0)
    std::string digits;
    int e = 0;
    BigInt q, r;
    BigInt::divmod(a, b, q, r);
    if (!q.is_zero()) {
        digits = q.to_string();
        e = static_cast<int>(digits.size());
    } else {
        // skip leading fractional zeros
        while (true) {
            r = a % b;  // first pass: a < b so r == a
            a = r * ten;
            BigInt d = a / b;
            if (!d.is_zero()) {
                digits = d.to_string();
                e -= static_cast<int>(digits.size()) - 1;
                r = a % b;
                break;
            }
            --e;
        }
    }
    while (static_cast<int>(digits.size()) < sig + 1 && !r.is_zero()) {
        a = r * ten;
        BigInt d;
        BigInt::divmod(a, b, d, r);
        digits += d.to_string().back();
    }
    while (static_cast<int>(digits.size()) < sig + 1) digits.push_back('0');

    // round half-up at sig digits
    const bool round_up = digits[sig] >= '5';
    digits.resize(sig);
    if (round_up) {
        int i = sig - 1;
        while (i >= 0 && digits[i] == '9') digits[i--] = '0';
        if (i < 0) {
            digits.insert(digits.begin(), '1');
            digits.pop_back();
            ++e;
        } else {
            ++digits[i];
        }
    }

    // strip trailing zeros (keep one digit)
    while (digits.size() > 1 && digits.back() == '0') digits.pop_back();

    std::string out;
    if (e > 0 && e <= sig + 3) {
        // plain, integer part has e digits
        std::string ip = digits.substr(0, std::min<std::size_t>(e, digits.size()));
        while (static_cast<int>(ip.size()) < e) ip.push_back('0');
        out = ip;
        if (static_cast<int>(digits.size()) > e) out += "." + digits.substr(e);
    } else if (e <= 0 && e > -4) {
        out = "0.";
        out.append(static_cast<std::size_t>(-e), '0');
        out += digits;
    } else {
        // scientific: d.ddd e(e-1)
        out = digits.substr(0, 1);
        if (digits.size() > 1) out += "." + digits.substr(1);
        int ex = e - 1;
        out += "e";
        if (ex < 0) {
            out += "-";
            ex = -ex;
        } else {
            out += "+";
        }
        std::string xs = std::to_string(ex);
        if (xs.size() < 2) xs.insert(xs.begin(), '0');
        out += xs;
    }
    return neg ? "-" + out : out;
}

}  // namespace twodist
