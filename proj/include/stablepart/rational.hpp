#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>

namespace stablepart {

using BigInt = boost::multiprecision::cpp_int;

// Arbitrary-precision rational in canonical form: gcd(num, den) == 1, den > 0,
// zero is 0/1. Backed by boost cpp_rational, which maintains exactly that form.
class BigRational {
public:
    BigRational() : v_(0) {}
    BigRational(long long value) : v_(value) {}  // NOLINT: implicit by design
    BigRational(const BigInt& value) : v_(value) {}
    BigRational(const BigInt& num, const BigInt& den) {
        if (den == 0) throw std::invalid_argument("BigRational: zero denominator");
        v_ = Rep(num, den);
    }

    // Exact value of a finite double: mantissa / 2^shift.
    static BigRational from_double(double value) {
        if (!std::isfinite(value)) throw std::invalid_argument("BigRational: value must be finite");
        int exp = 0;
        double mant = std::frexp(value, &exp);
        BigInt num = 0;
        for (int step = 0; step < 2 && mant != 0.0; ++step) {
            mant = std::ldexp(mant, 53);
            const double whole = std::trunc(mant);
            num <<= 53;
            num += BigInt(static_cast<long long>(whole));
            mant -= whole;
            exp -= 53;
        }
        BigRational out(num);
        BigInt scale = BigInt(1) << static_cast<unsigned>(exp < 0 ? -exp : exp);
        if (exp >= 0)
            out *= BigRational(scale);
        else
            out /= BigRational(scale);
        return out;
    }

    // Accepts "-3", "233/648"; whitespace is not tolerated.
    static BigRational parse(std::string_view text) {
        const auto slash = text.find('/');
        try {
            if (slash == std::string_view::npos) return BigRational(BigInt(std::string(text)));
            BigInt num{std::string(text.substr(0, slash))};
            BigInt den{std::string(text.substr(slash + 1))};
            return BigRational(num, den);
        } catch (const std::runtime_error&) {
            throw std::invalid_argument("BigRational: cannot parse '" + std::string(text) + "'");
        }
    }

    BigInt num() const { return boost::multiprecision::numerator(v_); }
    BigInt den() const { return boost::multiprecision::denominator(v_); }
    bool is_zero() const { return v_.is_zero(); }
    bool is_integer() const { return den() == 1; }

    // "233/648"; integers render without the denominator.
    std::string str() const {
        std::string s = num().str();
        if (!is_integer()) s += "/" + den().str();
        return s;
    }

    double to_double() const { return v_.template convert_to<double>(); }

    friend BigRational operator+(const BigRational& a, const BigRational& b) { return BigRational(a.v_ + b.v_); }
    friend BigRational operator-(const BigRational& a, const BigRational& b) { return BigRational(a.v_ - b.v_); }
    friend BigRational operator*(const BigRational& a, const BigRational& b) { return BigRational(a.v_ * b.v_); }
    friend BigRational operator/(const BigRational& a, const BigRational& b) {
        if (b.is_zero()) throw std::invalid_argument("BigRational: division by zero");
        return BigRational(a.v_ / b.v_);
    }
    BigRational operator-() const { return BigRational(Rep(-v_)); }
    BigRational& operator+=(const BigRational& o) { v_ += o.v_; return *this; }
    BigRational& operator-=(const BigRational& o) { v_ -= o.v_; return *this; }
    BigRational& operator*=(const BigRational& o) { v_ *= o.v_; return *this; }
    BigRational& operator/=(const BigRational& o) { *this = *this / o; return *this; }

    friend bool operator==(const BigRational& a, const BigRational& b) { return a.v_ == b.v_; }
    friend bool operator!=(const BigRational& a, const BigRational& b) { return a.v_ != b.v_; }
    friend bool operator<(const BigRational& a, const BigRational& b) { return a.v_ < b.v_; }
    friend bool operator<=(const BigRational& a, const BigRational& b) { return a.v_ <= b.v_; }
    friend bool operator>(const BigRational& a, const BigRational& b) { return a.v_ > b.v_; }
    friend bool operator>=(const BigRational& a, const BigRational& b) { return a.v_ >= b.v_; }

private:
    using Rep = boost::multiprecision::cpp_rational;
    explicit BigRational(Rep v) : v_(std::move(v)) {}
    Rep v_;
};

inline BigRational pow(const BigRational& base, int exponent) {
    if (exponent < 0) return BigRational(1) / pow(base, -exponent);
    BigRational out(1);
    BigRational b = base;
    for (int e = exponent; e > 0; e >>= 1) {
        if (e & 1) out *= b;
        b *= b;
    }
    return out;
}

inline BigInt factorial(unsigned n) {
    BigInt r = 1;
    for (unsigned k = 2; k <= n; ++k) r *= k;
    return r;
}

inline BigInt binomial(unsigned n, unsigned k) {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    BigInt r = 1;
    for (unsigned i = 1; i <= k; ++i) {
        r *= n - k + i;
        r /= i;
    }
    return r;
}

// k!! with the empty-product conventions (-1)!! = 0!! = 1.
inline BigInt double_factorial(long long k) {
    if (k < -1) throw std::invalid_argument("double_factorial: k must be >= -1");
    BigInt r = 1;
    for (long long v = k; v >= 2; v -= 2) r *= v;
    return r;
}

}  // namespace stablepart
