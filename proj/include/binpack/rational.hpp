// Exact rational numbers over BigInt, always normalized (lowest terms,
// positive denominator). Comparison has an int64 cross-multiplication fast
// path since stream arithmetic stays small.

#pragma once

#include <cstdlib>
#include <stdexcept>
#include <string>

#include "binpack/bigint.hpp"

namespace binpack {

class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(long long n) : num_(n), den_(1) {}
    Rational(int n) : num_(n), den_(1) {}
    Rational(long long n, long long d) : Rational(BigInt(n), BigInt(d)) {}
    Rational(BigInt n, BigInt d) : num_(std::move(n)), den_(std::move(d)) { normalize(); }

    static Rational from_string(const std::string& s) {
        auto slash = s.find('/');
        if (slash == std::string::npos) return Rational(BigInt::from_string(s), BigInt(1));
        return Rational(BigInt::from_string(s.substr(0, slash)),
                        BigInt::from_string(s.substr(slash + 1)));
    }

    const BigInt& num() const { return num_; }
    const BigInt& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_negative() const { return num_.is_negative(); }
    int sign() const { return num_.sign(); }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return Rational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return Rational(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.is_zero()) throw std::domain_error("Rational: division by zero");
        return Rational(a.num_ * b.den_, a.den_ * b.num_);
    }
    Rational operator-() const {
        Rational r = *this;
        r.num_ = -r.num_;
        return r;
    }
    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    friend int cmp(const Rational& a, const Rational& b) {
        int sa = a.sign(), sb = b.sign();
        if (sa != sb) return sa < sb ? -1 : 1;
        if (a.num_.fits_int64() && a.den_.fits_int64() && b.num_.fits_int64() &&
            b.den_.fits_int64()) {
            __int128 lhs = static_cast<__int128>(a.num_.to_int64()) * b.den_.to_int64();
            __int128 rhs = static_cast<__int128>(b.num_.to_int64()) * a.den_.to_int64();
            return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
        }
        return cmp(a.num_ * b.den_, b.num_ * a.den_);
    }
    friend bool operator==(const Rational& a, const Rational& b) { return cmp(a, b) == 0; }
    friend bool operator!=(const Rational& a, const Rational& b) { return cmp(a, b) != 0; }
    friend bool operator<(const Rational& a, const Rational& b) { return cmp(a, b) < 0; }
    friend bool operator<=(const Rational& a, const Rational& b) { return cmp(a, b) <= 0; }
    friend bool operator>(const Rational& a, const Rational& b) { return cmp(a, b) > 0; }
    friend bool operator>=(const Rational& a, const Rational& b) { return cmp(a, b) >= 0; }

    BigInt floor() const {
        BigInt q, r;
        BigInt::divmod(num_, den_, q, r);
        if (r.is_negative()) q = q - BigInt(1);
        return q;
    }
    BigInt ceil() const {
        BigInt q, r;
        BigInt::divmod(num_, den_, q, r);
        if (r.sign() > 0) q = q + BigInt(1);
        return q;
    }
    long long floor_i64() const { return floor().to_int64(); }
    long long ceil_i64() const { return ceil().to_int64(); }

    Rational abs() const { return is_negative() ? -*this : *this; }

    long double to_long_double() const {
        // scale down in tandem so both parts stay in long-double range
        size_t bn = num_.bit_length(), bd = den_.bit_length();
        if (bn < 8000 && bd < 8000) return num_.to_long_double() / den_.to_long_double();
        size_t drop = (bn > bd ? bd : bn) - 64;
        BigInt scale = BigInt::pow(BigInt(2), static_cast<unsigned>(drop));
        return (num_ / scale).to_long_double() / (den_ / scale).to_long_double();
    }
    double to_double() const { return static_cast<double>(to_long_double()); }

    std::string to_string() const {
        if (den_ == BigInt(1)) return num_.to_string();
        return num_.to_string() + "/" + den_.to_string();
    }

private:
    BigInt num_, den_;

    void normalize() {
        if (den_.is_zero()) throw std::domain_error("Rational: zero denominator");
        if (den_.is_negative()) {
            num_ = -num_;
            den_ = -den_;
        }
        if (num_.is_zero()) {
            den_ = BigInt(1);
            return;
        }
        BigInt g = BigInt::gcd(num_, den_);
        if (g != BigInt(1)) {
            num_ = num_ / g;
            den_ = den_ / g;
        }
    }
};

inline Rational rat(long long n, long long d = 1) { return Rational(n, d); }

inline Rational min(const Rational& a, const Rational& b) { return a < b ? a : b; }
inline Rational max(const Rational& a, const Rational& b) { return a > b ? a : b; }

// Nearest rational p/10^12 to a long double in (-1e6, 1e6); used to pin
// analytically-derived constants into exact arithmetic.
inline Rational rational_from_long_double(long double x, long long scale = 1000000000000LL) {
    long double scaled = x * static_cast<long double>(scale);
    long long p = static_cast<long long>(scaled + (scaled >= 0 ? 0.5L : -0.5L));
    return Rational(p, scale);
}

}  // namespace binpack
