// Arbitrary-precision signed integer, sign-magnitude over 32-bit limbs.
// Small enough to stay dependency-free; fast paths cover the int64 range
// that dominates stream arithmetic.

#pragma once

#include <cstdint>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace binpack {

class BigInt {
public:
    BigInt() = default;
    BigInt(int v) : BigInt(static_cast<long long>(v)) {}
    BigInt(long v) : BigInt(static_cast<long long>(v)) {}
    BigInt(long long v) {
        neg_ = v < 0;
        unsigned long long m = neg_ ? ~static_cast<unsigned long long>(v) + 1ULL
                                    : static_cast<unsigned long long>(v);
        while (m != 0) {
            limbs_.push_back(static_cast<uint32_t>(m & 0xffffffffULL));
            m >>= 32;
        }
    }
    BigInt(unsigned long long v) {
        while (v != 0) {
            limbs_.push_back(static_cast<uint32_t>(v & 0xffffffffULL));
            v >>= 32;
        }
    }

    static BigInt from_string(const std::string& s) {
        if (s.empty()) throw std::invalid_argument("BigInt: empty string");
        size_t i = 0;
        bool neg = false;
        if (s[0] == '+' || s[0] == '-') {
            neg = s[0] == '-';
            i = 1;
        }
        if (i == s.size()) throw std::invalid_argument("BigInt: no digits");
        BigInt r;
        for (; i < s.size(); ++i) {
            if (s[i] < '0' || s[i] > '9') throw std::invalid_argument("BigInt: bad digit");
            r.mul_small(10);
            r.add_small(static_cast<uint32_t>(s[i] - '0'));
        }
        r.neg_ = neg && !r.is_zero();
        return r;
    }

    bool is_zero() const { return limbs_.empty(); }
    bool is_negative() const { return neg_; }
    int sign() const { return is_zero() ? 0 : (neg_ ? -1 : 1); }

    bool fits_int64() const {
        if (limbs_.size() > 2) return false;
        unsigned long long m = mag_u64();
        if (neg_) return m <= 0x8000000000000000ULL;
        return m <= 0x7fffffffffffffffULL;
    }
    long long to_int64() const {
        unsigned long long m = mag_u64();
        return neg_ ? -static_cast<long long>(m) : static_cast<long long>(m);
    }

    long double to_long_double() const {
        long double r = 0.0L;
        for (size_t i = limbs_.size(); i-- > 0;) r = r * 4294967296.0L + limbs_[i];
        return neg_ ? -r : r;
    }
    double to_double() const { return static_cast<double>(to_long_double()); }

    size_t bit_length() const {
        if (limbs_.empty()) return 0;
        uint32_t top = limbs_.back();
        size_t b = (limbs_.size() - 1) * 32;
        while (top) {
            ++b;
            top >>= 1;
        }
        return b;
    }

    friend int cmp(const BigInt& a, const BigInt& b) {
        if (a.neg_ != b.neg_) return a.neg_ ? -1 : 1;
        int c = cmp_mag(a.limbs_, b.limbs_);
        return a.neg_ ? -c : c;
    }
    friend bool operator==(const BigInt& a, const BigInt& b) { return cmp(a, b) == 0; }
    friend bool operator!=(const BigInt& a, const BigInt& b) { return cmp(a, b) != 0; }
    friend bool operator<(const BigInt& a, const BigInt& b) { return cmp(a, b) < 0; }
    friend bool operator<=(const BigInt& a, const BigInt& b) { return cmp(a, b) <= 0; }
    friend bool operator>(const BigInt& a, const BigInt& b) { return cmp(a, b) > 0; }
    friend bool operator>=(const BigInt& a, const BigInt& b) { return cmp(a, b) >= 0; }

    BigInt operator-() const {
        BigInt r = *this;
        if (!r.is_zero()) r.neg_ = !r.neg_;
        return r;
    }

    friend BigInt operator+(const BigInt& a, const BigInt& b) {
        if (a.neg_ == b.neg_) {
            BigInt r;
            r.limbs_ = add_mag(a.limbs_, b.limbs_);
            r.neg_ = a.neg_ && !r.limbs_.empty();
            return r;
        }
        int c = cmp_mag(a.limbs_, b.limbs_);
        BigInt r;
        if (c == 0) return r;
        if (c > 0) {
            r.limbs_ = sub_mag(a.limbs_, b.limbs_);
            r.neg_ = a.neg_;
        } else {
            r.limbs_ = sub_mag(b.limbs_, a.limbs_);
            r.neg_ = b.neg_;
        }
        return r;
    }
    friend BigInt operator-(const BigInt& a, const BigInt& b) { return a + (-b); }

    friend BigInt operator*(const BigInt& a, const BigInt& b) {
        BigInt r;
        if (a.is_zero() || b.is_zero()) return r;
        r.limbs_.assign(a.limbs_.size() + b.limbs_.size(), 0);
        for (size_t i = 0; i < a.limbs_.size(); ++i) {
            unsigned long long carry = 0;
            for (size_t j = 0; j < b.limbs_.size(); ++j) {
                unsigned long long cur = static_cast<unsigned long long>(a.limbs_[i]) * b.limbs_[j] +
                                         r.limbs_[i + j] + carry;
                r.limbs_[i + j] = static_cast<uint32_t>(cur & 0xffffffffULL);
                carry = cur >> 32;
            }
            size_t k = i + b.limbs_.size();
            while (carry) {
                unsigned long long cur = r.limbs_[k] + carry;
                r.limbs_[k] = static_cast<uint32_t>(cur & 0xffffffffULL);
                carry = cur >> 32;
                ++k;
            }
        }
        r.trim();
        r.neg_ = (a.neg_ != b.neg_) && !r.is_zero();
        return r;
    }

    // Truncated quotient/remainder (C semantics): remainder has dividend's sign.
    static void divmod(const BigInt& a, const BigInt& b, BigInt& q, BigInt& r) {
        if (b.is_zero()) throw std::domain_error("BigInt: division by zero");
        int c = cmp_mag(a.limbs_, b.limbs_);
        if (c < 0) {
            q = BigInt();
            r = a;
            return;
        }
        std::vector<uint32_t> qm, rm;
        divmod_mag(a.limbs_, b.limbs_, qm, rm);
        q.limbs_ = std::move(qm);
        q.trim();
        q.neg_ = (a.neg_ != b.neg_) && !q.is_zero();
        r.limbs_ = std::move(rm);
        r.trim();
        r.neg_ = a.neg_ && !r.is_zero();
    }
    friend BigInt operator/(const BigInt& a, const BigInt& b) {
        BigInt q, r;
        divmod(a, b, q, r);
        return q;
    }
    friend BigInt operator%(const BigInt& a, const BigInt& b) {
        BigInt q, r;
        divmod(a, b, q, r);
        return r;
    }

    BigInt abs() const {
        BigInt r = *this;
        r.neg_ = false;
        return r;
    }

    static BigInt gcd(BigInt a, BigInt b) {
        a.neg_ = false;
        b.neg_ = false;
        while (!b.is_zero()) {
            BigInt q, r;
            divmod(a, b, q, r);
            a = std::move(b);
            b = std::move(r);
        }
        return a;
    }

    static BigInt pow(const BigInt& base, unsigned e) {
        BigInt r(1), b = base;
        while (e) {
            if (e & 1) r = r * b;
            b = b * b;
            e >>= 1;
        }
        return r;
    }

    std::string to_string() const {
        if (is_zero()) return "0";
        std::vector<uint32_t> tmp = limbs_;
        std::string digits;
        while (!tmp.empty()) {
            unsigned long long rem = 0;
            for (size_t i = tmp.size(); i-- > 0;) {
                unsigned long long cur = (rem << 32) | tmp[i];
                tmp[i] = static_cast<uint32_t>(cur / 1000000000ULL);
                rem = cur % 1000000000ULL;
            }
            while (!tmp.empty() && tmp.back() == 0) tmp.pop_back();
            for (int d = 0; d < 9; ++d) {
                digits.push_back(static_cast<char>('0' + rem % 10));
                rem /= 10;
            }
        }
        while (digits.size() > 1 && digits.back() == '0') digits.pop_back();
        if (neg_) digits.push_back('-');
        return std::string(digits.rbegin(), digits.rend());
    }

private:
    bool neg_ = false;
    std::vector<uint32_t> limbs_;  // little-endian, no trailing zeros

    unsigned long long mag_u64() const {
        unsigned long long m = 0;
        if (limbs_.size() > 1) m = static_cast<unsigned long long>(limbs_[1]) << 32;
        if (!limbs_.empty()) m |= limbs_[0];
        return m;
    }

    void trim() {
        while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
        if (limbs_.empty()) neg_ = false;
    }

    void mul_small(uint32_t m) {
        unsigned long long carry = 0;
        for (auto& l : limbs_) {
            unsigned long long cur = static_cast<unsigned long long>(l) * m + carry;
            l = static_cast<uint32_t>(cur & 0xffffffffULL);
            carry = cur >> 32;
        }
        if (carry) limbs_.push_back(static_cast<uint32_t>(carry));
    }
    void add_small(uint32_t a) {
        unsigned long long carry = a;
        for (size_t i = 0; carry && i < limbs_.size(); ++i) {
            unsigned long long cur = limbs_[i] + carry;
            limbs_[i] = static_cast<uint32_t>(cur & 0xffffffffULL);
            carry = cur >> 32;
        }
        if (carry) limbs_.push_back(static_cast<uint32_t>(carry));
    }

    static int cmp_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
        if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
        for (size_t i = a.size(); i-- > 0;)
            if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
        return 0;
    }

    static std::vector<uint32_t> add_mag(const std::vector<uint32_t>& a,
                                         const std::vector<uint32_t>& b) {
        const auto& lo = a.size() < b.size() ? a : b;
        const auto& hi = a.size() < b.size() ? b : a;
        std::vector<uint32_t> r = hi;
        unsigned long long carry = 0;
        for (size_t i = 0; i < lo.size(); ++i) {
            unsigned long long cur = static_cast<unsigned long long>(r[i]) + lo[i] + carry;
            r[i] = static_cast<uint32_t>(cur & 0xffffffffULL);
            carry = cur >> 32;
        }
        for (size_t i = lo.size(); carry && i < r.size(); ++i) {
            unsigned long long cur = r[i] + carry;
            r[i] = static_cast<uint32_t>(cur & 0xffffffffULL);
            carry = cur >> 32;
        }
        if (carry) r.push_back(static_cast<uint32_t>(carry));
        return r;
    }

    // requires |a| >= |b|
    static std::vector<uint32_t> sub_mag(const std::vector<uint32_t>& a,
                                         const std::vector<uint32_t>& b) {
        std::vector<uint32_t> r = a;
        long long borrow = 0;
        for (size_t i = 0; i < r.size(); ++i) {
            long long cur = static_cast<long long>(r[i]) - borrow - (i < b.size() ? b[i] : 0);
            if (cur < 0) {
                cur += 1LL << 32;
                borrow = 1;
            } else {
                borrow = 0;
            }
            r[i] = static_cast<uint32_t>(cur);
        }
        while (!r.empty() && r.back() == 0) r.pop_back();
        return r;
    }

    // Knuth algorithm D on normalized limbs; |a| >= |b|, b nonzero.
    static void divmod_mag(std::vector<uint32_t> a, std::vector<uint32_t> b,
                           std::vector<uint32_t>& q, std::vector<uint32_t>& r) {
        if (b.size() == 1) {
            unsigned long long d = b[0], rem = 0;
            q.assign(a.size(), 0);
            for (size_t i = a.size(); i-- > 0;) {
                unsigned long long cur = (rem << 32) | a[i];
                q[i] = static_cast<uint32_t>(cur / d);
                rem = cur % d;
            }
            r.clear();
            if (rem) r.push_back(static_cast<uint32_t>(rem));
            return;
        }
        int shift = 0;
        for (uint32_t top = b.back(); !(top & 0x80000000u); top <<= 1) ++shift;
        auto shl = [&](std::vector<uint32_t>& v) {
            if (!shift) return;
            uint32_t carry = 0;
            for (auto& l : v) {
                uint32_t nc = l >> (32 - shift);
                l = (l << shift) | carry;
                carry = nc;
            }
            if (carry) v.push_back(carry);
        };
        shl(a);
        shl(b);
        size_t n = b.size(), m = a.size() - n;
        a.push_back(0);
        q.assign(m + 1, 0);
        for (size_t j = m + 1; j-- > 0;) {
            unsigned long long num =
                (static_cast<unsigned long long>(a[j + n]) << 32) | a[j + n - 1];
            unsigned long long qhat = num / b[n - 1];
            unsigned long long rhat = num % b[n - 1];
            while (qhat > 0xffffffffULL ||
                   (n >= 2 && qhat * b[n - 2] > ((rhat << 32) | a[j + n - 2]))) {
                --qhat;
                rhat += b[n - 1];
                if (rhat > 0xffffffffULL) break;
            }
            long long borrow = 0;
            unsigned long long carry = 0;
            for (size_t i = 0; i < n; ++i) {
                unsigned long long p = qhat * b[i] + carry;
                carry = p >> 32;
                long long t = static_cast<long long>(a[j + i]) - borrow -
                              static_cast<long long>(p & 0xffffffffULL);
                if (t < 0) {
                    t += 1LL << 32;
                    borrow = 1;
                } else {
                    borrow = 0;
                }
                a[j + i] = static_cast<uint32_t>(t);
            }
            long long t = static_cast<long long>(a[j + n]) - borrow - static_cast<long long>(carry);
            if (t < 0) {
                t += 1LL << 32;
                // over-estimated qhat by one: add back
                --qhat;
                unsigned long long c2 = 0;
                for (size_t i = 0; i < n; ++i) {
                    unsigned long long cur =
                        static_cast<unsigned long long>(a[j + i]) + b[i] + c2;
                    a[j + i] = static_cast<uint32_t>(cur & 0xffffffffULL);
                    c2 = cur >> 32;
                }
                t += static_cast<long long>(c2);
            }
            a[j + n] = static_cast<uint32_t>(t);
            q[j] = static_cast<uint32_t>(qhat);
        }
        r.assign(a.begin(), a.begin() + n);
        if (shift) {
            uint32_t carry = 0;
            for (size_t i = r.size(); i-- > 0;) {
                uint32_t nc = r[i] << (32 - shift);
                r[i] = (r[i] >> shift) | carry;
                carry = nc;
            }
        }
        while (!r.empty() && r.back() == 0) r.pop_back();
        while (!q.empty() && q.back() == 0) q.pop_back();
    }
};

}  // namespace binpack
