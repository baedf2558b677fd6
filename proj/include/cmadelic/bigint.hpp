#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <vector>

#include "cmadelic/errors.hpp"

namespace cmadelic {

// Signed arbitrary-precision integer over base-2^32 limbs.
//
// Curve invariants such as c4^3 and disc^2 reach ~10^41 for the largest
// class-number-one twists, so 64-bit (and even 128-bit) arithmetic is not
// enough on the j-invariant paths. Everything else in the pipeline stays
// fixed-width. This is deliberately a small value type: +, -, *, divmod,
// gcd, decimal I/O, and an exact k-th-root probe.
class BigInt {
public:
    BigInt() = default;

    BigInt(long long v) { // NOLINT: implicit by design, mirrors int usage
        bool neg = v < 0;
        unsigned long long m = neg ? 0ULL - static_cast<unsigned long long>(v)
                                   : static_cast<unsigned long long>(v);
        while (m) {
            limbs_.push_back(static_cast<uint32_t>(m & 0xffffffffULL));
            m >>= 32;
        }
        negative_ = neg && !limbs_.empty();
    }
    BigInt(int v) : BigInt(static_cast<long long>(v)) {}

    static BigInt from_string(const std::string& s) {
        BigInt r;
        size_t i = 0;
        bool neg = false;
        if (i < s.size() && (s[i] == '-' || s[i] == '+')) {
            neg = s[i] == '-';
            ++i;
        }
        if (i == s.size()) throw DomainError("BigInt: empty numeral");
        for (; i < s.size(); ++i) {
            if (s[i] < '0' || s[i] > '9') throw DomainError("BigInt: bad digit");
            r.mul_small(10);
            r.add_small(static_cast<uint32_t>(s[i] - '0'));
        }
        r.negative_ = neg && !r.limbs_.empty();
        return r;
    }

    bool is_zero() const { return limbs_.empty(); }
    bool is_negative() const { return negative_; }
    int sign() const { return limbs_.empty() ? 0 : (negative_ ? -1 : 1); }

    BigInt operator-() const {
        BigInt r = *this;
        if (!r.limbs_.empty()) r.negative_ = !r.negative_;
        return r;
    }

    BigInt abs() const {
        BigInt r = *this;
        r.negative_ = false;
        return r;
    }

    friend BigInt operator+(const BigInt& a, const BigInt& b) {
        if (a.negative_ == b.negative_) {
            BigInt r;
            r.limbs_ = add_mag(a.limbs_, b.limbs_);
            r.negative_ = a.negative_ && !r.limbs_.empty();
            return r;
        }
        int c = cmp_mag(a.limbs_, b.limbs_);
        if (c == 0) return BigInt();
        BigInt r;
        if (c > 0) {
            r.limbs_ = sub_mag(a.limbs_, b.limbs_);
            r.negative_ = a.negative_;
        } else {
            r.limbs_ = sub_mag(b.limbs_, a.limbs_);
            r.negative_ = b.negative_;
        }
        if (r.limbs_.empty()) r.negative_ = false;
        return r;
    }

    friend BigInt operator-(const BigInt& a, const BigInt& b) { return a + (-b); }

    friend BigInt operator*(const BigInt& a, const BigInt& b) {
        if (a.is_zero() || b.is_zero()) return BigInt();
        BigInt r;
        r.limbs_.assign(a.limbs_.size() + b.limbs_.size(), 0);
        for (size_t i = 0; i < a.limbs_.size(); ++i) {
            uint64_t carry = 0;
            for (size_t j = 0; j < b.limbs_.size(); ++j) {
                uint64_t cur = static_cast<uint64_t>(a.limbs_[i]) * b.limbs_[j] +
                               r.limbs_[i + j] + carry;
                r.limbs_[i + j] = static_cast<uint32_t>(cur);
                carry = cur >> 32;
            }
            size_t k = i + b.limbs_.size();
            while (carry) {
                uint64_t cur = r.limbs_[k] + carry;
                r.limbs_[k] = static_cast<uint32_t>(cur);
                carry = cur >> 32;
                ++k;
            }
        }
        r.trim();
        r.negative_ = (a.negative_ != b.negative_) && !r.limbs_.empty();
        return r;
    }

    BigInt& operator+=(const BigInt& o) { return *this = *this + o; }
    BigInt& operator-=(const BigInt& o) { return *this = *this - o; }
    BigInt& operator*=(const BigInt& o) { return *this = *this * o; }

    friend bool operator==(const BigInt& a, const BigInt& b) {
        return a.negative_ == b.negative_ && a.limbs_ == b.limbs_;
    }
    friend bool operator!=(const BigInt& a, const BigInt& b) { return !(a == b); }
    friend bool operator<(const BigInt& a, const BigInt& b) {
        if (a.negative_ != b.negative_) return a.negative_;
        int c = cmp_mag(a.limbs_, b.limbs_);
        return a.negative_ ? c > 0 : c < 0;
    }
    friend bool operator>(const BigInt& a, const BigInt& b) { return b < a; }
    friend bool operator<=(const BigInt& a, const BigInt& b) { return !(b < a); }
    friend bool operator>=(const BigInt& a, const BigInt& b) { return !(a < b); }

    // Truncated-toward-zero quotient and remainder; rem has the dividend's sign.
    static void divmod(const BigInt& a, const BigInt& b, BigInt& q, BigInt& r) {
        if (b.is_zero()) throw DomainError("BigInt: division by zero");
        if (cmp_mag(a.limbs_, b.limbs_) < 0) {
            q = BigInt();
            r = a;
            return;
        }
        // Shift-and-subtract over the magnitudes; operand sizes here are a
        // handful of limbs, so the bit loop is plenty fast.
        std::vector<uint32_t> rem;
        std::vector<uint32_t> quo(a.limbs_.size(), 0);
        for (size_t bit = a.limbs_.size() * 32; bit-- > 0;) {
            shl1(rem);
            if ((a.limbs_[bit / 32] >> (bit % 32)) & 1u) {
                if (rem.empty()) rem.push_back(1);
                else rem[0] |= 1u;
            }
            if (cmp_mag(rem, b.limbs_) >= 0) {
                rem = sub_mag(rem, b.limbs_);
                quo[bit / 32] |= 1u << (bit % 32);
            }
        }
        q.limbs_ = std::move(quo);
        q.trim();
        q.negative_ = (a.negative_ != b.negative_) && !q.limbs_.empty();
        r.limbs_ = std::move(rem);
        r.trim();
        r.negative_ = a.negative_ && !r.limbs_.empty();
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

    static BigInt gcd(BigInt a, BigInt b) {
        a.negative_ = false;
        b.negative_ = false;
        while (!b.is_zero()) {
            BigInt q, r;
            divmod(a, b, q, r);
            a = std::move(b);
            b = std::move(r);
        }
        return a;
    }

    // Least non-negative residue modulo a small positive modulus.
    uint64_t mod_u64(uint64_t m) const {
        if (m == 0) throw DomainError("BigInt: zero modulus");
        unsigned __int128 acc = 0;
        for (size_t i = limbs_.size(); i-- > 0;)
            acc = ((acc << 32) | limbs_[i]) % m;
        uint64_t r = static_cast<uint64_t>(acc);
        if (negative_ && r) r = m - r;
        return r;
    }

    // Checked conversion; throws when the value does not fit.
    long long to_int64() const {
        if (limbs_.size() > 2) throw DomainError("BigInt: does not fit in 64 bits");
        unsigned long long m = 0;
        for (size_t i = limbs_.size(); i-- > 0;) m = (m << 32) | limbs_[i];
        if (!negative_ && m > 0x7fffffffffffffffULL) throw DomainError("BigInt: does not fit in 64 bits");
        if (negative_ && m > 0x8000000000000000ULL) throw DomainError("BigInt: does not fit in 64 bits");
        return negative_ ? -static_cast<long long>(m - 1) - 1 : static_cast<long long>(m);
    }

    bool fits_int64() const {
        if (limbs_.size() > 2) return false;
        unsigned long long m = 0;
        for (size_t i = limbs_.size(); i-- > 0;) m = (m << 32) | limbs_[i];
        return negative_ ? m <= 0x8000000000000000ULL : m <= 0x7fffffffffffffffULL;
    }

    std::string to_string() const {
        if (limbs_.empty()) return "0";
        std::vector<uint32_t> mag = limbs_;
        std::string digits;
        while (!mag.empty()) {
            uint64_t rem = 0;
            for (size_t i = mag.size(); i-- > 0;) {
                uint64_t cur = (rem << 32) | mag[i];
                mag[i] = static_cast<uint32_t>(cur / 1000000000ULL);
                rem = cur % 1000000000ULL;
            }
            while (!mag.empty() && mag.back() == 0) mag.pop_back();
            for (int d = 0; d < 9; ++d) {
                digits.push_back(static_cast<char>('0' + rem % 10));
                rem /= 10;
            }
        }
        while (digits.size() > 1 && digits.back() == '0') digits.pop_back();
        if (negative_) digits.push_back('-');
        std::reverse(digits.begin(), digits.end());
        return digits;
    }

    // Exact non-negative k-th root if value is a perfect k-th power.
    // Binary search needs only multiplication, no root primitives.
    bool kth_root_exact(unsigned k, BigInt& root) const {
        if (negative_) return false;
        if (is_zero()) {
            root = BigInt();
            return true;
        }
        BigInt lo = 1, hi = 1;
        while (pow_small(hi, k) < *this) hi = hi * 2;
        while (lo < hi) {
            BigInt mid = (lo + hi + 1) / 2;
            if (pow_small(mid, k) <= *this) lo = mid;
            else hi = mid - 1;
        }
        if (pow_small(lo, k) == *this) {
            root = lo;
            return true;
        }
        return false;
    }

    bool is_square() const {
        BigInt r;
        return !negative_ && kth_root_exact(2, r);
    }

    static BigInt pow_small(const BigInt& b, unsigned k) {
        BigInt r = 1;
        for (unsigned i = 0; i < k; ++i) r = r * b;
        return r;
    }

private:
    void trim() {
        while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
        if (limbs_.empty()) negative_ = false;
    }

    void mul_small(uint32_t m) {
        uint64_t carry = 0;
        for (auto& l : limbs_) {
            uint64_t cur = static_cast<uint64_t>(l) * m + carry;
            l = static_cast<uint32_t>(cur);
            carry = cur >> 32;
        }
        if (carry) limbs_.push_back(static_cast<uint32_t>(carry));
    }

    void add_small(uint32_t a) {
        uint64_t carry = a;
        for (auto& l : limbs_) {
            if (!carry) return;
            uint64_t cur = l + carry;
            l = static_cast<uint32_t>(cur);
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
        std::vector<uint32_t> r(std::max(a.size(), b.size()) + 1, 0);
        uint64_t carry = 0;
        for (size_t i = 0; i < r.size(); ++i) {
            uint64_t cur = carry;
            if (i < a.size()) cur += a[i];
            if (i < b.size()) cur += b[i];
            r[i] = static_cast<uint32_t>(cur);
            carry = cur >> 32;
        }
        while (!r.empty() && r.back() == 0) r.pop_back();
        return r;
    }

    // Requires |a| >= |b|.
    static std::vector<uint32_t> sub_mag(const std::vector<uint32_t>& a,
                                         const std::vector<uint32_t>& b) {
        std::vector<uint32_t> r = a;
        int64_t borrow = 0;
        for (size_t i = 0; i < r.size(); ++i) {
            int64_t cur = static_cast<int64_t>(r[i]) - borrow - (i < b.size() ? b[i] : 0);
            borrow = cur < 0;
            if (cur < 0) cur += (1LL << 32);
            r[i] = static_cast<uint32_t>(cur);
        }
        while (!r.empty() && r.back() == 0) r.pop_back();
        return r;
    }

    static void shl1(std::vector<uint32_t>& v) {
        uint32_t carry = 0;
        for (auto& l : v) {
            uint32_t nc = l >> 31;
            l = (l << 1) | carry;
            carry = nc;
        }
        if (carry) v.push_back(carry);
    }

    std::vector<uint32_t> limbs_; // little-endian magnitude, no trailing zeros
    bool negative_ = false;
};

} // namespace cmadelic
