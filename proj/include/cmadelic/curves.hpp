#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "cmadelic/bigint.hpp"
#include "cmadelic/errors.hpp"
#include "cmadelic/modarith.hpp"

namespace cmadelic {

// Elliptic curve over Q in long Weierstrass form with the usual derived
// quantities. Invariants are recomputed from the a-invariants, never trusted
// from input; j is kept as the exact pair (c4^3, disc).
struct WeierstrassCurve {
    BigInt a1, a2, a3, a4, a6;
    BigInt b2, b4, b6, b8, c4, c6, disc;

    static WeierstrassCurve from_long(BigInt a1, BigInt a2, BigInt a3, BigInt a4, BigInt a6) {
        WeierstrassCurve e;
        e.a1 = std::move(a1);
        e.a2 = std::move(a2);
        e.a3 = std::move(a3);
        e.a4 = std::move(a4);
        e.a6 = std::move(a6);
        e.derive();
        return e;
    }

    static WeierstrassCurve from_short(BigInt A, BigInt B) {
        return from_long(0, 0, 0, std::move(A), std::move(B));
    }

    void derive() {
        b2 = a1 * a1 + BigInt(4) * a2;
        b4 = BigInt(2) * a4 + a1 * a3;
        b6 = a3 * a3 + BigInt(4) * a6;
        b8 = a1 * a1 * a6 + BigInt(4) * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
        c4 = b2 * b2 - BigInt(24) * b4;
        c6 = -(b2 * b2 * b2) + BigInt(36) * b2 * b4 - BigInt(216) * b6;
        disc = -(b2 * b2) * b8 - BigInt(8) * b4 * b4 * b4 - BigInt(27) * b6 * b6 +
               BigInt(9) * b2 * b4 * b6;
        if (disc.is_zero()) throw DomainError("WeierstrassCurve: singular model");
        if (BigInt(1728) * disc != c4 * c4 * c4 - c6 * c6)
            throw InternalInvariantViolation("WeierstrassCurve: c4/c6/disc identity failed");
    }

    bool is_short() const { return a1.is_zero() && a2.is_zero() && a3.is_zero(); }

    // An integral short model of the same Q-isomorphism class.
    std::pair<BigInt, BigInt> short_model() const {
        if (is_short()) return {a4, a6};
        return {BigInt(-27) * c4, BigInt(-54) * c6};
    }

    // j == v for an integer candidate v, tested exactly as c4^3 == v * disc.
    bool has_j(const BigInt& v) const { return c4 * c4 * c4 == v * disc; }

    bool j_is_zero() const { return c4.is_zero(); }
    bool j_is_1728() const { return c6.is_zero(); }

    std::optional<BigInt> j_if_integral() const {
        BigInt q, r;
        BigInt::divmod(c4 * c4 * c4, disc, q, r);
        if (!r.is_zero()) return std::nullopt;
        return q;
    }
};

// Quadratic twist by a square-free integer N: the short model
// (N^2 A, N^3 B) of the input's short form.
inline WeierstrassCurve quadratic_twist(const WeierstrassCurve& e, long long n) {
    if (n == 0 || !is_squarefree(n)) throw DomainError("quadratic_twist: N must be non-zero square-free");
    auto [A, B] = e.short_model();
    BigInt nn(n);
    return WeierstrassCurve::from_short(nn * nn * A, nn * nn * nn * B);
}

namespace detail {

// Reduce the rational a/b in place to lowest terms with positive denominator.
inline void reduce_fraction(BigInt& a, BigInt& b) {
    BigInt g = BigInt::gcd(a, b);
    if (!g.is_zero() && g != BigInt(1)) {
        a = a / g;
        b = b / g;
    }
    if (b.is_negative()) {
        a = -a;
        b = -b;
    }
}

} // namespace detail

// Standard u-scaling test: curves are Q-isomorphic iff c4' = u^4 c4 and
// c6' = u^6 c6 for some rational u. Same j is checked first; the remaining
// condition is that the twist factor is a square (resp. 4th/6th power for
// j = 1728 / j = 0).
inline bool is_isomorphic_Q(const WeierstrassCurve& e, const WeierstrassCurve& f) {
    if (e.c4 * e.c4 * e.c4 * f.disc != f.c4 * f.c4 * f.c4 * e.disc) return false;
    unsigned power = 2;
    BigInt num, den;
    if (e.j_is_zero()) {
        power = 6;
        num = f.c6;
        den = e.c6;
    } else if (e.j_is_1728()) {
        power = 4;
        num = f.c4;
        den = e.c4;
    } else {
        num = f.c6 * e.c4;
        den = e.c6 * f.c4;
    }
    detail::reduce_fraction(num, den);
    if (num.is_negative() || num.is_zero()) return false;
    BigInt root;
    return num.kth_root_exact(power, root) && den.kth_root_exact(power, root);
}

// Square-free d with e^d isomorphic to f over Q, when e and f share a
// j-invariant other than 0 or 1728.
inline std::optional<long long> twist_between(const WeierstrassCurve& e,
                                              const WeierstrassCurve& f) {
    if (e.c4 * e.c4 * e.c4 * f.disc != f.c4 * f.c4 * f.c4 * e.disc) return std::nullopt;
    if (e.j_is_zero() || e.j_is_1728()) return std::nullopt;
    BigInt num = f.c6 * e.c4;
    BigInt den = e.c6 * f.c4;
    detail::reduce_fraction(num, den);
    if (!num.fits_int64() || !den.fits_int64())
        throw DomainError("twist_between: reduced twist factor out of 64-bit range");
    long long d = squarefree_part(num.to_int64()).first * squarefree_part(den.to_int64()).first;
    if (!is_isomorphic_Q(quadratic_twist(e, d), f)) return std::nullopt;
    return d;
}

// Trace of Frobenius a_p = p + 1 - #E(F_p) by a quadratic-character sum over
// (2y + a1 x + a3)^2 = 4x^3 + b2 x^2 + 2 b4 x + b6; p = 2 is counted directly
// on the long model.
inline long long ap_trace(const WeierstrassCurve& e, long long p) {
    if (p < 2 || !detail::is_prime_u64(static_cast<uint64_t>(p)))
        throw BadPrime("ap_trace: p must be prime");
    if (p > 100000) throw SearchTooLarge("ap_trace: prime exceeds the supported bound");
    if (e.disc.mod_u64(static_cast<uint64_t>(p)) == 0)
        throw BadPrime("ap_trace: bad reduction at p");
    if (p == 2) {
        long long count = 1; // point at infinity
        long long a1 = static_cast<long long>(e.a1.mod_u64(2)), a2 = static_cast<long long>(e.a2.mod_u64(2)),
                  a3 = static_cast<long long>(e.a3.mod_u64(2)), a4 = static_cast<long long>(e.a4.mod_u64(2)),
                  a6 = static_cast<long long>(e.a6.mod_u64(2));
        for (long long x = 0; x < 2; ++x)
            for (long long y = 0; y < 2; ++y) {
                long long lhs = (y * y + a1 * x * y + a3 * y) % 2;
                long long rhs = (x * x * x + a2 * x * x + a4 * x + a6) % 2;
                if (lhs == rhs) ++count;
            }
        return 2 + 1 - count;
    }
    long long b2 = static_cast<long long>(e.b2.mod_u64(static_cast<uint64_t>(p)));
    long long b4 = static_cast<long long>(e.b4.mod_u64(static_cast<uint64_t>(p)));
    long long b6 = static_cast<long long>(e.b6.mod_u64(static_cast<uint64_t>(p)));
    long long sum = 0;
    for (long long x = 0; x < p; ++x) {
        long long g = (((4 * x + b2) % p) * x % p + 2 * b4 % p) % p * x % p;
        g = (g + b6) % p;
        sum += kronecker(g, p);
    }
    return -sum;
}

} // namespace cmadelic
