#pragma once

#include <cstdint>
#include <utility>

#include "cmadelic/bigint.hpp"
#include "cmadelic/errors.hpp"

namespace cmadelic {

// An element of Z/NZ, always stored reduced into [0, N).
struct Residue {
    uint64_t value = 0;
    uint64_t modulus = 1;

    Residue() = default;
    Residue(long long v, uint64_t n) : modulus(n) {
        if (n == 0) throw DomainError("Residue: zero modulus");
        long long r = v % static_cast<long long>(n);
        if (r < 0) r += static_cast<long long>(n);
        value = static_cast<uint64_t>(r);
    }

    friend Residue operator+(Residue a, Residue b) {
        a.require_same(b);
        return Residue(static_cast<long long>((a.value + b.value) % a.modulus), a.modulus);
    }
    friend Residue operator-(Residue a, Residue b) {
        a.require_same(b);
        return Residue(static_cast<long long>((a.value + a.modulus - b.value) % a.modulus), a.modulus);
    }
    friend Residue operator*(Residue a, Residue b) {
        a.require_same(b);
        unsigned __int128 p = static_cast<unsigned __int128>(a.value) * b.value;
        return Residue(static_cast<long long>(p % a.modulus), a.modulus);
    }
    friend bool operator==(Residue a, Residue b) {
        return a.modulus == b.modulus && a.value == b.value;
    }

    void require_same(const Residue& o) const {
        if (modulus != o.modulus) throw DomainError("Residue: modulus mismatch");
    }
};

namespace detail {

inline uint64_t gcd_u64(uint64_t a, uint64_t b) {
    while (b) {
        uint64_t t = a % b;
        a = b;
        b = t;
    }
    return a;
}

// Inverse of a modulo m by the extended Euclidean algorithm.
inline long long mod_inverse(long long a, long long m, bool* ok = nullptr) {
    long long r0 = ((a % m) + m) % m, r1 = m;
    long long s0 = 1, s1 = 0;
    while (r1 != 0) {
        long long q = r0 / r1;
        long long t = r0 - q * r1;
        r0 = r1;
        r1 = t;
        t = s0 - q * s1;
        s0 = s1;
        s1 = t;
    }
    if (r0 != 1) {
        if (ok) {
            *ok = false;
            return 0;
        }
        throw NotAUnit("mod_inverse: argument shares a factor with the modulus");
    }
    if (ok) *ok = true;
    return ((s0 % m) + m) % m;
}

// Deterministic Miller-Rabin for 64-bit inputs.
inline bool is_prime_u64(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % p == 0) return n == p;
    }
    uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    auto mulmod = [n](uint64_t a, uint64_t b) {
        return static_cast<uint64_t>(static_cast<unsigned __int128>(a) * b % n);
    };
    auto powmod = [&](uint64_t a, uint64_t e) {
        uint64_t r = 1;
        while (e) {
            if (e & 1) r = mulmod(r, a);
            a = mulmod(a, a);
            e >>= 1;
        }
        return r;
    };
    for (uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        uint64_t x = powmod(a % n, d);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod(x, x);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

} // namespace detail

// n = N * m^2 with N square-free, sign(N) = sign(n).
// Trial division to 10^6; any leftover cofactor of an input |n| <= 10^12 is
// 1 or prime, larger inputs with a composite cofactor are rejected.
inline std::pair<long long, long long> squarefree_part(long long n) {
    if (n == 0) throw DomainError("squarefree_part: zero input");
    long long sign = n < 0 ? -1 : 1;
    unsigned long long m = static_cast<unsigned long long>(n < 0 ? -n : n);
    long long sf = 1, sq = 1;
    for (unsigned long long p = 2; p <= 1000000ULL && p * p <= m; ++p) {
        if (m % p) continue;
        int e = 0;
        while (m % p == 0) {
            m /= p;
            ++e;
        }
        for (int i = 0; i + 1 < e; i += 2) sq *= static_cast<long long>(p);
        if (e & 1) sf *= static_cast<long long>(p);
    }
    if (m > 1) {
        if (!detail::is_prime_u64(m))
            throw DomainError("squarefree_part: cofactor beyond trial-division range is composite");
        sf *= static_cast<long long>(m);
    }
    return {sign * sf, sq};
}

inline bool is_squarefree(long long n) {
    if (n == 0) return false;
    auto [sf, m] = squarefree_part(n);
    (void)sf;
    return m == 1;
}

// N^dagger = |disc of Q(sqrt(N))|: |N| if N = 1 mod 4, else |4N|.
inline long long n_dagger(long long n) {
    if (n == 0 || !is_squarefree(n)) throw DomainError("n_dagger: input must be square-free and non-zero");
    long long r = ((n % 4) + 4) % 4;
    long long a = n < 0 ? -n : n;
    return r == 1 ? a : 4 * a;
}

// Signed fundamental discriminant of Q(sqrt(N)) for square-free N.
inline long long field_discriminant(long long n) {
    if (n == 0 || !is_squarefree(n)) throw DomainError("field_discriminant: input must be square-free and non-zero");
    long long r = ((n % 4) + 4) % 4;
    return r == 1 ? n : 4 * n;
}

// Kronecker symbol (D|a), the standard extension of the Jacobi symbol.
inline int kronecker(long long d, long long a) {
    // (d|0) is 1 exactly when d = +-1.
    if (a == 0) return (d == 1 || d == -1) ? 1 : 0;
    int result = 1;
    if (a < 0) {
        a = -a;
        if (d < 0) result = -result;
    }
    // Factor of 2 in a: (d|2) = 0 for even d, else +-1 by d mod 8.
    int tz = 0;
    while ((a & 1) == 0) {
        a >>= 1;
        ++tz;
    }
    if (tz > 0) {
        if (d % 2 == 0) return 0;
        long long dm = ((d % 8) + 8) % 8;
        if ((tz & 1) && (dm == 3 || dm == 5)) result = -result;
    }
    // Now a odd and positive: Jacobi (d|a) by reciprocity.
    long long b = a;
    long long x = ((d % b) + b) % b;
    while (x != 0) {
        int t = 0;
        while ((x & 1) == 0) {
            x >>= 1;
            ++t;
        }
        if (t & 1) {
            long long bm = b % 8;
            if (bm == 3 || bm == 5) result = -result;
        }
        if ((x % 4 == 3) && (b % 4 == 3)) result = -result;
        long long next = b % x;
        b = x;
        x = next;
    }
    return b == 1 ? result : 0;
}

// x = u (mod M), x = v (mod N); unique modulo lcm(M, N).
inline Residue crt_pair(Residue u, Residue v) {
    uint64_t m = u.modulus, n = v.modulus;
    uint64_t g = detail::gcd_u64(m, n);
    if ((u.value % g) != (v.value % g))
        throw CRTConflict("crt_pair: residues disagree modulo gcd of the moduli");
    uint64_t l = m / g * n;
    // x = u + M * t where t = (v - u)/g * inv(M/g) mod N/g.
    long long diff = static_cast<long long>(v.value % n) - static_cast<long long>(u.value % n);
    long long ng = static_cast<long long>(n / g);
    long long t = 0;
    if (ng > 1) {
        long long mg = static_cast<long long>((m / g) % static_cast<uint64_t>(ng));
        long long inv = detail::mod_inverse(mg, ng);
        long long dg = (diff / static_cast<long long>(g)) % ng;
        t = ((dg * inv) % ng + ng) % ng;
    }
    unsigned __int128 x = u.value;
    x += static_cast<unsigned __int128>(m) * static_cast<uint64_t>(t);
    return Residue(static_cast<long long>(x % l), l);
}

// Exponent n_{E,ell} of the ell-adic level of differentiation for a CM curve:
// 1 unless ell = 3 with j = 0 (then 3) or ell = 2 (then 4).
inline int n_exponent(const BigInt& j, long long ell) {
    if (ell == 2) return 4;
    if (ell == 3 && j.is_zero()) return 3;
    return 1;
}

} // namespace cmadelic
