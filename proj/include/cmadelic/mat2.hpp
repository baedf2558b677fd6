#pragma once

#include <cstdint>

#include "cmadelic/errors.hpp"
#include "cmadelic/modarith.hpp"

namespace cmadelic {

// 2x2 matrix over Z/NZ. Entries are stored reduced; the modulus is capped at
// 2^16 so a matrix packs into one 64-bit key (four 16-bit limbs), which keeps
// element sets flat and membership tests cache-friendly.
struct Mat2 {
    uint32_t a11 = 0, a12 = 0, a21 = 0, a22 = 0;
    uint32_t n = 1;

    Mat2() = default;
    Mat2(long long x11, long long x12, long long x21, long long x22, uint32_t modulus)
        : n(modulus) {
        if (modulus == 0 || modulus > 65535)
            throw BadLevel("Mat2: modulus must be in [1, 65535]");
        a11 = reduce(x11);
        a12 = reduce(x12);
        a21 = reduce(x21);
        a22 = reduce(x22);
    }

    static Mat2 identity(uint32_t n) { return Mat2(1, 0, 0, 1, n); }
    static Mat2 scalar(long long s, uint32_t n) { return Mat2(s, 0, 0, s, n); }

    uint32_t reduce(long long x) const {
        long long r = x % static_cast<long long>(n);
        if (r < 0) r += n;
        return static_cast<uint32_t>(r);
    }

    uint32_t det() const {
        uint64_t pos = static_cast<uint64_t>(a11) * a22 % n;
        uint64_t neg = static_cast<uint64_t>(a12) * a21 % n;
        return static_cast<uint32_t>((pos + n - neg) % n);
    }

    uint32_t trace() const { return (a11 + a22) % n; }

    bool invertible() const { return detail::gcd_u64(det(), n) == 1; }

    Mat2 operator*(const Mat2& o) const {
        if (n != o.n) throw BadLevel("Mat2: modulus mismatch in product");
        auto mul2 = [this](uint32_t x, uint32_t y, uint32_t z, uint32_t w) {
            return static_cast<uint32_t>((static_cast<uint64_t>(x) * y +
                                          static_cast<uint64_t>(z) * w) % n);
        };
        Mat2 r;
        r.n = n;
        r.a11 = mul2(a11, o.a11, a12, o.a21);
        r.a12 = mul2(a11, o.a12, a12, o.a22);
        r.a21 = mul2(a21, o.a11, a22, o.a21);
        r.a22 = mul2(a21, o.a12, a22, o.a22);
        return r;
    }

    Mat2 inverse() const {
        uint32_t d = det();
        if (detail::gcd_u64(d, n) != 1) throw NotAUnit("Mat2: matrix not invertible");
        long long inv = n == 1 ? 0 : detail::mod_inverse(static_cast<long long>(d),
                                                         static_cast<long long>(n));
        auto mi = [&](long long x) {
            return static_cast<long long>((static_cast<unsigned __int128>((x % n + n) % n) * inv) % n);
        };
        return Mat2(mi(a22), mi(n - a12 % n), mi(n - a21 % n), mi(a11), n);
    }

    Mat2 pow(uint64_t e) const {
        Mat2 r = identity(n);
        Mat2 b = *this;
        while (e) {
            if (e & 1) r = r * b;
            b = b * b;
            e >>= 1;
        }
        return r;
    }

    Mat2 negated() const { return Mat2(-(long long)a11, -(long long)a12, -(long long)a21, -(long long)a22, n); }

    // Entrywise reduction to a divisor modulus.
    Mat2 reduced(uint32_t m) const {
        if (m == 0 || n % m != 0) throw BadLevel("Mat2: target modulus must divide the current one");
        return Mat2(a11, a12, a21, a22, m);
    }

    bool is_identity() const { return a11 == 1 % n && a12 == 0 && a21 == 0 && a22 == 1 % n; }

    uint64_t pack() const {
        return static_cast<uint64_t>(a11) | (static_cast<uint64_t>(a12) << 16) |
               (static_cast<uint64_t>(a21) << 32) | (static_cast<uint64_t>(a22) << 48);
    }

    static Mat2 unpack(uint64_t key, uint32_t n) {
        Mat2 r;
        r.n = n;
        r.a11 = static_cast<uint32_t>(key & 0xffff);
        r.a12 = static_cast<uint32_t>((key >> 16) & 0xffff);
        r.a21 = static_cast<uint32_t>((key >> 32) & 0xffff);
        r.a22 = static_cast<uint32_t>((key >> 48) & 0xffff);
        return r;
    }

    friend bool operator==(const Mat2& x, const Mat2& y) {
        return x.n == y.n && x.a11 == y.a11 && x.a12 == y.a12 && x.a21 == y.a21 && x.a22 == y.a22;
    }
    friend bool operator!=(const Mat2& x, const Mat2& y) { return !(x == y); }
};

// Entrywise CRT of two matrices over coprime moduli.
inline Mat2 crt_mat(const Mat2& x, const Mat2& y) {
    uint64_t m = x.n, n = y.n;
    if (detail::gcd_u64(m, n) != 1) throw BadLevel("crt_mat: moduli must be coprime");
    uint64_t l = m * n;
    auto c = [&](uint32_t u, uint32_t v) {
        return static_cast<long long>(crt_pair(Residue(u, m), Residue(v, n)).value);
    };
    return Mat2(c(x.a11, y.a11), c(x.a12, y.a12), c(x.a21, y.a21), c(x.a22, y.a22),
                static_cast<uint32_t>(l));
}

} // namespace cmadelic
