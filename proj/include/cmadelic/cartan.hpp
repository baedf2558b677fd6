#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "cmadelic/errors.hpp"
#include "cmadelic/mat2.hpp"
#include "cmadelic/modarith.hpp"
#include "cmadelic/subgroup.hpp"

namespace cmadelic {

// delta/phi parameters of a CM order with discriminant Delta_K * f^2.
// phi^2 + 4*delta = Delta_K * f^2 in both congruence cases.
struct CartanParams {
    long long delta = 0;
    long long phi = 0;
    long long discriminant = 0;

    Ambient cartan_ambient() const { return Ambient{Ambient::Cartan, delta, phi}; }
    Ambient normalizer_ambient() const { return Ambient{Ambient::Normalizer, delta, phi}; }
};

inline bool is_fundamental_discriminant(long long d) {
    if (d >= 0) return false;
    long long r = ((d % 4) + 4) % 4;
    if (r == 1) return is_squarefree(d);
    if (r != 0) return false;
    long long m = d / 4;
    long long rm = ((m % 4) + 4) % 4;
    return (rm == 2 || rm == 3) && is_squarefree(m);
}

inline CartanParams delta_phi(long long delta_k, long long f) {
    if (f < 1 || !is_fundamental_discriminant(delta_k))
        throw DomainError("delta_phi: need a fundamental imaginary quadratic discriminant and f >= 1");
    long long disc = delta_k * f * f;
    CartanParams p;
    p.discriminant = disc;
    long long r = ((disc % 4) + 4) % 4;
    if (r == 0) {
        p.delta = disc / 4;
        p.phi = 0;
    } else {
        p.delta = (delta_k - 1) / 4 * f * f;
        p.phi = f;
    }
    return p;
}

// c_{delta,phi}(a, b) = (a + b*phi, b; delta*b, a). Determinant membership is
// the caller's concern.
inline Mat2 cartan_element(Residue a, Residue b, const CartanParams& p) {
    a.require_same(b);
    uint32_t n = static_cast<uint32_t>(a.modulus);
    long long av = static_cast<long long>(a.value), bv = static_cast<long long>(b.value);
    return Mat2(av + bv * p.phi, bv, p.delta * bv, av, n);
}

inline Mat2 cartan_element(long long a, long long b, const CartanParams& p, uint32_t n) {
    return cartan_element(Residue(a, n), Residue(b, n), p);
}

// c_eps = (eps, 0; -eps*phi, -eps), the order-2 element generating the
// normalizer over the Cartan.
inline Mat2 c_epsilon(int eps, const CartanParams& p, uint32_t n) {
    if (eps != 1 && eps != -1) throw DomainError("c_epsilon: eps must be +-1");
    return Mat2(eps, 0, -eps * p.phi, -eps, n);
}

// c'_eps = (0, eps; eps, 0).
inline Mat2 c_prime_epsilon(int eps, uint32_t n) {
    if (eps != 1 && eps != -1) throw DomainError("c_prime_epsilon: eps must be +-1");
    return Mat2(0, eps, eps, 0, n);
}

// The Cartan subgroup C_{delta,phi}(N), materialized by direct enumeration of
// (a, b) pairs with unit determinant.
inline SubgroupModN build_cartan(const CartanParams& p, uint32_t n) {
    std::vector<uint64_t> elems;
    for (uint32_t a = 0; a < n; ++a) {
        for (uint32_t b = 0; b < n; ++b) {
            Mat2 m = cartan_element(a, b, p, n);
            if (m.invertible()) elems.push_back(m.pack());
        }
    }
    std::sort(elems.begin(), elems.end());
    elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
    return SubgroupModN::from_elements(n, std::move(elems), p.cartan_ambient());
}

// N_{delta,phi}(N) = <C_{delta,phi}(N), c_eps> = C u C*c_eps.
inline std::pair<SubgroupModN, Mat2> build_normalizer(const CartanParams& p, uint32_t n,
                                                      int eps = 1) {
    SubgroupModN cartan = build_cartan(p, n);
    Mat2 ce = c_epsilon(eps, p, n);
    std::vector<uint64_t> elems = cartan.elements();
    for (uint64_t key : cartan.elements())
        elems.push_back((Mat2::unpack(key, n) * ce).pack());
    std::sort(elems.begin(), elems.end());
    elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
    return {SubgroupModN::from_elements(n, std::move(elems), p.normalizer_ambient()), ce};
}

enum class BasisDirection { to_phi0, from_phi0 };

// Change of basis between the working (delta, phi) presentation and the
// (delta + phi^2/4, 0) presentation, valid at odd moduli: conjugation by
// (1, 0; +-phi/2, 1).
inline Mat2 basis_change(const Mat2& m, BasisDirection dir, const CartanParams& p) {
    if (m.n % 2 == 0) throw BadLevel("basis_change: modulus must be odd");
    long long inv2 = detail::mod_inverse(2, m.n);
    long long half_phi = (p.phi % m.n + m.n) % m.n * inv2 % m.n;
    Mat2 conj = dir == BasisDirection::to_phi0 ? Mat2(1, 0, half_phi, 1, m.n)
                                               : Mat2(1, 0, -half_phi, 1, m.n);
    return conj * m * conj.inverse();
}

// A_N^m: units a mod m whose cyclotomic action fixes sqrt(N), i.e. with
// kronecker(disc Q(sqrt N), a) = 1. Requires N-dagger | m so that sqrt(N)
// lives in Q(zeta_m).
inline std::vector<uint32_t> a_subgroup(long long n_squarefree, uint32_t m) {
    if (n_squarefree == 0 || !is_squarefree(n_squarefree))
        throw DomainError("a_subgroup: N must be a non-zero square-free integer");
    if (n_squarefree != 1 && m % n_dagger(n_squarefree) != 0)
        throw BadLevel("a_subgroup: N-dagger must divide the modulus");
    if (m == 1) return {0};
    std::vector<uint32_t> out;
    for (uint32_t a = 0; a < m; ++a) {
        if (detail::gcd_u64(a, m) != 1) continue;
        if (n_squarefree == 1 || kronecker(field_discriminant(n_squarefree), a) == 1)
            out.push_back(a);
    }
    return out;
}

// H = {g in cartan : det(g) in allowed_dets}. allowed_dets must be a
// multiplicatively closed unit set containing 1.
inline SubgroupModN det_fixed_subgroup(const SubgroupModN& cartan,
                                       const std::vector<uint32_t>& allowed_dets) {
    uint32_t n = cartan.modulus();
    std::vector<uint32_t> allowed = allowed_dets;
    std::sort(allowed.begin(), allowed.end());
    auto in_allowed = [&](uint32_t v) {
        return std::binary_search(allowed.begin(), allowed.end(), v);
    };
    if (!in_allowed(1 % n)) throw DomainError("det_fixed_subgroup: allowed set must contain 1");
    for (uint32_t x : allowed)
        for (uint32_t y : allowed)
            if (!in_allowed(static_cast<uint32_t>((static_cast<uint64_t>(x) * y) % n)))
                throw DomainError("det_fixed_subgroup: allowed set is not multiplicatively closed");
    std::vector<uint64_t> elems;
    for (uint64_t key : cartan.elements()) {
        Mat2 x = Mat2::unpack(key, n);
        if (in_allowed(x.det())) elems.push_back(key);
    }
    return SubgroupModN::from_elements(n, std::move(elems), cartan.ambient());
}

// The index-2 Cartan part {(a^2 + b*phi/2, b; delta*b, a^2 - b*phi/2)} of the
// non-maximal ell-adic images at an odd prime ell dividing the discriminant,
// written in the working (delta, phi) basis and reduced mod ell^n.
inline SubgroupModN squares_cartan_subgroup(const CartanParams& p, long long ell, int n_exp) {
    if (ell == 2) throw BadPrime("squares_cartan_subgroup: ell = 2 uses embedded per-curve data");
    if (ell < 3 || p.discriminant % ell != 0)
        throw BadPrime("squares_cartan_subgroup: ell must be an odd prime dividing the discriminant");
    uint32_t q = 1;
    for (int i = 0; i < n_exp; ++i) q = static_cast<uint32_t>(q * ell);
    long long inv2 = detail::mod_inverse(2, q);
    long long half_phi = ((p.phi % q) + q) % q * inv2 % q;
    // Square units mod q.
    std::vector<uint32_t> squares;
    for (uint32_t x = 0; x < q; ++x) {
        if (detail::gcd_u64(x, q) != 1) continue;
        squares.push_back(static_cast<uint32_t>(static_cast<uint64_t>(x) * x % q));
    }
    std::sort(squares.begin(), squares.end());
    squares.erase(std::unique(squares.begin(), squares.end()), squares.end());
    std::vector<uint64_t> elems;
    elems.reserve(squares.size() * q);
    for (uint32_t s : squares) {
        for (uint32_t b = 0; b < q; ++b) {
            long long off = static_cast<long long>(b) * half_phi % q;
            Mat2 m(static_cast<long long>(s) + off, b, p.delta * static_cast<long long>(b),
                   static_cast<long long>(s) - off, q);
            elems.push_back(m.pack());
        }
    }
    std::sort(elems.begin(), elems.end());
    elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
    return SubgroupModN::from_elements(q, std::move(elems), p.cartan_ambient());
}

} // namespace cmadelic
