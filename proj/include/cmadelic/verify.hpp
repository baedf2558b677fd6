#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cmadelic/adelic.hpp"
#include "cmadelic/curves.hpp"
#include "cmadelic/errors.hpp"

namespace cmadelic {

struct FrobeniusReport {
    uint32_t level = 1;
    long long prime_bound = 0;
    long long primes_checked = 0;
    long long mismatches = 0;
    long long first_bad_prime = 0;
    size_t classes_total = 0;  // distinct (trace, det) classes of the image
    size_t classes_hit = 0;    // classes realized by some Frobenius
    double coverage() const {
        return classes_total ? static_cast<double>(classes_hit) / static_cast<double>(classes_total)
                             : 1.0;
    }
};

// Chebotarev sanity check: every good prime's Frobenius data (a_p mod M,
// p mod M) must be realized by an element of the image. Existence is a hard
// assertion; the coverage direction is only reported, since it is merely
// statistically true at finite bounds.
inline FrobeniusReport frobenius_consistency(const WeierstrassCurve& e,
                                             const SubgroupModN& image,
                                             long long prime_bound) {
    if (prime_bound > 100000) throw SearchTooLarge("frobenius_consistency: prime bound too large");
    uint32_t m = image.modulus();
    std::set<std::pair<uint32_t, uint32_t>> classes, hit;
    for (uint64_t key : image.elements()) {
        Mat2 x = Mat2::unpack(key, m);
        classes.insert({x.trace(), x.det()});
    }
    FrobeniusReport rep;
    rep.level = m;
    rep.prime_bound = prime_bound;
    rep.classes_total = classes.size();
    for (long long p = 2; p <= prime_bound; ++p) {
        if (!detail::is_prime_u64(static_cast<uint64_t>(p))) continue;
        if (m % p == 0) continue;
        if (e.disc.mod_u64(static_cast<uint64_t>(p)) == 0) continue;
        long long ap = ap_trace(e, p);
        uint32_t tr = static_cast<uint32_t>(((ap % m) + m) % m);
        uint32_t dt = static_cast<uint32_t>(p % m);
        ++rep.primes_checked;
        if (classes.count({tr, dt})) {
            hit.insert({tr, dt});
        } else {
            ++rep.mismatches;
            if (!rep.first_bad_prime) rep.first_bad_prime = p;
        }
    }
    rep.classes_hit = hit.size();
    if (rep.mismatches)
        throw FrobeniusMismatch("frobenius_consistency: Frobenius at p = " +
                                std::to_string(rep.first_bad_prime) +
                                " is not realized in the image (" +
                                std::to_string(rep.mismatches) + " mismatches below " +
                                std::to_string(prime_bound) + ")");
    return rep;
}

inline FrobeniusReport frobenius_consistency(const WeierstrassCurve& e,
                                             const GaloisImageResult& result,
                                             long long prime_bound) {
    return frobenius_consistency(e, result.image, prime_bound);
}

struct EntanglementReport {
    bool applicable = false; // false for simplest inputs (no N-dagger factor)
    uint64_t index_at_level = 0;
    uint64_t index_at_prime_power = 0;
    uint64_t index_at_dagger = 0;
};

// The group-theoretic shadow of the division-field entanglement: the Cartan
// part has index 2 at the glued level while both factor-level Cartan parts
// are everything.
inline EntanglementReport entanglement_check(const GaloisImageResult& result) {
    EntanglementReport rep;
    if (result.is_simplest || result.twist.N == 1) return rep;
    rep.applicable = true;
    uint32_t m = result.level;
    uint32_t q = result.level / static_cast<uint32_t>(result.twist.N_dagger);
    uint32_t dag = static_cast<uint32_t>(result.twist.N_dagger);
    auto cart_m = build_cartan(result.params, m);
    auto part = intersect(result.image, cart_m);
    rep.index_at_level = subgroup_index(cart_m, part);
    rep.index_at_prime_power = subgroup_index(build_cartan(result.params, q),
                                              reduce_subgroup(part, q));
    rep.index_at_dagger = subgroup_index(build_cartan(result.params, dag),
                                         reduce_subgroup(part, dag));
    if (rep.index_at_level != 2 || rep.index_at_prime_power != 1 || rep.index_at_dagger != 1)
        throw EntanglementMismatch(
            "entanglement_check: expected Cartan indices (2; 1, 1), got (" +
            std::to_string(rep.index_at_level) + "; " + std::to_string(rep.index_at_prime_power) +
            ", " + std::to_string(rep.index_at_dagger) + ")");
    return rep;
}

enum class ConjugacyVerdict { conjugate, not_conjugate, inconclusive };

struct DifferentiationReport {
    ConjugacyVerdict verdict = ConjugacyVerdict::inconclusive;
    bool isomorphic = false;
    std::optional<Mat2> conjugator;
};

// Level-of-differentiation check: mod-M conjugacy of the images must occur
// exactly for Q-isomorphic curves. Full GL2 search within the cap; beyond it
// a fingerprint mismatch still certifies non-conjugacy, anything else is
// reported as inconclusive rather than asserted.
inline DifferentiationReport differentiation_check(const WeierstrassCurve& e1,
                                                   const GaloisImageResult& r1,
                                                   const WeierstrassCurve& e2,
                                                   const GaloisImageResult& r2, uint32_t m) {
    if (r1.level % m != 0 || r2.level % m != 0)
        throw BadLevel("differentiation_check: M must divide both computed levels");
    DifferentiationReport rep;
    rep.isomorphic = is_isomorphic_Q(e1, e2);
    auto g1 = reduce_subgroup(r1.image, m);
    auto g2 = reduce_subgroup(r2.image, m);
    if (gl2_order(m) <= kConjugacySearchCap) {
        rep.conjugator = is_conjugate(g1, g2);
        rep.verdict = rep.conjugator ? ConjugacyVerdict::conjugate : ConjugacyVerdict::not_conjugate;
    } else {
        rep.verdict = fingerprint(g1) != fingerprint(g2) ? ConjugacyVerdict::not_conjugate
                                                         : ConjugacyVerdict::inconclusive;
    }
    if (rep.verdict == ConjugacyVerdict::conjugate && rep.conjugator) {
        // any conjugator must carry Cartan part to Cartan part
        auto cart = build_cartan(r1.params, m);
        auto p1 = intersect(g1, cart);
        auto p2 = intersect(g2, cart);
        Mat2 b = *rep.conjugator;
        Mat2 binv = b.inverse();
        for (const auto& x : generating_set(p1))
            if (!p2.contains(b * x * binv))
                throw DifferentiationMismatch(
                    "differentiation_check: conjugator does not respect the Cartan part");
    }
    if (rep.verdict == ConjugacyVerdict::conjugate && !rep.isomorphic)
        throw DifferentiationMismatch(
            "differentiation_check: conjugate images for non-isomorphic curves");
    if (rep.verdict == ConjugacyVerdict::not_conjugate && rep.isomorphic)
        throw DifferentiationMismatch(
            "differentiation_check: non-conjugate images for isomorphic curves");
    return rep;
}

} // namespace cmadelic
