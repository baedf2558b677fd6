#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cmadelic/cartan.hpp"
#include "cmadelic/cmdata.hpp"
#include "cmadelic/curves.hpp"
#include "cmadelic/errors.hpp"
#include "cmadelic/subgroup.hpp"

namespace cmadelic {

// Output of the image computation: a level of definition M, generators of
// the mod-M image inside the normalizer of the Cartan, its index there, and
// the refinement to the minimal level.
struct GaloisImageResult {
    CMOrderRecord order;
    CartanParams params;
    uint32_t level = 1;           // M
    std::vector<Mat2> generators; // generate image
    SubgroupModN image;           // materialized mod-M image
    uint64_t index = 1;           // [N_{delta,phi}(M) : image]
    uint32_t minimal_level = 1;
    TwistDatum twist;
    bool is_simplest = false;
};

namespace detail {

inline std::vector<uint32_t> divisors_of(uint32_t m) {
    std::vector<uint32_t> out;
    for (uint32_t d = 1; d <= m; ++d)
        if (m % d == 0) out.push_back(d);
    return out;
}

} // namespace detail

// Smallest divisor d of the level with the same index in the normalizer at
// level d; every level of definition is a multiple of it.
inline uint32_t minimal_level(const GaloisImageResult& result) {
    for (uint32_t d : detail::divisors_of(result.level)) {
        if (d == result.level) break;
        auto [norm, ce] = build_normalizer(result.params, d);
        auto red = reduce_subgroup(result.image, d);
        if (subgroup_index(norm, red) == result.index) return d;
    }
    return result.level;
}

// Adelic image of one of the 40 simplest curves: defined at level ell^n with
// the embedded mod-ell^n generators, index d_E.
inline GaloisImageResult simplest_adelic_image(const WeierstrassCurve& e) {
    std::optional<CMOrderRecord> order = lookup_cm_order(e);
    if (!order) throw NotCM("simplest_adelic_image: not a CM j-invariant");
    std::optional<SimplestCurveRecord> match;
    for (const auto& rec : simplest_curves_for(order->disc))
        if (is_isomorphic_Q(e, rec.curve())) match = rec;
    if (!match) throw NotSimplest("simplest_adelic_image: curve is not one of the 40 simplest curves");
    GaloisImageResult r;
    r.order = *order;
    r.params = order->params;
    r.level = match->level();
    r.generators = match->gens;
    r.image = simplest_ell_adic_image(match->label);
    auto [norm, ce] = build_normalizer(r.params, r.level);
    r.index = subgroup_index(norm, r.image);
    r.twist = TwistDatum{1, match->label, 1};
    r.is_simplest = true;
    r.minimal_level = minimal_level(r);
    return r;
}

// The Cartan part of the image at the glued level M = ell^n * N-dagger:
// iterate non-subgroup coset representatives (g, g') and return the unique
// index-2 subgroup of C(M) that projects onto both factor Cartans and meets
// the two half-products in the same subgroup.
inline SubgroupModN cartan_image_glued(const SubgroupModN& h_ell, const SubgroupModN& h_dag,
                                       const CartanParams& params, uint32_t m) {
    uint32_t q = h_ell.modulus(), dag = h_dag.modulus();
    if (static_cast<uint64_t>(q) * dag != m || detail::gcd_u64(q, dag) != 1)
        throw BadLevel("cartan_image_glued: M must be the product of the coprime factor levels");
    auto cart_q = build_cartan(params, q);
    auto cart_dag = build_cartan(params, dag);
    if (subgroup_index(cart_q, h_ell) != 2 || subgroup_index(cart_dag, h_dag) != 2)
        throw InternalInvariantViolation("cartan_image_glued: factor subgroups must have index 2");
    auto cart_m = build_cartan(params, m);
    auto half_left = crt_glue(h_ell, cart_dag, {}, params.cartan_ambient());
    auto half_right = crt_glue(cart_q, h_dag, {}, params.cartan_ambient());

    // candidates in lexicographic (a, b) order over each non-subgroup coset
    auto coset_reps = [&params](const SubgroupModN& cart, const SubgroupModN& h) {
        std::vector<Mat2> reps;
        uint32_t mod = cart.modulus();
        for (uint32_t a = 0; a < mod; ++a)
            for (uint32_t b = 0; b < mod; ++b) {
                Mat2 m = cartan_element(a, b, params, mod);
                if (m.invertible() && !h.contains(m)) reps.push_back(m);
            }
        return reps;
    };
    for (const Mat2& gq : coset_reps(cart_q, h_ell)) {
        for (const Mat2& gd : coset_reps(cart_dag, h_dag)) {
            auto cand = crt_glue(h_ell, h_dag, {{gq, gd}}, params.cartan_ambient());
            if (subgroup_index(cart_m, cand) != 2) continue;
            if (!reduce_subgroup(cand, q).same_elements(cart_q)) continue;
            if (!reduce_subgroup(cand, dag).same_elements(cart_dag)) continue;
            if (!intersect(cand, half_left).same_elements(intersect(cand, half_right))) continue;
            return cand;
        }
    }
    throw InternalInvariantViolation("cartan_image_glued: no candidate satisfied the gluing conditions");
}

// Lift of the non-Cartan generator c_eps from level ell^n to level M,
// multiplied by the value of the twisting character on the lift. The value
// is read off the determinant modulo N-dagger, which carries the cyclotomic
// action on sqrt(N); any lift yields the same group together with the glued
// Cartan part.
inline Mat2 conjugation_lift(const Mat2& c_eps, long long twist_n, uint32_t m,
                             const CartanParams& params, const Mat2* dag_part = nullptr) {
    uint32_t q = c_eps.n;
    if (m % q != 0) throw BadLevel("conjugation_lift: level mismatch");
    uint32_t dag = m / q;
    if (build_cartan(params, q).contains(c_eps))
        throw DomainError("conjugation_lift: element lies inside the Cartan");
    Mat2 x = dag_part ? *dag_part : c_epsilon(1, params, dag);
    if (build_cartan(params, dag).contains(x))
        throw DomainError("conjugation_lift: the N-dagger component must lie outside the Cartan");
    Mat2 lift = crt_mat(c_eps, x);
    long long disc = twist_n == 1 ? 1 : field_discriminant(twist_n);
    int chi = twist_n == 1 ? 1 : kronecker(disc, static_cast<long long>(lift.det() % dag));
    if (chi == 0) throw InternalInvariantViolation("conjugation_lift: character vanished on a unit");
    return chi == 1 ? lift : lift.negated();
}

// The full image computation: identify the CM order, twist to a simplest
// curve, glue the Cartan part at M = ell^n * N-dagger via CRT, adjoin the
// twisted lift of complex conjugation, and refine to the minimal level.
inline GaloisImageResult adelic_image(const WeierstrassCurve& e) {
    std::optional<CMOrderRecord> order = lookup_cm_order(e);
    if (!order) throw NotCM("adelic_image: not a class-number-one CM j-invariant");
    TwistDatum twist = twist_to_simplest(e); // Unsupported for non-simplest j = 0, 1728
    if (twist.N == 1) return simplest_adelic_image(e);

    const auto& rec = simplest_record(twist.simplest_label);
    uint32_t q = rec.level();
    uint32_t m = static_cast<uint32_t>(q * twist.N_dagger);
    const CartanParams& params = order->params;

    // Cartan part at the prime-power level: the squares subgroup for odd ell
    // (shared by both simplest twists), the embedded Cartan part for ell = 2.
    SubgroupModN h_q = order->ell == 2
                           ? intersect(simplest_ell_adic_image(rec.label), build_cartan(params, q))
                           : squares_cartan_subgroup(params, order->ell, rec.n);
    SubgroupModN h_dag = det_fixed_subgroup(
        build_cartan(params, static_cast<uint32_t>(twist.N_dagger)),
        a_subgroup(twist.N, static_cast<uint32_t>(twist.N_dagger)));

    auto glue = cartan_image_glued(h_q, h_dag, params, m);

    // the embedded image of the simplest curve supplies the non-Cartan element
    Mat2 c_eps = Mat2::identity(q);
    bool found = false;
    auto cart_q = build_cartan(params, q);
    for (const auto& g : rec.gens)
        if (!cart_q.contains(g)) {
            c_eps = g;
            found = true;
            break;
        }
    if (!found) throw InternalInvariantViolation("adelic_image: embedded image has no non-Cartan generator");
    Mat2 conj = conjugation_lift(c_eps, twist.N, m, params);

    std::vector<Mat2> gens = {conj};
    for (const auto& g : small_generating_set(glue)) gens.push_back(g);

    GaloisImageResult r;
    r.order = *order;
    r.params = params;
    r.level = m;
    r.generators = gens;
    r.image = SubgroupModN(m, gens, params.normalizer_ambient());
    auto [norm, ce] = build_normalizer(params, m);
    r.index = subgroup_index(norm, r.image);
    if (r.index != 2)
        throw InternalInvariantViolation("adelic_image: computed image does not have index 2");
    r.twist = twist;
    r.is_simplest = false;
    r.minimal_level = minimal_level(r);
    return r;
}

} // namespace cmadelic
