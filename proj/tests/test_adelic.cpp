#include <doctest.h>

#include <random>

#include "cmadelic/adelic.hpp"

using namespace cmadelic;

namespace {

WeierstrassCurve curve_441c2() { return WeierstrassCurve::from_long(1, -1, 1, -965, -13940); }
WeierstrassCurve curve_288d1() { return WeierstrassCurve::from_short(-99, -378); }
WeierstrassCurve curve_784f3() { return WeierstrassCurve::from_short(-595, 5586); }

} // namespace

TEST_CASE("simplest adelic images: level, index, minimal level") {
    auto r = simplest_adelic_image(simplest_record("49.a2").curve());
    CHECK(r.level == 7);
    CHECK(r.index == 2);
    CHECK(r.minimal_level == 7);
    CHECK(r.is_simplest);
    CHECK(r.twist.N == 1);

    r = simplest_adelic_image(simplest_record("64.a4").curve());
    CHECK(r.level == 16);
    CHECK(r.index == 4);
    // the 2-adic image of this curve is in fact already defined mod 4
    CHECK(r.minimal_level == 4);

    r = simplest_adelic_image(simplest_record("27.a4").curve());
    CHECK(r.level == 27);
    CHECK(r.index == 6);

    CHECK_THROWS_AS(simplest_adelic_image(curve_441c2()), NotSimplest);
    CHECK_THROWS_AS(simplest_adelic_image(WeierstrassCurve::from_short(1, 1)), NotCM);
}

TEST_CASE("glued Cartan part for the twist of the -7 base curve") {
    auto order = *lookup_cm_order(BigInt(-3375));
    auto h7 = squares_cartan_subgroup(order.params, 7, 1);
    auto h3 = det_fixed_subgroup(build_cartan(order.params, 3), a_subgroup(-3, 3));
    auto glue = cartan_image_glued(h7, h3, order.params, 21);
    auto c21 = build_cartan(order.params, 21);
    CHECK(glue.order() == c21.order() / 2);
    CHECK(reduce_subgroup(glue, 7).same_elements(build_cartan(order.params, 7)));
    CHECK(reduce_subgroup(glue, 3).same_elements(build_cartan(order.params, 3)));

    // every admissible coset pair produces the same group
    std::mt19937_64 rng(99);
    auto cart7 = build_cartan(order.params, 7);
    auto cart3 = build_cartan(order.params, 3);
    std::vector<Mat2> reps7, reps3;
    for (uint64_t k : cart7.elements())
        if (!h7.contains_key(k)) reps7.push_back(Mat2::unpack(k, 7));
    for (uint64_t k : cart3.elements())
        if (!h3.contains_key(k)) reps3.push_back(Mat2::unpack(k, 3));
    for (int i = 0; i < 10; ++i) {
        Mat2 g7 = reps7[rng() % reps7.size()];
        Mat2 g3 = reps3[rng() % reps3.size()];
        auto cand = crt_glue(h7, h3, {{g7, g3}}, order.params.cartan_ambient());
        CHECK(cand.same_elements(glue));
    }

    // a full Cartan factor violates the index-2 precondition
    CHECK_THROWS_AS(cartan_image_glued(cart7, h3, order.params, 21), InternalInvariantViolation);
}

TEST_CASE("conjugation lift: character values and lift invariance") {
    auto order = *lookup_cm_order(BigInt(-3375));
    Mat2 c1(1, 0, -1, -1, 7);
    // N = 1: trivial character, any lift comes back unchanged
    Mat2 lift = conjugation_lift(c1, 1, 21, order.params);
    CHECK(lift.reduced(7) == c1);

    // N = -3: group generated with the glued Cartan part is lift-independent
    auto h7 = squares_cartan_subgroup(order.params, 7, 1);
    auto h3 = det_fixed_subgroup(build_cartan(order.params, 3), a_subgroup(-3, 3));
    auto glue = cartan_image_glued(h7, h3, order.params, 21);
    auto glue_gens = small_generating_set(glue);
    auto group_with = [&](const Mat2& c) {
        auto gens = glue_gens;
        gens.push_back(c);
        return SubgroupModN(21, gens);
    };
    Mat2 base = conjugation_lift(c1, -3, 21, order.params);
    auto g_base = group_with(base);
    auto cart3 = build_cartan(order.params, 3);
    std::mt19937_64 rng(7);
    const auto& el3 = cart3.elements();
    for (int i = 0; i < 10; ++i) {
        Mat2 c = Mat2::unpack(el3[rng() % el3.size()], 3);
        Mat2 cand = c * c_epsilon(1, order.params, 3); // a non-Cartan element mod 3
        Mat2 other = conjugation_lift(c1, -3, 21, order.params, &cand);
        CHECK(group_with(other).same_elements(g_base));
    }

    CHECK_THROWS_AS(conjugation_lift(Mat2::identity(7), -3, 21, order.params), DomainError);
}

TEST_CASE("adelic image of 441.c2: level 21, index 2, printed generators") {
    auto r = adelic_image(curve_441c2());
    CHECK(r.level == 21);
    CHECK(r.index == 2);
    CHECK(r.minimal_level == 21);
    CHECK(!r.is_simplest);
    CHECK(r.twist.N == -3);
    CHECK(r.twist.simplest_label == "49.a2");

    // conjugate in GL(2, Z/21) to the printed generators
    SubgroupModN printed(21, {Mat2(-1, 0, 1, 1, 21), Mat2(1, 10, 1, 12, 21)});
    CHECK(printed.order() == r.image.order());
    auto b = is_conjugate(r.image, printed);
    CHECK(b.has_value());

    // factor-level reductions are the full normalizers
    auto [n7, ce7] = build_normalizer(r.params, 7);
    auto [n3, ce3] = build_normalizer(r.params, 3);
    CHECK(reduce_subgroup(r.image, 7).same_elements(n7));
    CHECK(reduce_subgroup(r.image, 3).same_elements(n3));

    // index pattern inside the Cartan matches the normalizer index
    auto cart = build_cartan(r.params, 21);
    CHECK(subgroup_index(cart, intersect(r.image, cart)) == r.index);
}

TEST_CASE("printed mod-21 generators: reductions and preimages") {
    auto order = *lookup_cm_order(BigInt(-3375));
    SubgroupModN printed(21, {Mat2(-1, 0, 1, 1, 21), Mat2(1, 10, 1, 12, 21)});
    auto [n21, ce21] = build_normalizer(order.params, 21);
    auto [n7, ce7] = build_normalizer(order.params, 7);
    auto [n3, ce3] = build_normalizer(order.params, 3);
    CHECK(subgroup_index(n21, printed) == 2);

    // reduction to 3 is everything; reduction to 7 is everything, equivalently
    // the embedded mod-7 image with -Id adjoined
    CHECK(reduce_subgroup(printed, 3).same_elements(n3));
    auto red7 = reduce_subgroup(printed, 7);
    CHECK(red7.same_elements(n7));
    auto emb = simplest_ell_adic_image("49.a2");
    std::vector<Mat2> adj = emb.generators();
    adj.push_back(Mat2::scalar(-1, 7));
    CHECK(SubgroupModN(7, adj).same_elements(red7));

    // full preimage of the embedded mod-7 image keeps its index
    auto pre = preimage_subgroup(emb, 21, n21);
    CHECK(subgroup_index(n21, pre) == 2);
    CHECK(reduce_subgroup(pre, 7).same_elements(emb));

    // the embedded image meets the Cartan in the index-2 squares part
    auto cart7 = build_cartan(order.params, 7);
    auto part = intersect(emb, cart7);
    CHECK(part.order() == 21);
    CHECK(part.same_elements(squares_cartan_subgroup(order.params, 7, 1)));
}

TEST_CASE("adelic image of 49.a2 via the generic entry point") {
    auto r = adelic_image(simplest_record("49.a2").curve());
    CHECK(r.level == 7);
    CHECK(r.index == 2);
    CHECK(r.is_simplest);
}

TEST_CASE("level refinement examples: 288.d1 and 784.f3") {
    auto r = adelic_image(curve_288d1());
    CHECK(r.level == 48);
    CHECK(r.index == 2);
    CHECK(r.minimal_level == 12);
    CHECK(r.twist.N == -3);
    CHECK(r.twist.simplest_label == "32.a2");

    r = adelic_image(curve_784f3());
    CHECK(r.level == 28);
    CHECK(r.index == 2);
    CHECK(r.minimal_level == 14);
    CHECK(r.twist.N == -1);
    CHECK(r.twist.simplest_label == "49.a3");
}

TEST_CASE("quadratic twist coherence at the prime power level") {
    // <-Id, reduce(image of E, ell^n)> = <-Id, embedded image of the target>
    for (const char* label : {"49.a2", "121.b2", "256.d2"}) {
        const auto& rec = simplest_record(label);
        long long n = rec.ell == 2 ? -3 : -1;
        auto e = quadratic_twist(rec.curve(), n);
        auto r = adelic_image(e);
        uint32_t q = rec.level();
        auto red = reduce_subgroup(r.image, q);
        auto emb = simplest_ell_adic_image(r.twist.simplest_label);
        std::vector<Mat2> g1 = generating_set(red);
        g1.push_back(Mat2::scalar(-1, q));
        std::vector<Mat2> g2 = generating_set(emb);
        g2.push_back(Mat2::scalar(-1, q));
        CHECK(SubgroupModN(q, g1).same_elements(SubgroupModN(q, g2)));
    }
}

TEST_CASE("the computed image does not depend on the input model") {
    auto e1 = curve_441c2();
    auto [A, B] = e1.short_model();
    auto e2 = WeierstrassCurve::from_short(BigInt(16) * A, BigInt(64) * B); // u-scaled model
    auto r1 = adelic_image(e1);
    auto r2 = adelic_image(e2);
    CHECK(r1.level == r2.level);
    CHECK(r1.image.same_elements(r2.image));
    CHECK(r1.minimal_level == r2.minimal_level);
    CHECK(r1.twist.N == r2.twist.N);
}

TEST_CASE("errors: non-CM and unsupported inputs") {
    CHECK_THROWS_AS(adelic_image(WeierstrassCurve::from_short(1, 1)), NotCM);
    CHECK_THROWS_AS(adelic_image(WeierstrassCurve::from_short(0, BigInt(16) * BigInt(5))),
                    Unsupported);
}
