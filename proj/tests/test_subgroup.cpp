#include <doctest.h>

#include <numeric>
#include <random>
#include <thread>

#include "cmadelic/cartan.hpp"
#include "cmadelic/subgroup.hpp"

using namespace cmadelic;

namespace {

// (delta, phi) = (-2, 1), the order of discriminant -7.
CartanParams p7() { return delta_phi(-7, 1); }

// Oracle: count Cartan pairs with unit determinant by direct enumeration.
size_t cartan_count_oracle(const CartanParams& p, uint32_t n) {
    size_t cnt = 0;
    for (uint32_t a = 0; a < n; ++a)
        for (uint32_t b = 0; b < n; ++b) {
            long long det = (static_cast<long long>(a) * a + static_cast<long long>(a) * b * p.phi -
                             p.delta * static_cast<long long>(b) * b) % n;
            det = ((det % n) + n) % n;
            if (std::gcd(static_cast<long long>(det), static_cast<long long>(n)) == 1) ++cnt;
        }
    return cnt;
}

// The 2-adic images printed for the level-of-differentiation example
// (disc -8 curves 256.d2 and 256.a1), reduced mod 2^k.
SubgroupModN g_256d2(uint32_t mod) {
    std::vector<Mat2> gens = {Mat2::scalar(3, mod), Mat2(1, 1, -2, 1, mod), Mat2(-1, 0, 0, 1, mod)};
    return SubgroupModN(mod, gens);
}
SubgroupModN g_256a1(uint32_t mod) {
    std::vector<Mat2> gens = {Mat2::scalar(3, mod), Mat2(-1, -1, 2, -1, mod), Mat2(-1, 0, 0, 1, mod)};
    return SubgroupModN(mod, gens);
}

} // namespace

TEST_CASE("closure basic cases") {
    CHECK(closure({Mat2::identity(5)}, 5).size() == 1);
    // c'_{-1} is an involution
    Mat2 w(0, -1, -1, 0, 7);
    auto c = closure({w}, 7);
    CHECK(c.size() == 2);
    CHECK(std::binary_search(c.begin(), c.end(), Mat2::identity(7).pack()));
    CHECK_THROWS_AS(closure({Mat2(1, 1, 1, 1, 5)}, 5), NotAUnit);
    CHECK_THROWS_AS(closure({Mat2(1, 1, 0, 1, 7)}, 7, 3), GroupTooLarge);
}

TEST_CASE("closure of Cartan generators matches the enumeration oracle") {
    auto cart = build_cartan(p7(), 7);
    CHECK(cart.order() == cartan_count_oracle(p7(), 7));
    CHECK(cart.order() == 42);
    auto gens = small_generating_set(cart);
    CHECK(gens.size() <= 3);
    CHECK(closure(gens, 7).size() == 42);
    // closure idempotence
    auto elems = closure(gens, 7);
    std::vector<Mat2> all;
    for (uint64_t k : elems) all.push_back(Mat2::unpack(k, 7));
    CHECK(closure(all, 7) == elems);
}

TEST_CASE("GL2 order formula matches enumeration for N = 2..16") {
    for (uint32_t n = 2; n <= 16; ++n) {
        uint64_t count = 0;
        for (uint32_t a = 0; a < n; ++a)
            for (uint32_t b = 0; b < n; ++b)
                for (uint32_t c = 0; c < n; ++c)
                    for (uint32_t d = 0; d < n; ++d)
                        if (Mat2(a, b, c, d, n).invertible()) ++count;
        CHECK(count == gl2_order(n));
    }
}

TEST_CASE("subgroup_index") {
    auto [norm, ce] = build_normalizer(p7(), 7);
    auto cart = build_cartan(p7(), 7);
    CHECK(norm.order() == 84);
    CHECK(subgroup_index(norm, norm) == 1);
    CHECK(subgroup_index(norm, cart) == 2);
    SubgroupModN other(7, {Mat2(0, -1, -1, 0, 7)});
    CHECK_THROWS_AS(subgroup_index(cart, other), NotASubgroup);
}

TEST_CASE("reduce_subgroup identity and projection") {
    auto cart = build_cartan(p7(), 49);
    auto same = reduce_subgroup(cart, 49);
    CHECK(same.same_elements(cart));
    auto down = reduce_subgroup(cart, 7);
    CHECK(down.same_elements(build_cartan(p7(), 7)));
    CHECK_THROWS_AS(reduce_subgroup(cart, 5), BadLevel);
}

TEST_CASE("preimage then reduce is the identity; index is preserved") {
    auto [norm21, ce21] = build_normalizer(p7(), 21);
    auto [norm7, ce7] = build_normalizer(p7(), 7);

    // preimage of the trivial group mod 1 is everything
    SubgroupModN triv = SubgroupModN::from_elements(1, {Mat2::identity(1).pack()});
    auto full = preimage_subgroup(triv, 21, norm21);
    CHECK(full.same_elements(norm21));

    // preimage of the full reduced ambient is the full ambient
    auto pre_full = preimage_subgroup(norm7, 21, norm21);
    CHECK(pre_full.same_elements(norm21));

    // index multiplicativity for a proper subgroup
    auto cart7 = build_cartan(p7(), 7);
    auto pre = preimage_subgroup(cart7, 21, norm21);
    CHECK(subgroup_index(norm21, pre) == subgroup_index(norm7, cart7));
    CHECK(reduce_subgroup(pre, 7).same_elements(cart7));

    // a group not inside the reduced ambient is rejected
    SubgroupModN outside(7, {Mat2(1, 1, 0, 1, 7)}); // unipotent, not in N(7)
    CHECK_THROWS_AS(preimage_subgroup(outside, 21, norm21), NotASubgroup);
}

TEST_CASE("crt_glue of full Cartans is the full Cartan at the product level") {
    auto c7 = build_cartan(p7(), 7);
    auto c3 = build_cartan(p7(), 3);
    auto glued = crt_glue(c7, c3, {});
    CHECK(glued.order() == c7.order() * c3.order());
    CHECK(glued.same_elements(build_cartan(p7(), 21)));
    CHECK(reduce_subgroup(glued, 7).same_elements(c7));
    CHECK(reduce_subgroup(glued, 3).same_elements(c3));
    CHECK_THROWS_AS(crt_glue(c7, build_cartan(p7(), 14), {}), BadLevel);

    SubgroupModN t7(7, {});
    SubgroupModN t3(3, {});
    auto trivial = crt_glue(t7, t3, {{Mat2::identity(7), Mat2::identity(3)}});
    CHECK(trivial.order() == 1);
}

TEST_CASE("crt_glue recovers a group from its reductions") {
    std::mt19937_64 rng(4242);
    auto cart21 = build_cartan(p7(), 21);
    const auto& elems = cart21.elements();
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Mat2> gens;
        for (int i = 0; i < 2; ++i)
            gens.push_back(Mat2::unpack(elems[rng() % elems.size()], 21));
        SubgroupModN g(21, gens);
        std::vector<std::pair<Mat2, Mat2>> pairs;
        for (const auto& x : gens) pairs.emplace_back(x.reduced(7), x.reduced(3));
        SubgroupModN none7(7, {}), none3(3, {});
        auto glued = crt_glue(none7, none3, pairs);
        CHECK(glued.same_elements(g));
    }
}

TEST_CASE("intersect") {
    auto [norm, ce] = build_normalizer(p7(), 7);
    auto cart = build_cartan(p7(), 7);
    CHECK(intersect(norm, norm).same_elements(norm));
    CHECK(intersect(norm, cart).same_elements(cart));
    CHECK_THROWS_AS(intersect(norm, build_cartan(p7(), 21)), BadLevel);
}

TEST_CASE("is_conjugate trivial and given-candidate modes") {
    auto cart = build_cartan(p7(), 7);
    auto self = is_conjugate(cart, cart);
    REQUIRE(self.has_value());
    CHECK(self->is_identity());

    Mat2 witness(1, 0, 4, 1, 8);
    auto g1 = g_256d2(8);
    auto g2 = g_256a1(8);
    auto found = is_conjugate(g1, g2, ConjugacyMode::given, &witness);
    REQUIRE(found.has_value());
    CHECK(*found == witness);
}

TEST_CASE("level-of-differentiation example: conjugate mod 8, not mod 16") {
    auto g1 = g_256d2(8);
    auto g2 = g_256a1(8);
    auto found = is_conjugate(g1, g2);
    REQUIRE(found.has_value());

    auto h1 = g_256d2(16);
    auto h2 = g_256a1(16);
    CHECK(!is_conjugate(h1, h2).has_value());
    CHECK_THROWS_AS(is_conjugate(SubgroupModN(64, {Mat2(1, 1, 0, 1, 64)}),
                                 SubgroupModN(64, {Mat2(1, 0, 1, 1, 64)}),
                                 ConjugacyMode::full_gl2, nullptr, 1000),
                    SearchTooLarge);
}

TEST_CASE("materialization is synchronized and runs at most once") {
    auto gens = small_generating_set(build_cartan(p7(), 49));
    SubgroupModN shared(49, gens);
    std::vector<std::thread> workers;
    std::vector<size_t> sizes(8, 0);
    for (int t = 0; t < 8; ++t)
        workers.emplace_back([&, t] {
            SubgroupModN copy = shared; // copies share the materialized state
            sizes[static_cast<size_t>(t)] = copy.order();
        });
    for (auto& w : workers) w.join();
    for (size_t s : sizes) CHECK(s == shared.order());
}

TEST_CASE("element_order and fingerprint") {
    Mat2 w(0, -1, -1, 0, 7);
    CHECK(element_order(w, 84) == 2);
    CHECK(element_order(Mat2::identity(7), 84) == 1);
    auto cart = build_cartan(p7(), 7);
    auto [norm, ce] = build_normalizer(p7(), 7);
    CHECK(fingerprint(cart) != fingerprint(norm));
}
