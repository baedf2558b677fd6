#include <doctest.h>

#include <set>

#include "cmadelic/cmdata.hpp"

using namespace cmadelic;

namespace {

const CMOrderRecord& order_for(long long disc) {
    for (const auto& o : cm_orders())
        if (o.disc == disc) return o;
    throw std::logic_error("unknown disc");
}

// Frobenius (trace, det) compatibility at primes below the bound.
int frobenius_mismatches(const WeierstrassCurve& e, const SubgroupModN& img, long long bound) {
    uint32_t q = img.modulus();
    std::set<std::pair<uint32_t, uint32_t>> td;
    for (uint64_t key : img.elements()) {
        Mat2 x = Mat2::unpack(key, q);
        td.insert({x.trace(), x.det()});
    }
    int bad = 0;
    for (long long p = 2; p < bound; ++p) {
        if (!detail::is_prime_u64(static_cast<uint64_t>(p))) continue;
        if (q % p == 0) continue;
        if (e.disc.mod_u64(static_cast<uint64_t>(p)) == 0) continue;
        long long ap = ap_trace(e, p);
        uint32_t tr = static_cast<uint32_t>(((ap % q) + q) % q);
        if (!td.count({tr, static_cast<uint32_t>(p % q)})) ++bad;
    }
    return bad;
}

// Exhaustive non-conjugacy certificate for two groups sharing their Cartan
// part J at a prime level: any conjugator preserves determinants, hence maps
// J to J, hence normalizes the unique order-ell subgroup of J, hence fixes
// the common kernel line of its non-identity elements. Sweeping the line
// stabilizer therefore decides conjugacy.
bool certify_nonconjugate_twins(const SubgroupModN& g1, const SubgroupModN& g2,
                                const SubgroupModN& cartan) {
    uint32_t p = g1.modulus();
    auto j1 = intersect(g1, cartan);
    auto j2 = intersect(g2, cartan);
    REQUIRE(j1.same_elements(j2));
    // determinant separation: Cartan-part dets never appear in the coset
    std::set<uint32_t> dets_j, dets_coset;
    for (uint64_t key : j1.elements()) dets_j.insert(Mat2::unpack(key, p).det());
    for (uint64_t key : g1.elements())
        if (!j1.contains_key(key)) dets_coset.insert(Mat2::unpack(key, p).det());
    for (uint32_t d : dets_coset) REQUIRE(!dets_j.count(d));
    // unique order-p subgroup with a common kernel line
    std::vector<Mat2> order_p;
    for (uint64_t key : j1.elements()) {
        Mat2 x = Mat2::unpack(key, p);
        if (!x.is_identity() && element_order(x, j1.order()) == p) order_p.push_back(x);
    }
    REQUIRE(order_p.size() == p - 1);
    auto kernel_vec = [&](const Mat2& x) -> std::pair<uint32_t, uint32_t> {
        // non-zero v with (x - id) v = 0; x - id is rank 1 here
        long long a = (static_cast<long long>(x.a11) + p - 1) % p, b = x.a12;
        long long c = x.a21, d = (static_cast<long long>(x.a22) + p - 1) % p;
        if (a || b) return {static_cast<uint32_t>(((b % p) + p) % p),
                            static_cast<uint32_t>(((p - a) % p + p) % p)};
        return {static_cast<uint32_t>(((d % p) + p) % p),
                static_cast<uint32_t>(((p - c) % p + p) % p)};
    };
    auto [v0, v1] = kernel_vec(order_p.front());
    REQUIRE((v0 || v1));
    for (const auto& x : order_p) {
        // (x - id) kills (v0, v1) and squares to zero
        long long a = (static_cast<long long>(x.a11) + p - 1) % p, b = x.a12;
        long long c = x.a21, d = (static_cast<long long>(x.a22) + p - 1) % p;
        REQUIRE((a * v0 + b * v1) % p == 0);
        REQUIRE((c * v0 + d * v1) % p == 0);
        REQUIRE((a * a + b * c) % p == 0);
        REQUIRE((a * b + b * d) % p == 0);
        REQUIRE((c * a + d * c) % p == 0);
        REQUIRE((c * b + d * d) % p == 0);
    }
    // complement vector
    uint32_t w0 = v1 ? 1 : 0, w1 = v1 ? 0 : 1;
    auto gens = generating_set(g1);
    for (uint32_t alpha = 1; alpha < p; ++alpha)
        for (uint32_t gamma = 1; gamma < p; ++gamma)
            for (uint32_t beta = 0; beta < p; ++beta) {
                // columns: B v = alpha v, B w = beta v + gamma w
                Mat2 bmat(alpha * v0 % p * 1LL, (beta * v0 + gamma * w0) % p * 1LL,
                          alpha * v1 % p * 1LL, (beta * v1 + gamma * w1) % p * 1LL, p);
                if (!bmat.invertible()) continue;
                Mat2 binv = bmat.inverse();
                bool all_in = true;
                for (const auto& x : gens)
                    if (!g2.contains(bmat * x * binv)) {
                        all_in = false;
                        break;
                    }
                if (all_in && g1.order() == g2.order()) return false; // conjugator found
            }
    return true;
}

} // namespace

TEST_CASE("cm order table") {
    CHECK(cm_orders().size() == 13);
    auto r = lookup_cm_order(BigInt(-3375));
    REQUIRE(r.has_value());
    CHECK(r->delta_k == -7);
    CHECK(r->f == 1);
    CHECK(r->ell == 7);
    CHECK(r->d_e == 2);
    r = lookup_cm_order(BigInt(1728));
    REQUIRE(r.has_value());
    CHECK(r->disc == -4);
    CHECK(r->d_e == 4);
    r = lookup_cm_order(BigInt(287496));
    REQUIRE(r.has_value());
    CHECK(r->disc == -16);
    CHECK(r->f == 2);
    CHECK(!lookup_cm_order(BigInt(5)).has_value());
    for (const auto& o : cm_orders()) {
        CHECK(o.params.phi * o.params.phi + 4 * o.params.delta == o.disc);
        CHECK((o.d_e == 2 || o.d_e == 4 || o.d_e == 6));
    }
}

TEST_CASE("the 40 simplest records load and validate") {
    const auto& recs = simplest_curves();
    CHECK(recs.size() == 40);
    CHECK(simplest_curves_for(-7).size() == 2);
    CHECK(simplest_curves_for(-3).size() == 6);
    CHECK(simplest_curves_for(-4).size() == 8);
    CHECK(simplest_curves_for(-8).size() == 4);
    CHECK(simplest_curves_for(-16).size() == 4);
    std::set<std::string> m7, m4, m8;
    for (const auto& r : simplest_curves_for(-7)) m7.insert(r.label);
    for (const auto& r : simplest_curves_for(-4)) m4.insert(r.label);
    for (const auto& r : simplest_curves_for(-8)) m8.insert(r.label);
    CHECK(m7 == std::set<std::string>{"49.a2", "49.a4"});
    CHECK(m4 == std::set<std::string>{"32.a3", "32.a4", "64.a3", "64.a4", "256.b1", "256.b2",
                                      "256.c1", "256.c2"});
    CHECK(m8 == std::set<std::string>{"256.a1", "256.a2", "256.d1", "256.d2"});
    CHECK_THROWS_AS(simplest_curves_for(-5), DomainError);
    CHECK_THROWS_AS(simplest_record("999.z9"), DomainError);
}

TEST_CASE("corrupted tables are rejected") {
    // wrong j for the claimed label
    CHECK_THROWS_AS(load_simplest_table("49.a2 -7 7 1 -1 -1 49 1,0,6,6\n"), Error);
    // not 40 records
    std::string one = "49.a2 -7 7 1 -1715 33614 49 2,2,3,0;1,1,5,0;1,0,6,6\n";
    CHECK_THROWS_AS(load_simplest_table(one), Error);
    // malformed column count
    CHECK_THROWS_AS(load_simplest_table("49.a2 -7 7 1\n"), Error);
}

TEST_CASE("each embedded image has index d_E and the right Cartan part") {
    for (const auto& o : cm_orders()) {
        auto recs = simplest_curves_for(o.disc);
        uint32_t q = recs.front().level();
        auto [norm, ce] = build_normalizer(o.params, q);
        auto cart = build_cartan(o.params, q);
        for (const auto& rec : recs) {
            auto img = simplest_ell_adic_image(rec.label);
            CHECK(subgroup_index(norm, img) == static_cast<uint64_t>(o.d_e));
            if (o.ell != 2 && o.j != 0) {
                // both simplest twists share the squares Cartan part
                auto j = squares_cartan_subgroup(o.params, o.ell, rec.n);
                CHECK(intersect(img, cart).same_elements(j));
            }
        }
    }
}

TEST_CASE("paper-printed generator sets match the embedded data") {
    // 49.a2 mod 7: squares Cartan part and (1, 0; -1, -1)
    auto img = simplest_ell_adic_image("49.a2");
    auto p7 = order_for(-7).params;
    std::vector<Mat2> gens = small_generating_set(squares_cartan_subgroup(p7, 7, 1));
    gens.push_back(Mat2(1, 0, -1, -1, 7));
    CHECK(img.same_elements(SubgroupModN(7, gens)));

    // 64.a4 mod 16
    img = simplest_ell_adic_image("64.a4");
    SubgroupModN g64(16, {Mat2::scalar(5, 16), Mat2(1, 2, -2, 1, 16), Mat2(0, -1, -1, 0, 16)});
    CHECK(img.same_elements(g64));

    // 256.d2 and 256.a1 mod 16
    img = simplest_ell_adic_image("256.d2");
    SubgroupModN gd2(16, {Mat2::scalar(3, 16), Mat2(1, 1, -2, 1, 16), Mat2(-1, 0, 0, 1, 16)});
    CHECK(img.same_elements(gd2));
    img = simplest_ell_adic_image("256.a1");
    SubgroupModN ga1(16, {Mat2::scalar(3, 16), Mat2(-1, -1, 2, -1, 16), Mat2(-1, 0, 0, 1, 16)});
    CHECK(img.same_elements(ga1));
}

TEST_CASE("within each class the embedded images are pairwise non-conjugate") {
    for (const auto& o : cm_orders()) {
        auto recs = simplest_curves_for(o.disc);
        uint32_t q = recs.front().level();
        auto cart = build_cartan(o.params, q);
        for (size_t i = 0; i < recs.size(); ++i)
            for (size_t k = i + 1; k < recs.size(); ++k) {
                auto a = simplest_ell_adic_image(recs[i].label);
                auto b = simplest_ell_adic_image(recs[k].label);
                CHECK(!a.same_elements(b));
                if (gl2_order(q) <= kConjugacySearchCap) {
                    CHECK(!is_conjugate(a, b).has_value());
                } else if (fingerprint(a) != fingerprint(b)) {
                    CHECK(true); // distinguished by the invariant profile
                } else {
                    // twin pair at 43, 67 or 163: run the structural sweep
                    CHECK(certify_nonconjugate_twins(a, b, cart));
                }
            }
    }
}

TEST_CASE("200-prime Frobenius consistency for every record") {
    for (const auto& rec : simplest_curves()) {
        auto img = simplest_ell_adic_image(rec.label);
        // bound 1230 gives 200 odd primes; mismatches must be zero
        CHECK(frobenius_mismatches(rec.curve(), img, 1230) == 0);
    }
}

TEST_CASE("twist_to_simplest") {
    auto e441 = WeierstrassCurve::from_long(1, -1, 1, -965, -13940);
    auto d = twist_to_simplest(e441);
    CHECK(d.N == -3);
    CHECK(d.simplest_label == "49.a2");
    CHECK(d.N_dagger == 3);

    auto e784 = WeierstrassCurve::from_short(-595, 5586);
    d = twist_to_simplest(e784);
    CHECK(d.N == -1);
    CHECK(d.simplest_label == "49.a3");
    CHECK(d.N_dagger == 4);

    d = twist_to_simplest(simplest_record("49.a2").curve());
    CHECK(d.N == 1);
    CHECK(d.simplest_label == "49.a2");

    auto e288 = WeierstrassCurve::from_short(-99, -378);
    d = twist_to_simplest(e288);
    CHECK(d.N == -3);
    CHECK(d.simplest_label == "32.a2");

    CHECK_THROWS_AS(twist_to_simplest(WeierstrassCurve::from_short(1, 1)), NotCM);
    // non-simplest sextic twist of a j = 0 curve
    CHECK_THROWS_AS(twist_to_simplest(WeierstrassCurve::from_short(0, BigInt(16) * BigInt(5))),
                    Unsupported);
    // quadratic twist of a simplest j = 0 curve by 5: j stays 0, not simplest
    CHECK_THROWS_AS(twist_to_simplest(quadratic_twist(simplest_record("27.a4").curve(), 5)),
                    Unsupported);
}

TEST_CASE("twist families: the 2-simplest quadratic twist orbit is {1,-1,2,-2}") {
    // twisting a 2-simplest curve by any N in {1,-1,2,-2} lands on another
    // family member, and the four twists exhaust the class
    for (const char* base : {"256.d2", "32.a2"}) {
        const auto& rec = simplest_record(base);
        std::set<std::string> labels;
        for (long long n : {1, -1, 2, -2}) {
            auto d = twist_to_simplest(quadratic_twist(rec.curve(), n));
            CHECK(d.N == 1); // the twist is itself simplest
            labels.insert(d.simplest_label);
        }
        CHECK(labels.size() == 4);
        std::set<std::string> family;
        for (const auto& r : simplest_curves_for(rec.disc)) family.insert(r.label);
        CHECK(labels == family);
    }
}
