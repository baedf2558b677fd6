#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <unordered_set>
#include <utility>
#include <vector>

#include "cmadelic/errors.hpp"
#include "cmadelic/mat2.hpp"

namespace cmadelic {

// Ambient tag for a subgroup: which maximal group it is viewed inside.
struct Ambient {
    enum Kind { GL2, Cartan, Normalizer } kind = GL2;
    long long delta = 0;
    long long phi = 0;
};

inline constexpr size_t kClosureCap = size_t(1) << 26;
inline constexpr size_t kConjugacySearchCap = size_t(1) << 21;

// Smallest subgroup of GL(2, Z/NZ) containing the generators, as a sorted
// vector of packed matrices. Breadth-first closure; a finite set of
// invertible matrices closed under multiplication is automatically closed
// under inversion.
inline std::vector<uint64_t> closure(const std::vector<Mat2>& generators, uint32_t n,
                                     size_t cap = kClosureCap) {
    for (const auto& g : generators) {
        if (g.n != n) throw BadLevel("closure: generator modulus mismatch");
        if (!g.invertible()) throw NotAUnit("closure: generator not invertible");
    }
    std::unordered_set<uint64_t> seen;
    std::vector<uint64_t> frontier;
    uint64_t id = Mat2::identity(n).pack();
    seen.insert(id);
    frontier.push_back(id);
    while (!frontier.empty()) {
        std::vector<uint64_t> next;
        for (uint64_t key : frontier) {
            Mat2 x = Mat2::unpack(key, n);
            for (const auto& g : generators) {
                uint64_t y = (x * g).pack();
                if (seen.insert(y).second) {
                    next.push_back(y);
                    if (seen.size() > cap)
                        throw GroupTooLarge("closure: element cap exceeded");
                }
            }
        }
        frontier = std::move(next);
    }
    std::vector<uint64_t> out(seen.begin(), seen.end());
    std::sort(out.begin(), out.end());
    return out;
}

// A subgroup of GL(2, Z/NZ), given by generators with a lazily materialized
// element set. Copies share the materialized state; materialization runs at
// most once even across threads.
class SubgroupModN {
public:
    SubgroupModN() : state_(std::make_shared<State>()) {}

    SubgroupModN(uint32_t modulus, std::vector<Mat2> generators, Ambient ambient = {})
        : modulus_(modulus), gens_(std::move(generators)), ambient_(ambient),
          state_(std::make_shared<State>()) {
        for (const auto& g : gens_) {
            if (g.n != modulus_) throw BadLevel("SubgroupModN: generator modulus mismatch");
            if (!g.invertible()) throw NotAUnit("SubgroupModN: generator not invertible");
        }
    }

    // Adopt an already-closed element set (must contain the identity and be
    // closed under products; callers are trusted, tests verify).
    static SubgroupModN from_elements(uint32_t modulus, std::vector<uint64_t> sorted_elems,
                                      Ambient ambient = {}, std::vector<Mat2> gens = {}) {
        SubgroupModN s;
        s.modulus_ = modulus;
        s.ambient_ = ambient;
        s.gens_ = std::move(gens);
        s.state_ = std::make_shared<State>();
        s.state_->elems = std::move(sorted_elems);
        s.state_->done = true;
        return s;
    }

    uint32_t modulus() const { return modulus_; }
    const Ambient& ambient() const { return ambient_; }
    const std::vector<Mat2>& generators() const { return gens_; }

    const std::vector<uint64_t>& elements() const& {
        std::call_once(state_->flag, [this] {
            if (!state_->done) {
                state_->elems = closure(gens_, modulus_, cap_);
                state_->done = true;
            }
        });
        return state_->elems;
    }

    // Value overload so iterating the elements of a temporary cannot dangle.
    std::vector<uint64_t> elements() const&& {
        return static_cast<const SubgroupModN&>(*this).elements();
    }

    size_t order() const { return elements().size(); }

    bool contains(const Mat2& m) const {
        if (m.n != modulus_) return false;
        const auto& e = elements();
        return std::binary_search(e.begin(), e.end(), m.pack());
    }

    bool contains_key(uint64_t key) const {
        const auto& e = elements();
        return std::binary_search(e.begin(), e.end(), key);
    }

    bool same_elements(const SubgroupModN& o) const {
        return modulus_ == o.modulus_ && elements() == o.elements();
    }

    bool subset_of(const SubgroupModN& o) const {
        if (modulus_ != o.modulus_) return false;
        const auto& a = elements();
        const auto& b = o.elements();
        return std::includes(b.begin(), b.end(), a.begin(), a.end());
    }

    void set_closure_cap(size_t cap) { cap_ = cap; }

private:
    struct State {
        mutable std::once_flag flag;
        std::vector<uint64_t> elems;
        bool done = false;
    };

    uint32_t modulus_ = 1;
    std::vector<Mat2> gens_;
    Ambient ambient_;
    size_t cap_ = kClosureCap;
    std::shared_ptr<State> state_;
};

// Greedy small generating set: scan elements in key order, adding any element
// not yet generated. Each pick at least doubles the running closure, so the
// result has at most log2(|G|) generators.
inline std::vector<Mat2> small_generating_set(const SubgroupModN& g) {
    uint32_t n = g.modulus();
    std::vector<Mat2> gens;
    std::vector<uint64_t> cur = {Mat2::identity(n).pack()};
    for (uint64_t key : g.elements()) {
        if (std::binary_search(cur.begin(), cur.end(), key)) continue;
        gens.push_back(Mat2::unpack(key, n));
        cur = closure(gens, n);
        if (cur.size() == g.order()) break;
    }
    return gens;
}

// Generators of g, computing a small set when none were stored.
inline std::vector<Mat2> generating_set(const SubgroupModN& g) {
    if (!g.generators().empty()) return g.generators();
    return small_generating_set(g);
}

// |ambient| / |sub|, with the containment verified.
inline uint64_t subgroup_index(const SubgroupModN& ambient, const SubgroupModN& sub) {
    if (ambient.modulus() != sub.modulus())
        throw BadLevel("subgroup_index: modulus mismatch");
    if (!sub.subset_of(ambient))
        throw NotASubgroup("subgroup_index: not a subgroup of the ambient");
    return ambient.order() / sub.order();
}

// Image of G under entrywise reduction modulo M (M | N).
inline SubgroupModN reduce_subgroup(const SubgroupModN& g, uint32_t m) {
    if (m == 0 || g.modulus() % m != 0)
        throw BadLevel("reduce_subgroup: target level must divide the source level");
    std::vector<Mat2> gens;
    gens.reserve(g.generators().size());
    for (const auto& x : g.generators()) gens.push_back(x.reduced(m));
    Ambient amb = g.ambient();
    // The image of a group is the set image, cheaper than re-closing when the
    // source is already materialized with few generators missing.
    std::vector<uint64_t> elems;
    elems.reserve(g.order());
    for (uint64_t key : g.elements()) elems.push_back(Mat2::unpack(key, g.modulus()).reduced(m).pack());
    std::sort(elems.begin(), elems.end());
    elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
    return SubgroupModN::from_elements(m, std::move(elems), amb, std::move(gens));
}

// Full preimage {x in ambient : x mod M in G} of a subgroup G at level M
// under reduction from level N.
inline SubgroupModN preimage_subgroup(const SubgroupModN& g, uint32_t n,
                                      const SubgroupModN& ambient) {
    uint32_t m = g.modulus();
    if (ambient.modulus() != n || n % m != 0)
        throw BadLevel("preimage_subgroup: levels must satisfy M | N");
    if (!g.subset_of(reduce_subgroup(ambient, m)))
        throw NotASubgroup("preimage_subgroup: G is not inside the reduced ambient");
    std::vector<uint64_t> elems;
    std::map<uint64_t, uint64_t> first_lift; // reduced generator -> one lift
    for (uint64_t key : ambient.elements()) {
        Mat2 x = Mat2::unpack(key, n);
        uint64_t r = x.reduced(m).pack();
        if (g.contains_key(r)) {
            elems.push_back(key);
            first_lift.emplace(r, key);
        }
    }
    std::sort(elems.begin(), elems.end());
    // Generators: one lift of each generator of G plus the reduction kernel.
    std::vector<Mat2> gens;
    for (const auto& x : g.generators()) {
        auto it = first_lift.find(x.pack());
        if (it != first_lift.end()) gens.push_back(Mat2::unpack(it->second, n));
    }
    uint64_t idm = Mat2::identity(m).pack();
    for (uint64_t key : elems)
        if (Mat2::unpack(key, n).reduced(m).pack() == idm) gens.push_back(Mat2::unpack(key, n));
    return SubgroupModN::from_elements(n, std::move(elems), ambient.ambient(), std::move(gens));
}

// Subgroup of GL(2, Z/MNZ) generated by entrywise-CRT images of the paired
// generators together with (g, Id) and (Id, h) for the direct-product part.
inline SubgroupModN crt_glue(const SubgroupModN& gm, const SubgroupModN& gn,
                             const std::vector<std::pair<Mat2, Mat2>>& pair_gens,
                             Ambient ambient = {}) {
    uint64_t m = gm.modulus(), n = gn.modulus();
    if (detail::gcd_u64(m, n) != 1) throw BadLevel("crt_glue: moduli must be coprime");
    uint32_t mn = static_cast<uint32_t>(m * n);
    Mat2 idm = Mat2::identity(static_cast<uint32_t>(m));
    Mat2 idn = Mat2::identity(static_cast<uint32_t>(n));
    std::vector<Mat2> gens;
    for (const auto& [x, y] : pair_gens) {
        if (x.n != m || y.n != n) throw BadLevel("crt_glue: paired generator modulus mismatch");
        gens.push_back(crt_mat(x, y));
    }
    for (const auto& x : generating_set(gm)) gens.push_back(crt_mat(x, idn));
    for (const auto& y : generating_set(gn)) gens.push_back(crt_mat(idm, y));
    return SubgroupModN(mn, std::move(gens), ambient);
}

// Materialized set intersection, regenerated as a subgroup.
inline SubgroupModN intersect(const SubgroupModN& g, const SubgroupModN& h) {
    if (g.modulus() != h.modulus()) throw BadLevel("intersect: modulus mismatch");
    const auto& a = g.elements();
    const auto& b = h.elements();
    std::vector<uint64_t> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return SubgroupModN::from_elements(g.modulus(), std::move(out), g.ambient());
}

// Multiplicative order of x given a multiple of it (usually |G|).
inline uint64_t element_order(const Mat2& x, uint64_t order_multiple) {
    uint64_t d = order_multiple;
    uint64_t rest = order_multiple;
    for (uint64_t p = 2; p * p <= rest; ++p) {
        if (rest % p) continue;
        while (rest % p == 0) rest /= p;
        while (d % p == 0 && x.pow(d / p).is_identity()) d /= p;
    }
    if (rest > 1)
        while (d % rest == 0 && x.pow(d / rest).is_identity()) d /= rest;
    return d;
}

// Conjugation-invariant profile: sorted multiset of (order, trace, det).
inline std::vector<std::tuple<uint64_t, uint32_t, uint32_t>> fingerprint(const SubgroupModN& g) {
    std::vector<std::tuple<uint64_t, uint32_t, uint32_t>> fp;
    fp.reserve(g.order());
    uint64_t n = g.order();
    for (uint64_t key : g.elements()) {
        Mat2 x = Mat2::unpack(key, g.modulus());
        fp.emplace_back(element_order(x, n), x.trace(), x.det());
    }
    std::sort(fp.begin(), fp.end());
    return fp;
}

// Order of GL(2, Z/NZ): N^4 * prod_{p | N} (1 - 1/p)(1 - 1/p^2).
inline uint64_t gl2_order(uint32_t n) {
    if (n == 1) return 1;
    unsigned __int128 result = 1;
    uint64_t rest = n;
    for (uint64_t p = 2; p * p <= rest; ++p) {
        if (rest % p) continue;
        int e = 0;
        while (rest % p == 0) {
            rest /= p;
            ++e;
        }
        unsigned __int128 local = (p * p - 1) * (p * p - p);
        for (int i = 1; i < e; ++i) local *= p * p * p * p;
        result *= local;
    }
    if (rest > 1) result *= (rest * rest - 1) * (rest * rest - rest);
    uint64_t max64 = ~uint64_t(0);
    return result > max64 ? max64 : static_cast<uint64_t>(result);
}

enum class ConjugacyMode { full_gl2, given };

// Search for B with B G B^{-1} = H. In full mode the search enumerates all of
// GL(2, Z/NZ) after an order/trace/det fingerprint pre-check; in given mode
// only the supplied candidate is tested.
inline std::optional<Mat2> is_conjugate(const SubgroupModN& g, const SubgroupModN& h,
                                        ConjugacyMode mode = ConjugacyMode::full_gl2,
                                        const Mat2* candidate = nullptr,
                                        size_t cap = kConjugacySearchCap) {
    if (g.modulus() != h.modulus()) throw BadLevel("is_conjugate: modulus mismatch");
    uint32_t n = g.modulus();
    std::vector<Mat2> ggens = generating_set(g);
    auto test = [&](const Mat2& b) {
        Mat2 binv = b.inverse();
        for (const auto& x : ggens)
            if (!h.contains(b * x * binv)) return false;
        // Generators map in and orders match, so the conjugate equals H.
        return g.order() == h.order();
    };
    if (mode == ConjugacyMode::given) {
        if (!candidate) throw DomainError("is_conjugate: given mode needs a candidate");
        if (candidate->n != n || !candidate->invertible()) return std::nullopt;
        if (test(*candidate)) return *candidate;
        return std::nullopt;
    }
    if (g.order() != h.order()) return std::nullopt;
    Mat2 id = Mat2::identity(n);
    if (test(id)) return id;
    if (gl2_order(n) > cap) throw SearchTooLarge("is_conjugate: GL2 order exceeds the search cap");
    if (fingerprint(g) != fingerprint(h)) return std::nullopt;
    for (uint64_t x11 = 0; x11 < n; ++x11)
        for (uint64_t x12 = 0; x12 < n; ++x12)
            for (uint64_t x21 = 0; x21 < n; ++x21)
                for (uint64_t x22 = 0; x22 < n; ++x22) {
                    Mat2 b(static_cast<long long>(x11), static_cast<long long>(x12),
                           static_cast<long long>(x21), static_cast<long long>(x22), n);
                    if (!b.invertible()) continue;
                    if (test(b)) return b;
                }
    return std::nullopt;
}

} // namespace cmadelic
