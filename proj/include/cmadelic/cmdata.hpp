#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cmadelic/cartan.hpp"
#include "cmadelic/curves.hpp"
#include "cmadelic/errors.hpp"
#include "cmadelic/subgroup.hpp"

namespace cmadelic {

// One of the 13 class-number-one CM orders.
struct CMOrderRecord {
    long long delta_k;   // fundamental discriminant
    long long f;         // conductor of the order
    long long disc;      // delta_k * f^2
    long long j;         // CM j-invariant (integral for all 13)
    long long ell;       // the unique prime dividing delta_k
    CartanParams params;
    int d_e;             // maximal adelic index: 2, 4 (j=1728) or 6 (j=0)
};

inline const std::vector<CMOrderRecord>& cm_orders() {
    static const std::vector<CMOrderRecord> table = [] {
        struct Row {
            long long dk, f, j;
        };
        const Row rows[] = {
            {-3, 1, 0},
            {-3, 2, 54000},
            {-3, 3, -12288000},
            {-4, 1, 1728},
            {-4, 2, 287496},
            {-7, 1, -3375},
            {-7, 2, 16581375},
            {-8, 1, 8000},
            {-11, 1, -32768},
            {-19, 1, -884736},
            {-43, 1, -884736000},
            {-67, 1, -147197952000},
            {-163, 1, -262537412640768000LL},
        };
        std::vector<CMOrderRecord> t;
        for (const Row& r : rows) {
            CMOrderRecord rec;
            rec.delta_k = r.dk;
            rec.f = r.f;
            rec.disc = r.dk * r.f * r.f;
            rec.j = r.j;
            rec.ell = (r.dk == -4 || r.dk == -8) ? 2 : -r.dk; // unique prime dividing delta_k
            rec.params = delta_phi(r.dk, r.f);
            rec.d_e = r.j == 0 ? 6 : (r.j == 1728 ? 4 : 2);
            t.push_back(rec);
        }
        return t;
    }();
    return table;
}

inline std::optional<CMOrderRecord> lookup_cm_order(const BigInt& j) {
    for (const auto& rec : cm_orders())
        if (j == BigInt(rec.j)) return rec;
    return std::nullopt;
}

inline std::optional<CMOrderRecord> lookup_cm_order(const WeierstrassCurve& e) {
    for (const auto& rec : cm_orders())
        if (e.has_j(BigInt(rec.j))) return rec;
    return std::nullopt;
}

// One of the 40 simplest CM curves with its mod-ell^n image generators.
struct SimplestCurveRecord {
    std::string label;
    long long disc = 0;
    long long ell = 0;
    int n = 1;
    BigInt A, B;          // short Weierstrass model
    long long conductor = 0;
    std::vector<Mat2> gens;

    uint32_t level() const {
        uint32_t q = 1;
        for (int i = 0; i < n; ++i) q = static_cast<uint32_t>(q * ell);
        return q;
    }

    WeierstrassCurve curve() const { return WeierstrassCurve::from_short(A, B); }
};

// The shipped data table; same text as data/simplest_curves.txt, regenerated
// by tools/gen_simplest_table.cpp.
const char* simplest_table_text();

namespace detail {

inline std::vector<std::string> split_ws(const std::string& line) {
    std::istringstream in(line);
    std::vector<std::string> out;
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

inline long long to_ll(const std::string& s, const char* what) {
    try {
        size_t pos = 0;
        long long v = std::stoll(s, &pos);
        if (pos != s.size()) throw Error("");
        return v;
    } catch (...) {
        throw Error(std::string("simplest table: bad ") + what + " field '" + s + "'");
    }
}

inline std::vector<Mat2> parse_gens(const std::string& field, uint32_t level) {
    std::vector<Mat2> gens;
    std::stringstream ss(field);
    std::string tuple;
    while (std::getline(ss, tuple, ';')) {
        long long v[4];
        std::stringstream ts(tuple);
        std::string num;
        int i = 0;
        while (std::getline(ts, num, ',')) {
            if (i >= 4) throw Error("simplest table: generator tuple too long");
            v[i++] = to_ll(num, "generator");
        }
        if (i != 4) throw Error("simplest table: generator tuple too short");
        gens.emplace_back(v[0], v[1], v[2], v[3], level);
    }
    return gens;
}

} // namespace detail

// Parse without validation; the loader below validates.
inline std::vector<SimplestCurveRecord> parse_simplest_table(const std::string& text) {
    std::vector<SimplestCurveRecord> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        auto f = detail::split_ws(line);
        if (f.size() != 8) throw Error("simplest table: expected 8 columns, got " + std::to_string(f.size()));
        SimplestCurveRecord rec;
        rec.label = f[0];
        rec.disc = detail::to_ll(f[1], "disc");
        rec.ell = detail::to_ll(f[2], "ell");
        rec.n = static_cast<int>(detail::to_ll(f[3], "exponent"));
        rec.A = BigInt::from_string(f[4]);
        rec.B = BigInt::from_string(f[5]);
        rec.conductor = detail::to_ll(f[6], "conductor");
        rec.gens = detail::parse_gens(f[7], rec.level());
        out.push_back(std::move(rec));
    }
    return out;
}

// Load-time invariants: every record belongs to one of the 13 orders, its
// model has the order's j-invariant, its conductor is an ell-power (36 for
// disc -12), and its generators span a subgroup of index d_E in the
// normalizer at level ell^n.
inline void validate_simplest_records(const std::vector<SimplestCurveRecord>& recs) {
    if (recs.size() != 40)
        throw Error("simplest table: expected 40 records, got " + std::to_string(recs.size()));
    for (const auto& rec : recs) {
        const CMOrderRecord* order = nullptr;
        for (const auto& o : cm_orders())
            if (o.disc == rec.disc) order = &o;
        if (!order) throw Error("simplest table: unknown discriminant for " + rec.label);
        if (order->ell != rec.ell) throw Error("simplest table: wrong ell for " + rec.label);
        if (n_exponent(BigInt(order->j), rec.ell) != rec.n)
            throw Error("simplest table: wrong level exponent for " + rec.label);
        if (!rec.curve().has_j(BigInt(order->j)))
            throw Error("simplest table: model of " + rec.label + " has the wrong j-invariant");
        long long cond = rec.conductor;
        if (rec.disc == -12) {
            if (cond != 36) throw Error("simplest table: conductor of " + rec.label + " must be 36");
        } else {
            while (cond % rec.ell == 0) cond /= rec.ell;
            if (cond != 1) throw Error("simplest table: conductor of " + rec.label + " must be a power of ell");
        }
        // LMFDB labels start with the conductor
        if (rec.label.rfind(std::to_string(rec.conductor) + ".", 0) != 0)
            throw Error("simplest table: label of " + rec.label + " does not match its conductor");
        uint32_t q = rec.level();
        auto [normalizer, ce] = build_normalizer(order->params, q);
        SubgroupModN img(q, rec.gens, order->params.normalizer_ambient());
        if (!img.subset_of(normalizer))
            throw Error("simplest table: image of " + rec.label + " not inside the normalizer");
        if (subgroup_index(normalizer, img) != static_cast<uint64_t>(order->d_e))
            throw Error("simplest table: image of " + rec.label + " has the wrong index");
    }
    for (size_t i = 0; i < recs.size(); ++i)
        for (size_t j = i + 1; j < recs.size(); ++j)
            if (recs[i].label == recs[j].label)
                throw Error("simplest table: duplicate label " + recs[i].label);
}

inline std::vector<SimplestCurveRecord> load_simplest_table(const std::string& text) {
    auto recs = parse_simplest_table(text);
    validate_simplest_records(recs);
    return recs;
}

inline std::vector<SimplestCurveRecord> load_simplest_table_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("simplest table: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return load_simplest_table(ss.str());
}

namespace detail {
inline std::optional<std::vector<SimplestCurveRecord>>& simplest_table_override() {
    static std::optional<std::vector<SimplestCurveRecord>> o;
    return o;
}
} // namespace detail

// Replace the embedded table (validated records only). Install before any
// other table access; intended for the CLI's --data flag.
inline void set_simplest_table(std::vector<SimplestCurveRecord> recs) {
    validate_simplest_records(recs);
    detail::simplest_table_override() = std::move(recs);
}

inline const std::vector<SimplestCurveRecord>& simplest_curves() {
    if (detail::simplest_table_override()) return *detail::simplest_table_override();
    static const std::vector<SimplestCurveRecord> table = load_simplest_table(simplest_table_text());
    return table;
}

inline std::vector<SimplestCurveRecord> simplest_curves_for(long long disc) {
    bool known = false;
    for (const auto& o : cm_orders()) known = known || o.disc == disc;
    if (!known) throw DomainError("simplest_curves_for: not a class-number-one discriminant");
    std::vector<SimplestCurveRecord> out;
    for (const auto& rec : simplest_curves())
        if (rec.disc == disc) out.push_back(rec);
    return out;
}

inline const SimplestCurveRecord& simplest_record(const std::string& label) {
    for (const auto& rec : simplest_curves())
        if (rec.label == label) return rec;
    throw DomainError("simplest_record: unknown label " + label);
}

// The mod-ell^n image of one of the 40 simplest curves, in the working
// (delta, phi) basis.
inline SubgroupModN simplest_ell_adic_image(const std::string& label) {
    const auto& rec = simplest_record(label);
    const CMOrderRecord* order = nullptr;
    for (const auto& o : cm_orders())
        if (o.disc == rec.disc) order = &o;
    return SubgroupModN(rec.level(), rec.gens, order->params.normalizer_ambient());
}

// Twist datum: the square-free N carrying E to a simplest curve.
struct TwistDatum {
    long long N = 1;
    std::string simplest_label;
    long long N_dagger = 1;
};

// Find square-free N with gcd(ell, N-dagger) = 1 and E^N isomorphic to a
// simplest curve. For j in {0, 1728} only simplest inputs are supported.
// When several candidates qualify the one minimizing |N| (positive sign on
// ties) is returned.
inline TwistDatum twist_to_simplest(const WeierstrassCurve& e) {
    std::optional<CMOrderRecord> order = lookup_cm_order(e);
    if (!order) throw NotCM("twist_to_simplest: j-invariant is not a class-number-one CM invariant");
    if (order->j == 0 || order->j == 1728) {
        for (const auto& rec : simplest_curves_for(order->disc))
            if (is_isomorphic_Q(e, rec.curve())) return TwistDatum{1, rec.label, 1};
        throw Unsupported("twist_to_simplest: non-simplest curves with j = 0 or 1728 are not supported");
    }
    std::optional<TwistDatum> best;
    for (const auto& rec : simplest_curves_for(order->disc)) {
        auto d = twist_between(e, rec.curve());
        if (!d) continue;
        long long dag = n_dagger(*d);
        if (dag % order->ell == 0) continue;
        TwistDatum cand{*d, rec.label, dag};
        auto abs_n = [](long long v) { return v < 0 ? -v : v; };
        if (!best || abs_n(cand.N) < abs_n(best->N) ||
            (abs_n(cand.N) == abs_n(best->N) && cand.N > best->N))
            best = cand;
    }
    if (!best)
        throw InternalInvariantViolation("twist_to_simplest: no admissible twist found for a CM input");
    return *best;
}

} // namespace cmadelic

#include "cmadelic/cmdata_table.hpp"
