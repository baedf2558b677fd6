#pragma once

#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cmadelic/adelic.hpp"
#include "cmadelic/lmfdb.hpp"
#include "cmadelic/verify.hpp"

namespace cmadelic::cli {

using ordered_json = nlohmann::ordered_json;

inline std::vector<BigInt> parse_int_list(const std::string& spec) {
    std::string body = spec;
    auto strip = [](std::string& s) {
        while (!s.empty() && (s.front() == ' ' || s.front() == '[')) s.erase(s.begin());
        while (!s.empty() && (s.back() == ' ' || s.back() == ']')) s.pop_back();
    };
    strip(body);
    std::vector<BigInt> out;
    std::stringstream ss(body);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        std::string t;
        for (char c : tok)
            if (c != ' ') t += c;
        out.push_back(BigInt::from_string(t));
    }
    return out;
}

struct CurveInput {
    WeierstrassCurve curve;
    std::string description;          // normalized a-invariant list
    std::optional<std::string> label; // when given by label
};

inline std::string describe(const std::vector<BigInt>& a) {
    std::string s = "[";
    for (size_t i = 0; i < a.size(); ++i) {
        if (i) s += ",";
        s += a[i].to_string();
    }
    return s + "]";
}

inline CurveInput resolve_curve(const std::string& curve_spec, const std::string& short_spec,
                                const std::string& label, const std::string& cache_dir,
                                bool no_network) {
    int given = !curve_spec.empty() + !short_spec.empty() + !label.empty();
    if (given != 1)
        throw CLI::ValidationError("curve", "give exactly one of --curve, --short, --label");
    CurveInput in;
    if (!curve_spec.empty()) {
        auto a = parse_int_list(curve_spec);
        if (a.size() != 5) throw CLI::ValidationError("--curve", "expected [a1,a2,a3,a4,a6]");
        in.curve = WeierstrassCurve::from_long(a[0], a[1], a[2], a[3], a[4]);
        in.description = describe(a);
    } else if (!short_spec.empty()) {
        auto a = parse_int_list(short_spec);
        if (a.size() != 2) throw CLI::ValidationError("--short", "expected [A,B]");
        in.curve = WeierstrassCurve::from_short(a[0], a[1]);
        in.description = describe(a);
    } else {
        LmfdbClient client(cache_dir, !no_network);
        in.curve = client.curve(label);
        in.label = label;
        in.description = describe({in.curve.a1, in.curve.a2, in.curve.a3, in.curve.a4, in.curve.a6});
    }
    return in;
}

inline ordered_json result_json(const CurveInput& in, const GaloisImageResult& r) {
    ordered_json j;
    if (in.label) j["label"] = *in.label;
    j["input"] = in.description;
    j["cm"] = {{"Delta_K", r.order.delta_k},
               {"f", r.order.f},
               {"disc", r.order.disc},
               {"j", std::to_string(r.order.j)},
               {"ell", r.order.ell}};
    j["delta"] = r.params.delta;
    j["phi"] = r.params.phi;
    j["level"] = r.level;
    j["index"] = r.index;
    j["minimal_level"] = r.minimal_level;
    j["twist"] = {{"N", r.twist.N},
                  {"N_dagger", r.twist.N_dagger},
                  {"simplest_label", r.twist.simplest_label}};
    j["generators"] = ordered_json::array();
    for (const auto& g : r.generators)
        j["generators"].push_back({g.a11, g.a12, g.a21, g.a22});
    return j;
}

inline void print_plain(std::ostream& out, const CurveInput& in, const GaloisImageResult& r) {
    if (in.label) out << "curve: " << *in.label << " " << in.description << "\n";
    else out << "curve: " << in.description << "\n";
    out << "cm order: Delta_K = " << r.order.delta_k << ", f = " << r.order.f
        << ", disc = " << r.order.disc << ", ell = " << r.order.ell << "\n";
    out << "cartan parameters: delta = " << r.params.delta << ", phi = " << r.params.phi << "\n";
    out << "level of definition: " << r.level << " (minimal " << r.minimal_level << ")\n";
    out << "index in the normalizer: " << r.index << "\n";
    out << "twist: N = " << r.twist.N << " (N-dagger " << r.twist.N_dagger << ") to "
        << r.twist.simplest_label << "\n";
    out << "generators mod " << r.level << ":\n";
    for (const auto& g : r.generators)
        out << "  [" << g.a11 << "," << g.a12 << ";" << g.a21 << "," << g.a22 << "]\n";
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"adelic Galois images of CM elliptic curves over Q", "cmimage"};
    app.require_subcommand(1);

    std::string curve_spec, short_spec, label, cache_dir, data_file;
    bool json = false, no_network = false;
    long long primes = 2000;

    auto add_common = [&](CLI::App* sub, bool with_curve) {
        sub->add_flag("--json", json, "machine-readable JSON output");
        sub->add_option("--cache", cache_dir, "cache directory for LMFDB lookups");
        sub->add_flag("--no-network", no_network, "never touch the network");
        sub->add_option("--data", data_file, "override the built-in simplest-curve table");
        if (with_curve) {
            sub->add_option("--curve", curve_spec, "long Weierstrass model [a1,a2,a3,a4,a6]");
            sub->add_option("--short", short_spec, "short Weierstrass model [A,B]");
            sub->add_option("--label", label, "LMFDB label");
        }
    };

    auto* cmd_image = app.add_subcommand("image", "compute the adelic Galois image");
    add_common(cmd_image, true);
    auto* cmd_verify = app.add_subcommand("verify", "validate an image against Frobenius data");
    add_common(cmd_verify, true);
    cmd_verify->add_option("--primes", primes, "prime bound for the Frobenius check");
    auto* cmd_minimal = app.add_subcommand("minimal-level", "compute the minimal level of definition");
    add_common(cmd_minimal, true);
    auto* cmd_table = app.add_subcommand("table", "list the simplest CM curves");
    add_common(cmd_table, false);
    long long disc = 0;
    bool all = false;
    cmd_table->add_option("--disc", disc, "restrict to one discriminant");
    cmd_table->add_flag("--all", all, "list all 40 curves");

    std::vector<std::string> argv_rev(args.rbegin(), args.rend());
    try {
        app.parse(argv_rev);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) { // --help
            out << app.help();
            return 0;
        }
        err << "usage error: " << e.what() << "\n";
        return 64;
    }

    try {
        if (!data_file.empty()) set_simplest_table(load_simplest_table_file(data_file));

        if (cmd_table->parsed()) {
            std::vector<SimplestCurveRecord> rows;
            if (all || !cmd_table->count("--disc")) {
                rows = simplest_curves();
            } else {
                rows = simplest_curves_for(disc);
            }
            if (json) {
                ordered_json j = ordered_json::array();
                for (const auto& r : rows)
                    j.push_back({{"label", r.label},
                                 {"disc", r.disc},
                                 {"ell", r.ell},
                                 {"n", r.n},
                                 {"A", r.A.to_string()},
                                 {"B", r.B.to_string()},
                                 {"conductor", r.conductor}});
                out << j.dump() << "\n";
            } else {
                for (const auto& r : rows)
                    out << r.label << "  disc " << r.disc << "  ell " << r.ell << "  level "
                        << r.level() << "  conductor " << r.conductor << "  y^2 = x^3 + ("
                        << r.A.to_string() << ")x + (" << r.B.to_string() << ")\n";
            }
            return 0;
        }

        CurveInput in = resolve_curve(curve_spec, short_spec, label, cache_dir, no_network);
        GaloisImageResult r = adelic_image(in.curve);

        if (cmd_minimal->parsed()) {
            if (json) {
                ordered_json j;
                j["level"] = r.level;
                j["minimal_level"] = r.minimal_level;
                out << j.dump() << "\n";
            } else {
                out << r.minimal_level << "\n";
            }
            return 0;
        }

        ordered_json j = result_json(in, r);
        if (cmd_verify->parsed()) {
            auto frep = frobenius_consistency(in.curve, r, primes);
            auto erep = entanglement_check(r);
            ordered_json v;
            v["frobenius"] = {{"prime_bound", frep.prime_bound},
                              {"primes_checked", frep.primes_checked},
                              {"mismatches", frep.mismatches},
                              {"classes_total", frep.classes_total},
                              {"classes_hit", frep.classes_hit}};
            if (erep.applicable)
                v["entanglement"] = {{"index_at_level", erep.index_at_level},
                                     {"index_at_prime_power", erep.index_at_prime_power},
                                     {"index_at_dagger", erep.index_at_dagger}};
            j["verify"] = v;
            if (json) {
                out << j.dump() << "\n";
            } else {
                print_plain(out, in, r);
                out << "frobenius: " << frep.primes_checked << " primes checked, "
                    << frep.mismatches << " mismatches, class coverage " << frep.classes_hit
                    << "/" << frep.classes_total << "\n";
                if (erep.applicable)
                    out << "entanglement: Cartan index pattern (" << erep.index_at_level << "; "
                        << erep.index_at_prime_power << ", " << erep.index_at_dagger << ")\n";
                else
                    out << "entanglement: not applicable (simplest curve)\n";
            }
            return 0;
        }

        if (json) out << j.dump() << "\n";
        else print_plain(out, in, r);
        return 0;
    } catch (const CLI::ValidationError& e) {
        err << "usage error: " << e.what() << "\n";
        return 64;
    } catch (const FetchError& e) {
        err << "fetch error: " << e.what() << "\n";
        return 69;
    } catch (const NotCM& e) {
        err << "unsupported input: " << e.what() << "\n";
        return 2;
    } catch (const Unsupported& e) {
        err << "unsupported input: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        err << "usage error: " << e.what() << "\n";
        return 64;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace cmadelic::cli
