#pragma once

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cmadelic/cmdata.hpp"
#include "cmadelic/curves.hpp"
#include "cmadelic/errors.hpp"

#ifdef CMADELIC_HAVE_OPENSSL
#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>
#endif

namespace cmadelic {

// Label fetch failure with no usable cache; the CLI maps this to exit 69.
struct FetchError : Error {
    using Error::Error;
};

// a-invariants out of an LMFDB curve-data API response body.
inline std::vector<BigInt> parse_lmfdb_ainvs(const std::string& body, const std::string& label) {
    try {
        auto j = nlohmann::json::parse(body);
        const auto& data = j.at("data");
        if (data.empty()) throw FetchError("lmfdb: no curve with label " + label);
        std::vector<BigInt> a;
        for (const auto& v : data.at(0).at("ainvs"))
            a.push_back(v.is_string() ? BigInt::from_string(v.get<std::string>())
                                      : BigInt(v.get<long long>()));
        if (a.size() != 5) throw FetchError("lmfdb: malformed response for " + label);
        return a;
    } catch (const FetchError&) {
        throw;
    } catch (const std::exception& ex) {
        throw FetchError("lmfdb: cannot parse response for " + label + ": " + ex.what());
    }
}

// Resolves curve models by LMFDB label: embedded table first, then the local
// file cache, then one HTTPS request to the LMFDB API. Cache writes are
// atomic (write-temp-then-rename) so concurrent invocations never see a
// half-written entry.
class LmfdbClient {
public:
    explicit LmfdbClient(std::string cache_dir = "", bool allow_network = true)
        : cache_dir_(cache_dir.empty() ? default_cache_dir() : std::move(cache_dir)),
          allow_network_(allow_network) {}

    static std::string default_cache_dir() {
        if (const char* env = std::getenv("CM_ADELIC_CACHE")) return env;
        if (const char* xdg = std::getenv("XDG_CACHE_HOME"))
            return std::string(xdg) + "/cm_adelic";
        if (const char* home = std::getenv("HOME"))
            return std::string(home) + "/.cache/cm_adelic";
        return ".cm_adelic_cache";
    }

    const std::string& cache_dir() const { return cache_dir_; }

    // a-invariants [a1, a2, a3, a4, a6] for the label.
    std::vector<BigInt> ainvs(const std::string& label) {
        for (const auto& rec : simplest_curves())
            if (rec.label == label) return {BigInt(0), BigInt(0), BigInt(0), rec.A, rec.B};
        if (auto cached = read_cache(label)) return *cached;
        if (!allow_network_)
            throw FetchError("lmfdb: label " + label + " not cached and networking is disabled");
        auto fetched = fetch(label);
        write_cache(label, fetched);
        return fetched;
    }

    WeierstrassCurve curve(const std::string& label) {
        auto a = ainvs(label);
        if (a.size() != 5) throw FetchError("lmfdb: malformed a-invariants for " + label);
        return WeierstrassCurve::from_long(a[0], a[1], a[2], a[3], a[4]);
    }

    std::optional<std::vector<BigInt>> read_cache(const std::string& label) const {
        std::ifstream in(cache_path(label));
        if (!in) return std::nullopt;
        nlohmann::json j;
        try {
            in >> j;
            std::vector<BigInt> a;
            for (const auto& v : j.at("ainvs"))
                a.push_back(v.is_string() ? BigInt::from_string(v.get<std::string>())
                                          : BigInt(v.get<long long>()));
            if (a.size() != 5) return std::nullopt;
            return a;
        } catch (...) {
            return std::nullopt;
        }
    }

    void write_cache(const std::string& label, const std::vector<BigInt>& a) const {
        std::error_code ec;
        std::filesystem::create_directories(cache_dir_, ec);
        nlohmann::json j;
        j["label"] = label;
        j["ainvs"] = nlohmann::json::array();
        for (const auto& v : a) j["ainvs"].push_back(v.to_string());
        std::string path = cache_path(label);
        std::string tmp = path + ".tmp";
        {
            std::ofstream out(tmp);
            out << j.dump() << "\n";
        }
        std::rename(tmp.c_str(), path.c_str());
    }

    std::string cache_path(const std::string& label) const {
        std::string safe;
        for (char c : label) safe += (std::isalnum(static_cast<unsigned char>(c)) || c == '.') ? c : '_';
        return cache_dir_ + "/" + safe + ".json";
    }

private:
    std::vector<BigInt> fetch(const std::string& label) {
#ifdef CMADELIC_HAVE_OPENSSL
        httplib::SSLClient cli("www.lmfdb.org", 443);
        cli.set_connection_timeout(10);
        cli.set_read_timeout(20);
        cli.set_follow_location(true);
        std::string path = "/api/ec_curvedata/?lmfdb_label=" + label + "&_format=json";
        auto res = cli.Get(path.c_str());
        if (!res || res->status != 200)
            throw FetchError("lmfdb: request for " + label + " failed" +
                             (res ? " with status " + std::to_string(res->status) : ""));
        return parse_lmfdb_ainvs(res->body, label);
#else
        throw FetchError("lmfdb: built without TLS support; label " + label + " requires a cache");
#endif
    }

    std::string cache_dir_;
    bool allow_network_;
};

} // namespace cmadelic
