#pragma once

#include <arpa/inet.h>

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdlib>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "dgad/bundled.hpp"
#include "dgad/core.hpp"
#include "dgad/error.hpp"

namespace dgad {

inline constexpr std::array<std::string_view, 9> sideinfo_feature_names = {
    "rrlength", "country", "ttl", "n_ip", "qtype", "rtype", "n_asn", "subnet", "n_countries",
};

/// IPv4 or IPv6 address; IPv4 occupies the first 4 bytes.
struct IpAddress {
    bool v6 = false;
    std::array<std::uint8_t, 16> bytes{};

    int bit_width() const { return v6 ? 128 : 32; }
    int byte_width() const { return v6 ? 16 : 4; }

    /// Copy with every bit past `prefix_len` cleared.
    IpAddress masked(int prefix_len) const {
        IpAddress out = *this;
        for (int i = 0; i < 16; ++i) {
            const int keep = std::clamp(prefix_len - 8 * i, 0, 8);
            out.bytes[i] &= static_cast<std::uint8_t>(0xFF00u >> keep);
        }
        return out;
    }

    auto operator<=>(const IpAddress &) const = default;
};

inline std::optional<IpAddress> parse_ip(std::string_view text) {
    const std::string s{text};
    IpAddress ip;
    if (s.find(':') != std::string::npos) {
        ip.v6 = true;
        if (inet_pton(AF_INET6, s.c_str(), ip.bytes.data()) != 1) return std::nullopt;
    } else if (inet_pton(AF_INET, s.c_str(), ip.bytes.data()) != 1) {
        return std::nullopt;
    }
    return ip;
}

struct IpMeta {
    std::string country;
    std::uint32_t asn = 0;
};

/// Offline IP -> (country, ASN) table with longest-prefix match.
class IpMetaProvider {
public:
    static constexpr std::string_view unknown_country = "unknown";

    void add(std::string_view cidr, std::string country, std::uint32_t asn) {
        const auto slash = cidr.find('/');
        const auto ip = parse_ip(cidr.substr(0, slash));
        if (!ip) throw Error{ErrorKind::MalformedIp, "bad prefix '" + std::string{cidr} + "'"};
        int len = ip->bit_width();
        if (slash != std::string_view::npos) {
            const std::string digits{cidr.substr(slash + 1)};
            char *end = nullptr;
            len = static_cast<int>(std::strtol(digits.c_str(), &end, 10));
            if (digits.empty() || *end != '\0' || len < 0 || len > ip->bit_width()) {
                throw Error{ErrorKind::MalformedIp, "bad prefix length in '" + std::string{cidr} + "'"};
            }
        }
        auto &table = ip->v6 ? v6_ : v4_;
        table[len][ip->masked(len)] = IpMeta{std::move(country), asn};
    }

    /// Reads `prefix,country,asn` rows; a header row starting with "prefix"
    /// is skipped.
    static IpMetaProvider parse_csv(std::istream &in) {
        IpMetaProvider provider;
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty() || line.starts_with('#')) continue;
            if (line_no == 1 && line.starts_with("prefix")) continue;
            std::vector<std::string> cols;
            std::stringstream row{line};
            for (std::string col; std::getline(row, col, ',');) cols.push_back(col);
            if (cols.size() != 3) {
                throw Error{ErrorKind::Parse, "geoip line " + std::to_string(line_no) + ": expected 3 columns"};
            }
            char *end = nullptr;
            const auto asn = std::strtoul(cols[2].c_str(), &end, 10);
            if (cols[2].empty() || *end != '\0') {
                throw Error{ErrorKind::Parse, "geoip line " + std::to_string(line_no) + ": bad asn"};
            }
            provider.add(cols[0], cols[1], static_cast<std::uint32_t>(asn));
        }
        return provider;
    }

    static IpMetaProvider parse_csv(std::string_view text) {
        std::istringstream in{std::string{text}};
        return parse_csv(in);
    }

    static const IpMetaProvider &bundled() {
        static const IpMetaProvider provider = parse_csv(bundled::geoip_csv);
        return provider;
    }

    /// Longest matching prefix, or nullopt when no prefix covers the address.
    std::optional<IpMeta> lookup(const IpAddress &ip) const {
        const auto &table = ip.v6 ? v6_ : v4_;
        for (auto it = table.rbegin(); it != table.rend(); ++it) {
            const auto hit = it->second.find(ip.masked(it->first));
            if (hit != it->second.end()) return hit->second;
        }
        return std::nullopt;
    }

    /// Every country name in the table, sorted.
    std::vector<std::string> countries() const {
        std::set<std::string> names;
        for (const auto *table : {&v4_, &v6_}) {
            for (const auto &[len, entries] : *table) {
                for (const auto &[prefix, meta] : entries) names.insert(meta.country);
            }
        }
        return {names.begin(), names.end()};
    }

private:
    std::map<int, std::map<IpAddress, IpMeta>> v4_;
    std::map<int, std::map<IpAddress, IpMeta>> v6_;
};

/// Country name -> categorical code. Codes 0 and 1 are reserved.
class CountryCodes {
public:
    static constexpr int unknown_code = 0;
    static constexpr int multi_valued_code = 1;

    int code(std::string_view name) const {
        const auto it = codes_.find(std::string{name});
        return it == codes_.end() ? unknown_code : it->second;
    }

    /// Names in code order, starting with the two reserved entries.
    const std::vector<std::string> &names() const { return names_; }

    int max_code() const { return static_cast<int>(names_.size()) - 1; }

    bool operator==(const CountryCodes &other) const { return names_ == other.names_; }

    /// Rebuilds a table from its persisted name list.
    static CountryCodes from_names(std::vector<std::string> names) {
        if (names.size() < 2 || names[0] != "unknown" || names[1] != "multi-valued") {
            throw Error{ErrorKind::Parse, "country table must start with unknown, multi-valued"};
        }
        CountryCodes table;
        table.names_ = std::move(names);
        for (std::size_t i = 0; i < table.names_.size(); ++i) {
            table.codes_[table.names_[i]] = static_cast<int>(i);
        }
        return table;
    }

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, int> codes_;
};

/// {unknown: 0, multi-valued: 1, then distinct observed names in sorted order}.
inline CountryCodes build_country_codes(const std::vector<std::string> &observed) {
    std::set<std::string> distinct(observed.begin(), observed.end());
    distinct.erase("unknown");
    distinct.erase("multi-valued");
    std::vector<std::string> names{"unknown", "multi-valued"};
    names.insert(names.end(), distinct.begin(), distinct.end());
    return CountryCodes::from_names(std::move(names));
}

struct SubnetConfig {
    int v4_prefix = 24;
    int v6_prefix = 64;
};

struct SideInfoFeatures {
    double rrlength = 0;
    double country = 0;
    double ttl = 0;
    double n_ip = 0;
    double qtype = 0;
    double rtype = 0;
    double n_asn = 0;
    double subnet = 0;
    double n_countries = 0;

    std::array<double, 9> values() const {
        return {rrlength, country, ttl, n_ip, qtype, rtype, n_asn, subnet, n_countries};
    }
};

/// Per answer: address bytes (4 or 16) plus 6 bytes standing in for the
/// ttl/type/class fields.
inline constexpr int rr_fixed_overhead = 6;

inline SideInfoFeatures extract_sideinfo(const DnsRecord &r, const IpMetaProvider &geo,
                                         const CountryCodes &countries, const SubnetConfig &subnet = {}) {
    if (r.data.empty()) throw Error{ErrorKind::MalformedIp, "record '" + r.name + "' has no data"};

    std::vector<IpAddress> ips;
    ips.reserve(r.data.size());
    for (const auto &entry : r.data) {
        const auto ip = parse_ip(entry);
        if (!ip) throw Error{ErrorKind::MalformedIp, "'" + entry + "' in record '" + r.name + "'"};
        ips.push_back(*ip);
    }

    SideInfoFeatures f;
    double rrlength = 0;
    std::set<IpAddress> distinct_ips;
    std::set<IpAddress> subnets;
    std::set<std::string> country_values;  // includes "unknown" as a value
    std::set<std::string> known_countries;
    std::set<std::uint32_t> asn_values;    // 0 stands in for unknown
    bool any_unknown = false;
    for (const auto &ip : ips) {
        rrlength += ip.byte_width() + rr_fixed_overhead;
        distinct_ips.insert(ip);
        subnets.insert(ip.masked(ip.v6 ? subnet.v6_prefix : subnet.v4_prefix));
        const auto meta = geo.lookup(ip);
        if (meta) {
            country_values.insert(meta->country);
            known_countries.insert(meta->country);
            asn_values.insert(meta->asn);
        } else {
            any_unknown = true;
            country_values.insert(std::string{IpMetaProvider::unknown_country});
            asn_values.insert(0);
        }
    }

    f.rrlength = rrlength;
    if (known_countries.size() >= 2) {
        f.country = CountryCodes::multi_valued_code;
    } else if (any_unknown || known_countries.empty()) {
        f.country = CountryCodes::unknown_code;
    } else {
        f.country = countries.code(*known_countries.begin());
    }
    f.ttl = static_cast<double>(r.ttl);
    f.n_ip = static_cast<double>(distinct_ips.size());
    f.qtype = r.qtype;
    f.rtype = r.rtype;
    f.n_asn = static_cast<double>(asn_values.size());
    f.subnet = subnets.size() == 1 ? 1.0 : 0.0;
    f.n_countries = static_cast<double>(country_values.size());
    return f;
}

}  // namespace dgad
