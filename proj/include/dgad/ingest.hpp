#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <istream>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <nlohmann/json.hpp>

#include "dgad/bundled.hpp"
#include "dgad/core.hpp"
#include "dgad/error.hpp"
#include "dgad/forest.hpp"
#include "dgad/sideinfo.hpp"

namespace dgad {

// ---------------------------------------------------------------------------
// Domain lists
// ---------------------------------------------------------------------------

/// Lowercased SLD.TLD when the name parses, otherwise the lowercased name
/// without a trailing dot.
inline std::string normalize_domain(std::string_view raw, const SuffixList &suffixes) {
    try {
        return parse_domain(raw, suffixes).domain();
    } catch (const Error &) {
        std::string out = to_lower(raw);
        if (!out.empty() && out.back() == '.') out.pop_back();
        return out;
    }
}

/// Malware families whose generated names are dictionary words; dropped
/// from training.
inline constexpr std::array<std::string_view, 4> dictionary_families = {"suppobox", "gozi", "matsnu", "nymaim2"};

inline bool is_dictionary_family(std::string_view family) {
    return std::find(dictionary_families.begin(), dictionary_families.end(), to_lower(family)) !=
           dictionary_families.end();
}

/// Black- or whitelist keyed on normalized SLD.TLD. File format: one domain
/// per line with an optional ",family" suffix; '#' starts a comment line.
class DomainList {
public:
    static DomainList parse(std::istream &in, const SuffixList &suffixes) {
        DomainList list;
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            const auto first = line.find_first_not_of(" \t");
            if (first == std::string::npos || line[first] == '#') continue;
            std::string_view entry{line};
            entry.remove_prefix(first);
            std::string family;
            if (const auto comma = entry.find(','); comma != std::string_view::npos) {
                family = to_lower(entry.substr(comma + 1));
                entry = entry.substr(0, comma);
            }
            while (!entry.empty() && (entry.back() == ' ' || entry.back() == '\t')) entry.remove_suffix(1);
            if (entry.empty()) continue;
            list.add(normalize_domain(entry, suffixes), family);
        }
        return list;
    }

    static DomainList parse(std::string_view text, const SuffixList &suffixes) {
        std::istringstream in{std::string{text}};
        return parse(in, suffixes);
    }

    void add(std::string key, std::string family = {}) {
        keys_.insert(key);
        if (!family.empty()) families_[std::move(key)] = std::move(family);
    }

    bool contains(const std::string &key) const { return keys_.contains(key); }

    std::string family(const std::string &key) const {
        const auto it = families_.find(key);
        return it == families_.end() ? std::string{} : it->second;
    }

    const std::unordered_set<std::string> &keys() const { return keys_; }
    std::size_t size() const { return keys_.size(); }

private:
    std::unordered_set<std::string> keys_;
    std::unordered_map<std::string, std::string> families_;
};

struct ListMembership {
    bool in_blacklist = false;
    bool in_whitelist = false;
    bool in_both = false;

    bool operator==(const ListMembership &) const = default;
};

inline std::vector<ListMembership> match_lists(std::span<const ParsedDomain> domains, const DomainList &blacklist,
                                               const DomainList &whitelist) {
    std::vector<ListMembership> out;
    out.reserve(domains.size());
    for (const auto &d : domains) {
        const auto key = d.domain();
        ListMembership m;
        m.in_blacklist = blacklist.contains(key);
        m.in_whitelist = whitelist.contains(key);
        m.in_both = m.in_blacklist && m.in_whitelist;
        out.push_back(m);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Benign-candidate heuristics
// ---------------------------------------------------------------------------

struct HeuristicReport {
    bool valid_chars = false;
    bool resolution_history = false;
    bool valid_suffix = false;
    bool not_all_digits = false;
    bool at_most_four_labels = false;
    bool length_at_most_255 = false;
    bool longest_label_7_to_64 = false;
    bool longest_label_over_twice_tld = false;
    bool longest_label_over_70_percent = false;
    bool not_idn = false;
    bool not_blacklisted = false;

    static constexpr std::array<std::string_view, 11> rule_names = {
        "valid_chars",        "resolution_history",     "valid_suffix",
        "not_all_digits",     "at_most_four_labels",    "length_at_most_255",
        "longest_label_7_to_64", "longest_label_over_twice_tld", "longest_label_over_70_percent",
        "not_idn",            "not_blacklisted",
    };

    std::array<bool, 11> rules() const {
        return {valid_chars,           resolution_history,           valid_suffix,
                not_all_digits,        at_most_four_labels,          length_at_most_255,
                longest_label_7_to_64, longest_label_over_twice_tld, longest_label_over_70_percent,
                not_idn,               not_blacklisted};
    }

    bool passed() const {
        const auto r = rules();
        return std::all_of(r.begin(), r.end(), [](bool b) { return b; });
    }
};

/// Longitudinal check ("resolved every day over the collection window").
/// Without traffic history the default accepts every name.
using ResolutionHistory = std::function<bool(std::string_view fqdn)>;

inline HeuristicReport benign_filter(std::string_view fqdn, const SuffixList &suffixes, const DomainList &blacklist,
                                     const ResolutionHistory &history = {}) {
    HeuristicReport r;
    std::string name = to_lower(fqdn);
    if (name.size() > 1 && name.back() == '.') name.pop_back();

    r.valid_chars = !name.empty() && std::all_of(name.begin(), name.end(), is_dns_char);
    r.resolution_history = history ? history(name) : true;

    std::optional<ParsedDomain> parsed;
    try {
        parsed = parse_domain(name, suffixes);
    } catch (const Error &) {
    }
    r.valid_suffix = parsed.has_value();

    // Digits are judged on the registrable part, i.e. without the suffix.
    std::string_view head{name};
    if (parsed) head.remove_suffix(parsed->tld().size() + 1);
    bool all_digits = true;
    bool any_char = false;
    for (char c : head) {
        if (c == '.' || c == '-') continue;
        any_char = true;
        if (c < '0' || c > '9') all_digits = false;
    }
    r.not_all_digits = any_char && !all_digits;

    const auto labels = split_labels(name);
    std::size_t longest = 0, combined = 0;
    bool idn = false;
    for (auto label : labels) {
        longest = std::max(longest, label.size());
        combined += label.size();
        if (label.starts_with("xn--")) idn = true;
    }
    r.at_most_four_labels = labels.size() <= 4;
    r.length_at_most_255 = name.size() <= 255;
    r.longest_label_7_to_64 = longest >= 7 && longest <= 64;
    // Without a matching suffix the last label stands in for the TLD.
    const std::size_t tld_len = parsed ? parsed->tld().size() : labels.back().size();
    r.longest_label_over_twice_tld = longest > 2 * tld_len;
    r.longest_label_over_70_percent = static_cast<double>(longest) > 0.7 * static_cast<double>(combined);
    r.not_idn = !idn;
    r.not_blacklisted = !blacklist.contains(normalize_domain(name, suffixes)) && !blacklist.contains(name);
    return r;
}

// ---------------------------------------------------------------------------
// pDNS JSONL
// ---------------------------------------------------------------------------

namespace detail {

inline std::optional<int> dns_code(const nlohmann::json &v, bool is_class) {
    if (v.is_number_integer()) return v.get<int>();
    if (!v.is_string()) return std::nullopt;
    static const std::unordered_map<std::string, int> types = {
        {"A", 1},    {"NS", 2},   {"CNAME", 5}, {"SOA", 6},  {"PTR", 12},
        {"MX", 15},  {"TXT", 16}, {"AAAA", 28}, {"SRV", 33}, {"ANY", 255},
    };
    static const std::unordered_map<std::string, int> classes = {{"IN", 1}, {"CH", 3}, {"HS", 4}};
    std::string key = v.get<std::string>();
    std::transform(key.begin(), key.end(), key.begin(), [](char c) { return static_cast<char>(std::toupper(c)); });
    const auto &table = is_class ? classes : types;
    const auto it = table.find(key);
    if (it == table.end()) return std::nullopt;
    return it->second;
}

}  // namespace detail

/// Parses one JSONL line; nullopt when the line is malformed.
inline std::optional<DnsRecord> parse_pdns_line(std::string_view line) {
    const auto doc = nlohmann::json::parse(line, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) return std::nullopt;
    const auto name = doc.find("name");
    const auto ttl = doc.find("ttl");
    const auto type = doc.find("type");
    const auto cls = doc.find("class");
    const auto data = doc.find("data");
    if (name == doc.end() || ttl == doc.end() || type == doc.end() || cls == doc.end() || data == doc.end()) {
        return std::nullopt;
    }
    if (!name->is_string() || !ttl->is_number_integer() || !data->is_array()) return std::nullopt;
    DnsRecord r;
    r.name = name->get<std::string>();
    r.ttl = ttl->get<std::int64_t>();
    const auto rtype = detail::dns_code(*type, false);
    const auto rclass = detail::dns_code(*cls, true);
    if (!rtype || !rclass) return std::nullopt;
    r.rtype = *rtype;
    r.rclass = *rclass;
    r.qtype = r.rtype;
    if (const auto q = doc.find("qtype"); q != doc.end()) {
        const auto qtype = detail::dns_code(*q, false);
        if (!qtype) return std::nullopt;
        r.qtype = *qtype;
    }
    for (const auto &entry : *data) {
        if (!entry.is_string()) return std::nullopt;
        r.data.push_back(entry.get<std::string>());
    }
    if (r.name.empty() || r.ttl < 0 || r.data.empty()) return std::nullopt;
    return r;
}

inline std::string to_pdns_line(const DnsRecord &r) {
    nlohmann::ordered_json doc = {
        {"name", r.name}, {"ttl", r.ttl}, {"type", r.rtype}, {"class", r.rclass}, {"data", r.data},
    };
    if (r.qtype != r.rtype) doc["qtype"] = r.qtype;
    return doc.dump();
}

inline void write_pdns(std::ostream &out, std::span<const DnsRecord> records) {
    for (const auto &r : records) out << to_pdns_line(r) << '\n';
    if (!out) throw Error{ErrorKind::Io, "failed writing pDNS stream"};
}

struct PdnsStats {
    std::size_t lines = 0;
    std::size_t parsed = 0;
    std::size_t skipped = 0;

    nlohmann::ordered_json to_json() const { return {{"lines", lines}, {"parsed", parsed}, {"skipped", skipped}}; }
};

/// Pulls one record at a time; malformed or empty lines are counted and
/// skipped.
class PdnsReader {
public:
    explicit PdnsReader(std::istream &in) : in_{in} {
        if (!in_) throw Error{ErrorKind::Io, "pDNS stream is not readable"};
    }

    std::optional<DnsRecord> next() {
        std::string line;
        while (std::getline(in_, line)) {
            ++stats_.lines;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (auto r = parse_pdns_line(line)) {
                ++stats_.parsed;
                return r;
            }
            ++stats_.skipped;
        }
        if (in_.bad()) throw Error{ErrorKind::Io, "error reading pDNS stream"};
        return std::nullopt;
    }

    const PdnsStats &stats() const { return stats_; }

private:
    std::istream &in_;
    PdnsStats stats_;
};

struct PdnsReadResult {
    std::vector<DnsRecord> records;
    PdnsStats stats;
};

inline PdnsReadResult read_pdns(std::istream &in) {
    PdnsReader reader{in};
    PdnsReadResult result;
    while (auto r = reader.next()) result.records.push_back(std::move(*r));
    result.stats = reader.stats();
    return result;
}

// ---------------------------------------------------------------------------
// Labeled examples and sidecar files
// ---------------------------------------------------------------------------

enum class Source { blacklist, heuristics, synthetic, unlabeled };

inline std::string_view to_string(Source s) {
    switch (s) {
        case Source::blacklist: return "blacklist";
        case Source::heuristics: return "heuristics";
        case Source::synthetic: return "synthetic";
        case Source::unlabeled: return "unlabeled";
    }
    return "unlabeled";
}

inline Source source_from_string(std::string_view s) {
    if (s == "blacklist") return Source::blacklist;
    if (s == "heuristics") return Source::heuristics;
    if (s == "synthetic") return Source::synthetic;
    if (s == "unlabeled") return Source::unlabeled;
    throw Error{ErrorKind::Parse, "unknown source '" + std::string{s} + "'"};
}

struct LabeledExample {
    DnsRecord record;
    ParsedDomain parsed;
    Label label = Label::benign;
    Source source = Source::unlabeled;
    std::string family;  // blacklist family tag, if any
};

struct LabelRow {
    std::string name;
    Label label = Label::benign;
    Source source = Source::unlabeled;
    std::string family;
};

/// name,label,source,family rows; row i describes pDNS record i.
inline void write_labels_csv(std::ostream &out, std::span<const LabeledExample> examples) {
    out << "name,label,source,family\n";
    for (const auto &e : examples) {
        out << e.record.name << ',' << to_int(e.label) << ',' << to_string(e.source) << ',' << e.family << '\n';
    }
    if (!out) throw Error{ErrorKind::Io, "failed writing labels"};
}

inline std::vector<LabelRow> read_labels_csv(std::istream &in) {
    std::vector<LabelRow> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || (line_no == 1 && line.starts_with("name,"))) continue;
        std::vector<std::string> cols;
        std::stringstream row{line};
        for (std::string col; std::getline(row, col, ',');) cols.push_back(col);
        if (!line.empty() && line.back() == ',') cols.emplace_back();
        if (cols.size() < 2) throw Error{ErrorKind::Parse, "labels line " + std::to_string(line_no) + ": too few columns"};
        LabelRow r;
        r.name = cols[0];
        if (cols[1] != "0" && cols[1] != "1") {
            throw Error{ErrorKind::Parse, "labels line " + std::to_string(line_no) + ": label must be 0 or 1"};
        }
        r.label = cols[1] == "1" ? Label::dga : Label::benign;
        r.source = cols.size() > 2 && !cols[2].empty() ? source_from_string(cols[2]) : Source::unlabeled;
        if (cols.size() > 3) r.family = cols[3];
        rows.push_back(std::move(r));
    }
    return rows;
}

/// domain,score sidecar keyed on normalized SLD.TLD.
inline std::unordered_map<std::string, double> read_scores_csv(std::istream &in, const SuffixList &suffixes) {
    std::unordered_map<std::string, double> scores;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || (line_no == 1 && line.starts_with("domain,"))) continue;
        const auto comma = line.rfind(',');
        if (comma == std::string::npos) throw Error{ErrorKind::Parse, "scores line " + std::to_string(line_no)};
        const std::string value = line.substr(comma + 1);
        char *end = nullptr;
        const double s = std::strtod(value.c_str(), &end);
        if (value.empty() || *end != '\0' || !(s >= 0.0 && s <= 1.0)) {
            throw Error{ErrorKind::Parse, "scores line " + std::to_string(line_no) + ": score must lie in [0,1]"};
        }
        scores[normalize_domain(std::string_view{line}.substr(0, comma), suffixes)] = s;
    }
    return scores;
}

// ---------------------------------------------------------------------------
// Synthetic data
// ---------------------------------------------------------------------------

inline constexpr std::int64_t synth_benign_median_ttl = 3600;
inline constexpr std::int64_t synth_dga_median_ttl = 900;

namespace detail {

template <typename T>
struct Weighted {
    T value;
    double weight;
};

template <typename T, std::size_t N>
const T &pick(std::mt19937_64 &rng, const std::array<Weighted<T>, N> &table) {
    std::array<double, N> weights{};
    for (std::size_t i = 0; i < N; ++i) weights[i] = table[i].weight;
    std::discrete_distribution<std::size_t> dist(weights.begin(), weights.end());
    return table[dist(rng)].value;
}

template <typename T>
const T &pick(std::mt19937_64 &rng, std::span<const T> items) {
    std::uniform_int_distribution<std::size_t> dist(0, items.size() - 1);
    return items[dist(rng)];
}

/// n TTLs whose median is exactly `median` for every n: 30% strictly below,
/// 30% strictly above, the rest equal, then shuffled.
inline std::vector<std::int64_t> ttls_with_median(std::size_t n, std::int64_t median,
                                                  std::span<const std::int64_t> below,
                                                  std::span<const std::int64_t> above, std::mt19937_64 &rng) {
    const std::size_t low = (n * 3) / 10;
    const std::size_t high = (n * 3) / 10;
    std::vector<std::int64_t> ttls;
    ttls.reserve(n);
    for (std::size_t i = 0; i < low; ++i) ttls.push_back(pick(rng, below));
    for (std::size_t i = 0; i < high; ++i) ttls.push_back(pick(rng, above));
    while (ttls.size() < n) ttls.push_back(median);
    std::shuffle(ttls.begin(), ttls.end(), rng);
    return ttls;
}

/// Random host in the /24 of `base` ("a.b.c.0"), or in that /24 or the next
/// one when `spread` is set.
inline std::string random_ipv4(std::mt19937_64 &rng, std::string_view base, bool spread) {
    std::array<int, 4> octets{};
    std::sscanf(std::string{base}.c_str(), "%d.%d.%d.%d", &octets[0], &octets[1], &octets[2], &octets[3]);
    std::uniform_int_distribution<int> host(1, 254);
    if (spread) octets[2] += std::uniform_int_distribution<int>(0, 1)(rng);
    octets[3] = host(rng);
    return std::to_string(octets[0]) + "." + std::to_string(octets[1]) + "." + std::to_string(octets[2]) + "." +
           std::to_string(octets[3]);
}

inline std::string random_ipv6(std::mt19937_64 &rng, std::string_view base_prefix, bool same_64, int subnet_tag) {
    std::uniform_int_distribution<int> word(1, 0xfffe);
    std::ostringstream s;
    s << base_prefix << std::hex << (same_64 ? subnet_tag : word(rng)) << ":" << "0:" << word(rng) << ":"
      << word(rng) << ":" << word(rng) << ":" << word(rng);
    return s.str();
}

}  // namespace detail

/// Seeded labeled dataset shaped after resolver traffic: word-composed
/// benign names that pass benign_filter, uniform [a-z0-9] DGA names, and
/// side information with benign/DGA median TTLs of 3600/900 seconds.
inline std::vector<LabeledExample> synth_dataset(std::size_t n_benign, std::size_t n_dga, std::uint64_t seed) {
    if (n_benign == 0 || n_dga == 0) throw Error{ErrorKind::InvalidConfig, "synth counts must be positive"};
    using detail::Weighted;
    const auto &suffixes = SuffixList::bundled();
    const DomainList no_blacklist;
    auto rng = derive_rng(seed, 0x5e7d);

    static constexpr std::array<std::int64_t, 4> benign_low = {300, 600, 1200, 1800};
    static constexpr std::array<std::int64_t, 5> benign_high = {7200, 14400, 43200, 86400, 604800};
    static constexpr std::array<std::int64_t, 4> dga_low = {60, 120, 300, 600};
    static constexpr std::array<std::int64_t, 4> dga_high = {1800, 3600, 7200, 86400};
    const auto benign_ttls = detail::ttls_with_median(n_benign, synth_benign_median_ttl, benign_low, benign_high, rng);
    const auto dga_ttls = detail::ttls_with_median(n_dga, synth_dga_median_ttl, dga_low, dga_high, rng);

    static constexpr std::array<Weighted<std::string_view>, 12> benign_tlds = {{
        {"com", 50}, {"net", 9}, {"org", 9}, {"de", 5}, {"ru", 4}, {"fr", 3},
        {"nl", 3},   {"info", 3}, {"io", 3}, {"co.uk", 4}, {"eu", 2}, {"ch", 2},
    }};
    static constexpr std::array<Weighted<std::string_view>, 16> dga_tlds = {{
        {"com", 28}, {"net", 14}, {"org", 8}, {"info", 10}, {"biz", 8}, {"ru", 8}, {"top", 4}, {"xyz", 4},
        {"click", 2}, {"cc", 3},  {"su", 2},  {"ws", 2},    {"pw", 2},  {"tk", 2}, {"cf", 1},  {"gq", 2},
    }};
    // Addresses inside bundled geoip prefixes.
    static constexpr std::array<std::string_view, 12> benign_v4 = {
        "13.32.4.0",   "23.40.10.0",  "104.17.20.0",  "151.101.1.0", "172.217.5.0",  "52.210.3.0",
        "46.4.100.0",  "51.15.7.0",   "31.13.70.0",   "81.2.70.0",   "133.242.9.0", "62.210.16.0",
    };
    static constexpr std::array<std::string_view, 3> benign_v6 = {"2606:4700:", "2a00:1450:", "2a01:4f8:"};
    static constexpr std::array<std::string_view, 12> dga_v4 = {
        "5.255.10.0",    "95.213.130.0", "185.22.152.0", "91.218.112.0", "176.114.2.0", "61.160.8.0",
        "122.10.40.0",   "103.224.182.0", "45.32.16.0",  "185.234.217.0", "195.123.210.0", "5.8.3.0",
    };
    // Not covered by any bundled prefix.
    static constexpr std::array<std::string_view, 2> unrouted_v4 = {"198.51.100.0", "203.0.113.0"};

    std::vector<LabeledExample> out;
    out.reserve(n_benign + n_dga);

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::span<const std::string_view> words{bundled::wordlist};
    for (std::size_t i = 0; i < n_benign; ++i) {
        std::string fqdn;
        while (true) {
            const int n_words = unit(rng) < 0.7 ? 2 : 3;
            const bool hyphen = unit(rng) < 0.15;
            std::string sld;
            for (int w = 0; w < n_words; ++w) {
                if (w > 0 && hyphen) sld += '-';
                sld += detail::pick(rng, words);
            }
            if (unit(rng) < 0.1) sld += std::to_string(std::uniform_int_distribution<int>(1, 99)(rng));
            const double sub = unit(rng);
            const std::string prefix = sub < 0.3 ? "www." : sub < 0.4 ? "mail." : "";
            fqdn = prefix + sld + "." + std::string{detail::pick(rng, benign_tlds)};
            if (benign_filter(fqdn, suffixes, no_blacklist).passed()) break;
        }
        LabeledExample e;
        e.parsed = parse_domain(fqdn, suffixes);
        e.label = Label::benign;
        e.source = Source::synthetic;
        e.record.name = fqdn;
        e.record.ttl = benign_ttls[i];
        e.record.rclass = 1;

        static constexpr std::array<Weighted<int>, 6> benign_n_ip = {{{1, 35}, {2, 25}, {3, 10}, {4, 15}, {6, 8}, {8, 7}}};
        const int n_ip = detail::pick(rng, benign_n_ip);
        if (unit(rng) < 0.15) {
            e.record.qtype = e.record.rtype = 28;
            const auto base = detail::pick(rng, std::span<const std::string_view>{benign_v6});
            const bool same = unit(rng) < 0.7;
            const int tag = std::uniform_int_distribution<int>(1, 0xfffe)(rng);
            for (int k = 0; k < n_ip; ++k) e.record.data.push_back(detail::random_ipv6(rng, base, same, tag));
        } else {
            e.record.qtype = e.record.rtype = 1;
            const bool mixed = unit(rng) < 0.2;
            const bool same_24 = unit(rng) < 0.6;
            const auto first = detail::pick(rng, std::span<const std::string_view>{benign_v4});
            for (int k = 0; k < n_ip; ++k) {
                const auto base =
                    mixed && k % 2 == 1 ? detail::pick(rng, std::span<const std::string_view>{benign_v4}) : first;
                e.record.data.push_back(detail::random_ipv4(rng, base, !same_24));
            }
        }
        out.push_back(std::move(e));
    }

    static constexpr std::string_view alphabet = "abcdefghijklmnopqrstuvwxyz0123456789";
    std::uniform_int_distribution<std::size_t> letter(0, alphabet.size() - 1);
    std::uniform_int_distribution<int> length(12, 30);
    for (std::size_t i = 0; i < n_dga; ++i) {
        std::string sld;
        const int len = length(rng);
        for (int c = 0; c < len; ++c) sld += alphabet[letter(rng)];
        const std::string fqdn = sld + "." + std::string{detail::pick(rng, dga_tlds)};
        LabeledExample e;
        e.parsed = parse_domain(fqdn, suffixes);
        e.label = Label::dga;
        e.source = Source::synthetic;
        e.record.name = fqdn;
        e.record.ttl = dga_ttls[i];
        e.record.rclass = 1;
        e.record.qtype = e.record.rtype = unit(rng) < 0.03 ? 28 : 1;

        static constexpr std::array<Weighted<int>, 4> dga_n_ip = {{{1, 75}, {2, 13}, {3, 8}, {4, 4}}};
        const int n_ip = detail::pick(rng, dga_n_ip);
        for (int k = 0; k < n_ip; ++k) {
            if (e.record.rtype == 28) {
                e.record.data.push_back(detail::random_ipv6(rng, "2a01:4f8:", false, 0));
                continue;
            }
            const double where = unit(rng);
            std::string_view base;
            if (where < 0.7) base = detail::pick(rng, std::span<const std::string_view>{dga_v4});
            else if (where < 0.9) base = detail::pick(rng, std::span<const std::string_view>{benign_v4});
            else base = detail::pick(rng, std::span<const std::string_view>{unrouted_v4});
            e.record.data.push_back(detail::random_ipv4(rng, base, true));
        }
        out.push_back(std::move(e));
    }

    std::shuffle(out.begin(), out.end(), rng);
    return out;
}

}  // namespace dgad
