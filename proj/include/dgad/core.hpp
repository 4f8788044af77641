#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "dgad/bundled.hpp"
#include "dgad/error.hpp"

namespace dgad {

/// One resolved passive-DNS response.
struct DnsRecord {
    std::string name;
    std::int64_t ttl = 0;
    int qtype = 1;
    int rtype = 1;
    int rclass = 1;
    std::vector<std::string> data;

    bool operator==(const DnsRecord &) const = default;
};

enum class Label : std::uint8_t { benign = 0, dga = 1 };

inline int to_int(Label label) { return static_cast<int>(label); }

inline Label label_from_int(long v) {
    if (v != 0 && v != 1) {
        throw Error{ErrorKind::Parse, "label must be 0 or 1, got " + std::to_string(v)};
    }
    return v == 1 ? Label::dga : Label::benign;
}

inline bool is_dns_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-' || c == '.';
}

inline char ascii_lower(char c) {
    return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

inline std::string to_lower(std::string_view s) {
    std::string out{s};
    std::transform(out.begin(), out.end(), out.begin(), ascii_lower);
    return out;
}

/// Splits on '.', keeping empty labels so callers can reject them.
inline std::vector<std::string_view> split_labels(std::string_view name) {
    std::vector<std::string_view> labels;
    std::size_t start = 0;
    while (true) {
        const auto dot = name.find('.', start);
        if (dot == std::string_view::npos) {
            labels.push_back(name.substr(start));
            break;
        }
        labels.push_back(name.substr(start, dot - start));
        start = dot + 1;
    }
    return labels;
}

/// Public suffix table with longest-match lookup.
class SuffixList {
public:
    SuffixList() = default;

    /// Parses the one-suffix-per-line format; "//" comments and blank lines
    /// are ignored, as are wildcard and exception rules.
    static SuffixList parse(std::istream &in) {
        SuffixList list;
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            const auto first = line.find_first_not_of(" \t");
            if (first == std::string::npos) continue;
            auto last = line.find_first_of(" \t", first);
            std::string_view rule{line.data() + first,
                                  (last == std::string::npos ? line.size() : last) - first};
            if (rule.starts_with("//") || rule.starts_with("!") || rule.find('*') != rule.npos) {
                continue;
            }
            if (rule.starts_with('.')) rule.remove_prefix(1);
            if (!rule.empty()) list.add(rule);
        }
        return list;
    }

    static SuffixList parse(std::string_view text) {
        std::istringstream in{std::string{text}};
        return parse(in);
    }

    static const SuffixList &bundled() {
        static const SuffixList list = parse(bundled::suffix_list);
        return list;
    }

    void add(std::string_view suffix) { suffixes_.insert(to_lower(suffix)); }

    bool contains(std::string_view suffix) const {
        return suffixes_.find(std::string{suffix}) != suffixes_.end();
    }

    std::size_t size() const { return suffixes_.size(); }

private:
    std::unordered_set<std::string> suffixes_;
};

/// Validated SLD + public-suffix decomposition of a domain name.
class ParsedDomain {
public:
    const std::string &sld() const { return sld_; }
    const std::string &tld() const { return tld_; }
    const std::string &original() const { return original_; }

    /// "sld.tld"
    std::string domain() const { return sld_ + "." + tld_; }

    bool operator==(const ParsedDomain &other) const {
        return sld_ == other.sld_ && tld_ == other.tld_;
    }

    friend ParsedDomain parse_domain(std::string_view raw, const SuffixList &suffixes);

private:
    std::string sld_;
    std::string tld_;
    std::string original_;
};

/// Lowercases `raw`, drops third-level and deeper labels and splits the rest
/// into SLD and the longest matching public suffix. A single trailing root
/// dot is accepted.
inline ParsedDomain parse_domain(std::string_view raw, const SuffixList &suffixes) {
    if (raw.empty()) throw Error{ErrorKind::InvalidDomain, "empty domain name"};
    std::string name = to_lower(raw);
    if (name.size() > 1 && name.back() == '.') name.pop_back();
    for (char c : name) {
        if (!is_dns_char(c)) {
            throw Error{ErrorKind::InvalidDomain, "invalid character in '" + std::string{raw} + "'"};
        }
    }
    const auto labels = split_labels(name);
    for (auto label : labels) {
        if (label.empty()) {
            throw Error{ErrorKind::InvalidDomain, "empty label in '" + std::string{raw} + "'"};
        }
    }

    // Suffix starting at label i is name.substr(offset[i]); the first hit
    // scanning left to right is the longest.
    std::size_t offset = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const std::string_view suffix{name.data() + offset, name.size() - offset};
        if (suffixes.contains(suffix)) {
            if (i == 0) {
                throw Error{ErrorKind::EmptySld, "'" + std::string{raw} + "' is a public suffix"};
            }
            ParsedDomain parsed;
            parsed.sld_ = std::string{labels[i - 1]};
            parsed.tld_ = std::string{suffix};
            parsed.original_ = std::string{raw};
            return parsed;
        }
        offset += labels[i].size() + 1;
    }
    throw Error{ErrorKind::NoValidSuffix, "no public suffix matches '" + std::string{raw} + "'"};
}

}  // namespace dgad
