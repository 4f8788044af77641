#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dgad/core.hpp"
#include "dgad/error.hpp"
#include "dgad/lexical.hpp"
#include "dgad/sideinfo.hpp"

namespace dgad {

inline constexpr std::string_view ext_score_name = "ext_score";

struct FeatureVector {
    LexicalFeatures lexical;
    std::optional<SideInfoFeatures> sideinfo;
    std::optional<double> ext_score;
    std::optional<Label> label;
};

/// Which feature blocks a model consumes. Block order in a row is always
/// ext_score, side information, lexical.
struct FeatureSet {
    bool ext = false;
    bool dns = false;
    bool lexical = false;

    bool operator==(const FeatureSet &) const = default;

    bool empty() const { return !ext && !dns && !lexical; }

    /// Accepts '+'-joined block names: dns, lexical, ext (alias ext-score).
    static FeatureSet parse(std::string_view text) {
        FeatureSet set;
        std::size_t start = 0;
        while (start <= text.size()) {
            auto plus = text.find('+', start);
            if (plus == std::string_view::npos) plus = text.size();
            const auto token = text.substr(start, plus - start);
            if (token == "dns") set.dns = true;
            else if (token == "lexical") set.lexical = true;
            else if (token == "ext" || token == "ext-score" || token == "ext_score") set.ext = true;
            else if (!token.empty()) {
                throw Error{ErrorKind::InvalidConfig, "unknown feature block '" + std::string{token} + "'"};
            }
            start = plus + 1;
        }
        if (set.empty()) throw Error{ErrorKind::InvalidConfig, "empty feature set '" + std::string{text} + "'"};
        return set;
    }

    std::string name() const {
        std::string out;
        auto append = [&](std::string_view part) {
            if (!out.empty()) out += '+';
            out += part;
        };
        if (ext) append("ext");
        if (dns) append("dns");
        if (lexical) append("lexical");
        return out;
    }

    std::vector<std::string> column_names() const {
        std::vector<std::string> names;
        if (ext) names.emplace_back(ext_score_name);
        if (dns) names.insert(names.end(), sideinfo_feature_names.begin(), sideinfo_feature_names.end());
        if (lexical) names.insert(names.end(), lexical_feature_names.begin(), lexical_feature_names.end());
        return names;
    }

    std::size_t width() const { return (ext ? 1 : 0) + (dns ? sideinfo_feature_names.size() : 0) +
                                       (lexical ? lexical_feature_names.size() : 0); }

    /// Appends this set's columns of `v` to `row`.
    void append_row(const FeatureVector &v, std::vector<double> &row) const {
        if (ext) {
            if (!v.ext_score) throw Error{ErrorKind::SchemaMismatch, "model expects ext_score"};
            row.push_back(*v.ext_score);
        }
        if (dns) {
            if (!v.sideinfo) throw Error{ErrorKind::SchemaMismatch, "model expects side information"};
            const auto values = v.sideinfo->values();
            row.insert(row.end(), values.begin(), values.end());
        }
        if (lexical) {
            const auto values = v.lexical.values();
            row.insert(row.end(), values.begin(), values.end());
        }
    }

    std::vector<double> row(const FeatureVector &v) const {
        std::vector<double> out;
        out.reserve(width());
        append_row(v, out);
        return out;
    }
};

/// Everything needed to turn a record into a FeatureVector.
struct FeatureContext {
    const SuffixList *suffixes = &SuffixList::bundled();
    const IpMetaProvider *geo = &IpMetaProvider::bundled();
    CountryCodes countries = build_country_codes(IpMetaProvider::bundled().countries());
    LexicalOptions lexical;
    SubnetConfig subnet;
};

inline FeatureVector make_features(const ParsedDomain &parsed, const DnsRecord *record,
                                   const FeatureContext &ctx, std::optional<double> ext_score = std::nullopt) {
    if (ext_score && !(*ext_score >= 0.0 && *ext_score <= 1.0)) {
        throw Error{ErrorKind::InvalidConfig, "ext_score must lie in [0,1]"};
    }
    FeatureVector v;
    v.lexical = extract_lexical(parsed, ctx.lexical);
    if (record) v.sideinfo = extract_sideinfo(*record, *ctx.geo, ctx.countries, ctx.subnet);
    v.ext_score = ext_score;
    return v;
}

}  // namespace dgad
