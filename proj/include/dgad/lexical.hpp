#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "dgad/core.hpp"
#include "dgad/error.hpp"

namespace dgad {

inline constexpr std::string_view lexical_schema_version = "lexical-v1";

/// Column names and order of the lexical block. CSV exports and model
/// schemas use exactly these names.
inline constexpr std::array<std::string_view, 26> lexical_feature_names = {
    "domain_len", "sld_len", "tld_len", "uni_domain", "uni_sld", "uni_tld",
    "flag_dga", "tld_hash", "flag_dig", "sym", "hex", "dig", "vow", "con",
    "rep_char_ratio", "cons_con_ratio", "cons_dig_ratio", "tokens_sld", "digits_sld",
    "ent", "gni", "cer", "2gram_med", "3gram_med", "2gram_cmed", "3gram_cmed",
};

/// TLDs treated as frequently abused (flag_dga).
inline constexpr std::array<std::string_view, 10> malicious_tlds = {
    "study", "party", "click", "top", "gdn", "gq", "asia", "cricket", "biz", "cf",
};

/// Denominator used for the per-character proportions behind ent, gni, cer.
enum class CharProbabilityBasis {
    sld_length,    ///< freq / sld_len; proportions sum to one (default)
    unique_chars,  ///< freq / number of distinct characters in the SLD
};

struct LexicalOptions {
    CharProbabilityBasis probability_basis = CharProbabilityBasis::sld_length;
};

struct LexicalFeatures {
    double domain_len = 0;
    double sld_len = 0;
    double tld_len = 0;
    double uni_domain = 0;
    double uni_sld = 0;
    double uni_tld = 0;
    double flag_dga = 0;
    double tld_hash = 0;
    double flag_dig = 0;
    double sym = 0;
    double hex = 0;
    double dig = 0;
    double vow = 0;
    double con = 0;
    double rep_char_ratio = 0;
    double cons_con_ratio = 0;
    double cons_dig_ratio = 0;
    double tokens_sld = 0;
    double digits_sld = 0;
    double ent = 0;
    double gni = 0;
    double cer = 0;
    double gram2_med = 0;
    double gram3_med = 0;
    double gram2_cmed = 0;
    double gram3_cmed = 0;

    std::array<double, 26> values() const {
        return {domain_len, sld_len,        tld_len,        uni_domain,     uni_sld,
                uni_tld,    flag_dga,       tld_hash,       flag_dig,       sym,
                hex,        dig,            vow,            con,            rep_char_ratio,
                cons_con_ratio, cons_dig_ratio, tokens_sld, digits_sld,     ent,
                gni,        cer,            gram2_med,      gram3_med,      gram2_cmed,
                gram3_cmed};
    }
};

namespace detail {

inline bool is_vowel(char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u'; }
inline bool is_digit(char c) { return c >= '0' && c <= '9'; }
inline bool is_letter(char c) { return c >= 'a' && c <= 'z'; }
inline bool is_consonant(char c) { return is_letter(c) && !is_vowel(c); }
inline bool is_hex(char c) { return is_digit(c) || (c >= 'a' && c <= 'f'); }

/// Distinct characters other than '.' and '-'.
inline int unique_chars(std::string_view s) {
    std::array<bool, 256> seen{};
    int n = 0;
    for (unsigned char c : s) {
        if (c == '.' || c == '-' || seen[c]) continue;
        seen[c] = true;
        ++n;
    }
    return n;
}

inline double median_sorted(const std::vector<double> &v) {
    const auto n = v.size();
    if (n == 0) return 0.0;
    if (n % 2 == 1) return v[n / 2];
    return (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

}  // namespace detail

/// FNV-1a 64-bit of the bytes, reduced modulo 2^31.
inline std::uint64_t tld_hash(std::string_view tld) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : tld) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h % (1ULL << 31);
}

/// Median of the occurrence counts of each distinct contiguous n-gram.
/// Strings shorter than n yield 0.
inline double ngram_median(std::string_view s, std::size_t n) {
    if (n == 0 || s.size() < n) return 0.0;
    std::map<std::string_view, int> counts;
    for (std::size_t i = 0; i + n <= s.size(); ++i) ++counts[s.substr(i, n)];
    std::vector<double> freqs;
    freqs.reserve(counts.size());
    for (const auto &[gram, count] : counts) freqs.push_back(count);
    std::sort(freqs.begin(), freqs.end());
    return detail::median_sorted(freqs);
}

/// n-gram median of the string concatenated with itself.
inline double ngram_circle_median(std::string_view s, std::size_t n) {
    std::string doubled;
    doubled.reserve(2 * s.size());
    doubled.append(s).append(s);
    return ngram_median(doubled, n);
}

inline LexicalFeatures extract_lexical(const ParsedDomain &d, const LexicalOptions &opts = {}) {
    const std::string &sld = d.sld();
    const std::string &tld = d.tld();
    const std::string domain = d.domain();
    const double sld_len = static_cast<double>(sld.size());
    const double domain_len = static_cast<double>(domain.size());

    LexicalFeatures f;
    f.domain_len = domain_len;
    f.sld_len = sld_len;
    f.tld_len = static_cast<double>(tld.size());
    f.uni_domain = detail::unique_chars(domain);
    f.uni_sld = detail::unique_chars(sld);
    f.uni_tld = detail::unique_chars(tld);

    const auto last_dot = tld.rfind('.');
    const std::string_view top_label =
        last_dot == std::string::npos ? std::string_view{tld} : std::string_view{tld}.substr(last_dot + 1);
    f.flag_dga = std::find(malicious_tlds.begin(), malicious_tlds.end(), top_label) != malicious_tlds.end();
    f.tld_hash = static_cast<double>(tld_hash(tld));
    f.flag_dig = !sld.empty() && detail::is_digit(sld.front());

    int n_sym = 0, n_hex = 0, n_dig = 0, n_vow = 0, n_con = 0;
    std::array<int, 256> freq{};
    for (unsigned char c : sld) {
        ++freq[c];
        if (detail::is_digit(c)) ++n_dig;
        else if (detail::is_vowel(c)) ++n_vow;
        else if (detail::is_letter(c)) ++n_con;
        else ++n_sym;
        if (detail::is_hex(c)) ++n_hex;
    }
    f.sym = n_sym / sld_len;
    f.hex = n_hex / sld_len;
    f.dig = n_dig / sld_len;
    f.vow = n_vow / sld_len;
    f.con = n_con / sld_len;
    f.digits_sld = n_dig;

    int repeated = 0;
    int distinct = 0;
    double max_freq = 0;
    for (int c = 0; c < 256; ++c) {
        if (freq[c] == 0) continue;
        ++distinct;
        max_freq = std::max<double>(max_freq, freq[c]);
        if (freq[c] > 1 && c != '-') ++repeated;
    }
    f.rep_char_ratio = f.uni_sld > 0 ? repeated / f.uni_sld : 0.0;

    int con_pairs = 0, dig_pairs = 0;
    for (std::size_t i = 0; i + 1 < domain.size(); ++i) {
        if (detail::is_consonant(domain[i]) && detail::is_consonant(domain[i + 1])) ++con_pairs;
        if (detail::is_digit(domain[i]) && detail::is_digit(domain[i + 1])) ++dig_pairs;
    }
    f.cons_con_ratio = con_pairs / domain_len;
    f.cons_dig_ratio = dig_pairs / domain_len;

    int tokens = 0;
    bool in_token = false;
    for (char c : sld) {
        if (c == '-') {
            in_token = false;
        } else if (!in_token) {
            in_token = true;
            ++tokens;
        }
    }
    f.tokens_sld = tokens;

    const double denom =
        opts.probability_basis == CharProbabilityBasis::sld_length ? sld_len : static_cast<double>(distinct);
    double plogp = 0, sum_sq = 0;
    for (int c = 0; c < 256; ++c) {
        if (freq[c] == 0) continue;
        const double p = freq[c] / denom;
        plogp += p * std::log2(p);
        sum_sq += p * p;
    }
    // log2(1) = 0: a one-character SLD has no entropy to normalize.
    f.ent = sld.size() >= 2 ? -plogp / std::log2(sld_len) : 0.0;
    if (f.ent == 0.0) f.ent = 0.0;  // no negative zero
    f.gni = 1.0 - sum_sq;
    f.cer = 1.0 - max_freq / denom;

    f.gram2_med = ngram_median(sld, 2);
    f.gram3_med = ngram_median(sld, 3);
    f.gram2_cmed = ngram_circle_median(sld, 2);
    f.gram3_cmed = ngram_circle_median(sld, 3);
    return f;
}

inline constexpr std::size_t encoded_length = 77;

/// Character codes for the external sequence model: '.'=1, '-'=2,
/// '0'-'9'=3..12, 'a'-'z'=13..38; 0 is padding.
inline int char_code(char c) {
    if (c == '.') return 1;
    if (c == '-') return 2;
    if (c >= '0' && c <= '9') return 3 + (c - '0');
    if (c >= 'a' && c <= 'z') return 13 + (c - 'a');
    throw Error{ErrorKind::InvalidDomain, std::string{"character has no code: "} + c};
}

using EncodedDomain = std::array<std::uint8_t, encoded_length>;

/// Left-zero-padded code sequence of "sld.tld".
inline EncodedDomain encode_domain(const ParsedDomain &d) {
    const std::string s = d.domain();
    if (s.size() > encoded_length) {
        throw Error{ErrorKind::TooLong, "'" + s + "' exceeds " + std::to_string(encoded_length) + " characters"};
    }
    EncodedDomain codes{};
    const std::size_t pad = encoded_length - s.size();
    for (std::size_t i = 0; i < s.size(); ++i) codes[pad + i] = static_cast<std::uint8_t>(char_code(s[i]));
    return codes;
}

}  // namespace dgad
