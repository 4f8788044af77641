#pragma once

// Straight-from-definition reference implementations used by the unit and
// acceptance tests. They trade speed for obviousness and share no code with
// the library beyond plain data types.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace oracle {

inline bool vowel(char c) { return std::string_view{"aeiou"}.find(c) != std::string_view::npos; }
inline bool digit(char c) { return c >= '0' && c <= '9'; }
inline bool letter(char c) { return c >= 'a' && c <= 'z'; }
inline bool consonant(char c) { return letter(c) && !vowel(c); }

inline double median(std::vector<double> v) {
    if (v.empty()) return 0;
    std::sort(v.begin(), v.end());
    const auto n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

inline double ngram_median(const std::string &s, std::size_t n) {
    if (s.size() < n) return 0;
    std::map<std::string, int> counts;
    for (std::size_t i = 0; i + n <= s.size(); ++i) counts[s.substr(i, n)]++;
    std::vector<double> freqs;
    for (const auto &kv : counts) freqs.push_back(kv.second);
    return median(freqs);
}

inline std::size_t distinct_letters(const std::string &s) {
    std::set<char> seen;
    for (char c : s)
        if (c != '.' && c != '-') seen.insert(c);
    return seen.size();
}

inline std::uint64_t fnv1a_mod31(const std::string &s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h = h ^ c;
        h = h * 0x100000001b3ULL;
    }
    return h & 0x7fffffffULL;
}

/// The 26 lexical values in schema order.
inline std::array<double, 26> lexical(const std::string &sld, const std::string &tld) {
    static const std::set<std::string> bad_tlds = {"study", "party", "click", "top", "gdn",
                                                   "gq",    "asia",  "cricket", "biz", "cf"};
    const std::string domain = sld + "." + tld;
    const double len = static_cast<double>(sld.size());

    std::map<char, int> freq;
    for (char c : sld) freq[c]++;

    auto ratio = [&](auto pred) { return static_cast<double>(std::count_if(sld.begin(), sld.end(), pred)) / len; };

    double repeated = 0;
    for (const auto &kv : freq)
        if (kv.first != '-' && kv.second >= 2) repeated += 1;

    double con_pairs = 0, dig_pairs = 0;
    for (std::size_t i = 1; i < domain.size(); ++i) {
        if (consonant(domain[i - 1]) && consonant(domain[i])) con_pairs += 1;
        if (digit(domain[i - 1]) && digit(domain[i])) dig_pairs += 1;
    }

    double tokens = 0;
    std::string current;
    for (char c : sld + "-") {
        if (c == '-') {
            if (!current.empty()) tokens += 1;
            current.clear();
        } else {
            current += c;
        }
    }

    double h = 0, gini = 1, top = 0;
    for (const auto &kv : freq) {
        const double p = kv.second / len;
        h += -p * std::log2(p);
        gini -= p * p;
        top = std::max(top, p);
    }
    const double ent = sld.size() > 1 ? h / std::log2(len) : 0.0;

    const std::string last_label = tld.substr(tld.find_last_of('.') == std::string::npos ? 0 : tld.find_last_of('.') + 1);

    return {
        static_cast<double>(domain.size()),
        len,
        static_cast<double>(tld.size()),
        static_cast<double>(distinct_letters(domain)),
        static_cast<double>(distinct_letters(sld)),
        static_cast<double>(distinct_letters(tld)),
        bad_tlds.count(last_label) ? 1.0 : 0.0,
        static_cast<double>(fnv1a_mod31(tld)),
        digit(sld[0]) ? 1.0 : 0.0,
        ratio([](char c) { return !letter(c) && !digit(c); }),
        ratio([](char c) { return digit(c) || (c >= 'a' && c <= 'f'); }),
        ratio(digit),
        ratio(vowel),
        ratio(consonant),
        repeated / static_cast<double>(distinct_letters(sld)),
        con_pairs / static_cast<double>(domain.size()),
        dig_pairs / static_cast<double>(domain.size()),
        tokens,
        static_cast<double>(std::count_if(sld.begin(), sld.end(), digit)),
        ent,
        gini,
        1.0 - top,
        ngram_median(sld, 2),
        ngram_median(sld, 3),
        ngram_median(sld + sld, 2),
        ngram_median(sld + sld, 3),
    };
}

/// Random SLD over [a-z0-9-] with at least one non-hyphen character.
inline std::string random_sld(std::mt19937_64 &rng, std::size_t min_len = 1, std::size_t max_len = 30) {
    static constexpr std::string_view alphabet = "abcdefghijklmnopqrstuvwxyz0123456789-";
    std::uniform_int_distribution<std::size_t> len_dist(min_len, max_len);
    std::uniform_int_distribution<std::size_t> char_dist(0, alphabet.size() - 1);
    // Skew towards small alphabets sometimes so repeats and n-gram ties occur.
    std::uniform_int_distribution<int> mode(0, 3);
    const std::size_t alpha = mode(rng) == 0 ? 4 : alphabet.size();
    std::uniform_int_distribution<std::size_t> small_dist(0, alpha - 1);
    std::string s;
    const auto n = len_dist(rng);
    while (s.size() < n) s += alphabet[alpha == alphabet.size() ? char_dist(rng) : small_dist(rng)];
    if (s.find_first_not_of('-') == std::string::npos) s[0] = 'a';
    return s;
}

inline double entropy2(double a, double b) {
    double h = 0;
    for (double c : {a, b}) {
        if (c <= 0) continue;
        const double p = c / (a + b);
        h += -p * std::log2(p);
    }
    return h;
}

struct SplitChoice {
    int feature;
    double threshold;
    double gain;
};

/// Exhaustive (feature, midpoint) enumeration; each candidate's gain is
/// computed by a fresh scan of all rows.
inline std::optional<SplitChoice> best_split(const std::vector<std::vector<double>> &x, const std::vector<int> &y,
                                             const std::vector<std::size_t> &rows, int n_features) {
    double pos = 0;
    for (auto r : rows) pos += y[r];
    const double n = static_cast<double>(rows.size());
    const double parent = entropy2(pos, n - pos);
    std::optional<SplitChoice> best;
    for (int f = 0; f < n_features; ++f) {
        std::set<double> distinct;
        for (auto r : rows) distinct.insert(x[r][f]);
        std::vector<double> vals(distinct.begin(), distinct.end());
        for (std::size_t i = 0; i + 1 < vals.size(); ++i) {
            const double t = vals[i] + (vals[i + 1] - vals[i]) / 2;
            double lp = 0, ln = 0;
            for (auto r : rows)
                if (x[r][f] <= t) {
                    ln += 1;
                    lp += y[r];
                }
            const double rp = pos - lp, rn = n - ln;
            const double gain = parent - ln / n * entropy2(lp, ln - lp) - rn / n * entropy2(rp, rn - rp);
            if (gain > (best ? best->gain : 0.0) + 1e-12) best = SplitChoice{f, t, gain};
        }
    }
    return best;
}

struct Node {
    int feature = -1;
    double threshold = 0;
    double value = 0;
    std::unique_ptr<Node> left, right;
};

/// Unlimited-depth tree grown to purity with the exhaustive split search.
inline std::unique_ptr<Node> build_tree(const std::vector<std::vector<double>> &x, const std::vector<int> &y,
                                        const std::vector<std::size_t> &rows, int n_features) {
    auto node = std::make_unique<Node>();
    double pos = 0;
    for (auto r : rows) pos += y[r];
    node->value = pos / static_cast<double>(rows.size());
    if (pos == 0 || pos == static_cast<double>(rows.size()) || rows.size() < 2) return node;
    const auto split = best_split(x, y, rows, n_features);
    if (!split) return node;
    std::vector<std::size_t> l, r;
    for (auto row : rows) (x[row][split->feature] <= split->threshold ? l : r).push_back(row);
    node->feature = split->feature;
    node->threshold = split->threshold;
    node->left = build_tree(x, y, l, n_features);
    node->right = build_tree(x, y, r, n_features);
    return node;
}

inline double predict(const Node &node, const std::vector<double> &row) {
    if (node.feature < 0) return node.value;
    return predict(row[node.feature] <= node.threshold ? *node.left : *node.right, row);
}

/// Probability that a random positive outscores a random negative, ties 1/2.
inline double pair_auc(const std::vector<double> &scores, const std::vector<std::uint8_t> &labels) {
    double concordant = 0, pairs = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (labels[i] != 1) continue;
        for (std::size_t j = 0; j < scores.size(); ++j) {
            if (labels[j] != 0) continue;
            pairs += 1;
            if (scores[i] > scores[j]) concordant += 1;
            else if (scores[i] == scores[j]) concordant += 0.5;
        }
    }
    return concordant / pairs;
}

/// Smallest candidate threshold (among all scores, their successors and 0)
/// whose benign false-positive rate is within target.
inline double sweep_threshold(const std::vector<double> &scores, const std::vector<std::uint8_t> &labels,
                              double target) {
    std::vector<double> candidates = {0.0};
    for (double s : scores) {
        candidates.push_back(s);
        candidates.push_back(std::nextafter(s, 2.0));
    }
    std::sort(candidates.begin(), candidates.end());
    double negatives = 0;
    for (auto l : labels) negatives += l == 0;
    for (double t : candidates) {
        double fp = 0;
        for (std::size_t i = 0; i < scores.size(); ++i) fp += labels[i] == 0 && scores[i] >= t;
        if (fp / negatives <= target) return t;
    }
    return candidates.back();
}

}  // namespace oracle
