#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include <nlohmann/json.hpp>

#include "dgad/core.hpp"
#include "dgad/error.hpp"
#include "dgad/features.hpp"
#include "dgad/forest.hpp"

namespace dgad {

struct AttackConfig {
    std::size_t n_domains = 1000;
    int n_trials = 5;
    std::uint64_t seed = 0;
    std::string generator = "char-substitution";
    std::size_t mutation_count = 2;

    void validate() const {
        if (n_domains == 0) throw Error{ErrorKind::InvalidConfig, "n_domains must be > 0"};
        if (n_trials <= 0) throw Error{ErrorKind::InvalidConfig, "n_trials must be > 0"};
    }
};

inline constexpr std::string_view substitution_alphabet = "abcdefghijklmnopqrstuvwxyz0123456789";

/// Replaces sld[positions[i]] with replacements[i]; the TLD is kept.
inline ParsedDomain substitute(const ParsedDomain &seed, std::span<const std::size_t> positions,
                               std::span<const char> replacements, const SuffixList &suffixes) {
    std::string sld = seed.sld();
    for (std::size_t i = 0; i < positions.size(); ++i) sld.at(positions[i]) = replacements[i];
    return parse_domain(sld + "." + seed.tld(), suffixes);
}

/// Evasive-domain strategy: (seed pool, config, suffixes) -> domains.
using EvasionGenerator =
    std::function<std::vector<ParsedDomain>(std::span<const ParsedDomain>, const AttackConfig &, const SuffixList &)>;

/// Each output is a uniformly chosen seed with `mutation_count` distinct SLD
/// positions replaced by a different character from [a-z0-9]. Outputs never
/// coincide with a seed.
inline std::vector<ParsedDomain> char_substitution(std::span<const ParsedDomain> seeds, const AttackConfig &cfg,
                                                   const SuffixList &suffixes) {
    if (seeds.empty()) throw Error{ErrorKind::InvalidConfig, "empty seed pool"};
    for (const auto &s : seeds) {
        if (s.sld().size() <= cfg.mutation_count) {
            throw Error{ErrorKind::SeedTooShort, "seed '" + s.domain() + "' has SLD length <= " +
                                                     std::to_string(cfg.mutation_count)};
        }
    }
    std::unordered_set<std::string> pool;
    for (const auto &s : seeds) pool.insert(s.domain());

    auto rng = derive_rng(cfg.seed, 0xc4a7b07ULL);
    std::uniform_int_distribution<std::size_t> pick_seed(0, seeds.size() - 1);
    std::uniform_int_distribution<std::size_t> pick_char(0, substitution_alphabet.size() - 2);
    std::vector<ParsedDomain> out;
    out.reserve(cfg.n_domains);
    while (out.size() < cfg.n_domains) {
        const auto &seed = seeds[pick_seed(rng)];
        const auto &sld = seed.sld();
        std::vector<std::size_t> all(sld.size());
        std::iota(all.begin(), all.end(), 0u);
        std::vector<std::size_t> positions;
        std::sample(all.begin(), all.end(), std::back_inserter(positions), cfg.mutation_count, rng);
        std::vector<char> replacements;
        for (auto pos : positions) {
            // Draw from the 35 characters that differ from the original.
            const auto original = substitution_alphabet.find(sld[pos]);
            auto idx = pick_char(rng);
            if (original != std::string_view::npos && idx >= original) ++idx;
            replacements.push_back(substitution_alphabet[idx]);
        }
        auto candidate = substitute(seed, positions, replacements, suffixes);
        if (pool.contains(candidate.domain())) continue;
        out.push_back(std::move(candidate));
    }
    return out;
}

inline EvasionGenerator find_generator(std::string_view name) {
    if (name == "char-substitution") return char_substitution;
    throw Error{ErrorKind::InvalidConfig, "unknown evasion generator '" + std::string{name} + "'"};
}

inline std::vector<ParsedDomain> generate_evasive(std::span<const ParsedDomain> seeds, const AttackConfig &cfg,
                                                  const SuffixList &suffixes = SuffixList::bundled()) {
    cfg.validate();
    return find_generator(cfg.generator)(seeds, cfg, suffixes);
}

/// Optional external score lookup keyed on SLD.TLD.
using ScoreLookup = std::function<std::optional<double>(const std::string &domain)>;

/// Fresh lexical features per adversarial domain, side information copied
/// from a without-replacement sample of `dga_pool` drawn with `trial_seed`.
inline std::vector<FeatureVector> pair_sideinfo(std::span<const ParsedDomain> adversarial,
                                                std::span<const FeatureVector> dga_pool, std::uint64_t trial_seed,
                                                const LexicalOptions &lexical = {}, const ScoreLookup &scores = {}) {
    if (dga_pool.size() < adversarial.size()) {
        throw Error{ErrorKind::PoolTooSmall, "side-information pool has " + std::to_string(dga_pool.size()) +
                                                 " rows for " + std::to_string(adversarial.size()) + " domains"};
    }
    std::vector<std::size_t> donors(dga_pool.size());
    std::iota(donors.begin(), donors.end(), 0u);
    auto rng = derive_rng(trial_seed, 0x5a3b1eULL);
    // Partial Fisher-Yates: the first n entries are a uniform sample.
    for (std::size_t i = 0; i < adversarial.size(); ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, donors.size() - 1);
        std::swap(donors[i], donors[pick(rng)]);
    }

    std::vector<FeatureVector> out;
    out.reserve(adversarial.size());
    for (std::size_t i = 0; i < adversarial.size(); ++i) {
        const auto &donor = dga_pool[donors[i]];
        if (!donor.sideinfo) throw Error{ErrorKind::SchemaMismatch, "pool row without side information"};
        FeatureVector v;
        v.lexical = extract_lexical(adversarial[i], lexical);
        v.sideinfo = donor.sideinfo;
        if (scores) v.ext_score = scores(adversarial[i].domain());
        v.label = Label::dga;
        out.push_back(std::move(v));
    }
    return out;
}

struct TrialResult {
    std::size_t flagged = 0;
    double rate = 0;
    std::vector<std::string> flagged_domains;
};

struct RobustnessReport {
    AttackConfig config;
    std::string model_features;
    std::vector<TrialResult> trials;
    double mean = 0;
    double stddev = 0;  // population
};

inline std::uint64_t trial_seed(std::uint64_t seed, int trial) {
    return derive_rng(seed, 0x7e1a1000ULL + static_cast<std::uint64_t>(trial))();
}

/// Generates the evasive list once, then per trial pairs it with freshly
/// sampled side information and records the flagged fraction.
inline RobustnessReport robustness_eval(const ForestModel &model, std::span<const ParsedDomain> seeds,
                                        std::span<const FeatureVector> dga_pool, const AttackConfig &cfg,
                                        const SuffixList &suffixes = SuffixList::bundled(),
                                        const ScoreLookup &scores = {}) {
    const auto domains = generate_evasive(seeds, cfg, suffixes);
    LexicalOptions lexical;
    lexical.probability_basis = model.probability_basis;

    RobustnessReport report;
    report.config = cfg;
    report.model_features = model.feature_set.name();
    for (int t = 0; t < cfg.n_trials; ++t) {
        const auto vectors = pair_sideinfo(domains, dga_pool, trial_seed(cfg.seed, t), lexical, scores);
        TrialResult trial;
        for (std::size_t i = 0; i < vectors.size(); ++i) {
            if (model.flags(score(model, vectors[i]))) {
                ++trial.flagged;
                trial.flagged_domains.push_back(domains[i].domain());
            }
        }
        trial.rate = static_cast<double>(trial.flagged) / static_cast<double>(domains.size());
        report.trials.push_back(std::move(trial));
    }

    // Integer moments keep identical trials at exactly zero spread.
    double sum = 0, sum_sq = 0;
    for (const auto &t : report.trials) {
        sum += static_cast<double>(t.flagged);
        sum_sq += static_cast<double>(t.flagged) * static_cast<double>(t.flagged);
    }
    const double trials = cfg.n_trials;
    const double n = static_cast<double>(domains.size());
    report.mean = sum / (trials * n);
    const double spread = trials * sum_sq - sum * sum;
    report.stddev = spread > 0 ? std::sqrt(spread) / (trials * n) : 0.0;
    return report;
}

inline nlohmann::ordered_json to_json(const RobustnessReport &r) {
    nlohmann::ordered_json rates = nlohmann::ordered_json::array();
    nlohmann::ordered_json flagged = nlohmann::ordered_json::array();
    for (const auto &t : r.trials) {
        rates.push_back(t.rate);
        flagged.push_back(t.flagged);
    }
    return {{"model_features", r.model_features},
            {"n_domains", r.config.n_domains},
            {"n_trials", r.config.n_trials},
            {"seed", r.config.seed},
            {"generator", r.config.generator},
            {"mutation_count", r.config.mutation_count},
            {"trial_rates", std::move(rates)},
            {"trial_flagged", std::move(flagged)},
            {"mean", r.mean},
            {"stddev", r.stddev}};
}

}  // namespace dgad
