// Acceptance suite: one PASS/FAIL line per criterion; exit status 1 if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "benign_corpus.hpp"
#include "dgad/adversarial.hpp"
#include "dgad/eval.hpp"
#include "dgad/forest.hpp"
#include "dgad/ingest.hpp"
#include "dgad/lexical.hpp"
#include "oracles.hpp"

using namespace dgad;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string &what) {
        if (!ok) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
    void note(const std::string &what) { detail += (detail.empty() ? "" : "; ") + what; }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v, int digits = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

int threads() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

const std::vector<LabeledExample> &synth_42() {
    static const auto data = synth_dataset(5000, 5000, 42);
    return data;
}

const std::vector<FeatureVector> &synth_42_vectors() {
    static const auto vectors = [] {
        const FeatureContext ctx;
        std::vector<FeatureVector> out;
        for (const auto &e : synth_42()) {
            auto v = make_features(e.parsed, &e.record, ctx);
            v.label = e.label;
            out.push_back(std::move(v));
        }
        return out;
    }();
    return vectors;
}

// 1 -------------------------------------------------------------------------
Outcome lexical_oracle() {
    Outcome o;
    const auto start = Clock::now();
    std::mt19937_64 rng{20190601};
    const std::array<std::string, 8> tlds = {"com", "net", "co.uk", "biz", "top", "com.cn", "org", "de"};
    constexpr std::array<std::size_t, 11> exact = {0, 1, 2, 3, 4, 5, 6, 7, 8, 17, 18};
    double worst = 0;
    std::size_t mismatches = 0;
    for (int i = 0; i < 1000; ++i) {
        const auto sld = oracle::random_sld(rng);
        const auto &tld = tlds[rng() % tlds.size()];
        const auto got = extract_lexical(parse_domain(sld + "." + tld, SuffixList::bundled())).values();
        const auto want = oracle::lexical(sld, tld);
        for (std::size_t k = 0; k < got.size(); ++k) {
            const bool is_exact = std::find(exact.begin(), exact.end(), k) != exact.end();
            const double diff = std::abs(got[k] - want[k]);
            if (is_exact ? got[k] != want[k] : diff > 1e-9) ++mismatches;
            if (!is_exact) worst = std::max(worst, diff);
        }
    }
    const double elapsed = seconds_since(start);
    o.require(mismatches == 0, std::to_string(mismatches) + " feature mismatches");
    o.require(elapsed < 10.0, "runtime " + fmt(elapsed, 2) + " s >= 10 s");
    o.note("1000 domains x 26 features, max real diff " + fmt(worst, 12) + " (tol 1e-9), " + fmt(elapsed, 2) + " s");
    return o;
}

// 2 -------------------------------------------------------------------------
Outcome known_values() {
    Outcome o;
    const auto &psl = SuffixList::bundled();
    const auto google = extract_lexical(parse_domain("google.com", psl));
    o.require(google.domain_len == 10, "domain_len(google.com) = " + fmt(google.domain_len, 0));
    for (auto name : {"a.com", "aaaa.com", "zzzzzzzz.net", "7777.org"}) {
        const auto f = extract_lexical(parse_domain(name, psl));
        o.require(f.ent == 0 && f.gni == 0 && f.cer == 0, std::string{"ent/gni/cer nonzero for "} + name);
    }
    const auto abcd = extract_lexical(parse_domain("abcd.com", psl));
    o.require(std::abs(abcd.gni - 0.75) < 1e-12 && std::abs(abcd.cer - 0.75) < 1e-12, "gni/cer(abcd) != 0.75");
    const auto yahoo = extract_lexical(parse_domain("yahoo.com", psl));
    o.require(yahoo.gram3_cmed == ngram_median("yahooyahoo", 3) &&
                  yahoo.gram3_cmed == oracle::ngram_median("yahooyahoo", 3),
              "3gram_cmed(yahoo) does not use yahooyahoo");
    o.note("domain_len=10, gni=cer=0.75, 3gram_cmed(yahoo)=" + fmt(yahoo.gram3_cmed, 1));
    return o;
}

// 3 -------------------------------------------------------------------------
Outcome forest_oracle() {
    Outcome o;
    const FeatureSet dns{false, true, false};
    std::size_t disagreements = 0, probes = 0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        std::mt19937_64 rng{seed * 7919};
        std::uniform_int_distribution<int> coarse(0, 5);
        std::normal_distribution<double> fine(0, 1);
        std::bernoulli_distribution noise(0.1);
        Dataset d;
        for (int r = 0; r < 200; ++r) {
            std::vector<double> row(9);
            for (int c = 0; c < 9; ++c) row[c] = c % 2 ? coarse(rng) : fine(rng);
            const bool dga = (row[0] + row[1] > 2.5) != noise(rng);
            d.add(row, dga ? Label::dga : Label::benign);
        }
        TrainConfig cfg;
        cfg.n_trees = 1;
        cfg.features_per_tree = 9;
        cfg.bootstrap = false;
        cfg.seed = seed;
        const auto model = train_dataset(d, dns, cfg).model;

        std::vector<std::vector<double>> x;
        std::vector<int> y;
        for (std::size_t r = 0; r < d.rows(); ++r) {
            x.emplace_back(d.row(r).begin(), d.row(r).end());
            y.push_back(d.labels[r]);
        }
        std::vector<std::size_t> rows(d.rows());
        std::iota(rows.begin(), rows.end(), 0u);
        const auto ref = oracle::build_tree(x, y, rows, 9);
        for (const auto &row : x) {
            ++probes;
            disagreements += model.score_row(row) != oracle::predict(*ref, row);
        }
        for (int p = 0; p < 200; ++p) {
            std::vector<double> row(9);
            for (int c = 0; c < 9; ++c) row[c] = c % 2 ? coarse(rng) + 0.5 : fine(rng);
            ++probes;
            disagreements += model.score_row(row) != oracle::predict(*ref, row);
        }
    }
    const double h = entropy(3, 1);
    o.require(disagreements == 0, std::to_string(disagreements) + " prediction disagreements");
    o.require(std::abs(h - 0.8113) <= 1e-4, "entropy(3,1) = " + fmt(h, 7));
    o.note("5 datasets x 200 rows, " + std::to_string(probes) + " probes agree; entropy(3,1)=" + fmt(h, 7) +
           " (0.8113 +- 1e-4)");
    return o;
}

// 4 -------------------------------------------------------------------------
Outcome metric_oracles() {
    Outcome o;
    std::mt19937_64 rng{4242};
    double worst = 0;
    bool partial_ok = true;
    for (int trial = 0; trial < 50; ++trial) {
        const int n = std::uniform_int_distribution<int>(2, 200)(rng);
        const int levels = trial % 3 == 0 ? 5 : 100000;
        std::vector<double> scores;
        std::vector<std::uint8_t> labels;
        for (int i = 0; i < n; ++i) {
            scores.push_back(std::uniform_int_distribution<int>(0, levels)(rng) / static_cast<double>(levels));
            labels.push_back(std::bernoulli_distribution(0.5)(rng));
        }
        labels[0] = 0;
        labels[1] = 1;
        const auto roc = roc_auc(scores, labels);
        worst = std::max(worst, std::abs(roc.auc - oracle::pair_auc(scores, labels)));
        partial_ok = partial_ok && partial_auc(roc.curve, 1.0) == roc.auc;
    }
    const std::vector<double> perfect = {0.95, 0.9, 0.8, 0.3, 0.2, 0.1};
    const std::vector<std::uint8_t> inverted = {0, 0, 0, 1, 1, 1};
    const double inverted_auc = roc_auc(perfect, inverted).auc;
    o.require(worst <= 1e-9, "max |trapezoid - pairs| = " + fmt(worst, 12));
    o.require(partial_ok, "partial_auc(curve, 1.0) != auc");
    o.require(inverted_auc == 0.0, "inverted perfect separator AUC = " + fmt(inverted_auc));
    o.note("50 sets, max diff " + fmt(worst, 12) + " (tol 1e-9); inverted AUC " + fmt(inverted_auc, 1));
    return o;
}

// 5 -------------------------------------------------------------------------
Outcome end_to_end() {
    Outcome o;
    const auto start = Clock::now();
    TrainConfig cfg;
    cfg.n_trees = 100;
    cfg.target_fpr = 0.001;
    cfg.seed = 42;
    cfg.n_threads = threads();
    const FeatureSet both{false, true, true};
    const FeatureSet dns{false, true, false};
    const auto full = cross_validate(make_dataset(synth_42_vectors(), both), both, cfg, 5, 42);
    const auto dns_only = cross_validate(make_dataset(synth_42_vectors(), dns), dns, cfg, 5, 42);
    const double elapsed = seconds_since(start);
    o.require(full.tpr_at_fpr >= 0.95, "DNS+Lexical TPR@0.1%FPR " + fmt(full.tpr_at_fpr) + " < 0.95");
    o.require(full.auc >= 0.99, "DNS+Lexical AUC " + fmt(full.auc) + " < 0.99");
    o.require(full.tpr_at_fpr > dns_only.tpr_at_fpr, "TPR not above DNS-only");
    o.require(full.auc > dns_only.auc, "AUC not above DNS-only");
    o.require(elapsed < 300, "runtime " + fmt(elapsed, 1) + " s >= 300 s");
    o.note("DNS+Lexical TPR@0.1%=" + fmt(full.tpr_at_fpr, 4) + " AUC=" + fmt(full.auc, 4) +
           " AUC@0.1%=" + fmt(full.auc_at_fpr, 4) + " | DNS TPR@0.1%=" + fmt(dns_only.tpr_at_fpr, 4) +
           " AUC=" + fmt(dns_only.auc, 4) + " | " + fmt(elapsed, 1) + " s");
    return o;
}

// 6 -------------------------------------------------------------------------
Outcome robustness() {
    Outcome o;
    const auto &vectors = synth_42_vectors();
    std::vector<ParsedDomain> seeds;
    std::vector<FeatureVector> dga_pool;
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        if (synth_42()[i].label == Label::benign) seeds.push_back(synth_42()[i].parsed);
        else dga_pool.push_back(vectors[i]);
    }
    TrainConfig cfg;
    cfg.seed = 42;
    cfg.n_threads = threads();
    const FeatureSet both{false, true, true};
    const FeatureSet lexical{false, false, true};
    const auto full = train(vectors, both, cfg);
    const auto lex = train(vectors, lexical, cfg);

    AttackConfig attack;
    attack.n_domains = 1000;
    attack.n_trials = 5;
    attack.seed = 42;
    const auto full_a = robustness_eval(full, seeds, dga_pool, attack);
    const auto full_b = robustness_eval(full, seeds, dga_pool, attack);
    const auto lex_a = robustness_eval(lex, seeds, dga_pool, attack);
    const auto lex_b = robustness_eval(lex, seeds, dga_pool, attack);
    o.require(to_json(full_a).dump() == to_json(full_b).dump() && to_json(lex_a).dump() == to_json(lex_b).dump(),
              "attack reports differ across runs");
    o.require(lex_a.stddev == 0.0, "lexical-only stddev " + fmt(lex_a.stddev, 12) + " != 0");
    o.require(full_a.mean >= lex_a.mean, "DNS+Lexical rate below lexical-only");
    o.note("DNS+Lexical " + fmt(100 * full_a.mean, 2) + "% +- " + fmt(100 * full_a.stddev, 2) + "%, Lexical " +
           fmt(100 * lex_a.mean, 2) + "% +- " + fmt(100 * lex_a.stddev, 2) + "%");
    return o;
}

// 7 -------------------------------------------------------------------------
Outcome benign_filter_corpus() {
    Outcome o;
    const auto &psl = SuffixList::bundled();
    const auto blacklist = DomainList::parse(corpus_blacklist, psl);
    const ResolutionHistory history = [](std::string_view fqdn) { return fqdn != corpus_unresolved; };
    int disagreements = 0;
    std::set<std::string_view> targeted;
    for (const auto &entry : benign_corpus()) {
        const auto report = benign_filter(entry.name, psl, blacklist, history);
        if (report.passed() != entry.benign) {
            ++disagreements;
            o.require(false, std::string{entry.name});
        }
        if (!entry.benign) targeted.insert(entry.target);
    }
    o.require(targeted.size() == 10, "corpus targets " + std::to_string(targeted.size()) + " distinct rules");
    o.note("30 domains, " + std::to_string(disagreements) + " disagreements");
    return o;
}

// 8 -------------------------------------------------------------------------
Outcome determinism() {
    Outcome o;
    std::vector<FeatureVector> subset(synth_42_vectors().begin(), synth_42_vectors().begin() + 2000);
    const FeatureSet both{false, true, true};
    TrainConfig cfg;
    cfg.n_trees = 40;
    cfg.seed = 8;
    cfg.n_threads = 1;
    const auto a = serialize(train(subset, both, cfg));
    const auto b = serialize(train(subset, both, cfg));
    cfg.n_threads = 4;
    const auto c = serialize(train(subset, both, cfg));
    o.require(a == b, "bytes differ across runs");
    o.require(a == c, "bytes differ across thread counts");

    const auto model = deserialize(a);
    o.require(serialize(model) == a, "model re-serialization differs");
    const auto original = deserialize(b);
    std::size_t score_diffs = 0;
    for (std::size_t i = 2000; i < 2100; ++i) {
        const auto &v = synth_42_vectors()[i];
        score_diffs += score(model, v) != score(original, v);
    }
    o.require(score_diffs == 0, "round-tripped model scores differ");

    std::vector<DnsRecord> records;
    for (std::size_t i = 0; i < 500; ++i) records.push_back(synth_42()[i].record);
    records[1].qtype = 255;
    std::ostringstream first;
    write_pdns(first, records);
    std::istringstream in{first.str()};
    const auto back = read_pdns(in);
    std::ostringstream second;
    write_pdns(second, back.records);
    o.require(back.records == records && first.str() == second.str(), "pDNS JSONL round-trip differs");
    o.note(std::to_string(a.size()) + " model bytes identical (runs, 1 vs 4 threads); model + 500-record JSONL round-trips exact");
    return o;
}

// 9 -------------------------------------------------------------------------
Outcome ttl_medians() {
    Outcome o;
    std::string seen;
    for (auto [nb, nd, seed] : {std::tuple{1001, 1001, 1}, std::tuple{5001, 4999, 42}, std::tuple{3, 7, 9},
                                std::tuple{1, 1, 3}}) {
        const auto data = synth_dataset(nb, nd, seed);
        for (Label label : {Label::benign, Label::dga}) {
            std::vector<std::int64_t> ttls;
            for (const auto &e : data)
                if (e.label == label) ttls.push_back(e.record.ttl);
            std::sort(ttls.begin(), ttls.end());
            const auto median = ttls[ttls.size() / 2];
            const auto want = label == Label::benign ? synth_benign_median_ttl : synth_dga_median_ttl;
            o.require(median == want, "median " + std::to_string(median) + " for n=" + std::to_string(ttls.size()));
        }
    }
    o.note("benign median 3600 s, DGA median 900 s for n in {1,3,7,1001,4999,5001}");
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"lexical oracle equivalence", lexical_oracle},
        {"known-value checks", known_values},
        {"forest oracle", forest_oracle},
        {"metric oracles", metric_oracles},
        {"end-to-end synthetic reproduction", end_to_end},
        {"robustness protocol", robustness},
        {"benign filter corpus", benign_filter_corpus},
        {"determinism and round-trips", determinism},
        {"synthetic TTL medians", ttl_medians},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception &e) {
            o.pass = false;
            o.detail = std::string{"exception: "} + e.what();
        }
        failures += !o.pass;
        std::printf("[%s] %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
