#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <nlohmann/json.hpp>

#include "dgad/core.hpp"
#include "dgad/error.hpp"
#include "dgad/features.hpp"
#include "dgad/forest.hpp"

namespace dgad {

struct Confusion {
    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;

    double tpr() const { return tp + fn == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fn); }
    double fpr() const { return fp + tn == 0 ? 0.0 : static_cast<double>(fp) / static_cast<double>(fp + tn); }
};

/// score >= threshold is a dga verdict.
inline Confusion confusion(std::span<const double> scores, std::span<const std::uint8_t> labels, double threshold) {
    Confusion c;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        const bool flagged = scores[i] >= threshold;
        if (labels[i]) flagged ? ++c.tp : ++c.fn;
        else flagged ? ++c.fp : ++c.tn;
    }
    return c;
}

struct RocPoint {
    double fpr = 0;
    double tpr = 0;
    double threshold = 0;  // lowest score flagged at this point; +inf for (0,0)
};

struct RocCurve {
    std::vector<RocPoint> points;
};

struct RocResult {
    RocCurve curve;
    double auc = 0;
};

/// Threshold sweep over distinct scores in descending order; tied scores move
/// the curve diagonally in one step. AUC by the trapezoid rule.
inline RocResult roc_auc(std::span<const double> scores, std::span<const std::uint8_t> labels) {
    const auto n_pos = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
    const auto n_neg = labels.size() - n_pos;
    if (n_pos == 0 || n_neg == 0) throw Error{ErrorKind::SingleClass, "ROC needs both classes"};

    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

    RocResult result;
    auto &pts = result.curve.points;
    pts.push_back({0.0, 0.0, std::numeric_limits<double>::infinity()});
    std::size_t tp = 0, fp = 0;
    for (std::size_t i = 0; i < order.size();) {
        const double s = scores[order[i]];
        while (i < order.size() && scores[order[i]] == s) {
            labels[order[i]] ? ++tp : ++fp;
            ++i;
        }
        pts.push_back({static_cast<double>(fp) / static_cast<double>(n_neg),
                       static_cast<double>(tp) / static_cast<double>(n_pos), s});
    }
    double auc = 0;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        auc += (pts[i].fpr - pts[i - 1].fpr) * (pts[i].tpr + pts[i - 1].tpr) / 2.0;
    }
    result.auc = auc;
    return result;
}

/// Trapezoid integral of the curve over [0, fpr_max], interpolating linearly
/// at fpr_max, divided by fpr_max.
inline double partial_auc(const RocCurve &curve, double fpr_max) {
    if (!(fpr_max > 0 && fpr_max <= 1)) throw Error{ErrorKind::InvalidConfig, "fpr_max must lie in (0,1]"};
    const auto &pts = curve.points;
    double area = 0;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        const auto &a = pts[i - 1];
        const auto &b = pts[i];
        if (a.fpr >= fpr_max) break;
        if (b.fpr <= fpr_max) {
            area += (b.fpr - a.fpr) * (a.tpr + b.tpr) / 2.0;
        } else {
            const double t = (fpr_max - a.fpr) / (b.fpr - a.fpr);
            const double tpr_at = a.tpr + t * (b.tpr - a.tpr);
            area += (fpr_max - a.fpr) * (a.tpr + tpr_at) / 2.0;
            break;
        }
    }
    return area / fpr_max;
}

/// Highest TPR among curve points whose FPR does not exceed fpr_max.
inline double tpr_at_fpr(const RocCurve &curve, double fpr_max) {
    double best = 0;
    for (const auto &p : curve.points) {
        if (p.fpr <= fpr_max) best = std::max(best, p.tpr);
    }
    return best;
}

/// Stratified assignment: each class is shuffled with `seed` and dealt
/// round-robin, so per-class fold sizes differ by at most one.
inline std::vector<int> stratified_folds(std::span<const std::uint8_t> labels, int k, std::uint64_t seed) {
    if (k < 2) throw Error{ErrorKind::InvalidConfig, "need at least 2 folds"};
    std::vector<int> fold(labels.size(), -1);
    for (std::uint8_t cls : {std::uint8_t{0}, std::uint8_t{1}}) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (labels[i] == cls) idx.push_back(i);
        }
        if (idx.size() < static_cast<std::size_t>(k)) {
            throw Error{ErrorKind::TooFewExamples, "class " + std::to_string(cls) + " has " +
                                                       std::to_string(idx.size()) + " examples for " +
                                                       std::to_string(k) + " folds"};
        }
        auto rng = derive_rng(seed, 0x5f0dULL + cls);
        std::shuffle(idx.begin(), idx.end(), rng);
        for (std::size_t j = 0; j < idx.size(); ++j) fold[idx[j]] = static_cast<int>(j % static_cast<std::size_t>(k));
    }
    return fold;
}

struct FoldMetrics {
    int fold = 0;
    std::size_t n_train = 0;
    std::size_t n_test = 0;
    double auc = 0;
    double auc_at_fpr = 0;
    double tpr_at_fpr = 0;
    double threshold = 0;            // calibrated on the training fold
    double tpr_at_threshold = 0;     // test-fold rates at that threshold
    double fpr_at_threshold = 0;
    RocCurve roc;
};

struct EvalReport {
    std::string config_id;
    double fpr_max = 0.001;
    double auc = 0;
    double auc_at_fpr = 0;
    double tpr_at_fpr = 0;
    double tpr_at_threshold = 0;
    double fpr_at_threshold = 0;
    std::vector<FoldMetrics> folds;
};

/// Stratified k-fold CV. Each fold trains (and calibrates on out-of-bag
/// rows) using training-fold rows only; metrics are averaged over folds.
inline EvalReport cross_validate(const Dataset &data, const FeatureSet &set, const TrainConfig &cfg, int k,
                                 std::uint64_t seed, const FeatureContext &ctx = {}) {
    const auto folds = stratified_folds(data.labels, k, seed);
    EvalReport report;
    report.config_id = set.name();
    report.fpr_max = cfg.target_fpr;
    for (int f = 0; f < k; ++f) {
        Dataset train_part, test_part;
        train_part.cols = test_part.cols = data.cols;
        for (std::size_t r = 0; r < data.rows(); ++r) {
            auto &dst = folds[r] == f ? test_part : train_part;
            dst.add(data.row(r), label_from_int(data.labels[r]));
        }
        TrainConfig fold_cfg = cfg;
        fold_cfg.seed = derive_rng(cfg.seed, 0xf01dULL + static_cast<std::uint64_t>(f))();
        const auto model = train_dataset(train_part, set, fold_cfg, ctx).model;

        std::vector<double> scores(test_part.rows());
        for (std::size_t r = 0; r < test_part.rows(); ++r) scores[r] = model.score_row(test_part.row(r));
        auto roc = roc_auc(scores, test_part.labels);
        const auto at_threshold = confusion(scores, test_part.labels, model.threshold);

        FoldMetrics m;
        m.fold = f;
        m.n_train = train_part.rows();
        m.n_test = test_part.rows();
        m.auc = roc.auc;
        m.auc_at_fpr = partial_auc(roc.curve, cfg.target_fpr);
        m.tpr_at_fpr = tpr_at_fpr(roc.curve, cfg.target_fpr);
        m.threshold = model.threshold;
        m.tpr_at_threshold = at_threshold.tpr();
        m.fpr_at_threshold = at_threshold.fpr();
        m.roc = std::move(roc.curve);
        report.folds.push_back(std::move(m));
    }
    for (const auto &m : report.folds) {
        report.auc += m.auc / k;
        report.auc_at_fpr += m.auc_at_fpr / k;
        report.tpr_at_fpr += m.tpr_at_fpr / k;
        report.tpr_at_threshold += m.tpr_at_threshold / k;
        report.fpr_at_threshold += m.fpr_at_threshold / k;
    }
    return report;
}

inline nlohmann::ordered_json to_json(const EvalReport &r) {
    nlohmann::ordered_json folds = nlohmann::ordered_json::array();
    for (const auto &m : r.folds) {
        folds.push_back({{"fold", m.fold},
                         {"n_train", m.n_train},
                         {"n_test", m.n_test},
                         {"auc", m.auc},
                         {"auc_at_fpr", m.auc_at_fpr},
                         {"tpr_at_fpr", m.tpr_at_fpr},
                         {"threshold", m.threshold},
                         {"tpr_at_threshold", m.tpr_at_threshold},
                         {"fpr_at_threshold", m.fpr_at_threshold}});
    }
    return {{"config", r.config_id},
            {"fpr_max", r.fpr_max},
            {"auc", r.auc},
            {"auc_at_fpr", r.auc_at_fpr},
            {"tpr_at_fpr", r.tpr_at_fpr},
            {"tpr_at_threshold", r.tpr_at_threshold},
            {"fpr_at_threshold", r.fpr_at_threshold},
            {"folds", std::move(folds)}};
}

/// fold,fpr,tpr,threshold rows for external plotting.
inline std::string roc_csv(const EvalReport &r) {
    std::string out = "fold,fpr,tpr,threshold\n";
    for (const auto &m : r.folds) {
        for (const auto &p : m.roc.points) {
            out += std::to_string(m.fold) + "," + nlohmann::json(p.fpr).dump() + "," + nlohmann::json(p.tpr).dump() +
                   "," + (std::isinf(p.threshold) ? std::string{"inf"} : nlohmann::json(p.threshold).dump()) + "\n";
        }
    }
    return out;
}

struct AuditCounts {
    std::size_t total = 0;
    std::size_t flagged = 0;
    std::size_t in_blacklist = 0;
    std::size_t in_whitelist = 0;
    std::size_t flagged_blacklist = 0;
    std::size_t flagged_whitelist = 0;
    std::size_t blacklist_whitelist = 0;
};

struct AuditReport {
    AuditCounts raw;
    AuditCounts dedup;  // one entry per SLD.TLD; flagged if any occurrence is
};

struct AuditItem {
    ParsedDomain domain;
    FeatureVector features;
};

/// Streaming audit accumulator: feed items one at a time, read the report.
class Auditor {
public:
    Auditor(const ForestModel &model, const std::unordered_set<std::string> &blacklist,
            const std::unordered_set<std::string> &whitelist)
        : model_{model}, blacklist_{blacklist}, whitelist_{whitelist} {}

    /// Returns the verdict for this item.
    bool add(const ParsedDomain &domain, const FeatureVector &v) {
        const bool flagged = model_.flags(score(model_, v));
        const std::string key = domain.domain();
        const bool black = blacklist_.contains(key);
        const bool white = whitelist_.contains(key);
        count(report_.raw, flagged, black, white);
        auto [it, inserted] = seen_.try_emplace(key, flagged);
        if (!inserted) it->second = it->second || flagged;
        return flagged;
    }

    AuditReport report() const {
        AuditReport out = report_;
        out.dedup = {};
        for (const auto &[key, flagged] : seen_) {
            count(out.dedup, flagged, blacklist_.contains(key), whitelist_.contains(key));
        }
        return out;
    }

private:
    static void count(AuditCounts &c, bool flagged, bool black, bool white) {
        ++c.total;
        c.flagged += flagged;
        c.in_blacklist += black;
        c.in_whitelist += white;
        c.flagged_blacklist += flagged && black;
        c.flagged_whitelist += flagged && white;
        c.blacklist_whitelist += black && white;
    }

    const ForestModel &model_;
    const std::unordered_set<std::string> &blacklist_;
    const std::unordered_set<std::string> &whitelist_;
    AuditReport report_;
    std::unordered_map<std::string, bool> seen_;
};

inline AuditReport audit(std::span<const AuditItem> items, const ForestModel &model,
                         const std::unordered_set<std::string> &blacklist,
                         const std::unordered_set<std::string> &whitelist) {
    Auditor auditor{model, blacklist, whitelist};
    for (const auto &item : items) auditor.add(item.domain, item.features);
    return auditor.report();
}

inline nlohmann::ordered_json to_json(const AuditCounts &c) {
    return {{"total", c.total},
            {"flagged", c.flagged},
            {"flagged_in_blacklist", c.flagged_blacklist},
            {"flagged_in_whitelist", c.flagged_whitelist},
            {"in_blacklist", c.in_blacklist},
            {"in_whitelist", c.in_whitelist},
            {"blacklist_and_whitelist", c.blacklist_whitelist}};
}

inline nlohmann::ordered_json to_json(const AuditReport &r) {
    return {{"raw", to_json(r.raw)}, {"dedup", to_json(r.dedup)}};
}

}  // namespace dgad
