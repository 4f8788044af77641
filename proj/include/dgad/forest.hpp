#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "dgad/error.hpp"
#include "dgad/features.hpp"
#include "dgad/sideinfo.hpp"

namespace dgad {

/// Row-major feature matrix with one binary label per row.
struct Dataset {
    std::size_t cols = 0;
    std::vector<double> values;
    std::vector<std::uint8_t> labels;  // 1 = dga

    std::size_t rows() const { return labels.size(); }
    double at(std::size_t row, std::size_t col) const { return values[row * cols + col]; }
    std::span<const double> row(std::size_t r) const { return {values.data() + r * cols, cols}; }

    void add(std::span<const double> row, Label label) {
        if (cols == 0 && values.empty()) cols = row.size();
        if (row.size() != cols) throw Error{ErrorKind::SchemaMismatch, "row width differs from dataset"};
        values.insert(values.end(), row.begin(), row.end());
        labels.push_back(static_cast<std::uint8_t>(to_int(label)));
    }
};

/// Rows of `vectors` restricted to `set`; every vector must carry a label.
inline Dataset make_dataset(std::span<const FeatureVector> vectors, const FeatureSet &set) {
    Dataset data;
    data.cols = set.width();
    std::vector<double> row;
    for (const auto &v : vectors) {
        if (!v.label) throw Error{ErrorKind::SchemaMismatch, "training vector without label"};
        row.clear();
        set.append_row(v, row);
        data.add(row, *v.label);
    }
    return data;
}

/// Shannon entropy in bits of a two-class count pair; 0·log 0 = 0.
inline double entropy(double positives, double negatives) {
    const double n = positives + negatives;
    if (n <= 0) return 0.0;
    double h = 0.0;
    for (double c : {positives, negatives}) {
        if (c > 0) {
            const double p = c / n;
            h -= p * std::log2(p);
        }
    }
    return h;
}

/// Gains closer than this are ties.
inline constexpr double gain_tolerance = 1e-12;

/// Threshold between two consecutive distinct values a < b; always
/// satisfies a <= t < b so "x <= t" routes a left and b right.
inline double split_midpoint(double a, double b) {
    const double mid = a + (b - a) / 2.0;
    return mid < b ? mid : a;
}

inline double information_gain(double parent_pos, double parent_n, double left_pos, double left_n) {
    const double right_pos = parent_pos - left_pos;
    const double right_n = parent_n - left_n;
    return entropy(parent_pos, parent_n - parent_pos) -
           (left_n / parent_n) * entropy(left_pos, left_n - left_pos) -
           (right_n / parent_n) * entropy(right_pos, right_n - right_pos);
}

struct Split {
    int feature = -1;
    double threshold = 0;
    double gain = 0;
};

/// Best information-gain split of `rows` over `features`, thresholds at
/// midpoints of consecutive distinct values. Ties go to the lowest feature
/// index, then the lowest threshold. Returns nullopt when no split gains.
inline std::optional<Split> best_split(const Dataset &data, std::span<const std::size_t> rows,
                                       std::span<const int> features) {
    if (rows.size() < 2) return std::nullopt;
    std::vector<int> sorted_features(features.begin(), features.end());
    std::sort(sorted_features.begin(), sorted_features.end());

    double total_pos = 0;
    for (auto r : rows) total_pos += data.labels[r];
    const double n = static_cast<double>(rows.size());

    std::optional<Split> best;
    double best_gain = 0.0;
    std::vector<std::size_t> order(rows.begin(), rows.end());
    for (int f : sorted_features) {
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return data.at(a, f) < data.at(b, f); });
        double left_pos = 0;
        for (std::size_t i = 0; i + 1 < order.size(); ++i) {
            left_pos += data.labels[order[i]];
            const double a = data.at(order[i], f);
            const double b = data.at(order[i + 1], f);
            if (!(a < b)) continue;
            const double gain = information_gain(total_pos, n, left_pos, static_cast<double>(i + 1));
            if (gain > best_gain + gain_tolerance) {
                best_gain = gain;
                best = Split{f, split_midpoint(a, b), gain};
            }
        }
    }
    return best;
}

struct TreeNode {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0;
    int left = -1;
    int right = -1;
    double value = 0;  // leaf: fraction of dga training samples
    std::uint32_t count = 0;

    bool is_leaf() const { return feature < 0; }
    bool operator==(const TreeNode &) const = default;
};

struct Tree {
    std::vector<int> features;  // schema indices this tree may split on
    std::vector<TreeNode> nodes;  // nodes[0] is the root; children follow parents

    double predict(std::span<const double> row) const {
        int id = 0;
        while (!nodes[id].is_leaf()) {
            const auto &node = nodes[id];
            id = row[node.feature] <= node.threshold ? node.left : node.right;
        }
        return nodes[id].value;
    }

    bool operator==(const Tree &) const = default;
};

struct TrainConfig {
    int n_trees = 100;
    int max_depth = 0;  // 0 = unlimited
    int min_samples_split = 2;
    int features_per_tree = 0;     // 0 = max(1, floor(sqrt(d)))
    double feature_fraction = 0;   // > 0 overrides features_per_tree
    bool bootstrap = true;
    std::uint64_t seed = 0;
    double target_fpr = 0.001;
    int n_threads = 1;  // not persisted; does not affect the model

    int resolve_features(std::size_t d) const {
        const int width = static_cast<int>(d);
        int k;
        if (feature_fraction > 0) k = static_cast<int>(std::floor(feature_fraction * width));
        else if (features_per_tree > 0) k = features_per_tree;
        else k = static_cast<int>(std::floor(std::sqrt(static_cast<double>(width))));
        return std::clamp(k, 1, std::max(width, 1));
    }

    void validate(std::size_t d) const {
        if (n_trees < 1) throw Error{ErrorKind::InvalidConfig, "n_trees must be >= 1"};
        if (min_samples_split < 2) throw Error{ErrorKind::InvalidConfig, "min_samples_split must be >= 2"};
        if (max_depth < 0) throw Error{ErrorKind::InvalidConfig, "max_depth must be >= 0"};
        if (feature_fraction < 0 || feature_fraction > 1) {
            throw Error{ErrorKind::InvalidConfig, "feature_fraction must lie in [0,1]"};
        }
        if (features_per_tree < 0 || static_cast<std::size_t>(features_per_tree) > d) {
            throw Error{ErrorKind::InvalidConfig, "features_per_tree must lie in [1,d]"};
        }
        if (!(target_fpr > 0 && target_fpr < 1) && target_fpr != 1.0) {
            throw Error{ErrorKind::InvalidConfig, "target_fpr must lie in (0,1]"};
        }
    }
};

/// Independent generator for stream `index` of `seed`.
inline std::mt19937_64 derive_rng(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    return std::mt19937_64{seq};
}

/// Smallest threshold t with FPR(t) <= target_fpr where a score >= t is
/// flagged. May exceed 1 when the benign score that must be excluded is 1.
inline double calibrate_threshold(std::span<const double> scores, std::span<const std::uint8_t> labels,
                                  double target_fpr) {
    std::vector<double> benign;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (labels[i] == 0) benign.push_back(scores[i]);
    }
    if (benign.empty()) throw Error{ErrorKind::NoNegatives, "no benign scores to calibrate on"};
    const auto allowed = static_cast<std::size_t>(std::floor(target_fpr * static_cast<double>(benign.size()) + 1e-9));
    if (allowed >= benign.size()) return 0.0;
    std::sort(benign.begin(), benign.end(), std::greater<>{});
    return std::nextafter(benign[allowed], std::numeric_limits<double>::infinity());
}

namespace detail {

/// Grows one tree over `slots` (row ids, duplicates allowed) using per-feature
/// presorted index arrays that are stably partitioned at every split.
class TreeGrower {
public:
    TreeGrower(const Dataset &data, const TrainConfig &cfg, std::vector<std::size_t> slots,
               std::vector<int> features)
        : data_{data}, cfg_{cfg}, slots_{std::move(slots)}, features_{std::move(features)} {
        const std::size_t n = slots_.size();
        orders_.resize(features_.size());
        for (std::size_t k = 0; k < features_.size(); ++k) {
            auto &order = orders_[k];
            order.resize(n);
            std::iota(order.begin(), order.end(), 0u);
            const int f = features_[k];
            std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
                return data_.at(slots_[a], f) < data_.at(slots_[b], f);
            });
        }
        goes_left_.resize(n);
        scratch_.resize(n);
    }

    Tree grow() {
        Tree tree;
        tree.features = features_;
        build(tree, 0, slots_.size(), 0);
        return tree;
    }

private:
    double label(std::uint32_t slot) const { return data_.labels[slots_[slot]]; }
    double value(std::uint32_t slot, int f) const { return data_.at(slots_[slot], f); }

    int build(Tree &tree, std::size_t begin, std::size_t end, int depth) {
        const int id = static_cast<int>(tree.nodes.size());
        tree.nodes.emplace_back();
        const std::size_t n = end - begin;
        double pos = 0;
        // Any order array lists the node's slots.
        const auto &any = orders_.front();
        for (std::size_t i = begin; i < end; ++i) pos += label(any[i]);

        const bool pure = pos == 0 || pos == static_cast<double>(n);
        const bool depth_limited = cfg_.max_depth > 0 && depth >= cfg_.max_depth;
        std::optional<Split> split;
        if (!pure && !depth_limited && n >= static_cast<std::size_t>(cfg_.min_samples_split)) {
            split = find_split(begin, end, pos);
        }
        if (!split) {
            auto &leaf = tree.nodes[id];
            leaf.value = pos / static_cast<double>(n);
            leaf.count = static_cast<std::uint32_t>(n);
            return id;
        }

        const std::size_t n_left = partition(begin, end, *split);
        const int left = build(tree, begin, begin + n_left, depth + 1);
        const int right = build(tree, begin + n_left, end, depth + 1);
        auto &node = tree.nodes[id];
        node.feature = split->feature;
        node.threshold = split->threshold;
        node.left = left;
        node.right = right;
        node.count = static_cast<std::uint32_t>(n);
        node.value = pos / static_cast<double>(n);
        return id;
    }

    std::optional<Split> find_split(std::size_t begin, std::size_t end, double pos) const {
        // Features are visited in ascending schema index so strict improvement
        // keeps the lowest index, then the lowest threshold.
        std::vector<std::size_t> by_index(features_.size());
        std::iota(by_index.begin(), by_index.end(), 0u);
        std::sort(by_index.begin(), by_index.end(),
                  [&](std::size_t a, std::size_t b) { return features_[a] < features_[b]; });

        const double n = static_cast<double>(end - begin);
        std::optional<Split> best;
        double best_gain = 0.0;
        for (std::size_t k : by_index) {
            const int f = features_[k];
            const auto &order = orders_[k];
            double left_pos = 0;
            for (std::size_t i = begin; i + 1 < end; ++i) {
                left_pos += label(order[i]);
                const double a = value(order[i], f);
                const double b = value(order[i + 1], f);
                if (!(a < b)) continue;
                const double gain = information_gain(pos, n, left_pos, static_cast<double>(i + 1 - begin));
                if (gain > best_gain + gain_tolerance) {
                    best_gain = gain;
                    best = Split{f, split_midpoint(a, b), gain};
                }
            }
        }
        return best;
    }

    std::size_t partition(std::size_t begin, std::size_t end, const Split &split) {
        std::size_t n_left = 0;
        const auto &any = orders_.front();
        for (std::size_t i = begin; i < end; ++i) {
            const auto slot = any[i];
            const bool left = value(slot, split.feature) <= split.threshold;
            goes_left_[slot] = left;
            n_left += left;
        }
        for (auto &order : orders_) {
            std::size_t l = begin, r = 0;
            for (std::size_t i = begin; i < end; ++i) {
                const auto slot = order[i];
                if (goes_left_[slot]) order[l++] = slot;
                else scratch_[r++] = slot;
            }
            std::copy(scratch_.begin(), scratch_.begin() + static_cast<std::ptrdiff_t>(r),
                      order.begin() + static_cast<std::ptrdiff_t>(l));
        }
        return n_left;
    }

    const Dataset &data_;
    const TrainConfig &cfg_;
    std::vector<std::size_t> slots_;
    std::vector<int> features_;
    std::vector<std::vector<std::uint32_t>> orders_;
    std::vector<std::uint8_t> goes_left_;
    std::vector<std::uint32_t> scratch_;
};

struct GrownTree {
    Tree tree;
    std::vector<std::uint8_t> in_bag;
};

inline GrownTree grow_tree(const Dataset &data, const TrainConfig &cfg, int index, int n_features) {
    auto rng = derive_rng(cfg.seed, static_cast<std::uint64_t>(index));
    std::vector<int> all(data.cols);
    std::iota(all.begin(), all.end(), 0);
    std::shuffle(all.begin(), all.end(), rng);
    std::vector<int> features(all.begin(), all.begin() + n_features);
    std::sort(features.begin(), features.end());

    const std::size_t n = data.rows();
    std::vector<std::size_t> slots(n);
    GrownTree out;
    out.in_bag.assign(n, 0);
    if (cfg.bootstrap) {
        std::uniform_int_distribution<std::size_t> pick(0, n - 1);
        for (auto &s : slots) {
            s = pick(rng);
            out.in_bag[s] = 1;
        }
        std::sort(slots.begin(), slots.end());
    } else {
        std::iota(slots.begin(), slots.end(), 0u);
        std::fill(out.in_bag.begin(), out.in_bag.end(), 1);
    }
    out.tree = TreeGrower{data, cfg, std::move(slots), std::move(features)}.grow();
    return out;
}

}  // namespace detail

inline constexpr std::string_view model_magic = "DGAD-FOREST";
inline constexpr int model_format_version = 1;

struct ForestModel {
    FeatureSet feature_set;
    std::vector<std::string> schema;  // column names in row order
    std::vector<Tree> trees;
    double threshold = 0.5;
    CountryCodes countries = build_country_codes({});
    CharProbabilityBasis probability_basis = CharProbabilityBasis::sld_length;
    SubnetConfig subnet;
    TrainConfig config;
    std::string calibration;  // "oob" or "in-sample"

    double score_row(std::span<const double> row) const {
        if (row.size() != schema.size()) {
            throw Error{ErrorKind::SchemaMismatch, "row has " + std::to_string(row.size()) + " columns, model expects " +
                                                       std::to_string(schema.size())};
        }
        double sum = 0;
        for (const auto &tree : trees) sum += tree.predict(row);
        return sum / static_cast<double>(trees.size());
    }

    bool flags(double score) const { return score >= threshold; }

    /// Feature extraction settings this model was trained with.
    FeatureContext context(const SuffixList &suffixes, const IpMetaProvider &geo) const {
        FeatureContext ctx;
        ctx.suffixes = &suffixes;
        ctx.geo = &geo;
        ctx.countries = countries;
        ctx.lexical.probability_basis = probability_basis;
        ctx.subnet = subnet;
        return ctx;
    }
};

/// Mean of leaf dga-probabilities across trees.
inline double score(const ForestModel &m, const FeatureVector &v) { return m.score_row(m.feature_set.row(v)); }

struct TrainResult {
    ForestModel model;
    std::vector<double> oob_scores;  // NaN where a row was never out of bag
};

/// Trains on a prepared dataset. Deterministic in cfg.seed; the thread count
/// does not change the result.
inline TrainResult train_dataset(const Dataset &data, const FeatureSet &set, const TrainConfig &cfg,
                                 const FeatureContext &ctx = {}) {
    if (data.rows() == 0) throw Error{ErrorKind::EmptyData, "no training rows"};
    if (data.cols != set.width()) throw Error{ErrorKind::SchemaMismatch, "dataset width does not match feature set"};
    cfg.validate(data.cols);
    const auto positives = std::count(data.labels.begin(), data.labels.end(), 1);
    if (positives == 0 || positives == static_cast<long>(data.rows())) {
        throw Error{ErrorKind::SingleClass, "training data contains one class only"};
    }

    const int k = cfg.resolve_features(data.cols);
    std::vector<detail::GrownTree> grown(static_cast<std::size_t>(cfg.n_trees));
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int i = next++; i < cfg.n_trees; i = next++) grown[i] = detail::grow_tree(data, cfg, i, k);
    };
    const int n_threads = std::clamp(cfg.n_threads, 1, cfg.n_trees);
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    }

    TrainResult result;
    auto &model = result.model;
    model.feature_set = set;
    model.schema = set.column_names();
    model.countries = ctx.countries;
    model.probability_basis = ctx.lexical.probability_basis;
    model.subnet = ctx.subnet;
    model.config = cfg;
    model.trees.reserve(grown.size());

    const std::size_t n = data.rows();
    std::vector<double> sum(n, 0.0);
    std::vector<int> hits(n, 0);
    for (auto &g : grown) {
        if (cfg.bootstrap) {
            for (std::size_t r = 0; r < n; ++r) {
                if (g.in_bag[r]) continue;
                sum[r] += g.tree.predict(data.row(r));
                ++hits[r];
            }
        }
        model.trees.push_back(std::move(g.tree));
    }

    result.oob_scores.assign(n, std::numeric_limits<double>::quiet_NaN());
    std::vector<double> cal_scores;
    std::vector<std::uint8_t> cal_labels;
    for (std::size_t r = 0; r < n; ++r) {
        if (hits[r] > 0) {
            result.oob_scores[r] = sum[r] / hits[r];
            cal_scores.push_back(result.oob_scores[r]);
            cal_labels.push_back(data.labels[r]);
        }
    }
    const bool have_oob_negatives = std::find(cal_labels.begin(), cal_labels.end(), 0) != cal_labels.end();
    if (cfg.bootstrap && have_oob_negatives) {
        model.calibration = "oob";
    } else {
        cal_scores.clear();
        cal_labels.assign(data.labels.begin(), data.labels.end());
        for (std::size_t r = 0; r < n; ++r) cal_scores.push_back(model.score_row(data.row(r)));
        model.calibration = "in-sample";
    }
    model.threshold = calibrate_threshold(cal_scores, cal_labels, cfg.target_fpr);
    return result;
}

inline ForestModel train(std::span<const FeatureVector> data, const FeatureSet &set, const TrainConfig &cfg,
                         const FeatureContext &ctx = {}) {
    if (data.empty()) throw Error{ErrorKind::EmptyData, "no training vectors"};
    return train_dataset(make_dataset(data, set), set, cfg, ctx).model;
}

inline std::string_view to_string(CharProbabilityBasis basis) {
    return basis == CharProbabilityBasis::sld_length ? "sld_length" : "unique_chars";
}

/// Self-describing text container: one header line, then a JSON document.
inline std::string serialize(const ForestModel &m) {
    using nlohmann::json;
    json trees = json::array();
    for (const auto &tree : m.trees) {
        json nodes = json::array();
        for (const auto &node : tree.nodes) {
            nodes.push_back({node.feature, node.threshold, node.left, node.right, node.value, node.count});
        }
        trees.push_back({{"features", tree.features}, {"nodes", std::move(nodes)}});
    }
    const auto &c = m.config;
    json doc = {
        {"format_version", model_format_version},
        {"feature_set", m.feature_set.name()},
        {"schema", m.schema},
        {"lexical_schema", lexical_schema_version},
        {"threshold", m.threshold},
        {"calibration", m.calibration},
        {"countries", m.countries.names()},
        {"extraction",
         {{"probability_basis", to_string(m.probability_basis)},
          {"subnet_v4", m.subnet.v4_prefix},
          {"subnet_v6", m.subnet.v6_prefix}}},
        {"config",
         {{"n_trees", c.n_trees},
          {"max_depth", c.max_depth},
          {"min_samples_split", c.min_samples_split},
          {"features_per_tree", c.features_per_tree},
          {"feature_fraction", c.feature_fraction},
          {"bootstrap", c.bootstrap},
          {"seed", c.seed},
          {"target_fpr", c.target_fpr}}},
        {"trees", std::move(trees)},
    };
    return std::string{model_magic} + " " + std::to_string(model_format_version) + "\n" + doc.dump() + "\n";
}

inline ForestModel deserialize(std::string_view bytes) {
    using nlohmann::json;
    const auto newline = bytes.find('\n');
    const std::string expected_header = std::string{model_magic} + " " + std::to_string(model_format_version);
    if (newline == std::string_view::npos || bytes.substr(0, newline) != expected_header) {
        throw Error{ErrorKind::Parse, "not a model file (bad header)"};
    }
    ForestModel m;
    try {
        const json doc = json::parse(bytes.substr(newline + 1));
        m.feature_set = FeatureSet::parse(doc.at("feature_set").get<std::string>());
        m.schema = doc.at("schema").get<std::vector<std::string>>();
        if (m.schema != m.feature_set.column_names()) {
            throw Error{ErrorKind::SchemaMismatch, "schema does not match feature set"};
        }
        if (doc.at("lexical_schema").get<std::string>() != lexical_schema_version) {
            throw Error{ErrorKind::SchemaMismatch, "unsupported lexical schema"};
        }
        m.threshold = doc.at("threshold").get<double>();
        m.calibration = doc.at("calibration").get<std::string>();
        m.countries = CountryCodes::from_names(doc.at("countries").get<std::vector<std::string>>());
        const auto &ex = doc.at("extraction");
        const auto basis = ex.at("probability_basis").get<std::string>();
        if (basis == "sld_length") m.probability_basis = CharProbabilityBasis::sld_length;
        else if (basis == "unique_chars") m.probability_basis = CharProbabilityBasis::unique_chars;
        else throw Error{ErrorKind::Parse, "unknown probability basis '" + basis + "'"};
        m.subnet.v4_prefix = ex.at("subnet_v4").get<int>();
        m.subnet.v6_prefix = ex.at("subnet_v6").get<int>();
        const auto &c = doc.at("config");
        m.config.n_trees = c.at("n_trees").get<int>();
        m.config.max_depth = c.at("max_depth").get<int>();
        m.config.min_samples_split = c.at("min_samples_split").get<int>();
        m.config.features_per_tree = c.at("features_per_tree").get<int>();
        m.config.feature_fraction = c.at("feature_fraction").get<double>();
        m.config.bootstrap = c.at("bootstrap").get<bool>();
        m.config.seed = c.at("seed").get<std::uint64_t>();
        m.config.target_fpr = c.at("target_fpr").get<double>();

        const int width = static_cast<int>(m.schema.size());
        for (const auto &jt : doc.at("trees")) {
            Tree tree;
            tree.features = jt.at("features").get<std::vector<int>>();
            for (const auto &jn : jt.at("nodes")) {
                TreeNode node;
                node.feature = jn.at(0).get<int>();
                node.threshold = jn.at(1).get<double>();
                node.left = jn.at(2).get<int>();
                node.right = jn.at(3).get<int>();
                node.value = jn.at(4).get<double>();
                node.count = jn.at(5).get<std::uint32_t>();
                tree.nodes.push_back(node);
            }
            const int size = static_cast<int>(tree.nodes.size());
            if (size == 0) throw Error{ErrorKind::Parse, "empty tree"};
            for (int id = 0; id < size; ++id) {
                const auto &node = tree.nodes[id];
                if (!(node.value >= 0.0 && node.value <= 1.0)) throw Error{ErrorKind::Parse, "leaf value outside [0,1]"};
                if (node.is_leaf()) continue;
                // Children always follow their parent, which rules out cycles.
                if (node.feature >= width || node.left <= id || node.right <= id || node.left >= size ||
                    node.right >= size) {
                    throw Error{ErrorKind::Parse, "malformed tree node " + std::to_string(id)};
                }
            }
            m.trees.push_back(std::move(tree));
        }
        if (m.trees.empty() || static_cast<int>(m.trees.size()) != m.config.n_trees) {
            throw Error{ErrorKind::Parse, "tree count does not match n_trees"};
        }
    } catch (const json::exception &e) {
        throw Error{ErrorKind::Parse, std::string{"model file: "} + e.what()};
    }
    return m;
}

}  // namespace dgad
