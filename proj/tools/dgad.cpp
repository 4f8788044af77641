// dgad: command-line front end for synthetic data, training, classification,
// evaluation, traffic audits and the robustness attack.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include "dgad/adversarial.hpp"
#include "dgad/eval.hpp"
#include "dgad/forest.hpp"
#include "dgad/ingest.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace dgad;

namespace {

constexpr int exit_unexpected = 1;

int exit_code(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidConfig: return 2;
        case ErrorKind::InvalidDomain: return 10;
        case ErrorKind::NoValidSuffix: return 11;
        case ErrorKind::EmptySld: return 12;
        case ErrorKind::TooLong: return 13;
        case ErrorKind::MalformedIp: return 14;
        case ErrorKind::Io: return 20;
        case ErrorKind::Parse: return 21;
        case ErrorKind::SingleClass: return 30;
        case ErrorKind::EmptyData: return 31;
        case ErrorKind::SchemaMismatch: return 32;
        case ErrorKind::NoNegatives: return 33;
        case ErrorKind::TooFewExamples: return 34;
        case ErrorKind::SeedTooShort: return 40;
        case ErrorKind::PoolTooSmall: return 41;
    }
    return exit_unexpected;
}

// ---------------------------------------------------------------------------
// Files
// ---------------------------------------------------------------------------

std::ifstream open_input(const std::string &path) {
    std::ifstream in{path, std::ios::binary};
    if (!in) throw Error{ErrorKind::Io, "cannot open '" + path + "'"};
    return in;
}

std::string sha256_file(const std::string &path) {
    auto in = open_input(path);
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx{EVP_MD_CTX_new(), EVP_MD_CTX_free};
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
        throw Error{ErrorKind::Io, "sha256 unavailable"};
    }
    std::vector<char> buf(1 << 16);
    while (in) {
        in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
        if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
    }
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx.get(), digest, &len);
    std::string hex;
    char byte[3];
    for (unsigned int i = 0; i < len; ++i) {
        std::snprintf(byte, sizeof byte, "%02x", digest[i]);
        hex += byte;
    }
    return hex;
}

/// Writes to "<path>.tmp" and renames over `path` on commit, so readers never
/// see a half-written file. Uncommitted files are removed.
class AtomicFile {
public:
    explicit AtomicFile(std::string path) : path_{std::move(path)}, tmp_{path_ + ".tmp"} {
        if (const auto dir = fs::path{path_}.parent_path(); !dir.empty()) fs::create_directories(dir);
        out_.open(tmp_, std::ios::binary | std::ios::trunc);
        if (!out_) throw Error{ErrorKind::Io, "cannot write '" + tmp_ + "'"};
    }
    AtomicFile(const AtomicFile &) = delete;
    AtomicFile &operator=(const AtomicFile &) = delete;
    ~AtomicFile() {
        if (!committed_) {
            out_.close();
            std::error_code ec;
            fs::remove(tmp_, ec);
        }
    }

    std::ostream &stream() { return out_; }

    void commit() {
        out_.flush();
        if (!out_) throw Error{ErrorKind::Io, "failed writing '" + tmp_ + "'"};
        out_.close();
        std::error_code ec;
        fs::rename(tmp_, path_, ec);
        if (ec) throw Error{ErrorKind::Io, "cannot rename onto '" + path_ + "': " + ec.message()};
        committed_ = true;
    }

    const std::string &path() const { return path_; }

private:
    std::string path_;
    std::string tmp_;
    std::ofstream out_;
    bool committed_ = false;
};

void write_text(const std::string &path, const std::string &text) {
    AtomicFile f{path};
    f.stream() << text;
    f.commit();
}

std::string utc_now() {
    const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

/// Run record written next to a command's outputs.
class Manifest {
public:
    explicit Manifest(std::string command) : command_{std::move(command)}, started_{utc_now()} {}

    void config(const std::string &key, ordered_json value) { config_[key] = std::move(value); }
    void input(const std::string &role, const std::string &path) {
        if (path.empty() || path == "-") return;
        inputs_[role] = {{"path", path}, {"sha256", sha256_file(path)}};
    }
    void output(const std::string &path) { outputs_.push_back(path); }
    void stat(const std::string &key, ordered_json value) { stats_[key] = std::move(value); }
    void seed(std::uint64_t s) { seed_ = s; }

    void write(const std::string &path) const {
        const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - clock_).count();
        ordered_json doc = {
            {"command", command_},
            {"config", config_},
            {"inputs", inputs_},
            {"seed", seed_ ? ordered_json(*seed_) : ordered_json(nullptr)},
            {"outputs", outputs_},
            {"stats", stats_},
            {"started_utc", started_},
            {"wall_clock_seconds", elapsed},
        };
        write_text(path, doc.dump(2) + "\n");
    }

private:
    std::string command_;
    std::string started_;
    std::chrono::steady_clock::time_point clock_ = std::chrono::steady_clock::now();
    ordered_json config_ = ordered_json::object();
    ordered_json inputs_ = ordered_json::object();
    ordered_json stats_ = ordered_json::object();
    std::vector<std::string> outputs_;
    std::optional<std::uint64_t> seed_;
};

// ---------------------------------------------------------------------------
// Shared options and loading
// ---------------------------------------------------------------------------

struct Common {
    std::string geoip;
    std::string suffixes;
    int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
};

/// Lookup tables for feature extraction, loaded from flags, then from
/// $DGAD_CONFIG_DIR, then from the bundled copies.
struct Tables {
    SuffixList suffixes;
    IpMetaProvider geo;
    std::string suffixes_path;
    std::string geoip_path;

    static Tables load(const Common &c) {
        Tables t;
        const char *dir = std::getenv("DGAD_CONFIG_DIR");
        auto pick = [&](const std::string &flag, const char *file) -> std::string {
            if (!flag.empty()) return flag;
            if (dir && *dir && fs::exists(fs::path{dir} / file)) return (fs::path{dir} / file).string();
            return {};
        };
        t.suffixes_path = pick(c.suffixes, "public_suffix_list.dat");
        t.geoip_path = pick(c.geoip, "geoip.csv");
        if (t.suffixes_path.empty()) {
            t.suffixes = SuffixList::bundled();
        } else {
            auto in = open_input(t.suffixes_path);
            t.suffixes = SuffixList::parse(in);
        }
        if (t.geoip_path.empty()) {
            t.geo = IpMetaProvider::bundled();
        } else {
            auto in = open_input(t.geoip_path);
            t.geo = IpMetaProvider::parse_csv(in);
        }
        return t;
    }

    FeatureContext context() const {
        FeatureContext ctx;
        ctx.suffixes = &suffixes;
        ctx.geo = &geo;
        ctx.countries = build_country_codes(geo.countries());
        return ctx;
    }

    void record(Manifest &m) const {
        m.input("suffixes", suffixes_path);
        m.input("geoip", geoip_path);
        m.config("suffixes", suffixes_path.empty() ? std::string{bundled::suffix_list_version} : suffixes_path);
        m.config("geoip", geoip_path.empty() ? std::string{"bundled"} : geoip_path);
    }
};

using ScoreMap = std::unordered_map<std::string, double>;

std::optional<ScoreMap> load_scores(const std::string &path, const SuffixList &suffixes) {
    if (path.empty()) return std::nullopt;
    auto in = open_input(path);
    return read_scores_csv(in, suffixes);
}

std::optional<double> ext_score_for(const FeatureSet &set, const std::optional<ScoreMap> &scores,
                                    const ParsedDomain &d) {
    if (!set.ext) return std::nullopt;
    if (!scores) throw Error{ErrorKind::SchemaMismatch, "feature set includes ext_score; pass --scores"};
    const auto it = scores->find(d.domain());
    if (it == scores->end()) throw Error{ErrorKind::SchemaMismatch, "no ext_score for '" + d.domain() + "'"};
    return it->second;
}

struct LoadedData {
    std::vector<LabeledExample> examples;
    std::size_t records = 0;
    std::size_t skipped_lines = 0;
    std::size_t unlabeled = 0;
    std::size_t invalid_domain = 0;
    std::size_t dictionary = 0;

    ordered_json stats() const {
        return {{"records", records},          {"skipped_lines", skipped_lines}, {"unlabeled", unlabeled},
                {"invalid_domain", invalid_domain}, {"dictionary_family_dropped", dictionary},
                {"examples", examples.size()}};
    }
};

/// Joins pDNS records with their labels (by lowercased name). Rows from
/// dictionary-word families are dropped.
LoadedData load_labeled(const std::string &data_path, const std::string &labels_path, const SuffixList &suffixes) {
    if (data_path.empty() || labels_path.empty()) {
        throw Error{ErrorKind::InvalidConfig, "--data and --labels are required"};
    }
    auto labels_in = open_input(labels_path);
    std::unordered_map<std::string, LabelRow> labels;
    for (auto &row : read_labels_csv(labels_in)) {
        auto key = to_lower(row.name);
        auto [it, inserted] = labels.try_emplace(key, row);
        if (!inserted && it->second.label != row.label) {
            throw Error{ErrorKind::Parse, "conflicting labels for '" + row.name + "'"};
        }
    }

    LoadedData out;
    auto in = open_input(data_path);
    PdnsReader reader{in};
    while (auto r = reader.next()) {
        ++out.records;
        const auto it = labels.find(to_lower(r->name));
        if (it == labels.end()) {
            ++out.unlabeled;
            continue;
        }
        if (is_dictionary_family(it->second.family)) {
            ++out.dictionary;
            continue;
        }
        LabeledExample e;
        try {
            e.parsed = parse_domain(r->name, suffixes);
        } catch (const Error &) {
            ++out.invalid_domain;
            continue;
        }
        e.record = std::move(*r);
        e.label = it->second.label;
        e.source = it->second.source;
        e.family = it->second.family;
        out.examples.push_back(std::move(e));
    }
    out.skipped_lines = reader.stats().skipped;
    return out;
}

std::vector<FeatureVector> vectors_for(const std::vector<LabeledExample> &examples, const FeatureSet &set,
                                       const FeatureContext &ctx, const std::optional<ScoreMap> &scores) {
    std::vector<FeatureVector> out;
    out.reserve(examples.size());
    for (const auto &e : examples) {
        auto v = make_features(e.parsed, &e.record, ctx, ext_score_for(set, scores, e.parsed));
        v.label = e.label;
        out.push_back(std::move(v));
    }
    return out;
}

std::vector<FeatureSet> parse_feature_list(const std::string &text) {
    std::vector<FeatureSet> sets;
    std::stringstream in{text};
    for (std::string item; std::getline(in, item, ',');) {
        if (!item.empty()) sets.push_back(FeatureSet::parse(item));
    }
    if (sets.empty()) throw Error{ErrorKind::InvalidConfig, "no feature set given"};
    return sets;
}

ForestModel load_model(const std::string &path) {
    if (path.empty()) throw Error{ErrorKind::InvalidConfig, "--model is required"};
    auto in = open_input(path);
    std::stringstream buf;
    buf << in.rdbuf();
    return deserialize(buf.str());
}

void require_out(const std::string &out) {
    if (out.empty()) throw Error{ErrorKind::InvalidConfig, "--out is required"};
}

ordered_json train_config_json(const TrainConfig &c) {
    return {{"n_trees", c.n_trees},         {"max_depth", c.max_depth},   {"min_samples_split", c.min_samples_split},
            {"features_per_tree", c.features_per_tree}, {"bootstrap", c.bootstrap}, {"seed", c.seed},
            {"target_fpr", c.target_fpr}};
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

struct SynthOpts {
    std::size_t n_benign = 5000;
    std::size_t n_dga = 5000;
    std::uint64_t seed = 42;
    std::string out;
};

void cmd_synth(const SynthOpts &o) {
    require_out(o.out);
    Manifest m{"synth"};
    m.seed(o.seed);
    m.config("n_benign", o.n_benign);
    m.config("n_dga", o.n_dga);
    const auto data = synth_dataset(o.n_benign, o.n_dga, o.seed);

    AtomicFile pdns{o.out + ".jsonl"};
    for (const auto &e : data) pdns.stream() << to_pdns_line(e.record) << '\n';
    pdns.commit();
    AtomicFile labels{o.out + ".labels.csv"};
    write_labels_csv(labels.stream(), data);
    labels.commit();

    m.output(pdns.path());
    m.output(labels.path());
    m.stat("benign", o.n_benign);
    m.stat("dga", o.n_dga);
    m.write(o.out + ".manifest.json");
}

struct TrainOpts {
    std::string data, labels, scores, features = "dns+lexical", out;
    std::uint64_t seed = 42;
    double target_fpr = 0.001;
    int trees = 100;
    int max_depth = 0;
    std::string basis = "sld_length";
};

TrainConfig make_train_config(std::uint64_t seed, double target_fpr, int trees, int max_depth, int threads) {
    TrainConfig cfg;
    cfg.seed = seed;
    cfg.target_fpr = target_fpr;
    cfg.n_trees = trees;
    cfg.max_depth = max_depth;
    cfg.n_threads = threads;
    return cfg;
}

void apply_basis(FeatureContext &ctx, const std::string &basis) {
    if (basis == "sld_length") ctx.lexical.probability_basis = CharProbabilityBasis::sld_length;
    else if (basis == "unique_chars") ctx.lexical.probability_basis = CharProbabilityBasis::unique_chars;
    else throw Error{ErrorKind::InvalidConfig, "unknown --char-basis '" + basis + "'"};
}

void cmd_train(const TrainOpts &o, const Common &c) {
    require_out(o.out);
    const auto set = FeatureSet::parse(o.features);
    const auto tables = Tables::load(c);
    auto ctx = tables.context();
    apply_basis(ctx, o.basis);
    const auto cfg = make_train_config(o.seed, o.target_fpr, o.trees, o.max_depth, c.threads);

    Manifest m{"train"};
    m.seed(o.seed);
    m.input("data", o.data);
    m.input("labels", o.labels);
    m.input("scores", o.scores);
    tables.record(m);
    m.config("features", set.name());
    m.config("train", train_config_json(cfg));
    m.config("char_basis", o.basis);

    const auto loaded = load_labeled(o.data, o.labels, tables.suffixes);
    const auto scores = load_scores(o.scores, tables.suffixes);
    const auto vectors = vectors_for(loaded.examples, set, ctx, scores);
    const auto model = train(vectors, set, cfg, ctx);
    write_text(o.out, serialize(model));

    m.output(o.out);
    m.stat("data", loaded.stats());
    m.stat("threshold", model.threshold);
    m.stat("calibration", model.calibration);
    m.write(o.out + ".manifest.json");
}

struct ClassifyOpts {
    std::string model, data = "-", scores, out = "-";
};

void cmd_classify(const ClassifyOpts &o, const Common &c) {
    const auto model = load_model(o.model);
    const auto tables = Tables::load(c);
    const auto ctx = model.context(tables.suffixes, tables.geo);
    const auto scores = load_scores(o.scores, tables.suffixes);
    if (model.feature_set.ext && !scores) {
        throw Error{ErrorKind::SchemaMismatch, "model uses ext_score; pass --scores"};
    }

    std::ifstream file;
    if (o.data != "-") file = open_input(o.data);
    std::istream &in = o.data == "-" ? std::cin : file;
    std::unique_ptr<AtomicFile> sink;
    if (o.out != "-") sink = std::make_unique<AtomicFile>(o.out);
    std::ostream &out = sink ? sink->stream() : std::cout;

    PdnsReader reader{in};
    std::size_t flagged = 0, classified = 0, invalid = 0;
    while (auto r = reader.next()) {
        ParsedDomain parsed;
        try {
            parsed = parse_domain(r->name, *ctx.suffixes);
        } catch (const Error &e) {
            ++invalid;
            std::cerr << "skip: " << e.what() << '\n';
            continue;
        }
        const auto v = make_features(parsed, &*r, ctx, ext_score_for(model.feature_set, scores, parsed));
        const double s = score(model, v);
        const bool dga = model.flags(s);
        flagged += dga;
        ++classified;
        out << ordered_json{{"domain", r->name}, {"score", s}, {"verdict", dga ? "dga" : "benign"}}.dump() << '\n';
    }
    if (!out) throw Error{ErrorKind::Io, "failed writing verdicts"};

    const ordered_json stats = {{"pdns", reader.stats().to_json()},
                                {"classified", classified},
                                {"flagged", flagged},
                                {"invalid_domain", invalid}};
    if (!sink) {
        std::cerr << stats.dump() << '\n';
        return;
    }
    sink->commit();
    Manifest m{"classify"};
    m.input("model", o.model);
    m.input("data", o.data);
    m.input("scores", o.scores);
    tables.record(m);
    m.config("threshold", model.threshold);
    m.output(o.out);
    m.stat("classify", stats);
    m.write(o.out + ".manifest.json");
}

struct EvaluateOpts {
    std::string data, labels, scores, features = "dns+lexical", out;
    std::uint64_t seed = 42;
    double target_fpr = 0.001;
    int folds = 5;
    int trees = 100;
    int max_depth = 0;
};

void cmd_evaluate(const EvaluateOpts &o, const Common &c) {
    require_out(o.out);
    const auto sets = parse_feature_list(o.features);
    const auto tables = Tables::load(c);
    const auto ctx = tables.context();
    const auto cfg = make_train_config(o.seed, o.target_fpr, o.trees, o.max_depth, c.threads);

    Manifest m{"evaluate"};
    m.seed(o.seed);
    m.input("data", o.data);
    m.input("labels", o.labels);
    m.input("scores", o.scores);
    tables.record(m);
    m.config("features", o.features);
    m.config("folds", o.folds);
    m.config("train", train_config_json(cfg));

    const auto loaded = load_labeled(o.data, o.labels, tables.suffixes);
    const auto scores = load_scores(o.scores, tables.suffixes);
    ordered_json reports = ordered_json::array();
    std::string roc = "config,fold,fpr,tpr,threshold\n";
    for (const auto &set : sets) {
        const auto vectors = vectors_for(loaded.examples, set, ctx, scores);
        const auto report = cross_validate(make_dataset(vectors, set), set, cfg, o.folds, o.seed, ctx);
        reports.push_back(to_json(report));
        std::stringstream rows{roc_csv(report)};
        std::string line;
        std::getline(rows, line);  // header
        while (std::getline(rows, line)) roc += report.config_id + "," + line + "\n";
        std::cerr << report.config_id << ": auc=" << report.auc << " auc_at_fpr=" << report.auc_at_fpr
                  << " tpr_at_fpr=" << report.tpr_at_fpr << '\n';
    }
    write_text(o.out + ".json", ordered_json{{"reports", reports}}.dump(2) + "\n");
    write_text(o.out + ".roc.csv", roc);
    m.output(o.out + ".json");
    m.output(o.out + ".roc.csv");
    m.stat("data", loaded.stats());
    m.write(o.out + ".manifest.json");
}

struct AuditOpts {
    std::string model, data, blacklist, whitelist, scores, out;
};

void cmd_audit(const AuditOpts &o, const Common &c) {
    require_out(o.out);
    const auto model = load_model(o.model);
    const auto tables = Tables::load(c);
    const auto ctx = model.context(tables.suffixes, tables.geo);
    const auto scores = load_scores(o.scores, tables.suffixes);
    auto read_list = [&](const std::string &path) {
        if (path.empty()) return DomainList{};
        auto in = open_input(path);
        return DomainList::parse(in, tables.suffixes);
    };
    const auto black = read_list(o.blacklist);
    const auto white = read_list(o.whitelist);
    if (o.data.empty()) throw Error{ErrorKind::InvalidConfig, "--data is required"};

    std::ifstream file;
    if (o.data != "-") file = open_input(o.data);
    std::istream &in = o.data == "-" ? std::cin : file;
    PdnsReader reader{in};
    Auditor auditor{model, black.keys(), white.keys()};
    std::size_t invalid = 0;
    while (auto r = reader.next()) {
        ParsedDomain parsed;
        try {
            parsed = parse_domain(r->name, *ctx.suffixes);
        } catch (const Error &) {
            ++invalid;
            continue;
        }
        auditor.add(parsed, make_features(parsed, &*r, ctx, ext_score_for(model.feature_set, scores, parsed)));
    }
    auto report = to_json(auditor.report());
    report["invalid_domain"] = invalid;
    report["pdns"] = reader.stats().to_json();
    write_text(o.out, report.dump(2) + "\n");

    Manifest m{"audit"};
    m.input("model", o.model);
    m.input("data", o.data);
    m.input("blacklist", o.blacklist);
    m.input("whitelist", o.whitelist);
    m.input("scores", o.scores);
    tables.record(m);
    m.output(o.out);
    m.write(o.out + ".manifest.json");
}

struct AttackOpts {
    std::vector<std::string> models;
    std::string data, labels, scores, out;
    std::uint64_t seed = 42;
    std::size_t n_domains = 1000;
    int trials = 5;
    std::size_t mutations = 2;
    std::string generator = "char-substitution";
    bool dump_flagged = false;
};

void cmd_attack(const AttackOpts &o, const Common &c) {
    require_out(o.out);
    if (o.models.empty()) throw Error{ErrorKind::InvalidConfig, "--model is required"};
    const auto tables = Tables::load(c);
    const auto loaded = load_labeled(o.data, o.labels, tables.suffixes);
    const auto scores = load_scores(o.scores, tables.suffixes);

    std::vector<ParsedDomain> seeds;
    std::vector<const LabeledExample *> dga_rows;
    for (const auto &e : loaded.examples) {
        if (e.label == Label::benign) seeds.push_back(e.parsed);
        else dga_rows.push_back(&e);
    }
    AttackConfig cfg;
    cfg.n_domains = o.n_domains;
    cfg.n_trials = o.trials;
    cfg.seed = o.seed;
    cfg.generator = o.generator;
    cfg.mutation_count = o.mutations;

    ScoreLookup lookup;
    if (scores) {
        lookup = [&](const std::string &domain) -> std::optional<double> {
            const auto it = scores->find(domain);
            return it == scores->end() ? std::nullopt : std::optional<double>{it->second};
        };
    }

    Manifest m{"attack"};
    m.seed(o.seed);
    m.input("data", o.data);
    m.input("labels", o.labels);
    m.input("scores", o.scores);
    tables.record(m);
    m.config("n_domains", o.n_domains);
    m.config("trials", o.trials);
    m.config("generator", o.generator);
    m.config("mutation_count", o.mutations);

    ordered_json reports = ordered_json::array();
    std::string flagged_csv = "model,trial,domain\n";
    for (const auto &path : o.models) {
        m.input("model:" + path, path);
        const auto model = load_model(path);
        const auto ctx = model.context(tables.suffixes, tables.geo);
        // Side information is re-extracted under the model's own settings.
        std::vector<FeatureVector> pool;
        pool.reserve(dga_rows.size());
        for (const auto *e : dga_rows) pool.push_back(make_features(e->parsed, &e->record, ctx));
        const auto report = robustness_eval(model, seeds, pool, cfg, tables.suffixes, lookup);
        auto j = to_json(report);
        j["model"] = path;
        reports.push_back(j);
        std::cerr << path << " (" << report.model_features << "): " << 100 * report.mean << "% +- "
                  << 100 * report.stddev << "%\n";
        for (std::size_t t = 0; t < report.trials.size(); ++t) {
            for (const auto &d : report.trials[t].flagged_domains) {
                flagged_csv += path + "," + std::to_string(t) + "," + d + "\n";
            }
        }
    }
    write_text(o.out + ".json", ordered_json{{"reports", reports}}.dump(2) + "\n");
    m.output(o.out + ".json");
    if (o.dump_flagged) {
        write_text(o.out + ".flagged.csv", flagged_csv);
        m.output(o.out + ".flagged.csv");
    }
    m.stat("data", loaded.stats());
    m.write(o.out + ".manifest.json");
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"DGA domain detection: synthetic data, training, classification, evaluation, audits, attacks"};
    app.require_subcommand(1);
    Common common;
    auto add_common = [&](CLI::App *sub) {
        sub->add_option("--geoip", common.geoip, "GeoIP CSV (prefix,country,asn)");
        sub->add_option("--suffixes", common.suffixes, "public suffix list file");
        sub->add_option("--threads", common.threads, "worker threads for training")->check(CLI::PositiveNumber);
    };

    SynthOpts synth;
    auto *s = app.add_subcommand("synth", "generate a labelled synthetic pDNS dataset");
    s->add_option("--n-benign", synth.n_benign, "benign records")->capture_default_str();
    s->add_option("--n-dga", synth.n_dga, "DGA records")->capture_default_str();
    s->add_option("--seed", synth.seed)->capture_default_str();
    s->add_option("--out", synth.out, "output prefix (PREFIX.jsonl, PREFIX.labels.csv)")->required();

    TrainOpts tr;
    auto *t = app.add_subcommand("train", "train and calibrate a forest");
    t->add_option("--data", tr.data, "pDNS JSONL")->required();
    t->add_option("--labels", tr.labels, "labels CSV (name,label,source,family)")->required();
    t->add_option("--features", tr.features, "dns, lexical, dns+lexical, optionally +ext")->capture_default_str();
    t->add_option("--scores", tr.scores, "ext_score sidecar CSV (domain,score)");
    t->add_option("--seed", tr.seed)->capture_default_str();
    t->add_option("--target-fpr", tr.target_fpr)->capture_default_str();
    t->add_option("--trees", tr.trees)->capture_default_str();
    t->add_option("--max-depth", tr.max_depth, "0 = unlimited")->capture_default_str();
    t->add_option("--char-basis", tr.basis, "sld_length or unique_chars")->capture_default_str();
    t->add_option("--out", tr.out, "model file")->required();
    add_common(t);

    ClassifyOpts cl;
    auto *c = app.add_subcommand("classify", "score a pDNS stream");
    c->add_option("--model", cl.model)->required();
    c->add_option("--data", cl.data, "pDNS JSONL, - for stdin")->capture_default_str();
    c->add_option("--scores", cl.scores, "ext_score sidecar CSV");
    c->add_option("--out", cl.out, "verdict JSONL, - for stdout")->capture_default_str();
    add_common(c);

    EvaluateOpts ev;
    auto *e = app.add_subcommand("evaluate", "stratified k-fold cross-validation");
    e->add_option("--data", ev.data)->required();
    e->add_option("--labels", ev.labels)->required();
    e->add_option("--features", ev.features, "comma-separated feature sets")->capture_default_str();
    e->add_option("--scores", ev.scores);
    e->add_option("--seed", ev.seed)->capture_default_str();
    e->add_option("--target-fpr", ev.target_fpr)->capture_default_str();
    e->add_option("--folds", ev.folds)->capture_default_str();
    e->add_option("--trees", ev.trees)->capture_default_str();
    e->add_option("--max-depth", ev.max_depth)->capture_default_str();
    e->add_option("--out", ev.out, "output prefix (PREFIX.json, PREFIX.roc.csv)")->required();
    add_common(e);

    AuditOpts au;
    auto *a = app.add_subcommand("audit", "count flagged and listed domains in traffic");
    a->add_option("--model", au.model)->required();
    a->add_option("--data", au.data, "pDNS JSONL, - for stdin")->required();
    a->add_option("--blacklist", au.blacklist);
    a->add_option("--whitelist", au.whitelist);
    a->add_option("--scores", au.scores);
    a->add_option("--out", au.out, "report JSON")->required();
    add_common(a);

    AttackOpts at;
    auto *k = app.add_subcommand("attack", "robustness against generated evasive domains");
    k->add_option("--model", at.models, "one or more model files")->required();
    k->add_option("--data", at.data)->required();
    k->add_option("--labels", at.labels)->required();
    k->add_option("--scores", at.scores);
    k->add_option("--seed", at.seed)->capture_default_str();
    k->add_option("--n-domains", at.n_domains)->capture_default_str();
    k->add_option("--trials", at.trials)->capture_default_str();
    k->add_option("--mutations", at.mutations)->capture_default_str();
    k->add_option("--generator", at.generator)->capture_default_str();
    k->add_flag("--dump-flagged", at.dump_flagged, "also write PREFIX.flagged.csv");
    k->add_option("--out", at.out, "output prefix (PREFIX.json)")->required();
    add_common(k);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*s) cmd_synth(synth);
        else if (*t) cmd_train(tr, common);
        else if (*c) cmd_classify(cl, common);
        else if (*e) cmd_evaluate(ev, common);
        else if (*a) cmd_audit(au, common);
        else if (*k) cmd_attack(at, common);
    } catch (const Error &err) {
        std::cerr << "dgad: " << err.what() << '\n';
        return exit_code(err.kind());
    } catch (const std::exception &err) {
        std::cerr << "dgad: " << err.what() << '\n';
        return exit_unexpected;
    }
    return 0;
}
