#include <algorithm>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "benign_corpus.hpp"
#include "dgad/ingest.hpp"
#include "test_util.hpp"

using namespace dgad;

namespace {

const SuffixList &psl() { return SuffixList::bundled(); }

std::set<std::string_view> failed_rules(const HeuristicReport &r) {
    std::set<std::string_view> out;
    const auto rules = r.rules();
    for (std::size_t i = 0; i < rules.size(); ++i)
        if (!rules[i]) out.insert(HeuristicReport::rule_names[i]);
    return out;
}

std::int64_t median_ttl(const std::vector<LabeledExample> &data, Label label) {
    std::vector<std::int64_t> ttls;
    for (const auto &e : data)
        if (e.label == label) ttls.push_back(e.record.ttl);
    std::sort(ttls.begin(), ttls.end());
    return ttls[ttls.size() / 2];
}

}  // namespace

TEST(BenignFilter, Examples) {
    const DomainList none;
    EXPECT_FALSE(benign_filter("a.b.c.d.e.com", psl(), none).at_most_four_labels);
    EXPECT_FALSE(benign_filter("a.b.c.d.e.com", psl(), none).passed());
    const auto digits = benign_filter("12-34.com", psl(), none);
    EXPECT_FALSE(digits.not_all_digits);
    EXPECT_FALSE(digits.passed());
    EXPECT_TRUE(benign_filter("examples.com", psl(), none).passed());
}

TEST(BenignFilter, LengthLimit) {
    const DomainList none;
    const std::string label(63, 'a');
    const auto r = benign_filter(label + "." + label + "." + label + "." + label + "b.com", psl(), none);
    EXPECT_FALSE(r.length_at_most_255);
}

TEST(BenignFilter, CuratedCorpus) {
    const auto blacklist = DomainList::parse(corpus_blacklist, psl());
    const ResolutionHistory history = [](std::string_view fqdn) { return fqdn != corpus_unresolved; };
    int benign = 0;
    for (const auto &entry : benign_corpus()) {
        const auto report = benign_filter(entry.name, psl(), blacklist, history);
        EXPECT_EQ(report.passed(), entry.benign) << entry.name;
        EXPECT_EQ(failed_rules(report), entry.fails) << entry.name;
        if (!entry.benign) {
            EXPECT_TRUE(entry.fails.contains(entry.target)) << entry.name;
        }
        benign += entry.benign;
    }
    EXPECT_EQ(benign, 20);
}

TEST(BenignFilter, RejectsEveryBlacklistedName) {
    const auto blacklist = DomainList::parse("evil-domain.com\nqwpoeiruty.net,ramnit\nsub.bad-site.org\n", psl());
    for (const auto &key : blacklist.keys()) EXPECT_FALSE(benign_filter(key, psl(), blacklist).passed()) << key;
    EXPECT_FALSE(benign_filter("www.evil-domain.com", psl(), blacklist).not_blacklisted);
}

TEST(DomainList, ParsesFamiliesAndNormalizes) {
    const auto list = DomainList::parse("# header\nWWW.Example.COM\nsuppobox-name.net,Suppobox\n\n  spaced.org  \n", psl());
    EXPECT_EQ(list.size(), 3u);
    EXPECT_TRUE(list.contains("example.com"));
    EXPECT_TRUE(list.contains("spaced.org"));
    EXPECT_EQ(list.family("suppobox-name.net"), "suppobox");
    EXPECT_TRUE(is_dictionary_family(list.family("suppobox-name.net")));
    EXPECT_FALSE(is_dictionary_family("ramnit"));
    EXPECT_TRUE(is_dictionary_family("Matsnu"));
}

TEST(MatchLists, Membership) {
    const auto black = DomainList::parse("both.com\nblack.com\n", psl());
    const auto white = DomainList::parse("both.com\nwhite.com\n", psl());
    std::vector<ParsedDomain> domains;
    for (auto n : {"www.BOTH.com", "black.com", "white.com", "none.com"}) domains.push_back(parse_domain(n, psl()));
    const auto m = match_lists(domains, black, white);
    EXPECT_EQ(m[0], (ListMembership{true, true, true}));
    EXPECT_EQ(m[1], (ListMembership{true, false, false}));
    EXPECT_EQ(m[2], (ListMembership{false, true, false}));
    EXPECT_EQ(m[3], (ListMembership{false, false, false}));
}

TEST(Pdns, ParsesSchemaLine) {
    const auto r = parse_pdns_line(R"({"name":"x.com","ttl":300,"type":1,"class":1,"data":["1.2.3.4"]})");
    ASSERT_TRUE(r);
    EXPECT_EQ(r->name, "x.com");
    EXPECT_EQ(r->ttl, 300);
    EXPECT_EQ(r->rtype, 1);
    EXPECT_EQ(r->qtype, 1);
    EXPECT_EQ(r->rclass, 1);
    EXPECT_EQ(r->data, std::vector<std::string>{"1.2.3.4"});
    const auto named = parse_pdns_line(R"({"name":"x.com","ttl":5,"type":"AAAA","class":"IN","data":["::1"]})");
    ASSERT_TRUE(named);
    EXPECT_EQ(named->rtype, 28);
}

TEST(Pdns, SkipsAndCountsMalformedLines) {
    std::istringstream in{
        "{\"name\":\"a.com\",\"ttl\":1,\"type\":1,\"class\":1,\"data\":[\"1.1.1.1\"]}\n"
        "\n"
        "{\"name\":\"b.com\",\"ttl\":1,\"type\":1,\"class\":1}\n"
        "not json\n"
        "{\"name\":\"c.com\",\"ttl\":-1,\"type\":1,\"class\":1,\"data\":[\"1.1.1.1\"]}\n"
        "{\"name\":\"d.com\",\"ttl\":2,\"type\":1,\"class\":1,\"data\":[\"2.2.2.2\"]}\n"};
    const auto result = read_pdns(in);
    ASSERT_EQ(result.records.size(), 2u);
    EXPECT_EQ(result.records[0].name, "a.com");
    EXPECT_EQ(result.records[1].name, "d.com");
    EXPECT_EQ(result.stats.lines, 6u);
    EXPECT_EQ(result.stats.skipped, 4u);
}

TEST(Pdns, RoundTripsExactly) {
    const auto data = synth_dataset(50, 50, 3);
    std::vector<DnsRecord> records;
    for (const auto &e : data) records.push_back(e.record);
    records[0].qtype = 255;
    std::ostringstream first;
    write_pdns(first, records);
    std::istringstream in{first.str()};
    const auto back = read_pdns(in);
    EXPECT_EQ(back.records, records);
    std::ostringstream second;
    write_pdns(second, back.records);
    EXPECT_EQ(first.str(), second.str());
}

TEST(LabelsCsv, RoundTrip) {
    const auto data = synth_dataset(5, 5, 1);
    std::ostringstream out;
    write_labels_csv(out, data);
    std::istringstream in{out.str()};
    const auto rows = read_labels_csv(in);
    ASSERT_EQ(rows.size(), data.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        EXPECT_EQ(rows[i].name, data[i].record.name);
        EXPECT_EQ(rows[i].label, data[i].label);
        EXPECT_EQ(rows[i].source, Source::synthetic);
    }
    std::istringstream bad{"name,label\nx.com,2\n"};
    EXPECT_EQ(error_kind([&] { read_labels_csv(bad); }), ErrorKind::Parse);
}

TEST(ScoresCsv, KeyedOnNormalizedDomain) {
    std::istringstream in{"domain,score\nWWW.Example.com,0.25\nother.net,1\n"};
    const auto scores = read_scores_csv(in, psl());
    EXPECT_EQ(scores.at("example.com"), 0.25);
    EXPECT_EQ(scores.at("other.net"), 1.0);
    std::istringstream bad{"x.com,1.5\n"};
    EXPECT_EQ(error_kind([&] { read_scores_csv(bad, psl()); }), ErrorKind::Parse);
}

TEST(Synth, DeterministicUnderSeed) {
    const auto a = synth_dataset(200, 200, 7);
    const auto b = synth_dataset(200, 200, 7);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].record, b[i].record);
        EXPECT_EQ(a[i].label, b[i].label);
    }
    const auto c = synth_dataset(200, 200, 8);
    EXPECT_NE(a[0].record, c[0].record);
}

TEST(Synth, ContractHolds) {
    const auto data = synth_dataset(1001, 1001, 21);
    const DomainList none;
    std::size_t benign = 0, dga = 0;
    for (const auto &e : data) {
        EXPECT_FALSE(e.record.data.empty());
        for (const auto &ip : e.record.data) EXPECT_TRUE(parse_ip(ip)) << ip;
        if (e.label == Label::benign) {
            ++benign;
            EXPECT_TRUE(benign_filter(e.record.name, psl(), none).passed()) << e.record.name;
        } else {
            ++dga;
            const auto &sld = e.parsed.sld();
            EXPECT_GE(sld.size(), 12u);
            EXPECT_LE(sld.size(), 30u);
            EXPECT_EQ(sld.find_first_not_of("abcdefghijklmnopqrstuvwxyz0123456789"), std::string::npos);
        }
    }
    EXPECT_EQ(benign, 1001u);
    EXPECT_EQ(dga, 1001u);
    EXPECT_EQ(median_ttl(data, Label::benign), synth_benign_median_ttl);
    EXPECT_EQ(median_ttl(data, Label::dga), synth_dga_median_ttl);
}

TEST(Synth, MedianExactForSmallCounts) {
    for (std::size_t n : {1u, 3u, 5u, 11u, 101u}) {
        const auto data = synth_dataset(n, n, n);
        EXPECT_EQ(median_ttl(data, Label::benign), synth_benign_median_ttl) << n;
        EXPECT_EQ(median_ttl(data, Label::dga), synth_dga_median_ttl) << n;
    }
}

TEST(Synth, RejectsZeroCounts) {
    EXPECT_EQ(error_kind([] { synth_dataset(0, 5, 1); }), ErrorKind::InvalidConfig);
}
