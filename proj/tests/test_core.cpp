#include <random>

#include <gtest/gtest.h>

#include "dgad/core.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace dgad;

namespace {

const SuffixList &fixture_suffixes() {
    static const SuffixList list = SuffixList::parse("// fixture\ncom\nuk\nco.uk\n");
    return list;
}

}  // namespace

TEST(SuffixList, ParsesCommentsAndSkipsUnsupportedRules) {
    const auto list = SuffixList::parse("// c\n\ncom\n  net  \n*.ck\n!www.ck\n.org\nCo.UK\r\n");
    EXPECT_EQ(list.size(), 4u);
    EXPECT_TRUE(list.contains("com"));
    EXPECT_TRUE(list.contains("net"));
    EXPECT_TRUE(list.contains("org"));
    EXPECT_TRUE(list.contains("co.uk"));
    EXPECT_FALSE(list.contains("ck"));
}

TEST(ParseDomain, DropsThirdLevelLabels) {
    const auto d = parse_domain("www.google.com", SuffixList::bundled());
    EXPECT_EQ(d.sld(), "google");
    EXPECT_EQ(d.tld(), "com");
    EXPECT_EQ(d.original(), "www.google.com");
    EXPECT_EQ(d.domain(), "google.com");
}

TEST(ParseDomain, Lowercases) {
    const auto d = parse_domain("GOOGLE.COM", SuffixList::bundled());
    EXPECT_EQ(d.sld(), "google");
    EXPECT_EQ(d.tld(), "com");
}

TEST(ParseDomain, LongestSuffixWins) {
    const auto d = parse_domain("foo.co.uk", fixture_suffixes());
    EXPECT_EQ(d.sld(), "foo");
    EXPECT_EQ(d.tld(), "co.uk");
    const auto e = parse_domain("a.b.bar.uk", fixture_suffixes());
    EXPECT_EQ(e.sld(), "bar");
    EXPECT_EQ(e.tld(), "uk");
}

TEST(ParseDomain, AcceptsTrailingRootDot) {
    EXPECT_EQ(parse_domain("example.com.", fixture_suffixes()).domain(), "example.com");
}

TEST(ParseDomain, Errors) {
    const auto &s = fixture_suffixes();
    EXPECT_EQ(error_kind([&] { parse_domain("", s); }), ErrorKind::InvalidDomain);
    EXPECT_EQ(error_kind([&] { parse_domain("exa_mple.com", s); }), ErrorKind::InvalidDomain);
    EXPECT_EQ(error_kind([&] { parse_domain("bücher.com", s); }), ErrorKind::InvalidDomain);
    EXPECT_EQ(error_kind([&] { parse_domain("a..com", s); }), ErrorKind::InvalidDomain);
    EXPECT_EQ(error_kind([&] { parse_domain("example.zz", s); }), ErrorKind::NoValidSuffix);
    EXPECT_EQ(error_kind([&] { parse_domain("co.uk", s); }), ErrorKind::EmptySld);
    EXPECT_EQ(error_kind([&] { parse_domain("com", s); }), ErrorKind::EmptySld);
}

TEST(ParseDomain, IdempotentOnRandomNames) {
    std::mt19937_64 rng{11};
    const auto &s = SuffixList::bundled();
    const std::array<std::string, 5> tlds = {"com", "co.uk", "org", "com.au", "top"};
    for (int i = 0; i < 500; ++i) {
        const std::string name = oracle::random_sld(rng, 1, 4) + "." + oracle::random_sld(rng) + "." + tlds[i % 5];
        const auto once = parse_domain(name, s);
        const auto twice = parse_domain(once.domain(), s);
        EXPECT_EQ(once, twice) << name;
        for (char c : once.domain()) EXPECT_NE(name.find(c), std::string::npos);
        EXPECT_EQ(once.sld().find('.'), std::string::npos);
    }
}

TEST(Label, RoundTripsIntegers) {
    EXPECT_EQ(label_from_int(0), Label::benign);
    EXPECT_EQ(label_from_int(1), Label::dga);
    EXPECT_EQ(to_int(Label::dga), 1);
    EXPECT_EQ(error_kind([] { label_from_int(2); }), ErrorKind::Parse);
}
