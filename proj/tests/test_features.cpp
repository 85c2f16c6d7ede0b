#include "advrec/error.hpp"
#include "advrec/features.hpp"

#include "generators.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

using namespace advrec;

namespace {

ObjectBehaviour at_magnitude(const std::string& label, double mag)
{
    ObjectBehaviour b{"toy", label, {}};
    BehaviourStep s;
    s.time_step = 1;
    s.magnitude_tenths = to_tenths(mag);
    s.area = "small";
    s.mip = "small";
    b.steps.push_back(s);
    return b;
}

EmbeddingTable small_table()
{
    return parse_word_vectors("2 3\ncut 1 2 3\npour -0.5 0 0.25\n");
}

} // namespace

TEST(WordVectors, TwoEntries)
{
    const auto t = small_table();
    EXPECT_EQ(t.dim, 3u);
    ASSERT_EQ(t.entries.size(), 2u);
    EXPECT_EQ(t.entries.at("pour"), (std::vector<double>{-0.5, 0, 0.25}));
    EXPECT_EQ(parse_word_vectors(serialize_word_vectors(t)).entries, t.entries);
}

TEST(WordVectors, RaggedLineIsDimensionError)
{
    try {
        parse_word_vectors("2 3\ncut 1 2 3\npour 1 2\n");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Dimension);
        EXPECT_EQ(e.line(), 3u);
    }
}

TEST(WordVectors, DuplicatesAndCountMismatch)
{
    EXPECT_THROW(parse_word_vectors("2 1\ncut 1\ncut 2\n"), Error);
    EXPECT_THROW(parse_word_vectors("3 1\ncut 1\npour 2\n"), Error);
    EXPECT_THROW(parse_word_vectors(""), Error);
    EXPECT_THROW(parse_word_vectors("1 1\ncut x\n"), Error);
}

TEST(WordVectors, AbsentTokenIsZeroVectorAndReported)
{
    const auto t = small_table();
    std::vector<std::string> missing;
    EXPECT_EQ(t.lookup("stir", &missing), (std::vector<double>{0, 0, 0}));
    EXPECT_EQ(t.lookup("cut", &missing), (std::vector<double>{1, 2, 3}));
    EXPECT_EQ(missing, std::vector<std::string>{"stir"});
}

TEST(Indicators, EmptyRuleSetLeavesEmbeddingOnly)
{
    const InducedRuleSet none{{"strange", "not_strange"}, {}, {}};
    const auto b = at_magnitude("person", 7);
    EXPECT_TRUE(indicator_vector(b, none, BucketScheme::defaults()).empty());
    const auto fv = indicator_features(b, "strange", "cut", none, small_table(), BucketScheme::defaults());
    EXPECT_EQ(fv.values, (std::vector<double>{1, 2, 3}));
}

TEST(Indicators, ToyRulesOnPerson)
{
    const auto scheme = BucketScheme::defaults();
    const InducedRuleSet rules{{"strange", "not_strange"},
        {{"strange", Bias::Magnitude, RangeBody{1, 3}}, {"not_strange", Bias::Magnitude, RangeBody{std::nullopt, 0}}},
        {2, 0, 0, 0}};
    EXPECT_EQ(indicator_vector(at_magnitude("person", 7), rules, scheme), (std::vector<std::uint8_t>{1, 0}));
    EXPECT_EQ(indicator_vector(at_magnitude("car", 3), rules, scheme), (std::vector<std::uint8_t>{0, 1}));
}

TEST(Indicators, AllOnesAndDuplicatesOccupySeparateBits)
{
    const auto scheme = BucketScheme::defaults();
    const IndicatorRule r{"strange", Bias::Magnitude, RangeBody{1, 3}};
    const InducedRuleSet rules{{"strange", "not_strange"}, {r, r, r}, {3, 0, 0, 0}};
    EXPECT_EQ(indicator_vector(at_magnitude("cat", 18), rules, scheme), (std::vector<std::uint8_t>{1, 1, 1}));
}

TEST(Indicators, PermutationConsistent)
{
    const auto scheme = BucketScheme::defaults();
    Rng rng(5);
    std::vector<IndicatorRule> pool;
    for (const auto bias : kAllBiases) {
        const auto space = hypothesis_space(bias, "a", scheme);
        for (int i = 0; i < 5; ++i) {
            pool.push_back(space[rng.below(space.size())]);
        }
    }
    for (int trial = 0; trial < 50; ++trial) {
        const auto b = gen::random_behaviour(rng, scheme, "c", "o");
        std::vector<std::size_t> perm(pool.size());
        std::iota(perm.begin(), perm.end(), 0);
        rng.shuffle(perm);
        InducedRuleSet a{{"a", "b"}, pool, {}};
        InducedRuleSet p{{"a", "b"}, {}, {}};
        for (auto i : perm) {
            p.rules.push_back(pool[i]);
        }
        const auto bits = indicator_vector(b, a, scheme);
        const auto permuted = indicator_vector(b, p, scheme);
        for (std::size_t k = 0; k < perm.size(); ++k) {
            ASSERT_EQ(permuted[k], bits[perm[k]]);
        }
    }
}

TEST(Summary, LayoutAndMissingKey)
{
    auto summaries = parse_word_vectors("1 2\nc1#person 0.5 -1\n");
    ObjectBehaviour b = at_magnitude("person", 1);
    b.clip_id = "c1";
    const auto fv = summary_features(b, "slowly", "pour", {"slowly", "quickly"}, summaries, small_table());
    EXPECT_EQ(fv.values, (std::vector<double>{0.5, -1, -0.5, 0, 0.25}));
    EXPECT_EQ(fv.source, FeatureSource::Summary);
    b.object_label = "dog";
    try {
        summary_features(b, "slowly", "pour", {"slowly", "quickly"}, summaries, small_table());
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Missing);
        EXPECT_NE(std::string(e.what()).find("c1#dog"), std::string::npos);
    }
}

TEST(Balance, CyclicRepetition)
{
    auto [a, b] = balance_by_repetition(std::vector<int>{0, 1, 2}, std::vector<int>{10, 11, 12, 13, 14, 15, 16});
    EXPECT_EQ(a, (std::vector<int>{0, 1, 2, 0, 1, 2, 0}));
    EXPECT_EQ(b.size(), 7u);

    auto [c, d] = balance_by_repetition(std::vector<int>{1, 2, 3, 4, 5}, std::vector<int>{6, 7, 8, 9, 10});
    EXPECT_EQ(c, (std::vector<int>{1, 2, 3, 4, 5}));
    EXPECT_EQ(d, (std::vector<int>{6, 7, 8, 9, 10}));

    auto [e, f] = balance_by_repetition(std::vector<int>{1, 2, 3, 4}, std::vector<int>{9});
    EXPECT_EQ(f, (std::vector<int>{9, 9, 9, 9}));

    EXPECT_THROW(balance_by_repetition(std::vector<int>{}, std::vector<int>{1}), Error);
}

TEST(Balance, NeverDropsAndEqualises)
{
    Rng rng(6);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 1 + rng.below(20);
        const std::size_t m = 1 + rng.below(20);
        std::vector<std::size_t> a(n), b(m);
        std::iota(a.begin(), a.end(), 0);
        std::iota(b.begin(), b.end(), 100);
        auto [x, y] = balance_by_repetition(a, b);
        ASSERT_EQ(x.size(), y.size());
        ASSERT_EQ(x.size(), std::max(n, m));
        ASSERT_TRUE(std::equal(a.begin(), a.end(), x.begin()));
        ASSERT_TRUE(std::equal(b.begin(), b.end(), y.begin()));
    }
}

TEST(FeatureCsv, RoundTrip)
{
    const AdverbPair pair{"slowly", "quickly"};
    std::vector<FeatureVector> rows = {
        {"c1", "person", "slowly", {1, 0, 0.125, -3.5}, FeatureSource::Indicator, pair},
        {"c2", "ball", "quickly", {0, 1, 1e-9, 2}, FeatureSource::Indicator, pair},
    };
    const auto text = write_feature_csv(rows);
    EXPECT_EQ(text.substr(0, text.find('\n')), "clip_id,object,label,v0,v1,v2,v3");
    const auto back = parse_feature_csv(text, pair);
    ASSERT_EQ(back.size(), 2u);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        EXPECT_EQ(back[i].clip_id, rows[i].clip_id);
        EXPECT_EQ(back[i].object_label, rows[i].object_label);
        EXPECT_EQ(back[i].label, rows[i].label);
        EXPECT_EQ(back[i].values, rows[i].values);
    }
    EXPECT_EQ(write_feature_csv(back), text);
    EXPECT_THROW(parse_feature_csv("clip_id,object,label,v0\nc1,o,gently,1\n", pair), Error);
    EXPECT_THROW(parse_feature_csv("clip_id,object,label,v0\nc1,o,slowly,1,2\n", pair), Error);
}
