#include "advrec/asp.hpp"
#include "advrec/error.hpp"
#include "advrec/util.hpp"

#include "generators.hpp"

#include <gtest/gtest.h>

#include <set>
#include <tuple>

using namespace advrec;

namespace {

std::string data_path(const std::string& name)
{
    return std::string(ADVREC_TEST_DATA) + "/" + name;
}

std::set<std::string> texts(const std::vector<Fact>& facts, Predicate p)
{
    std::set<std::string> out;
    for (const auto& f : facts) {
        if (f.predicate == p) {
            out.insert(f.text());
        }
    }
    return out;
}

std::size_t error_line(std::string_view text)
{
    try {
        parse_program(text);
    } catch (const Error& e) {
        return e.line();
    }
    ADD_FAILURE() << "expected parse failure for: " << text;
    return 0;
}

} // namespace

TEST(Emit, DetectedFactPerStep)
{
    Rng rng(1);
    auto b = gen::random_behaviour(rng, BucketScheme::defaults(), "c", "person", 3);
    while (b.steps.size() < 2) {
        b = gen::random_behaviour(rng, BucketScheme::defaults(), "c", "person", 3);
    }
    const auto text = emit_program({b}, {});
    EXPECT_NE(text.find("\ndetected(person, 2).\n"), std::string::npos);
}

TEST(Emit, EmptyBehavioursGiveBackgroundOnly)
{
    const auto bg = generate_background(BucketScheme::defaults());
    const auto p = parse_program(emit_program({}, bg));
    EXPECT_TRUE(p.facts.empty());
    EXPECT_EQ(p.background, bg);
}

TEST(Emit, GoldenSingleObject)
{
    const auto golden = read_text_file(data_path("single_object.lp"));
    const auto program = parse_program(golden);
    EXPECT_EQ(program.clip_id, "golden");
    EXPECT_EQ(program.action, "cut");
    ASSERT_EQ(program.adverb_labels.size(), 1u);
    EXPECT_EQ(program.adverb_labels[0].adverb, "slowly");
    EXPECT_EQ(program.adverb_labels[0].antonym, "quickly");

    ObjectBehaviour b{"golden", "person", {}};
    BehaviourStep s1;
    s1.time_step = 1;
    s1.magnitude_tenths = 183;
    s1.sector = Sector::N;
    s1.area = "medium";
    s1.mip = "small";
    s1.placement = placement_path(0.3, 0.2);
    BehaviourStep s2 = s1;
    s2.time_step = 2;
    s2.magnitude_tenths = 40;
    s2.sector = Sector::SW;
    s2.area = "large";
    s2.mip = "very_large";
    s2.placement = placement_path(0.7, 0.9);
    b.steps = {s1, s2};
    const auto emitted = emit_program(make_program("golden", "cut", {{"slowly", "quickly"}}, {b},
        generate_background(BucketScheme::defaults())));
    EXPECT_EQ(emitted, golden);
    EXPECT_EQ(behaviours_from_program(program), std::vector<ObjectBehaviour>{b});
}

TEST(Parse, PaperFacts)
{
    const auto p = parse_program("detected(person, 2).\nclockwise(n, ne, 1).\n");
    ASSERT_EQ(p.facts.size(), 1u);
    EXPECT_EQ(p.facts[0].predicate, Predicate::Detected);
    EXPECT_EQ(p.facts[0].args[0], Term::sym("person"));
    EXPECT_EQ(p.facts[0].args[1], Term::integer(2));
    ASSERT_EQ(p.background.size(), 1u);
    EXPECT_EQ(p.background[0].predicate, Predicate::Clockwise);
    EXPECT_EQ(p.background[0].text(), "clockwise(n, ne, 1).");
}

TEST(Parse, ToleratesWhitespaceCommentsAndHyphens)
{
    const auto p = parse_program("  % a comment\n less_than( very-small ,small,1 ) .  % trailing\n\n"
                                 "magnitude(person,  7.25, 1).");
    ASSERT_EQ(p.background.size(), 1u);
    EXPECT_EQ(p.background[0].text(), "less_than(very_small, small, 1).");
    ASSERT_EQ(p.facts.size(), 1u);
    EXPECT_EQ(p.facts[0].args[1], Term::tenths(73)); // rounded to one decimal
}

TEST(Parse, UnknownPredicatesGoToExtras)
{
    const auto p = parse_program("detected(cat, 1).\nholds(cat, happy, 1).\n");
    ASSERT_EQ(p.extras.size(), 1u);
    EXPECT_EQ(p.extras[0].name, "holds");
    EXPECT_EQ(p.extras[0].line, 2u);
    EXPECT_EQ(p.extras[0].args, (std::vector<std::string>{"cat", "happy", "1"}));
    // Extras survive a round trip.
    EXPECT_EQ(parse_program(emit_program(p)), p);
}

TEST(Parse, ErrorsNameTheLine)
{
    EXPECT_EQ(error_line("detected(cat, 1).\ndetected(cat, 1)).\n"), 2u);                  // stray )
    EXPECT_EQ(error_line("detected(cat, 1).\n\ndetected(cat, 1, 2).\n"), 3u);              // arity
    EXPECT_EQ(error_line("magnitude(cat, fast, 1).\n"), 1u);                               // non-numeric
    EXPECT_EQ(error_line("detected(cat, 1).\ndetected(cat, 2)\n"), 2u);                    // unterminated
    EXPECT_EQ(error_line("detected(cat, 1\n"), 1u);                                       // unclosed
    EXPECT_EQ(error_line("class(a, V0) :- detected(V0, 1).\n"), 1u);                       // rules are not facts
    EXPECT_EQ(error_line("place(cat, 0, top, 1).\n"), 1u);                                 // place/5
}

TEST(Background, PaperExamples)
{
    const auto bg = generate_background(BucketScheme::defaults());
    const auto lt = texts(bg, Predicate::LessThan);
    EXPECT_TRUE(lt.contains("less_than(very_small, medium, 2)."));
    EXPECT_TRUE(lt.contains("less_than(very_small, small, 1)."));
    const auto cw = texts(bg, Predicate::Clockwise);
    EXPECT_TRUE(cw.contains("clockwise(n, e, 2)."));
    EXPECT_TRUE(cw.contains("clockwise(n, ne, 1)."));
    EXPECT_EQ(cw.size(), 64u);
    EXPECT_EQ(texts(bg, Predicate::Anticlockwise).size(), 64u);
    const auto opp = texts(bg, Predicate::Opposite);
    EXPECT_EQ(opp, (std::set<std::string>{"opposite(left, right).", "opposite(right, left).", "opposite(top, bottom).",
                       "opposite(bottom, top)."}));
    for (const auto& f : bg) {
        EXPECT_TRUE(is_background_predicate(f.predicate)) << f.text();
    }
}

TEST(Background, ClosureMatchesPairwiseStepping)
{
    // Oracle: walk one tick at a time from every anchor; record (from, to, steps) for 1..8 steps.
    const std::vector<std::string> ring = {"n", "ne", "e", "se", "s", "sw", "w", "nw"};
    std::set<std::string> cw, acw;
    for (std::size_t a = 0; a < 8; ++a) {
        std::size_t here = a;
        std::size_t there = a;
        for (int d = 1; d <= 8; ++d) {
            here = (here + 1) % 8;
            there = (there + 7) % 8;
            cw.insert("clockwise(" + ring[a] + ", " + ring[here] + ", " + std::to_string(d) + ").");
            acw.insert("anticlockwise(" + ring[a] + ", " + ring[there] + ", " + std::to_string(d) + ").");
        }
    }
    const auto bg = generate_background(BucketScheme::defaults());
    EXPECT_EQ(texts(bg, Predicate::Clockwise), cw);
    EXPECT_EQ(texts(bg, Predicate::Anticlockwise), acw);
    for (const auto& f : bg) {
        if (f.predicate == Predicate::Clockwise || f.predicate == Predicate::Anticlockwise) {
            EXPECT_LE(f.args[2].value, 8);
            EXPECT_GE(f.args[2].value, 1);
        }
    }
}

TEST(Background, LessThanIsAdditiveStrictOrder)
{
    const auto scheme = BucketScheme::defaults();
    const auto bg = generate_background(scheme);
    std::set<std::tuple<std::string, std::string, std::int64_t>> lt;
    for (const auto& f : bg) {
        if (f.predicate == Predicate::LessThan) {
            lt.insert({f.args[0].symbol, f.args[1].symbol, f.args[2].value});
            EXPECT_NE(f.args[0].symbol, f.args[1].symbol);
            EXPECT_GT(f.args[2].value, 0);
        }
    }
    for (const auto& [a, b, p] : lt) {
        for (const auto& [b2, c, q] : lt) {
            if (b2 == b) {
                EXPECT_TRUE(lt.contains({a, c, p + q})) << a << " " << b << " " << c;
            }
        }
    }
    // Every within-family pair i < j is present with distance j - i.
    for (const auto* fam : {&scheme.area, &scheme.mip, &scheme.magnitude}) {
        for (std::size_t i = 0; i < fam->size(); ++i) {
            for (std::size_t j = i + 1; j < fam->size(); ++j) {
                EXPECT_TRUE(lt.contains({fam->name(i), fam->name(j), static_cast<std::int64_t>(j - i)}));
            }
        }
    }
}

TEST(RoundTrip, RandomPrograms)
{
    const auto scheme = BucketScheme::defaults();
    const auto bg = generate_background(scheme);
    Rng rng(99);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<ObjectBehaviour> bs;
        const int objects = static_cast<int>(rng.below(4));
        for (int o = 0; o < objects; ++o) {
            bs.push_back(gen::random_behaviour(rng, scheme, "clip" + std::to_string(trial), "obj" + std::to_string(o)));
        }
        const auto program = make_program("clip" + std::to_string(trial), "stir", {{"slowly", "quickly"}, {"in", "out"}},
            bs, trial % 2 == 0 ? bg : std::vector<Fact>{});
        const auto parsed = parse_program(emit_program(program));
        ASSERT_EQ(parsed, program);
        ASSERT_EQ(behaviours_from_program(parsed), bs);
    }
}

TEST(RoundTrip, IncompleteStepIsRejected)
{
    const auto p = parse_program("detected(cat, 1).\nmagnitude(cat, 2.0, 1).\n");
    EXPECT_THROW(behaviours_from_program(p), Error);
}
