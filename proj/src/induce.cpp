#include "advrec/induce.hpp"

#include "advrec/error.hpp"
#include "advrec/util.hpp"

#include <bit>

namespace advrec {

std::vector<Batch> sample_batches(const AdverbPair& pair, const std::vector<ObjectBehaviour>& adverb,
    const std::vector<ObjectBehaviour>& antonym, std::uint64_t seed, std::size_t per_class)
{
    if (per_class == 0) {
        throw Error(ErrorKind::Validation, "batch size per class must be positive");
    }
    if (adverb.size() < per_class || antonym.size() < per_class) {
        throw Error(ErrorKind::InsufficientData,
            pair.display() + " needs at least " + std::to_string(per_class) + " behaviours per class, got " + std::to_string(adverb.size()) + " and " + std::to_string(antonym.size()));
    }
    std::vector<std::size_t> pos(adverb.size());
    std::vector<std::size_t> neg(antonym.size());
    for (std::size_t i = 0; i < pos.size(); ++i) {
        pos[i] = i;
    }
    for (std::size_t i = 0; i < neg.size(); ++i) {
        neg[i] = i;
    }
    Rng rng(seed);
    rng.shuffle(pos);
    rng.shuffle(neg);

    const std::size_t count = std::min(adverb.size(), antonym.size()) / per_class;
    std::vector<Batch> batches;
    batches.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        Batch batch{pair, {}, {}, derive_seed(seed, "batch-" + std::to_string(k))};
        for (std::size_t i = 0; i < per_class; ++i) {
            batch.positives.push_back(adverb[pos[k * per_class + i]]);
            batch.negatives.push_back(antonym[neg[k * per_class + i]]);
        }
        batches.push_back(std::move(batch));
    }
    return batches;
}

std::vector<IndicatorRule> hypothesis_space(Bias bias, const std::string& head, const BucketScheme& scheme)
{
    std::vector<IndicatorRule> out;
    switch (bias) {
    case Bias::Magnitude:
    case Bias::OperationArea: {
        const std::size_t n = bias == Bias::Magnitude ? scheme.magnitude.size() : scheme.area.size();
        for (std::size_t lo = 0; lo < n; ++lo) {
            out.push_back({head, bias, RangeBody{lo, std::nullopt}});
        }
        for (std::size_t hi = 0; hi < n; ++hi) {
            out.push_back({head, bias, RangeBody{std::nullopt, hi}});
        }
        for (std::size_t lo = 0; lo < n; ++lo) {
            for (std::size_t hi = lo; hi < n; ++hi) {
                out.push_back({head, bias, RangeBody{lo, hi}});
            }
        }
        break;
    }
    case Bias::Angle:
        for (std::size_t s = 0; s < kSectorCount; ++s) {
            for (int cw = 0; cw <= 8; ++cw) {
                for (int acw = 0; acw <= 8; ++acw) {
                    if (cw + acw < static_cast<int>(kSectorCount)) {
                        out.push_back({head, bias, ArcBody{static_cast<Sector>(s), cw, acw}});
                    }
                }
            }
        }
        break;
    case Bias::CellOccupancy:
        for (int level = 0; level < static_cast<int>(kPlacementLevels); ++level) {
            for (Vertical v : {Vertical::Top, Vertical::Bottom}) {
                for (Horizontal h : {Horizontal::Left, Horizontal::Right}) {
                    out.push_back({head, bias, CellBody{level, CellPattern::Both, v, h}});
                }
            }
            for (Horizontal h : {Horizontal::Left, Horizontal::Right}) {
                out.push_back({head, bias, CellBody{level, CellPattern::VertFree, Vertical::Top, h}});
            }
            for (Vertical v : {Vertical::Top, Vertical::Bottom}) {
                out.push_back({head, bias, CellBody{level, CellPattern::HorizFree, v, Horizontal::Left}});
            }
        }
        break;
    }
    return out;
}

Verdict pair_verdict(bool adverb_bodyless, bool adverb_fires, bool antonym_bodyless, bool antonym_fires)
{
    if (adverb_bodyless && antonym_bodyless) {
        return Verdict::Undecided;
    }
    if (antonym_bodyless) {
        return adverb_fires ? Verdict::Adverb : Verdict::Antonym;
    }
    if (adverb_bodyless) {
        return antonym_fires ? Verdict::Antonym : Verdict::Adverb;
    }
    if (adverb_fires == antonym_fires) {
        return Verdict::Undecided;
    }
    return adverb_fires ? Verdict::Adverb : Verdict::Antonym;
}

namespace {

struct Candidate {
    IndicatorRule rule;
    std::uint64_t fires{0}; // bit i: fires on batch member i
    std::size_t literals{0};
    std::string text;
};

std::vector<Candidate> candidates_for(Bias bias, const std::string& head, const std::vector<const ObjectBehaviour*>& members,
    const BucketScheme& scheme)
{
    std::vector<Candidate> out;
    IndicatorRule bodyless{head, bias, std::monostate{}};
    const std::uint64_t all = members.size() == 64 ? ~0ULL : ((1ULL << members.size()) - 1);
    out.push_back({bodyless, all, 0, rule_text(bodyless, scheme)});
    for (auto& rule : hypothesis_space(bias, head, scheme)) {
        Candidate c;
        for (std::size_t i = 0; i < members.size(); ++i) {
            if (rule_fires(rule, *members[i], scheme)) {
                c.fires |= 1ULL << i;
            }
        }
        c.literals = body_literal_count(rule);
        c.text = rule_text(rule, scheme);
        c.rule = std::move(rule);
        out.push_back(std::move(c));
    }
    return out;
}

} // namespace

InductionResult induce_pair(const Batch& batch, Bias bias, const BucketScheme& scheme)
{
    std::vector<const ObjectBehaviour*> members;
    for (const auto& b : batch.positives) {
        members.push_back(&b);
    }
    for (const auto& b : batch.negatives) {
        members.push_back(&b);
    }
    if (members.size() > 64) {
        throw Error(ErrorKind::Validation, "batch larger than 64 behaviours");
    }
    const std::size_t total = members.size();
    const std::uint64_t all = total == 64 ? ~0ULL : ((1ULL << total) - 1);
    const std::uint64_t positive = batch.positives.size() == 64 ? ~0ULL : ((1ULL << batch.positives.size()) - 1);
    const std::uint64_t negative = all & ~positive;

    const auto adv = candidates_for(bias, batch.pair.adverb, members, scheme);
    const auto ant = candidates_for(bias, batch.pair.antonym, members, scheme);

    auto correct_of = [&](const Candidate& a, const Candidate& n) -> std::size_t {
        const bool a_free = a.rule.bodyless();
        const bool n_free = n.rule.bodyless();
        std::uint64_t says_adverb = 0;
        std::uint64_t says_antonym = 0;
        if (a_free && n_free) {
            return 0;
        }
        if (n_free) {
            says_adverb = a.fires;
            says_antonym = all & ~a.fires;
        } else if (a_free) {
            says_antonym = n.fires;
            says_adverb = all & ~n.fires;
        } else {
            says_adverb = a.fires & ~n.fires;
            says_antonym = n.fires & ~a.fires;
        }
        return static_cast<std::size_t>(std::popcount(says_adverb & positive) + std::popcount(says_antonym & negative));
    };

    const Candidate* best_a = nullptr;
    const Candidate* best_n = nullptr;
    std::size_t best_correct = 0;
    std::size_t best_literals = 0;
    for (const auto& a : adv) {
        for (const auto& n : ant) {
            const std::size_t correct = correct_of(a, n);
            const std::size_t literals = a.literals + n.literals;
            bool better = best_a == nullptr;
            if (!better) {
                if (correct != best_correct) {
                    better = correct > best_correct;
                } else if (literals != best_literals) {
                    better = literals < best_literals;
                } else {
                    const int cmp = a.text.compare(best_a->text);
                    better = cmp < 0 || (cmp == 0 && n.text < best_n->text);
                }
            }
            if (better) {
                best_a = &a;
                best_n = &n;
                best_correct = correct;
                best_literals = literals;
            }
        }
    }

    InductionResult result;
    result.adverb_rule = best_a->rule;
    result.antonym_rule = best_n->rule;
    result.correct = best_correct;
    result.total = total;
    result.literals = best_literals;
    const bool both_bodyless = best_a->rule.bodyless() && best_n->rule.bodyless();
    if (!both_bodyless && 2 * best_correct > total) {
        if (!best_a->rule.bodyless()) {
            result.rules.push_back(best_a->rule);
        }
        if (!best_n->rule.bodyless()) {
            result.rules.push_back(best_n->rule);
        }
    }
    return result;
}

std::vector<IndicatorRule> induce_for_bias(const Batch& batch, Bias bias, const BucketScheme& scheme)
{
    return induce_pair(batch, bias, scheme).rules;
}

InducedRuleSet collect_indicators(const AdverbPair& pair, const std::vector<Batch>& batches, const BucketScheme& scheme)
{
    InducedRuleSet set{pair, {}, {}};
    for (const auto& batch : batches) {
        for (Bias bias : kAllBiases) {
            for (auto& rule : induce_for_bias(batch, bias, scheme)) {
                ++set.per_bias[static_cast<std::size_t>(bias)];
                set.rules.push_back(std::move(rule));
            }
        }
    }
    return set;
}

std::vector<TaggedRule> to_tagged(const InducedRuleSet& set)
{
    std::vector<TaggedRule> out;
    for (const auto& r : set.rules) {
        out.push_back({set.pair.adverb, set.pair.antonym, r});
    }
    return out;
}

InducedRuleSet from_tagged(const AdverbPair& pair, const std::vector<TaggedRule>& rules)
{
    InducedRuleSet set{pair, {}, {}};
    for (const auto& t : rules) {
        if (t.adverb != pair.adverb || t.antonym != pair.antonym) {
            throw Error(ErrorKind::Validation, "rule tagged " + t.adverb + "/" + t.antonym + " does not belong to " + pair.display());
        }
        ++set.per_bias[static_cast<std::size_t>(t.rule.bias)];
        set.rules.push_back(t.rule);
    }
    return set;
}

} // namespace advrec
