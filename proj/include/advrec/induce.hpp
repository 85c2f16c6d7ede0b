#pragma once

#include "advrec/behaviour.hpp"
#include "advrec/pairs.hpp"
#include "advrec/rule.hpp"
#include "advrec/scheme.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace advrec {

inline constexpr std::size_t kBatchPerClass = 10;

struct Batch {
    AdverbPair pair;
    std::vector<ObjectBehaviour> positives; // labelled adverb
    std::vector<ObjectBehaviour> negatives; // labelled antonym
    std::uint64_t rng_seed{0};
};

/// floor(min(n_adverb, n_antonym) / per_class) batches streamed through a seeded
/// shuffle of each class, sampled without replacement.
std::vector<Batch> sample_batches(const AdverbPair& pair, const std::vector<ObjectBehaviour>& adverb,
    const std::vector<ObjectBehaviour>& antonym, std::uint64_t seed, std::size_t per_class = kBatchPerClass);

/// Every bodied rule of the bias for `head`, in enumeration order.
///   Magnitude/OperationArea: B(B+1)/2 two-sided + 2B one-sided ranges over B buckets.
///   Angle: 8 anchors x (cw, acw) reaches with cw + acw <= 7 (36 per anchor).
///   CellOccupancy: 3 levels x (4 both-constant + 2 vert-free + 2 horiz-free).
std::vector<IndicatorRule> hypothesis_space(Bias bias, const std::string& head, const BucketScheme& scheme);

/// Outcome of a candidate pair on a batch. A bodyless member acts as the default class:
/// with one bodied rule R, a behaviour gets R's class iff R fires and the other class otherwise.
/// With two bodied rules the class is assigned only when exactly one fires.
enum class Verdict { Adverb, Antonym, Undecided };
Verdict pair_verdict(bool adverb_bodyless, bool adverb_fires, bool antonym_bodyless, bool antonym_fires);

struct InductionResult {
    IndicatorRule adverb_rule;  // possibly bodyless
    IndicatorRule antonym_rule; // possibly bodyless
    std::size_t correct{0};
    std::size_t total{0};
    std::size_t literals{0};
    std::vector<IndicatorRule> rules; // bodied members of an accepted winner; empty when rejected
};

/// Exhaustive search for the best rule pair: fewest misclassified behaviours, then fewest
/// body literals, then lexicographically smallest clause text (adverb clause, antonym clause).
/// The winner is rejected when it classifies <= 50% correctly or both members are bodyless.
InductionResult induce_pair(const Batch& batch, Bias bias, const BucketScheme& scheme);

std::vector<IndicatorRule> induce_for_bias(const Batch& batch, Bias bias, const BucketScheme& scheme);

struct InducedRuleSet {
    AdverbPair pair;
    std::vector<IndicatorRule> rules; // multiset, duplicates preserved
    std::array<std::size_t, 4> per_bias{};

    std::size_t count(Bias b) const { return per_bias[static_cast<std::size_t>(b)]; }
};

/// Batch order, then bias order (Magnitude, Angle, OperationArea, CellOccupancy), then rule order.
InducedRuleSet collect_indicators(const AdverbPair& pair, const std::vector<Batch>& batches, const BucketScheme& scheme);

std::vector<TaggedRule> to_tagged(const InducedRuleSet& set);
InducedRuleSet from_tagged(const AdverbPair& pair, const std::vector<TaggedRule>& rules);

} // namespace advrec
