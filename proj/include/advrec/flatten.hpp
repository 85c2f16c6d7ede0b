#pragma once

#include "advrec/behaviour.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace advrec {

enum class WordRole { Object, Prompt, Value };

inline constexpr std::size_t kMaxFlatWords = 512;
inline constexpr std::size_t kWordsPerStep = 19;
inline constexpr std::string_view kMaskToken = "[MASK]";

/// Space-separated rendering of a behaviour without timestamps or punctuation:
/// per step `<label> magnitude <m> angle <sector> operation area <bucket>
/// movement in place <bucket> place <v0> <h0> <v1> <h1> <v2> <h2>`.
struct FlatBehaviour {
    std::string clip_id;
    std::string object_label;
    std::vector<std::string> words;
    std::vector<WordRole> roles;

    std::string key() const;
    std::string text() const;
    bool operator==(const FlatBehaviour&) const = default;
};

/// Roles are positional within each 19-word step segment.
std::vector<WordRole> roles_for_length(std::size_t words);

FlatBehaviour flatten(const ObjectBehaviour& b, std::size_t max_words = kMaxFlatWords);

struct MaskedSample {
    std::string clip_id;
    std::string object_label;
    std::vector<std::string> words;
    std::vector<std::pair<std::size_t, std::string>> targets; // (position, original word)

    std::string key() const;
    /// Restores every masked position from `targets`.
    std::vector<std::string> unmasked() const;
};

/// Masks each value-word independently with probability `rate`. Object and prompt words are never masked.
MaskedSample mask_values(const FlatBehaviour& f, double rate, std::uint64_t seed);

/// Per-sample seed from the global seed and the `<clip>#<object>` key, so output is independent of processing order.
std::uint64_t sample_seed(std::uint64_t global_seed, std::string_view key);

/// Corpus line: `<clip_id>#<object_label>\t<text>`.
std::string corpus_line(const FlatBehaviour& f);
std::string write_corpus(const std::vector<FlatBehaviour>& corpus);
std::vector<FlatBehaviour> parse_corpus(std::string_view text);

/// Masked corpus line: `<key>\t<masked text>\t<pos:word ...>`.
std::string masked_line(const MaskedSample& m);
std::string write_masked_corpus(const std::vector<MaskedSample>& samples);
std::vector<MaskedSample> parse_masked_corpus(std::string_view text);

} // namespace advrec
