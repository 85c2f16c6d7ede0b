#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace advrec {

struct AdverbPair {
    std::string adverb;
    std::string antonym;

    /// File-name stem, `<adverb>-<antonym>`.
    std::string key() const { return adverb + "-" + antonym; }
    std::string display() const { return adverb + "/" + antonym; }
    bool contains(std::string_view label) const { return label == adverb || label == antonym; }
    bool operator==(const AdverbPair&) const = default;
};

/// The eleven evaluation pairs, in report order.
std::vector<AdverbPair> default_pairs();

/// One pair per line, `adverb antonym` or `adverb/antonym`; `#` comments.
std::vector<AdverbPair> parse_pairs(std::string_view text);
std::vector<AdverbPair> load_pairs(const std::filesystem::path& path);

/// Pair containing `label`, if any.
std::optional<AdverbPair> pair_of(const std::vector<AdverbPair>& pairs, std::string_view label);

} // namespace advrec
