#pragma once

#include "advrec/behaviour.hpp"
#include "advrec/error.hpp"
#include "advrec/induce.hpp"
#include "advrec/pairs.hpp"
#include "advrec/scheme.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace advrec {

/// Token -> vector table in the textual word-vector format (`count dim` header,
/// then `token v1 .. vdim` per line).
struct EmbeddingTable {
    std::size_t dim{0};
    std::map<std::string, std::vector<double>> entries;

    /// Zero vector for absent tokens; the token is appended to `missing` when given.
    std::vector<double> lookup(const std::string& token, std::vector<std::string>* missing = nullptr) const;
    bool contains(const std::string& token) const { return entries.contains(token); }
};

EmbeddingTable parse_word_vectors(std::string_view text);
EmbeddingTable load_embeddings(const std::filesystem::path& path);
std::string serialize_word_vectors(const EmbeddingTable& table);

/// Summary vectors are word-vector files keyed `<clip_id>#<object_label>`.
std::string summary_key(std::string_view clip_id, std::string_view object_label);
EmbeddingTable import_summary_vectors(const std::filesystem::path& path);

enum class FeatureSource { Indicator, Summary };

struct FeatureVector {
    std::string clip_id;
    std::string object_label;
    std::string label; // adverb or antonym token
    std::vector<double> values;
    FeatureSource source{FeatureSource::Indicator};
    AdverbPair pair;
};

/// Bit i = rule_fires(rules[i], b); duplicates occupy separate positions.
std::vector<std::uint8_t> indicator_vector(const ObjectBehaviour& b, const InducedRuleSet& rules, const BucketScheme& scheme);

/// [indicator bits | action embedding]
FeatureVector indicator_features(const ObjectBehaviour& b, const std::string& label, const std::string& action,
    const InducedRuleSet& rules, const EmbeddingTable& embeddings, const BucketScheme& scheme,
    std::vector<std::string>* missing_actions = nullptr);

/// [summary vector | action embedding]; throws Error(Missing) when the summary key is absent.
FeatureVector summary_features(const ObjectBehaviour& b, const std::string& label, const std::string& action,
    const AdverbPair& pair, const EmbeddingTable& summaries, const EmbeddingTable& embeddings,
    std::vector<std::string>* missing_actions = nullptr);

/// Repeats the smaller class cyclically until both classes have equal counts.
template <typename T>
std::pair<std::vector<T>, std::vector<T>> balance_by_repetition(std::vector<T> first, std::vector<T> second)
{
    if (first.empty() || second.empty()) {
        throw Error(ErrorKind::InsufficientData, "cannot balance a class with zero samples");
    }
    auto grow = [](std::vector<T>& small, std::size_t target) {
        const std::size_t original = small.size();
        small.reserve(target);
        for (std::size_t i = original; i < target; ++i) {
            small.push_back(small[i % original]);
        }
    };
    if (first.size() < second.size()) {
        grow(first, second.size());
    } else if (second.size() < first.size()) {
        grow(second, first.size());
    }
    return {std::move(first), std::move(second)};
}

/// Header `clip_id,object,label,v0..vN`.
std::string write_feature_csv(const std::vector<FeatureVector>& rows);
std::vector<FeatureVector> parse_feature_csv(std::string_view text, const AdverbPair& pair);

} // namespace advrec
