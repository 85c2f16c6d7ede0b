#pragma once

#include "advrec/features.hpp"
#include "advrec/observation.hpp"
#include "advrec/pipeline.hpp"
#include "advrec/rule.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace advrec {

/// Generated observation corpus in the layout `emit_corpus` reads.
struct SyntheticCorpus {
    std::vector<ClipEntry> clips;
    std::map<std::string, std::vector<FrameObservation>> observations; // by clip id
    EmbeddingTable embeddings;                                       // action-type vectors
};

/// A pair whose adverb class is decided by one property, learnable by one bias family.
struct PlantedPair {
    AdverbPair pair;
    Bias bias;
};

/// slowly/quickly by magnitude, upwards/downwards by direction, outdoor/indoor by operation area,
/// out/in by level-0 vertical placement.
std::vector<PlantedPair> planted_pairs();

/// Every clip carries one label of each planted pair, balanced per pair and assigned independently.
/// Two moving objects follow the labels; a static confident distractor and a low-confidence
/// detection are added to every frame.
SyntheticCorpus planted_corpus(std::size_t clips, std::uint64_t seed, int frames = 25);

/// slowly/quickly labels alternate over clips whose single object behaves identically after
/// discretization (magnitude varies only inside one bucket).
SyntheticCorpus inseparable_corpus(std::size_t clips, std::uint64_t seed, int frames = 25);

/// Writes `clips.tsv` and `<clip_id>.jsonl` into `obs_dir`, and the embedding table to `embeddings`.
void write_synthetic(const SyntheticCorpus& corpus, const std::filesystem::path& obs_dir,
    const std::filesystem::path& embeddings);

} // namespace advrec
