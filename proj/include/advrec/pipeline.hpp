#pragma once

#include "advrec/asp.hpp"
#include "advrec/classify.hpp"
#include "advrec/features.hpp"
#include "advrec/flatten.hpp"
#include "advrec/induce.hpp"
#include "advrec/pairs.hpp"
#include "advrec/scheme.hpp"
#include "advrec/svm.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace advrec {

namespace fs = std::filesystem;

/// One row of `clips.tsv`: `<clip_id>\t<action>\t<label>[,<label>...]`.
struct ClipEntry {
    std::string clip_id;
    std::string action;
    std::vector<std::string> labels;
    bool operator==(const ClipEntry&) const = default;
};

inline constexpr const char* kManifestName = "clips.tsv";

std::vector<ClipEntry> parse_manifest(std::string_view text);
std::vector<ClipEntry> load_manifest(const fs::path& path);
std::string serialize_manifest(const std::vector<ClipEntry>& clips);

/// Each label must belong to a pair; the tag records the label and its opposite.
std::vector<AdverbTag> tags_for(const std::vector<std::string>& labels, const std::vector<AdverbPair>& pairs);

struct PipelineConfig {
    fs::path obs_dir;
    fs::path work_dir;
    fs::path embeddings;
    std::optional<fs::path> summary_vectors;
    std::optional<fs::path> scheme_file;
    std::optional<fs::path> pairs_file;
    int window{5};
    BucketScheme scheme{BucketScheme::defaults()};
    std::uint64_t seed{0};
    SvmParams svm;
    std::vector<AdverbPair> pairs{default_pairs()};
    double test_fraction{0.3};

    /// Canonical `key = value` rendering of every setting that affects outputs.
    std::string describe() const;
    std::string fingerprint() const;
};

/// Working-directory layout used by `pipeline`.
struct WorkLayout {
    fs::path root;
    fs::path asp_all() const { return root / "asp" / "all"; }
    fs::path asp_train() const { return root / "asp" / "train"; }
    fs::path asp_test() const { return root / "asp" / "test"; }
    fs::path rules() const { return root / "rules"; }
    fs::path features_train() const { return root / "features" / "train"; }
    fs::path features_test() const { return root / "features" / "test"; }
    fs::path models() const { return root / "models"; }
    fs::path report() const { return root / "report.txt"; }
    fs::path report_csv() const { return root / "report.csv"; }
    fs::path run_manifest() const { return root / "run_manifest.txt"; }
};

/// Progress and non-fatal conditions collected by the stages.
struct StageLog {
    std::vector<std::string> warnings;
    std::vector<std::string> notes;
    void warn(std::string message) { warnings.push_back(std::move(message)); }
    void note(std::string message) { notes.push_back(std::move(message)); }
};

/// Observations (+ optional flow sidecar) of one clip to a labelled program with background.
AspProgram extract_clip(const fs::path& obs, const std::optional<fs::path>& flow, const BucketScheme& scheme, int window,
    const std::string& clip_id, const std::string& action, std::vector<AdverbTag> tags);

/// Extracts every manifest clip from `obs_dir` into `<out_dir>/<clip_id>.lp`.
/// A `<clip_id>.flow` sidecar is used when present.
void emit_corpus(const fs::path& obs_dir, const std::vector<AdverbPair>& pairs, const BucketScheme& scheme, int window,
    const fs::path& out_dir, StageLog& log);

/// Programs of a directory, ordered by file name.
std::vector<AspProgram> load_corpus(const fs::path& dir);

/// Clip-level split stratified by each clip's sorted label set; `test_fraction` of every stratum
/// (rounded to nearest) goes to test, chosen by a seeded shuffle.
void split_corpus(const fs::path& asp_dir, std::uint64_t seed, double test_fraction, const fs::path& train_dir,
    const fs::path& test_dir, StageLog& log);

/// Behaviours of `pair`, split by class, in corpus order.
struct PairBehaviours {
    std::vector<ObjectBehaviour> adverb;
    std::vector<ObjectBehaviour> antonym;
};
PairBehaviours behaviours_for_pair(const std::vector<AspProgram>& corpus, const AdverbPair& pair);

/// Writes `<out_dir>/<adverb>-<antonym>.rules` for every pair (empty when nothing was learned).
std::map<std::string, InducedRuleSet> induce_corpus(const std::vector<AspProgram>& corpus,
    const std::vector<AdverbPair>& pairs, const BucketScheme& scheme, std::uint64_t seed, const fs::path& out_dir,
    StageLog& log);

std::map<std::string, InducedRuleSet> load_rules_dir(const fs::path& dir, const std::vector<AdverbPair>& pairs,
    const BucketScheme& scheme);

/// Writes `<out_dir>/<pair>.csv` for every pair. Indicator features unless `summaries` is given.
void featurize_corpus(const std::vector<AspProgram>& corpus, const std::vector<AdverbPair>& pairs,
    const std::map<std::string, InducedRuleSet>& rules, const EmbeddingTable& embeddings,
    const EmbeddingTable* summaries, const BucketScheme& scheme, const fs::path& out_dir, StageLog& log);

std::vector<FeatureVector> load_feature_csv(const fs::path& path, const AdverbPair& pair);

/// Balances each pair's rows by repetition and trains `<out_dir>/<pair>.model`.
/// Pairs without rows of both classes are skipped with a warning.
void train_corpus(const fs::path& features_dir, const std::vector<AdverbPair>& pairs, const SvmParams& params,
    const fs::path& out_dir, StageLog& log);

/// Tab-separated `pair clip_id final adverb_votes antonym_votes tie` per clip.
std::string predict_corpus(const fs::path& features_dir, const fs::path& models_dir,
    const std::vector<AdverbPair>& pairs, StageLog& log);

/// Pairs with test rows need a model; missing model files are reported together.
EvalReport evaluate_corpus(const fs::path& features_dir, const fs::path& models_dir,
    const std::vector<AdverbPair>& pairs, const fs::path& rules_dir, const std::string& fingerprint, StageLog& log);

/// Writes the text report to `path` and the CSV next to it (`.csv` extension).
void write_report(const EvalReport& report, const fs::path& path);

/// Flattens every behaviour of a program directory (or single program file).
std::vector<FlatBehaviour> flatten_corpus(const fs::path& asp_path);

/// extract -> emit -> split -> induce -> featurize -> train -> evaluate under `config.work_dir`,
/// plus a run manifest recording the config fingerprint and input digests.
EvalReport run_pipeline(const PipelineConfig& config, StageLog& log);

/// `advrec-run 1`, fingerprint, config lines, then `input <name> <fnv1a>` per input file.
std::string render_run_manifest(const PipelineConfig& config);

} // namespace advrec
