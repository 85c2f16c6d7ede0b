#pragma once

#include "advrec/features.hpp"
#include "advrec/pairs.hpp"
#include "advrec/svm.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace advrec {

struct ObjectVote {
    std::string object_label;
    std::string predicted; // adverb or antonym token
};

struct ClipPrediction {
    std::string clip_id;
    AdverbPair pair;
    std::vector<ObjectVote> votes;
    std::string final_label;
    std::size_t adverb_votes{0};
    std::size_t antonym_votes{0};
    bool tie{false};
};

/// Strict majority wins; an exact tie goes to the adverb and sets `tie`.
ClipPrediction majority_vote(const AdverbPair& pair, const std::string& clip_id, std::vector<ObjectVote> votes);

/// Per-object prediction, then per-clip vote (clips in order of first appearance).
std::vector<ClipPrediction> predict_clips(const SvmModel& model, const AdverbPair& pair, const std::vector<FeatureVector>& rows);

struct PairResult {
    AdverbPair pair;
    bool evaluated{false};
    std::size_t clips{0};
    std::size_t correct_clips{0};
    double clip_accuracy{0.0};
    std::size_t snippets{0};      // after balancing by repetition
    std::size_t correct_snippets{0};
    double snippet_accuracy{0.0};
    std::size_t rules{0};
    std::size_t ties{0};
};

/// Clip-level (after voting) and balanced snippet-level accuracy over labelled test rows.
PairResult evaluate_pair(const SvmModel& model, const AdverbPair& pair, const std::vector<FeatureVector>& rows);

struct EvalReport {
    std::vector<PairResult> pairs;
    double average_accuracy{0.0};         // unweighted mean of evaluated clip accuracies
    double average_snippet_accuracy{0.0};
    std::string fingerprint;
    std::vector<std::string> warnings;
};

EvalReport make_report(std::vector<PairResult> pairs, std::string fingerprint, std::vector<std::string> warnings = {});

std::string render_report_text(const EvalReport& report);
std::string render_report_csv(const EvalReport& report);

} // namespace advrec
