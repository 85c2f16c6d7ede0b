#include "advrec/classify.hpp"

#include "advrec/error.hpp"

#include <cstdio>
#include <map>

namespace advrec {

ClipPrediction majority_vote(const AdverbPair& pair, const std::string& clip_id, std::vector<ObjectVote> votes)
{
    if (votes.empty()) {
        throw Error(ErrorKind::Validation, "clip '" + clip_id + "' has no object predictions to vote over");
    }
    ClipPrediction out{clip_id, pair, std::move(votes), {}, 0, 0, false};
    for (const auto& v : out.votes) {
        if (v.predicted == pair.adverb) {
            ++out.adverb_votes;
        } else if (v.predicted == pair.antonym) {
            ++out.antonym_votes;
        } else {
            throw Error(ErrorKind::Validation, "vote '" + v.predicted + "' is not part of " + pair.display());
        }
    }
    out.tie = out.adverb_votes == out.antonym_votes;
    out.final_label = out.antonym_votes > out.adverb_votes ? pair.antonym : pair.adverb;
    return out;
}

std::vector<ClipPrediction> predict_clips(const SvmModel& model, const AdverbPair& pair, const std::vector<FeatureVector>& rows)
{
    std::vector<std::string> order;
    std::map<std::string, std::vector<ObjectVote>> votes;
    for (const auto& row : rows) {
        auto [it, inserted] = votes.try_emplace(row.clip_id);
        if (inserted) {
            order.push_back(row.clip_id);
        }
        it->second.push_back({row.object_label, predict_label(model, row.values)});
    }
    std::vector<ClipPrediction> out;
    out.reserve(order.size());
    for (const auto& clip : order) {
        out.push_back(majority_vote(pair, clip, std::move(votes[clip])));
    }
    return out;
}

PairResult evaluate_pair(const SvmModel& model, const AdverbPair& pair, const std::vector<FeatureVector>& rows)
{
    PairResult result;
    result.pair = pair;
    if (rows.empty()) {
        return result;
    }
    std::map<std::string, std::string> truth;
    for (const auto& row : rows) {
        auto [it, inserted] = truth.emplace(row.clip_id, row.label);
        if (!inserted && it->second != row.label) {
            throw Error(ErrorKind::Validation, "clip '" + row.clip_id + "' has conflicting labels for " + pair.display());
        }
    }
    for (const auto& clip : predict_clips(model, pair, rows)) {
        ++result.clips;
        if (clip.final_label == truth[clip.clip_id]) {
            ++result.correct_clips;
        }
        if (clip.tie) {
            ++result.ties;
        }
    }
    result.clip_accuracy = static_cast<double>(result.correct_clips) / static_cast<double>(result.clips);

    std::vector<const FeatureVector*> adverb_rows;
    std::vector<const FeatureVector*> antonym_rows;
    for (const auto& row : rows) {
        (row.label == pair.adverb ? adverb_rows : antonym_rows).push_back(&row);
    }
    std::vector<const FeatureVector*> snippets;
    if (!adverb_rows.empty() && !antonym_rows.empty()) {
        auto [a, b] = balance_by_repetition(std::move(adverb_rows), std::move(antonym_rows));
        snippets.insert(snippets.end(), a.begin(), a.end());
        snippets.insert(snippets.end(), b.begin(), b.end());
    } else {
        snippets.insert(snippets.end(), adverb_rows.begin(), adverb_rows.end());
        snippets.insert(snippets.end(), antonym_rows.begin(), antonym_rows.end());
    }
    for (const auto* row : snippets) {
        ++result.snippets;
        if (predict_label(model, row->values) == row->label) {
            ++result.correct_snippets;
        }
    }
    result.snippet_accuracy = static_cast<double>(result.correct_snippets) / static_cast<double>(result.snippets);
    result.evaluated = true;
    return result;
}

EvalReport make_report(std::vector<PairResult> pairs, std::string fingerprint, std::vector<std::string> warnings)
{
    EvalReport report;
    report.pairs = std::move(pairs);
    report.fingerprint = std::move(fingerprint);
    report.warnings = std::move(warnings);
    double sum = 0.0;
    double snippet_sum = 0.0;
    std::size_t n = 0;
    for (const auto& p : report.pairs) {
        if (!p.evaluated) {
            report.warnings.push_back(p.pair.display() + " has no test clips; excluded from the average");
            continue;
        }
        sum += p.clip_accuracy;
        snippet_sum += p.snippet_accuracy;
        ++n;
    }
    if (n > 0) {
        report.average_accuracy = sum / static_cast<double>(n);
        report.average_snippet_accuracy = snippet_sum / static_cast<double>(n);
    }
    return report;
}

namespace {

std::string percent(double fraction)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", 100.0 * fraction);
    return buf;
}

std::string pad(const std::string& s, std::size_t width, bool left = false)
{
    if (s.size() >= width) {
        return s;
    }
    const std::string fill(width - s.size(), ' ');
    return left ? s + fill : fill + s;
}

} // namespace

std::string render_report_text(const EvalReport& report)
{
    std::string out;
    out += pad("pair", 28, true) + pad("clips", 7) + pad("clip_acc%", 11) + pad("snippets", 10) + pad("snip_acc%", 11) + pad("rules", 8) + "\n";
    for (const auto& p : report.pairs) {
        out += pad(p.pair.display(), 28, true);
        if (p.evaluated) {
            out += pad(std::to_string(p.clips), 7) + pad(percent(p.clip_accuracy), 11) + pad(std::to_string(p.snippets), 10) + pad(percent(p.snippet_accuracy), 11);
        } else {
            out += pad("0", 7) + pad("n/a", 11) + pad("0", 10) + pad("n/a", 11);
        }
        out += pad(std::to_string(p.rules), 8) + "\n";
    }
    out += pad("average", 28, true) + pad("", 7) + pad(percent(report.average_accuracy), 11) + pad("", 10) + pad(percent(report.average_snippet_accuracy), 11) + "\n";
    out += "fingerprint " + report.fingerprint + "\n";
    for (const auto& w : report.warnings) {
        out += "warning: " + w + "\n";
    }
    return out;
}

std::string render_report_csv(const EvalReport& report)
{
    std::string out = "pair,clips,clip_accuracy,snippets,snippet_accuracy,rules\n";
    for (const auto& p : report.pairs) {
        out += p.pair.display() + ",";
        if (p.evaluated) {
            out += std::to_string(p.clips) + "," + percent(p.clip_accuracy) + "," + std::to_string(p.snippets) + "," + percent(p.snippet_accuracy);
        } else {
            out += "0,n/a,0,n/a";
        }
        out += "," + std::to_string(p.rules) + "\n";
    }
    out += "average,," + percent(report.average_accuracy) + ",," + percent(report.average_snippet_accuracy) + ",\n";
    return out;
}

} // namespace advrec
