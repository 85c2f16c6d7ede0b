#include "advrec/pipeline.hpp"

#include "advrec/behaviour.hpp"
#include "advrec/error.hpp"
#include "advrec/observation.hpp"
#include "advrec/rule.hpp"
#include "advrec/util.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace advrec {

namespace {

std::string joined(const std::vector<std::string>& items, std::string_view sep)
{
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i > 0) {
            out += sep;
        }
        out += items[i];
    }
    return out;
}

std::vector<fs::path> files_with_extension(const fs::path& dir, std::string_view ext)
{
    if (!fs::is_directory(dir)) {
        throw Error(ErrorKind::Missing, "directory not found: " + dir.string());
    }
    std::vector<fs::path> out;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ext) {
            out.push_back(entry.path());
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Removes stale outputs of a previous run so a directory reflects only this run.
void reset_outputs(const fs::path& dir, std::string_view ext)
{
    fs::create_directories(dir);
    for (const auto& path : files_with_extension(dir, ext)) {
        fs::remove(path);
    }
}

fs::path pair_file(const fs::path& dir, const AdverbPair& pair, std::string_view ext)
{
    return dir / (pair.key() + std::string(ext));
}

std::string sorted_label_key(const AspProgram& p)
{
    std::vector<std::string> labels;
    for (const auto& tag : p.adverb_labels) {
        labels.push_back(tag.adverb);
    }
    std::sort(labels.begin(), labels.end());
    return joined(labels, ",");
}

/// Class label a program carries for `pair`, if any.
std::optional<std::string> label_for_pair(const AspProgram& p, const AdverbPair& pair)
{
    for (const auto& tag : p.adverb_labels) {
        if (pair.contains(tag.adverb)) {
            return tag.adverb;
        }
    }
    return std::nullopt;
}

} // namespace

std::vector<ClipEntry> parse_manifest(std::string_view text)
{
    std::vector<ClipEntry> out;
    std::set<std::string> seen;
    std::size_t line_no = 0;
    for (const auto& raw : split(text, '\n')) {
        ++line_no;
        const auto line = trim(raw);
        if (line.empty() || line.front() == '#') {
            continue;
        }
        const auto fields = split(line, '\t');
        if (fields.size() != 3) {
            throw Error(ErrorKind::Parse, "expected '<clip_id>\\t<action>\\t<labels>'", line_no);
        }
        ClipEntry entry{std::string(trim(fields[0])), normalize_token(trim(fields[1])), {}};
        if (entry.clip_id.empty() || entry.clip_id.find_first_of("#/\\ ") != std::string::npos) {
            throw Error(ErrorKind::Validation, "bad clip id '" + entry.clip_id + "'", line_no);
        }
        if (!is_token(entry.action)) {
            throw Error(ErrorKind::Validation, "bad action token '" + entry.action + "'", line_no);
        }
        for (const auto& label : split(fields[2], ',')) {
            auto token = normalize_token(trim(label));
            if (!is_token(token)) {
                throw Error(ErrorKind::Validation, "bad adverb label '" + token + "'", line_no);
            }
            entry.labels.push_back(std::move(token));
        }
        if (!seen.insert(entry.clip_id).second) {
            throw Error(ErrorKind::Validation, "duplicate clip id '" + entry.clip_id + "'", line_no);
        }
        out.push_back(std::move(entry));
    }
    return out;
}

std::vector<ClipEntry> load_manifest(const fs::path& path)
{
    try {
        return parse_manifest(read_text_file(path));
    } catch (const Error& e) {
        throw e.in_file(path.string());
    }
}

std::string serialize_manifest(const std::vector<ClipEntry>& clips)
{
    std::string out;
    for (const auto& c : clips) {
        out += c.clip_id + "\t" + c.action + "\t" + joined(c.labels, ",") + "\n";
    }
    return out;
}

std::vector<AdverbTag> tags_for(const std::vector<std::string>& labels, const std::vector<AdverbPair>& pairs)
{
    std::vector<AdverbTag> tags;
    std::set<std::string> used_pairs;
    for (const auto& label : labels) {
        const auto pair = pair_of(pairs, label);
        if (!pair) {
            throw Error(ErrorKind::Validation, "label '" + label + "' belongs to no configured pair");
        }
        if (!used_pairs.insert(pair->key()).second) {
            throw Error(ErrorKind::Validation, "clip carries both or repeated labels of pair " + pair->display());
        }
        tags.push_back({label, label == pair->adverb ? pair->antonym : pair->adverb});
    }
    return tags;
}

std::string PipelineConfig::describe() const
{
    std::string out;
    out += "window = " + std::to_string(window) + "\n";
    out += "seed = " + std::to_string(seed) + "\n";
    out += "test_fraction = " + format_real(test_fraction) + "\n";
    out += "svm.C = " + format_real(svm.C) + "\n";
    out += "svm.gamma = " + (svm.gamma ? format_real(*svm.gamma) : std::string("scale")) + "\n";
    out += "svm.tolerance = " + format_real(svm.tolerance) + "\n";
    out += "features = " + std::string(summary_vectors ? "summary" : "indicator") + "\n";
    std::vector<std::string> pair_names;
    for (const auto& p : pairs) {
        pair_names.push_back(p.display());
    }
    out += "pairs = " + joined(pair_names, " ") + "\n";
    for (const auto& line : split(scheme.serialize(), '\n')) {
        if (!trim(line).empty()) {
            out += "scheme." + std::string(trim(line)) + "\n";
        }
    }
    return out;
}

std::string PipelineConfig::fingerprint() const
{
    return hex_digest(fnv1a(describe()));
}

AspProgram extract_clip(const fs::path& obs, const std::optional<fs::path>& flow, const BucketScheme& scheme, int window,
    const std::string& clip_id, const std::string& action, std::vector<AdverbTag> tags)
{
    auto frames = load_observations(obs);
    std::optional<FlowSequence> sidecar;
    if (flow) {
        sidecar = load_flow_sequence(*flow);
    }
    try {
        frames = resolve_flow(std::move(frames), sidecar ? &*sidecar : nullptr);
    } catch (const Error& e) {
        throw e.in_file(obs.string());
    }
    const auto extraction = extract_behaviours(frames, scheme, window, clip_id);
    return make_program(clip_id, action, std::move(tags), extraction.behaviours, generate_background(scheme));
}

void emit_corpus(const fs::path& obs_dir, const std::vector<AdverbPair>& pairs, const BucketScheme& scheme, int window,
    const fs::path& out_dir, StageLog& log)
{
    const auto manifest_path = obs_dir / kManifestName;
    if (!fs::exists(manifest_path)) {
        throw Error(ErrorKind::Missing, "clip manifest not found: " + manifest_path.string());
    }
    const auto clips = load_manifest(manifest_path);
    reset_outputs(out_dir, ".lp");
    std::size_t empty = 0;
    std::size_t behaviours = 0;
    for (const auto& clip : clips) {
        std::vector<AdverbTag> tags;
        try {
            tags = tags_for(clip.labels, pairs);
        } catch (const Error& e) {
            throw Error(e.kind(), "clip " + clip.clip_id + ": " + e.detail(), 0, manifest_path.string());
        }
        const auto obs = obs_dir / (clip.clip_id + ".jsonl");
        if (!fs::exists(obs)) {
            throw Error(ErrorKind::Missing, "observation file not found: " + obs.string());
        }
        std::optional<fs::path> flow;
        if (const auto sidecar = obs_dir / (clip.clip_id + ".flow"); fs::exists(sidecar)) {
            flow = sidecar;
        }
        const auto program = extract_clip(obs, flow, scheme, window, clip.clip_id, clip.action, std::move(tags));
        const auto objects = behaviours_from_program(program).size();
        empty += objects == 0 ? 1 : 0;
        behaviours += objects;
        write_file_atomic(out_dir / (clip.clip_id + ".lp"), emit_program(program));
    }
    log.note("emit: " + std::to_string(clips.size()) + " clips, " + std::to_string(behaviours) + " behaviours");
    if (empty > 0) {
        log.warn("emit: " + std::to_string(empty) + " clips have no salient confident object and are skipped downstream");
    }
}

std::vector<AspProgram> load_corpus(const fs::path& dir)
{
    std::vector<AspProgram> out;
    for (const auto& path : files_with_extension(dir, ".lp")) {
        out.push_back(load_program(path));
    }
    return out;
}

void split_corpus(const fs::path& asp_dir, std::uint64_t seed, double test_fraction, const fs::path& train_dir,
    const fs::path& test_dir, StageLog& log)
{
    if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
        throw Error(ErrorKind::Validation, "test fraction must lie in (0, 1)");
    }
    std::map<std::string, std::vector<fs::path>> strata;
    for (const auto& path : files_with_extension(asp_dir, ".lp")) {
        strata[sorted_label_key(load_program(path))].push_back(path);
    }
    reset_outputs(train_dir, ".lp");
    reset_outputs(test_dir, ".lp");
    std::size_t n_train = 0;
    std::size_t n_test = 0;
    for (auto& [key, paths] : strata) {
        Rng rng(derive_seed(seed, "split:" + key));
        rng.shuffle(paths);
        const auto n = static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(paths.size())));
        for (std::size_t i = 0; i < paths.size(); ++i) {
            const auto& dest = i < n ? test_dir : train_dir;
            write_file_atomic(dest / paths[i].filename(), read_text_file(paths[i]));
        }
        n_test += n;
        n_train += paths.size() - n;
    }
    log.note("split: " + std::to_string(n_train) + " train clips, " + std::to_string(n_test) + " test clips, "
        + std::to_string(strata.size()) + " strata");
}

PairBehaviours behaviours_for_pair(const std::vector<AspProgram>& corpus, const AdverbPair& pair)
{
    PairBehaviours out;
    for (const auto& program : corpus) {
        const auto label = label_for_pair(program, pair);
        if (!label) {
            continue;
        }
        auto& dest = *label == pair.adverb ? out.adverb : out.antonym;
        for (auto& b : behaviours_from_program(program)) {
            dest.push_back(std::move(b));
        }
    }
    return out;
}

std::map<std::string, InducedRuleSet> induce_corpus(const std::vector<AspProgram>& corpus,
    const std::vector<AdverbPair>& pairs, const BucketScheme& scheme, std::uint64_t seed, const fs::path& out_dir,
    StageLog& log)
{
    reset_outputs(out_dir, ".rules");
    std::map<std::string, InducedRuleSet> out;
    for (const auto& pair : pairs) {
        const auto data = behaviours_for_pair(corpus, pair);
        InducedRuleSet set{pair, {}, {}};
        if (std::min(data.adverb.size(), data.antonym.size()) < kBatchPerClass) {
            if (!data.adverb.empty() || !data.antonym.empty()) {
                log.warn("induce " + pair.display() + ": fewer than " + std::to_string(kBatchPerClass)
                    + " behaviours in a class, no rules induced");
            }
        } else {
            const auto batches = sample_batches(pair, data.adverb, data.antonym, derive_seed(seed, pair.key()));
            set = collect_indicators(pair, batches, scheme);
            log.note("induce " + pair.display() + ": " + std::to_string(batches.size()) + " batches, "
                + std::to_string(set.rules.size()) + " rules");
        }
        write_file_atomic(pair_file(out_dir, pair, ".rules"), emit_rules(to_tagged(set), scheme));
        out.emplace(pair.key(), std::move(set));
    }
    return out;
}

std::map<std::string, InducedRuleSet> load_rules_dir(const fs::path& dir, const std::vector<AdverbPair>& pairs,
    const BucketScheme& scheme)
{
    std::map<std::string, InducedRuleSet> out;
    std::vector<std::string> missing;
    for (const auto& pair : pairs) {
        const auto path = pair_file(dir, pair, ".rules");
        if (!fs::exists(path)) {
            missing.push_back(path.string());
            continue;
        }
        try {
            auto tagged = parse_rules(read_text_file(path), scheme);
            for (const auto& t : tagged) {
                if (t.adverb != pair.adverb || t.antonym != pair.antonym) {
                    throw Error(ErrorKind::Validation, "rule belongs to pair " + t.adverb + "/" + t.antonym);
                }
            }
            out.emplace(pair.key(), from_tagged(pair, tagged));
        } catch (const Error& e) {
            throw e.in_file(path.string());
        }
    }
    if (!missing.empty()) {
        throw Error(ErrorKind::Missing, "rule files not found (run `advrec induce` first): " + joined(missing, ", "));
    }
    return out;
}

void featurize_corpus(const std::vector<AspProgram>& corpus, const std::vector<AdverbPair>& pairs,
    const std::map<std::string, InducedRuleSet>& rules, const EmbeddingTable& embeddings,
    const EmbeddingTable* summaries, const BucketScheme& scheme, const fs::path& out_dir, StageLog& log)
{
    reset_outputs(out_dir, ".csv");
    std::set<std::string> missing_actions;
    std::vector<std::string> missing_keys;
    for (const auto& pair : pairs) {
        std::vector<FeatureVector> rows;
        for (const auto& program : corpus) {
            const auto label = label_for_pair(program, pair);
            if (!label) {
                continue;
            }
            std::vector<std::string> missing;
            for (const auto& b : behaviours_from_program(program)) {
                if (summaries != nullptr) {
                    if (!summaries->contains(summary_key(b.clip_id, b.object_label))) {
                        missing_keys.push_back(summary_key(b.clip_id, b.object_label));
                        continue;
                    }
                    rows.push_back(summary_features(b, *label, program.action, pair, *summaries, embeddings, &missing));
                } else {
                    rows.push_back(indicator_features(b, *label, program.action, rules.at(pair.key()), embeddings, scheme,
                        &missing));
                }
            }
            missing_actions.insert(missing.begin(), missing.end());
        }
        write_file_atomic(pair_file(out_dir, pair, ".csv"), write_feature_csv(rows));
    }
    if (!missing_keys.empty()) {
        std::sort(missing_keys.begin(), missing_keys.end());
        missing_keys.erase(std::unique(missing_keys.begin(), missing_keys.end()), missing_keys.end());
        throw Error(ErrorKind::Missing, "summary vectors missing for: " + joined(missing_keys, ", "));
    }
    if (!missing_actions.empty()) {
        log.warn("featurize: no embedding for action(s) "
            + joined(std::vector<std::string>(missing_actions.begin(), missing_actions.end()), ", ")
            + "; zero vectors used");
    }
}

std::vector<FeatureVector> load_feature_csv(const fs::path& path, const AdverbPair& pair)
{
    try {
        return parse_feature_csv(read_text_file(path), pair);
    } catch (const Error& e) {
        throw e.in_file(path.string());
    }
}

void train_corpus(const fs::path& features_dir, const std::vector<AdverbPair>& pairs, const SvmParams& params,
    const fs::path& out_dir, StageLog& log)
{
    reset_outputs(out_dir, ".model");
    for (const auto& pair : pairs) {
        const auto path = pair_file(features_dir, pair, ".csv");
        if (!fs::exists(path)) {
            throw Error(ErrorKind::Missing, "feature file not found (run `advrec featurize` first): " + path.string());
        }
        std::vector<std::vector<double>> pos;
        std::vector<std::vector<double>> neg;
        for (auto& row : load_feature_csv(path, pair)) {
            (row.label == pair.adverb ? pos : neg).push_back(std::move(row.values));
        }
        if (pos.empty() || neg.empty()) {
            if (!pos.empty() || !neg.empty()) {
                log.warn("train " + pair.display() + ": only one class present, no model trained");
            }
            continue;
        }
        auto [bp, bn] = balance_by_repetition(std::move(pos), std::move(neg));
        Matrix x;
        std::vector<int> y;
        for (auto& v : bp) {
            x.push_back(std::move(v));
            y.push_back(1);
        }
        for (auto& v : bn) {
            x.push_back(std::move(v));
            y.push_back(-1);
        }
        const auto training = train_svm(x, y, params, pair.adverb, pair.antonym);
        if (!training.converged) {
            log.warn("train " + pair.display() + ": iteration cap reached before KKT tolerance");
        }
        log.note("train " + pair.display() + ": " + std::to_string(x.size()) + " balanced samples, "
            + std::to_string(training.model.support_vectors.size()) + " support vectors");
        write_file_atomic(pair_file(out_dir, pair, ".model"), serialize_model(training.model));
    }
}

namespace {

struct PairInputs {
    AdverbPair pair;
    std::vector<FeatureVector> rows;
    std::optional<SvmModel> model;
};

std::vector<PairInputs> load_pair_inputs(const fs::path& features_dir, const fs::path& models_dir,
    const std::vector<AdverbPair>& pairs)
{
    std::vector<PairInputs> out;
    std::vector<std::string> missing_models;
    for (const auto& pair : pairs) {
        const auto csv = pair_file(features_dir, pair, ".csv");
        if (!fs::exists(csv)) {
            throw Error(ErrorKind::Missing, "feature file not found (run `advrec featurize` first): " + csv.string());
        }
        PairInputs in{pair, load_feature_csv(csv, pair), std::nullopt};
        if (!in.rows.empty()) {
            const auto model_path = pair_file(models_dir, pair, ".model");
            if (!fs::exists(model_path)) {
                missing_models.push_back(model_path.string());
            } else {
                try {
                    in.model = parse_model(read_text_file(model_path));
                } catch (const Error& e) {
                    throw e.in_file(model_path.string());
                }
                if (in.model->positive_label != pair.adverb || in.model->negative_label != pair.antonym) {
                    throw Error(ErrorKind::Validation, "model labels do not match pair " + pair.display(), 0,
                        model_path.string());
                }
            }
        }
        out.push_back(std::move(in));
    }
    if (!missing_models.empty()) {
        throw Error(ErrorKind::Missing, "model files not found (run `advrec train` first): " + joined(missing_models, ", "));
    }
    return out;
}

} // namespace

std::string predict_corpus(const fs::path& features_dir, const fs::path& models_dir,
    const std::vector<AdverbPair>& pairs, StageLog& log)
{
    std::string out = "pair\tclip_id\tprediction\tadverb_votes\tantonym_votes\ttie\n";
    for (const auto& in : load_pair_inputs(features_dir, models_dir, pairs)) {
        if (!in.model) {
            log.note("predict " + in.pair.display() + ": no feature rows");
            continue;
        }
        for (const auto& clip : predict_clips(*in.model, in.pair, in.rows)) {
            out += in.pair.display() + "\t" + clip.clip_id + "\t" + clip.final_label + "\t"
                + std::to_string(clip.adverb_votes) + "\t" + std::to_string(clip.antonym_votes) + "\t"
                + (clip.tie ? "1" : "0") + "\n";
        }
    }
    return out;
}

EvalReport evaluate_corpus(const fs::path& features_dir, const fs::path& models_dir,
    const std::vector<AdverbPair>& pairs, const fs::path& rules_dir, const std::string& fingerprint, StageLog& log)
{
    std::vector<PairResult> results;
    for (const auto& in : load_pair_inputs(features_dir, models_dir, pairs)) {
        PairResult r{};
        r.pair = in.pair;
        if (in.model) {
            r = evaluate_pair(*in.model, in.pair, in.rows);
        }
        if (!rules_dir.empty()) {
            const auto rules_path = pair_file(rules_dir, in.pair, ".rules");
            if (fs::exists(rules_path)) {
                for (const auto& line : split(read_text_file(rules_path), '\n')) {
                    r.rules += trim(line).empty() ? 0 : 1;
                }
            }
        }
        results.push_back(std::move(r));
    }
    return make_report(std::move(results), fingerprint, log.warnings);
}

void write_report(const EvalReport& report, const fs::path& path)
{
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    write_file_atomic(path, render_report_text(report));
    auto csv = path;
    csv.replace_extension(".csv");
    write_file_atomic(csv, render_report_csv(report));
}

std::vector<FlatBehaviour> flatten_corpus(const fs::path& asp_path)
{
    std::vector<AspProgram> programs;
    if (fs::is_directory(asp_path)) {
        programs = load_corpus(asp_path);
    } else if (fs::exists(asp_path)) {
        programs.push_back(load_program(asp_path));
    } else {
        throw Error(ErrorKind::Missing, "program path not found: " + asp_path.string());
    }
    std::vector<FlatBehaviour> out;
    for (const auto& p : programs) {
        for (const auto& b : behaviours_from_program(p)) {
            out.push_back(flatten(b));
        }
    }
    return out;
}

std::string render_run_manifest(const PipelineConfig& config)
{
    std::string out = "advrec-run 1\n";
    out += "fingerprint " + config.fingerprint() + "\n";
    for (const auto& line : split(config.describe(), '\n')) {
        if (!line.empty()) {
            out += "config " + line + "\n";
        }
    }
    auto digest = [&](const std::string& name, const fs::path& path) {
        out += "input " + name + " " + hex_digest(fnv1a(read_text_file(path))) + "\n";
    };
    const auto manifest_path = config.obs_dir / kManifestName;
    digest(std::string("obs/") + kManifestName, manifest_path);
    for (const auto& clip : load_manifest(manifest_path)) {
        for (const auto* ext : {".jsonl", ".flow"}) {
            const auto path = config.obs_dir / (clip.clip_id + ext);
            if (fs::exists(path)) {
                digest("obs/" + path.filename().string(), path);
            }
        }
    }
    digest("embeddings", config.embeddings);
    if (config.summary_vectors) {
        digest("summary_vectors", *config.summary_vectors);
    }
    if (config.scheme_file) {
        digest("scheme", *config.scheme_file);
    }
    if (config.pairs_file) {
        digest("pairs", *config.pairs_file);
    }
    return out;
}

EvalReport run_pipeline(const PipelineConfig& config, StageLog& log)
{
    if (config.window < 1) {
        throw Error(ErrorKind::Validation, "window must be positive");
    }
    const WorkLayout layout{config.work_dir};
    fs::create_directories(layout.root);
    const auto embeddings = load_embeddings(config.embeddings);
    std::optional<EmbeddingTable> summaries;
    if (config.summary_vectors) {
        summaries = import_summary_vectors(*config.summary_vectors);
    }
    write_file_atomic(layout.run_manifest(), render_run_manifest(config));

    emit_corpus(config.obs_dir, config.pairs, config.scheme, config.window, layout.asp_all(), log);
    split_corpus(layout.asp_all(), config.seed, config.test_fraction, layout.asp_train(), layout.asp_test(), log);

    const auto train = load_corpus(layout.asp_train());
    const auto test = load_corpus(layout.asp_test());
    const auto rules = induce_corpus(train, config.pairs, config.scheme, config.seed, layout.rules(), log);
    const auto* summary_table = summaries ? &*summaries : nullptr;
    featurize_corpus(train, config.pairs, rules, embeddings, summary_table, config.scheme, layout.features_train(), log);
    featurize_corpus(test, config.pairs, rules, embeddings, summary_table, config.scheme, layout.features_test(), log);
    train_corpus(layout.features_train(), config.pairs, config.svm, layout.models(), log);

    auto report = evaluate_corpus(layout.features_test(), layout.models(), config.pairs, layout.rules(),
        config.fingerprint(), log);
    write_report(report, layout.report());
    return report;
}

} // namespace advrec
