#include "advrec/cli.hpp"

#include "advrec/error.hpp"
#include "advrec/flatten.hpp"
#include "advrec/pipeline.hpp"
#include "advrec/synthetic.hpp"
#include "advrec/util.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

namespace advrec::cli {

namespace {

namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitData = 1;
constexpr int kExitUsage = 2;

/// Options shared by several subcommands; unset paths mean built-in defaults.
struct Common {
    std::string scheme;
    std::string pairs;
    int window{kDefaultWindow};
    std::string gamma{"scale"};
    double C{1.0};
    double tolerance{1e-3};

    BucketScheme load_scheme() const { return scheme.empty() ? BucketScheme::defaults() : BucketScheme::load(scheme); }
    std::vector<AdverbPair> load_pair_list() const { return pairs.empty() ? default_pairs() : load_pairs(pairs); }

    SvmParams svm() const
    {
        SvmParams p;
        p.C = C;
        p.tolerance = tolerance;
        if (gamma != "scale") {
            double g = 0.0;
            const auto [ptr, ec] = std::from_chars(gamma.data(), gamma.data() + gamma.size(), g);
            if (ec != std::errc{} || ptr != gamma.data() + gamma.size() || !(g > 0.0)) {
                throw Error(ErrorKind::Validation, "--gamma must be 'scale' or a positive number");
            }
            p.gamma = g;
        }
        if (!(C > 0.0)) {
            throw Error(ErrorKind::Validation, "--C must be positive");
        }
        return p;
    }
};

void add_scheme(CLI::App* cmd, Common& c)
{
    cmd->add_option("--scheme", c.scheme, "Bucket scheme file (defaults built in)")->check(CLI::ExistingFile);
}

void add_pairs(CLI::App* cmd, Common& c)
{
    cmd->add_option("--pairs", c.pairs, "Adverb pair list, one 'adverb antonym' per line (default: the 11 pairs)")
        ->check(CLI::ExistingFile);
}

void add_svm(CLI::App* cmd, Common& c)
{
    cmd->add_option("--C", c.C, "SVM box constraint")->capture_default_str();
    cmd->add_option("--gamma", c.gamma, "RBF gamma, or 'scale' for 1/(d * feature variance)")->capture_default_str();
    cmd->add_option("--tolerance", c.tolerance, "SMO KKT tolerance")->capture_default_str();
}

void report_log(const StageLog& log)
{
    for (const auto& n : log.notes) {
        std::cout << n << "\n";
    }
    for (const auto& w : log.warnings) {
        std::cerr << "warning: " << w << "\n";
    }
}

std::vector<std::string> split_labels(const std::string& text)
{
    std::vector<std::string> out;
    for (const auto& item : split(text, ',')) {
        if (!trim(item).empty()) {
            out.push_back(normalize_token(trim(item)));
        }
    }
    return out;
}

/// Digest over the model files the report was produced from.
std::string models_fingerprint(const fs::path& models, const std::vector<AdverbPair>& pairs)
{
    std::uint64_t h = fnv1a("");
    for (const auto& pair : pairs) {
        const auto path = models / (pair.key() + ".model");
        if (fs::exists(path)) {
            h = fnv1a(pair.key() + "\n" + read_text_file(path), h);
        }
    }
    return hex_digest(h);
}

} // namespace

int run(int argc, const char* const* argv)
{
    CLI::App app{"Adverb-type recognition from object-behaviour facts", "advrec"};
    app.set_config("--config", "", "Key/value config file; [subcommand] sections set that subcommand's options");
    app.require_subcommand(1);
    app.fallthrough(false);

    Common common;
    std::uint64_t seed = 0;

    // extract
    std::string obs_file, flow_file, out_path, clip_id, action{"none"}, labels;
    auto* extract = app.add_subcommand("extract", "Observations of one clip -> ASP program");
    extract->add_option("--obs", obs_file, "Per-frame observation file (JSON lines)")->required()->check(CLI::ExistingFile);
    extract->add_option("--flow", flow_file, "Optical-flow raster sidecar")->check(CLI::ExistingFile);
    extract->add_option("--window", common.window, "Window length in delayed-capture frames")->capture_default_str();
    extract->add_option("--clip-id", clip_id, "Clip id (default: observation file stem)");
    extract->add_option("--action", action, "Action type recorded in the header")->capture_default_str();
    extract->add_option("--labels", labels, "Comma-separated adverb labels of the clip");
    extract->add_option("--out", out_path, "Output .lp file")->required();
    add_scheme(extract, common);
    add_pairs(extract, common);

    // emit
    std::string obs_dir, asp_dir;
    auto* emit = app.add_subcommand("emit", "Observation directory (with clips.tsv) -> one .lp per clip");
    emit->add_option("--obs-dir", obs_dir, "Directory with clips.tsv and <clip_id>.jsonl files")->required()->check(CLI::ExistingDirectory);
    emit->add_option("--out", out_path, "Output program directory")->required();
    emit->add_option("--window", common.window, "Window length in delayed-capture frames")->capture_default_str();
    add_scheme(emit, common);
    add_pairs(emit, common);

    // split
    std::string train_out, test_out;
    double test_fraction = 0.3;
    auto* split_cmd = app.add_subcommand("split", "Stratified clip-level train/test split of a program directory");
    split_cmd->add_option("--asp", asp_dir, "Program directory")->required()->check(CLI::ExistingDirectory);
    split_cmd->add_option("--train-out", train_out, "Training program directory")->required();
    split_cmd->add_option("--test-out", test_out, "Test program directory")->required();
    split_cmd->add_option("--seed", seed, "Global seed")->required();
    split_cmd->add_option("--test-fraction", test_fraction, "Fraction of each stratum sent to test")->capture_default_str();

    // induce
    auto* induce = app.add_subcommand("induce", "Learn indicator rules per pair");
    induce->add_option("--train", asp_dir, "Training program directory")->required()->check(CLI::ExistingDirectory);
    induce->add_option("--seed", seed, "Global seed")->required();
    induce->add_option("--out", out_path, "Rules directory")->required();
    add_scheme(induce, common);
    add_pairs(induce, common);

    // featurize
    std::string rules_dir, embeddings, summaries, features_dir;
    auto* featurize = app.add_subcommand("featurize", "Programs -> per-pair feature CSVs");
    featurize->add_option("--asp", asp_dir, "Program directory")->required()->check(CLI::ExistingDirectory);
    featurize->add_option("--rules", rules_dir, "Rules directory (indicator features)");
    featurize->add_option("--embeddings", embeddings, "Action-type word vectors")->required()->check(CLI::ExistingFile);
    featurize->add_option("--summary-vectors", summaries, "Summary vectors; switches to summary features")->check(CLI::ExistingFile);
    featurize->add_option("--out", out_path, "Feature directory")->required();
    add_scheme(featurize, common);
    add_pairs(featurize, common);

    // train
    std::string models_dir;
    auto* train = app.add_subcommand("train", "Train one SVM per pair");
    train->add_option("--features", features_dir, "Feature directory (written first when --asp is given)")->required();
    train->add_option("--asp", asp_dir, "Featurize this program directory before training")->check(CLI::ExistingDirectory);
    train->add_option("--rules", rules_dir, "Rules directory, with --asp");
    train->add_option("--embeddings", embeddings, "Action-type word vectors, with --asp")->check(CLI::ExistingFile);
    train->add_option("--summary-vectors", summaries, "Summary vectors, with --asp")->check(CLI::ExistingFile);
    train->add_option("--seed", seed, "Global seed (recorded; the solver itself is deterministic)")->required();
    train->add_option("--out", out_path, "Model directory")->required();
    add_svm(train, common);
    add_scheme(train, common);
    add_pairs(train, common);

    // predict
    auto* predict = app.add_subcommand("predict", "Per-clip majority-vote predictions");
    predict->add_option("--features", features_dir, "Feature directory")->required()->check(CLI::ExistingDirectory);
    predict->add_option("--models", models_dir, "Model directory")->required();
    predict->add_option("--out", out_path, "Prediction TSV")->required();
    add_pairs(predict, common);

    // evaluate
    std::string report_path;
    auto* evaluate = app.add_subcommand("evaluate", "Per-pair and average accuracy report");
    evaluate->add_option("--features", features_dir, "Test feature directory (written first when --asp is given)")->required();
    evaluate->add_option("--asp", asp_dir, "Featurize this test program directory first")->check(CLI::ExistingDirectory);
    evaluate->add_option("--rules", rules_dir, "Rules directory (rule counts; featurizing with --asp)");
    evaluate->add_option("--embeddings", embeddings, "Action-type word vectors, with --asp")->check(CLI::ExistingFile);
    evaluate->add_option("--summary-vectors", summaries, "Summary vectors, with --asp")->check(CLI::ExistingFile);
    evaluate->add_option("--models", models_dir, "Model directory")->required();
    evaluate->add_option("--report", report_path, "Report text file; a .csv is written alongside")->required();
    add_scheme(evaluate, common);
    add_pairs(evaluate, common);

    // flatten
    auto* flatten_cmd = app.add_subcommand("flatten", "Programs -> flattened behaviour corpus");
    flatten_cmd->add_option("--asp", asp_dir, "Program file or directory")->required()->check(CLI::ExistingPath);
    flatten_cmd->add_option("--out", out_path, "Corpus file")->required();

    // mask
    std::string corpus_path;
    double rate = 0.2;
    auto* mask = app.add_subcommand("mask", "Mask value-words of a flattened corpus");
    mask->add_option("--corpus", corpus_path, "Flattened corpus file")->required()->check(CLI::ExistingFile);
    mask->add_option("--rate", rate, "Per value-word mask probability")->capture_default_str()->check(CLI::Range(0.0, 1.0));
    mask->add_option("--seed", seed, "Global seed")->required();
    mask->add_option("--out", out_path, "Masked corpus file")->required();

    // pipeline
    std::string work_dir;
    auto* pipeline = app.add_subcommand("pipeline", "emit -> split -> induce -> featurize -> train -> evaluate");
    pipeline->add_option("--obs-dir", obs_dir, "Directory with clips.tsv and <clip_id>.jsonl files")->required()->check(CLI::ExistingDirectory);
    pipeline->add_option("--work", work_dir, "Working directory for all stage outputs")->required();
    pipeline->add_option("--embeddings", embeddings, "Action-type word vectors")->required()->check(CLI::ExistingFile);
    pipeline->add_option("--summary-vectors", summaries, "Summary vectors; switches to summary features")->check(CLI::ExistingFile);
    pipeline->add_option("--seed", seed, "Global seed")->required();
    pipeline->add_option("--window", common.window, "Window length in delayed-capture frames")->capture_default_str();
    pipeline->add_option("--test-fraction", test_fraction, "Fraction of each stratum sent to test")->capture_default_str();
    pipeline->add_option("--report", report_path, "Extra copy of the report text (CSV alongside)");
    add_svm(pipeline, common);
    add_scheme(pipeline, common);
    add_pairs(pipeline, common);

    // synth
    std::string kind{"planted"};
    std::size_t clips = 200;
    auto* synth = app.add_subcommand("synth", "Write a synthetic observation corpus");
    synth->add_option("--kind", kind, "planted or inseparable")->capture_default_str()->check(CLI::IsMember({"planted", "inseparable"}));
    synth->add_option("--clips", clips, "Number of clips")->capture_default_str();
    synth->add_option("--seed", seed, "Seed")->required();
    synth->add_option("--out-dir", obs_dir, "Observation directory")->required();
    synth->add_option("--embeddings", embeddings, "Embedding file to write")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n";
        const CLI::App* target = &app;
        for (const auto* sub : app.get_subcommands()) {
            target = sub;
        }
        std::cerr << target->help();
        return kExitUsage;
    }

    StageLog log;
    try {
        if (*extract) {
            const auto pairs = common.load_pair_list();
            const fs::path obs{obs_file};
            const auto id = clip_id.empty() ? obs.stem().string() : clip_id;
            std::optional<fs::path> flow;
            if (!flow_file.empty()) {
                flow = flow_file;
            }
            const auto act = normalize_token(action);
            if (!is_token(act)) {
                throw Error(ErrorKind::Validation, "bad action token '" + action + "'");
            }
            const auto program = extract_clip(obs, flow, common.load_scheme(), common.window, id, act,
                tags_for(split_labels(labels), pairs));
            write_file_atomic(out_path, emit_program(program));
        } else if (*emit) {
            emit_corpus(obs_dir, common.load_pair_list(), common.load_scheme(), common.window, out_path, log);
        } else if (*split_cmd) {
            split_corpus(asp_dir, seed, test_fraction, train_out, test_out, log);
        } else if (*induce) {
            induce_corpus(load_corpus(asp_dir), common.load_pair_list(), common.load_scheme(), seed, out_path, log);
        } else if (*featurize || (*train && !asp_dir.empty()) || (*evaluate && !asp_dir.empty())) {
            const auto pairs = common.load_pair_list();
            const auto scheme = common.load_scheme();
            if (embeddings.empty()) {
                throw Error(ErrorKind::Missing, "--embeddings is required to featurize");
            }
            std::optional<EmbeddingTable> summary_table;
            std::map<std::string, InducedRuleSet> rules;
            if (!summaries.empty()) {
                summary_table = import_summary_vectors(summaries);
            } else if (rules_dir.empty()) {
                throw Error(ErrorKind::Missing, "indicator features need --rules (or give --summary-vectors)");
            } else {
                rules = load_rules_dir(rules_dir, pairs, scheme);
            }
            const fs::path dest = *featurize ? fs::path(out_path) : fs::path(features_dir);
            featurize_corpus(load_corpus(asp_dir), pairs, rules, load_embeddings(embeddings),
                summary_table ? &*summary_table : nullptr, scheme, dest, log);
        }
        if (*train) {
            train_corpus(features_dir, common.load_pair_list(), common.svm(), out_path, log);
        } else if (*predict) {
            write_file_atomic(out_path, predict_corpus(features_dir, models_dir, common.load_pair_list(), log));
        } else if (*evaluate) {
            const auto pairs = common.load_pair_list();
            const auto report = evaluate_corpus(features_dir, models_dir, pairs, rules_dir,
                models_fingerprint(models_dir, pairs), log);
            write_report(report, report_path);
            std::cout << render_report_text(report);
            log.warnings.clear(); // already part of the report
        } else if (*flatten_cmd) {
            write_file_atomic(out_path, write_corpus(flatten_corpus(asp_dir)));
        } else if (*mask) {
            std::vector<MaskedSample> masked;
            for (const auto& f : parse_corpus(read_text_file(corpus_path))) {
                masked.push_back(mask_values(f, rate, sample_seed(seed, f.key())));
            }
            write_file_atomic(out_path, write_masked_corpus(masked));
        } else if (*pipeline) {
            PipelineConfig config;
            config.obs_dir = obs_dir;
            config.work_dir = work_dir;
            config.embeddings = embeddings;
            if (!summaries.empty()) {
                config.summary_vectors = summaries;
            }
            if (!common.scheme.empty()) {
                config.scheme_file = common.scheme;
            }
            if (!common.pairs.empty()) {
                config.pairs_file = common.pairs;
            }
            config.window = common.window;
            config.scheme = common.load_scheme();
            config.seed = seed;
            config.svm = common.svm();
            config.pairs = common.load_pair_list();
            config.test_fraction = test_fraction;
            const auto report = run_pipeline(config, log);
            if (!report_path.empty()) {
                write_report(report, report_path);
            }
            std::cout << render_report_text(report);
            log.warnings.clear();
        } else if (*synth) {
            const auto corpus = kind == "planted" ? planted_corpus(clips, seed) : inseparable_corpus(clips, seed);
            write_synthetic(corpus, obs_dir, embeddings);
        }
    } catch (const Error& e) {
        report_log(log);
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const fs::filesystem_error& e) {
        report_log(log);
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
    report_log(log);
    return kExitOk;
}

} // namespace advrec::cli
