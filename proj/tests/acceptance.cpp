// End-to-end acceptance checks. One PASS/FAIL line per criterion; exit status is
// non-zero when any criterion fails.

#include "advrec/asp.hpp"
#include "advrec/behaviour.hpp"
#include "advrec/error.hpp"
#include "advrec/flatten.hpp"
#include "advrec/induce.hpp"
#include "advrec/pipeline.hpp"
#include "advrec/rule.hpp"
#include "advrec/svm.hpp"
#include "advrec/synthetic.hpp"
#include "advrec/util.hpp"

#include "generators.hpp"
#include "salience_fixtures.hpp"
#include "svm_oracle.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <functional>
#include <set>
#include <string>
#include <tuple>
#include <unistd.h>

using namespace advrec;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass;
    std::string detail;
};

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

class Scratch {
public:
    explicit Scratch(const std::string& tag)
        : root_(fs::temp_directory_path() / ("advrec_accept_" + std::to_string(::getpid()) + "_" + tag))
    {
        fs::remove_all(root_);
        fs::create_directories(root_);
    }
    ~Scratch() { fs::remove_all(root_); }
    const fs::path& root() const { return root_; }

private:
    fs::path root_;
};

Outcome asp_round_trip()
{
    const auto scheme = BucketScheme::defaults();
    const auto bg = generate_background(scheme);
    Rng rng(20240601);
    const auto t0 = Clock::now();
    std::size_t equal = 0;
    const std::size_t n = 1000;
    for (std::size_t i = 0; i < n; ++i) {
        const auto b = gen::random_behaviour(rng, scheme, "clip" + std::to_string(i), "obj" + std::to_string(i % 7), 12);
        const auto program = make_program(b.clip_id, "stir", {{"slowly", "quickly"}}, {b}, i % 10 == 0 ? bg : std::vector<Fact>{});
        const auto parsed = parse_program(emit_program(program));
        if (parsed == program && behaviours_from_program(parsed) == std::vector<ObjectBehaviour>{b}) {
            ++equal;
        }
    }
    const double secs = seconds_since(t0);
    return {equal == n && secs < 10.0,
        std::to_string(equal) + "/" + std::to_string(n) + " equal, " + fmt("%.2f s", secs) + " (limit 10 s)"};
}

Outcome background_closure()
{
    const auto scheme = BucketScheme::defaults();
    const auto bg = generate_background(scheme);

    // Brute force: every ordered pair of distinct ring positions reachable by stepping, and every
    // ordered pair within a bucket family, enumerated independently of the generator.
    std::set<std::string> expected;
    const std::vector<std::string> ring = {"n", "ne", "e", "se", "s", "sw", "w", "nw"};
    for (std::size_t a = 0; a < 8; ++a) {
        for (int d = 1; d <= 8; ++d) {
            expected.insert("clockwise(" + ring[a] + ", " + ring[(a + d) % 8] + ", " + std::to_string(d) + ").");
            expected.insert("anticlockwise(" + ring[a] + ", " + ring[(a + 8 - d % 8) % 8] + ", " + std::to_string(d) + ").");
        }
    }
    for (const auto* fam : {&scheme.area, &scheme.mip, &scheme.magnitude}) {
        for (std::size_t i = 0; i < fam->size(); ++i) {
            for (std::size_t j = i + 1; j < fam->size(); ++j) {
                expected.insert("less_than(" + fam->name(i) + ", " + fam->name(j) + ", " + std::to_string(j - i) + ").");
            }
        }
    }
    std::set<std::string> got;
    std::int64_t max_tick = 0;
    for (const auto& f : bg) {
        if (f.predicate == Predicate::LessThan || f.predicate == Predicate::Clockwise || f.predicate == Predicate::Anticlockwise) {
            got.insert(f.text());
        }
        if (f.predicate == Predicate::Clockwise || f.predicate == Predicate::Anticlockwise) {
            max_tick = std::max(max_tick, f.args[2].value);
        }
    }
    std::size_t missing = 0;
    for (const auto& e : expected) {
        missing += got.contains(e) ? 0 : 1;
    }
    const std::size_t extra = got.size() + missing - expected.size();
    return {missing == 0 && extra == 0 && max_tick <= 8,
        std::to_string(got.size()) + " facts, " + std::to_string(missing) + " missing, " + std::to_string(extra) +
            " extra, max distance " + std::to_string(max_tick)};
}

ObjectBehaviour mag_behaviour(const std::string& label, double mag)
{
    ObjectBehaviour b{"toy", label, {}};
    BehaviourStep s;
    s.time_step = 1;
    s.magnitude_tenths = to_tenths(mag);
    s.area = "small";
    s.mip = "small";
    b.steps.push_back(s);
    return b;
}

Outcome toy_induction()
{
    const auto scheme = BucketScheme::defaults();
    const auto t0 = Clock::now();
    const Batch toy{{"strange", "not_strange"}, {mag_behaviour("person", 7), mag_behaviour("cat", 18)},
        {mag_behaviour("car", 3), mag_behaviour("plane", 25)}, 0};
    const auto result = induce_pair(toy, Bias::Magnitude, scheme);
    const double secs = seconds_since(t0);
    const IndicatorRule want{"strange", Bias::Magnitude, RangeBody{scheme.magnitude.index_of("five_to_ten"),
                                                             scheme.magnitude.index_of("fifteen_to_twenty")}};
    const bool match = result.adverb_rule == want && result.antonym_rule.bodyless() && result.correct == 4;
    return {match && secs < 1.0, rule_text(result.adverb_rule, scheme) + " / " + rule_text(result.antonym_rule, scheme) + ", " +
                                     fmt("%.3f s", secs)};
}

Outcome planted_pipeline()
{
    Scratch dir("planted");
    const auto t0 = Clock::now();
    write_synthetic(planted_corpus(200, 7), dir.root() / "obs", dir.root() / "emb.vec");
    PipelineConfig config;
    config.obs_dir = dir.root() / "obs";
    config.work_dir = dir.root() / "work";
    config.embeddings = dir.root() / "emb.vec";
    config.seed = 7;
    StageLog log;
    const auto report = run_pipeline(config, log);
    const double secs = seconds_since(t0);
    bool ok = secs < 120.0;
    std::string detail;
    for (const auto& planted : planted_pairs()) {
        const auto it = std::find_if(report.pairs.begin(), report.pairs.end(),
            [&](const PairResult& r) { return r.pair == planted.pair; });
        const bool found = it != report.pairs.end() && it->evaluated;
        const double acc = found ? it->clip_accuracy : 0.0;
        ok = ok && found && acc >= 0.95;
        detail += planted.pair.display() + " " + fmt("%.2f%%", 100.0 * acc) + ", ";
    }
    return {ok, detail + fmt("%.1f s", secs) + " (need >= 95% each, < 120 s)"};
}

Outcome inseparable()
{
    Scratch dir("inseparable");
    write_synthetic(inseparable_corpus(1334, 11), dir.root() / "obs", dir.root() / "emb.vec");
    PipelineConfig config;
    config.obs_dir = dir.root() / "obs";
    config.work_dir = dir.root() / "work";
    config.embeddings = dir.root() / "emb.vec";
    config.pairs = {{"slowly", "quickly"}};
    config.seed = 11;
    StageLog log;
    const auto report = run_pipeline(config, log);
    const auto& r = report.pairs.at(0);
    const bool ok = r.evaluated && r.rules == 0 && r.clips == 400 && std::abs(r.clip_accuracy - 0.5) <= 0.05;
    return {ok, std::to_string(r.rules) + " rules, " + std::to_string(r.clips) + " test clips, accuracy " +
                    fmt("%.2f%%", 100.0 * r.clip_accuracy) + " (need 0 rules, 50% +/- 5% at 400)"};
}

Outcome svm_correctness()
{
    bool ok = true;
    double worst_kkt = 0.0;
    double six_gap = -1.0;
    double xor_acc = 0.0;
    for (const auto& f : svm_oracle::fixtures()) {
        SvmParams p;
        p.C = f.C;
        p.gamma = f.gamma;
        const auto t = train_svm(f.x, f.y, p);
        worst_kkt = std::max(worst_kkt, max_kkt_violation(f.x, f.y, t.alpha, t.model));
        if (f.name == "six_points") {
            six_gap = std::abs(t.dual_objective - svm_oracle::brute_force_dual(f).objective);
        }
        if (f.name == "xor") {
            std::size_t right = 0;
            for (std::size_t i = 0; i < f.x.size(); ++i) {
                right += predict_sign(t.model, f.x[i]) == f.y[i] ? 1 : 0;
            }
            xor_acc = static_cast<double>(right) / static_cast<double>(f.x.size());
        }
    }
    ok = worst_kkt <= 1e-3 && six_gap >= 0.0 && six_gap <= 1e-6 && xor_acc == 1.0;
    return {ok, "max KKT violation " + fmt("%.2e", worst_kkt) + ", 6-point dual gap " + fmt("%.2e", six_gap) + ", XOR " +
                    fmt("%.0f%%", 100.0 * xor_acc)};
}

Outcome masking_statistics()
{
    const auto scheme = BucketScheme::defaults();
    Rng rng(31337);
    std::size_t values = 0;
    std::size_t masked = 0;
    std::size_t bad = 0;
    std::size_t longest = 0;
    for (int i = 0; values < 10000; ++i) {
        const auto f = flatten(gen::random_behaviour(rng, scheme, "clip" + std::to_string(i), "person", 40));
        longest = std::max(longest, f.words.size());
        const auto m = mask_values(f, 0.2, sample_seed(99, f.key()));
        for (std::size_t k = 0; k < f.words.size(); ++k) {
            if (f.roles[k] == WordRole::Value) {
                ++values;
            } else if (m.words[k] != f.words[k]) {
                ++bad;
            }
        }
        masked += m.targets.size();
    }
    // Long behaviours must be truncated to the word limit too.
    Rng long_rng(1);
    const auto huge = flatten(gen::random_behaviour(long_rng, scheme, "long", "person", 200));
    longest = std::max(longest, huge.words.size());
    const double frac = static_cast<double>(masked) / static_cast<double>(values);
    return {frac >= 0.18 && frac <= 0.22 && bad == 0 && longest <= kMaxFlatWords,
        fmt("%.4f", frac) + " of " + std::to_string(values) + " value-words masked, " + std::to_string(bad) +
            " prompt/object words masked, longest line " + std::to_string(longest) + " words"};
}

std::vector<fs::path> files_under(const fs::path& root)
{
    std::vector<fs::path> out;
    for (const auto& e : fs::recursive_directory_iterator(root)) {
        if (e.is_regular_file()) {
            out.push_back(fs::relative(e.path(), root));
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

Outcome determinism()
{
    Scratch dir("determinism");
    write_synthetic(planted_corpus(120, 3), dir.root() / "obs", dir.root() / "emb.vec");
    for (const char* run : {"a", "b"}) {
        PipelineConfig config;
        config.obs_dir = dir.root() / "obs";
        config.work_dir = dir.root() / run;
        config.embeddings = dir.root() / "emb.vec";
        config.seed = 3;
        StageLog log;
        run_pipeline(config, log);
        const auto flat = flatten_corpus(config.work_dir / "asp" / "all");
        write_file_atomic(config.work_dir / "corpus.flat", write_corpus(flat));
        std::vector<MaskedSample> masked;
        for (const auto& f : flat) {
            masked.push_back(mask_values(f, 0.2, sample_seed(3, f.key())));
        }
        write_file_atomic(config.work_dir / "corpus.masked", write_masked_corpus(masked));
        write_file_atomic(config.work_dir / "predictions.tsv",
            predict_corpus(config.work_dir / "features" / "test", config.work_dir / "models", config.pairs, log));
    }
    const auto a = files_under(dir.root() / "a");
    const auto b = files_under(dir.root() / "b");
    std::size_t differing = a == b ? 0 : 1;
    if (a == b) {
        for (const auto& rel : a) {
            if (read_text_file(dir.root() / "a" / rel) != read_text_file(dir.root() / "b" / rel)) {
                ++differing;
            }
        }
    }
    return {differing == 0 && !a.empty(),
        std::to_string(a.size()) + " files compared, " + std::to_string(differing) + " differ"};
}

Outcome salience_suite()
{
    const auto fixtures = salience_fixtures::all();
    std::size_t right = 0;
    for (const auto& f : fixtures) {
        right += select_salient(band_frames(f.frames), f.window).survives == f.expected ? 1 : 0;
    }
    return {right == fixtures.size() && fixtures.size() == 10,
        std::to_string(right) + "/" + std::to_string(fixtures.size()) + " fixtures reproduced"};
}

} // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"asp-round-trip", asp_round_trip},
        {"background-closure", background_closure},
        {"toy-induction", toy_induction},
        {"planted-pipeline", planted_pipeline},
        {"inseparable-pair", inseparable},
        {"svm-correctness", svm_correctness},
        {"masking-statistics", masking_statistics},
        {"determinism", determinism},
        {"salience-fixtures", salience_suite},
    };
    int failures = 0;
    for (const auto& [name, check] : criteria) {
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
        std::fflush(stdout);
        failures += o.pass ? 0 : 1;
    }
    return failures == 0 ? 0 : 1;
}
