#include "advrec/synthetic.hpp"

#include "advrec/error.hpp"
#include "advrec/util.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>

namespace advrec {

namespace {

const std::array<std::string, 5> kActions = {"cut", "pour", "stir", "open", "throw"};
const std::array<std::string, 3> kCompanions = {"ball", "dog", "cup"};

// Box-centre offsets visited once per 5 frames, so every window spans its whole region.
constexpr std::array<std::array<double, 2>, 5> kCorners = {{{-1, -1}, {1, 1}, {1, -1}, {-1, 1}, {0, 0}}};

constexpr double kBox = 0.1;

std::string clip_name(std::size_t i)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "clip%04zu", i);
    return buf;
}

EmbeddingTable action_embeddings(Rng& rng)
{
    EmbeddingTable table;
    table.dim = 8;
    for (const auto& action : kActions) {
        std::vector<double> v(table.dim);
        for (auto& x : v) {
            // Rounded so the text file round-trips exactly.
            x = std::round(rng.normal(0.0, 1.0) * 1e4) / 1e4;
        }
        table.entries.emplace(action, std::move(v));
    }
    return table;
}

/// Balanced class assignment: the first half of a shuffled index list gets the adverb.
std::vector<bool> balanced_flags(std::size_t n, Rng& rng)
{
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) {
        idx[i] = i;
    }
    rng.shuffle(idx);
    std::vector<bool> flags(n, false);
    for (std::size_t i = 0; i < n / 2; ++i) {
        flags[idx[i]] = true;
    }
    return flags;
}

struct Mover {
    std::string label;
    double magnitude;
    double angle;
    double cx, cy;     // region centre
    double half_w, half_h; // half extent of the box-centre path
};

Detection mover_detection(const Mover& m, int frame, Rng& rng)
{
    const auto& corner = kCorners[static_cast<std::size_t>(frame) % kCorners.size()];
    const double x = m.cx + corner[0] * m.half_w;
    const double y = m.cy + corner[1] * m.half_h;
    Detection d;
    d.label = m.label;
    d.confidence = 0.6 + 0.39 * rng.uniform();
    d.bbox = {x - kBox / 2, y - kBox / 2, x + kBox / 2, y + kBox / 2};
    d.flow_mag = std::max(0.0, m.magnitude * (1.0 + 0.1 * rng.normal(0.0, 1.0)));
    d.flow_ang = wrap_degrees(m.angle + rng.normal(0.0, 8.0));
    return d;
}

} // namespace

std::vector<PlantedPair> planted_pairs()
{
    return {
        {{"slowly", "quickly"}, Bias::Magnitude},
        {{"upwards", "downwards"}, Bias::Angle},
        {{"outdoor", "indoor"}, Bias::OperationArea},
        {{"out", "in"}, Bias::CellOccupancy},
    };
}

SyntheticCorpus planted_corpus(std::size_t clips, std::uint64_t seed, int frames)
{
    if (clips < 2 || frames < 1) {
        throw Error(ErrorKind::Validation, "planted corpus needs at least 2 clips and 1 frame");
    }
    Rng rng(seed);
    SyntheticCorpus corpus;
    corpus.embeddings = action_embeddings(rng);
    const auto planted = planted_pairs();
    std::vector<std::vector<bool>> flags;
    for (std::size_t p = 0; p < planted.size(); ++p) {
        flags.push_back(balanced_flags(clips, rng));
    }

    for (std::size_t c = 0; c < clips; ++c) {
        const bool slow = flags[0][c];
        const bool up = flags[1][c];
        const bool outdoor = flags[2][c];
        const bool top = flags[3][c];
        ClipEntry entry{clip_name(c), kActions[rng.below(kActions.size())], {}};
        for (std::size_t p = 0; p < planted.size(); ++p) {
            entry.labels.push_back(flags[p][c] ? planted[p].pair.adverb : planted[p].pair.antonym);
        }

        std::vector<Mover> movers;
        for (const auto& label : {std::string("person"), kCompanions[rng.below(kCompanions.size())]}) {
            Mover m;
            m.label = label;
            m.magnitude = slow ? 1.0 + 3.0 * rng.uniform() : 21.0 + 8.0 * rng.uniform();
            m.angle = up ? 90.0 : 270.0;
            // Region 0.5 x 0.5 (large operation area) or 0.15 x 0.15 (small).
            const double region = outdoor ? 0.5 : 0.15;
            m.half_w = m.half_h = (region - kBox) / 2;
            const double margin = region / 2 + 0.02;
            m.cx = margin + (1.0 - 2 * margin) * rng.uniform();
            const double lo = top ? margin : 0.55;
            const double hi = top ? 0.45 : 1.0 - margin;
            m.cy = lo + (hi - lo) * rng.uniform();
            movers.push_back(std::move(m));
        }

        std::vector<FrameObservation> obs;
        for (int f = 0; f < frames; ++f) {
            FrameObservation frame{f, {}};
            for (const auto& m : movers) {
                frame.detections.push_back(mover_detection(m, f, rng));
            }
            frame.detections.push_back({"chair", 0.9, {0.05, 0.7, 0.2, 0.95}, 0.05, 0.0});
            frame.detections.push_back({"cup", 0.2, {0.8, 0.1, 0.85, 0.15}, 30.0, 45.0});
            obs.push_back(std::move(frame));
        }
        corpus.observations.emplace(entry.clip_id, std::move(obs));
        corpus.clips.push_back(std::move(entry));
    }
    return corpus;
}

SyntheticCorpus inseparable_corpus(std::size_t clips, std::uint64_t seed, int frames)
{
    if (clips < 2 || frames < 1) {
        throw Error(ErrorKind::Validation, "inseparable corpus needs at least 2 clips and 1 frame");
    }
    Rng rng(seed);
    SyntheticCorpus corpus;
    corpus.embeddings = action_embeddings(rng);
    for (std::size_t c = 0; c < clips; ++c) {
        ClipEntry entry{clip_name(c), kActions[rng.below(kActions.size())], {c % 2 == 0 ? "slowly" : "quickly"}};
        std::vector<FrameObservation> obs;
        for (int f = 0; f < frames; ++f) {
            Detection d{"person", 0.8, {0.2, 0.2, 0.4, 0.4}, 11.0 + 3.0 * rng.uniform(), rng.normal(0.0, 5.0)};
            d.flow_ang = wrap_degrees(*d.flow_ang);
            obs.push_back({f, {d}});
        }
        corpus.observations.emplace(entry.clip_id, std::move(obs));
        corpus.clips.push_back(std::move(entry));
    }
    return corpus;
}

void write_synthetic(const SyntheticCorpus& corpus, const std::filesystem::path& obs_dir,
    const std::filesystem::path& embeddings)
{
    std::filesystem::create_directories(obs_dir);
    write_file_atomic(obs_dir / kManifestName, serialize_manifest(corpus.clips));
    for (const auto& [clip_id, frames] : corpus.observations) {
        write_file_atomic(obs_dir / (clip_id + ".jsonl"), serialize_observations(frames));
    }
    if (embeddings.has_parent_path()) {
        std::filesystem::create_directories(embeddings.parent_path());
    }
    write_file_atomic(embeddings, serialize_word_vectors(corpus.embeddings));
}

} // namespace advrec
