#include "advrec/flatten.hpp"

#include "advrec/error.hpp"
#include "advrec/features.hpp"
#include "advrec/util.hpp"

#include <array>
#include <charconv>

namespace advrec {

namespace {

using enum WordRole;

constexpr std::array<WordRole, kWordsPerStep> kStepRoles = {
    Object,                             // label
    Prompt, Value,                      // magnitude <m>
    Prompt, Value,                      // angle <sector>
    Prompt, Prompt, Value,              // operation area <bucket>
    Prompt, Prompt, Prompt, Value,      // movement in place <bucket>
    Prompt, Value, Value, Value, Value, Value, Value, // place v0 h0 v1 h1 v2 h2
};

std::pair<std::string, std::string> split_key(std::string_view key, std::size_t line)
{
    const auto hash = key.find('#');
    if (hash == std::string_view::npos || hash == 0 || hash + 1 == key.size()) {
        throw Error(ErrorKind::Parse, "corpus key must be '<clip_id>#<object_label>'", line);
    }
    return {std::string(key.substr(0, hash)), std::string(key.substr(hash + 1))};
}

} // namespace

std::string FlatBehaviour::key() const
{
    return summary_key(clip_id, object_label);
}

std::string FlatBehaviour::text() const
{
    std::string out;
    for (std::size_t i = 0; i < words.size(); ++i) {
        if (i > 0) {
            out += ' ';
        }
        out += words[i];
    }
    return out;
}

std::vector<WordRole> roles_for_length(std::size_t words)
{
    std::vector<WordRole> roles(words);
    for (std::size_t i = 0; i < words; ++i) {
        roles[i] = kStepRoles[i % kWordsPerStep];
    }
    return roles;
}

FlatBehaviour flatten(const ObjectBehaviour& b, std::size_t max_words)
{
    FlatBehaviour f{b.clip_id, b.object_label, {}, {}};
    for (const auto& step : b.steps) {
        if (f.words.size() >= max_words) {
            break;
        }
        const std::string mag = format_tenths(step.magnitude_tenths);
        f.words.insert(f.words.end(),
            {b.object_label, "magnitude", mag, "angle", std::string(sector_name(step.sector)), "operation", "area", step.area,
                "movement", "in", "place", step.mip, "place"});
        for (const auto& p : step.placement) {
            f.words.emplace_back(vertical_name(p.vert));
            f.words.emplace_back(horizontal_name(p.horiz));
        }
    }
    if (f.words.size() > max_words) {
        f.words.resize(max_words);
    }
    f.roles = roles_for_length(f.words.size());
    return f;
}

std::string MaskedSample::key() const
{
    return summary_key(clip_id, object_label);
}

std::vector<std::string> MaskedSample::unmasked() const
{
    auto out = words;
    for (const auto& [pos, word] : targets) {
        out.at(pos) = word;
    }
    return out;
}

std::uint64_t sample_seed(std::uint64_t global_seed, std::string_view key)
{
    return derive_seed(global_seed, key);
}

MaskedSample mask_values(const FlatBehaviour& f, double rate, std::uint64_t seed)
{
    MaskedSample m{f.clip_id, f.object_label, f.words, {}};
    Rng rng(seed);
    for (std::size_t i = 0; i < f.words.size(); ++i) {
        if (f.roles[i] != WordRole::Value) {
            continue;
        }
        // One draw per value-word regardless of outcome keeps positions independent.
        if (rng.uniform() < rate) {
            m.targets.emplace_back(i, f.words[i]);
            m.words[i] = std::string(kMaskToken);
        }
    }
    return m;
}

std::string corpus_line(const FlatBehaviour& f)
{
    return f.key() + "\t" + f.text();
}

std::string write_corpus(const std::vector<FlatBehaviour>& corpus)
{
    std::string out;
    for (const auto& f : corpus) {
        out += corpus_line(f);
        out += '\n';
    }
    return out;
}

std::vector<FlatBehaviour> parse_corpus(std::string_view text)
{
    std::vector<FlatBehaviour> out;
    std::size_t line_no = 0;
    for (const auto& raw : split(text, '\n')) {
        ++line_no;
        if (trim(raw).empty()) {
            continue;
        }
        const auto fields = split(raw, '\t');
        if (fields.size() != 2) {
            throw Error(ErrorKind::Parse, "corpus line needs '<key>\\t<text>'", line_no);
        }
        auto [clip, object] = split_key(fields[0], line_no);
        FlatBehaviour f{std::move(clip), std::move(object), split_ws(fields[1]), {}};
        if (f.words.size() > kMaxFlatWords) {
            throw Error(ErrorKind::Validation, "corpus line exceeds " + std::to_string(kMaxFlatWords) + " words", line_no);
        }
        f.roles = roles_for_length(f.words.size());
        out.push_back(std::move(f));
    }
    return out;
}

std::string masked_line(const MaskedSample& m)
{
    std::string out = m.key() + "\t";
    for (std::size_t i = 0; i < m.words.size(); ++i) {
        if (i > 0) {
            out += ' ';
        }
        out += m.words[i];
    }
    out += '\t';
    for (std::size_t i = 0; i < m.targets.size(); ++i) {
        if (i > 0) {
            out += ' ';
        }
        out += std::to_string(m.targets[i].first) + ":" + m.targets[i].second;
    }
    return out;
}

std::string write_masked_corpus(const std::vector<MaskedSample>& samples)
{
    std::string out;
    for (const auto& m : samples) {
        out += masked_line(m);
        out += '\n';
    }
    return out;
}

std::vector<MaskedSample> parse_masked_corpus(std::string_view text)
{
    std::vector<MaskedSample> out;
    std::size_t line_no = 0;
    for (const auto& raw : split(text, '\n')) {
        ++line_no;
        if (trim(raw).empty()) {
            continue;
        }
        const auto fields = split(raw, '\t');
        if (fields.size() != 3) {
            throw Error(ErrorKind::Parse, "masked corpus line needs three tab-separated fields", line_no);
        }
        auto [clip, object] = split_key(fields[0], line_no);
        MaskedSample m{std::move(clip), std::move(object), split_ws(fields[1]), {}};
        for (const auto& item : split_ws(fields[2])) {
            const auto colon = item.find(':');
            std::size_t pos = 0;
            auto [ptr, ec] = std::from_chars(item.data(), item.data() + (colon == std::string::npos ? 0 : colon), pos);
            if (colon == std::string::npos || ec != std::errc{} || ptr != item.data() + colon || pos >= m.words.size()) {
                throw Error(ErrorKind::Parse, "bad mask target '" + item + "'", line_no);
            }
            if (m.words[pos] != kMaskToken) {
                throw Error(ErrorKind::Validation, "target position " + std::to_string(pos) + " is not masked", line_no);
            }
            m.targets.emplace_back(pos, item.substr(colon + 1));
        }
        out.push_back(std::move(m));
    }
    return out;
}

} // namespace advrec
