#include "advrec/features.hpp"

#include "advrec/util.hpp"

#include <charconv>

namespace advrec {

std::vector<double> EmbeddingTable::lookup(const std::string& token, std::vector<std::string>* missing) const
{
    auto it = entries.find(token);
    if (it == entries.end()) {
        if (missing != nullptr) {
            missing->push_back(token);
        }
        return std::vector<double>(dim, 0.0);
    }
    return it->second;
}

namespace {

double parse_double(std::string_view text, std::size_t line)
{
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw Error(ErrorKind::Parse, "not a number: '" + std::string(text) + "'", line);
    }
    return v;
}

std::size_t parse_size(std::string_view text, std::size_t line)
{
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw Error(ErrorKind::Parse, "not a count: '" + std::string(text) + "'", line);
    }
    return v;
}

} // namespace

EmbeddingTable parse_word_vectors(std::string_view text)
{
    EmbeddingTable table;
    std::size_t declared = 0;
    bool header = false;
    std::size_t line_no = 0;
    for (const auto& raw : split(text, '\n')) {
        ++line_no;
        const auto line = trim(raw);
        if (line.empty()) {
            continue;
        }
        const auto parts = split_ws(line);
        if (!header) {
            if (parts.size() != 2) {
                throw Error(ErrorKind::Parse, "expected header '<count> <dim>'", line_no);
            }
            declared = parse_size(parts[0], line_no);
            table.dim = parse_size(parts[1], line_no);
            if (table.dim == 0) {
                throw Error(ErrorKind::Dimension, "dimension must be positive", line_no);
            }
            header = true;
            continue;
        }
        if (parts.size() != table.dim + 1) {
            throw Error(ErrorKind::Dimension,
                "entry '" + parts[0] + "' has " + std::to_string(parts.size() - 1) + " values, expected " + std::to_string(table.dim), line_no);
        }
        std::vector<double> values;
        values.reserve(table.dim);
        for (std::size_t i = 1; i < parts.size(); ++i) {
            values.push_back(parse_double(parts[i], line_no));
        }
        if (!table.entries.emplace(parts[0], std::move(values)).second) {
            throw Error(ErrorKind::Validation, "duplicate token '" + parts[0] + "'", line_no);
        }
    }
    if (!header) {
        throw Error(ErrorKind::Parse, "empty word-vector file");
    }
    if (table.entries.size() != declared) {
        throw Error(ErrorKind::Validation,
            "header declares " + std::to_string(declared) + " entries, found " + std::to_string(table.entries.size()));
    }
    return table;
}

EmbeddingTable load_embeddings(const std::filesystem::path& path)
{
    try {
        return parse_word_vectors(read_text_file(path));
    } catch (const Error& e) {
        throw e.in_file(path.string());
    }
}

std::string serialize_word_vectors(const EmbeddingTable& table)
{
    std::string out = std::to_string(table.entries.size()) + " " + std::to_string(table.dim) + "\n";
    for (const auto& [token, values] : table.entries) {
        out += token;
        for (double v : values) {
            out += ' ';
            out += format_real(v);
        }
        out += '\n';
    }
    return out;
}

std::string summary_key(std::string_view clip_id, std::string_view object_label)
{
    return std::string(clip_id) + "#" + std::string(object_label);
}

EmbeddingTable import_summary_vectors(const std::filesystem::path& path)
{
    return load_embeddings(path);
}

std::vector<std::uint8_t> indicator_vector(const ObjectBehaviour& b, const InducedRuleSet& rules, const BucketScheme& scheme)
{
    std::vector<std::uint8_t> bits;
    bits.reserve(rules.rules.size());
    for (const auto& rule : rules.rules) {
        bits.push_back(rule_fires(rule, b, scheme) ? 1 : 0);
    }
    return bits;
}

FeatureVector indicator_features(const ObjectBehaviour& b, const std::string& label, const std::string& action,
    const InducedRuleSet& rules, const EmbeddingTable& embeddings, const BucketScheme& scheme,
    std::vector<std::string>* missing_actions)
{
    FeatureVector fv{b.clip_id, b.object_label, label, {}, FeatureSource::Indicator, rules.pair};
    for (auto bit : indicator_vector(b, rules, scheme)) {
        fv.values.push_back(bit);
    }
    const auto emb = embeddings.lookup(action, missing_actions);
    fv.values.insert(fv.values.end(), emb.begin(), emb.end());
    return fv;
}

FeatureVector summary_features(const ObjectBehaviour& b, const std::string& label, const std::string& action,
    const AdverbPair& pair, const EmbeddingTable& summaries, const EmbeddingTable& embeddings,
    std::vector<std::string>* missing_actions)
{
    const auto key = summary_key(b.clip_id, b.object_label);
    auto it = summaries.entries.find(key);
    if (it == summaries.entries.end()) {
        throw Error(ErrorKind::Missing, "no summary vector for '" + key + "'");
    }
    FeatureVector fv{b.clip_id, b.object_label, label, it->second, FeatureSource::Summary, pair};
    const auto emb = embeddings.lookup(action, missing_actions);
    fv.values.insert(fv.values.end(), emb.begin(), emb.end());
    return fv;
}

std::string write_feature_csv(const std::vector<FeatureVector>& rows)
{
    const std::size_t width = rows.empty() ? 0 : rows.front().values.size();
    std::string out = "clip_id,object,label";
    for (std::size_t i = 0; i < width; ++i) {
        out += ",v" + std::to_string(i);
    }
    out += '\n';
    for (const auto& row : rows) {
        if (row.values.size() != width) {
            throw Error(ErrorKind::Dimension, "feature rows differ in length");
        }
        out += row.clip_id + "," + row.object_label + "," + row.label;
        for (double v : row.values) {
            out += ',';
            out += format_real(v);
        }
        out += '\n';
    }
    return out;
}

std::vector<FeatureVector> parse_feature_csv(std::string_view text, const AdverbPair& pair)
{
    std::vector<FeatureVector> rows;
    std::size_t width = 0;
    std::size_t line_no = 0;
    bool header = false;
    for (const auto& raw : split(text, '\n')) {
        ++line_no;
        const auto line = trim(raw);
        if (line.empty()) {
            continue;
        }
        const auto cells = split(line, ',');
        if (!header) {
            if (cells.size() < 3 || cells[0] != "clip_id" || cells[1] != "object" || cells[2] != "label") {
                throw Error(ErrorKind::Parse, "expected header 'clip_id,object,label,v0..'", line_no);
            }
            width = cells.size() - 3;
            header = true;
            continue;
        }
        if (cells.size() != width + 3) {
            throw Error(ErrorKind::Dimension, "row has " + std::to_string(cells.size() - 3) + " values, expected " + std::to_string(width), line_no);
        }
        if (!pair.contains(cells[2])) {
            throw Error(ErrorKind::Validation, "label '" + cells[2] + "' is not part of " + pair.display(), line_no);
        }
        FeatureVector fv{cells[0], cells[1], cells[2], {}, FeatureSource::Indicator, pair};
        for (std::size_t i = 3; i < cells.size(); ++i) {
            fv.values.push_back(parse_double(cells[i], line_no));
        }
        rows.push_back(std::move(fv));
    }
    return rows;
}

} // namespace advrec
