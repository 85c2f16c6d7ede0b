#include "advrec/pairs.hpp"

#include "advrec/error.hpp"
#include "advrec/util.hpp"

namespace advrec {

std::vector<AdverbPair> default_pairs()
{
    return {
        {"upwards", "downwards"},
        {"forwards", "backwards"},
        {"outdoor", "indoor"},
        {"slowly", "quickly"},
        {"gently", "firmly"},
        {"out", "in"},
        {"partially", "completely"},
        {"properly", "improperly"},
        {"periodically", "continuously"},
        {"instantly", "gradually"},
        {"off", "on"},
    };
}

std::vector<AdverbPair> parse_pairs(std::string_view text)
{
    std::vector<AdverbPair> out;
    std::size_t line_no = 0;
    for (const auto& raw : split(text, '\n')) {
        ++line_no;
        std::string line(trim(raw));
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line = std::string(trim(std::string_view(line).substr(0, hash)));
        }
        if (line.empty()) {
            continue;
        }
        for (char& c : line) {
            if (c == '/') {
                c = ' ';
            }
        }
        const auto parts = split_ws(line);
        if (parts.size() != 2) {
            throw Error(ErrorKind::Parse, "expected '<adverb> <antonym>'", line_no);
        }
        AdverbPair pair{normalize_token(parts[0]), normalize_token(parts[1])};
        if (!is_token(pair.adverb) || !is_token(pair.antonym) || pair.adverb == pair.antonym) {
            throw Error(ErrorKind::Validation, "invalid pair '" + line + "'", line_no);
        }
        for (const auto& existing : out) {
            if (existing.contains(pair.adverb) || existing.contains(pair.antonym)) {
                throw Error(ErrorKind::Validation, "label appears in more than one pair: '" + line + "'", line_no);
            }
        }
        out.push_back(std::move(pair));
    }
    return out;
}

std::vector<AdverbPair> load_pairs(const std::filesystem::path& path)
{
    try {
        return parse_pairs(read_text_file(path));
    } catch (const Error& e) {
        throw e.in_file(path.string());
    }
}

std::optional<AdverbPair> pair_of(const std::vector<AdverbPair>& pairs, std::string_view label)
{
    for (const auto& p : pairs) {
        if (p.contains(label)) {
            return p;
        }
    }
    return std::nullopt;
}

} // namespace advrec
