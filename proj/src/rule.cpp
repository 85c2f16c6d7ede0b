#include "advrec/rule.hpp"

#include "advrec/error.hpp"
#include "advrec/util.hpp"

#include <charconv>

namespace advrec {

std::string_view bias_name(Bias b)
{
    switch (b) {
    case Bias::Magnitude: return "magnitude";
    case Bias::Angle: return "angle";
    case Bias::OperationArea: return "operation_area";
    case Bias::CellOccupancy: return "cell_occupancy";
    }
    return "";
}

std::optional<Bias> bias_from_name(std::string_view name)
{
    for (Bias b : kAllBiases) {
        if (bias_name(b) == name) {
            return b;
        }
    }
    return std::nullopt;
}

bool ArcBody::contains(Sector s) const
{
    const int d = clockwise_distance(anchor, s);
    return d <= clockwise || (8 - d) % 8 <= anticlockwise;
}

bool CellBody::matches(const Placement& p) const
{
    const bool vert_ok = pattern == CellPattern::VertFree || p.vert == vert;
    const bool horiz_ok = pattern == CellPattern::HorizFree || p.horiz == horiz;
    return vert_ok && horiz_ok;
}

std::size_t body_literal_count(const IndicatorRule& rule)
{
    return std::visit(
        [](const auto& body) -> std::size_t {
            using T = std::decay_t<decltype(body)>;
            if constexpr (std::is_same_v<T, std::monostate>) {
                return 0;
            } else if constexpr (std::is_same_v<T, RangeBody>) {
                return (body.lower ? 1 : 0) + (body.upper ? 1 : 0);
            } else if constexpr (std::is_same_v<T, ArcBody>) {
                return 1 + (body.clockwise > 0 ? 1 : 0) + (body.anticlockwise > 0 ? 1 : 0);
            } else {
                return body.pattern == CellPattern::Both ? 2 : 1;
            }
        },
        rule.body);
}

namespace {

const BucketFamily& range_family(Bias bias, const BucketScheme& scheme)
{
    return bias == Bias::Magnitude ? scheme.magnitude : scheme.area;
}

bool body_matches_bias(const IndicatorRule& rule)
{
    switch (rule.bias) {
    case Bias::Magnitude:
    case Bias::OperationArea: return std::holds_alternative<RangeBody>(rule.body);
    case Bias::Angle: return std::holds_alternative<ArcBody>(rule.body);
    case Bias::CellOccupancy: return std::holds_alternative<CellBody>(rule.body);
    }
    return false;
}

} // namespace

void validate_rule(const IndicatorRule& rule, const BucketScheme& scheme)
{
    if (!is_token(rule.head)) {
        throw Error(ErrorKind::Validation, "rule head is not a token: '" + rule.head + "'");
    }
    if (rule.bodyless()) {
        throw Error(ErrorKind::Validation, "indicator rule for '" + rule.head + "' has no body");
    }
    if (!body_matches_bias(rule)) {
        throw Error(ErrorKind::Validation, "rule body does not match bias " + std::string(bias_name(rule.bias)));
    }
    if (const auto* range = std::get_if<RangeBody>(&rule.body)) {
        const auto n = range_family(rule.bias, scheme).size();
        if (!range->lower && !range->upper) {
            throw Error(ErrorKind::Validation, "range rule has neither bound");
        }
        if ((range->lower && *range->lower >= n) || (range->upper && *range->upper >= n)) {
            throw Error(ErrorKind::Validation, "range bound outside bucket family");
        }
        if (range->lower && range->upper && *range->lower > *range->upper) {
            throw Error(ErrorKind::Validation, "range is empty");
        }
    } else if (const auto* arc = std::get_if<ArcBody>(&rule.body)) {
        if (arc->clockwise < 0 || arc->clockwise > 8 || arc->anticlockwise < 0 || arc->anticlockwise > 8) {
            throw Error(ErrorKind::Validation, "arc reach outside [0,8]");
        }
        if (arc->clockwise + arc->anticlockwise >= static_cast<int>(kSectorCount)) {
            throw Error(ErrorKind::Validation, "arc spans the full circle");
        }
    } else if (const auto* cell = std::get_if<CellBody>(&rule.body)) {
        if (cell->level < 0 || cell->level >= static_cast<int>(kPlacementLevels)) {
            throw Error(ErrorKind::Validation, "cell level outside [0,2]");
        }
    }
}

bool step_satisfies(const IndicatorRule& rule, const BehaviourStep& step, const BucketScheme& scheme)
{
    return std::visit(
        [&](const auto& body) -> bool {
            using T = std::decay_t<decltype(body)>;
            if constexpr (std::is_same_v<T, std::monostate>) {
                return true;
            } else if constexpr (std::is_same_v<T, RangeBody>) {
                if (rule.bias == Bias::Magnitude) {
                    return body.contains(scheme.magnitude.index_of(step.magnitude()));
                }
                const auto idx = scheme.area.index_of(std::string_view(step.area));
                return idx && body.contains(*idx);
            } else if constexpr (std::is_same_v<T, ArcBody>) {
                return body.contains(step.sector);
            } else {
                return body.matches(step.placement[static_cast<std::size_t>(body.level)]);
            }
        },
        rule.body);
}

bool rule_fires(const IndicatorRule& rule, const ObjectBehaviour& b, const BucketScheme& scheme)
{
    for (const auto& step : b.steps) {
        if (step_satisfies(rule, step, scheme)) {
            return true;
        }
    }
    return false;
}

std::string rule_text(const IndicatorRule& rule, const BucketScheme& scheme)
{
    std::string out = "class(" + rule.head + ", V0)";
    if (rule.bodyless()) {
        return out + ".";
    }
    out += " :- ";
    if (const auto* range = std::get_if<RangeBody>(&rule.body)) {
        const auto& family = range_family(rule.bias, scheme);
        const char* var = rule.bias == Bias::Magnitude ? "M" : "A";
        out += rule.bias == Bias::Magnitude ? "magnitude(V0, M, T)" : "operation_area(V0, A, T)";
        if (range->lower) {
            out += std::string(", ") + var + " >= " + family.name(*range->lower);
        }
        if (range->upper) {
            out += std::string(", ") + var + " <= " + family.name(*range->upper);
        }
    } else if (const auto* arc = std::get_if<ArcBody>(&rule.body)) {
        const std::string anchor(sector_name(arc->anchor));
        if (arc->clockwise == 0 && arc->anticlockwise == 0) {
            out += "angle(V0, " + anchor + ", T)";
        } else {
            out += "angle(V0, S, T), arc(" + anchor + ", S, " + std::to_string(arc->clockwise) + ", " + std::to_string(arc->anticlockwise) + ")";
        }
    } else if (const auto* cell = std::get_if<CellBody>(&rule.body)) {
        const std::string v = cell->pattern == CellPattern::VertFree ? "V" : std::string(vertical_name(cell->vert));
        const std::string h = cell->pattern == CellPattern::HorizFree ? "H" : std::string(horizontal_name(cell->horiz));
        out += "place(V0, " + std::to_string(cell->level) + ", " + v + ", " + h + ", T)";
    }
    return out + ".";
}

namespace {

struct Literal {
    std::string text;
    std::string name;
    std::vector<std::string> args;
};

std::vector<Literal> split_literals(std::string_view body, std::size_t line)
{
    std::vector<Literal> out;
    int depth = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= body.size(); ++i) {
        const bool at_end = i == body.size();
        if (!at_end && body[i] == '(') {
            ++depth;
        } else if (!at_end && body[i] == ')') {
            --depth;
        }
        if (at_end || (body[i] == ',' && depth == 0)) {
            Literal lit;
            lit.text = std::string(trim(body.substr(start, i - start)));
            const auto open = lit.text.find('(');
            if (open != std::string::npos) {
                if (lit.text.back() != ')') {
                    throw Error(ErrorKind::Parse, "malformed literal '" + lit.text + "'", line);
                }
                lit.name = lit.text.substr(0, open);
                for (const auto& a : split(std::string_view(lit.text).substr(open + 1, lit.text.size() - open - 2), ',')) {
                    lit.args.emplace_back(trim(a));
                }
            }
            out.push_back(std::move(lit));
            start = i + 1;
        }
    }
    if (depth != 0) {
        throw Error(ErrorKind::Parse, "unbalanced parentheses in rule body", line);
    }
    return out;
}

int parse_small_int(const std::string& text, std::size_t line)
{
    int v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw Error(ErrorKind::Parse, "expected integer, got '" + text + "'", line);
    }
    return v;
}

std::size_t bucket_index(const BucketFamily& family, const std::string& name, std::size_t line)
{
    auto idx = family.index_of(std::string_view(name));
    if (!idx) {
        throw Error(ErrorKind::Parse, "unknown bucket '" + name + "'", line);
    }
    return *idx;
}

IndicatorRule parse_rule_impl(std::string_view text, Bias bias, const BucketScheme& scheme, std::size_t line)
{
    auto t = trim(text);
    if (t.size() < 2 || t.back() != '.') {
        throw Error(ErrorKind::Parse, "rule must end with '.'", line);
    }
    t.remove_suffix(1);
    const auto arrow = t.find(":-");
    const auto head = trim(t.substr(0, arrow));
    IndicatorRule rule;
    rule.bias = bias;
    const std::string_view prefix = "class(";
    const std::string_view suffix = ", V0)";
    if (head.substr(0, prefix.size()) != prefix || head.size() <= prefix.size() + suffix.size() || head.substr(head.size() - suffix.size()) != suffix) {
        throw Error(ErrorKind::Parse, "rule head must be class(<token>, V0)", line);
    }
    rule.head = std::string(head.substr(prefix.size(), head.size() - prefix.size() - suffix.size()));
    if (arrow == std::string_view::npos) {
        return rule;
    }
    const auto lits = split_literals(t.substr(arrow + 2), line);
    const auto bad = [&](const std::string& what) { return Error(ErrorKind::Parse, "bad " + std::string(bias_name(bias)) + " rule body: " + what, line); };

    switch (bias) {
    case Bias::Magnitude:
    case Bias::OperationArea: {
        const bool mag = bias == Bias::Magnitude;
        const std::string anchor = mag ? "magnitude(V0, M, T)" : "operation_area(V0, A, T)";
        const std::string var = mag ? "M" : "A";
        if (lits.empty() || lits[0].text != anchor) {
            throw bad("expected " + anchor);
        }
        RangeBody range;
        for (std::size_t i = 1; i < lits.size(); ++i) {
            const auto parts = split_ws(lits[i].text);
            if (parts.size() != 3 || parts[0] != var) {
                throw bad(lits[i].text);
            }
            const auto idx = bucket_index(range_family(bias, scheme), parts[2], line);
            if (parts[1] == ">=" && !range.lower) {
                range.lower = idx;
            } else if (parts[1] == "<=" && !range.upper) {
                range.upper = idx;
            } else {
                throw bad(lits[i].text);
            }
        }
        rule.body = range;
        break;
    }
    case Bias::Angle: {
        if (lits.empty() || lits[0].name != "angle" || lits[0].args.size() != 3) {
            throw bad("expected angle/3");
        }
        ArcBody arc;
        if (auto s = sector_from_name(lits[0].args[1]); s && lits.size() == 1) {
            arc.anchor = *s;
        } else if (lits[0].args[1] == "S" && lits.size() == 2 && lits[1].name == "arc" && lits[1].args.size() == 4) {
            auto anchor = sector_from_name(lits[1].args[0]);
            if (!anchor) {
                throw bad("unknown sector '" + lits[1].args[0] + "'");
            }
            arc.anchor = *anchor;
            arc.clockwise = parse_small_int(lits[1].args[2], line);
            arc.anticlockwise = parse_small_int(lits[1].args[3], line);
        } else {
            throw bad(std::string(t));
        }
        rule.body = arc;
        break;
    }
    case Bias::CellOccupancy: {
        if (lits.size() != 1 || lits[0].name != "place" || lits[0].args.size() != 5) {
            throw bad("expected a single place/5 literal");
        }
        const auto& a = lits[0].args;
        CellBody cell;
        cell.level = parse_small_int(a[1], line);
        const auto v = vertical_from_name(a[2]);
        const auto h = horizontal_from_name(a[3]);
        if (v && h) {
            cell.pattern = CellPattern::Both;
            cell.vert = *v;
            cell.horiz = *h;
        } else if (!v && a[2] == "V" && h) {
            cell.pattern = CellPattern::VertFree;
            cell.horiz = *h;
        } else if (v && !h && a[3] == "H") {
            cell.pattern = CellPattern::HorizFree;
            cell.vert = *v;
        } else {
            throw bad(lits[0].text);
        }
        rule.body = cell;
        break;
    }
    }
    try {
        validate_rule(rule, scheme);
    } catch (const Error& e) {
        throw Error(ErrorKind::Parse, e.what(), line);
    }
    return rule;
}

} // namespace

IndicatorRule parse_rule_text(std::string_view text, Bias bias, const BucketScheme& scheme)
{
    return parse_rule_impl(text, bias, scheme, 0);
}

std::string rules_line(const TaggedRule& rule, const BucketScheme& scheme)
{
    return rule.adverb + "|" + rule.antonym + "|" + std::string(bias_name(rule.rule.bias)) + "|" + rule_text(rule.rule, scheme);
}

std::string emit_rules(const std::vector<TaggedRule>& rules, const BucketScheme& scheme)
{
    std::string out;
    for (const auto& r : rules) {
        out += rules_line(r, scheme);
        out += '\n';
    }
    return out;
}

std::vector<TaggedRule> parse_rules(std::string_view text, const BucketScheme& scheme)
{
    std::vector<TaggedRule> out;
    std::size_t line_no = 0;
    for (const auto& raw : split(text, '\n')) {
        ++line_no;
        const auto line = trim(raw);
        if (line.empty() || line[0] == '#') {
            continue;
        }
        const auto fields = split(line, '|');
        if (fields.size() != 4) {
            throw Error(ErrorKind::Parse, "expected '<adverb>|<antonym>|<bias>|<rule>'", line_no);
        }
        const auto bias = bias_from_name(fields[2]);
        if (!bias) {
            throw Error(ErrorKind::Parse, "unknown bias '" + fields[2] + "'", line_no);
        }
        TaggedRule tagged{fields[0], fields[1], parse_rule_impl(fields[3], *bias, scheme, line_no)};
        if (tagged.rule.bodyless()) {
            throw Error(ErrorKind::Parse, "indicator rules must have a body", line_no);
        }
        if (tagged.rule.head != tagged.adverb && tagged.rule.head != tagged.antonym) {
            throw Error(ErrorKind::Parse, "rule head '" + tagged.rule.head + "' is neither adverb nor antonym", line_no);
        }
        out.push_back(std::move(tagged));
    }
    return out;
}

} // namespace advrec
