#include "advrec/asp.hpp"

#include "advrec/error.hpp"
#include "advrec/util.hpp"

#include <array>
#include <charconv>
#include <map>
#include <set>

namespace advrec {

namespace {

struct PredicateInfo {
    Predicate predicate;
    std::string_view name;
    std::string_view signature; // per argument: s = symbol, i = integer, d = decimal
};

constexpr std::array<PredicateInfo, 10> kPredicates = {{
    {Predicate::Detected, "detected", "si"},
    {Predicate::Magnitude, "magnitude", "sdi"},
    {Predicate::Angle, "angle", "ssi"},
    {Predicate::OperationArea, "operation_area", "ssi"},
    {Predicate::MovementInPlace, "movement_in_place", "ssi"},
    {Predicate::Place, "place", "sissi"},
    {Predicate::Opposite, "opposite", "ss"},
    {Predicate::LessThan, "less_than", "ssi"},
    {Predicate::Clockwise, "clockwise", "ssi"},
    {Predicate::Anticlockwise, "anticlockwise", "ssi"},
}};

const PredicateInfo& info(Predicate p)
{
    return kPredicates[static_cast<std::size_t>(p)];
}

} // namespace

std::string_view predicate_name(Predicate p)
{
    return info(p).name;
}

std::optional<Predicate> predicate_from_name(std::string_view name)
{
    for (const auto& pi : kPredicates) {
        if (pi.name == name) {
            return pi.predicate;
        }
    }
    return std::nullopt;
}

std::size_t predicate_arity(Predicate p)
{
    return info(p).signature.size();
}

bool is_background_predicate(Predicate p)
{
    return p == Predicate::Opposite || p == Predicate::LessThan || p == Predicate::Clockwise || p == Predicate::Anticlockwise;
}

std::string Term::text() const
{
    switch (kind) {
    case Kind::Symbol: return symbol;
    case Kind::Integer: return std::to_string(value);
    case Kind::Decimal: return format_tenths(value);
    }
    return {};
}

std::string Fact::text() const
{
    std::string out(predicate_name(predicate));
    out += '(';
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (i > 0) {
            out += ", ";
        }
        out += args[i].text();
    }
    out += ").";
    return out;
}

std::string ExtraFact::text() const
{
    std::string out = name;
    if (!args.empty()) {
        out += '(';
        for (std::size_t i = 0; i < args.size(); ++i) {
            if (i > 0) {
                out += ", ";
            }
            out += args[i];
        }
        out += ')';
    }
    out += '.';
    return out;
}

std::vector<Fact> behaviour_facts(const ObjectBehaviour& b)
{
    std::vector<Fact> out;
    const auto obj = Term::sym(b.object_label);
    for (const auto& step : b.steps) {
        const auto t = Term::integer(step.time_step);
        out.push_back({Predicate::Detected, {obj, t}});
        out.push_back({Predicate::Magnitude, {obj, Term::tenths(step.magnitude_tenths), t}});
        out.push_back({Predicate::Angle, {obj, Term::sym(std::string(sector_name(step.sector))), t}});
        out.push_back({Predicate::OperationArea, {obj, Term::sym(step.area), t}});
        out.push_back({Predicate::MovementInPlace, {obj, Term::sym(step.mip), t}});
        for (std::size_t level = 0; level < kPlacementLevels; ++level) {
            const auto& p = step.placement[level];
            out.push_back({Predicate::Place,
                {obj, Term::integer(static_cast<std::int64_t>(level)), Term::sym(std::string(vertical_name(p.vert))),
                    Term::sym(std::string(horizontal_name(p.horiz))), t}});
        }
    }
    return out;
}

AspProgram make_program(std::string clip_id, std::string action, std::vector<AdverbTag> labels,
    const std::vector<ObjectBehaviour>& behaviours, std::vector<Fact> background)
{
    AspProgram p;
    p.clip_id = std::move(clip_id);
    p.action = std::move(action);
    p.adverb_labels = std::move(labels);
    p.background = std::move(background);
    for (const auto& b : behaviours) {
        auto facts = behaviour_facts(b);
        p.facts.insert(p.facts.end(), facts.begin(), facts.end());
    }
    return p;
}

std::string emit_program(const AspProgram& program)
{
    std::string out;
    out += "% clip: " + program.clip_id + "\n";
    if (!program.action.empty()) {
        out += "% action: " + program.action + "\n";
    }
    for (const auto& tag : program.adverb_labels) {
        out += "% label: " + tag.adverb + " " + tag.antonym + "\n";
    }
    out += "% background\n";
    for (const auto& f : program.background) {
        out += f.text() + "\n";
    }
    out += "% behaviour\n";
    for (const auto& f : program.facts) {
        out += f.text() + "\n";
    }
    if (!program.extras.empty()) {
        out += "% extras\n";
        for (const auto& e : program.extras) {
            out += e.text() + "\n";
        }
    }
    return out;
}

std::string emit_program(const std::vector<ObjectBehaviour>& behaviours, const std::vector<Fact>& background)
{
    const std::string clip = behaviours.empty() ? std::string() : behaviours.front().clip_id;
    return emit_program(make_program(clip, {}, {}, behaviours, background));
}

namespace {

enum class Tok { Ident, Var, Number, String, LParen, RParen, Comma, Dot, If, End };

struct Token {
    Tok kind{Tok::End};
    std::string text;
    std::size_t line{1};
};

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) {}

    // Header comments are surfaced through the callback; all other comments are skipped.
    template <typename OnComment>
    Token next(OnComment&& on_comment)
    {
        while (pos_ < text_.size()) {
            const char c = text_[pos_];
            if (c == '\n') {
                ++line_;
                ++pos_;
            } else if (c == ' ' || c == '\t' || c == '\r') {
                ++pos_;
            } else if (c == '%') {
                const auto end = text_.find('\n', pos_);
                const auto stop = end == std::string_view::npos ? text_.size() : end;
                on_comment(text_.substr(pos_ + 1, stop - pos_ - 1), line_);
                pos_ = stop;
            } else {
                break;
            }
        }
        Token tok;
        tok.line = line_;
        if (pos_ >= text_.size()) {
            tok.kind = Tok::End;
            return tok;
        }
        const char c = text_[pos_];
        auto is_word = [](char ch) {
            return (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || (ch >= '0' && ch <= '9') || ch == '_' || ch == '-';
        };
        if (c >= 'a' && c <= 'z') {
            std::size_t end = pos_;
            while (end < text_.size() && is_word(text_[end])) {
                ++end;
            }
            tok.kind = Tok::Ident;
            tok.text = normalize_token(text_.substr(pos_, end - pos_));
            pos_ = end;
        } else if ((c >= 'A' && c <= 'Z') || c == '_') {
            std::size_t end = pos_;
            while (end < text_.size() && is_word(text_[end]) && text_[end] != '-') {
                ++end;
            }
            tok.kind = Tok::Var;
            tok.text = std::string(text_.substr(pos_, end - pos_));
            pos_ = end;
        } else if ((c >= '0' && c <= '9') || (c == '-' && pos_ + 1 < text_.size() && text_[pos_ + 1] >= '0' && text_[pos_ + 1] <= '9')) {
            std::size_t end = pos_ + 1;
            while (end < text_.size() && text_[end] >= '0' && text_[end] <= '9') {
                ++end;
            }
            if (end + 1 < text_.size() && text_[end] == '.' && text_[end + 1] >= '0' && text_[end + 1] <= '9') {
                ++end;
                while (end < text_.size() && text_[end] >= '0' && text_[end] <= '9') {
                    ++end;
                }
            }
            tok.kind = Tok::Number;
            tok.text = std::string(text_.substr(pos_, end - pos_));
            pos_ = end;
        } else if (c == '"') {
            std::size_t end = pos_ + 1;
            while (end < text_.size() && text_[end] != '"' && text_[end] != '\n') {
                end += text_[end] == '\\' ? 2 : 1;
            }
            if (end >= text_.size() || text_[end] != '"') {
                throw Error(ErrorKind::Parse, "unterminated string", line_);
            }
            tok.kind = Tok::String;
            tok.text = std::string(text_.substr(pos_, end + 1 - pos_));
            pos_ = end + 1;
        } else if (c == ':' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '-') {
            tok.kind = Tok::If;
            tok.text = ":-";
            pos_ += 2;
        } else {
            tok.text = std::string(1, c);
            switch (c) {
            case '(': tok.kind = Tok::LParen; break;
            case ')': tok.kind = Tok::RParen; break;
            case ',': tok.kind = Tok::Comma; break;
            case '.': tok.kind = Tok::Dot; break;
            default: throw Error(ErrorKind::Parse, std::string("unexpected character '") + c + "'", line_);
            }
            ++pos_;
        }
        return tok;
    }

private:
    std::string_view text_;
    std::size_t pos_{0};
    std::size_t line_{1};
};

bool parse_int(std::string_view text, std::int64_t& out)
{
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc{} && ptr == text.data() + text.size();
}

Term convert_term(const Token& tok, char expected, std::string_view predicate, std::size_t position)
{
    const auto where = [&] { return std::string(predicate) + " argument " + std::to_string(position + 1); };
    switch (expected) {
    case 's':
        if (tok.kind != Tok::Ident) {
            throw Error(ErrorKind::Parse, "expected a lowercase constant for " + where() + ", got '" + tok.text + "'", tok.line);
        }
        return Term::sym(tok.text);
    case 'i': {
        std::int64_t v = 0;
        if (tok.kind != Tok::Number || !parse_int(tok.text, v)) {
            throw Error(ErrorKind::Parse, "expected an integer for " + where() + ", got '" + tok.text + "'", tok.line);
        }
        return Term::integer(v);
    }
    case 'd': {
        if (tok.kind != Tok::Number) {
            throw Error(ErrorKind::Parse, "expected a number for " + where() + ", got '" + tok.text + "'", tok.line);
        }
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(tok.text.data(), tok.text.data() + tok.text.size(), v);
        if (ec != std::errc{} || ptr != tok.text.data() + tok.text.size()) {
            throw Error(ErrorKind::Parse, "bad number '" + tok.text + "'", tok.line);
        }
        return Term::tenths(to_tenths(v));
    }
    default: break;
    }
    throw Error(ErrorKind::Parse, "internal signature error", tok.line);
}

void apply_header(AspProgram& program, std::string_view comment, std::size_t line)
{
    const auto body = trim(comment);
    const auto colon = body.find(':');
    if (colon == std::string_view::npos) {
        return;
    }
    const auto key = trim(body.substr(0, colon));
    const auto value = trim(body.substr(colon + 1));
    if (key == "clip") {
        program.clip_id = std::string(value);
    } else if (key == "action") {
        program.action = normalize_token(value);
    } else if (key == "label") {
        const auto parts = split_ws(value);
        if (parts.size() != 2) {
            throw Error(ErrorKind::Parse, "label header needs '<adverb> <antonym>'", line);
        }
        program.adverb_labels.push_back({normalize_token(parts[0]), normalize_token(parts[1])});
    }
}

} // namespace

AspProgram parse_program(std::string_view text)
{
    AspProgram program;
    Lexer lexer(text);
    auto on_comment = [&](std::string_view comment, std::size_t line) { apply_header(program, comment, line); };

    Token tok = lexer.next(on_comment);
    while (tok.kind != Tok::End) {
        if (tok.kind != Tok::Ident) {
            throw Error(ErrorKind::Parse, "unexpected '" + tok.text + "' where a fact should start", tok.line);
        }
        const std::string name = tok.text;
        const std::size_t start_line = tok.line;
        std::vector<Token> args;
        tok = lexer.next(on_comment);
        if (tok.kind == Tok::LParen) {
            while (true) {
                tok = lexer.next(on_comment);
                if (tok.kind == Tok::Ident || tok.kind == Tok::Var || tok.kind == Tok::Number || tok.kind == Tok::String) {
                    args.push_back(tok);
                } else if (tok.kind == Tok::End) {
                    throw Error(ErrorKind::Parse, "unterminated fact '" + name + "'", start_line);
                } else {
                    throw Error(ErrorKind::Parse, "unexpected '" + tok.text + "' in arguments of '" + name + "'", tok.line);
                }
                tok = lexer.next(on_comment);
                if (tok.kind == Tok::RParen) {
                    break;
                }
                if (tok.kind != Tok::Comma) {
                    if (tok.kind == Tok::End) {
                        throw Error(ErrorKind::Parse, "unterminated fact '" + name + "'", start_line);
                    }
                    throw Error(ErrorKind::Parse, "expected ',' or ')' in '" + name + "', got '" + tok.text + "'", tok.line);
                }
            }
            tok = lexer.next(on_comment);
        }
        if (tok.kind == Tok::If) {
            throw Error(ErrorKind::Parse, "rules are not supported in fact programs", tok.line);
        }
        if (tok.kind != Tok::Dot) {
            throw Error(ErrorKind::Parse, "unterminated fact '" + name + "' (missing '.')", start_line);
        }

        if (auto pred = predicate_from_name(name)) {
            const auto& sig = info(*pred).signature;
            if (args.size() != sig.size()) {
                throw Error(ErrorKind::Parse,
                    "arity mismatch for " + name + ": expected " + std::to_string(sig.size()) + ", got " + std::to_string(args.size()),
                    start_line);
            }
            Fact fact{*pred, {}};
            for (std::size_t i = 0; i < args.size(); ++i) {
                fact.args.push_back(convert_term(args[i], sig[i], name, i));
            }
            (is_background_predicate(*pred) ? program.background : program.facts).push_back(std::move(fact));
        } else {
            ExtraFact extra{name, {}, start_line};
            for (const auto& a : args) {
                extra.args.push_back(a.text);
            }
            program.extras.push_back(std::move(extra));
        }
        tok = lexer.next(on_comment);
    }
    return program;
}

AspProgram load_program(const std::filesystem::path& path)
{
    try {
        return parse_program(read_text_file(path));
    } catch (const Error& e) {
        throw e.in_file(path.string());
    }
}

namespace {

struct PartialStep {
    bool detected{false};
    std::optional<std::int64_t> magnitude;
    std::optional<Sector> sector;
    std::optional<std::string> area;
    std::optional<std::string> mip;
    std::array<std::optional<Placement>, kPlacementLevels> placement;
};

template <typename T>
void set_once(std::optional<T>& slot, T value, const std::string& what)
{
    if (slot && !(*slot == value)) {
        throw Error(ErrorKind::Validation, "conflicting " + what);
    }
    slot = std::move(value);
}

} // namespace

std::vector<ObjectBehaviour> behaviours_from_program(const AspProgram& program)
{
    std::vector<std::string> order;
    std::map<std::string, std::map<std::int64_t, PartialStep>> steps;
    for (const auto& f : program.facts) {
        const std::string& obj = f.args[0].symbol;
        if (!steps.contains(obj)) {
            order.push_back(obj);
        }
        const std::int64_t t = f.args.back().value;
        auto& step = steps[obj][t];
        const std::string where = predicate_name(f.predicate).data() + std::string(" for ") + obj + " at step " + std::to_string(t);
        switch (f.predicate) {
        case Predicate::Detected: step.detected = true; break;
        case Predicate::Magnitude: set_once(step.magnitude, f.args[1].value, where); break;
        case Predicate::Angle: {
            auto s = sector_from_name(f.args[1].symbol);
            if (!s) {
                throw Error(ErrorKind::Validation, "unknown sector '" + f.args[1].symbol + "'");
            }
            set_once(step.sector, *s, where);
            break;
        }
        case Predicate::OperationArea: set_once(step.area, f.args[1].symbol, where); break;
        case Predicate::MovementInPlace: set_once(step.mip, f.args[1].symbol, where); break;
        case Predicate::Place: {
            const auto level = f.args[1].value;
            auto v = vertical_from_name(f.args[2].symbol);
            auto h = horizontal_from_name(f.args[3].symbol);
            if (level < 0 || level >= static_cast<std::int64_t>(kPlacementLevels) || !v || !h) {
                throw Error(ErrorKind::Validation, "malformed place fact " + f.text());
            }
            set_once(step.placement[static_cast<std::size_t>(level)], Placement{*v, *h}, where);
            break;
        }
        default: break;
        }
    }

    std::vector<ObjectBehaviour> out;
    for (const auto& obj : order) {
        ObjectBehaviour b{program.clip_id, obj, {}};
        for (const auto& [t, p] : steps[obj]) {
            const std::string where = obj + " at step " + std::to_string(t);
            if (!p.detected) {
                throw Error(ErrorKind::Validation, "missing detected/2 for " + where);
            }
            if (!p.magnitude || !p.sector || !p.area || !p.mip) {
                throw Error(ErrorKind::Validation, "incomplete property facts for " + where);
            }
            BehaviourStep step;
            step.time_step = static_cast<int>(t);
            step.magnitude_tenths = *p.magnitude;
            step.sector = *p.sector;
            step.area = *p.area;
            step.mip = *p.mip;
            for (std::size_t level = 0; level < kPlacementLevels; ++level) {
                if (!p.placement[level]) {
                    throw Error(ErrorKind::Validation, "missing place level " + std::to_string(level) + " for " + where);
                }
                step.placement[level] = *p.placement[level];
            }
            b.steps.push_back(std::move(step));
        }
        validate_behaviour(b);
        out.push_back(std::move(b));
    }
    return out;
}

std::vector<Fact> generate_background(const BucketScheme& scheme)
{
    std::vector<Fact> out;
    for (const auto& [a, b] : {std::pair{"left", "right"}, std::pair{"right", "left"}, std::pair{"top", "bottom"}, std::pair{"bottom", "top"}}) {
        out.push_back({Predicate::Opposite, {Term::sym(a), Term::sym(b)}});
    }
    std::set<std::tuple<std::string, std::string, std::int64_t>> seen;
    for (const BucketFamily* family : {&scheme.area, &scheme.mip, &scheme.magnitude}) {
        for (std::size_t i = 0; i < family->size(); ++i) {
            for (std::size_t j = i + 1; j < family->size(); ++j) {
                const auto d = static_cast<std::int64_t>(j - i);
                if (seen.emplace(family->name(i), family->name(j), d).second) {
                    out.push_back({Predicate::LessThan, {Term::sym(family->name(i)), Term::sym(family->name(j)), Term::integer(d)}});
                }
            }
        }
    }
    for (const Predicate p : {Predicate::Clockwise, Predicate::Anticlockwise}) {
        const int direction = p == Predicate::Clockwise ? 1 : -1;
        for (std::size_t s = 0; s < kSectorCount; ++s) {
            const auto from = static_cast<Sector>(s);
            for (int d = 1; d <= kMaxSectorTicks; ++d) {
                out.push_back({p, {Term::sym(std::string(sector_name(from))), Term::sym(std::string(sector_name(rotate(from, direction * d)))), Term::integer(d)}});
            }
        }
    }
    return out;
}

} // namespace advrec
