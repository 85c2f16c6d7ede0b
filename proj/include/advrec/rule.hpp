#pragma once

#include "advrec/behaviour.hpp"
#include "advrec/scheme.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace advrec {

enum class Bias { Magnitude, Angle, OperationArea, CellOccupancy };

inline constexpr Bias kAllBiases[] = {Bias::Magnitude, Bias::Angle, Bias::OperationArea, Bias::CellOccupancy};

std::string_view bias_name(Bias b);
std::optional<Bias> bias_from_name(std::string_view name);

/// Inclusive bucket-index range; a missing side is unbounded.
struct RangeBody {
    std::optional<std::size_t> lower;
    std::optional<std::size_t> upper;

    bool contains(std::size_t index) const { return (!lower || index >= *lower) && (!upper || index <= *upper); }
    bool operator==(const RangeBody&) const = default;
};

/// Sectors within `clockwise` ticks clockwise or `anticlockwise` ticks anticlockwise of the anchor.
struct ArcBody {
    Sector anchor{Sector::N};
    int clockwise{0};
    int anticlockwise{0};

    bool contains(Sector s) const;
    bool operator==(const ArcBody&) const = default;
};

enum class CellPattern { Both, VertFree, HorizFree };

/// Placement at `level` matching the constant components; the free component is ignored.
struct CellBody {
    int level{0};
    CellPattern pattern{CellPattern::Both};
    Vertical vert{Vertical::Top};
    Horizontal horiz{Horizontal::Left};

    bool matches(const Placement& p) const;
    bool operator==(const CellBody&) const = default;
};

using RuleBody = std::variant<std::monostate, RangeBody, ArcBody, CellBody>;

struct IndicatorRule {
    std::string head; // adverb or antonym token
    Bias bias{Bias::Magnitude};
    RuleBody body;

    bool bodyless() const { return std::holds_alternative<std::monostate>(body); }
    bool operator==(const IndicatorRule&) const = default;
};

std::size_t body_literal_count(const IndicatorRule& rule);

/// Throws Error(Validation) when the body is empty, inverted, out of range, or spans the full circle.
void validate_rule(const IndicatorRule& rule, const BucketScheme& scheme);

bool step_satisfies(const IndicatorRule& rule, const BehaviourStep& step, const BucketScheme& scheme);

/// True iff some time-step satisfies the body. A bodyless rule always fires.
bool rule_fires(const IndicatorRule& rule, const ObjectBehaviour& b, const BucketScheme& scheme);

/// Human-readable clause, e.g. `class(strange, V0) :- magnitude(V0, M, T), M >= five_to_ten.`
std::string rule_text(const IndicatorRule& rule, const BucketScheme& scheme);
IndicatorRule parse_rule_text(std::string_view text, Bias bias, const BucketScheme& scheme);

struct TaggedRule {
    std::string adverb;
    std::string antonym;
    IndicatorRule rule;

    bool operator==(const TaggedRule&) const = default;
};

/// `.rules` line: `<adverb>|<antonym>|<bias>|<clause>`.
std::string rules_line(const TaggedRule& rule, const BucketScheme& scheme);
std::string emit_rules(const std::vector<TaggedRule>& rules, const BucketScheme& scheme);
std::vector<TaggedRule> parse_rules(std::string_view text, const BucketScheme& scheme);

} // namespace advrec
