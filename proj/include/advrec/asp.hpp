#pragma once

#include "advrec/behaviour.hpp"
#include "advrec/scheme.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace advrec {

enum class Predicate {
    Detected,
    Magnitude,
    Angle,
    OperationArea,
    MovementInPlace,
    Place,
    Opposite,
    LessThan,
    Clockwise,
    Anticlockwise,
};

std::string_view predicate_name(Predicate p);
std::optional<Predicate> predicate_from_name(std::string_view name);
std::size_t predicate_arity(Predicate p);
bool is_background_predicate(Predicate p);

struct Term {
    enum class Kind { Symbol, Integer, Decimal };

    Kind kind{Kind::Symbol};
    std::string symbol;
    std::int64_t value{0}; // Integer value, or tenths for Decimal

    static Term sym(std::string s) { return {Kind::Symbol, std::move(s), 0}; }
    static Term integer(std::int64_t v) { return {Kind::Integer, {}, v}; }
    static Term tenths(std::int64_t v) { return {Kind::Decimal, {}, v}; }

    std::string text() const;
    bool operator==(const Term&) const = default;
};

struct Fact {
    Predicate predicate{Predicate::Detected};
    std::vector<Term> args;

    std::string text() const; // `name(a, b).`
    bool operator==(const Fact&) const = default;
};

/// A fact whose predicate is outside the known vocabulary; kept verbatim.
struct ExtraFact {
    std::string name;
    std::vector<std::string> args;
    std::size_t line{0};

    std::string text() const;
    bool operator==(const ExtraFact& other) const { return name == other.name && args == other.args; }
};

/// (label carried by the clip, its antonym)
struct AdverbTag {
    std::string adverb;
    std::string antonym;

    bool operator==(const AdverbTag&) const = default;
};

struct AspProgram {
    std::string clip_id;
    std::string action;
    std::vector<AdverbTag> adverb_labels;
    std::vector<Fact> background;
    std::vector<Fact> facts;
    std::vector<ExtraFact> extras;

    bool operator==(const AspProgram&) const = default;
};

/// Facts of one behaviour in emission order (per step: detected, magnitude, angle,
/// operation_area, movement_in_place, place levels 0..2).
std::vector<Fact> behaviour_facts(const ObjectBehaviour& b);

AspProgram make_program(std::string clip_id, std::string action, std::vector<AdverbTag> labels,
    const std::vector<ObjectBehaviour>& behaviours, std::vector<Fact> background);

std::string emit_program(const AspProgram& program);
std::string emit_program(const std::vector<ObjectBehaviour>& behaviours, const std::vector<Fact>& background);

AspProgram parse_program(std::string_view text);
AspProgram load_program(const std::filesystem::path& path);

/// Regroups behaviour facts into per-object behaviours (order of first appearance).
std::vector<ObjectBehaviour> behaviours_from_program(const AspProgram& program);

/// opposite/2 pairs, less_than/3 over every bucket family, clockwise/3 and
/// anticlockwise/3 closures over the 8 sectors with distances 1..8.
std::vector<Fact> generate_background(const BucketScheme& scheme);

inline constexpr int kMaxSectorTicks = 8;

} // namespace advrec
