#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace advrec {

struct Bucket {
    std::string name;
    double upper{std::numeric_limits<double>::infinity()}; // exclusive; +inf for the last bucket

    bool operator==(const Bucket&) const = default;
};

/// Ordered, total partition of the reals (lower end open) into named buckets.
class BucketFamily {
public:
    BucketFamily() = default;
    explicit BucketFamily(std::vector<Bucket> buckets);

    std::size_t size() const { return buckets_.size(); }
    const std::vector<Bucket>& buckets() const { return buckets_; }
    const std::string& name(std::size_t index) const { return buckets_.at(index).name; }

    std::size_t index_of(double value) const;
    const std::string& name_of(double value) const { return name(index_of(value)); }
    std::optional<std::size_t> index_of(std::string_view name) const;

    bool operator==(const BucketFamily&) const = default;

private:
    std::vector<Bucket> buckets_;
};

struct BucketScheme {
    BucketFamily area;      // fraction of frame area
    BucketFamily mip;       // movement-in-place ratio
    BucketFamily magnitude; // flow magnitude, used only by rule induction

    static BucketScheme defaults();
    static BucketScheme parse(std::string_view text);
    static BucketScheme load(const std::filesystem::path& path);
    std::string serialize() const;

    bool operator==(const BucketScheme&) const = default;
};

/// The 8 compass sectors in clockwise order starting at north.
enum class Sector { N, NE, E, SE, S, SW, W, NW };

inline constexpr std::size_t kSectorCount = 8;

std::string_view sector_name(Sector s);
std::optional<Sector> sector_from_name(std::string_view name);
/// Angle in degrees (0 = right, 90 = up); each sector spans 45 degrees, left-closed.
Sector sector_from_angle(double degrees);
/// Sector reached by stepping `ticks` clockwise (negative = anticlockwise).
Sector rotate(Sector s, int ticks);
/// Clockwise tick distance from `from` to `to`, in [0, 7].
int clockwise_distance(Sector from, Sector to);

enum class Vertical { Top, Bottom };
enum class Horizontal { Left, Right };

std::string_view vertical_name(Vertical v);
std::string_view horizontal_name(Horizontal h);
std::optional<Vertical> vertical_from_name(std::string_view name);
std::optional<Horizontal> horizontal_from_name(std::string_view name);

struct Placement {
    Vertical vert{Vertical::Top};
    Horizontal horiz{Horizontal::Left};

    bool operator==(const Placement&) const = default;
};

inline constexpr std::size_t kPlacementLevels = 3;
using PlacementPath = std::array<Placement, kPlacementLevels>;

/// Quadrant path of a point (y-down normalized coordinates) through the 3-level hierarchy.
PlacementPath placement_path(double cx, double cy);

} // namespace advrec
