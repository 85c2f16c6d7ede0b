#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace advrec {

/// Normalized box, y-down screen coordinates in [0,1].
struct BBox {
    double xmin{0.0};
    double ymin{0.0};
    double xmax{0.0};
    double ymax{0.0};

    double width() const { return xmax - xmin; }
    double height() const { return ymax - ymin; }
    double area() const { return width() * height(); }

    bool operator==(const BBox&) const = default;
};

struct Detection {
    std::string label;
    double confidence{0.0};
    BBox bbox;
    std::optional<double> flow_mag;
    std::optional<double> flow_ang; // degrees, 0 = screen-right, 90 = screen-up

    bool operator==(const Detection&) const = default;
};

struct FrameObservation {
    int frame_index{0};
    std::vector<Detection> detections;

    bool operator==(const FrameObservation&) const = default;
};

enum class ConfidenceBand { Discarded, Unknown, Confident };

inline constexpr double kDiscardBelow = 0.3;
inline constexpr double kConfidentFrom = 0.5;
inline constexpr std::string_view kUnknownLabel = "unknown";

ConfidenceBand confidence_band(double confidence);

struct BandedDetection {
    ConfidenceBand band;
    Detection detection; // label rewritten to `unknown` for the Unknown band
};

BandedDetection band_detection(const Detection& d);

/// Drops Discarded detections and relabels Unknown ones.
std::vector<FrameObservation> band_frames(const std::vector<FrameObservation>& frames);

/// Throws Error(Validation) naming the offending field.
void validate_detection(const Detection& d, std::size_t line = 0);

std::vector<FrameObservation> parse_observations(std::string_view text);
std::vector<FrameObservation> load_observations(const std::filesystem::path& path);
std::string serialize_observations(const std::vector<FrameObservation>& frames);

struct FlowCell {
    float magnitude{0.0f};
    float angle{0.0f};

    bool operator==(const FlowCell&) const = default;
};

/// One delayed-capture frame of dense flow, row-major, row 0 at the top.
struct FlowRaster {
    std::uint32_t width{0};
    std::uint32_t height{0};
    std::vector<FlowCell> cells;

    const FlowCell& at(std::uint32_t col, std::uint32_t row) const { return cells[row * width + col]; }
    bool operator==(const FlowRaster&) const = default;
};

/// Contents of an `AFLW` sidecar: one raster per delayed-capture frame.
struct FlowSequence {
    std::uint32_t width{0};
    std::uint32_t height{0};
    std::vector<FlowRaster> frames;

    bool operator==(const FlowSequence&) const = default;
};

FlowSequence parse_flow_sequence(std::string_view bytes);
FlowSequence load_flow_sequence(const std::filesystem::path& path);
std::string serialize_flow_sequence(const FlowSequence& seq);

struct FlowAverage {
    double mag{0.0};
    double ang{0.0};
    bool zero_resultant{false}; // vector sum cancelled; `ang` is 0 by convention
};

/// Mean magnitude and magnitude-weighted circular mean angle over the cells whose
/// centers fall inside `bbox` (half-open on the max edges).
FlowAverage average_flow_in_bbox(const FlowRaster& raster, const BBox& bbox);

/// Fills missing per-box flow from the sidecar; inline values are kept as-is.
std::vector<FrameObservation> resolve_flow(std::vector<FrameObservation> frames, const FlowSequence* flow);

/// Circular mean of angles in degrees with optional weights; reports zero_resultant when the sum cancels.
FlowAverage circular_mean(const std::vector<double>& angles_deg, const std::vector<double>& weights);

double wrap_degrees(double deg);

} // namespace advrec
