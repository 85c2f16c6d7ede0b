#pragma once

#include "advrec/observation.hpp"
#include "advrec/scheme.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace advrec {

inline constexpr int kDefaultWindow = 5;

/// Averaged properties of one object over one window.
struct WindowAggregate {
    int time_step{1};
    double mean_mag{0.0};
    Sector sector{Sector::E};
    double operation_area{0.0};
    double movement_in_place{1.0};
    PlacementPath placement{};
    int frames_present{0};
};

/// Discrete facts of one object at one time-step.
struct BehaviourStep {
    int time_step{1};
    std::int64_t magnitude_tenths{0};
    Sector sector{Sector::E};
    std::string area;
    std::string mip;
    PlacementPath placement{};

    double magnitude() const { return static_cast<double>(magnitude_tenths) / 10.0; }
    bool operator==(const BehaviourStep&) const = default;
};

struct ObjectBehaviour {
    std::string clip_id;
    std::string object_label;
    std::vector<BehaviourStep> steps;

    bool operator==(const ObjectBehaviour&) const = default;
};

/// Nonempty steps, time steps strictly increasing from 1.
void validate_behaviour(const ObjectBehaviour& b);

/// Window k covers delayed-capture frames [kW, (k+1)W).
struct WindowSpan {
    int first_frame{0};
    int frame_count{0};
};

/// Non-overlapping windows over frames 0..frame_count-1; a trailing partial window
/// is kept iff it has at least ceil(W/2) frames.
std::vector<WindowSpan> make_windows(int frame_count, int window);

int required_salient_frames(int window);

struct SalienceResult {
    std::vector<WindowSpan> windows;
    std::map<std::string, std::vector<bool>> survives; // label -> per-window survival
};

/// Per-window motion-salience filter over banded frames. A label survives a window iff
/// in at least ceil(W/2) of its frames its magnitude is >= the mean magnitude of the
/// frame's Confident detections.
SalienceResult select_salient(const std::vector<FrameObservation>& frames, int window);

/// Highest-confidence detection per label; ties keep the earlier one.
std::map<std::string, Detection> representatives(const FrameObservation& frame);

WindowAggregate aggregate_window(const std::vector<Detection>& detections);

BehaviourStep discretize(const WindowAggregate& agg, const BucketScheme& scheme);

struct ExtractionResult {
    std::vector<ObjectBehaviour> behaviours; // Confident labels only, sorted by label
    std::vector<ObjectBehaviour> unknown;    // retained for completeness, never reasoned over
};

/// Frames must already be loaded with flow resolved; banding happens here.
ExtractionResult extract_behaviours(const std::vector<FrameObservation>& frames, const BucketScheme& scheme,
    int window, const std::string& clip_id);

} // namespace advrec
