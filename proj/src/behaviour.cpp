#include "advrec/behaviour.hpp"

#include "advrec/error.hpp"
#include "advrec/util.hpp"

#include <algorithm>
#include <limits>

namespace advrec {

void validate_behaviour(const ObjectBehaviour& b)
{
    if (b.steps.empty()) {
        throw Error(ErrorKind::Validation, "behaviour of '" + b.object_label + "' has no steps");
    }
    for (std::size_t i = 0; i < b.steps.size(); ++i) {
        if (b.steps[i].time_step != static_cast<int>(i) + 1) {
            throw Error(ErrorKind::Validation,
                "behaviour of '" + b.object_label + "' has time step " + std::to_string(b.steps[i].time_step) + " at position " + std::to_string(i + 1));
        }
    }
}

int required_salient_frames(int window)
{
    return (window + 1) / 2;
}

std::vector<WindowSpan> make_windows(int frame_count, int window)
{
    if (window < 1) {
        throw Error(ErrorKind::Validation, "window length must be >= 1");
    }
    std::vector<WindowSpan> out;
    for (int first = 0; first < frame_count; first += window) {
        const int count = std::min(window, frame_count - first);
        if (count < window && count < required_salient_frames(window)) {
            break;
        }
        out.push_back({first, count});
    }
    return out;
}

std::map<std::string, Detection> representatives(const FrameObservation& frame)
{
    std::map<std::string, Detection> out;
    for (const auto& d : frame.detections) {
        auto it = out.find(d.label);
        if (it == out.end()) {
            out.emplace(d.label, d);
        } else if (d.confidence > it->second.confidence) {
            it->second = d;
        }
    }
    return out;
}

namespace {

double flow_mag_of(const Detection& d)
{
    if (!d.flow_mag) {
        throw Error(ErrorKind::Missing, "detection '" + d.label + "' has no flow magnitude");
    }
    return *d.flow_mag;
}

/// Mean magnitude over Confident detections; falls back to all detections when none are Confident.
double frame_mean_magnitude(const FrameObservation& frame)
{
    double sum = 0.0;
    int n = 0;
    for (const auto& d : frame.detections) {
        if (d.label != kUnknownLabel) {
            sum += flow_mag_of(d);
            ++n;
        }
    }
    if (n == 0) {
        for (const auto& d : frame.detections) {
            sum += flow_mag_of(d);
            ++n;
        }
    }
    return n == 0 ? 0.0 : sum / n;
}

const FrameObservation* find_frame(const std::vector<FrameObservation>& frames, int index)
{
    auto it = std::lower_bound(frames.begin(), frames.end(), index,
        [](const FrameObservation& f, int i) { return f.frame_index < i; });
    if (it == frames.end() || it->frame_index != index) {
        return nullptr;
    }
    return &*it;
}

int frame_count_of(const std::vector<FrameObservation>& frames)
{
    return frames.empty() ? 0 : frames.back().frame_index + 1;
}

} // namespace

SalienceResult select_salient(const std::vector<FrameObservation>& frames, int window)
{
    SalienceResult result;
    result.windows = make_windows(frame_count_of(frames), window);
    const int needed = required_salient_frames(window);

    std::map<std::string, std::vector<int>> passes; // label -> per-window pass count
    for (std::size_t w = 0; w < result.windows.size(); ++w) {
        const auto& span = result.windows[w];
        for (int f = span.first_frame; f < span.first_frame + span.frame_count; ++f) {
            const auto* frame = find_frame(frames, f);
            if (frame == nullptr || frame->detections.empty()) {
                continue;
            }
            const double mean = frame_mean_magnitude(*frame);
            for (const auto& [label, det] : representatives(*frame)) {
                auto& counts = passes[label];
                counts.resize(result.windows.size(), 0);
                if (flow_mag_of(det) >= mean) {
                    ++counts[w];
                }
            }
        }
    }
    for (const auto& [label, counts] : passes) {
        std::vector<bool> survived(result.windows.size(), false);
        for (std::size_t w = 0; w < counts.size(); ++w) {
            survived[w] = counts[w] >= needed;
        }
        result.survives.emplace(label, std::move(survived));
    }
    return result;
}

WindowAggregate aggregate_window(const std::vector<Detection>& detections)
{
    if (detections.empty()) {
        throw Error(ErrorKind::Degenerate, "window aggregate needs at least one detection");
    }
    WindowAggregate agg;
    double mag_sum = 0.0;
    double area_sum = 0.0;
    double xmin = std::numeric_limits<double>::infinity();
    double ymin = xmin;
    double xmax = -xmin;
    double ymax = -xmin;
    std::vector<double> angles;
    for (const auto& d : detections) {
        mag_sum += flow_mag_of(d);
        angles.push_back(d.flow_ang.value_or(0.0));
        area_sum += d.bbox.area();
        xmin = std::min(xmin, d.bbox.xmin);
        ymin = std::min(ymin, d.bbox.ymin);
        xmax = std::max(xmax, d.bbox.xmax);
        ymax = std::max(ymax, d.bbox.ymax);
    }
    const double n = static_cast<double>(detections.size());
    const double mean_area = area_sum / n;
    if (!(mean_area > 0.0)) {
        throw Error(ErrorKind::Degenerate, "mean bounding-box area is zero");
    }
    agg.mean_mag = mag_sum / n;
    agg.sector = sector_from_angle(circular_mean(angles, {}).ang);
    agg.operation_area = (xmax - xmin) * (ymax - ymin);
    agg.movement_in_place = agg.operation_area / mean_area;
    agg.placement = placement_path(0.5 * (xmin + xmax), 0.5 * (ymin + ymax));
    agg.frames_present = static_cast<int>(detections.size());
    return agg;
}

BehaviourStep discretize(const WindowAggregate& agg, const BucketScheme& scheme)
{
    BehaviourStep step;
    step.time_step = agg.time_step;
    step.magnitude_tenths = to_tenths(agg.mean_mag);
    step.sector = agg.sector;
    step.area = scheme.area.name_of(agg.operation_area);
    step.mip = scheme.mip.name_of(agg.movement_in_place);
    step.placement = agg.placement;
    return step;
}

ExtractionResult extract_behaviours(const std::vector<FrameObservation>& frames, const BucketScheme& scheme,
    int window, const std::string& clip_id)
{
    const auto banded = band_frames(frames);
    const auto salience = select_salient(banded, window);

    ExtractionResult result;
    for (const auto& [label, survived] : salience.survives) {
        ObjectBehaviour behaviour{clip_id, label, {}};
        for (std::size_t w = 0; w < salience.windows.size(); ++w) {
            if (!survived[w]) {
                continue;
            }
            const auto& span = salience.windows[w];
            std::vector<Detection> dets;
            for (int f = span.first_frame; f < span.first_frame + span.frame_count; ++f) {
                const auto* frame = find_frame(banded, f);
                if (frame == nullptr) {
                    continue;
                }
                auto reps = representatives(*frame);
                if (auto it = reps.find(label); it != reps.end()) {
                    dets.push_back(it->second);
                }
            }
            auto agg = aggregate_window(dets);
            agg.time_step = static_cast<int>(behaviour.steps.size()) + 1;
            behaviour.steps.push_back(discretize(agg, scheme));
        }
        if (behaviour.steps.empty()) {
            continue;
        }
        if (label == kUnknownLabel) {
            result.unknown.push_back(std::move(behaviour));
        } else {
            result.behaviours.push_back(std::move(behaviour));
        }
    }
    return result;
}

} // namespace advrec
