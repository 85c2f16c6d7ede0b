#include "advrec/observation.hpp"

#include "advrec/error.hpp"
#include "advrec/util.hpp"

#include <json.hpp>

#include <bit>
#include <cctype>
#include <cmath>
#include <cstring>
#include <numbers>

namespace advrec {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

double require_number(const json& obj, const char* field, std::size_t line)
{
    auto it = obj.find(field);
    if (it == obj.end()) {
        throw Error(ErrorKind::Validation, std::string("missing field '") + field + "'", line);
    }
    if (!it->is_number()) {
        throw Error(ErrorKind::Validation, std::string("field '") + field + "' must be a number", line);
    }
    return it->get<double>();
}

std::optional<double> optional_number(const json& obj, const char* field, std::size_t line)
{
    auto it = obj.find(field);
    if (it == obj.end() || it->is_null()) {
        return std::nullopt;
    }
    if (!it->is_number()) {
        throw Error(ErrorKind::Validation, std::string("field '") + field + "' must be a number", line);
    }
    return it->get<double>();
}

std::string normalize_label(std::string_view raw)
{
    std::string out;
    for (char c : trim(raw)) {
        if (c == ' ' || c == '-') {
            out += '_';
        } else {
            out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        }
    }
    return out;
}

Detection parse_detection(const json& obj, std::size_t line)
{
    if (!obj.is_object()) {
        throw Error(ErrorKind::Validation, "detection must be an object", line);
    }
    Detection d;
    auto label = obj.find("label");
    if (label == obj.end() || !label->is_string()) {
        throw Error(ErrorKind::Validation, "field 'label' must be a string", line);
    }
    d.label = normalize_label(label->get<std::string>());
    d.confidence = require_number(obj, "confidence", line);

    auto bbox = obj.find("bbox");
    if (bbox == obj.end() || !bbox->is_array() || bbox->size() != 4) {
        throw Error(ErrorKind::Validation, "field 'bbox' must be an array of 4 numbers", line);
    }
    for (const auto& v : *bbox) {
        if (!v.is_number()) {
            throw Error(ErrorKind::Validation, "field 'bbox' must be an array of 4 numbers", line);
        }
    }
    d.bbox = BBox{(*bbox)[0].get<double>(), (*bbox)[1].get<double>(), (*bbox)[2].get<double>(), (*bbox)[3].get<double>()};
    d.flow_mag = optional_number(obj, "flow_mag", line);
    d.flow_ang = optional_number(obj, "flow_ang", line);
    validate_detection(d, line);
    return d;
}

} // namespace

ConfidenceBand confidence_band(double confidence)
{
    if (confidence < kDiscardBelow) {
        return ConfidenceBand::Discarded;
    }
    if (confidence < kConfidentFrom) {
        return ConfidenceBand::Unknown;
    }
    return ConfidenceBand::Confident;
}

BandedDetection band_detection(const Detection& d)
{
    BandedDetection out{confidence_band(d.confidence), d};
    if (out.band == ConfidenceBand::Unknown) {
        out.detection.label = std::string(kUnknownLabel);
    }
    return out;
}

std::vector<FrameObservation> band_frames(const std::vector<FrameObservation>& frames)
{
    std::vector<FrameObservation> out;
    out.reserve(frames.size());
    for (const auto& frame : frames) {
        FrameObservation banded{frame.frame_index, {}};
        for (const auto& d : frame.detections) {
            auto b = band_detection(d);
            if (b.band != ConfidenceBand::Discarded) {
                banded.detections.push_back(std::move(b.detection));
            }
        }
        out.push_back(std::move(banded));
    }
    return out;
}

void validate_detection(const Detection& d, std::size_t line)
{
    if (d.label.empty()) {
        throw Error(ErrorKind::Validation, "field 'label' must be nonempty", line);
    }
    if (!is_token(d.label)) {
        throw Error(ErrorKind::Validation, "field 'label' is not a lowercase identifier: '" + d.label + "'", line);
    }
    if (!(d.confidence >= 0.0 && d.confidence <= 1.0)) {
        throw Error(ErrorKind::Validation, "field 'confidence' out of [0,1]: " + format_real(d.confidence), line);
    }
    const BBox& b = d.bbox;
    for (double v : {b.xmin, b.ymin, b.xmax, b.ymax}) {
        if (!(v >= 0.0 && v <= 1.0)) {
            throw Error(ErrorKind::Validation, "field 'bbox' coordinate out of [0,1]: " + format_real(v), line);
        }
    }
    if (!(b.xmin < b.xmax)) {
        throw Error(ErrorKind::Validation, "field 'bbox' requires xmin < xmax", line);
    }
    if (!(b.ymin < b.ymax)) {
        throw Error(ErrorKind::Validation, "field 'bbox' requires ymin < ymax", line);
    }
    if (d.flow_mag && !(*d.flow_mag >= 0.0 && std::isfinite(*d.flow_mag))) {
        throw Error(ErrorKind::Validation, "field 'flow_mag' must be a finite number >= 0", line);
    }
    if (d.flow_ang && !(*d.flow_ang >= 0.0 && *d.flow_ang < 360.0)) {
        throw Error(ErrorKind::Validation, "field 'flow_ang' out of [0,360): " + format_real(*d.flow_ang), line);
    }
}

std::vector<FrameObservation> parse_observations(std::string_view text)
{
    std::vector<FrameObservation> frames;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        ++line_no;
        const auto line = trim(text.substr(start, end - start));
        start = end + 1;
        if (line.empty()) {
            if (end == text.size()) {
                break;
            }
            continue;
        }

        json obj;
        try {
            obj = json::parse(line);
        } catch (const json::parse_error& e) {
            throw Error(ErrorKind::Parse, std::string("malformed JSON: ") + e.what(), line_no);
        }
        if (!obj.is_object()) {
            throw Error(ErrorKind::Parse, "frame record must be a JSON object", line_no);
        }
        auto frame_it = obj.find("frame");
        if (frame_it == obj.end() || !frame_it->is_number_integer() || frame_it->get<long long>() < 0) {
            throw Error(ErrorKind::Validation, "field 'frame' must be an integer >= 0", line_no);
        }
        FrameObservation frame;
        frame.frame_index = frame_it->get<int>();
        if (!frames.empty() && frame.frame_index <= frames.back().frame_index) {
            throw Error(ErrorKind::Sequencing,
                "frame " + std::to_string(frame.frame_index) + " does not follow frame " + std::to_string(frames.back().frame_index),
                line_no);
        }
        auto dets = obj.find("detections");
        if (dets == obj.end() || !dets->is_array()) {
            throw Error(ErrorKind::Validation, "field 'detections' must be an array", line_no);
        }
        for (const auto& d : *dets) {
            frame.detections.push_back(parse_detection(d, line_no));
        }
        frames.push_back(std::move(frame));
        if (end == text.size()) {
            break;
        }
    }
    return frames;
}

std::vector<FrameObservation> load_observations(const std::filesystem::path& path)
{
    try {
        return parse_observations(read_text_file(path));
    } catch (const Error& e) {
        throw e.in_file(path.string());
    }
}

std::string serialize_observations(const std::vector<FrameObservation>& frames)
{
    std::string out;
    for (const auto& frame : frames) {
        ordered_json obj;
        obj["frame"] = frame.frame_index;
        obj["detections"] = ordered_json::array();
        for (const auto& d : frame.detections) {
            ordered_json det;
            det["label"] = d.label;
            det["confidence"] = d.confidence;
            det["bbox"] = {d.bbox.xmin, d.bbox.ymin, d.bbox.xmax, d.bbox.ymax};
            if (d.flow_mag) {
                det["flow_mag"] = *d.flow_mag;
            }
            if (d.flow_ang) {
                det["flow_ang"] = *d.flow_ang;
            }
            obj["detections"].push_back(std::move(det));
        }
        out += obj.dump();
        out += '\n';
    }
    return out;
}

namespace {

constexpr char kFlowMagic[4] = {'A', 'F', 'L', 'W'};

std::uint32_t read_u32(std::string_view bytes, std::size_t offset)
{
    std::uint32_t v = 0;
    for (std::size_t i = 0; i < 4; ++i) {
        v |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[offset + i])) << (8 * i);
    }
    return v;
}

float read_f32(std::string_view bytes, std::size_t offset)
{
    return std::bit_cast<float>(read_u32(bytes, offset));
}

void write_u32(std::string& out, std::uint32_t v)
{
    for (std::size_t i = 0; i < 4; ++i) {
        out += static_cast<char>((v >> (8 * i)) & 0xff);
    }
}

} // namespace

FlowSequence parse_flow_sequence(std::string_view bytes)
{
    if (bytes.size() < 16 || std::memcmp(bytes.data(), kFlowMagic, 4) != 0) {
        throw Error(ErrorKind::Parse, "flow sidecar lacks AFLW header");
    }
    FlowSequence seq;
    seq.width = read_u32(bytes, 4);
    seq.height = read_u32(bytes, 8);
    const std::uint32_t count = read_u32(bytes, 12);
    if (seq.width == 0 || seq.height == 0) {
        throw Error(ErrorKind::Validation, "flow sidecar has zero width or height");
    }
    const std::uint64_t cells = static_cast<std::uint64_t>(seq.width) * seq.height;
    const std::uint64_t expected = 16 + cells * count * 8;
    if (bytes.size() != expected) {
        throw Error(ErrorKind::Parse,
            "flow sidecar size " + std::to_string(bytes.size()) + " does not match header (expected " + std::to_string(expected) + ")");
    }
    std::size_t offset = 16;
    seq.frames.reserve(count);
    for (std::uint32_t f = 0; f < count; ++f) {
        FlowRaster raster{seq.width, seq.height, {}};
        raster.cells.resize(cells);
        for (auto& cell : raster.cells) {
            cell.magnitude = read_f32(bytes, offset);
            cell.angle = read_f32(bytes, offset + 4);
            offset += 8;
            if (!(cell.magnitude >= 0.0f) || !(cell.angle >= 0.0f && cell.angle < 360.0f)) {
                throw Error(ErrorKind::Validation, "flow sidecar frame " + std::to_string(f) + " has an out-of-range cell");
            }
        }
        seq.frames.push_back(std::move(raster));
    }
    return seq;
}

FlowSequence load_flow_sequence(const std::filesystem::path& path)
{
    try {
        return parse_flow_sequence(read_text_file(path));
    } catch (const Error& e) {
        throw e.in_file(path.string());
    }
}

std::string serialize_flow_sequence(const FlowSequence& seq)
{
    std::string out(kFlowMagic, 4);
    write_u32(out, seq.width);
    write_u32(out, seq.height);
    write_u32(out, static_cast<std::uint32_t>(seq.frames.size()));
    for (const auto& frame : seq.frames) {
        for (const auto& cell : frame.cells) {
            write_u32(out, std::bit_cast<std::uint32_t>(cell.magnitude));
            write_u32(out, std::bit_cast<std::uint32_t>(cell.angle));
        }
    }
    return out;
}

double wrap_degrees(double deg)
{
    double out = std::fmod(deg, 360.0);
    if (out < 0.0) {
        out += 360.0;
    }
    if (out >= 360.0) {
        out = 0.0;
    }
    return out;
}

FlowAverage circular_mean(const std::vector<double>& angles_deg, const std::vector<double>& weights)
{
    double sx = 0.0;
    double sy = 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < angles_deg.size(); ++i) {
        const double w = weights.empty() ? 1.0 : weights[i];
        const double rad = angles_deg[i] * std::numbers::pi / 180.0;
        sx += w * std::cos(rad);
        sy += w * std::sin(rad);
        total += std::abs(w);
    }
    FlowAverage out;
    const double resultant = std::hypot(sx, sy);
    if (total == 0.0 || resultant <= 1e-9 * total) {
        out.zero_resultant = true;
        out.ang = 0.0;
        return out;
    }
    out.ang = wrap_degrees(std::atan2(sy, sx) * 180.0 / std::numbers::pi);
    return out;
}

FlowAverage average_flow_in_bbox(const FlowRaster& raster, const BBox& bbox)
{
    if (raster.width == 0 || raster.height == 0 || raster.cells.size() != static_cast<std::size_t>(raster.width) * raster.height) {
        throw Error(ErrorKind::Validation, "flow raster is empty or has inconsistent cell count");
    }
    std::vector<double> mags;
    std::vector<double> angs;
    for (std::uint32_t row = 0; row < raster.height; ++row) {
        const double cy = (row + 0.5) / raster.height;
        if (cy < bbox.ymin || cy >= bbox.ymax) {
            continue;
        }
        for (std::uint32_t col = 0; col < raster.width; ++col) {
            const double cx = (col + 0.5) / raster.width;
            if (cx < bbox.xmin || cx >= bbox.xmax) {
                continue;
            }
            const auto& cell = raster.at(col, row);
            mags.push_back(cell.magnitude);
            angs.push_back(cell.angle);
        }
    }
    if (mags.empty()) {
        throw Error(ErrorKind::Degenerate, "bbox covers no flow cells");
    }
    double sum = 0.0;
    for (double m : mags) {
        sum += m;
    }
    FlowAverage out = circular_mean(angs, mags);
    out.mag = sum / static_cast<double>(mags.size());
    return out;
}

std::vector<FrameObservation> resolve_flow(std::vector<FrameObservation> frames, const FlowSequence* flow)
{
    for (auto& frame : frames) {
        for (auto& d : frame.detections) {
            if (d.flow_mag && d.flow_ang) {
                continue;
            }
            if (flow == nullptr) {
                throw Error(ErrorKind::Missing,
                    "frame " + std::to_string(frame.frame_index) + " detection '" + d.label + "' has no flow statistics and no flow sidecar was given");
            }
            if (static_cast<std::size_t>(frame.frame_index) >= flow->frames.size()) {
                throw Error(ErrorKind::Missing, "flow sidecar has no raster for frame " + std::to_string(frame.frame_index));
            }
            const auto avg = average_flow_in_bbox(flow->frames[static_cast<std::size_t>(frame.frame_index)], d.bbox);
            if (!d.flow_mag) {
                d.flow_mag = avg.mag;
            }
            if (!d.flow_ang) {
                d.flow_ang = avg.ang;
            }
        }
    }
    return frames;
}

} // namespace advrec
