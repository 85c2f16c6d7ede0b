#include "advrec/error.hpp"
#include "advrec/observation.hpp"
#include "advrec/util.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace advrec;

namespace {

ErrorKind kind_of(const std::function<void()>& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "expected an advrec::Error";
    return ErrorKind::Io;
}

FlowRaster uniform_raster(std::uint32_t w, std::uint32_t h, float mag, float ang)
{
    return {w, h, std::vector<FlowCell>(static_cast<std::size_t>(w) * h, FlowCell{mag, ang})};
}

} // namespace

TEST(Observations, TwoFramesLoad)
{
    const auto frames = parse_observations(
        R"({"frame": 0, "detections": [{"label": "person", "confidence": 0.9, "bbox": [0.1, 0.1, 0.3, 0.4]}]})"
        "\n"
        R"({"frame": 1, "detections": [{"label": "person", "confidence": 0.8, "bbox": [0.2, 0.1, 0.4, 0.4], "flow_mag": 2.5, "flow_ang": 90}]})"
        "\n");
    ASSERT_EQ(frames.size(), 2u);
    EXPECT_EQ(frames[0].frame_index, 0);
    EXPECT_EQ(frames[1].frame_index, 1);
    EXPECT_FALSE(frames[0].detections[0].flow_mag);
    EXPECT_DOUBLE_EQ(*frames[1].detections[0].flow_mag, 2.5);
}

TEST(Observations, EmptyFileIsEmptyList)
{
    EXPECT_TRUE(parse_observations("").empty());
    EXPECT_TRUE(parse_observations("\n\n").empty());
}

TEST(Observations, ConfidenceOutOfRangeNamesField)
{
    try {
        parse_observations(R"({"frame": 0, "detections": [{"label": "cup", "confidence": 1.3, "bbox": [0, 0, 1, 1]}]})");
        FAIL() << "expected validation error";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Validation);
        EXPECT_EQ(e.line(), 1u);
        EXPECT_NE(std::string(e.what()).find("confidence"), std::string::npos);
    }
}

TEST(Observations, MalformedLineReportsLineNumber)
{
    try {
        parse_observations("{\"frame\": 0, \"detections\": []}\n{not json\n");
        FAIL() << "expected parse error";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Parse);
        EXPECT_EQ(e.line(), 2u);
    }
}

TEST(Observations, DuplicateOrDecreasingFrameIsSequencingError)
{
    EXPECT_EQ(kind_of([] { parse_observations("{\"frame\": 3, \"detections\": []}\n{\"frame\": 3, \"detections\": []}"); }),
        ErrorKind::Sequencing);
    EXPECT_EQ(kind_of([] { parse_observations("{\"frame\": 3, \"detections\": []}\n{\"frame\": 1, \"detections\": []}"); }),
        ErrorKind::Sequencing);
}

TEST(Observations, InvertedBoxIsValidationError)
{
    EXPECT_EQ(kind_of([] {
        parse_observations(R"({"frame": 0, "detections": [{"label": "cup", "confidence": 0.9, "bbox": [0.5, 0, 0.4, 1]}]})");
    }),
        ErrorKind::Validation);
    EXPECT_EQ(kind_of([] {
        parse_observations(R"({"frame": 0, "detections": [{"label": "cup", "confidence": 0.9, "bbox": [0, 0.5, 1, 0.5]}]})");
    }),
        ErrorKind::Validation);
}

TEST(Observations, SerializeRoundTrip)
{
    Rng rng(11);
    std::vector<FrameObservation> frames;
    for (int f = 0; f < 20; f += 2) {
        FrameObservation frame{f, {}};
        for (int k = 0; k < 3; ++k) {
            const double x = 0.5 * rng.uniform();
            const double y = 0.5 * rng.uniform();
            Detection d{"obj" + std::to_string(k), rng.uniform(), {x, y, x + 0.1, y + 0.2}, {}, {}};
            if (k != 1) {
                d.flow_mag = 10 * rng.uniform();
                d.flow_ang = 359.9 * rng.uniform();
            }
            frame.detections.push_back(d);
        }
        frames.push_back(frame);
    }
    const auto text = serialize_observations(frames);
    const auto back = parse_observations(text);
    EXPECT_EQ(back, frames);
    EXPECT_EQ(serialize_observations(back), text);
}

TEST(Banding, PaperBoundaries)
{
    EXPECT_EQ(confidence_band(0.29), ConfidenceBand::Discarded);
    EXPECT_EQ(confidence_band(0.3), ConfidenceBand::Unknown);
    EXPECT_EQ(confidence_band(0.49), ConfidenceBand::Unknown);
    EXPECT_EQ(confidence_band(0.5), ConfidenceBand::Confident);
    EXPECT_EQ(confidence_band(1.0), ConfidenceBand::Confident);

    const auto unknown = band_detection({"dog", 0.3, {0, 0, 1, 1}, 1.0, 0.0});
    EXPECT_EQ(unknown.band, ConfidenceBand::Unknown);
    EXPECT_EQ(unknown.detection.label, "unknown");
    const auto kept = band_detection({"dog", 0.5, {0, 0, 1, 1}, 1.0, 0.0});
    EXPECT_EQ(kept.detection.label, "dog");
}

TEST(Banding, TotalOverUnitInterval)
{
    Rng rng(5);
    for (int i = 0; i < 10000; ++i) {
        const double c = rng.uniform();
        const auto band = confidence_band(c);
        const auto expected = c < 0.3 ? ConfidenceBand::Discarded : (c < 0.5 ? ConfidenceBand::Unknown : ConfidenceBand::Confident);
        ASSERT_EQ(band, expected) << c;
    }
}

TEST(Banding, DiscardedDetectionsAreDropped)
{
    const auto banded = band_frames({{0, {{"a", 0.1, {0, 0, 1, 1}, 1.0, 0.0}, {"b", 0.4, {0, 0, 1, 1}, 1.0, 0.0},
                                             {"c", 0.9, {0, 0, 1, 1}, 1.0, 0.0}}}});
    ASSERT_EQ(banded[0].detections.size(), 2u);
    EXPECT_EQ(banded[0].detections[0].label, "unknown");
    EXPECT_EQ(banded[0].detections[1].label, "c");
}

TEST(Flow, UniformRaster)
{
    const auto raster = uniform_raster(8, 6, 2.0f, 90.0f);
    const auto avg = average_flow_in_bbox(raster, {0.1, 0.2, 0.7, 0.9});
    EXPECT_NEAR(avg.mag, 2.0, 1e-12);
    EXPECT_NEAR(avg.ang, 90.0, 1e-9);
    EXPECT_FALSE(avg.zero_resultant);
}

TEST(Flow, OpposingVectorsCancel)
{
    FlowRaster raster{2, 1, {{1.0f, 0.0f}, {1.0f, 180.0f}}};
    const auto avg = average_flow_in_bbox(raster, {0, 0, 1, 1});
    EXPECT_DOUBLE_EQ(avg.mag, 1.0);
    EXPECT_TRUE(avg.zero_resultant);
    EXPECT_EQ(avg.ang, 0.0);
}

TEST(Flow, LeftHalfAlternatingMagnitudes)
{
    FlowRaster raster{4, 4, {}};
    for (std::uint32_t r = 0; r < 4; ++r) {
        for (std::uint32_t c = 0; c < 4; ++c) {
            raster.cells.push_back({(r + c) % 2 == 0 ? 1.0f : 3.0f, 45.0f});
        }
    }
    const BBox left{0.0, 0.0, 0.5, 1.0};
    // Oracle: enumerate cells by centre.
    double sum = 0;
    int n = 0;
    for (std::uint32_t r = 0; r < 4; ++r) {
        for (std::uint32_t c = 0; c < 4; ++c) {
            const double cx = (c + 0.5) / 4;
            if (cx < left.xmax) {
                sum += raster.at(c, r).magnitude;
                ++n;
            }
        }
    }
    EXPECT_EQ(n, 8);
    const auto avg = average_flow_in_bbox(raster, left);
    EXPECT_DOUBLE_EQ(avg.mag, sum / n);
    EXPECT_DOUBLE_EQ(avg.mag, 2.0);
    EXPECT_NEAR(avg.ang, 45.0, 1e-9);
}

TEST(Flow, SingleCellBoxReturnsCell)
{
    FlowRaster raster{3, 3, {}};
    for (int i = 0; i < 9; ++i) {
        raster.cells.push_back({static_cast<float>(i + 1), static_cast<float>(37 * i)});
    }
    const auto avg = average_flow_in_bbox(raster, {1.0 / 3, 1.0 / 3, 2.0 / 3, 2.0 / 3});
    EXPECT_DOUBLE_EQ(avg.mag, 5.0);
    EXPECT_NEAR(avg.ang, 148.0, 1e-9);
}

TEST(Flow, CircularMeanAvoidsWrapArtifact)
{
    const auto m = circular_mean({359.0, 1.0}, {1.0, 1.0});
    EXPECT_NEAR(std::min(m.ang, 360.0 - m.ang), 0.0, 1e-9);
}

TEST(Flow, BoxBetweenCellCentresIsDegenerate)
{
    const auto raster = uniform_raster(2, 2, 1.0f, 0.0f);
    EXPECT_EQ(kind_of([&] { average_flow_in_bbox(raster, {0.0, 0.0, 0.2, 0.2}); }), ErrorKind::Degenerate);
}

TEST(Flow, SidecarRoundTripAndSizeCheck)
{
    FlowSequence seq{3, 2, {uniform_raster(3, 2, 1.5f, 10.0f), uniform_raster(3, 2, 0.5f, 300.0f)}};
    const auto bytes = serialize_flow_sequence(seq);
    ASSERT_EQ(bytes.size(), 16u + 2 * 6 * 8);
    EXPECT_EQ(bytes.substr(0, 4), "AFLW");
    EXPECT_EQ(parse_flow_sequence(bytes), seq);
    EXPECT_EQ(kind_of([&] { parse_flow_sequence(bytes.substr(0, bytes.size() - 1)); }), ErrorKind::Parse);
    EXPECT_EQ(kind_of([&] { parse_flow_sequence("XXXX" + bytes.substr(4)); }), ErrorKind::Parse);
}

TEST(Flow, ResolveKeepsInlineAndFillsFromSidecar)
{
    std::vector<FrameObservation> frames = {
        {0, {{"a", 0.9, {0, 0, 1, 1}, 7.0, 200.0}, {"b", 0.9, {0, 0, 1, 1}, {}, {}}}},
    };
    FlowSequence seq{2, 2, {uniform_raster(2, 2, 3.0f, 90.0f)}};
    const auto resolved = resolve_flow(frames, &seq);
    EXPECT_DOUBLE_EQ(*resolved[0].detections[0].flow_mag, 7.0);
    EXPECT_DOUBLE_EQ(*resolved[0].detections[0].flow_ang, 200.0);
    EXPECT_DOUBLE_EQ(*resolved[0].detections[1].flow_mag, 3.0);
    EXPECT_NEAR(*resolved[0].detections[1].flow_ang, 90.0, 1e-9);

    EXPECT_EQ(kind_of([&] { resolve_flow(frames, nullptr); }), ErrorKind::Missing);
}
