#pragma once

#include <torch/torch.h>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sop {

/// An RGB raster with identity and provenance. Pixels are float32 CHW
/// (3 x height x width), intensities normalized to [0,1] at ingestion.
/// Raster origin is the top-left corner; offsets are (row, column).
struct ImageSample {
    std::string id;
    torch::Tensor pixels;
    std::string source;

    std::int64_t height() const { return pixels.size(1); }
    std::int64_t width() const { return pixels.size(2); }
};

/// Axis-aligned rectangle locating a subimage inside its source image.
struct SubimageSpec {
    std::int64_t top = 0;
    std::int64_t left = 0;
    std::int64_t height = 0;
    std::int64_t width = 0;

    bool operator==(const SubimageSpec&) const = default;
};

/// Binary mask marking the subimage location, same spatial dims as the
/// source image. Stored as int64 {0,1} so it doubles as a class-index
/// target for two-class losses.
struct OverlapTarget {
    torch::Tensor mask;
};

/// Image plus per-pixel class labels for downstream segmentation.
struct SegmentationSample {
    ImageSample image;
    torch::Tensor labels; // int64 [H, W], class indices in [0, C)
    std::int64_t num_classes = 0;
    std::optional<std::int64_t> ignore_index;
};

/// Disjoint train/val/test id lists plus the seed used for any random
/// allocation; regenerating with the same seed and manifest yields the
/// same lists.
struct SplitAssignment {
    std::vector<std::string> train;
    std::vector<std::string> val;
    std::vector<std::string> test;
    std::uint64_t seed = 0;
};

/// One invariant violation found by validate_sample.
struct Violation {
    std::string what;     // e.g. "intensity out of range"
    std::string location; // e.g. "pixels[0,3,17]"
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
};

ValidationReport validate_sample(const ImageSample& sample);
ValidationReport validate_sample(const SegmentationSample& sample);

/// Checks a spec against image dims; returns violations (empty when valid).
ValidationReport validate_spec(const SubimageSpec& spec, std::int64_t image_height,
                               std::int64_t image_width);

/// Checks the overlap-target invariants: the 1-pixels form one axis-aligned
/// rectangle whose area matches the generating spec.
ValidationReport validate_target(const OverlapTarget& target, const SubimageSpec& spec);

} // namespace sop
