#pragma once

#include "sop/rng.hpp"
#include "sop/types.hpp"

namespace sop {

/// Photometric jitter ranges. All ranges are symmetric around identity
/// (factor 1.0 / shift 0.0); keep them so or construction throws.
struct JitterRanges {
    double brightness_lo = 0.6, brightness_hi = 1.4;
    double contrast_lo = 0.6, contrast_hi = 1.4;
    double saturation_lo = 0.6, saturation_hi = 1.4;
    double hue_lo = -0.1, hue_hi = 0.1; // fraction of the hue circle
};

struct AugmentationConfig {
    bool flip_enabled = false;   // horizontal + vertical, each with probability 0.5
    bool jitter_enabled = false; // brightness/contrast/saturation/hue
    JitterRanges jitter;
    bool apply_to_train_only = true;

    void check() const; // throws std::invalid_argument on asymmetric ranges
};

struct FlipRecord {
    bool horizontal = false;
    bool vertical = false;
};

/// One pretraining example: augmented full image, independently augmented
/// subimage crop, and the overlap mask generated before the subimage was
/// re-augmented (so it is never altered by subimage augmentation).
struct PretrainExample {
    ImageSample full_image;
    torch::Tensor subimage; // float32 [3, spec.height, spec.width]
    OverlapTarget target;
    SubimageSpec spec;
};

/// Uniformly selects a legal placement: top ~ U[0, l - p_l],
/// left ~ U[0, w - p_w]. Throws std::invalid_argument when the subimage
/// does not fit.
SubimageSpec select_subimage(std::int64_t image_height, std::int64_t image_width,
                             std::int64_t sub_height, std::int64_t sub_width, Rng& rng);

/// mask[i,j] = 1 iff top <= i < top+h and left <= j < left+w, else 0.
/// Throws std::invalid_argument when the spec exceeds the image bounds.
OverlapTarget make_overlap_mask(const SubimageSpec& spec, std::int64_t image_height,
                                std::int64_t image_width);

/// Each flip axis applied independently with probability 0.5. The record
/// states which were applied. Consumes two draws (horizontal then vertical).
std::pair<torch::Tensor, FlipRecord> apply_flips(const torch::Tensor& image, Rng& rng);

torch::Tensor apply_flip(const torch::Tensor& image, const FlipRecord& record);

/// Brightness, contrast, saturation, hue jitter with factors drawn uniformly
/// from the configured ranges, in that order (four draws). Output is clamped
/// to [0,1]; identity factors leave the input bit-identical.
torch::Tensor apply_jitter(const torch::Tensor& image, const AugmentationConfig& config,
                           Rng& rng);

/// Deterministic jitter with explicit factors; used by apply_jitter and by
/// tests that force identity or extreme factors.
torch::Tensor jitter_with_factors(const torch::Tensor& image, double brightness,
                                  double contrast, double saturation, double hue_shift);

enum class Split { train, val, test };

/// Assembles one pretraining example. Pipeline order:
///   (1) augment the full image (train split only),
///   (2) select the subimage placement on the augmented full image,
///   (3) generate the overlap mask from that spec,
///   (4) crop the subimage,
///   (5) independently re-augment the crop. The mask is not altered by (5).
/// Exactly three seeds are drawn from `rng` (full-augmentation, selection,
/// subimage-augmentation streams) regardless of which stages are enabled, so
/// toggling subimage augmentation never changes the selected spec or mask.
PretrainExample assemble_pretrain_example(const ImageSample& sample, std::int64_t sub_height,
                                          std::int64_t sub_width, const AugmentationConfig& aug,
                                          Split split, Rng& rng);

} // namespace sop
