#pragma once

#include "sop/rng.hpp"
#include "sop/types.hpp"

namespace sop {

/// Bilinear resize for images (clamped back to [0,1]); identity targets are
/// returned bit-identical. Throws std::invalid_argument on non-positive dims.
torch::Tensor resize_image(const torch::Tensor& pixels, std::int64_t height,
                           std::int64_t width);

/// Nearest-neighbor resize for label rasters so class indices stay valid.
torch::Tensor resize_labels(const torch::Tensor& labels, std::int64_t height,
                            std::int64_t width);

ImageSample resize(const ImageSample& sample, std::int64_t height, std::int64_t width);
SegmentationSample resize(const SegmentationSample& sample, std::int64_t height,
                          std::int64_t width);

enum class CropMode { random, center };

/// Square crop applied to image and labels with the same window. Random mode
/// draws the window from rng; center mode uses floor((dim - size) / 2).
/// Throws std::invalid_argument when the image is smaller than the crop.
SegmentationSample crop(const SegmentationSample& sample, std::int64_t size, CropMode mode,
                        Rng& rng);
ImageSample crop(const ImageSample& sample, std::int64_t size, CropMode mode, Rng& rng);

/// Splits a sample into grid x grid tiles of floor(H/grid) x floor(W/grid),
/// row-major, truncating any right/bottom remainder. Tile ids are
/// "<parent>_<row>_<col>".
std::vector<SegmentationSample> tile_grid(const SegmentationSample& sample, std::int64_t grid);

} // namespace sop
