#include "sop/geometry.hpp"

#include <stdexcept>

namespace sop {

using torch::indexing::Slice;
namespace F = torch::nn::functional;

torch::Tensor resize_image(const torch::Tensor& pixels, std::int64_t height,
                           std::int64_t width) {
    if (height < 1 || width < 1) {
        throw std::invalid_argument("resize: target dims must be positive");
    }
    if (pixels.size(1) == height && pixels.size(2) == width) {
        return pixels;
    }
    auto out = F::interpolate(pixels.unsqueeze(0),
                              F::InterpolateFuncOptions()
                                  .size(std::vector<std::int64_t>{height, width})
                                  .mode(torch::kBilinear)
                                  .align_corners(false))
                   .squeeze(0);
    return out.clamp(0.0, 1.0);
}

torch::Tensor resize_labels(const torch::Tensor& labels, std::int64_t height,
                            std::int64_t width) {
    if (height < 1 || width < 1) {
        throw std::invalid_argument("resize: target dims must be positive");
    }
    if (labels.size(0) == height && labels.size(1) == width) {
        return labels;
    }
    auto out = F::interpolate(labels.to(torch::kFloat64).unsqueeze(0).unsqueeze(0),
                              F::InterpolateFuncOptions()
                                  .size(std::vector<std::int64_t>{height, width})
                                  .mode(torch::kNearest))
                   .squeeze(0)
                   .squeeze(0);
    return out.to(torch::kInt64);
}

ImageSample resize(const ImageSample& sample, std::int64_t height, std::int64_t width) {
    return {sample.id, resize_image(sample.pixels, height, width), sample.source};
}

SegmentationSample resize(const SegmentationSample& sample, std::int64_t height,
                          std::int64_t width) {
    SegmentationSample out = sample;
    out.image = resize(sample.image, height, width);
    out.labels = resize_labels(sample.labels, height, width);
    return out;
}

namespace {

std::pair<std::int64_t, std::int64_t> crop_window(std::int64_t h, std::int64_t w,
                                                  std::int64_t size, CropMode mode, Rng& rng) {
    if (h < size || w < size) {
        throw std::invalid_argument("crop: image smaller than crop size");
    }
    if (mode == CropMode::center) {
        return {(h - size) / 2, (w - size) / 2};
    }
    return {rng.uniform_int(0, h - size), rng.uniform_int(0, w - size)};
}

} // namespace

ImageSample crop(const ImageSample& sample, std::int64_t size, CropMode mode, Rng& rng) {
    auto [top, left] = crop_window(sample.height(), sample.width(), size, mode, rng);
    auto pixels =
        sample.pixels.index({Slice(), Slice(top, top + size), Slice(left, left + size)})
            .clone();
    return {sample.id, pixels, sample.source};
}

SegmentationSample crop(const SegmentationSample& sample, std::int64_t size, CropMode mode,
                        Rng& rng) {
    auto [top, left] =
        crop_window(sample.image.height(), sample.image.width(), size, mode, rng);
    SegmentationSample out = sample;
    out.image.pixels = sample.image.pixels
                           .index({Slice(), Slice(top, top + size), Slice(left, left + size)})
                           .clone();
    out.labels =
        sample.labels.index({Slice(top, top + size), Slice(left, left + size)}).clone();
    return out;
}

std::vector<SegmentationSample> tile_grid(const SegmentationSample& sample, std::int64_t grid) {
    TORCH_CHECK(grid >= 1, "tile_grid: grid must be >= 1");
    const std::int64_t th = sample.image.height() / grid;
    const std::int64_t tw = sample.image.width() / grid;
    TORCH_CHECK(th >= 1 && tw >= 1, "tile_grid: image too small for grid");

    std::vector<SegmentationSample> tiles;
    tiles.reserve(static_cast<std::size_t>(grid * grid));
    for (std::int64_t r = 0; r < grid; ++r) {
        for (std::int64_t c = 0; c < grid; ++c) {
            SegmentationSample tile = sample;
            tile.image.id = sample.image.id + "_" + std::to_string(r) + "_" + std::to_string(c);
            tile.image.pixels = sample.image.pixels
                                    .index({Slice(), Slice(r * th, (r + 1) * th),
                                            Slice(c * tw, (c + 1) * tw)})
                                    .clone();
            tile.labels = sample.labels
                              .index({Slice(r * th, (r + 1) * th), Slice(c * tw, (c + 1) * tw)})
                              .clone();
            tiles.push_back(std::move(tile));
        }
    }
    return tiles;
}

} // namespace sop
