#pragma once

#include <torch/torch.h>

namespace sop {

/// Common surface of the two pretraining architectures: two-class overlap
/// logits at full-image resolution from (full image, subimage) batches.
class OverlapNetBase : public torch::nn::Module {
public:
    ~OverlapNetBase() override = default;
    virtual torch::Tensor forward(const torch::Tensor& full_images,
                                  const torch::Tensor& subimages) = 0;
};

/// Common surface of the downstream segmenters: C-class logits at input
/// resolution.
class SegmenterBase : public torch::nn::Module {
public:
    ~SegmenterBase() override = default;
    virtual torch::Tensor forward(const torch::Tensor& images) = 0;
};

} // namespace sop
