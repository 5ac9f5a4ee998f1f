#pragma once

#include <torch/torch.h>

namespace sop {

/// Lightweight convolutional decode head: two 3x3 convolutions with a
/// nonlinearity (channels in -> mid -> out) followed by bilinear
/// upsampling by `upsample_factor` back to pixel resolution.
class ConvDecodeHeadImpl : public torch::nn::Module {
public:
    ConvDecodeHeadImpl(std::int64_t in_channels, std::int64_t out_channels,
                       std::int64_t upsample_factor, std::int64_t mid_channels = 0);

    torch::Tensor forward(const torch::Tensor& features);

private:
    torch::nn::Conv2d conv1_{nullptr};
    torch::nn::Conv2d conv2_{nullptr};
    std::int64_t factor_;
};
TORCH_MODULE(ConvDecodeHead);

} // namespace sop
