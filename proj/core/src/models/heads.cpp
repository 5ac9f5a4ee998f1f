#include "sop/models/heads.hpp"

namespace sop {

namespace F = torch::nn::functional;

ConvDecodeHeadImpl::ConvDecodeHeadImpl(std::int64_t in_channels, std::int64_t out_channels,
                                       std::int64_t upsample_factor, std::int64_t mid_channels)
    : factor_(upsample_factor) {
    if (mid_channels <= 0) mid_channels = std::max<std::int64_t>(in_channels / 2, out_channels);
    conv1_ = register_module(
        "conv1", torch::nn::Conv2d(
                     torch::nn::Conv2dOptions(in_channels, mid_channels, 3).padding(1)));
    conv2_ = register_module(
        "conv2", torch::nn::Conv2d(
                     torch::nn::Conv2dOptions(mid_channels, out_channels, 3).padding(1)));
}

torch::Tensor ConvDecodeHeadImpl::forward(const torch::Tensor& features) {
    auto x = torch::relu(conv1_->forward(features));
    x = conv2_->forward(x);
    if (factor_ != 1) {
        x = F::interpolate(x, F::InterpolateFuncOptions()
                                  .scale_factor(std::vector<double>{
                                      static_cast<double>(factor_),
                                      static_cast<double>(factor_)})
                                  .mode(torch::kBilinear)
                                  .align_corners(false));
    }
    return x;
}

} // namespace sop
