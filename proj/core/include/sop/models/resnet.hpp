#pragma once

#include "sop/models/base.hpp"
#include "sop/models/heads.hpp"

#include <torch/torch.h>

#include <string>
#include <vector>

namespace sop {

struct ResNetConfig {
    std::vector<std::int64_t> blocks{3, 4, 6, 3};
    std::int64_t base_width = 64;
    bool bottleneck = true;

    static ResNetConfig resnet50() { return {}; }
    static ResNetConfig resnet18() { return {{2, 2, 2, 2}, 64, false}; }
    /// Small variant for desk-scale tests.
    static ResNetConfig tiny() { return {{1, 1, 1, 1}, 16, false}; }
    static ResNetConfig from_preset(const std::string& name); // throws on unknown preset
};

/// Deep residual encoder, stride-32 final stage. Stage feature maps are
/// exposed for U-Net style decoders.
class ResNetEncoderImpl : public torch::nn::Module {
public:
    explicit ResNetEncoderImpl(const ResNetConfig& config);

    /// Final-stage feature map [B, out_channels, H/32, W/32].
    torch::Tensor forward(const torch::Tensor& images);

    /// {stem (/2), stage1 (/4), stage2 (/8), stage3 (/16), stage4 (/32)}.
    std::vector<torch::Tensor> forward_stages(const torch::Tensor& images);

    std::int64_t out_channels() const { return stage_channels_.back(); }
    const std::vector<std::int64_t>& stage_channels() const { return stage_channels_; }

private:
    torch::nn::Sequential make_stage(std::int64_t planes, std::int64_t count,
                                     std::int64_t stride, bool bottleneck);

    torch::nn::Conv2d conv1_{nullptr};
    torch::nn::BatchNorm2d bn1_{nullptr};
    torch::nn::Sequential layer1_{nullptr}, layer2_{nullptr}, layer3_{nullptr},
        layer4_{nullptr};
    std::vector<std::int64_t> stage_channels_; // {stem, s1, s2, s3, s4}
    std::int64_t in_channels_ = 0;
};
TORCH_MODULE(ResNetEncoder);

/// Dual-encoder pretraining model: separate encoders for the full image and
/// the subimage; subimage features are bilinearly upsampled to the full
/// image's feature dims, concatenated along channels, mixed by a small
/// convolutional block (1x1 halving then 3x3), and decoded to two-class
/// logits at input resolution.
class DualEncoderOverlapNetImpl : public OverlapNetBase {
public:
    explicit DualEncoderOverlapNetImpl(const ResNetConfig& config);
    DualEncoderOverlapNetImpl(const ResNetConfig& full_config, const ResNetConfig& sub_config);

    torch::Tensor forward(const torch::Tensor& full_images,
                          const torch::Tensor& subimages) override;

    ResNetEncoder full_encoder() { return full_encoder_; }

private:
    ResNetEncoder full_encoder_{nullptr};
    ResNetEncoder sub_encoder_{nullptr};
    torch::nn::Conv2d fuse1_{nullptr}; // 1x1, 2C -> C
    torch::nn::Conv2d fuse2_{nullptr}; // 3x3, C -> C
    ConvDecodeHead head_{nullptr};
};
TORCH_MODULE(DualEncoderOverlapNet);

} // namespace sop
