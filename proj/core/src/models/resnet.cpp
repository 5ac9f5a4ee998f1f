#include "sop/models/resnet.hpp"

#include <stdexcept>

namespace sop {

namespace F = torch::nn::functional;

ResNetConfig ResNetConfig::from_preset(const std::string& name) {
    if (name == "resnet50") return resnet50();
    if (name == "resnet18") return resnet18();
    if (name == "tiny") return tiny();
    throw std::invalid_argument("unknown cnn preset '" + name +
                                "' (expected resnet50, resnet18 or tiny)");
}

namespace {

torch::nn::Conv2d conv3x3(std::int64_t in, std::int64_t out, std::int64_t stride = 1) {
    return torch::nn::Conv2d(
        torch::nn::Conv2dOptions(in, out, 3).stride(stride).padding(1).bias(false));
}

torch::nn::Conv2d conv1x1(std::int64_t in, std::int64_t out, std::int64_t stride = 1) {
    return torch::nn::Conv2d(torch::nn::Conv2dOptions(in, out, 1).stride(stride).bias(false));
}

class BasicBlockImpl : public torch::nn::Module {
public:
    BasicBlockImpl(std::int64_t in, std::int64_t planes, std::int64_t stride) {
        conv1_ = register_module("conv1", conv3x3(in, planes, stride));
        bn1_ = register_module("bn1", torch::nn::BatchNorm2d(planes));
        conv2_ = register_module("conv2", conv3x3(planes, planes));
        bn2_ = register_module("bn2", torch::nn::BatchNorm2d(planes));
        if (stride != 1 || in != planes) {
            down_conv_ = register_module("down_conv", conv1x1(in, planes, stride));
            down_bn_ = register_module("down_bn", torch::nn::BatchNorm2d(planes));
        }
    }

    torch::Tensor forward(const torch::Tensor& x) {
        auto identity = down_conv_ ? down_bn_->forward(down_conv_->forward(x)) : x;
        auto out = torch::relu(bn1_->forward(conv1_->forward(x)));
        out = bn2_->forward(conv2_->forward(out));
        return torch::relu(out + identity);
    }

private:
    torch::nn::Conv2d conv1_{nullptr}, conv2_{nullptr}, down_conv_{nullptr};
    torch::nn::BatchNorm2d bn1_{nullptr}, bn2_{nullptr}, down_bn_{nullptr};
};
TORCH_MODULE(BasicBlock);

class BottleneckBlockImpl : public torch::nn::Module {
public:
    BottleneckBlockImpl(std::int64_t in, std::int64_t planes, std::int64_t stride) {
        const auto out = planes * 4;
        conv1_ = register_module("conv1", conv1x1(in, planes));
        bn1_ = register_module("bn1", torch::nn::BatchNorm2d(planes));
        conv2_ = register_module("conv2", conv3x3(planes, planes, stride));
        bn2_ = register_module("bn2", torch::nn::BatchNorm2d(planes));
        conv3_ = register_module("conv3", conv1x1(planes, out));
        bn3_ = register_module("bn3", torch::nn::BatchNorm2d(out));
        if (stride != 1 || in != out) {
            down_conv_ = register_module("down_conv", conv1x1(in, out, stride));
            down_bn_ = register_module("down_bn", torch::nn::BatchNorm2d(out));
        }
    }

    torch::Tensor forward(const torch::Tensor& x) {
        auto identity = down_conv_ ? down_bn_->forward(down_conv_->forward(x)) : x;
        auto out = torch::relu(bn1_->forward(conv1_->forward(x)));
        out = torch::relu(bn2_->forward(conv2_->forward(out)));
        out = bn3_->forward(conv3_->forward(out));
        return torch::relu(out + identity);
    }

private:
    torch::nn::Conv2d conv1_{nullptr}, conv2_{nullptr}, conv3_{nullptr}, down_conv_{nullptr};
    torch::nn::BatchNorm2d bn1_{nullptr}, bn2_{nullptr}, bn3_{nullptr}, down_bn_{nullptr};
};
TORCH_MODULE(BottleneckBlock);

} // namespace

torch::nn::Sequential ResNetEncoderImpl::make_stage(std::int64_t planes, std::int64_t count,
                                                    std::int64_t stride, bool bottleneck) {
    torch::nn::Sequential stage;
    for (std::int64_t i = 0; i < count; ++i) {
        const auto s = i == 0 ? stride : 1;
        if (bottleneck) {
            stage->push_back(BottleneckBlock(in_channels_, planes, s));
            in_channels_ = planes * 4;
        } else {
            stage->push_back(BasicBlock(in_channels_, planes, s));
            in_channels_ = planes;
        }
    }
    return stage;
}

ResNetEncoderImpl::ResNetEncoderImpl(const ResNetConfig& config) {
    TORCH_CHECK(config.blocks.size() == 4, "ResNetConfig needs four stage block counts");
    const auto bw = config.base_width;
    conv1_ = register_module(
        "conv1",
        torch::nn::Conv2d(torch::nn::Conv2dOptions(3, bw, 7).stride(2).padding(3).bias(false)));
    bn1_ = register_module("bn1", torch::nn::BatchNorm2d(bw));
    in_channels_ = bw;
    layer1_ = register_module("layer1", make_stage(bw, config.blocks[0], 1, config.bottleneck));
    layer2_ =
        register_module("layer2", make_stage(bw * 2, config.blocks[1], 2, config.bottleneck));
    layer3_ =
        register_module("layer3", make_stage(bw * 4, config.blocks[2], 2, config.bottleneck));
    layer4_ =
        register_module("layer4", make_stage(bw * 8, config.blocks[3], 2, config.bottleneck));
    const std::int64_t expansion = config.bottleneck ? 4 : 1;
    stage_channels_ = {bw, bw * expansion, bw * 2 * expansion, bw * 4 * expansion,
                       bw * 8 * expansion};
}

std::vector<torch::Tensor> ResNetEncoderImpl::forward_stages(const torch::Tensor& images) {
    TORCH_CHECK(images.dim() == 4 && images.size(1) == 3, "expected [B,3,H,W] images");
    auto stem = torch::relu(bn1_->forward(conv1_->forward(images))); // /2
    auto pooled = F::max_pool2d(stem, F::MaxPool2dFuncOptions(3).stride(2).padding(1));
    auto s1 = layer1_->forward(pooled); // /4
    auto s2 = layer2_->forward(s1);     // /8
    auto s3 = layer3_->forward(s2);     // /16
    auto s4 = layer4_->forward(s3);     // /32
    return {stem, s1, s2, s3, s4};
}

torch::Tensor ResNetEncoderImpl::forward(const torch::Tensor& images) {
    return forward_stages(images).back();
}

DualEncoderOverlapNetImpl::DualEncoderOverlapNetImpl(const ResNetConfig& config)
    : DualEncoderOverlapNetImpl(config, config) {}

DualEncoderOverlapNetImpl::DualEncoderOverlapNetImpl(const ResNetConfig& full_config,
                                                     const ResNetConfig& sub_config) {
    full_encoder_ = register_module("full_encoder", ResNetEncoder(full_config));
    sub_encoder_ = register_module("sub_encoder", ResNetEncoder(sub_config));
    if (full_encoder_->out_channels() != sub_encoder_->out_channels()) {
        throw std::invalid_argument("encoder width mismatch: full encoder emits " +
                                    std::to_string(full_encoder_->out_channels()) +
                                    " channels, subimage encoder emits " +
                                    std::to_string(sub_encoder_->out_channels()));
    }
    const auto ch = full_encoder_->out_channels();
    fuse1_ = register_module("fusion_reduce",
                             torch::nn::Conv2d(torch::nn::Conv2dOptions(ch * 2, ch, 1)));
    fuse2_ = register_module(
        "fusion_mix", torch::nn::Conv2d(torch::nn::Conv2dOptions(ch, ch, 3).padding(1)));
    head_ = register_module("head", ConvDecodeHead(ch, 2, 32));
}

torch::Tensor DualEncoderOverlapNetImpl::forward(const torch::Tensor& full_images,
                                                 const torch::Tensor& subimages) {
    auto feat_full = full_encoder_->forward(full_images);
    auto feat_sub = sub_encoder_->forward(subimages);
    if (feat_sub.size(2) != feat_full.size(2) || feat_sub.size(3) != feat_full.size(3)) {
        feat_sub = F::interpolate(feat_sub,
                                  F::InterpolateFuncOptions()
                                      .size(std::vector<std::int64_t>{feat_full.size(2),
                                                                      feat_full.size(3)})
                                      .mode(torch::kBilinear)
                                      .align_corners(false));
    }
    auto fused = torch::cat({feat_full, feat_sub}, 1);
    fused = torch::relu(fuse1_->forward(fused));
    fused = torch::relu(fuse2_->forward(fused));
    auto logits = head_->forward(fused);
    // Stride-32 upsampling can overshoot when input dims are not multiples
    // of 32; trim back to the input size.
    if (logits.size(2) != full_images.size(2) || logits.size(3) != full_images.size(3)) {
        logits = F::interpolate(logits,
                                F::InterpolateFuncOptions()
                                    .size(std::vector<std::int64_t>{full_images.size(2),
                                                                    full_images.size(3)})
                                    .mode(torch::kBilinear)
                                    .align_corners(false));
    }
    return logits;
}

} // namespace sop
