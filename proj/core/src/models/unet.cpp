#include "sop/models/unet.hpp"

namespace sop {

namespace F = torch::nn::functional;

class ResNetUNetImpl::DecoderBlockImpl : public torch::nn::Module {
public:
    DecoderBlockImpl(std::int64_t in, std::int64_t skip, std::int64_t out) {
        conv1_ = register_module(
            "conv1", torch::nn::Conv2d(
                         torch::nn::Conv2dOptions(in + skip, out, 3).padding(1).bias(false)));
        bn1_ = register_module("bn1", torch::nn::BatchNorm2d(out));
        conv2_ = register_module(
            "conv2",
            torch::nn::Conv2d(torch::nn::Conv2dOptions(out, out, 3).padding(1).bias(false)));
        bn2_ = register_module("bn2", torch::nn::BatchNorm2d(out));
    }

    torch::Tensor forward(const torch::Tensor& x, const torch::Tensor& skip) {
        auto up = F::interpolate(x, F::InterpolateFuncOptions()
                                        .size(std::vector<std::int64_t>{skip.size(2),
                                                                        skip.size(3)})
                                        .mode(torch::kBilinear)
                                        .align_corners(false));
        auto out = torch::cat({up, skip}, 1);
        out = torch::relu(bn1_->forward(conv1_->forward(out)));
        return torch::relu(bn2_->forward(conv2_->forward(out)));
    }

private:
    torch::nn::Conv2d conv1_{nullptr}, conv2_{nullptr};
    torch::nn::BatchNorm2d bn1_{nullptr}, bn2_{nullptr};
};

ResNetUNetImpl::ResNetUNetImpl(const ResNetConfig& config, std::int64_t num_classes) {
    encoder_ = register_module("encoder", ResNetEncoder(config));
    const auto& ch = encoder_->stage_channels(); // {stem, s1, s2, s3, s4}
    const std::vector<std::int64_t> widths = {
        std::min<std::int64_t>(256, ch[4]), std::min<std::int64_t>(128, ch[3]),
        std::min<std::int64_t>(64, ch[2]), std::min<std::int64_t>(32, ch[1])};
    const std::vector<std::int64_t> ins = {ch[4], widths[0], widths[1], widths[2]};
    const std::vector<std::int64_t> skips = {ch[3], ch[2], ch[1], ch[0]};
    for (std::size_t i = 0; i < widths.size(); ++i) {
        auto block = std::make_shared<DecoderBlockImpl>(ins[i], skips[i],
                                                        widths[i]);
        register_module("decoder" + std::to_string(i), block);
        decoder_.push_back(std::move(block));
    }
    head_ = register_module("head", ConvDecodeHead(widths.back(), num_classes, 2));
}

torch::Tensor ResNetUNetImpl::forward(const torch::Tensor& images) {
    auto stages = encoder_->forward_stages(images); // {stem, s1, s2, s3, s4}
    auto x = stages[4];
    x = decoder_[0]->forward(x, stages[3]);
    x = decoder_[1]->forward(x, stages[2]);
    x = decoder_[2]->forward(x, stages[1]);
    x = decoder_[3]->forward(x, stages[0]);
    auto logits = head_->forward(x); // stem is /2, head upsamples x2
    if (logits.size(2) != images.size(2) || logits.size(3) != images.size(3)) {
        logits = F::interpolate(logits,
                                F::InterpolateFuncOptions()
                                    .size(std::vector<std::int64_t>{images.size(2),
                                                                    images.size(3)})
                                    .mode(torch::kBilinear)
                                    .align_corners(false));
    }
    return logits;
}

} // namespace sop
