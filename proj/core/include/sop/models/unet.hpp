#pragma once

#include "sop/models/base.hpp"
#include "sop/models/heads.hpp"
#include "sop/models/resnet.hpp"

namespace sop {

/// U-Net segmenter whose encoder is a (transferred) residual backbone and
/// whose decoder is freshly initialized. All layers trainable.
class ResNetUNetImpl : public SegmenterBase {
public:
    ResNetUNetImpl(const ResNetConfig& config, std::int64_t num_classes);

    torch::Tensor forward(const torch::Tensor& images) override;

    ResNetEncoder encoder() { return encoder_; }

private:
    class DecoderBlockImpl;

    ResNetEncoder encoder_{nullptr};
    std::vector<std::shared_ptr<DecoderBlockImpl>> decoder_;
    ConvDecodeHead head_{nullptr};
};
TORCH_MODULE(ResNetUNet);

} // namespace sop
