#pragma once

#include "sop/models/base.hpp"
#include "sop/models/heads.hpp"

#include <torch/torch.h>

namespace sop {

struct VitConfig {
    std::int64_t patch_size = 14;
    std::int64_t dim = 384;
    std::int64_t depth = 12;
    std::int64_t heads = 6;
    double mlp_ratio = 4.0;
    std::int64_t image_size = 224; // native grid the positional table is sized for
};

/// Joint token sequence [full-image patches; separator; subimage patches].
/// There is exactly one separator, at index full_len.
struct TokenSequence {
    torch::Tensor tokens; // [B, full_len + 1 + sub_len, D]
    std::int64_t full_len = 0;
    std::int64_t sub_len = 0;

    std::int64_t length() const { return tokens.size(1); }
    std::int64_t separator_index() const { return full_len; }
    torch::Tensor full_segment() const;
    torch::Tensor sub_segment() const;
};

/// Concatenates [full; SEP; sub]. No class token anywhere. Throws on
/// embedding-dimension mismatch.
TokenSequence build_joint_sequence(const torch::Tensor& full_tokens,
                                   const torch::Tensor& sub_tokens,
                                   const torch::Tensor& sep_param);

class SelfAttentionImpl : public torch::nn::Module {
public:
    SelfAttentionImpl(std::int64_t dim, std::int64_t heads);
    torch::Tensor forward(const torch::Tensor& x);

private:
    torch::nn::Linear qkv_{nullptr};
    torch::nn::Linear proj_{nullptr};
    std::int64_t heads_;
};
TORCH_MODULE(SelfAttention);

class TransformerBlockImpl : public torch::nn::Module {
public:
    TransformerBlockImpl(std::int64_t dim, std::int64_t heads, double mlp_ratio);
    torch::Tensor forward(const torch::Tensor& x);

private:
    torch::nn::LayerNorm norm1_{nullptr}, norm2_{nullptr};
    SelfAttention attn_{nullptr};
    torch::nn::Linear fc1_{nullptr}, fc2_{nullptr};
};
TORCH_MODULE(TransformerBlock);

/// ViT trunk: patch embedding with grid positional encodings (class token
/// dropped), a stack of pre-norm transformer blocks, and a final norm.
/// Positional encodings for grids other than the native one are bilinearly
/// interpolated from the native table, so a subimage gets the standard grid
/// encodings of its own size starting at its own origin.
class VitEncoderImpl : public torch::nn::Module {
public:
    explicit VitEncoderImpl(const VitConfig& config);

    /// Patchifies one image batch into position-encoded tokens [B, N, D],
    /// N = (H/P)*(W/P). Throws std::invalid_argument when H or W is not
    /// divisible by the patch size.
    torch::Tensor embed(const torch::Tensor& images);

    /// Runs the transformer blocks and final norm over any token sequence.
    torch::Tensor encode(const torch::Tensor& tokens);

    const VitConfig& config() const { return config_; }

private:
    torch::Tensor positional(std::int64_t grid_h, std::int64_t grid_w);

    VitConfig config_;
    torch::nn::Conv2d proj_{nullptr};
    torch::Tensor pos_embed_; // [1, native_grid^2, D]
    std::vector<TransformerBlock> blocks_;
    torch::nn::LayerNorm norm_{nullptr};
};
TORCH_MODULE(VitEncoder);

/// Pretraining model: joint sequence through the shared encoder, decode
/// head over the full-image segment only, two-class per-pixel logits at
/// input resolution.
class VitOverlapNetImpl : public OverlapNetBase {
public:
    explicit VitOverlapNetImpl(const VitConfig& config);

    torch::Tensor forward(const torch::Tensor& full_images,
                          const torch::Tensor& subimages) override;

    /// Reshapes the full-image segment of encoded tokens into a 2D feature
    /// map and decodes it to per-pixel logits for an image of (H, W).
    torch::Tensor decode_full_segment(const torch::Tensor& encoded, std::int64_t full_len,
                                      std::int64_t image_h, std::int64_t image_w);

    VitEncoder encoder() { return encoder_; }
    torch::Tensor separator() { return sep_; }

private:
    VitEncoder encoder_{nullptr};
    torch::Tensor sep_; // learnable [D]
    ConvDecodeHead head_{nullptr};
};
TORCH_MODULE(VitOverlapNet);

/// Downstream segmenter: the transferred ViT trunk plus a freshly
/// initialized decode head with C output channels. All layers trainable.
class VitSegmenterImpl : public SegmenterBase {
public:
    VitSegmenterImpl(const VitConfig& config, std::int64_t num_classes);

    torch::Tensor forward(const torch::Tensor& images) override;

    VitEncoder encoder() { return encoder_; }

private:
    VitEncoder encoder_{nullptr};
    ConvDecodeHead head_{nullptr};
};
TORCH_MODULE(VitSegmenter);

} // namespace sop
