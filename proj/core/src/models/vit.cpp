#include "sop/models/vit.hpp"

#include <stdexcept>

namespace sop {

namespace F = torch::nn::functional;

torch::Tensor TokenSequence::full_segment() const {
    return tokens.narrow(1, 0, full_len);
}

torch::Tensor TokenSequence::sub_segment() const {
    return tokens.narrow(1, full_len + 1, sub_len);
}

TokenSequence build_joint_sequence(const torch::Tensor& full_tokens,
                                   const torch::Tensor& sub_tokens,
                                   const torch::Tensor& sep_param) {
    TORCH_CHECK(full_tokens.dim() == 3 && sub_tokens.dim() == 3, "expected [B,N,D] tokens");
    if (full_tokens.size(2) != sub_tokens.size(2) || sep_param.size(-1) != full_tokens.size(2)) {
        throw std::invalid_argument("embedding dimension mismatch between sequence segments");
    }
    TORCH_CHECK(full_tokens.size(0) == sub_tokens.size(0), "batch size mismatch");

    const auto batch = full_tokens.size(0);
    auto sep = sep_param.view({1, 1, -1}).expand({batch, 1, sep_param.size(-1)});
    TokenSequence seq;
    seq.tokens = torch::cat({full_tokens, sep, sub_tokens}, 1);
    seq.full_len = full_tokens.size(1);
    seq.sub_len = sub_tokens.size(1);
    return seq;
}

SelfAttentionImpl::SelfAttentionImpl(std::int64_t dim, std::int64_t heads) : heads_(heads) {
    TORCH_CHECK(dim % heads == 0, "dim must be divisible by heads");
    qkv_ = register_module("qkv", torch::nn::Linear(dim, dim * 3));
    proj_ = register_module("proj", torch::nn::Linear(dim, dim));
}

torch::Tensor SelfAttentionImpl::forward(const torch::Tensor& x) {
    const auto batch = x.size(0), len = x.size(1), dim = x.size(2);
    const auto head_dim = dim / heads_;
    auto qkv = qkv_->forward(x)
                   .reshape({batch, len, 3, heads_, head_dim})
                   .permute({2, 0, 3, 1, 4}); // [3, B, heads, L, hd]
    auto q = qkv[0], k = qkv[1], v = qkv[2];
    auto attn = torch::matmul(q, k.transpose(-2, -1)) / std::sqrt(static_cast<double>(head_dim));
    attn = torch::softmax(attn, -1);
    auto out = torch::matmul(attn, v)                  // [B, heads, L, hd]
                   .transpose(1, 2)                    // [B, L, heads, hd]
                   .reshape({batch, len, dim});
    return proj_->forward(out);
}

TransformerBlockImpl::TransformerBlockImpl(std::int64_t dim, std::int64_t heads,
                                           double mlp_ratio) {
    norm1_ = register_module("norm1", torch::nn::LayerNorm(torch::nn::LayerNormOptions({dim})));
    norm2_ = register_module("norm2", torch::nn::LayerNorm(torch::nn::LayerNormOptions({dim})));
    attn_ = register_module("attn", SelfAttention(dim, heads));
    const auto hidden = static_cast<std::int64_t>(dim * mlp_ratio);
    fc1_ = register_module("fc1", torch::nn::Linear(dim, hidden));
    fc2_ = register_module("fc2", torch::nn::Linear(hidden, dim));
}

torch::Tensor TransformerBlockImpl::forward(const torch::Tensor& x) {
    auto h = x + attn_->forward(norm1_->forward(x));
    return h + fc2_->forward(torch::gelu(fc1_->forward(norm2_->forward(h))));
}

VitEncoderImpl::VitEncoderImpl(const VitConfig& config) : config_(config) {
    TORCH_CHECK(config.image_size % config.patch_size == 0,
                "native image size must be divisible by the patch size");
    proj_ = register_module(
        "patch_embed",
        torch::nn::Conv2d(torch::nn::Conv2dOptions(3, config.dim, config.patch_size)
                              .stride(config.patch_size)));
    const auto grid = config.image_size / config.patch_size;
    pos_embed_ = register_parameter(
        "pos_embed", torch::randn({1, grid * grid, config.dim}) * 0.02);
    for (std::int64_t i = 0; i < config.depth; ++i) {
        blocks_.push_back(register_module(
            "block" + std::to_string(i),
            TransformerBlock(config.dim, config.heads, config.mlp_ratio)));
    }
    norm_ = register_module("norm",
                            torch::nn::LayerNorm(torch::nn::LayerNormOptions({config.dim})));
}

torch::Tensor VitEncoderImpl::positional(std::int64_t grid_h, std::int64_t grid_w) {
    const auto native = config_.image_size / config_.patch_size;
    if (grid_h == native && grid_w == native) return pos_embed_;
    auto table = pos_embed_.reshape({1, native, native, config_.dim}).permute({0, 3, 1, 2});
    auto resized = F::interpolate(table, F::InterpolateFuncOptions()
                                             .size(std::vector<std::int64_t>{grid_h, grid_w})
                                             .mode(torch::kBilinear)
                                             .align_corners(false));
    return resized.permute({0, 2, 3, 1}).reshape({1, grid_h * grid_w, config_.dim});
}

torch::Tensor VitEncoderImpl::embed(const torch::Tensor& images) {
    TORCH_CHECK(images.dim() == 4 && images.size(1) == 3, "expected [B,3,H,W] images");
    if (images.size(2) % config_.patch_size != 0 || images.size(3) % config_.patch_size != 0) {
        throw std::invalid_argument("image dims must be divisible by the patch size");
    }
    auto feat = proj_->forward(images); // [B, D, gh, gw]
    const auto grid_h = feat.size(2), grid_w = feat.size(3);
    auto tokens = feat.flatten(2).transpose(1, 2); // [B, gh*gw, D]
    return tokens + positional(grid_h, grid_w);
}

torch::Tensor VitEncoderImpl::encode(const torch::Tensor& tokens) {
    auto x = tokens;
    for (auto& block : blocks_) x = block->forward(x);
    return norm_->forward(x);
}

VitOverlapNetImpl::VitOverlapNetImpl(const VitConfig& config) {
    encoder_ = register_module("encoder", VitEncoder(config));
    sep_ = register_parameter("sep", torch::randn({config.dim}) * 0.02);
    head_ = register_module("head", ConvDecodeHead(config.dim, 2, config.patch_size));
}

torch::Tensor VitOverlapNetImpl::decode_full_segment(const torch::Tensor& encoded,
                                                     std::int64_t full_len,
                                                     std::int64_t image_h,
                                                     std::int64_t image_w) {
    const auto patch = encoder_->config().patch_size;
    const auto grid_h = image_h / patch, grid_w = image_w / patch;
    TORCH_CHECK(grid_h * grid_w == full_len, "full segment length disagrees with image dims");
    auto feat = encoded.narrow(1, 0, full_len)
                    .transpose(1, 2)
                    .reshape({encoded.size(0), encoder_->config().dim, grid_h, grid_w});
    return head_->forward(feat);
}

torch::Tensor VitOverlapNetImpl::forward(const torch::Tensor& full_images,
                                         const torch::Tensor& subimages) {
    auto full_tokens = encoder_->embed(full_images);
    auto sub_tokens = encoder_->embed(subimages);
    auto seq = build_joint_sequence(full_tokens, sub_tokens, sep_);
    auto encoded = encoder_->encode(seq.tokens);
    return decode_full_segment(encoded, seq.full_len, full_images.size(2),
                               full_images.size(3));
}

VitSegmenterImpl::VitSegmenterImpl(const VitConfig& config, std::int64_t num_classes) {
    encoder_ = register_module("encoder", VitEncoder(config));
    head_ = register_module("head", ConvDecodeHead(config.dim, num_classes, config.patch_size));
}

torch::Tensor VitSegmenterImpl::forward(const torch::Tensor& images) {
    auto tokens = encoder_->embed(images);
    auto encoded = encoder_->encode(tokens);
    const auto patch = encoder_->config().patch_size;
    const auto grid_h = images.size(2) / patch, grid_w = images.size(3) / patch;
    auto feat = encoded.transpose(1, 2).reshape(
        {images.size(0), encoder_->config().dim, grid_h, grid_w});
    return head_->forward(feat);
}

} // namespace sop
