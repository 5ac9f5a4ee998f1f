#pragma once

#include <torch/torch.h>

#include <optional>
#include <vector>

namespace sop {

/// Per-class loss weights (alpha), all entries positive.
struct ClassWeights {
    torch::Tensor alpha; // float64 [C]

    std::int64_t num_classes() const { return alpha.size(0); }
    static ClassWeights uniform(std::int64_t num_classes);
    static ClassWeights fixed(const std::vector<double>& values);
};

/// Softmax focal loss, FL(p_t) = -alpha_t * (1 - p_t)^gamma * log(p_t),
/// averaged over non-ignored pixels. Accepts [C,H,W]/[H,W] or batched
/// [N,C,H,W]/[N,H,W]; computes in the logits dtype. With gamma = 0 and
/// uniform alpha this is exactly cross-entropy.
torch::Tensor focal_loss(const torch::Tensor& logits, const torch::Tensor& target,
                         const ClassWeights& alpha, double gamma,
                         std::optional<std::int64_t> ignore_index = std::nullopt);

/// Weighted cross-entropy over non-ignored pixels (alpha-weighted mean,
/// matching focal_loss at gamma = 0).
torch::Tensor cross_entropy_loss(const torch::Tensor& logits, const torch::Tensor& target,
                                 const ClassWeights& alpha,
                                 std::optional<std::int64_t> ignore_index = std::nullopt);

/// alpha_c proportional to 1/sqrt(count_c / sum(counts)), rescaled so the
/// weights sum to C. Throws std::invalid_argument on zero counts, with a
/// pointer at supplying an explicit floor weight instead.
ClassWeights inverse_sqrt_class_weights(const std::vector<std::int64_t>& pixel_counts);

} // namespace sop
