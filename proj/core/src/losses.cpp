#include "sop/losses.hpp"

#include <cmath>
#include <stdexcept>

namespace sop {

namespace F = torch::nn::functional;

ClassWeights ClassWeights::uniform(std::int64_t num_classes) {
    return {torch::ones({num_classes}, torch::kFloat64)};
}

ClassWeights ClassWeights::fixed(const std::vector<double>& values) {
    auto alpha = torch::tensor(values, torch::kFloat64);
    TORCH_CHECK((alpha > 0).all().item<bool>(), "class weights must be positive");
    return {alpha};
}

namespace {

struct Prepared {
    torch::Tensor logits; // [N,C,H,W]
    torch::Tensor target; // [N,H,W]
};

Prepared prepare(const torch::Tensor& logits, const torch::Tensor& target,
                 std::int64_t num_classes, std::optional<std::int64_t> ignore_index) {
    Prepared p;
    p.logits = logits.dim() == 3 ? logits.unsqueeze(0) : logits;
    p.target = target.dim() == 2 ? target.unsqueeze(0) : target;
    TORCH_CHECK(p.logits.dim() == 4 && p.target.dim() == 3,
                "expected [C,H,W]/[H,W] or [N,C,H,W]/[N,H,W]");
    TORCH_CHECK(p.logits.size(0) == p.target.size(0) && p.logits.size(2) == p.target.size(1) &&
                    p.logits.size(3) == p.target.size(2),
                "logits/target shape mismatch");
    TORCH_CHECK(p.logits.size(1) == num_classes, "logit channels disagree with class weights");

    auto bad = (p.target < 0) | (p.target >= num_classes);
    if (ignore_index) bad = bad & (p.target != *ignore_index);
    if (bad.any().item<bool>()) {
        throw std::invalid_argument("target label outside [0, C) and not ignore_index");
    }
    return p;
}

torch::Tensor masked_mean(const torch::Tensor& per_pixel, const torch::Tensor& valid) {
    auto count = valid.sum();
    if (count.item<std::int64_t>() == 0) {
        return per_pixel.sum() * 0.0; // keeps the autograd graph alive
    }
    return (per_pixel * valid.to(per_pixel.dtype())).sum() / count.to(per_pixel.dtype());
}

} // namespace

torch::Tensor focal_loss(const torch::Tensor& logits, const torch::Tensor& target,
                         const ClassWeights& alpha, double gamma,
                         std::optional<std::int64_t> ignore_index) {
    TORCH_CHECK(gamma >= 0.0, "gamma must be >= 0");
    auto p = prepare(logits, target, alpha.num_classes(), ignore_index);

    auto valid = ignore_index ? (p.target != *ignore_index) : torch::ones_like(p.target).to(torch::kBool);
    auto safe_target = torch::where(valid, p.target, torch::zeros_like(p.target));

    auto log_probs = F::log_softmax(p.logits, F::LogSoftmaxFuncOptions(1));
    auto log_pt = log_probs.gather(1, safe_target.unsqueeze(1)).squeeze(1); // [N,H,W]
    auto pt = log_pt.exp();

    auto alpha_t = alpha.alpha.to(p.logits.options())
                       .index_select(0, safe_target.flatten())
                       .view_as(safe_target);

    auto per_pixel = -alpha_t * log_pt;
    if (gamma != 0.0) {
        per_pixel = per_pixel * (1.0 - pt).pow(gamma);
    }
    return masked_mean(per_pixel, valid);
}

torch::Tensor cross_entropy_loss(const torch::Tensor& logits, const torch::Tensor& target,
                                 const ClassWeights& alpha,
                                 std::optional<std::int64_t> ignore_index) {
    auto p = prepare(logits, target, alpha.num_classes(), ignore_index);

    auto valid = ignore_index ? (p.target != *ignore_index) : torch::ones_like(p.target).to(torch::kBool);
    auto safe_target = torch::where(valid, p.target, torch::zeros_like(p.target));

    auto ce = F::cross_entropy(p.logits, safe_target,
                               F::CrossEntropyFuncOptions().reduction(torch::kNone));
    auto alpha_t = alpha.alpha.to(p.logits.options())
                       .index_select(0, safe_target.flatten())
                       .view_as(safe_target);
    return masked_mean(alpha_t * ce, valid);
}

ClassWeights inverse_sqrt_class_weights(const std::vector<std::int64_t>& pixel_counts) {
    TORCH_CHECK(!pixel_counts.empty(), "pixel_counts must be non-empty");
    std::int64_t total = 0;
    for (auto c : pixel_counts) {
        if (c <= 0) {
            throw std::invalid_argument(
                "zero-count class: inverse-sqrt weights undefined, use an explicit floor "
                "weight for absent classes");
        }
        total += c;
    }
    const auto num_classes = static_cast<std::int64_t>(pixel_counts.size());
    auto alpha = torch::empty({num_classes}, torch::kFloat64);
    double sum = 0.0;
    for (std::int64_t c = 0; c < num_classes; ++c) {
        const double freq =
            static_cast<double>(pixel_counts[static_cast<std::size_t>(c)]) /
            static_cast<double>(total);
        const double w = 1.0 / std::sqrt(freq);
        alpha[c] = w;
        sum += w;
    }
    alpha = alpha * (static_cast<double>(num_classes) / sum);
    return {alpha};
}

} // namespace sop
