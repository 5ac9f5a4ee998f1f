#include "sop/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace sop {

ConfusionMatrix::ConfusionMatrix(std::int64_t num_classes)
    : num_classes_(num_classes),
      counts_(static_cast<std::size_t>(num_classes * num_classes), 0) {
    TORCH_CHECK(num_classes >= 1, "ConfusionMatrix needs at least one class");
}

void ConfusionMatrix::accumulate(const torch::Tensor& pred, const torch::Tensor& target,
                                 std::optional<std::int64_t> ignore_index) {
    TORCH_CHECK(pred.sizes() == target.sizes(), "pred/target shape mismatch");
    auto p = pred.flatten().to(torch::kInt64);
    auto t = target.flatten().to(torch::kInt64);

    if ((p.lt(0) | p.ge(num_classes_)).any().item<bool>()) {
        throw std::invalid_argument("prediction outside [0, C)");
    }

    if (ignore_index) {
        auto keep = t != *ignore_index;
        ignored_ += (t.numel() - keep.sum().item<std::int64_t>());
        p = p.masked_select(keep);
        t = t.masked_select(keep);
    }
    if ((t.lt(0) | t.ge(num_classes_)).any().item<bool>()) {
        throw std::invalid_argument("target outside [0, C) and not ignore_index");
    }

    auto lin = t * num_classes_ + p;
    auto binned = torch::bincount(lin, {}, num_classes_ * num_classes_);
    auto acc = binned.accessor<std::int64_t, 1>();
    for (std::int64_t i = 0; i < binned.size(0); ++i) {
        counts_[static_cast<std::size_t>(i)] += acc[i];
    }
}

ConfusionMatrix& ConfusionMatrix::merge(const ConfusionMatrix& other) {
    TORCH_CHECK(num_classes_ == other.num_classes_, "merge: class count mismatch");
    for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
    ignored_ += other.ignored_;
    return *this;
}

std::int64_t ConfusionMatrix::at(std::int64_t truth, std::int64_t pred) const {
    return counts_[static_cast<std::size_t>(truth * num_classes_ + pred)];
}

std::int64_t ConfusionMatrix::total() const {
    std::int64_t s = 0;
    for (auto c : counts_) s += c;
    return s;
}

IouResult ConfusionMatrix::miou() const {
    if (total() == 0) {
        throw std::invalid_argument("miou: empty confusion matrix");
    }
    IouResult result;
    result.per_class.resize(static_cast<std::size_t>(num_classes_));
    result.valid.resize(static_cast<std::size_t>(num_classes_));
    double sum = 0.0;
    std::int64_t n_valid = 0;
    for (std::int64_t c = 0; c < num_classes_; ++c) {
        std::int64_t tp = at(c, c);
        std::int64_t fp = 0, fn = 0;
        for (std::int64_t k = 0; k < num_classes_; ++k) {
            if (k == c) continue;
            fp += at(k, c);
            fn += at(c, k);
        }
        const std::int64_t uni = tp + fp + fn;
        if (uni == 0) {
            result.per_class[static_cast<std::size_t>(c)] =
                std::numeric_limits<double>::quiet_NaN();
            result.valid[static_cast<std::size_t>(c)] = false;
            continue;
        }
        const double iou = static_cast<double>(tp) / static_cast<double>(uni);
        result.per_class[static_cast<std::size_t>(c)] = iou;
        result.valid[static_cast<std::size_t>(c)] = true;
        sum += iou;
        ++n_valid;
    }
    result.mean = n_valid > 0 ? sum / static_cast<double>(n_valid) : 0.0;
    return result;
}

double binary_overlap_iou(const torch::Tensor& logits, const OverlapTarget& target) {
    TORCH_CHECK(logits.dim() == 3 && logits.size(0) == 2, "expected [2,H,W] logits");
    TORCH_CHECK(logits.size(1) == target.mask.size(0) && logits.size(2) == target.mask.size(1),
                "logits/target shape mismatch");
    auto pred = logits.argmax(0);
    ConfusionMatrix cm(2);
    cm.accumulate(pred, target.mask);
    return cm.miou().mean;
}

} // namespace sop
