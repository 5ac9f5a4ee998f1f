#pragma once

#include "sop/types.hpp"

#include <optional>
#include <vector>

namespace sop {

struct IouResult {
    std::vector<double> per_class; // NaN for classes with zero union
    std::vector<bool> valid;       // false where union is zero
    double mean = 0.0;             // over valid classes only
};

/// C x C confusion accumulator, counts[true][pred]. Partial matrices from
/// independent workers merge associatively and commutatively.
class ConfusionMatrix {
public:
    explicit ConfusionMatrix(std::int64_t num_classes);

    /// counts[t][p] += 1 per pixel; ignore_index pixels are skipped and
    /// tallied. Throws on shape mismatch or predictions outside [0, C).
    void accumulate(const torch::Tensor& pred, const torch::Tensor& target,
                    std::optional<std::int64_t> ignore_index = std::nullopt);

    ConfusionMatrix& merge(const ConfusionMatrix& other);

    std::int64_t at(std::int64_t truth, std::int64_t pred) const;
    std::int64_t num_classes() const { return num_classes_; }
    std::int64_t total() const;
    std::int64_t ignored() const { return ignored_; }

    /// IoU_c = TP / (TP + FP + FN); zero-union classes are excluded from the
    /// mean. Throws std::invalid_argument on an empty matrix.
    IouResult miou() const;

private:
    std::int64_t num_classes_;
    std::vector<std::int64_t> counts_;
    std::int64_t ignored_ = 0;
};

/// Two-class mIoU of an overlap prediction: per-pixel argmax over the two
/// channels, then the mean of background IoU and subimage IoU (zero-union
/// classes excluded).
double binary_overlap_iou(const torch::Tensor& logits, const OverlapTarget& target);

} // namespace sop
