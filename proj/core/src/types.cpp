#include "sop/types.hpp"

#include <sstream>

namespace sop {
namespace {

std::string index_string(const torch::Tensor& flat_index_mask, const torch::Tensor& like) {
    // Reports the first offending position of a boolean mask, unraveled.
    auto flat = flat_index_mask.flatten();
    auto idx = flat.nonzero();
    if (idx.numel() == 0) return "?";
    std::int64_t lin = idx[0].item<std::int64_t>();
    std::ostringstream os;
    os << "[";
    std::vector<std::int64_t> dims(like.sizes().begin(), like.sizes().end());
    std::vector<std::int64_t> coord(dims.size(), 0);
    for (std::int64_t d = static_cast<std::int64_t>(dims.size()) - 1; d >= 0; --d) {
        coord[static_cast<std::size_t>(d)] = lin % dims[static_cast<std::size_t>(d)];
        lin /= dims[static_cast<std::size_t>(d)];
    }
    for (std::size_t d = 0; d < coord.size(); ++d) os << (d ? "," : "") << coord[d];
    os << "]";
    return os.str();
}

} // namespace

ValidationReport validate_sample(const ImageSample& sample) {
    ValidationReport report;
    if (!sample.pixels.defined()) {
        report.violations.push_back({"pixels undefined", "pixels"});
        return report;
    }
    if (sample.pixels.dim() != 3) {
        report.violations.push_back({"raster must be 3-dimensional (C,H,W)", "pixels"});
        return report;
    }
    if (sample.pixels.size(0) != 3) {
        report.violations.push_back({"channel count must be exactly 3", "pixels"});
    }
    if (sample.pixels.size(1) < 1 || sample.pixels.size(2) < 1) {
        report.violations.push_back({"spatial dims must be >= 1", "pixels"});
    }
    if (sample.pixels.numel() > 0) {
        auto bad = (sample.pixels < 0.0) | (sample.pixels > 1.0) | sample.pixels.isnan();
        if (bad.any().item<bool>()) {
            report.violations.push_back(
                {"intensity out of range", "pixels" + index_string(bad, sample.pixels)});
        }
    }
    return report;
}

ValidationReport validate_sample(const SegmentationSample& sample) {
    ValidationReport report = validate_sample(sample.image);
    if (!sample.labels.defined()) {
        report.violations.push_back({"labels undefined", "labels"});
        return report;
    }
    if (sample.labels.dim() != 2) {
        report.violations.push_back({"labels must be 2-dimensional (H,W)", "labels"});
        return report;
    }
    if (sample.image.pixels.defined() && sample.image.pixels.dim() == 3 &&
        (sample.labels.size(0) != sample.image.height() ||
         sample.labels.size(1) != sample.image.width())) {
        report.violations.push_back({"shape mismatch between labels and image", "labels"});
    }
    if (sample.num_classes < 1) {
        report.violations.push_back({"num_classes must be >= 1", "num_classes"});
        return report;
    }
    auto bad = (sample.labels < 0) | (sample.labels >= sample.num_classes);
    if (sample.ignore_index) {
        bad = bad & (sample.labels != *sample.ignore_index);
    }
    if (bad.any().item<bool>()) {
        report.violations.push_back(
            {"label out of range", "labels" + index_string(bad, sample.labels)});
    }
    return report;
}

ValidationReport validate_spec(const SubimageSpec& spec, std::int64_t image_height,
                               std::int64_t image_width) {
    ValidationReport report;
    if (spec.height < 1 || spec.width < 1) {
        report.violations.push_back({"subimage dims must be >= 1", "spec"});
    }
    if (spec.top < 0 || spec.left < 0 || spec.top + spec.height > image_height ||
        spec.left + spec.width > image_width) {
        report.violations.push_back({"spec outside image bounds", "spec"});
    }
    return report;
}

ValidationReport validate_target(const OverlapTarget& target, const SubimageSpec& spec) {
    ValidationReport report;
    if (!target.mask.defined() || target.mask.dim() != 2) {
        report.violations.push_back({"mask must be 2-dimensional (H,W)", "mask"});
        return report;
    }
    auto ones = target.mask.nonzero();
    const std::int64_t count = ones.size(0);
    if (count != spec.height * spec.width) {
        report.violations.push_back({"positive pixel count differs from spec area", "mask"});
    }
    if (count > 0) {
        auto rows = ones.select(1, 0);
        auto cols = ones.select(1, 1);
        const std::int64_t r0 = rows.min().item<std::int64_t>();
        const std::int64_t r1 = rows.max().item<std::int64_t>();
        const std::int64_t c0 = cols.min().item<std::int64_t>();
        const std::int64_t c1 = cols.max().item<std::int64_t>();
        if ((r1 - r0 + 1) * (c1 - c0 + 1) != count) {
            report.violations.push_back({"positive pixels do not form a single rectangle", "mask"});
        }
    }
    return report;
}

} // namespace sop
