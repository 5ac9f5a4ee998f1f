#include "sop/subimage.hpp"

#include <stdexcept>

namespace sop {

using torch::indexing::Slice;

void AugmentationConfig::check() const {
    auto symmetric = [](double lo, double hi, double center) {
        return std::abs((center - lo) - (hi - center)) < 1e-12;
    };
    if (!symmetric(jitter.brightness_lo, jitter.brightness_hi, 1.0) ||
        !symmetric(jitter.contrast_lo, jitter.contrast_hi, 1.0) ||
        !symmetric(jitter.saturation_lo, jitter.saturation_hi, 1.0) ||
        !symmetric(jitter.hue_lo, jitter.hue_hi, 0.0)) {
        throw std::invalid_argument("jitter ranges must be symmetric around identity");
    }
}

SubimageSpec select_subimage(std::int64_t image_height, std::int64_t image_width,
                             std::int64_t sub_height, std::int64_t sub_width, Rng& rng) {
    if (sub_height < 1 || sub_width < 1) {
        throw std::invalid_argument("subimage dims must be >= 1");
    }
    if (sub_height > image_height || sub_width > image_width) {
        throw std::invalid_argument("subimage dims exceed image dims");
    }
    SubimageSpec spec;
    spec.top = rng.uniform_int(0, image_height - sub_height);
    spec.left = rng.uniform_int(0, image_width - sub_width);
    spec.height = sub_height;
    spec.width = sub_width;
    return spec;
}

OverlapTarget make_overlap_mask(const SubimageSpec& spec, std::int64_t image_height,
                                std::int64_t image_width) {
    auto report = validate_spec(spec, image_height, image_width);
    if (!report.ok()) {
        throw std::invalid_argument("make_overlap_mask: " + report.violations.front().what);
    }
    auto mask = torch::zeros({image_height, image_width}, torch::kInt64);
    mask.index_put_({Slice(spec.top, spec.top + spec.height),
                     Slice(spec.left, spec.left + spec.width)},
                    1);
    return OverlapTarget{mask};
}

std::pair<torch::Tensor, FlipRecord> apply_flips(const torch::Tensor& image, Rng& rng) {
    FlipRecord record;
    record.horizontal = rng.bernoulli(0.5);
    record.vertical = rng.bernoulli(0.5);
    return {apply_flip(image, record), record};
}

torch::Tensor apply_flip(const torch::Tensor& image, const FlipRecord& record) {
    auto out = image;
    if (record.horizontal) out = torch::flip(out, {2}); // width axis
    if (record.vertical) out = torch::flip(out, {1});   // height axis
    return out;
}

namespace {

torch::Tensor rgb_to_hsv(const torch::Tensor& rgb) {
    auto r = rgb[0], g = rgb[1], b = rgb[2];
    auto maxc = std::get<0>(rgb.max(0));
    auto minc = std::get<0>(rgb.min(0));
    auto v = maxc;
    auto delta = maxc - minc;
    auto s = torch::where(maxc > 0, delta / maxc, torch::zeros_like(maxc));

    auto safe_delta = torch::where(delta > 0, delta, torch::ones_like(delta));
    auto hr = ((g - b) / safe_delta).remainder(6.0);
    auto hg = (b - r) / safe_delta + 2.0;
    auto hb = (r - g) / safe_delta + 4.0;
    auto h = torch::where(maxc == r, hr, torch::where(maxc == g, hg, hb));
    h = torch::where(delta > 0, h / 6.0, torch::zeros_like(h));
    return torch::stack({h, s, v});
}

torch::Tensor hsv_to_rgb(const torch::Tensor& hsv) {
    auto h = hsv[0], s = hsv[1], v = hsv[2];
    auto h6 = h * 6.0;
    auto i = h6.floor();
    auto f = h6 - i;
    auto p = v * (1.0 - s);
    auto q = v * (1.0 - s * f);
    auto t = v * (1.0 - s * (1.0 - f));
    auto sector = i.remainder(6.0).to(torch::kInt64);

    auto r = torch::empty_like(v);
    auto g = torch::empty_like(v);
    auto b = torch::empty_like(v);
    auto pick = [&](std::int64_t k, const torch::Tensor& rv, const torch::Tensor& gv,
                    const torch::Tensor& bv) {
        auto m = sector == k;
        r = torch::where(m, rv, r);
        g = torch::where(m, gv, g);
        b = torch::where(m, bv, b);
    };
    pick(0, v, t, p);
    pick(1, q, v, p);
    pick(2, p, v, t);
    pick(3, p, q, v);
    pick(4, t, p, v);
    pick(5, v, p, q);
    return torch::stack({r, g, b});
}

} // namespace

torch::Tensor jitter_with_factors(const torch::Tensor& image, double brightness,
                                  double contrast, double saturation, double hue_shift) {
    TORCH_CHECK(image.dim() == 3 && image.size(0) == 3, "expected [3,H,W] raster");
    auto out = image;
    if (brightness != 1.0) {
        out = (out * brightness).clamp(0.0, 1.0);
    }
    if (contrast != 1.0) {
        auto mean = out.mean({1, 2}, /*keepdim=*/true); // per-channel
        out = (mean + contrast * (out - mean)).clamp(0.0, 1.0);
    }
    if (saturation != 1.0) {
        auto gray = (0.299 * out[0] + 0.587 * out[1] + 0.114 * out[2]).unsqueeze(0);
        out = (gray + saturation * (out - gray)).clamp(0.0, 1.0);
    }
    if (hue_shift != 0.0) {
        auto hsv = rgb_to_hsv(out);
        hsv[0] = (hsv[0] + hue_shift).remainder(1.0);
        out = hsv_to_rgb(hsv).clamp(0.0, 1.0);
    }
    return out;
}

torch::Tensor apply_jitter(const torch::Tensor& image, const AugmentationConfig& config,
                           Rng& rng) {
    const auto& j = config.jitter;
    const double brightness = rng.uniform_real(j.brightness_lo, j.brightness_hi);
    const double contrast = rng.uniform_real(j.contrast_lo, j.contrast_hi);
    const double saturation = rng.uniform_real(j.saturation_lo, j.saturation_hi);
    const double hue = rng.uniform_real(j.hue_lo, j.hue_hi);
    return jitter_with_factors(image, brightness, contrast, saturation, hue);
}

PretrainExample assemble_pretrain_example(const ImageSample& sample, std::int64_t sub_height,
                                          std::int64_t sub_width, const AugmentationConfig& aug,
                                          Split split, Rng& rng) {
    // Three independent streams, always drawn, so enabling or disabling any
    // augmentation stage cannot shift the selection stream.
    Rng rng_full(rng.next_u64());
    Rng rng_select(rng.next_u64());
    Rng rng_sub(rng.next_u64());

    const bool augment = !aug.apply_to_train_only || split == Split::train;

    torch::Tensor full = sample.pixels;
    if (augment && aug.flip_enabled) {
        full = apply_flips(full, rng_full).first;
    }
    if (augment && aug.jitter_enabled) {
        full = apply_jitter(full, aug, rng_full);
    }

    // Spec and mask are defined against the post-augmentation full image.
    const auto spec = select_subimage(full.size(1), full.size(2), sub_height, sub_width,
                                      rng_select);
    auto target = make_overlap_mask(spec, full.size(1), full.size(2));

    torch::Tensor sub = full.index({Slice(), Slice(spec.top, spec.top + spec.height),
                                    Slice(spec.left, spec.left + spec.width)})
                            .clone();
    if (augment && aug.flip_enabled) {
        sub = apply_flips(sub, rng_sub).first;
    }
    if (augment && aug.jitter_enabled) {
        sub = apply_jitter(sub, aug, rng_sub);
    }

    PretrainExample example;
    example.full_image = ImageSample{sample.id, full, sample.source};
    example.subimage = sub;
    example.target = std::move(target);
    example.spec = spec;
    return example;
}

} // namespace sop
