#pragma once

#include "sop/models/resnet.hpp"
#include "sop/models/unet.hpp"
#include "sop/models/vit.hpp"
#include "sop/param_store.hpp"

#include <memory>
#include <string>

namespace sop {

enum class Arch { vit, dual_cnn };

std::string to_string(Arch arch);
Arch arch_from_string(const std::string& name); // throws std::invalid_argument

struct ModelConfig {
    Arch arch = Arch::vit;
    VitConfig vit;
    ResNetConfig resnet;
};

std::shared_ptr<OverlapNetBase> build_overlap_model(const ModelConfig& config);

/// Strips a completed pretraining store down to the transferable encoder:
/// for vit, the shared transformer trunk and patch embedding (SEP parameter
/// and pretraining decode head excluded); for dual_cnn, only the full-image
/// encoder, canonicalized under the "encoder." namespace. Provenance becomes
/// "subimage". Throws std::invalid_argument on an unknown architecture id.
ParameterStore export_encoder(const ParameterStore& pretrained);

struct SegmenterBuild {
    std::shared_ptr<SegmenterBase> model;
    LoadReport report;
};

/// Builds the downstream segmenter (vit: transferred trunk + fresh C-channel
/// decode head; dual_cnn: U-Net around the transferred backbone with a fresh
/// decoder) and loads the encoder store into it. An empty store gives a
/// fresh random-init model. Throws when num_classes < 2 or the store's
/// architecture disagrees with `arch`.
SegmenterBuild build_downstream_segmenter(const ParameterStore& encoder_store, Arch arch,
                                          std::int64_t num_classes, const ModelConfig& config);

} // namespace sop
