#include "sop/models/factory.hpp"

#include <stdexcept>

namespace sop {

std::string to_string(Arch arch) {
    return arch == Arch::vit ? "vit" : "dual_cnn";
}

Arch arch_from_string(const std::string& name) {
    if (name == "vit") return Arch::vit;
    if (name == "dual_cnn") return Arch::dual_cnn;
    throw std::invalid_argument("unknown architecture id '" + name +
                                "' (expected vit or dual_cnn)");
}

std::shared_ptr<OverlapNetBase> build_overlap_model(const ModelConfig& config) {
    if (config.arch == Arch::vit) {
        return std::make_shared<VitOverlapNetImpl>(config.vit);
    }
    return std::make_shared<DualEncoderOverlapNetImpl>(config.resnet);
}

ParameterStore export_encoder(const ParameterStore& pretrained) {
    const Arch arch = arch_from_string(pretrained.arch); // validates the id
    ParameterStore out;
    out.arch = pretrained.arch;
    out.provenance = "subimage";
    const std::string keep_prefix = arch == Arch::vit ? "encoder." : "full_encoder.";
    for (const auto& [name, tensor] : pretrained.tensors) {
        if (name.rfind(keep_prefix, 0) != 0) continue;
        const std::string canonical =
            arch == Arch::vit ? name : "encoder." + name.substr(keep_prefix.size());
        out.tensors[canonical] = tensor;
    }
    return out;
}

SegmenterBuild build_downstream_segmenter(const ParameterStore& encoder_store, Arch arch,
                                          std::int64_t num_classes,
                                          const ModelConfig& config) {
    if (num_classes < 2) {
        throw std::invalid_argument("downstream segmenter needs at least two classes");
    }
    if (!encoder_store.tensors.empty() && !encoder_store.arch.empty() &&
        arch_from_string(encoder_store.arch) != arch) {
        throw std::invalid_argument("architecture mismatch: weights are '" +
                                    encoder_store.arch + "', requested '" + to_string(arch) +
                                    "'");
    }

    SegmenterBuild build;
    if (arch == Arch::vit) {
        build.model = std::make_shared<VitSegmenterImpl>(config.vit, num_classes);
    } else {
        build.model = std::make_shared<ResNetUNetImpl>(config.resnet, num_classes);
    }
    if (!encoder_store.tensors.empty()) {
        build.report = load_state(*build.model, encoder_store);
    }
    return build;
}

} // namespace sop
