#pragma once

#include <torch/torch.h>

#include <map>
#include <string>
#include <vector>

namespace sop {

/// Named map from canonical parameter path (dot-separated) to tensor, plus
/// architecture id and pretraining provenance. Immutable once written;
/// tensors are detached CPU copies.
struct ParameterStore {
    std::map<std::string, torch::Tensor> tensors;
    std::string arch;       // "vit" | "dual_cnn"
    std::string provenance; // e.g. "scratch", "subimage", "imagenet", "lvd142m", "random"

    bool has_prefix(const std::string& prefix) const;
};

/// Result of loading a store into a module: store entries that matched are
/// consumed; everything else is reported by name.
struct LoadReport {
    std::vector<std::string> missing;    // present in the module, absent in the store
    std::vector<std::string> unconsumed; // present in the store, unused by the module
    std::vector<std::string> mismatched; // name matched but shape/dtype differed

    bool fully_consumed() const { return unconsumed.empty() && mismatched.empty(); }
};

/// Snapshots parameters and buffers (running stats included) as detached
/// CPU clones under their canonical module paths.
ParameterStore snapshot_state(const torch::nn::Module& module, const std::string& arch,
                              const std::string& provenance);

/// Copies matching entries into the module under no_grad; reports the rest.
LoadReport load_state(torch::nn::Module& module, const ParameterStore& store);

} // namespace sop
