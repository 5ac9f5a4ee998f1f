#include "sop/param_store.hpp"

#include <set>

namespace sop {

bool ParameterStore::has_prefix(const std::string& prefix) const {
    for (const auto& [name, tensor] : tensors) {
        (void)tensor;
        if (name.rfind(prefix, 0) == 0) return true;
    }
    return false;
}

ParameterStore snapshot_state(const torch::nn::Module& module, const std::string& arch,
                              const std::string& provenance) {
    ParameterStore store;
    store.arch = arch;
    store.provenance = provenance;
    for (const auto& p : module.named_parameters(/*recurse=*/true)) {
        store.tensors[p.key()] = p.value().detach().cpu().clone().contiguous();
    }
    for (const auto& b : module.named_buffers(/*recurse=*/true)) {
        store.tensors[b.key()] = b.value().detach().cpu().clone().contiguous();
    }
    return store;
}

LoadReport load_state(torch::nn::Module& module, const ParameterStore& store) {
    LoadReport report;
    std::map<std::string, torch::Tensor> targets;
    for (const auto& p : module.named_parameters(/*recurse=*/true)) {
        targets[p.key()] = p.value();
    }
    for (const auto& b : module.named_buffers(/*recurse=*/true)) {
        targets[b.key()] = b.value();
    }

    std::set<std::string> consumed;
    torch::NoGradGuard no_grad;
    for (auto& [name, dst] : targets) {
        auto it = store.tensors.find(name);
        if (it == store.tensors.end()) {
            report.missing.push_back(name);
            continue;
        }
        if (it->second.sizes() != dst.sizes() ||
            it->second.scalar_type() != dst.scalar_type()) {
            report.mismatched.push_back(name);
            continue;
        }
        dst.copy_(it->second);
        consumed.insert(name);
    }
    for (const auto& [name, tensor] : store.tensors) {
        (void)tensor;
        if (!consumed.count(name)) {
            bool mismatch = false;
            for (const auto& m : report.mismatched) {
                if (m == name) { mismatch = true; break; }
            }
            if (!mismatch) report.unconsumed.push_back(name);
        }
    }
    return report;
}

} // namespace sop
