#pragma once

#include "sop/param_store.hpp"

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>

namespace sop {

class CheckpointError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Single-file archive: parameter store (name -> tensor with dtype/shape
/// header), architecture id, provenance tag, rng seed, rng state, and the
/// full resolved config text. Round-trips bit-exactly.
struct Checkpoint {
    ParameterStore store;
    std::string config_text;
    std::uint64_t seed = 0;
    std::string rng_state;
};

void write_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint);

/// Throws CheckpointError on corruption or version mismatch. When
/// expected_arch is non-empty and disagrees with the stored id, the error
/// names both ids.
Checkpoint read_checkpoint(const std::filesystem::path& path,
                           const std::string& expected_arch = "");

} // namespace sop
