#include "sop/checkpoint.hpp"

#include <nlohmann/json.hpp>

#include <cstring>
#include <fstream>

namespace sop {
namespace {

constexpr char kMagic[8] = {'S', 'O', 'P', 'C', 'K', 'P', 'T', '1'};
constexpr char kTrailer[8] = {'S', 'O', 'P', 'E', 'N', 'D', '!', '\n'};
constexpr std::uint32_t kVersion = 1;

std::uint8_t dtype_code(torch::ScalarType t) {
    switch (t) {
        case torch::kFloat32: return 0;
        case torch::kFloat64: return 1;
        case torch::kInt64: return 2;
        case torch::kUInt8: return 3;
        case torch::kInt32: return 4;
        default: throw CheckpointError("unsupported tensor dtype in checkpoint");
    }
}

torch::ScalarType dtype_from_code(std::uint8_t code) {
    switch (code) {
        case 0: return torch::kFloat32;
        case 1: return torch::kFloat64;
        case 2: return torch::kInt64;
        case 3: return torch::kUInt8;
        case 4: return torch::kInt32;
        default: throw CheckpointError("corrupt checkpoint: unknown dtype code");
    }
}

template <typename T>
void write_pod(std::ostream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::istream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) throw CheckpointError("corrupt checkpoint: truncated file");
    return v;
}

std::string read_bytes(std::istream& is, std::uint64_t n) {
    std::string buf(n, '\0');
    is.read(buf.data(), static_cast<std::streamsize>(n));
    if (!is) throw CheckpointError("corrupt checkpoint: truncated file");
    return buf;
}

} // namespace

void write_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw CheckpointError("cannot open checkpoint for writing: " + path.string());

    os.write(kMagic, sizeof(kMagic));
    write_pod(os, kVersion);

    nlohmann::json meta;
    meta["arch"] = checkpoint.store.arch;
    meta["provenance"] = checkpoint.store.provenance;
    meta["seed"] = checkpoint.seed;
    meta["config"] = checkpoint.config_text;
    meta["rng_state"] = checkpoint.rng_state;
    const std::string meta_bytes = meta.dump();
    write_pod(os, static_cast<std::uint64_t>(meta_bytes.size()));
    os.write(meta_bytes.data(), static_cast<std::streamsize>(meta_bytes.size()));

    write_pod(os, static_cast<std::uint64_t>(checkpoint.store.tensors.size()));
    for (const auto& [name, tensor] : checkpoint.store.tensors) {
        auto t = tensor.detach().cpu().contiguous();
        write_pod(os, static_cast<std::uint32_t>(name.size()));
        os.write(name.data(), static_cast<std::streamsize>(name.size()));
        write_pod(os, dtype_code(t.scalar_type()));
        write_pod(os, static_cast<std::uint8_t>(t.dim()));
        for (std::int64_t d = 0; d < t.dim(); ++d) {
            write_pod(os, static_cast<std::int64_t>(t.size(d)));
        }
        const std::uint64_t nbytes = static_cast<std::uint64_t>(t.numel()) *
                                     static_cast<std::uint64_t>(t.element_size());
        write_pod(os, nbytes);
        os.write(static_cast<const char*>(t.const_data_ptr()),
                 static_cast<std::streamsize>(nbytes));
    }
    os.write(kTrailer, sizeof(kTrailer));
    if (!os) throw CheckpointError("write failure: " + path.string());
}

Checkpoint read_checkpoint(const std::filesystem::path& path, const std::string& expected_arch) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw CheckpointError("cannot open checkpoint: " + path.string());

    char magic[sizeof(kMagic)];
    is.read(magic, sizeof(magic));
    if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
        throw CheckpointError("corrupt checkpoint: bad magic in " + path.string());
    }
    const auto version = read_pod<std::uint32_t>(is);
    if (version != kVersion) {
        throw CheckpointError("checkpoint version mismatch: file has v" +
                              std::to_string(version) + ", reader supports v" +
                              std::to_string(kVersion));
    }

    Checkpoint checkpoint;
    const auto meta_len = read_pod<std::uint64_t>(is);
    nlohmann::json meta;
    try {
        meta = nlohmann::json::parse(read_bytes(is, meta_len));
    } catch (const nlohmann::json::exception&) {
        throw CheckpointError("corrupt checkpoint: bad metadata block");
    }
    checkpoint.store.arch = meta.value("arch", "");
    checkpoint.store.provenance = meta.value("provenance", "");
    checkpoint.seed = meta.value("seed", std::uint64_t{0});
    checkpoint.config_text = meta.value("config", "");
    checkpoint.rng_state = meta.value("rng_state", "");

    const auto count = read_pod<std::uint64_t>(is);
    for (std::uint64_t i = 0; i < count; ++i) {
        const auto name_len = read_pod<std::uint32_t>(is);
        const std::string name = read_bytes(is, name_len);
        const auto dtype = dtype_from_code(read_pod<std::uint8_t>(is));
        const auto ndim = read_pod<std::uint8_t>(is);
        std::vector<std::int64_t> dims(ndim);
        for (auto& d : dims) d = read_pod<std::int64_t>(is);
        const auto nbytes = read_pod<std::uint64_t>(is);
        auto tensor = torch::empty(dims, torch::TensorOptions().dtype(dtype));
        const std::uint64_t expected = static_cast<std::uint64_t>(tensor.numel()) *
                                       static_cast<std::uint64_t>(tensor.element_size());
        if (nbytes != expected) {
            throw CheckpointError("corrupt checkpoint: tensor size mismatch for " + name);
        }
        is.read(static_cast<char*>(tensor.data_ptr()), static_cast<std::streamsize>(nbytes));
        if (!is) throw CheckpointError("corrupt checkpoint: truncated tensor data");
        checkpoint.store.tensors[name] = tensor;
    }

    char trailer[sizeof(kTrailer)];
    is.read(trailer, sizeof(trailer));
    if (!is || std::memcmp(trailer, kTrailer, sizeof(kTrailer)) != 0) {
        throw CheckpointError("corrupt checkpoint: missing trailer");
    }

    if (!expected_arch.empty() && checkpoint.store.arch != expected_arch) {
        throw CheckpointError("architecture mismatch: checkpoint has '" +
                              checkpoint.store.arch + "', expected '" + expected_arch + "'");
    }
    return checkpoint;
}

} // namespace sop
