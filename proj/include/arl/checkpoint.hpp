#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include "arl/algorithms.hpp"
#include "arl/errors.hpp"

namespace arl {

// Checkpoint file: "ARLC" magic, u32 format version, u64 spec hash, u32
// theta count, u32 theta_v count, then the parameters as little-endian
// 32-bit IEEE floats in canonical layout (theta, then theta_v if present).
// Round trips are bit-exact.

enum class CheckpointError {
    Io,
    BadMagic,
    BadVersion,
    HashMismatch,
    CountMismatch,
    Truncated,
};

inline const char* checkpoint_error_name(CheckpointError e) {
    switch (e) {
        case CheckpointError::Io: return "io";
        case CheckpointError::BadMagic: return "bad-magic";
        case CheckpointError::BadVersion: return "bad-version";
        case CheckpointError::HashMismatch: return "spec-hash-mismatch";
        case CheckpointError::CountMismatch: return "count-mismatch";
        case CheckpointError::Truncated: return "truncated";
    }
    return "?";
}

class CheckpointFault : public RuntimeFault {
public:
    CheckpointFault(CheckpointError code, const std::string& what)
        : RuntimeFault(std::string("checkpoint ") + checkpoint_error_name(code) + ": " + what),
          code_(code) {}
    CheckpointError code() const { return code_; }

private:
    CheckpointError code_;
};

inline constexpr std::uint32_t kCheckpointVersion = 1;

inline std::uint64_t spec_hash(const NetPair& nets) {
    std::string desc = nets.policy.describe();
    desc += ";value=";
    desc += nets.value ? nets.value->describe() : "none";
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : desc) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

namespace detail {

inline void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>(v >> (8 * i) & 0xff));
}
inline void put_u64(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>(v >> (8 * i) & 0xff));
}
inline void put_f32(std::string& out, float v) {
    std::uint32_t bits;
    std::memcpy(&bits, &v, 4);
    put_u32(out, bits);
}

struct ByteReader {
    const std::string& data;
    std::size_t pos = 0;

    bool need(std::size_t n) const { return pos + n <= data.size(); }
    std::uint32_t u32() {
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(data[pos++])) << (8 * i);
        return v;
    }
    std::uint64_t u64() {
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(data[pos++])) << (8 * i);
        return v;
    }
    float f32() {
        const std::uint32_t bits = u32();
        float v;
        std::memcpy(&v, &bits, 4);
        return v;
    }
};

}  // namespace detail

inline void checkpoint_save(const std::string& path, const NetPair& nets,
                            std::span<const float> theta, std::span<const float> theta_v) {
    if (theta.size() != nets.theta_count() || theta_v.size() != nets.theta_v_count())
        throw ConfigError("checkpoint_save: parameter count does not match the network spec");
    std::string buf;
    buf.reserve(24 + 4 * (theta.size() + theta_v.size()));
    buf += "ARLC";
    detail::put_u32(buf, kCheckpointVersion);
    detail::put_u64(buf, spec_hash(nets));
    detail::put_u32(buf, static_cast<std::uint32_t>(theta.size()));
    detail::put_u32(buf, static_cast<std::uint32_t>(theta_v.size()));
    for (float v : theta) detail::put_f32(buf, v);
    for (float v : theta_v) detail::put_f32(buf, v);

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw CheckpointFault(CheckpointError::Io, "cannot open " + path + " for writing");
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw CheckpointFault(CheckpointError::Io, "short write to " + path);
}

struct LoadedCheckpoint {
    std::vector<float> theta;
    std::vector<float> theta_v;
};

inline LoadedCheckpoint checkpoint_load(const std::string& path, const NetPair& expected) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CheckpointFault(CheckpointError::Io, "cannot open " + path);
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

    detail::ByteReader r{data};
    if (!r.need(24)) throw CheckpointFault(CheckpointError::Truncated, "header incomplete");
    if (data.compare(0, 4, "ARLC") != 0)
        throw CheckpointFault(CheckpointError::BadMagic, "not a checkpoint file");
    r.pos = 4;
    const std::uint32_t version = r.u32();
    if (version != kCheckpointVersion)
        throw CheckpointFault(CheckpointError::BadVersion,
                              "format version " + std::to_string(version));
    const std::uint64_t hash = r.u64();
    if (hash != spec_hash(expected))
        throw CheckpointFault(CheckpointError::HashMismatch,
                              "checkpoint was written for a different network spec");
    const std::uint32_t n_theta = r.u32();
    const std::uint32_t n_theta_v = r.u32();
    if (n_theta != expected.theta_count() || n_theta_v != expected.theta_v_count())
        throw CheckpointFault(CheckpointError::CountMismatch, "parameter counts differ");
    if (!r.need(4ull * (n_theta + n_theta_v)))
        throw CheckpointFault(CheckpointError::Truncated, "payload incomplete");

    LoadedCheckpoint out;
    out.theta.resize(n_theta);
    out.theta_v.resize(n_theta_v);
    for (auto& v : out.theta) v = r.f32();
    for (auto& v : out.theta_v) v = r.f32();
    return out;
}

}  // namespace arl
