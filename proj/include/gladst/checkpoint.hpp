#pragma once

#include <filesystem>
#include <string>

#include "gladst/trainer.hpp"

namespace gladst {

/// On-disk layout (all integers and floats little-endian):
///
///   magic        8 bytes  "GLADST1\n"
///   version      u32      1
///   feature_dim  u32
///   fingerprint  u64
///   config_len   u32, then config_len bytes of key=value text (resolved run config)
///   3 × params   teacher, student A, student B; each is two matrices
///                (theta0, theta1) stored as u32 rows, u32 cols, rows*cols f64 row-major
///   3 × curve    teacher, student A, student B; each u64 length then f64 values
struct Checkpoint {
  ModelTriple models;
  std::string config_text;
};

inline constexpr char kCheckpointMagic[8] = {'G', 'L', 'A', 'D', 'S', 'T', '1', '\n'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

void save_checkpoint(const std::filesystem::path& path, const ModelTriple& models,
                     const std::string& config_text);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace gladst
