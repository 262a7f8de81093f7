#pragma once

// Model checkpoint container.
//
// Layout (all integers little-endian):
//   "GNCK"            4-byte magic
//   u32               container version (1)
//   u64               manifest length in bytes
//   manifest          UTF-8 JSON: model config, seed, graph schema version,
//                     optimizer scalars, and per tensor {name, shape, scheme}
//   payloads          each tensor's values as f64, row-major, manifest order

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "goalnet/models.hpp"
#include "goalnet/optim.hpp"

namespace goalnet {

inline constexpr std::uint32_t kCheckpointVersion = 1;

struct OptimizerScalars {
  AdamOptions adam;  // lr holds the rate in effect when saved
  std::size_t step = 0;
};

struct Checkpoint {
  GraphModel model;
  OptimizerScalars optimizer;
  int graph_schema_version = kGraphSchemaVersion;
  std::size_t epoch = 0;  // epoch whose parameters were saved
};

void write_checkpoint(std::ostream& out, const Checkpoint& ckpt);
void write_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);

// Throws SchemaError on a bad magic, unknown version or inconsistent manifest.
Checkpoint read_checkpoint(std::istream& in);
Checkpoint read_checkpoint(const std::filesystem::path& path);

}  // namespace goalnet
