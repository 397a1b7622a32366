// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>

#include "fiedler/model.hpp"

namespace fiedler {

/// Training context stored next to the weights so that eval/sweep/simulate
/// can reject mismatched usage.
struct CheckpointMeta {
  ReadoutMode mode = ReadoutMode::local;
  int rounds = 1;
  int n_min = 0;
  int n_max = 0;

  bool operator==(const CheckpointMeta&) const = default;
};

struct Checkpoint {
  ModelParams params;
  std::optional<CheckpointMeta> meta;
};

/// Text checkpoint:
///
///   fiedler-params v1 H=<H>
///   meta mode=<local|global> T=<T> n_min=<a> n_max=<b>      (optional)
///   tensor <name> <rows> <cols>
///   <row-major values, one matrix row per line, %.17g>
///   ...
///   end
///
/// Round trips are bit-exact.
void write_checkpoint(std::ostream& out, const Checkpoint& ckpt);
/// Throws std::runtime_error on malformed input.
Checkpoint read_checkpoint(std::istream& in);

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace fiedler
