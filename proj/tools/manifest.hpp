// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace fiedler::cli {

/// Ordered key=value record of one command invocation. The file doubles as
/// a --config input: every key except `command` and `tool_version` is a
/// long option name of that command.
struct RunManifest {
  std::string command;
  std::string tool_version;
  std::vector<std::pair<std::string, std::string>> entries;

  void set(std::string key, std::string value);
  void write(const std::filesystem::path& path) const;
  static RunManifest read(const std::filesystem::path& path);

  /// "--key=value" tokens for the option entries.
  std::vector<std::string> as_arguments() const;
};

}  // namespace fiedler::cli
