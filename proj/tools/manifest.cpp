// SPDX-License-Identifier: Apache-2.0
#include "manifest.hpp"

#include <fstream>
#include <stdexcept>

namespace fiedler::cli {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

void RunManifest::set(std::string key, std::string value) {
  for (auto& [k, v] : entries) {
    if (k == key) {
      v = std::move(value);
      return;
    }
  }
  entries.emplace_back(std::move(key), std::move(value));
}

void RunManifest::write(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write manifest " + path.string());
  out << "# fiedler run manifest; replay with: fiedler " << command << " --config <this file>\n";
  out << "command=" << command << '\n';
  out << "tool_version=" << tool_version << '\n';
  for (const auto& [k, v] : entries) out << k << '=' << v << '\n';
  if (!out) throw std::runtime_error("failed writing manifest " + path.string());
}

RunManifest RunManifest::read(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open config file " + path.string());
  RunManifest m;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                               ": expected key=value");
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key == "command") {
      m.command = std::move(value);
    } else if (key == "tool_version") {
      m.tool_version = std::move(value);
    } else {
      m.set(std::move(key), std::move(value));
    }
  }
  return m;
}

std::vector<std::string> RunManifest::as_arguments() const {
  std::vector<std::string> args;
  for (const auto& [k, v] : entries) args.push_back("--" + k + "=" + v);
  return args;
}

}  // namespace fiedler::cli
