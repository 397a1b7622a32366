// SPDX-License-Identifier: Apache-2.0
#include "fiedler/checkpoint.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "fiedler/format.hpp"

namespace fiedler {

namespace {

constexpr std::string_view kMagic = "fiedler-params";
constexpr std::string_view kVersion = "v1";

[[noreturn]] void malformed(const std::string& what) {
  throw std::runtime_error("malformed checkpoint: " + what);
}

std::string next_line(std::istream& in, const char* expecting) {
  std::string line;
  if (!std::getline(in, line)) malformed(std::string("unexpected end of input, expecting ") + expecting);
  return line;
}

// Parses "key=<int>" from a token.
int int_field(const std::string& token, std::string_view key) {
  if (token.size() <= key.size() + 1 || token.compare(0, key.size(), key) != 0 ||
      token[key.size()] != '=') {
    malformed("expected " + std::string(key) + "=<int>, got '" + token + "'");
  }
  int value = 0;
  const char* first = token.data() + key.size() + 1;
  const char* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) malformed("bad integer in '" + token + "'");
  return value;
}

}  // namespace

void write_checkpoint(std::ostream& out, const Checkpoint& ckpt) {
  out << kMagic << ' ' << kVersion << " H=" << ckpt.params.hidden_size << '\n';
  if (ckpt.meta) {
    out << "meta mode=" << to_string(ckpt.meta->mode) << " T=" << ckpt.meta->rounds
        << " n_min=" << ckpt.meta->n_min << " n_max=" << ckpt.meta->n_max << '\n';
  }
  for (const auto& t : tensors(ckpt.params)) {
    out << "tensor " << t.name << ' ' << t.rows << ' ' << t.cols << '\n';
    // Vectors (cols == 1) are written on a single line.
    const Eigen::Index per_line = t.cols == 1 ? t.rows : t.cols;
    for (std::size_t k = 0; k < t.values.size(); ++k) {
      out << format_double(t.values[k]);
      out << ((static_cast<Eigen::Index>(k + 1) % per_line == 0) ? '\n' : ' ');
    }
  }
  out << "end\n";
}

Checkpoint read_checkpoint(std::istream& in) {
  Checkpoint ckpt;
  {
    std::istringstream header(next_line(in, "header"));
    std::string magic, version, hidden;
    header >> magic >> version >> hidden;
    if (magic != kMagic) malformed("bad magic '" + magic + "'");
    if (version != kVersion) malformed("unsupported version '" + version + "'");
    const int h = int_field(hidden, "H");
    if (h < 1) malformed("hidden size must be >= 1");
    ckpt.params = ModelParams::zeros(h);
  }

  auto refs = tensors(ckpt.params);
  std::size_t index = 0;
  std::string line = next_line(in, "tensor");
  if (line.starts_with("meta ")) {
    std::istringstream meta(line.substr(5));
    std::string mode, rounds, n_min, n_max;
    meta >> mode >> rounds >> n_min >> n_max;
    if (!mode.starts_with("mode=")) malformed("expected mode=<local|global>");
    CheckpointMeta m;
    try {
      m.mode = parse_readout_mode(mode.substr(5));
    } catch (const std::invalid_argument& e) {
      malformed(e.what());
    }
    m.rounds = int_field(rounds, "T");
    m.n_min = int_field(n_min, "n_min");
    m.n_max = int_field(n_max, "n_max");
    ckpt.meta = m;
    line = next_line(in, "tensor");
  }

  while (line != "end") {
    if (index == refs.size()) malformed("more tensors than expected");
    auto& ref = refs[index];
    std::istringstream head(line);
    std::string keyword, name;
    Eigen::Index rows = -1, cols = -1;
    head >> keyword >> name >> rows >> cols;
    if (keyword != "tensor") malformed("expected 'tensor', got '" + keyword + "'");
    if (name != ref.name) malformed("expected tensor " + std::string(ref.name) + ", got " + name);
    if (rows != ref.rows || cols != ref.cols) malformed("shape mismatch for " + name);
    for (double& x : ref.values) {
      std::string token;
      if (!(in >> token)) malformed("truncated values for " + name);
      x = parse_double(token);
    }
    in >> std::ws;
    ++index;
    line = next_line(in, "tensor or end");
  }
  if (index != refs.size()) malformed("missing tensors");
  return ckpt;
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_checkpoint(out, ckpt);
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open checkpoint " + path.string());
  return read_checkpoint(in);
}

}  // namespace fiedler
