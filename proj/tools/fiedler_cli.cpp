// SPDX-License-Identifier: Apache-2.0
//
// fiedler: dataset generation, training, evaluation, size sweeps,
// distributed simulation and gradient checking from the command line.
//
// Exit codes: 0 success, 1 usage error, 2 runtime failure.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fiedler/checkpoint.hpp"
#include "fiedler/dataset.hpp"
#include "fiedler/format.hpp"
#include "fiedler/gradcheck.hpp"
#include "fiedler/graph.hpp"
#include "fiedler/model.hpp"
#include "fiedler/rng.hpp"
#include "fiedler/simulator.hpp"
#include "fiedler/spectrum.hpp"
#include "fiedler/trainer.hpp"
#include "fiedler/version.hpp"
#include "manifest.hpp"

namespace fs = std::filesystem;

namespace fiedler::cli {
namespace {

constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;
constexpr double kGradCheckTolerance = 1e-5;

/// Bad flags or inconsistent inputs.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Writes through a sibling temp file, renamed into place on success, so a
// failed command never leaves a partial artifact behind.
void write_atomically(const fs::path& path, const std::function<void(std::ostream&)>& body) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".partial";
  try {
    {
      std::ofstream out(tmp, std::ios::binary);
      if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
      body(out);
      out.flush();
      if (!out) throw std::runtime_error("failed writing " + path.string());
    }
    fs::rename(tmp, path);
  } catch (...) {
    std::error_code ec;
    fs::remove(tmp, ec);
    throw;
  }
}

void guard_overwrite(const fs::path& path, bool force) {
  if (!force && fs::exists(path)) {
    throw UsageError(path.string() + " already exists; pass --force to overwrite");
  }
}

fs::path manifest_path_for(const fs::path& artifact) {
  fs::path p = artifact;
  p += ".manifest";
  return p;
}

/// Records every option of `cmd` (defaults materialized) except --config,
/// --force and --help.
RunManifest manifest_of(const CLI::App& cmd) {
  RunManifest m;
  m.command = cmd.get_name();
  m.tool_version = kVersion;
  for (const CLI::Option* opt : cmd.get_options()) {
    const std::string name = opt->get_single_name();
    if (name == "help" || name == "config" || name == "force") continue;
    std::string value;
    if (opt->get_expected_max() == 0) {
      value = opt->count() > 0 ? "true" : "false";
    } else if (opt->count() > 0) {
      value = opt->results().back();
    } else {
      value = opt->get_default_str();
    }
    m.set(name, value);
  }
  return m;
}

std::vector<int> parse_sizes(const std::string& text) {
  std::vector<int> sizes;
  auto to_int = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw UsageError("bad size '" + s + "' in --sizes");
    }
  };
  if (const auto dots = text.find(".."); dots != std::string::npos) {
    const int lo = to_int(text.substr(0, dots));
    const int hi = to_int(text.substr(dots + 2));
    if (lo > hi) throw UsageError("--sizes range " + text + " is empty");
    for (int n = lo; n <= hi; ++n) sizes.push_back(n);
  } else {
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) sizes.push_back(to_int(item));
  }
  if (sizes.empty()) throw UsageError("--sizes must name at least one graph size");
  for (int n : sizes) {
    if (n < Graph::kMinNodes || n > Graph::kMaxNodes) {
      throw UsageError("size " + std::to_string(n) + " outside [" +
                       std::to_string(Graph::kMinNodes) + ", " + std::to_string(Graph::kMaxNodes) +
                       "]");
    }
  }
  return sizes;
}

struct ModelSelection {
  int rounds = 0;
  ReadoutMode mode = ReadoutMode::local;
};

/// Reconciles --T/--mode/--hidden flags with the checkpoint's metadata.
ModelSelection select_model(const Checkpoint& ckpt, int rounds_flag, const std::string& mode_flag,
                            int hidden_flag) {
  if (hidden_flag > 0 && hidden_flag != ckpt.params.hidden_size) {
    throw UsageError("--hidden " + std::to_string(hidden_flag) + " does not match checkpoint H=" +
                     std::to_string(ckpt.params.hidden_size));
  }
  ModelSelection sel;
  if (!mode_flag.empty()) {
    try {
      sel.mode = parse_readout_mode(mode_flag);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    if (ckpt.meta && ckpt.meta->mode != sel.mode) {
      throw UsageError("--mode " + mode_flag + " does not match checkpoint trained in " +
                       std::string(to_string(ckpt.meta->mode)) + " mode");
    }
  } else if (ckpt.meta) {
    sel.mode = ckpt.meta->mode;
  } else {
    throw UsageError("checkpoint has no metadata; pass --mode");
  }
  if (rounds_flag > 0) {
    sel.rounds = rounds_flag;
  } else if (ckpt.meta) {
    sel.rounds = ckpt.meta->rounds;
  } else {
    throw UsageError("checkpoint has no metadata; pass --T");
  }
  return sel;
}

void add_config_option(CLI::App& cmd) {
  cmd.add_option("--config", "key=value file (e.g. a run manifest); flags override it");
}

// ---------------------------------------------------------------- gen-data

struct GenDataArgs {
  std::size_t count = 1000;
  int n_min = 9;
  int n_max = 11;
  double p_min = 0.2;
  double p_max = 0.6;
  std::uint64_t seed = 0;
  std::string out;
  bool force = false;
};

void setup_gen_data(CLI::App& app, GenDataArgs& a, std::function<void()>& run) {
  auto* cmd = app.add_subcommand("gen-data", "Generate a labeled dataset of connected graphs");
  cmd->add_option("--count", a.count, "Number of graphs")->check(CLI::PositiveNumber);
  cmd->add_option("--n-min", a.n_min, "Smallest node count");
  cmd->add_option("--n-max", a.n_max, "Largest node count");
  cmd->add_option("--p-min", a.p_min, "Smallest edge probability");
  cmd->add_option("--p-max", a.p_max, "Largest edge probability");
  cmd->add_option("--seed", a.seed, "Generator seed")->envname("FIEDLER_SEED");
  cmd->add_option("--out", a.out, "Output dataset path")->required();
  cmd->add_flag("--force", a.force, "Overwrite existing output");
  add_config_option(*cmd);
  cmd->callback([&a, &run, cmd] {
    run = [&a, cmd] {
      GraphGenConfig cfg{a.n_min, a.n_max, a.p_min, a.p_max, a.seed};
      try {
        cfg.validate();
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      const fs::path out = a.out;
      guard_overwrite(out, a.force);
      const auto manifest = manifest_of(*cmd);
      const Dataset data = generate_dataset(cfg, a.count);
      write_atomically(out, [&](std::ostream& os) { write_dataset(os, data); });
      manifest.write(manifest_path_for(out));
      std::cout << "wrote " << data.size() << " graphs to " << out.string() << '\n';
    };
  });
}

// ------------------------------------------------------------------- train

struct TrainArgs {
  std::string train_path;
  std::string val_path;
  int rounds = 4;
  std::string mode = "local";
  int hidden = 32;
  int epochs = 20;
  double lr = 1e-3;
  int batch = 256;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_eps = 1e-8;
  std::uint64_t seed = 0;
  std::string out_dir;
  bool timing = false;
  bool force = false;
};

void setup_train(CLI::App& app, TrainArgs& a, std::function<void()>& run) {
  auto* cmd = app.add_subcommand("train", "Train a model; writes checkpoints and metrics.csv");
  cmd->add_option("--train", a.train_path, "Training dataset")->required();
  cmd->add_option("--val", a.val_path, "Validation dataset")->required();
  cmd->add_option("--T", a.rounds, "Message-passing rounds")->check(CLI::PositiveNumber);
  cmd->add_option("--mode", a.mode, "Readout: local or global")
      ->check(CLI::IsMember({"local", "global"}));
  cmd->add_option("--hidden", a.hidden, "Hidden size")->check(CLI::PositiveNumber);
  cmd->add_option("--epochs", a.epochs, "Epochs")->check(CLI::PositiveNumber);
  cmd->add_option("--lr", a.lr, "Adam learning rate")->check(CLI::NonNegativeNumber);
  cmd->add_option("--batch", a.batch, "Batch size")->check(CLI::PositiveNumber);
  cmd->add_option("--beta1", a.beta1, "Adam beta1")->check(CLI::Range(0.0, 0.999999999));
  cmd->add_option("--beta2", a.beta2, "Adam beta2")->check(CLI::Range(0.0, 0.999999999));
  cmd->add_option("--adam-eps", a.adam_eps, "Adam epsilon")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", a.seed, "Init and shuffle seed")->envname("FIEDLER_SEED");
  cmd->add_option("--out-dir", a.out_dir, "Output directory")->required();
  cmd->add_flag("--timing", a.timing, "Record wall-clock seconds in metrics.csv");
  cmd->add_flag("--force", a.force, "Overwrite an existing run in --out-dir");
  add_config_option(*cmd);
  cmd->callback([&a, &run, cmd] {
    run = [&a, cmd] {
      const fs::path dir = a.out_dir;
      const fs::path final_ckpt = dir / "params.txt";
      const fs::path metrics_csv = dir / "metrics.csv";
      guard_overwrite(final_ckpt, a.force);
      guard_overwrite(metrics_csv, a.force);
      const auto manifest = manifest_of(*cmd);

      const Dataset train_set = load_dataset(a.train_path);
      const Dataset val_set = load_dataset(a.val_path);
      if (train_set.empty() || val_set.empty()) throw UsageError("datasets must be non-empty");

      TrainConfig cfg;
      cfg.rounds = a.rounds;
      cfg.mode = parse_readout_mode(a.mode);
      cfg.hidden = a.hidden;
      cfg.epochs = a.epochs;
      cfg.batch_size = a.batch;
      cfg.adam = {a.lr, a.beta1, a.beta2, a.adam_eps};
      cfg.seed = a.seed;
      std::tie(cfg.n_min, cfg.n_max) = train_set.node_range();
      cfg.record_wall_time = a.timing;
      const CheckpointMeta meta{cfg.mode, cfg.rounds, cfg.n_min, cfg.n_max};

      fs::create_directories(dir);
      char name[32];
      auto observer = [&](const EpochMetrics& m, const ModelParams& params) {
        std::snprintf(name, sizeof name, "epoch_%03d.params", m.epoch);
        write_atomically(dir / name,
                         [&](std::ostream& os) { write_checkpoint(os, {params, meta}); });
        std::fprintf(stderr, "epoch %3d  train_l2 %.6f  val_l1 %.6f  val_l2 %.6f\n", m.epoch,
                     m.train_l2, m.val_l1, m.val_l2);
      };
      const auto result = train(cfg, train_set, val_set, observer);
      write_atomically(final_ckpt,
                       [&](std::ostream& os) { write_checkpoint(os, {result.params, meta}); });
      write_atomically(metrics_csv,
                       [&](std::ostream& os) { write_metrics_csv(os, result.metrics); });
      manifest.write(dir / "manifest.txt");
      const auto& last = result.metrics.back();
      std::cout << "final val_l1=" << format_double(last.val_l1)
                << " val_l2=" << format_double(last.val_l2) << '\n';
    };
  });
}

// -------------------------------------------------------------------- eval

struct EvalArgs {
  std::string checkpoint;
  std::string data;
  int rounds = 0;
  std::string mode;
  int hidden = 0;
  std::string out;
  bool force = false;
};

void setup_eval(CLI::App& app, EvalArgs& a, std::function<void()>& run) {
  auto* cmd = app.add_subcommand("eval", "Mean L1/L2 of a checkpoint on a dataset");
  cmd->add_option("--checkpoint", a.checkpoint, "Parameter checkpoint")->required();
  cmd->add_option("--data", a.data, "Dataset")->required();
  cmd->add_option("--T", a.rounds, "Rounds (default: from checkpoint)");
  cmd->add_option("--mode", a.mode, "Readout mode; must match the checkpoint");
  cmd->add_option("--hidden", a.hidden, "Expected hidden size; must match the checkpoint");
  cmd->add_option("--out", a.out, "CSV output path");
  cmd->add_flag("--force", a.force, "Overwrite existing output");
  add_config_option(*cmd);
  cmd->callback([&a, &run, cmd] {
    run = [&a, cmd] {
      if (!a.out.empty()) guard_overwrite(a.out, a.force);
      const auto manifest = manifest_of(*cmd);
      const Checkpoint ckpt = load_checkpoint(a.checkpoint);
      const auto sel = select_model(ckpt, a.rounds, a.mode, a.hidden);
      const Dataset data = load_dataset(a.data);
      const auto res = evaluate(ckpt.params, data, sel.rounds, sel.mode);
      std::cout << "mean_l1=" << format_double(res.mean_l1)
                << " mean_l2=" << format_double(res.mean_l2) << " count=" << data.size() << '\n';
      if (!a.out.empty()) {
        write_atomically(a.out, [&](std::ostream& os) {
          os << "mean_l1,mean_l2,count\n"
             << format_double(res.mean_l1) << ',' << format_double(res.mean_l2) << ','
             << data.size() << '\n';
        });
        manifest.write(manifest_path_for(a.out));
      }
    };
  });
}

// ------------------------------------------------------------------- sweep

struct SweepArgs {
  std::string checkpoint;
  std::string sizes = "7..13";
  std::size_t per_size = 1000;
  double p_min = 0.2;
  double p_max = 0.6;
  std::uint64_t seed = 0;
  int rounds = 0;
  int train_n_min = 0;
  int train_n_max = 0;
  std::string out;
  bool force = false;
};

void setup_sweep(CLI::App& app, SweepArgs& a, std::function<void()>& run) {
  auto* cmd = app.add_subcommand("sweep", "Mean L1 per graph size (generalization)");
  cmd->add_option("--checkpoint", a.checkpoint, "Parameter checkpoint")->required();
  cmd->add_option("--sizes", a.sizes, "Sizes: 'lo..hi' or comma list");
  cmd->add_option("--per-size", a.per_size, "Graphs per size")->check(CLI::PositiveNumber);
  cmd->add_option("--p-min", a.p_min, "Smallest edge probability");
  cmd->add_option("--p-max", a.p_max, "Largest edge probability");
  cmd->add_option("--seed", a.seed, "Generator seed")->envname("FIEDLER_SEED");
  cmd->add_option("--T", a.rounds, "Rounds (default: from checkpoint)");
  cmd->add_option("--train-n-min", a.train_n_min, "Training range low end (default: checkpoint)");
  cmd->add_option("--train-n-max", a.train_n_max, "Training range high end (default: checkpoint)");
  cmd->add_option("--out", a.out, "CSV output path")->required();
  cmd->add_flag("--force", a.force, "Overwrite existing output");
  add_config_option(*cmd);
  cmd->callback([&a, &run, cmd] {
    run = [&a, cmd] {
      const auto sizes = parse_sizes(a.sizes);
      GraphGenConfig base{Graph::kMinNodes, Graph::kMaxNodes, a.p_min, a.p_max, a.seed};
      try {
        base.validate();
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      guard_overwrite(a.out, a.force);
      const auto manifest = manifest_of(*cmd);
      const Checkpoint ckpt = load_checkpoint(a.checkpoint);
      const auto sel = select_model(ckpt, a.rounds, "", 0);
      std::pair<int, int> range{a.train_n_min, a.train_n_max};
      if (ckpt.meta) {
        if (range.first == 0) range.first = ckpt.meta->n_min;
        if (range.second == 0) range.second = ckpt.meta->n_max;
      }
      if (range.first == 0 || range.second == 0) {
        throw UsageError("training size range unknown; pass --train-n-min/--train-n-max");
      }
      const auto rows =
          generalization_sweep(ckpt.params, sizes, a.per_size, base, sel.rounds, sel.mode);
      write_atomically(a.out, [&](std::ostream& os) { write_sweep_csv(os, rows, range); });
      manifest.write(manifest_path_for(a.out));
      write_sweep_csv(std::cout, rows, range);
    };
  });
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  std::string checkpoint;
  int nodes = 8;
  std::string edges;
  double p_min = 0.2;
  double p_max = 0.6;
  std::uint64_t seed = 0;
  int rounds = 0;
  std::string drop_edges;
  int drop_from = 1;
  std::string trace;
  std::string out;
  bool force = false;
};

void setup_simulate(CLI::App& app, SimulateArgs& a, std::function<void()>& run) {
  auto* cmd = app.add_subcommand("simulate", "Run a local-readout model as message-passing agents");
  cmd->add_option("--checkpoint", a.checkpoint, "Local-mode checkpoint")->required();
  cmd->add_option("--nodes", a.nodes, "Node count");
  cmd->add_option("--edges", a.edges, "Explicit edge list 'i-j,...' (default: random graph)");
  cmd->add_option("--p-min", a.p_min, "Random graph: smallest edge probability");
  cmd->add_option("--p-max", a.p_max, "Random graph: largest edge probability");
  cmd->add_option("--seed", a.seed, "Random graph seed")->envname("FIEDLER_SEED");
  cmd->add_option("--T", a.rounds, "Rounds (default: from checkpoint)");
  cmd->add_option("--drop-edges", a.drop_edges, "Edges that stop delivering, 'i-j,...'");
  cmd->add_option("--drop-from", a.drop_from, "First round in which dropped edges are silent")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--trace", a.trace, "Message trace CSV path");
  cmd->add_option("--out", a.out, "Report CSV path");
  cmd->add_flag("--force", a.force, "Overwrite existing output");
  add_config_option(*cmd);
  cmd->callback([&a, &run, cmd] {
    run = [&a, cmd] {
      if (!a.out.empty()) guard_overwrite(a.out, a.force);
      if (!a.trace.empty()) guard_overwrite(a.trace, a.force);
      const auto manifest = manifest_of(*cmd);
      const Checkpoint ckpt = load_checkpoint(a.checkpoint);
      if (ckpt.meta && ckpt.meta->mode != ReadoutMode::local) {
        throw UsageError("simulate needs a local-readout checkpoint; this one is global");
      }
      const auto sel = select_model(ckpt, a.rounds, "local", 0);

      std::optional<Graph> g;
      try {
        if (a.edges.empty()) {
          GraphGenConfig cfg{a.nodes, a.nodes, a.p_min, a.p_max, a.seed};
          cfg.validate();
          g = generate_connected_graph(cfg, 0);
        } else {
          g.emplace(a.nodes, parse_edge_list(a.edges));
        }
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      std::vector<Edge> drops;
      try {
        drops = parse_edge_list(a.drop_edges);
      } catch (const std::runtime_error& e) {
        throw UsageError(e.what());
      }

      SimulationResult sim;
      try {
        sim = run_simulation_with_drop(ckpt.params, *g, sel.rounds, drops, a.drop_from);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      const EstimateReport report{algebraic_connectivity(*g), sim.estimates};

      std::cout << "graph n=" << g->num_nodes() << " edges=" << format_edge_list(g->edges())
                << " T=" << sel.rounds << '\n';
      render_report(std::cout, report);
      if (!a.out.empty()) {
        write_atomically(a.out, [&](std::ostream& os) { write_report_csv(os, report); });
        manifest.write(manifest_path_for(a.out));
      }
      if (!a.trace.empty()) {
        write_atomically(a.trace, [&](std::ostream& os) { write_trace_csv(os, sim.trace); });
        if (a.out.empty()) manifest.write(manifest_path_for(a.trace));
      }
    };
  });
}

// --------------------------------------------------------------- gradcheck

struct GradCheckArgs {
  int instances = 5;
  int hidden = 8;
  double epsilon = 1e-5;
  std::uint64_t seed = 0;
  bool corrupt = false;
};

int gradcheck_exit = 0;

void setup_gradcheck(CLI::App& app, GradCheckArgs& a, std::function<void()>& run) {
  auto* cmd = app.add_subcommand("gradcheck", "Compare backprop against finite differences");
  cmd->add_option("--instances", a.instances, "Instances per mode")->check(CLI::PositiveNumber);
  cmd->add_option("--hidden", a.hidden, "Hidden size")->check(CLI::PositiveNumber);
  cmd->add_option("--epsilon", a.epsilon, "Central-difference step")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", a.seed, "Instance seed")->envname("FIEDLER_SEED");
  cmd->add_flag("--corrupt", a.corrupt, "Add +1 to one analytic gradient entry (self-test)");
  add_config_option(*cmd);
  cmd->callback([&a, &run] {
    run = [&a] {
      double overall = 0.0;
      for (ReadoutMode mode : {ReadoutMode::local, ReadoutMode::global}) {
        double worst = 0.0;
        for (int i = 0; i < a.instances; ++i) {
          const auto stream = static_cast<std::uint64_t>(i);
          Rng rng(a.seed, stream);
          const int rounds = rng.between(2, 3);
          GraphGenConfig cfg{4, 6, 0.2, 0.6, a.seed};
          const Graph g = generate_connected_graph(cfg, stream);
          const ModelParams params = init_params(a.hidden, a.seed * 1000 + stream);
          GradCheckOptions opts;
          opts.epsilon = a.epsilon;
          if (a.corrupt) opts.tamper = [](Gradients& grad) { grad.message(0, 0) += 1.0; };
          const auto rep = grad_check(params, g, rounds, mode, opts);
          std::printf("%-6s instance %d  n=%d T=%d  max_rel_error %.3e  (%s[%zu])\n",
                      std::string(to_string(mode)).c_str(), i, g.num_nodes(), rounds,
                      rep.max_relative_error, rep.worst_tensor.c_str(), rep.worst_index);
          worst = std::max(worst, rep.max_relative_error);
        }
        std::printf("%-6s max_rel_error %.3e  %s\n", std::string(to_string(mode)).c_str(), worst,
                    worst <= kGradCheckTolerance ? "PASS" : "FAIL");
        overall = std::max(overall, worst);
      }
      std::printf("overall max_rel_error %.3e (tolerance %.0e)  %s\n", overall,
                  kGradCheckTolerance, overall <= kGradCheckTolerance ? "PASS" : "FAIL");
      gradcheck_exit = overall <= kGradCheckTolerance ? 0 : kExitRuntime;
    };
  });
}

// Splices a --config file's entries in front of the user's own flags for
// that subcommand, so explicit flags win (options take the last value).
std::vector<std::string> expand_config(std::vector<std::string> args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    std::string path;
    std::size_t consumed = 0;
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      consumed = 2;
    } else if (args[i].starts_with("--config=")) {
      path = args[i].substr(9);
      consumed = 1;
    } else {
      continue;
    }
    const RunManifest m = RunManifest::read(path);
    // The subcommand is the first token that does not start with '-'.
    std::size_t sub = 1;
    while (sub < args.size() && args[sub].starts_with("-")) ++sub;
    if (sub >= i) throw UsageError("--config must follow the subcommand");
    if (!m.command.empty() && m.command != args[sub]) {
      throw UsageError("config file is for '" + m.command + "', not '" + args[sub] + "'");
    }
    args.erase(args.begin() + static_cast<std::ptrdiff_t>(i),
               args.begin() + static_cast<std::ptrdiff_t>(i + consumed));
    const auto extra = m.as_arguments();
    args.insert(args.begin() + static_cast<std::ptrdiff_t>(sub + 1), extra.begin(), extra.end());
    break;
  }
  return args;
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Learned algebraic-connectivity estimation with message-passing networks"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.option_defaults()->always_capture_default();

  std::function<void()> run;
  GenDataArgs gen_args;
  TrainArgs train_args;
  EvalArgs eval_args;
  SweepArgs sweep_args;
  SimulateArgs sim_args;
  GradCheckArgs grad_args;
  setup_gen_data(app, gen_args, run);
  setup_train(app, train_args, run);
  setup_eval(app, eval_args, run);
  setup_sweep(app, sweep_args, run);
  setup_simulate(app, sim_args, run);
  setup_gradcheck(app, grad_args, run);

  try {
    std::vector<std::string> args(argv, argv + argc);
    args = expand_config(std::move(args));
    // CLI11 consumes the vector from the back.
    std::vector<std::string> reversed(args.rbegin(), args.rend() - 1);
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "fiedler: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    run();
  } catch (const UsageError& e) {
    std::cerr << "fiedler: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "fiedler: " << e.what() << '\n';
    return kExitRuntime;
  }
  return gradcheck_exit;
}

}  // namespace
}  // namespace fiedler::cli

int main(int argc, char** argv) { return fiedler::cli::run_cli(argc, argv); }
