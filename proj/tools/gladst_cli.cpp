// gladst: train, evaluate and apply the teacher/two-student graph anomaly detector.
//
// Exit codes: 0 success, 1 unexpected failure, 2 configuration or shape error,
// 3 data error, 4 numeric divergence, 5 undefined AUC.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "gladst/checkpoint.hpp"
#include "gladst/crossval.hpp"
#include "gladst/error.hpp"
#include "gladst/export.hpp"
#include "gladst/fingerprint.hpp"
#include "gladst/kernels.hpp"
#include "gladst/scoring.hpp"
#include "gladst/synth.hpp"
#include "gladst/trainer.hpp"
#include "gladst/tudataset.hpp"

namespace fs = std::filesystem;
using namespace gladst;

namespace {

enum Exit { ok = 0, unexpected = 1, config_exit = 2, data_exit = 3, numeric_exit = 4, auc_exit = 5 };

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::config:
    case ErrorKind::shape:
      return config_exit;
    case ErrorKind::data:
      return data_exit;
    case ErrorKind::numeric:
      return numeric_exit;
    case ErrorKind::undefined_auc:
      return auc_exit;
  }
  return unexpected;
}

struct DataArgs {
  std::string dir;
  std::string name;
  int anomaly_label = 1;

  void add(CLI::App& app, bool required = true) {
    auto* d = app.add_option("--data", dir, "TUDataset directory");
    if (required) d->required();
    app.add_option("--name", name, "dataset file prefix (default: directory name)");
    app.add_option("--anomaly-label", anomaly_label, "graph label treated as anomalous")
        ->check(CLI::IsMember({0, 1}));
  }

  GraphDataset load() const {
    const fs::path path(dir);
    if (!fs::is_directory(path)) throw IoError("dataset directory not found: " + path.string());
    auto ds = parse_tudataset(path, resolved_name(), anomaly_label);
    if (ds.empty()) throw InsufficientDataError("dataset " + path.string() + " contains no graphs");
    return ds;
  }

  std::string resolved_name() const {
    if (!name.empty()) return name;
    // A lone <prefix>_graph_indicator.txt names the dataset.
    const std::string suffix = "_graph_indicator.txt";
    std::vector<std::string> prefixes;
    std::error_code ec;
    for (const auto& entry : fs::directory_iterator(dir, ec)) {
      const auto file = entry.path().filename().string();
      if (file.size() > suffix.size() && file.ends_with(suffix)) {
        prefixes.push_back(file.substr(0, file.size() - suffix.size()));
      }
    }
    if (prefixes.size() == 1) return prefixes.front();
    fs::path p = fs::path(dir).lexically_normal();
    if (p.filename().empty()) p = p.parent_path();  // trailing slash
    return p.filename().string();
  }
};

struct TrainArgs {
  TrainConfig config;
  std::string optimizer = "adam";
  std::vector<std::string> ablations;

  void add(CLI::App& app) {
    app.add_option("--seed", config.seed, "training seed");
    app.add_option("--epochs", config.epochs, "epochs per network");
    app.add_option("--lr", config.optimizer.learning_rate, "learning rate");
    app.add_option("--optimizer", optimizer, "adam or sgd")->check(CLI::IsMember({"adam", "sgd"}));
    app.add_option("--eps-teacher", config.eps_teacher, "teacher loss stabilizer");
    app.add_option("--ablation", ablations, "untrained-teacher, no-node-loss, no-graph-loss")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll)
        ->check(CLI::IsMember({"untrained-teacher", "no-node-loss", "no-graph-loss"}));
    app.add_flag("--deterministic", config.deterministic, "fixed-order reductions for bitwise reproducibility");
    app.add_option("--hidden", config.shape.hidden, "first layer width");
    app.add_option("--output", config.shape.output, "representation width");
  }

  TrainConfig resolve() {
    config.optimizer.kind = parse_optimizer(optimizer);
    for (const auto& a : ablations) {
      if (a == "untrained-teacher") config.ablation.untrained_teacher = true;
      if (a == "no-node-loss") config.ablation.no_node_loss = true;
      if (a == "no-graph-loss") config.ablation.no_graph_loss = true;
    }
    config.validate();
    return config;
  }
};

// Parsed out of argv by expand_config() before CLI11 sees the arguments; the
// option exists so that help lists it.
void add_config_option(CLI::App& app) {
  static std::string unused;
  app.add_option("--config", unused, "flat key=value file; flags override it");
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

// Rewrites `<sub> ... --config FILE ...` as `<sub> --k1=v1 --k2=v2 ... ...`.
// Options take their last value, so explicit flags win over file entries.
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::vector<std::string> files;
  for (std::size_t i = 0; i < args.size();) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      files.push_back(args[i + 1]);
      args.erase(args.begin() + static_cast<long>(i), args.begin() + static_cast<long>(i) + 2);
    } else if (args[i].starts_with("--config=")) {
      files.push_back(args[i].substr(9));
      args.erase(args.begin() + static_cast<long>(i));
    } else {
      ++i;
    }
  }
  std::vector<std::string> from_files;
  for (const auto& file : files) {
    std::ifstream in(file);
    if (!in) throw ConfigError("cannot read config file " + file);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      line = trim(line);
      if (line.empty() || line.front() == '#') continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos || trim(line.substr(0, eq)).empty()) {
        throw ConfigError(file + ":" + std::to_string(line_no) + ": expected key=value");
      }
      std::string key = trim(line.substr(0, eq));
      std::replace(key.begin(), key.end(), '_', '-');
      from_files.push_back("--" + key + "=" + trim(line.substr(eq + 1)));
    }
  }
  const auto at = args.empty() ? args.end() : args.begin() + 1;
  args.insert(at, from_files.begin(), from_files.end());
  return args;
}

struct Common {
  int threads = 0;
  bool verbose = false;

  void add(CLI::App& app) {
    app.add_option("--threads", threads, "worker threads (default: all cores)")->envname("GLADST_THREADS");
    app.add_flag("-v,--verbose", verbose, "print per-epoch losses");
    add_config_option(app);
  }

  EpochCallback printer() const {
    if (!verbose) return {};
    return [](std::string_view phase, int epoch, double loss) {
      std::printf("%.*s epoch %d loss %s\n", static_cast<int>(phase.size()), phase.data(), epoch,
                  format_double(loss).c_str());
    };
  }
};

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

std::string train_text(const TrainConfig& c, const GraphDataset& ds) {
  return canonical_string(c) + "dataset=" + ds.name + "\nanomaly_label=" + std::to_string(ds.anomaly_label) + "\n";
}

// Config echo for artifacts whose own format leaves no room for it.
void write_sidecar(const fs::path& artifact, const std::string& config_text) {
  write_text(artifact.string() + ".config", "fingerprint=" + hex64(fnv1a(config_text)) + "\n" + config_text);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graph-level anomaly detection with a teacher and two students"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  Common common;
  DataArgs data;
  TrainArgs train_args;

  // train
  auto* train = app.add_subcommand("train", "train teacher and both students on a dataset");
  std::string ckpt_out;
  data.add(*train);
  train_args.add(*train);
  common.add(*train);
  train->add_option("--out", ckpt_out, "checkpoint path")->required();

  // eval
  auto* eval = app.add_subcommand("eval", "stratified k-fold evaluation");
  std::string report_out = "report.json";
  std::string fold_ckpt_dir;
  EvalOptions eval_opts;
  data.add(*eval);
  train_args.add(*eval);
  common.add(*eval);
  eval->add_option("--folds", eval_opts.folds, "number of folds");
  eval->add_option("--split-seed", eval_opts.split_seed, "seed for fold assignment and subsampling");
  eval->add_option("--alpha", eval_opts.contamination.alpha, "fraction of test anomalies kept")
      ->check(CLI::Range(0.0, 1.0));
  eval->add_option("--beta", eval_opts.contamination.beta, "fraction of training anomalies kept")
      ->check(CLI::Range(0.0, 1.0));
  eval->add_option("--out", report_out, "report path");
  eval->add_option("--checkpoint-dir", fold_ckpt_dir, "also write fold<k>.ckpt here");

  // score
  auto* score = app.add_subcommand("score", "score every graph of a dataset with a checkpoint");
  std::string ckpt_in, score_out;
  data.add(*score);
  common.add(*score);
  score->add_option("--checkpoint", ckpt_in, "checkpoint path")->required();
  score->add_option("--out", score_out, "scores path (default: standard output)");

  // export
  auto* exp = app.add_subcommand("export", "write graph-level representations of all three networks");
  std::string export_out;
  data.add(*exp);
  common.add(*exp);
  exp->add_option("--checkpoint", ckpt_in, "checkpoint path")->required();
  exp->add_option("--out", export_out, "TSV path")->required();

  // synth
  auto* synth = app.add_subcommand("synth", "generate a synthetic TUDataset directory");
  SynthSpec spec;
  std::string motif = to_string(spec.base_motif), kind = to_string(spec.anomaly_kind), synth_out;
  synth->add_option("--out", synth_out, "output directory")->required();
  synth->add_option("--name", spec.name, "dataset file prefix");
  synth->add_option("--base-count", spec.base_count, "normal graphs");
  synth->add_option("--anomaly-count", spec.anomaly_count, "planted anomalies");
  synth->add_option("--base-motif", motif, "single_ring or tree");
  synth->add_option("--anomaly-kind", kind, "node_property or graph_property");
  synth->add_option("--min-nodes", spec.min_nodes, "smallest graph");
  synth->add_option("--max-nodes", spec.max_nodes, "largest graph");
  synth->add_option("--perturb-scale", spec.perturb_scale, "feature noise for node_property anomalies");
  synth->add_option("--seed", spec.seed, "generator seed");
  synth->add_option("--anomaly-label", spec.anomaly_label, "label of planted anomalies");
  add_config_option(*synth);

  try {
    auto args = expand_config(argc, argv);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const ConfigError& e) {
    std::cerr << "gladst: " << e.what() << "\n";
    return config_exit;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "gladst: " << e.what() << "\n";
    return config_exit;
  }

  try {
    if (common.threads > 0) set_thread_count(common.threads);

    if (*synth) {
      spec.base_motif = parse_base_motif(motif);
      spec.anomaly_kind = parse_anomaly_kind(kind);
      const auto ds = generate_synthetic(spec);
      write_tudataset(ds, synth_out);
      const std::string echo = describe(spec);
      write_text(fs::path(synth_out) / (spec.name + "_spec.txt"), echo);
      std::cout << echo;
    } else if (*train) {
      const auto config = train_args.resolve();
      const auto ds = data.load();
      const auto models = train_all(ds, config, common.printer());
      save_checkpoint(ckpt_out, models, train_text(config, ds));
      std::cout << "fingerprint " << hex64(models.config_fingerprint) << "\n";
    } else if (*eval) {
      const auto config = train_args.resolve();
      const auto ds = data.load();
      eval_opts.on_epoch = common.printer();
      if (!fold_ckpt_dir.empty()) {
        fs::create_directories(fold_ckpt_dir);
        eval_opts.on_fold_models = [&](int fold, const ModelTriple& m) {
          save_checkpoint(fs::path(fold_ckpt_dir) / ("fold" + std::to_string(fold) + ".ckpt"), m,
                          train_text(config, ds) + "fold=" + std::to_string(fold) + "\n");
        };
      }
      const auto report = cross_validate(ds, config, eval_opts);
      write_report(report_out, report);
      std::cout << format_table_row(report) << "\n";
    } else if (*score || *exp) {
      const auto ckpt = load_checkpoint(ckpt_in);
      const auto ds = data.load();
      if (ds.feature_dim != ckpt.models.feature_dim) {
        throw ShapeError("checkpoint feature_dim " + std::to_string(ckpt.models.feature_dim) +
                         " does not match dataset feature_dim " + std::to_string(ds.feature_dim));
      }
      const std::string echo = ckpt.config_text + "scored_dataset=" + ds.name + "\nscored_anomaly_label=" +
                               std::to_string(ds.anomaly_label) + "\n";
      if (*exp) {
        export_representations(ds, ckpt.models, fs::path(export_out));
        write_sidecar(export_out, echo);
      } else {
        std::ostringstream os;
        for (const auto& s : score_dataset(ds, ckpt.models)) {
          os << s.graph_index << '\t' << format_double(s.s_hat) << '\t' << format_double(s.s_check) << '\t'
             << format_double(s.score) << '\t' << s.label << '\n';
        }
        if (score_out.empty()) {
          std::cout << os.str();
        } else {
          write_text(score_out, os.str());
          write_sidecar(score_out, echo);
        }
      }
    }
  } catch (const DivergenceError& e) {
    std::cerr << "gladst: " << e.what() << "\n";
    return numeric_exit;
  } catch (const Error& e) {
    std::cerr << "gladst: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const fs::filesystem_error& e) {
    std::cerr << "gladst: " << e.what() << "\n";
    return data_exit;
  } catch (const std::exception& e) {
    std::cerr << "gladst: unexpected failure: " << e.what() << "\n";
    return unexpected;
  }
  return ok;
}
