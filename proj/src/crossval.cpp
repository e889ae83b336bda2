#include "gladst/crossval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "gladst/error.hpp"
#include "gladst/fingerprint.hpp"
#include "gladst/rng.hpp"

namespace gladst {
namespace {

std::uint64_t mix(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  std::string key = std::to_string(seed) + ':' + std::to_string(a) + ':' + std::to_string(b);
  return fnv1a(key);
}

std::string eval_text(const GraphDataset& ds, const TrainConfig& config, const EvalOptions& o) {
  std::ostringstream os;
  os << canonical_string(config) << "dataset=" << ds.name << '\n'
     << "anomaly_label=" << ds.anomaly_label << '\n'
     << "folds=" << o.folds << '\n'
     << "split_seed=" << o.split_seed << '\n'
     << "alpha=" << format_double(o.contamination.alpha) << '\n'
     << "beta=" << format_double(o.contamination.beta) << '\n';
  return os.str();
}

}  // namespace

std::vector<Fold> stratified_kfold(const GraphDataset& dataset, int k, std::uint64_t seed) {
  if (k < 2) throw ConfigError("cross-validation needs at least 2 folds, got " + std::to_string(k));
  std::vector<std::size_t> normal, abnormal;
  for (std::size_t i = 0; i < dataset.size(); ++i) (dataset.is_anomalous(i) ? abnormal : normal).push_back(i);
  for (const auto* cls : {&normal, &abnormal}) {
    if (cls->size() < static_cast<std::size_t>(k)) {
      throw StratificationError("cannot stratify into " + std::to_string(k) + " folds: a class has only " +
                                std::to_string(cls->size()) + " graphs (" + std::to_string(normal.size()) +
                                " normal, " + std::to_string(abnormal.size()) + " abnormal)");
    }
  }
  Rng rng(seed);
  rng.shuffle(normal);
  rng.shuffle(abnormal);

  std::vector<int> part(dataset.size());
  for (const auto* cls : {&normal, &abnormal}) {
    for (std::size_t j = 0; j < cls->size(); ++j) part[(*cls)[j]] = static_cast<int>(j % static_cast<std::size_t>(k));
  }
  std::vector<Fold> folds(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    for (int f = 0; f < k; ++f) (part[i] == f ? folds[f].test : folds[f].train).push_back(i);
  }
  return folds;
}

std::vector<std::size_t> subsample_anomalies(const GraphDataset& dataset, const std::vector<std::size_t>& indices,
                                             double fraction, std::uint64_t seed) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) {
    throw ConfigError("contamination fraction must lie in [0, 1], got " + format_double(fraction));
  }
  std::vector<std::size_t> anomalies;
  for (auto i : indices) {
    if (dataset.is_anomalous(i)) anomalies.push_back(i);
  }
  const auto keep = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(anomalies.size())));
  Rng rng(seed);
  rng.shuffle(anomalies);
  anomalies.resize(keep);
  std::sort(anomalies.begin(), anomalies.end());

  std::vector<std::size_t> out;
  out.reserve(indices.size());
  for (auto i : indices) {
    if (!dataset.is_anomalous(i) || std::binary_search(anomalies.begin(), anomalies.end(), i)) out.push_back(i);
  }
  return out;
}

EvalReport cross_validate(const GraphDataset& dataset, const TrainConfig& config, const EvalOptions& options) {
  config.validate();
  const auto folds = stratified_kfold(dataset, options.folds, options.split_seed);

  EvalReport report;
  report.dataset = dataset.name;
  report.anomaly_label = dataset.anomaly_label;
  report.config_text = eval_text(dataset, config, options);
  report.config_fingerprint = fnv1a(report.config_text);

  for (std::size_t f = 0; f < folds.size(); ++f) {
    const auto train_idx = subsample_anomalies(dataset, folds[f].train, options.contamination.beta,
                                               mix(options.split_seed, f, 'b'));
    const auto test_idx = subsample_anomalies(dataset, folds[f].test, options.contamination.alpha,
                                              mix(options.split_seed, f, 'a'));
    const auto train = dataset.subset(train_idx);
    if (train.count_anomalous() == 0) {
      throw InsufficientDataError("fold " + std::to_string(f) +
                                  ": training split has no anomalies left for student B (beta=" +
                                  format_double(options.contamination.beta) + ")");
    }
    const auto models = train_all(train, config, options.on_epoch);
    if (options.on_fold_models) options.on_fold_models(static_cast<int>(f), models);

    auto scored = score_dataset(dataset.subset(test_idx), models);
    for (auto& s : scored) s.graph_index = test_idx[s.graph_index];
    report.fold_aucs.push_back(auc(scored, dataset.anomaly_label));
    report.per_graph.push_back(std::move(scored));
  }

  const double k = static_cast<double>(report.fold_aucs.size());
  double sum = 0.0;
  for (double a : report.fold_aucs) sum += a;
  report.mean_auc = sum / k;
  double var = 0.0;
  for (double a : report.fold_aucs) var += (a - report.mean_auc) * (a - report.mean_auc);
  report.std_auc = std::sqrt(var / k);
  return report;
}

std::string report_to_json(const EvalReport& r) {
  nlohmann::ordered_json j;
  j["schema"] = "gladst.eval_report";
  j["schema_version"] = kReportSchemaVersion;
  j["dataset"] = r.dataset;
  j["anomaly_label"] = r.anomaly_label;
  j["config_fingerprint"] = hex64(r.config_fingerprint);
  j["config"] = r.config_text;
  j["folds"] = r.fold_aucs.size();
  j["fold_aucs"] = r.fold_aucs;
  j["mean_auc"] = r.mean_auc;
  j["std_auc"] = r.std_auc;
  auto& per = j["per_graph"] = nlohmann::ordered_json::array();
  for (std::size_t f = 0; f < r.per_graph.size(); ++f) {
    for (const auto& s : r.per_graph[f]) {
      per.push_back({{"fold", f},
                     {"graph_index", s.graph_index},
                     {"label", s.label},
                     {"s_hat", s.s_hat},
                     {"s_check", s.s_check},
                     {"score", s.score}});
    }
  }
  return j.dump(2) + "\n";
}

void write_report(const std::filesystem::path& path, const EvalReport& report) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write report " + path.string());
  out << report_to_json(report);
  if (!out) throw IoError("write failed for report " + path.string());
}

std::string format_table_row(const EvalReport& r) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f±%.2f", 100.0 * r.mean_auc, 100.0 * r.std_auc);
  return r.dataset + " " + buf;
}

}  // namespace gladst
