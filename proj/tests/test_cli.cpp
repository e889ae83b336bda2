#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "gladst/checkpoint.hpp"
#include "gladst/synth.hpp"
#include "gladst/tudataset.hpp"
#include "support/temp_dir.hpp"

namespace gladst {
namespace {

namespace fs = std::filesystem;

struct CommandResult {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

class Cli : public ::testing::Test {
 protected:
  testing_support::TempDir tmp;

  fs::path at(const std::string& name) const { return tmp.path() / name; }

  CommandResult run(const std::string& args) const {
    const auto err_file = at("stderr.txt");
    const std::string cmd = std::string("'") + GLADST_CLI_PATH + "' " + args + " 2>'" + err_file.string() + "'";
    CommandResult r;
    FILE* pipe = popen(cmd.c_str(), "r");
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.err = slurp(err_file);
    return r;
  }

  // Small dataset and narrow network so each command finishes in well under a second.
  std::string small_data() const {
    const auto dir = at("small");
    if (!fs::exists(dir)) {
      const auto r = run("synth --out '" + dir.string() + "' --name SMALL --base-count 20 --anomaly-count 10");
      EXPECT_EQ(r.code, 0) << r.err;
    }
    return "--data '" + dir.string() + "'";
  }
  static std::string quick() { return " --epochs 3 --hidden 16 --output 8 --deterministic"; }
};

TEST_F(Cli, SynthEchoesSpecAndRoundTrips) {
  const auto r = run("synth --out '" + at("d").string() + "' --name D --base-count 12 --anomaly-count 4 --seed 3");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.err.empty());
  EXPECT_NE(r.out.find("base_count=12"), std::string::npos);
  SynthSpec spec;
  spec.base_count = 12;
  spec.anomaly_count = 4;
  spec.seed = 3;
  spec.name = "D";
  EXPECT_TRUE(parse_tudataset(at("d"), "D", 1) == generate_synthetic(spec));
}

TEST_F(Cli, SynthGraphPropertyAnomaliesHaveCycleRankTwo) {
  ASSERT_EQ(run("synth --out '" + at("d").string() + "' --name D --anomaly-kind graph_property").code, 0);
  const auto ds = parse_tudataset(at("d"), "D", 1);
  for (std::size_t i = 0; i < ds.size(); ++i) EXPECT_EQ(cycle_rank(ds[i]), ds.is_anomalous(i) ? 2 : 1);
}

TEST_F(Cli, SynthIsDeterministic) {
  for (const char* d : {"a", "b"}) ASSERT_EQ(run("synth --out '" + at(d).string() + "' --name D --seed 5").code, 0);
  for (const char* f : {"D_A.txt", "D_graph_indicator.txt", "D_graph_labels.txt", "D_node_attributes.txt"}) {
    EXPECT_EQ(slurp(at("a") / f), slurp(at("b") / f)) << f;
  }
}

TEST_F(Cli, SynthRejectsInvalidSpec) {
  const auto r = run("synth --out '" + at("d").string() + "' --min-nodes 2");
  EXPECT_EQ(r.code, 2);
  EXPECT_FALSE(r.err.empty());
}

TEST_F(Cli, TrainWritesLoadableReproducibleCheckpoint) {
  const auto data = small_data();
  for (const char* name : {"a.ckpt", "b.ckpt"}) {
    const auto r = run("train " + data + quick() + " --seed 7 --anomaly-label 1 --out '" + at(name).string() + "'");
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(r.err.empty());
  }
  const auto ckpt = load_checkpoint(at("a.ckpt"));
  EXPECT_NE(ckpt.config_text.find("seed=7"), std::string::npos);
  EXPECT_EQ(slurp(at("a.ckpt")), slurp(at("b.ckpt")));
}

TEST_F(Cli, TrainMissingDatasetNamesPath) {
  const auto missing = at("no_such_dataset").string();
  const auto r = run("train --data '" + missing + "' --out '" + at("m.ckpt").string() + "'");
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find(missing), std::string::npos) << r.err;
}

TEST_F(Cli, TrainDivergenceExitsFour) {
  const auto r = run("train " + small_data() + " --epochs 5 --hidden 8 --output 4 --optimizer sgd --lr 1e200 --out '" +
                     at("m.ckpt").string() + "'");
  EXPECT_EQ(r.code, 4) << r.err;
}

TEST_F(Cli, VerbosePrintsEpochLossesToStdout) {
  const auto r = run("train " + small_data() + quick() + " --verbose --out '" + at("m.ckpt").string() + "'");
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("teacher epoch 2 loss"), std::string::npos);
  EXPECT_NE(r.out.find("student_b epoch 0 loss"), std::string::npos);
  EXPECT_TRUE(r.err.empty());
}

TEST_F(Cli, BadFlagsAreConfigErrors) {
  EXPECT_EQ(run("train " + small_data() + " --out x --anomaly-label 2").code, 2);
  EXPECT_EQ(run("train " + small_data() + " --out x --ablation everything").code, 2);
  EXPECT_EQ(run("train " + small_data() + " --out x --epochs 0").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
}

TEST_F(Cli, EvalPrintsTableRowAndWritesReport) {
  const auto r = run("eval " + small_data() + quick() + " --folds 3 --out '" + at("r.json").string() + "'");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.err.empty());
  std::istringstream line(r.out);
  std::string name, value;
  line >> name >> value;
  EXPECT_EQ(name, "SMALL");
  const auto pm = value.find("±");
  ASSERT_NE(pm, std::string::npos);
  EXPECT_EQ(value.find('.'), pm - 3);
  EXPECT_EQ(value.size() - value.rfind('.'), 3u);
  EXPECT_NE(slurp(at("r.json")).find("\"fold_aucs\""), std::string::npos);
}

TEST_F(Cli, EvalRunsUnderBothAnomalyLabels) {
  for (const char* label : {"0", "1"}) {
    const auto r = run("eval " + small_data() + quick() + " --folds 2 --anomaly-label " + label + " --out '" +
                       at(std::string("r") + label + ".json").string() + "'");
    EXPECT_EQ(r.code, 0) << r.err;
  }
}

TEST_F(Cli, AblationChangesReportFingerprint) {
  ASSERT_EQ(run("eval " + small_data() + quick() + " --folds 2 --out '" + at("a.json").string() + "'").code, 0);
  ASSERT_EQ(run("eval " + small_data() + quick() + " --folds 2 --ablation no-graph-loss --out '" +
                at("b.json").string() + "'").code,
            0);
  auto fp = [&](const char* f) {
    const auto text = slurp(at(f));
    const auto pos = text.find("\"config_fingerprint\"");
    return text.substr(pos, 45);
  };
  EXPECT_NE(fp("a.json"), fp("b.json"));
}

TEST_F(Cli, EvalWithoutTestAnomaliesIsUndefinedAuc) {
  const auto r = run("eval " + small_data() + quick() + " --folds 2 --alpha 0 --out '" + at("r.json").string() + "'");
  EXPECT_EQ(r.code, 5) << r.err;
}

TEST_F(Cli, EvalStratificationFailureIsDataError) {
  EXPECT_EQ(run("eval " + small_data() + quick() + " --folds 11 --out '" + at("r.json").string() + "'").code, 3);
}

TEST_F(Cli, ConfigFileValuesYieldToFlags) {
  std::ofstream(at("run.cfg")) << "# comment\nepochs=2\nhidden=16\noutput = 8\nfolds=2\nseed=5\n";
  const auto r = run("eval " + small_data() + " --config '" + at("run.cfg").string() + "' --seed 9 --out '" +
                     at("r.json").string() + "'");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto report = slurp(at("r.json"));
  EXPECT_NE(report.find("epochs=2\\n"), std::string::npos);
  EXPECT_NE(report.find("hidden=16\\n"), std::string::npos);
  EXPECT_NE(report.find("seed=9\\n"), std::string::npos);
  EXPECT_NE(report.find("folds=2\\n"), std::string::npos);
}

TEST_F(Cli, ScoreWritesOneLinePerGraph) {
  const auto data = small_data();
  ASSERT_EQ(run("train " + data + quick() + " --out '" + at("m.ckpt").string() + "'").code, 0);
  const auto r = run("score " + data + " --checkpoint '" + at("m.ckpt").string() + "' --out '" +
                     at("s.txt").string() + "'");
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(slurp(at("s.txt")));
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) {
    std::istringstream cols(line);
    std::size_t idx;
    double s_hat, s_check, score;
    int label;
    ASSERT_TRUE(cols >> idx >> s_hat >> s_check >> score >> label) << line;
    EXPECT_EQ(idx, static_cast<std::size_t>(lines));
    EXPECT_DOUBLE_EQ(score, s_hat - s_check);
    ++lines;
  }
  EXPECT_EQ(lines, 30);
  EXPECT_NE(slurp(at("s.txt.config")).find("fingerprint="), std::string::npos);
}

TEST_F(Cli, ScoreRejectsFeatureDimMismatchWithBothDims) {
  const auto data = small_data();
  ASSERT_EQ(run("train " + data + quick() + " --out '" + at("m.ckpt").string() + "'").code, 0);
  const auto dir = at("wide");
  fs::create_directories(dir);
  std::ofstream(dir / "W_A.txt") << "1, 2\n2, 1\n";
  std::ofstream(dir / "W_graph_indicator.txt") << "1\n1\n";
  std::ofstream(dir / "W_graph_labels.txt") << "0\n";
  std::ofstream(dir / "W_node_attributes.txt") << "1, 2, 3\n4, 5, 6\n";
  const auto r = run("score --data '" + dir.string() + "' --checkpoint '" + at("m.ckpt").string() + "'");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("feature_dim 1"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("feature_dim 3"), std::string::npos) << r.err;
}

TEST_F(Cli, ScoreEmptyDatasetIsDataError) {
  const auto data = small_data();
  ASSERT_EQ(run("train " + data + quick() + " --out '" + at("m.ckpt").string() + "'").code, 0);
  const auto dir = at("empty");
  fs::create_directories(dir);
  for (const char* f : {"E_A.txt", "E_graph_indicator.txt", "E_graph_labels.txt"}) std::ofstream(dir / f);
  EXPECT_EQ(run("score --data '" + dir.string() + "' --checkpoint '" + at("m.ckpt").string() + "'").code, 3);
}

TEST_F(Cli, ExportWritesThreeRowsPerGraph) {
  const auto data = small_data();
  ASSERT_EQ(run("train " + data + quick() + " --out '" + at("m.ckpt").string() + "'").code, 0);
  ASSERT_EQ(run("export " + data + " --checkpoint '" + at("m.ckpt").string() + "' --out '" + at("e.tsv").string() +
                "'").code,
            0);
  std::istringstream in(slurp(at("e.tsv")));
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 1 + 3 * 30);
}

// Scores of the training normals on the standard fixture with default hyperparameters.
TEST_F(Cli, FixtureTrainingNormalsScoreMostlyNegative) {
  const auto dir = at("fixture");
  ASSERT_EQ(run("synth --out '" + dir.string() + "' --name SYNTH --seed 42").code, 0);
  ASSERT_EQ(run("train --data '" + dir.string() + "' --deterministic --out '" + at("m.ckpt").string() + "'").code, 0);
  const auto r = run("score --data '" + dir.string() + "' --checkpoint '" + at("m.ckpt").string() + "'");
  ASSERT_EQ(r.code, 0);
  std::istringstream in(r.out);
  std::size_t idx;
  double s_hat, s_check, score;
  int label, normals = 0, negative = 0;
  while (in >> idx >> s_hat >> s_check >> score >> label) {
    if (label == 0) {
      ++normals;
      negative += score < 0;
    }
  }
  EXPECT_EQ(normals, 100);
  EXPECT_GT(2 * negative, normals) << negative << " of " << normals << " normals score negative";
}

}  // namespace
}  // namespace gladst
