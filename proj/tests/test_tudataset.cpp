#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "gladst/error.hpp"
#include "gladst/synth.hpp"
#include "gladst/tudataset.hpp"
#include "support/temp_dir.hpp"

namespace gladst {
namespace {

namespace fs = std::filesystem;

void write(const fs::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

struct Fixture : ::testing::Test {
  testing_support::TempDir tmp;
  fs::path dir() const { return tmp.path(); }
  void files(const std::string& a, const std::string& ind, const std::string& lab) {
    write(dir() / "DS_A.txt", a);
    write(dir() / "DS_graph_indicator.txt", ind);
    write(dir() / "DS_graph_labels.txt", lab);
  }
};

TEST_F(Fixture, TwoGraphsFromEdgeList) {
  files("1, 2\n2, 1\n3, 4\n4, 3", "1\n1\n2\n2", "0\n1");
  ParseStats stats;
  const auto ds = parse_tudataset(dir(), "DS", 1, &stats);
  ASSERT_EQ(ds.size(), 2u);
  EXPECT_EQ(ds.feature_dim, 1u);
  for (std::size_t g = 0; g < 2; ++g) {
    EXPECT_EQ(ds[g].node_count(), 2u);
    EXPECT_EQ(ds[g].edges(), (std::vector<Edge>{{0, 1}}));
    EXPECT_EQ(ds[g].features()(0, 0), 1.0);  // degree
    EXPECT_EQ(ds[g].label(), static_cast<int>(g));
  }
  EXPECT_EQ(stats.asymmetric_edges, 0u);
}

TEST_F(Fixture, NodeAttributesBecomeFeatures) {
  files("1, 2\n2, 1\n3, 4\n4, 3", "1\n1\n2\n2", "0\n1");
  write(dir() / "DS_node_attributes.txt", "0.5, 1.0\n0.5, 1.0\n-2, 3e-1\n7,8\n");
  const auto ds = parse_tudataset(dir(), "DS", 1);
  EXPECT_EQ(ds.feature_dim, 2u);
  EXPECT_EQ(ds[0].features()(1, 1), 1.0);
  EXPECT_EQ(ds[1].features()(0, 0), -2.0);
  EXPECT_EQ(ds[1].features()(0, 1), 0.3);
  EXPECT_EQ(ds[1].features()(1, 1), 8.0);
}

TEST_F(Fixture, NodeLabelsBecomeOneHot) {
  files("1, 2\n2, 1", "1\n1\n2", "0\n1");
  write(dir() / "DS_node_labels.txt", "5\n2\n5\n");
  const auto ds = parse_tudataset(dir(), "DS", 1);
  EXPECT_EQ(ds.feature_dim, 2u);
  EXPECT_EQ(ds[0].features()(0, 1), 1.0);
  EXPECT_EQ(ds[0].features()(0, 0), 0.0);
  EXPECT_EQ(ds[0].features()(1, 0), 1.0);
  EXPECT_EQ(ds[1].features()(0, 1), 1.0);
}

TEST_F(Fixture, SignedLabelsRemapInSortedOrder) {
  files("1, 2\n2, 1\n3, 4\n4, 3", "1\n1\n2\n2", "1\n-1\n");
  const auto ds = parse_tudataset(dir(), "DS", 0);
  EXPECT_EQ(ds[0].label(), 1);
  EXPECT_EQ(ds[1].label(), 0);
}

TEST_F(Fixture, CrlfAndTrailingBlankLines) {
  files("1,2\r\n2,  1\r\n\r\n", "1\r\n1\r\n", "1\r\n\r\n");
  const auto ds = parse_tudataset(dir(), "DS", 1);
  ASSERT_EQ(ds.size(), 1u);
  EXPECT_EQ(ds[0].edges().size(), 1u);
}

TEST_F(Fixture, AsymmetricEntriesAreSymmetrizedAndCounted) {
  files("1, 2\n2, 3\n3, 2\n", "1\n1\n1", "0");
  ParseStats stats;
  const auto ds = parse_tudataset(dir(), "DS", 1, &stats);
  EXPECT_EQ(ds[0].edges(), (std::vector<Edge>{{0, 1}, {1, 2}}));
  EXPECT_EQ(stats.asymmetric_edges, 1u);
}

TEST_F(Fixture, MissingFileIsNamed) {
  write(dir() / "DS_A.txt", "1, 2\n");
  write(dir() / "DS_graph_indicator.txt", "1\n1\n");
  try {
    parse_tudataset(dir(), "DS", 1);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("DS_graph_labels.txt"), std::string::npos);
  }
}

TEST_F(Fixture, EdgeAcrossGraphsReportsLine) {
  files("1, 2\n2, 3\n", "1\n1\n2", "0\n1");
  try {
    parse_tudataset(dir(), "DS", 1);
    FAIL() << "expected IntegrityError";
  } catch (const IntegrityError& e) {
    EXPECT_NE(std::string(e.what()).find("DS_A.txt:2"), std::string::npos) << e.what();
  }
}

TEST_F(Fixture, NodeIdBeyondIndicatorIsIntegrityError) {
  files("1, 9\n", "1\n1\n", "0");
  EXPECT_THROW(parse_tudataset(dir(), "DS", 1), IntegrityError);
}

TEST_F(Fixture, MoreThanTwoLabelsUnsupported) {
  files("", "1\n2\n3", "0\n1\n2");
  EXPECT_THROW(parse_tudataset(dir(), "DS", 1), UnsupportedDatasetError);
}

TEST_F(Fixture, GraphWithoutNodesIsIntegrityError) {
  files("1, 2\n2, 1\n", "1\n1\n", "0\n1");
  EXPECT_THROW(parse_tudataset(dir(), "DS", 1), IntegrityError);
}

TEST_F(Fixture, MalformedNumberIsParseError) {
  files("1; 2\n", "1\n1\n", "0");
  EXPECT_THROW(parse_tudataset(dir(), "DS", 1), ParseError);
}

TEST_F(Fixture, MissingDirectory) {
  EXPECT_THROW(parse_tudataset(dir() / "nope", "DS", 1), ParseError);
}

TEST_F(Fixture, WriterEmitsCanonicalFormat) {
  files("1, 2\n2, 1\n", "1\n1\n", "1");
  const auto ds = parse_tudataset(dir(), "DS", 1);
  const auto out = dir() / "out";
  write_tudataset(ds, out);
  std::ifstream in(out / "DS_A.txt", std::ios::binary);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  EXPECT_EQ(text, "1, 2\n2, 1\n");
}

// parse → write → parse is the identity, over synthetic datasets of every kind.
TEST_F(Fixture, RoundTripIsIdentity) {
  int case_no = 0;
  for (auto motif : {BaseMotif::single_ring, BaseMotif::tree}) {
    for (auto kind : {AnomalyKind::node_property, AnomalyKind::graph_property}) {
      for (std::uint64_t seed : {1u, 2u, 3u}) {
        SynthSpec spec;
        spec.base_count = 12;
        spec.anomaly_count = 5;
        spec.base_motif = motif;
        spec.anomaly_kind = kind;
        spec.seed = seed;
        spec.name = "RT";
        const auto original = generate_synthetic(spec);
        const auto first = dir() / ("a" + std::to_string(case_no));
        const auto second = dir() / ("b" + std::to_string(case_no++));
        write_tudataset(original, first);
        const auto parsed = parse_tudataset(first, "RT", spec.anomaly_label);
        EXPECT_TRUE(parsed == original);
        write_tudataset(parsed, second);
        EXPECT_TRUE(parse_tudataset(second, "RT", spec.anomaly_label) == parsed);
      }
    }
  }
}

}  // namespace
}  // namespace gladst
