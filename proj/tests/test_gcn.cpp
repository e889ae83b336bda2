#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numeric>

#include "gladst/error.hpp"
#include "gladst/gcn.hpp"
#include "gladst/rng.hpp"
#include "support/reference.hpp"

namespace gladst {
namespace {

GraphPtr share(Graph g) { return std::make_shared<const Graph>(std::move(g)); }

TEST(InitParams, DeterministicInSeed) {
  EXPECT_TRUE(init_params(3, 5) == init_params(3, 5));
  EXPECT_FALSE(init_params(3, 5) == init_params(3, 6));
}

TEST(InitParams, ShapesAndBoundsForScalarFeatures) {
  const auto p = init_params(1, 0);
  ASSERT_EQ(p.theta0.rows(), 1);
  ASSERT_EQ(p.theta0.cols(), 512);
  ASSERT_EQ(p.theta1.rows(), 512);
  ASSERT_EQ(p.theta1.cols(), 256);
  EXPECT_LE(p.theta0.cwiseAbs().maxCoeff(), 1.0);
  EXPECT_LE(p.theta1.cwiseAbs().maxCoeff(), 1.0 / std::sqrt(512.0));
}

TEST(InitParams, SecondLayerIsCentred) {
  const auto p = init_params(4, 17);
  const double range = 2.0 / std::sqrt(512.0);
  const double sd_of_mean = (range / std::sqrt(12.0)) / std::sqrt(512.0 * 256.0);
  EXPECT_LT(std::abs(p.theta1.mean()), 3.0 * sd_of_mean);
}

TEST(Forward, ZeroWeightsGiveZeroOutputs) {
  GcnParams p{Matrix::Zero(1, 512), Matrix::Zero(512, 256)};
  const auto g = Graph::make(3, {{0, 1}, {1, 2}}, degree_features(3, {{0, 1}, {1, 2}}), 0);
  const auto t = forward(g, p);
  EXPECT_EQ(t.h1.rows(), 3);
  EXPECT_EQ(t.h1.cols(), 256);
  EXPECT_TRUE(t.h1.isZero(0.0));
  EXPECT_TRUE(t.hg.isZero(0.0));
}

TEST(Forward, SingleNodeGraphPoolsToItsOnlyRow) {
  Rng rng(4);
  const auto p = reference::random_params(rng, 2, 16, 8);
  Matrix x(1, 2);
  x << 0.3, -1.2;
  const auto g = Graph::make(1, {}, x, 0);
  const auto t = forward(g, p);
  for (Index k = 0; k < 8; ++k) EXPECT_EQ(t.hg[k], t.h1(0, k));
}

TEST(Forward, MatchesDenseOracle) {
  Rng rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t d = static_cast<std::size_t>(rng.between(1, 5));
    const auto g = reference::random_graph(rng, 1, 15, d, rng.uniform(0.1, 0.7));
    const auto p = reference::random_params(rng, d, 24, 12);
    const auto t = forward(g, p);
    const auto o = reference::forward(g, p);
    for (std::size_t i = 0; i < g.node_count(); ++i)
      for (std::size_t k = 0; k < 12; ++k)
        EXPECT_NEAR(t.h1(static_cast<Index>(i), static_cast<Index>(k)), o.h1[i][k], 1e-10);
    for (std::size_t k = 0; k < 12; ++k) EXPECT_NEAR(t.hg[static_cast<Index>(k)], o.hg[k], 1e-10);
  }
}

Graph permuted(const Graph& g, const std::vector<int>& perm) {
  std::vector<Edge> edges;
  for (const auto& e : g.edges()) edges.push_back({perm[e.u], perm[e.v]});
  Matrix x(g.features().rows(), g.features().cols());
  for (std::size_t i = 0; i < g.node_count(); ++i) x.row(perm[i]) = g.features().row(static_cast<Index>(i));
  return Graph::make(g.node_count(), std::move(edges), std::move(x), g.label());
}

TEST(Forward, GraphRepresentationIsPermutationInvariant) {
  Rng rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    const auto g = reference::random_graph(rng, 2, 12, 3);
    const auto p = reference::random_params(rng, 3, 32, 16);
    const auto base = forward(g, p).hg;
    std::vector<int> perm(g.node_count());
    std::iota(perm.begin(), perm.end(), 0);
    for (int k = 0; k < 10; ++k) {
      rng.shuffle(perm);
      EXPECT_LE((forward(permuted(g, perm), p).hg - base).cwiseAbs().maxCoeff(), 1e-10);
    }
  }
}

TEST(Forward, OutputsAreNonNegativeAndPoolIsColumnMax) {
  Rng rng(9);
  for (int trial = 0; trial < 30; ++trial) {
    const auto g = reference::random_graph(rng, 1, 10, 2);
    const auto t = forward(g, reference::random_params(rng, 2, 16, 8));
    EXPECT_GE(t.h1.minCoeff(), 0.0);
    for (Index k = 0; k < 8; ++k) {
      EXPECT_EQ(t.hg[k], t.h1.col(k).maxCoeff());
      EXPECT_EQ(t.h1(t.argmax[static_cast<std::size_t>(k)], k), t.hg[k]);
    }
  }
}

TEST(Forward, TiesPoolToLowestIndex) {
  // Every node of a ring sees the same neighborhood and identical features.
  const std::vector<Edge> ring{{0, 1}, {1, 2}, {2, 3}, {0, 3}};
  const auto g = Graph::make(4, ring, degree_features(4, ring), 0);
  const auto t = forward(g, init_params(1, 3, {8, 4}));
  for (auto idx : t.argmax) EXPECT_EQ(idx, 0);
}

TEST(Forward, ZeroFeaturesGiveZeroRepresentation) {
  const auto g = Graph::make(3, {{0, 1}}, Matrix::Zero(3, 2), 0);
  const auto t = forward(g, init_params(2, 1));
  EXPECT_TRUE(t.hg.isZero(0.0));
}

TEST(Forward, FeatureDimensionMismatch) {
  const auto g = Graph::make(2, {{0, 1}}, Matrix::Ones(2, 3), 0);
  EXPECT_THROW(forward(g, init_params(2, 0)), ShapeError);
}

TEST(Forward, NonFiniteActivationsRaiseNumericError) {
  auto p = init_params(1, 0, {4, 2});
  p.theta1(0, 0) = std::numeric_limits<double>::infinity();
  p.theta0.setConstant(1.0);
  const auto g = Graph::make(2, {{0, 1}}, Matrix::Ones(2, 1), 0);
  EXPECT_THROW(forward(g, p), NumericError);
}

TEST(Backward, ZeroUpstreamGivesZeroGradient) {
  Rng rng(1);
  const auto g = reference::random_graph(rng, 3, 8, 2);
  const auto p = reference::random_params(rng, 2, 8, 4);
  const auto t = forward(g, p);
  const auto grads = backward(g, p, t, Matrix::Zero(t.h1.rows(), 4), Vector::Zero(4));
  EXPECT_TRUE(grads.g_theta0.isZero(0.0));
  EXPECT_TRUE(grads.g_theta1.isZero(0.0));
}

// d(sum hg)/dΘ¹ only involves the argmax rows.
TEST(Backward, PoolRoutesToWinningRows) {
  Rng rng(2);
  const auto g = reference::random_graph(rng, 3, 8, 2);
  const auto p = reference::random_params(rng, 2, 8, 4);
  const auto t = forward(g, p);
  const auto grads = backward(g, p, t, Matrix::Zero(t.h1.rows(), 4), Vector::Ones(4));
  const Matrix sh0 = g.norm_adj() * t.h0;
  for (Index k = 0; k < 4; ++k) {
    const Index w = t.argmax[static_cast<std::size_t>(k)];
    const bool active = t.pre1(w, k) > 0.0;
    for (Index j = 0; j < 8; ++j) {
      EXPECT_NEAR(grads.g_theta1(j, k), active ? sh0(w, j) : 0.0, 1e-12);
    }
  }
}

TEST(Backward, MatchesFiniteDifferencesOfWeightedOutputs) {
  Rng rng(5);
  int checked = 0;
  while (checked < 20) {
    const auto g = reference::random_graph(rng, 2, 7, 3, 0.5);
    const auto p = reference::random_params(rng, 3, 6, 5);
    const auto t = forward(g, p);
    if (reference::kink_margin(t) < 1e-3) continue;
    Matrix w1(t.h1.rows(), 5);
    Vector wg(5);
    for (Index i = 0; i < w1.size(); ++i) w1.data()[i] = rng.uniform(-1, 1);
    for (Index i = 0; i < wg.size(); ++i) wg[i] = rng.uniform(-1, 1);
    auto f = [&](const GcnParams& q) {
      const auto o = reference::forward(g, q);
      double s = 0.0;
      for (std::size_t i = 0; i < o.h1.size(); ++i)
        for (std::size_t k = 0; k < 5; ++k) s += w1(static_cast<Index>(i), static_cast<Index>(k)) * o.h1[i][k];
      for (std::size_t k = 0; k < 5; ++k) s += wg[static_cast<Index>(k)] * o.hg[k];
      return s;
    };
    const auto analytic = backward(g, p, t, w1, wg);
    EXPECT_LT(reference::max_relative_error(analytic, reference::central_differences(f, p, 1e-5)), 1e-6);
    ++checked;
  }
}

TEST(Backward, AccumulateAddsToExisting) {
  Rng rng(6);
  const auto g = reference::random_graph(rng, 3, 8, 2);
  const auto p = reference::random_params(rng, 2, 8, 4);
  const auto t = forward(g, p);
  const Matrix d1 = Matrix::Ones(t.h1.rows(), 4);
  const Vector dg = Vector::Ones(4);
  const auto once = backward(g, p, t, d1, dg);
  auto twice = once;
  accumulate_backward(g, p, t, d1, dg, twice);
  EXPECT_TRUE(twice.g_theta0.isApprox(2.0 * once.g_theta0));
  EXPECT_TRUE(twice.g_theta1.isApprox(2.0 * once.g_theta1));
}

TEST(Block, MatchesPerGraphPasses) {
  Rng rng(13);
  std::vector<GraphPtr> graphs;
  for (int i = 0; i < 9; ++i) graphs.push_back(share(reference::random_graph(rng, 1, 11, 3)));
  const auto p = reference::random_params(rng, 3, 20, 10);
  const auto block = forward_block(graphs, p);
  ASSERT_EQ(block.size(), graphs.size());
  std::vector<OutputGrads> upstream;
  GcnGrads expected = GcnGrads::zeros_like(p);
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    const auto single = forward(*graphs[i], p);
    EXPECT_LE((block[i].h1 - single.h1).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LE((block[i].hg - single.hg).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_EQ(block[i].argmax, single.argmax);
    OutputGrads og{Matrix::Random(single.h1.rows(), 10), Vector::Random(10)};
    accumulate_backward(*graphs[i], p, single, og.d_h1, og.d_hg, expected);
    upstream.push_back(std::move(og));
  }
  GcnGrads got = GcnGrads::zeros_like(p);
  accumulate_backward_block(graphs, p, block, upstream, got);
  EXPECT_LE((got.g_theta0 - expected.g_theta0).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LE((got.g_theta1 - expected.g_theta1).cwiseAbs().maxCoeff(), 1e-10);
}

}  // namespace
}  // namespace gladst
