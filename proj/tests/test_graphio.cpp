#include <gtest/gtest.h>

#include <cmath>

#include <intergat/csv_io.hpp>
#include <intergat/dataset.hpp>
#include <intergat/error.hpp>
#include <intergat/synth.hpp>

#include "support/temp_dir.hpp"

using namespace intergat;
using testing_support::TempDir;

namespace {

SignalTensor ramp(std::size_t steps, std::size_t nodes) {
  SignalTensor s(steps, nodes, 1);
  for (std::size_t t = 0; t < steps; ++t)
    for (std::size_t n = 0; n < nodes; ++n) s.at(t, n, 0) = 10.0 * static_cast<double>(t) + static_cast<double>(n);
  return s;
}

}  // namespace

TEST(LoadCsv, MinimalWellFormedFiles) {
  TempDir dir;
  const auto adj = dir.write("adj.csv", "0,1\n1,0\n");
  const auto speeds = dir.write("speeds.csv", "1,2\n3,4\n5,6\n7,8\n");
  const TrafficData data = load_csv_dataset(adj, speeds);
  EXPECT_EQ(data.graph.nodes(), 2u);
  EXPECT_EQ(data.signal.steps(), 4u);
  EXPECT_EQ(data.signal.features(), 1u);
  EXPECT_EQ(data.signal.at(2, 1, 0), 6.0);
}

TEST(LoadCsv, HeaderLineIsSkipped) {
  TempDir dir;
  const auto adj = dir.write("adj.csv", "0,1\n1,0\n");
  const auto speeds = dir.write("speeds.csv", "road_a,road_b\n1,2\n3,4\n5,6\n");
  EXPECT_EQ(load_csv_dataset(adj, speeds).signal.steps(), 3u);
}

TEST(LoadCsv, NodeMajorSpeedsAreTransposed) {
  TempDir dir;
  const auto adj = dir.write("adj.csv", "0,1,0\n1,0,1\n0,1,0\n");
  const auto speeds = dir.write("speeds.csv", "1,2,3,4,5\n6,7,8,9,10\n11,12,13,14,15\n");
  const TrafficData data = load_csv_dataset(adj, speeds);
  EXPECT_EQ(data.signal.steps(), 5u);
  EXPECT_EQ(data.signal.nodes(), 3u);
  EXPECT_EQ(data.signal.at(4, 2, 0), 15.0);
}

TEST(LoadCsv, InteriorGapInterpolatedToMidpoint) {
  TempDir dir;
  const auto adj = dir.write("adj.csv", "0,1\n1,0\n");
  const auto speeds = dir.write("speeds.csv", "1,10\n,\n3,30\n4,40\n");
  const TrafficData data = load_csv_dataset(adj, speeds);
  EXPECT_DOUBLE_EQ(data.signal.at(1, 0, 0), 2.0);
  EXPECT_DOUBLE_EQ(data.signal.at(1, 1, 0), 20.0);
}

TEST(LoadCsv, ZerosAsMissingOnlyWhenFlagged) {
  TempDir dir;
  const auto adj = dir.write("adj.csv", "0,1\n1,0\n");
  const auto speeds = dir.write("speeds.csv", "2,10\n0,0\n4,30\n");
  EXPECT_EQ(load_csv_dataset(adj, speeds).signal.at(1, 0, 0), 0.0);
  CsvLoadOptions opts;
  opts.zeros_missing = true;
  EXPECT_DOUBLE_EQ(load_csv_dataset(adj, speeds, opts).signal.at(1, 0, 0), 3.0);
}

TEST(LoadCsv, InterpolationLeavesObservedValuesBitIdentical) {
  SignalTensor s(6, 2, 1);
  const double observed[6] = {0.1, NAN, 0.3333333333333333, NAN, NAN, 0.7};
  for (std::size_t t = 0; t < 6; ++t) {
    s.at(t, 0, 0) = observed[t];
    s.at(t, 1, 0) = 1.0 / (1.0 + static_cast<double>(t));
  }
  const SignalTensor before = s;
  interpolate_missing(s);
  for (std::size_t t = 0; t < 6; ++t) {
    EXPECT_TRUE(std::isfinite(s.at(t, 0, 0)));
    if (!std::isnan(observed[t])) EXPECT_EQ(s.at(t, 0, 0), before.at(t, 0, 0));
    EXPECT_EQ(s.at(t, 1, 0), before.at(t, 1, 0));
  }
  EXPECT_NEAR(s.at(3, 0, 0), 0.3333333333333333 + (0.7 - 0.3333333333333333) / 3.0, 1e-15);
}

TEST(LoadCsv, NonSquareAdjacencyRejected) {
  TempDir dir;
  const auto adj = dir.write("adj.csv", "0,1,1\n1,0,1\n");
  const auto speeds = dir.write("speeds.csv", "1,2\n");
  EXPECT_THROW(load_csv_dataset(adj, speeds), LoadError);
}

TEST(LoadCsv, RowLengthMismatchRejected) {
  TempDir dir;
  const auto adj = dir.write("adj.csv", "0,1\n1,0\n");
  const auto speeds = dir.write("speeds.csv", "1,2\n3\n5,6\n");
  EXPECT_THROW(load_csv_dataset(adj, speeds), LoadError);
}

TEST(LoadCsv, UnparseableNumberReportsLine) {
  TempDir dir;
  const auto adj = dir.write("adj.csv", "0,1\n1,0\n");
  const auto speeds = dir.write("speeds.csv", "1,2\n3,4\n5,x7\n");
  try {
    load_csv_dataset(adj, speeds);
    FAIL() << "expected LoadError";
  } catch (const LoadError& e) {
    EXPECT_NE(std::string(e.what()).find(":3"), std::string::npos) << e.what();
  }
}

TEST(LoadCsv, MissingFileNamesPath) {
  TempDir dir;
  try {
    load_csv_dataset(dir / "nope_adj.csv", dir / "nope_speeds.csv");
    FAIL();
  } catch (const LoadError& e) {
    EXPECT_NE(std::string(e.what()).find("nope_adj.csv"), std::string::npos);
  }
}

TEST(LoadCsv, WriteThenReadRoundTrips) {
  TempDir dir;
  const auto syn = synth_community_traffic(6, 2, 30, 3);
  write_csv_matrix(dir / "adj.csv", syn.graph.adjacency());
  write_speeds_csv(dir / "speeds.csv", syn.signal);
  const TrafficData back = load_csv_dataset(dir / "adj.csv", dir / "speeds.csv");
  EXPECT_EQ(back.graph.adjacency(), syn.graph.adjacency());
  EXPECT_EQ(back.signal, syn.signal);
}

TEST(Normalize, SimpleRange) {
  SignalTensor s(3, 1, 1, {0.0, 5.0, 10.0});
  const auto n = normalize(s);
  EXPECT_EQ(n.signal.values(), (std::vector<double>{0.0, 0.5, 1.0}));
  EXPECT_EQ(n.norm.min, 0.0);
  EXPECT_EQ(n.norm.max, 10.0);
}

TEST(Normalize, UnitRangeDataUnchanged) {
  SignalTensor s(4, 1, 1, {0.0, 0.25, 1.0, 0.5});
  const auto n = normalize(s);
  EXPECT_EQ(n.signal, s);
  EXPECT_EQ(n.norm.min, 0.0);
  EXPECT_EQ(n.norm.max, 1.0);
}

TEST(Normalize, InverseRoundTrip) {
  const SignalTensor s = ramp(17, 3);
  const auto n = normalize(s);
  const SignalTensor back = invert_normalization(n.signal, n.norm);
  for (std::size_t i = 0; i < s.values().size(); ++i) EXPECT_NEAR(back.values()[i], s.values()[i], 1e-9);
  for (double v : n.signal.values()) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
}

TEST(Normalize, ConstantSignalRejected) {
  EXPECT_THROW(normalize(SignalTensor(5, 2, 1, std::vector<double>(10, 3.0))), DataError);
}

TEST(WindowSplit, EnumeratedCounts) {
  SplitOptions opt;
  opt.history = 12;
  opt.horizon = 1;
  opt.train_ratio = 0.8;
  const auto ds = window_split(ramp(20, 2), opt);
  EXPECT_EQ(ds.train.size() + ds.validation.size(), 5u);
  EXPECT_EQ(ds.validation.size(), 1u);
  EXPECT_EQ(ds.test.size(), 2u);
  EXPECT_EQ(ds.train.front().start, 0u);
  EXPECT_EQ(ds.test.back().start, 6u);
}

TEST(WindowSplit, ZeroHorizonRejected) {
  SplitOptions opt;
  opt.horizon = 0;
  EXPECT_THROW(window_split(ramp(40, 2), opt), UsageError);
}

TEST(WindowSplit, TooShortStatesMinimum) {
  SplitOptions opt;
  opt.history = 12;
  opt.horizon = 3;
  try {
    window_split(ramp(15, 2), opt);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("16"), std::string::npos) << e.what();
  }
}

TEST(WindowSplit, ChronologicalAndNonOverlapping) {
  SplitOptions opt;
  opt.history = 4;
  opt.horizon = 3;
  const auto ds = window_split(ramp(60, 3), opt);
  std::size_t max_train_target = 0;
  for (const auto& w : ds.train) max_train_target = std::max(max_train_target, ds.target_time(w) + ds.horizon - 1);
  for (const auto& w : ds.validation) max_train_target = std::max(max_train_target, ds.target_time(w) + ds.horizon - 1);
  for (const auto& w : ds.test) EXPECT_GT(ds.target_time(w), max_train_target - ds.horizon + 1);
  const double fitted = static_cast<double>(ds.train.size() + ds.validation.size());
  const double total = fitted + static_cast<double>(ds.test.size());
  EXPECT_NEAR(fitted / total, 0.8, 1.0 / total);
}

TEST(WindowSplit, ValidationIsTrailingTrainingWindows) {
  SplitOptions opt;
  opt.history = 4;
  opt.horizon = 1;
  const auto ds = window_split(ramp(105, 2), opt);
  ASSERT_FALSE(ds.validation.empty());
  const std::size_t fitted = ds.train.size() + ds.validation.size();
  EXPECT_EQ(ds.validation.size(), fitted / 10);
  EXPECT_EQ(ds.validation.front().start, ds.train.back().start + 1);
  EXPECT_EQ(ds.test.front().start, ds.validation.back().start + 1);
}

TEST(WindowSplit, TargetsReconstructSeries) {
  SplitOptions opt;
  opt.history = 3;
  opt.horizon = 2;
  const SignalTensor raw = ramp(30, 2);
  const auto ds = window_split(raw, opt);
  for (const auto& w : ds.train) {
    const auto inputs = ds.inputs(w);
    const auto targets = ds.targets(w);
    for (std::size_t k = 0; k < inputs.size(); ++k) EXPECT_EQ(inputs[k], ds.signal.frame(w.start + k));
    for (std::size_t k = 0; k < targets.size(); ++k)
      for (std::size_t n = 0; n < 2; ++n)
        EXPECT_NEAR(ds.norm.invert(targets[k](n, 0)), raw.at(ds.target_time(w) + k, n, 0), 1e-9);
  }
}

TEST(WindowSplit, NormalizationFittedOnTrainingFramesOnly) {
  SplitOptions opt;
  opt.history = 2;
  opt.horizon = 1;
  const SignalTensor raw = ramp(23, 1);  // strictly increasing
  const auto ds = window_split(raw, opt);
  EXPECT_EQ(ds.norm.min, 0.0);
  const Window last = ds.validation.empty() ? ds.train.back() : ds.validation.back();
  const std::size_t last_train_frame = last.start + opt.history + opt.horizon - 1;
  EXPECT_EQ(ds.norm.max, raw.at(last_train_frame, 0, 0));
}

TEST(Synth, Deterministic) {
  const auto a = synth_community_traffic(20, 4, 400, 7);
  const auto b = synth_community_traffic(20, 4, 400, 7);
  EXPECT_EQ(a.graph.adjacency(), b.graph.adjacency());
  EXPECT_EQ(a.signal, b.signal);
  EXPECT_EQ(a.community, b.community);
  const auto c = synth_community_traffic(20, 4, 400, 8);
  EXPECT_NE(a.signal, c.signal);
}

TEST(Synth, IntraDensityExceedsInterDensity) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto s = synth_community_traffic(20, 4, 50, seed);
    double intra = 0, intra_pairs = 0, inter = 0, inter_pairs = 0;
    for (std::size_t i = 0; i < 20; ++i)
      for (std::size_t j = 0; j < 20; ++j) {
        if (i == j) continue;
        const bool same = s.community[i] == s.community[j];
        (same ? intra : inter) += s.graph.adjacency()(i, j) > 0 ? 1.0 : 0.0;
        (same ? intra_pairs : inter_pairs) += 1.0;
      }
    EXPECT_GT(intra / intra_pairs, inter / inter_pairs) << "seed " << seed;
  }
}

TEST(Synth, SignalInUnitInterval) {
  const auto s = synth_community_traffic(12, 3, 200, 5);
  for (double v : s.signal.values()) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
  const Mat& a = s.graph.adjacency();
  EXPECT_EQ(a, a.transposed());
}

TEST(Synth, BadCommunityCountsRejected) {
  EXPECT_THROW(synth_community_traffic(3, 4, 10, 1), UsageError);
  EXPECT_THROW(synth_community_traffic(10, 1, 10, 1), UsageError);
}

TEST(GraphType, RejectsBadAdjacency) {
  EXPECT_THROW(Graph(Mat(2, 3)), DimensionError);
  EXPECT_THROW(Graph(Mat{{0, -1}, {1, 0}}), Error);
}

TEST(GraphType, ComponentsOfDisconnectedGraph) {
  const Graph g(Mat{{0, 1, 0, 0}, {1, 0, 0, 0}, {0, 0, 0, 1}, {0, 0, 1, 0}});
  EXPECT_FALSE(g.connected());
  const auto labels = g.components();
  ASSERT_EQ(labels.size(), 4u);
  EXPECT_EQ(labels[0], labels[1]);
  EXPECT_EQ(labels[2], labels[3]);
  EXPECT_NE(labels[0], labels[2]);
}
