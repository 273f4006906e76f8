#include <gtest/gtest.h>

#include <nlohmann/json.hpp>
#include <random>

#include <intergat/checkpoint.hpp>
#include <intergat/config.hpp>
#include <intergat/error.hpp>
#include <intergat/synth.hpp>

#include "support/temp_dir.hpp"

using namespace intergat;
using testing_support::TempDir;

namespace {

std::string config_error(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Config, EmptyTextGivesDefaults) { EXPECT_TRUE(parse_config("") == RunConfig{}); }

TEST(Config, MissingKeysKeepDefaults) {
  const RunConfig c = parse_config("[optim]\nepochs = 7\n[model]\nvariant = none\n");
  EXPECT_EQ(c.optim.max_epochs, 7u);
  EXPECT_EQ(c.model.spatial.variant, Variant::none);
  EXPECT_EQ(c.history, RunConfig{}.history);
  EXPECT_EQ(c.optim.batch_size, RunConfig{}.optim.batch_size);
}

TEST(Config, RoundTripsRandomConfigs) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> small(1, 64);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    RunConfig c;
    c.data.synth_nodes = 10 + small(rng);
    c.data.synth_communities = 2;
    c.data.train_ratio = 0.05 + 0.9 * unit(rng);
    c.data.validation_fraction = 0.5 * unit(rng);
    c.model.spatial.heads = small(rng);
    c.model.spatial.head_dim = small(rng);
    c.model.spatial.variant = all_variants()[trial % all_variants().size()];
    c.model.spatial.elu_alpha = 0.1 + unit(rng);
    c.model.spatial.layer_norm_axis = trial % 2 ? LayerNormAxis::rows : LayerNormAxis::matrix;
    c.model.hidden = small(rng);
    c.model.dropout = 0.9 * unit(rng);
    c.model.gate_bias = trial % 3 == 0;
    c.model.decode = trial % 2 ? DecodeMode::iterative : DecodeMode::one_shot;
    c.model.horizon = small(rng);
    c.optim.learning_rate = 1e-6 + unit(rng) * 1e-2;
    c.optim.weight_decay = unit(rng) * 1e-3;
    c.optim.lambda_sparse = unit(rng) * 1e-2;
    c.optim.max_epochs = small(rng);
    c.optim.patience = small(rng) - 1;
    c.optim.forcing.initial = unit(rng);
    c.history = small(rng);
    c.seed = rng();
    c.seeds = small(rng);
    c.out = "runs/x" + std::to_string(trial);
    const RunConfig back = parse_config(emit_config(c));
    ASSERT_TRUE(back == c) << emit_config(c);
    EXPECT_EQ(back.optim.learning_rate, c.optim.learning_rate);
    EXPECT_EQ(back.seed, c.seed);
  }
}

TEST(Config, UnknownKeyNamesFieldPath) {
  EXPECT_NE(config_error("[optim]\nlearnig_rate = 0.1\n").find("optim.learnig_rate"), std::string::npos);
  EXPECT_NE(config_error("[extra]\nx = 1\n").find("extra.x"), std::string::npos);
}

TEST(Config, BadValuesNameFieldPath) {
  EXPECT_NE(config_error("[optim]\nlearning_rate = fast\n").find("optim.learning_rate"), std::string::npos);
  EXPECT_NE(config_error("[model]\nheads = -2\n").find("model.heads"), std::string::npos);
  EXPECT_NE(config_error("[model]\nheads = 0\n").find("model.heads"), std::string::npos);
  EXPECT_NE(config_error("[model]\nvariant = magic\n").find("model.variant"), std::string::npos);
  EXPECT_NE(config_error("[data]\nzeros_missing = maybe\n").find("data.zeros_missing"), std::string::npos);
  EXPECT_NE(config_error("[data]\ntrain_ratio = 1.5\n").find("data.train_ratio"), std::string::npos);
  EXPECT_NE(config_error("[data]\nsource = csv\n").find("data.speeds"), std::string::npos);
  EXPECT_NE(config_error("[model]\ndropout = 1\n").find("model.dropout"), std::string::npos);
}

TEST(Config, MissingFile) { EXPECT_THROW(load_config("/nonexistent/run.ini"), ConfigError); }

TEST(Config, LoadsFile) {
  TempDir dir;
  const auto path = dir.write("run.ini", "[run]\nseed = 11\nseeds = 3\n");
  const RunConfig c = load_config(path);
  EXPECT_EQ(c.seed, 11u);
  EXPECT_EQ(c.seeds, 3u);
}

namespace {

struct Saved {
  Model model;
  Graph graph;
  Normalization norm{0.0, 80.0};
};

Saved small_model(Variant v, std::uint64_t seed = 4) {
  auto syn = synth_community_traffic(6, 2, 60, 1);
  ModelSpec spec;
  spec.spatial.nodes = 6;
  spec.spatial.heads = 2;
  spec.spatial.head_dim = 3;
  spec.spatial.variant = v;
  spec.hidden = 5;
  spec.horizon = 2;
  VariantInputs in;
  in.graph = &syn.graph;
  in.train_signal = &syn.signal;
  in.clusters = 2;
  return {Model(spec, build_variant(v, in), seed), syn.graph};
}

std::vector<Mat> probe_inputs() {
  std::vector<Mat> frames;
  for (int t = 0; t < 4; ++t) {
    Mat f(6, 1);
    for (std::size_t i = 0; i < 6; ++i) f(i, 0) = 0.1 * t + 0.05 * static_cast<double>(i);
    frames.push_back(f);
  }
  return frames;
}

}  // namespace

TEST(Checkpoint, RoundTripPreservesPredictionsForEveryVariant) {
  TempDir dir;
  for (Variant v : all_variants()) {
    const Saved s = small_model(v);
    const auto path = dir / (std::string(to_string(v)) + ".json");
    save_checkpoint(path, make_checkpoint(s.model, s.norm, 4, s.graph, 9, emit_config(RunConfig{})));
    const Checkpoint ck = load_checkpoint(path);
    EXPECT_EQ(ck.version, kCheckpointVersion);
    EXPECT_EQ(ck.history, 4u);
    EXPECT_EQ(ck.seed, 9u);
    EXPECT_EQ(ck.norm.min, 0.0);
    EXPECT_EQ(ck.norm.max, 80.0);
    EXPECT_EQ(ck.spec.spatial.variant, v);
    const Model restored = restore_model(ck);
    const auto a = s.model.predict(probe_inputs());
    const auto b = restored.predict(probe_inputs());
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t t = 0; t < a.size(); ++t)
      for (std::size_t i = 0; i < a[t].size(); ++i) EXPECT_EQ(a[t].values()[i], b[t].values()[i]) << to_string(v);
    EXPECT_TRUE(parse_config(ck.config) == RunConfig{});
  }
}

TEST(Checkpoint, RejectsWrongVersion) {
  TempDir dir;
  const Saved s = small_model(Variant::learnable_sym);
  const auto path = dir / "ck.json";
  save_checkpoint(path, make_checkpoint(s.model, s.norm, 4, s.graph, 1, ""));
  auto doc = nlohmann::json::parse(testing_support::read_file(path));
  doc["version"] = kCheckpointVersion + 1;
  dir.write("ck.json", doc.dump());
  EXPECT_THROW(load_checkpoint(path), CompatibilityError);
  doc["version"] = kCheckpointVersion;
  doc["format"] = "something-else";
  dir.write("ck.json", doc.dump());
  EXPECT_THROW(load_checkpoint(path), CompatibilityError);
}

TEST(Checkpoint, RejectsMalformedFiles) {
  TempDir dir;
  EXPECT_THROW(load_checkpoint(dir / "missing.json"), LoadError);
  EXPECT_THROW(load_checkpoint(dir.write("bad.json", "{not json")), LoadError);
}

TEST(Checkpoint, RestoreRejectsMissingOrMisshapenParameters) {
  const Saved s = small_model(Variant::learnable_sym);
  Checkpoint ck = make_checkpoint(s.model, s.norm, 4, s.graph, 1, "");
  Checkpoint missing = ck;
  missing.parameters.pop_back();
  EXPECT_THROW(restore_model(missing), CompatibilityError);
  Checkpoint misshapen = ck;
  misshapen.parameters.front().second = Mat(1, 1);
  EXPECT_THROW(restore_model(misshapen), CompatibilityError);
}

TEST(Checkpoint, RequireCompatible) {
  const Saved s = small_model(Variant::learnable_sym);
  const Checkpoint ck = make_checkpoint(s.model, s.norm, 4, s.graph, 1, "");
  EXPECT_NO_THROW(require_compatible(ck, 6, 1));
  EXPECT_THROW(require_compatible(ck, 7, 1), CompatibilityError);
  EXPECT_THROW(require_compatible(ck, 6, 2), CompatibilityError);
}
