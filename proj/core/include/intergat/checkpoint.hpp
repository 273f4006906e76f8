#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "intergat/dataset.hpp"
#include "intergat/model.hpp"

namespace intergat {

inline constexpr int kCheckpointVersion = 1;

/// Everything needed to rebuild a trained model and score it on compatible data.
struct Checkpoint {
  int version = kCheckpointVersion;
  ModelSpec spec;
  InteractionSource source;
  Normalization norm;
  std::size_t history = 0;
  std::uint64_t seed = 0;
  Mat adjacency;
  std::vector<std::pair<std::string, Mat>> parameters;
  /// INI text of the run that produced the model.
  std::string config;
};

Checkpoint make_checkpoint(const Model& model, const Normalization& norm, std::size_t history, const Graph& graph,
                           std::uint64_t seed, std::string config_text);

/// JSON with a format tag, version and shape headers for every matrix.
void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint);
/// Throws LoadError for unreadable or malformed files and CompatibilityError for an
/// unsupported version.
Checkpoint load_checkpoint(const std::filesystem::path& path);

/// Rebuilds the model. Throws CompatibilityError when a stored parameter is missing or
/// has the wrong shape.
Model restore_model(const Checkpoint& checkpoint);

/// Throws CompatibilityError unless the checkpoint was built for `nodes` x `features` input.
void require_compatible(const Checkpoint& checkpoint, std::size_t nodes, std::size_t features);

}  // namespace intergat
