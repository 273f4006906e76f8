#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "intergat/graph.hpp"

namespace intergat {

/// Which matrix mixes node embeddings in the spatial layer.
enum class Variant {
  none,                 // masked GAT attention, no interaction bias
  learnable_sym,        // processed learnable interaction matrix
  adjacency,            // fixed A
  weighted_adjacency,   // learnable W ∘ A
  weighted_covariance,  // learnable W ∘ C
  spectral_block,       // fixed block-diagonal clustered adjacency
};

std::string_view to_string(Variant v);
/// Throws UsageError for unknown tags.
Variant parse_variant(std::string_view tag);
/// Ablation ordering: base GAT first, the learnable interaction matrix last.
const std::vector<Variant>& all_variants();

bool is_learnable_scaled(Variant v);

/// Population covariance between node signals over steps [first, last), features pooled.
Mat empirical_covariance(const SignalTensor& signal, std::size_t first, std::size_t last);

/// Ã_ij = 1 when i != j share a cluster label, 0 otherwise.
Mat clustered_adjacency(const std::vector<int>& labels);

/// Fixed matrix a variant aggregates with, before any learnable scaling. For `none` this
/// is the attention mask; for `learnable_sym` it is empty.
struct InteractionSource {
  Variant variant = Variant::learnable_sym;
  Mat base;
};

struct VariantInputs {
  const Graph* graph = nullptr;
  /// Normalized training-split signal, required by weighted_covariance.
  const SignalTensor* train_signal = nullptr;
  std::size_t train_steps = 0;
  /// Cluster count for spectral_block.
  std::size_t clusters = 10;
  std::uint64_t seed = 0;
};

/// Throws UsageError when the inputs a variant needs are missing or `clusters` > N.
InteractionSource build_variant(Variant v, const VariantInputs& inputs);

}  // namespace intergat
