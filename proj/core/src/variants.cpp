#include "intergat/variants.hpp"

#include <array>

#include "intergat/attention.hpp"
#include "intergat/community.hpp"
#include "intergat/error.hpp"

namespace intergat {
namespace {

constexpr std::array<std::pair<Variant, std::string_view>, 6> kNames{{
    {Variant::none, "none"},
    {Variant::learnable_sym, "learnable_sym"},
    {Variant::adjacency, "adjacency"},
    {Variant::weighted_adjacency, "weighted_adjacency"},
    {Variant::weighted_covariance, "weighted_covariance"},
    {Variant::spectral_block, "spectral_block"},
}};

}  // namespace

std::string_view to_string(Variant v) {
  for (const auto& [tag, name] : kNames)
    if (tag == v) return name;
  return "unknown";
}

Variant parse_variant(std::string_view tag) {
  for (const auto& [v, name] : kNames)
    if (name == tag) return v;
  throw UsageError("unknown variant '" + std::string(tag) +
                   "' (expected none, learnable_sym, adjacency, weighted_adjacency, weighted_covariance, "
                   "spectral_block)");
}

const std::vector<Variant>& all_variants() {
  static const std::vector<Variant> order{Variant::none,
                                          Variant::adjacency,
                                          Variant::weighted_adjacency,
                                          Variant::weighted_covariance,
                                          Variant::spectral_block,
                                          Variant::learnable_sym};
  return order;
}

bool is_learnable_scaled(Variant v) {
  return v == Variant::weighted_adjacency || v == Variant::weighted_covariance;
}

Mat empirical_covariance(const SignalTensor& signal, std::size_t first, std::size_t last) {
  if (first >= last || last > signal.steps()) throw UsageError("empirical_covariance: empty step range");
  const std::size_t n = signal.nodes();
  const std::size_t f = signal.features();
  const auto count = static_cast<double>((last - first) * f);
  std::vector<double> mean(n, 0.0);
  for (std::size_t t = first; t < last; ++t)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < f; ++k) mean[i] += signal.at(t, i, k);
  for (double& m : mean) m /= count;
  Mat c(n, n);
  for (std::size_t t = first; t < last; ++t) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < f; ++k) {
        const double di = signal.at(t, i, k) - mean[i];
        for (std::size_t j = i; j < n; ++j) c(i, j) += di * (signal.at(t, j, k) - mean[j]);
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      c(i, j) /= count;
      c(j, i) = c(i, j);
    }
  }
  return c;
}

Mat clustered_adjacency(const std::vector<int>& labels) {
  const std::size_t n = labels.size();
  Mat m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && labels[i] == labels[j]) m(i, j) = 1.0;
  return m;
}

InteractionSource build_variant(Variant v, const VariantInputs& inputs) {
  InteractionSource source{v, {}};
  if (v == Variant::learnable_sym) return source;
  if (inputs.graph == nullptr) throw UsageError(std::string(to_string(v)) + " variant requires a graph");
  const Graph& graph = *inputs.graph;
  switch (v) {
    case Variant::none:
      source.base = attention_mask(graph.adjacency());
      break;
    case Variant::adjacency:
    case Variant::weighted_adjacency:
      source.base = graph.adjacency();
      break;
    case Variant::weighted_covariance: {
      if (inputs.train_signal == nullptr) throw UsageError("weighted_covariance variant requires a training signal");
      if (inputs.train_signal->nodes() != graph.nodes()) throw DimensionError("covariance signal/graph node mismatch");
      const std::size_t last = inputs.train_steps == 0 ? inputs.train_signal->steps() : inputs.train_steps;
      source.base = empirical_covariance(*inputs.train_signal, 0, last);
      break;
    }
    case Variant::spectral_block: {
      if (inputs.clusters > graph.nodes()) {
        throw UsageError("spectral_block: cluster count " + std::to_string(inputs.clusters) + " exceeds " +
                         std::to_string(graph.nodes()) + " nodes");
      }
      if (inputs.clusters <= 1) {
        source.base = clustered_adjacency(std::vector<int>(graph.nodes(), 0));
      } else {
        source.base = clustered_adjacency(spectral_cluster(graph, inputs.clusters, inputs.seed).labels);
      }
      break;
    }
    case Variant::learnable_sym:
      break;
  }
  return source;
}

}  // namespace intergat
