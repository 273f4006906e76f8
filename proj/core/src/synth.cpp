#include "intergat/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "intergat/error.hpp"

namespace intergat {

SyntheticTraffic synth_community_traffic(std::size_t nodes, std::size_t communities, std::size_t steps,
                                         std::uint64_t seed, const SynthOptions& options) {
  if (communities < 2) throw UsageError("synth: at least 2 communities are required");
  if (communities > nodes) throw UsageError("synth: more communities than nodes");
  if (steps == 0) throw UsageError("synth: steps must be >= 1");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> noise(0.0, options.noise_stddev);

  SyntheticTraffic out;
  out.community.resize(nodes);
  for (std::size_t i = 0; i < nodes; ++i) out.community[i] = static_cast<int>(i * communities / nodes);

  Mat adjacency(nodes, nodes);
  for (std::size_t i = 0; i < nodes; ++i) {
    for (std::size_t j = i + 1; j < nodes; ++j) {
      const double p = out.community[i] == out.community[j] ? options.intra_probability : options.inter_probability;
      if (unit(rng) < p) adjacency(i, j) = adjacency(j, i) = 1.0;
    }
  }
  out.graph = Graph(std::move(adjacency));

  // Node-level amplitude jitter keeps nodes within a community similar but not identical.
  std::vector<double> amplitude(nodes);
  for (double& a : amplitude) a = 0.25 + 0.1 * unit(rng);

  SignalTensor signal(steps, nodes, 1);
  const double two_pi = 2.0 * std::numbers::pi;
  for (std::size_t t = 0; t < steps; ++t) {
    for (std::size_t i = 0; i < nodes; ++i) {
      const double phase = two_pi * static_cast<double>(out.community[i]) / static_cast<double>(communities);
      const double base = 0.5 + amplitude[i] * std::sin(two_pi * static_cast<double>(t) / options.period + phase);
      signal.at(t, i) = std::clamp(base + noise(rng), 0.0, 1.0);
    }
  }
  out.signal = std::move(signal);
  return out;
}

}  // namespace intergat
