#pragma once

#include <cstdint>
#include <vector>

#include "intergat/graph.hpp"

namespace intergat {

struct SyntheticTraffic {
  Graph graph;
  SignalTensor signal;
  std::vector<int> community;  // planted label per node
};

struct SynthOptions {
  double intra_probability = 0.6;
  double inter_probability = 0.05;
  double period = 24.0;      // steps per sinusoid cycle
  double noise_stddev = 0.05;
};

/// Stochastic block model graph with per-community sinusoidal signals of distinct
/// phase plus Gaussian noise, clipped to [0, 1]. Nodes are assigned to communities in
/// contiguous blocks. Fully determined by `seed`.
SyntheticTraffic synth_community_traffic(std::size_t nodes, std::size_t communities,
                                         std::size_t steps, std::uint64_t seed,
                                         const SynthOptions& options = {});

}  // namespace intergat
