#pragma once

#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include "intergat/attention.hpp"
#include "intergat/grad.hpp"
#include "intergat/interaction.hpp"
#include "intergat/variants.hpp"

namespace intergat {

struct SpatialConfig {
  std::size_t nodes = 0;
  std::size_t in_features = 1;
  std::size_t heads = 4;
  std::size_t head_dim = 32;
  Variant variant = Variant::learnable_sym;
  double elu_alpha = 1.0;
  double layer_norm_eps = 1e-5;
  LayerNormAxis layer_norm_axis = LayerNormAxis::rows;
  double leaky_slope = 0.2;
};

/// Multi-head spatial layer. Every head projects node features with its own W and
/// mixes them with a per-head N x N matrix chosen by the variant; head outputs pass
/// through ELU and are concatenated along the feature axis.
class InterGatLayer {
 public:
  struct Head {
    Mat projection;   // W: F x F'
    Mat interaction;  // raw I: N x N (learnable_sym)
    Mat attention;    // a: 2F' x 1 (none)
    Mat scale;        // W: N x N elementwise scale (weighted variants)
  };

  /// Per-batch effective mixing matrices, computed once from the current parameters.
  struct Plan {
    std::vector<Mat> effective;
    std::vector<InteractionCache> caches;
  };

  struct FrameCache {
    Mat input;
    std::vector<Mat> projected;
    std::vector<Mat> pre_activation;
    std::vector<AttentionCache> attention;
  };

  struct Accum {
    std::vector<Mat> d_projection;
    std::vector<Mat> d_effective;
    std::vector<Mat> d_attention;
    Accum& operator+=(const Accum& other);
  };

  InterGatLayer() = default;
  /// Initializes parameters from `rng`. Raw I ~ U[-1/√N, 1/√N]; projections are Glorot
  /// uniform; weighted-variant scales start at 1 so the effective matrix starts at its base.
  InterGatLayer(const SpatialConfig& config, InteractionSource source, std::mt19937_64& rng);

  const SpatialConfig& config() const { return config_; }
  const InteractionSource& source() const { return source_; }
  std::size_t out_features() const { return config_.heads * config_.head_dim; }
  std::vector<Head>& heads() { return heads_; }
  const std::vector<Head>& heads() const { return heads_; }

  Plan plan() const;
  Mat forward(const Plan& plan, const Mat& x, FrameCache* cache = nullptr) const;
  Mat forward(const Mat& x) const { return forward(plan(), x); }

  Accum make_accum() const;
  /// Backpropagates one frame; returns the gradient w.r.t. the frame input.
  Mat backward(const Plan& plan, const FrameCache& cache, const Mat& d_out, Accum& accum) const;
  /// Converts accumulated effective-matrix gradients into parameter gradients.
  void finish_backward(const Plan& plan, const Accum& accum, GradSet& grads) const;

  void collect_parameters(std::vector<ParamRef>& out);

  /// Processed interaction matrices per head (learnable_sym only).
  std::vector<Mat> processed_interactions() const;
  /// Symmetrized raw interaction matrices per head (learnable_sym only).
  std::vector<Mat> symmetric_interactions() const;

  /// N² + F·F' for learnable_sym; other variants count their own learnable tensors.
  std::size_t parameters_per_head() const;

 /// Parameter name of a head tensor, e.g. "spatial.head0.I".
  static std::string name(std::size_t head, const char* what);

 private:

  SpatialConfig config_;
  InteractionSource source_;
  std::vector<Head> heads_;
};

/// One frame through an InterGAT layer (variant learnable_sym).
Mat intergat_forward(const InterGatLayer& layer, const Mat& x);

/// Masked-attention GAT forward with the layer's projections and attention vectors
/// over adjacency `adjacency`.
Mat basegat_forward(const InterGatLayer& layer, const Mat& x, const Mat& adjacency);

}  // namespace intergat
