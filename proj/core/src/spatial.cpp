#include "intergat/spatial.hpp"

#include <cmath>

#include "intergat/error.hpp"
#include "intergat/ops.hpp"

namespace intergat {
namespace {

Mat uniform(std::size_t rows, std::size_t cols, double bound, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-bound, bound);
  Mat m(rows, cols);
  for (double& v : m.values()) v = dist(rng);
  return m;
}

void add_into(std::vector<Mat>& dst, const std::vector<Mat>& src) {
  for (std::size_t i = 0; i < dst.size() && i < src.size(); ++i) {
    if (dst[i].empty()) {
      dst[i] = src[i];
    } else if (!src[i].empty()) {
      dst[i] += src[i];
    }
  }
}

}  // namespace

InterGatLayer::Accum& InterGatLayer::Accum::operator+=(const Accum& other) {
  add_into(d_projection, other.d_projection);
  add_into(d_effective, other.d_effective);
  add_into(d_attention, other.d_attention);
  return *this;
}

InterGatLayer::InterGatLayer(const SpatialConfig& config, InteractionSource source, std::mt19937_64& rng)
    : config_(config), source_(std::move(source)) {
  if (config_.nodes == 0 || config_.in_features == 0 || config_.heads == 0 || config_.head_dim == 0) {
    throw UsageError("InterGatLayer: nodes, features, heads and head_dim must be positive");
  }
  if (source_.variant != config_.variant) throw UsageError("InterGatLayer: interaction source variant mismatch");
  const std::size_t n = config_.nodes;
  if (config_.variant != Variant::learnable_sym && (source_.base.rows() != n || source_.base.cols() != n)) {
    throw DimensionError("InterGatLayer: base matrix " + source_.base.shape_string() + " does not match " +
                         std::to_string(n) + " nodes");
  }
  const double glorot = std::sqrt(6.0 / static_cast<double>(config_.in_features + config_.head_dim));
  heads_.resize(config_.heads);
  for (Head& h : heads_) {
    h.projection = uniform(config_.in_features, config_.head_dim, glorot, rng);
    switch (config_.variant) {
      case Variant::learnable_sym:
        h.interaction = uniform(n, n, 1.0 / std::sqrt(static_cast<double>(n)), rng);
        break;
      case Variant::none:
        h.attention = uniform(2 * config_.head_dim, 1, std::sqrt(6.0 / static_cast<double>(2 * config_.head_dim + 1)), rng);
        break;
      case Variant::weighted_adjacency:
      case Variant::weighted_covariance:
        h.scale = Mat(n, n, 1.0);
        break;
      default:
        break;
    }
  }
}

std::string InterGatLayer::name(std::size_t head, const char* what) {
  return "spatial.head" + std::to_string(head) + "." + what;
}

InterGatLayer::Plan InterGatLayer::plan() const {
  Plan p;
  p.effective.resize(heads_.size());
  p.caches.resize(heads_.size());
  for (std::size_t k = 0; k < heads_.size(); ++k) {
    switch (config_.variant) {
      case Variant::learnable_sym:
        p.effective[k] =
            process_interaction(heads_[k].interaction, config_.layer_norm_eps, config_.layer_norm_axis, p.caches[k]);
        break;
      case Variant::weighted_adjacency:
      case Variant::weighted_covariance:
        p.effective[k] = hadamard(heads_[k].scale, source_.base);
        break;
      case Variant::adjacency:
      case Variant::spectral_block:
        p.effective[k] = source_.base;
        break;
      case Variant::none:
        break;  // attention is input dependent
    }
  }
  return p;
}

Mat InterGatLayer::forward(const Plan& plan, const Mat& x, FrameCache* cache) const {
  if (x.rows() != config_.nodes || x.cols() != config_.in_features) {
    throw DimensionError("InterGatLayer: input " + x.shape_string() + " expected (" + std::to_string(config_.nodes) +
                         "x" + std::to_string(config_.in_features) + ")");
  }
  const std::size_t d = config_.head_dim;
  Mat out(config_.nodes, out_features());
  if (cache != nullptr) {
    cache->input = x;
    cache->projected.assign(heads_.size(), {});
    cache->pre_activation.assign(heads_.size(), {});
    cache->attention.assign(config_.variant == Variant::none ? heads_.size() : 0, {});
  }
  for (std::size_t k = 0; k < heads_.size(); ++k) {
    Mat h = matmul(x, heads_[k].projection);
    Mat pre;
    if (config_.variant == Variant::none) {
      AttentionCache local;
      AttentionCache& ac = cache != nullptr ? cache->attention[k] : local;
      pre = matmul(gat_attention(h, heads_[k].attention, source_.base, config_.leaky_slope, ac), h);
    } else {
      pre = matmul(plan.effective[k], h);
    }
    set_col_block(out, elu(pre, config_.elu_alpha), k * d);
    if (cache != nullptr) {
      cache->projected[k] = std::move(h);
      cache->pre_activation[k] = std::move(pre);
    }
  }
  return out;
}

InterGatLayer::Accum InterGatLayer::make_accum() const {
  Accum a;
  a.d_projection.resize(heads_.size());
  a.d_effective.resize(heads_.size());
  a.d_attention.resize(heads_.size());
  for (std::size_t k = 0; k < heads_.size(); ++k) {
    a.d_projection[k] = Mat(config_.in_features, config_.head_dim);
    if (config_.variant == Variant::none) {
      a.d_attention[k] = Mat(2 * config_.head_dim, 1);
    } else {
      a.d_effective[k] = Mat(config_.nodes, config_.nodes);
    }
  }
  return a;
}

Mat InterGatLayer::backward(const Plan& plan, const FrameCache& cache, const Mat& d_out, Accum& accum) const {
  const std::size_t d = config_.head_dim;
  Mat dx(config_.nodes, config_.in_features);
  for (std::size_t k = 0; k < heads_.size(); ++k) {
    const Mat& h = cache.projected[k];
    const Mat d_pre = elu_backward(cache.pre_activation[k], col_block(d_out, k * d, d), config_.elu_alpha);
    Mat dh;
    if (config_.variant == Variant::none) {
      const AttentionCache& ac = cache.attention[k];
      dh = matmul_tn(ac.attention, d_pre);
      const AttentionGrads g = gat_attention_backward(h, heads_[k].attention, source_.base, config_.leaky_slope, ac,
                                                      matmul_nt(d_pre, h));
      dh += g.dh;
      accum.d_attention[k] += g.da;
    } else {
      dh = matmul_tn(plan.effective[k], d_pre);
      accum.d_effective[k] += matmul_nt(d_pre, h);
    }
    accum.d_projection[k] += matmul_tn(cache.input, dh);
    dx += matmul_nt(dh, heads_[k].projection);
  }
  return dx;
}

void InterGatLayer::finish_backward(const Plan& plan, const Accum& accum, GradSet& grads) const {
  for (std::size_t k = 0; k < heads_.size(); ++k) {
    grads.accumulate(name(k, "W"), accum.d_projection[k]);
    switch (config_.variant) {
      case Variant::learnable_sym:
        grads.accumulate(name(k, "I"), process_interaction_backward(plan.caches[k], accum.d_effective[k]));
        break;
      case Variant::weighted_adjacency:
      case Variant::weighted_covariance:
        grads.accumulate(name(k, "S"), hadamard(accum.d_effective[k], source_.base));
        break;
      case Variant::none:
        grads.accumulate(name(k, "a"), accum.d_attention[k]);
        break;
      default:
        break;
    }
  }
}

void InterGatLayer::collect_parameters(std::vector<ParamRef>& out) {
  for (std::size_t k = 0; k < heads_.size(); ++k) {
    out.push_back({name(k, "W"), &heads_[k].projection});
    if (!heads_[k].interaction.empty()) out.push_back({name(k, "I"), &heads_[k].interaction});
    if (!heads_[k].scale.empty()) out.push_back({name(k, "S"), &heads_[k].scale});
    if (!heads_[k].attention.empty()) out.push_back({name(k, "a"), &heads_[k].attention});
  }
}

std::vector<Mat> InterGatLayer::processed_interactions() const {
  if (config_.variant != Variant::learnable_sym) throw UsageError("processed_interactions: layer has no interaction matrices");
  return plan().effective;
}

std::vector<Mat> InterGatLayer::symmetric_interactions() const {
  if (config_.variant != Variant::learnable_sym) throw UsageError("symmetric_interactions: layer has no interaction matrices");
  std::vector<Mat> out;
  for (const Head& h : heads_) out.push_back(symmetrize(h.interaction));
  return out;
}

std::size_t InterGatLayer::parameters_per_head() const {
  if (heads_.empty()) return 0;
  const Head& h = heads_.front();
  return h.projection.size() + h.interaction.size() + h.scale.size() + h.attention.size();
}

Mat intergat_forward(const InterGatLayer& layer, const Mat& x) {
  if (layer.config().variant != Variant::learnable_sym) throw UsageError("intergat_forward: layer is not learnable_sym");
  return layer.forward(x);
}

Mat basegat_forward(const InterGatLayer& layer, const Mat& x, const Mat& adjacency) {
  if (layer.config().variant != Variant::none) throw UsageError("basegat_forward: layer is not a masked-attention layer");
  if (adjacency.rows() != layer.config().nodes || adjacency.cols() != layer.config().nodes) {
    throw DimensionError("basegat_forward: adjacency " + adjacency.shape_string() + " does not match layer");
  }
  SpatialConfig cfg = layer.config();
  std::mt19937_64 unused(0);
  InterGatLayer masked(cfg, InteractionSource{Variant::none, attention_mask(adjacency)}, unused);
  masked.heads() = layer.heads();
  return masked.forward(x);
}

}  // namespace intergat
