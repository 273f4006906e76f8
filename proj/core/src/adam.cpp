#include "intergat/adam.hpp"

#include <cmath>

#include "intergat/error.hpp"

namespace intergat {

void adam_step(std::vector<ParamRef>& params, const GradSet& grads, AdamState& state, const AdamConfig& config) {
  ++state.step;
  const double bias1 = 1.0 - std::pow(config.beta1, static_cast<double>(state.step));
  const double bias2 = 1.0 - std::pow(config.beta2, static_cast<double>(state.step));
  for (auto& p : params) {
    Mat& theta = *p.value;
    const Mat* g = grads.contains(p.name) ? &grads.at(p.name) : nullptr;
    if (g != nullptr) require_same_shape(theta, *g, ("adam gradient for " + p.name).c_str());
    auto [m_it, m_new] = state.first.try_emplace(p.name, theta.rows(), theta.cols());
    auto [v_it, v_new] = state.second.try_emplace(p.name, theta.rows(), theta.cols());
    Mat& m = m_it->second;
    Mat& v = v_it->second;
    require_same_shape(theta, m, ("adam state for " + p.name).c_str());
    auto th = theta.values();
    auto mv = m.values();
    auto vv = v.values();
    for (std::size_t i = 0; i < th.size(); ++i) {
      const double grad = (g != nullptr ? g->values()[i] : 0.0) + config.weight_decay * th[i];
      mv[i] = config.beta1 * mv[i] + (1.0 - config.beta1) * grad;
      vv[i] = config.beta2 * vv[i] + (1.0 - config.beta2) * grad * grad;
      const double m_hat = mv[i] / bias1;
      const double v_hat = vv[i] / bias2;
      th[i] -= config.learning_rate * m_hat / (std::sqrt(v_hat) + config.epsilon);
    }
  }
}

}  // namespace intergat
