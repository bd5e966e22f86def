#include "ntn/rmsprop.hpp"

#include <cmath>
#include <stdexcept>

namespace ntn {

Rmsprop::Rmsprop(std::size_t parameter_count, RmspropConfig config)
    : config_(config), mean_square_(parameter_count, 0.0) {
  if (!(config.learning_rate > 0.0)) throw std::invalid_argument("learning rate must be positive");
  if (!(config.decay >= 0.0 && config.decay < 1.0)) throw std::invalid_argument("RMSprop decay must be in [0, 1)");
  if (!(config.epsilon > 0.0)) throw std::invalid_argument("RMSprop epsilon must be positive");
}

void Rmsprop::step(std::span<double> params, std::span<const double> grads) {
  if (params.size() != mean_square_.size() || grads.size() != mean_square_.size()) {
    throw std::invalid_argument("RMSprop buffer size mismatch");
  }
  const double rho = config_.decay;
  const double lr = config_.learning_rate;
  const double eps = config_.epsilon;
  double* ms = mean_square_.data();
  double* theta = params.data();
  const double* grad = grads.data();
#pragma omp simd
  for (std::size_t k = 0; k < params.size(); ++k) {
    const double g = grad[k];
    ms[k] = rho * ms[k] + (1.0 - rho) * g * g;
    theta[k] -= lr * g / (std::sqrt(ms[k]) + eps);
  }
}

}  // namespace ntn
