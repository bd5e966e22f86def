#pragma once

#include <span>
#include <vector>

namespace ntn {

struct RmspropConfig {
  double learning_rate = 1e-4;
  double decay = 0.99;
  double epsilon = 1e-8;
};

/// s <- rho*s + (1-rho)*g^2;  theta <- theta - lr * g / (sqrt(s) + eps)
class Rmsprop {
 public:
  Rmsprop() = default;
  Rmsprop(std::size_t parameter_count, RmspropConfig config);

  void step(std::span<double> params, std::span<const double> grads);

  const RmspropConfig& config() const { return config_; }
  std::span<const double> mean_square() const { return mean_square_; }
  std::span<double> mean_square() { return mean_square_; }

 private:
  RmspropConfig config_;
  std::vector<double> mean_square_;
};

}  // namespace ntn
