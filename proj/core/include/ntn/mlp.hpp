#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace ntn {

/// Fully connected network with ReLU hidden layers and a linear output.
///
/// Parameters live in one flat buffer, layer by layer: the weight matrix
/// (row-major, out x in) followed by the bias vector. Optimizers and
/// checkpoints operate on that buffer directly.
class Mlp {
 public:
  /// Forward activations kept for the backward pass. `values[0]` is the
  /// input, `values.back()` the output.
  struct Cache {
    std::vector<std::vector<double>> values;
  };

  Mlp() = default;
  explicit Mlp(std::vector<int> layer_sizes);

  /// Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) for weights and biases.
  void init_uniform(std::mt19937_64& rng);

  const std::vector<int>& layer_sizes() const { return sizes_; }
  std::size_t input_size() const { return static_cast<std::size_t>(sizes_.front()); }
  std::size_t output_size() const { return static_cast<std::size_t>(sizes_.back()); }
  std::size_t parameter_count() const { return params_.size(); }

  std::span<double> parameters() { return params_; }
  std::span<const double> parameters() const { return params_; }

  /// Throws std::invalid_argument if the input size does not match.
  std::span<const double> forward(std::span<const double> input, Cache& cache) const;
  std::vector<double> forward(std::span<const double> input) const;

  /// Adds d(loss)/d(params) to `param_grad` given d(loss)/d(output).
  void backward(const Cache& cache, std::span<const double> output_grad, std::span<double> param_grad) const;

 private:
  std::vector<int> sizes_;
  std::vector<std::size_t> offsets_;  // start of each layer's weights
  std::vector<double> params_;
};

/// True when every parameter is finite.
bool all_finite(std::span<const double> values);

}  // namespace ntn
