#include "ntn/mlp.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/core.h>

namespace ntn {

Mlp::Mlp(std::vector<int> layer_sizes) : sizes_(std::move(layer_sizes)) {
  if (sizes_.size() < 2) throw std::invalid_argument("an MLP needs at least an input and an output layer");
  for (int n : sizes_) {
    if (n < 1) throw std::invalid_argument(fmt::format("layer size {} must be positive", n));
  }
  std::size_t total = 0;
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    offsets_.push_back(total);
    const auto in = static_cast<std::size_t>(sizes_[l]);
    const auto out = static_cast<std::size_t>(sizes_[l + 1]);
    total += out * in + out;
  }
  params_.assign(total, 0.0);
}

void Mlp::init_uniform(std::mt19937_64& rng) {
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    const auto in = static_cast<std::size_t>(sizes_[l]);
    const auto out = static_cast<std::size_t>(sizes_[l + 1]);
    const double bound = 1.0 / std::sqrt(static_cast<double>(in));
    std::uniform_real_distribution<double> dist(-bound, bound);
    double* p = params_.data() + offsets_[l];
    for (std::size_t k = 0; k < out * in + out; ++k) p[k] = dist(rng);
  }
}

std::span<const double> Mlp::forward(std::span<const double> input, Cache& cache) const {
  if (input.size() != input_size()) {
    throw std::invalid_argument(fmt::format("MLP input has {} values, expected {}", input.size(), input_size()));
  }
  const std::size_t layers = sizes_.size();
  cache.values.resize(layers);
  cache.values[0].assign(input.begin(), input.end());
  for (std::size_t l = 0; l + 1 < layers; ++l) {
    const auto in = static_cast<std::size_t>(sizes_[l]);
    const auto out = static_cast<std::size_t>(sizes_[l + 1]);
    const double* w = params_.data() + offsets_[l];
    const double* b = w + out * in;
    const std::vector<double>& x = cache.values[l];
    std::vector<double>& y = cache.values[l + 1];
    y.resize(out);
    const bool hidden = l + 2 < layers;
    for (std::size_t o = 0; o < out; ++o) {
      const double* row = w + o * in;
      double z = 0.0;
#pragma omp simd reduction(+ : z)
      for (std::size_t i = 0; i < in; ++i) z += row[i] * x[i];
      z += b[o];
      y[o] = hidden && z < 0.0 ? 0.0 : z;
    }
  }
  return cache.values.back();
}

std::vector<double> Mlp::forward(std::span<const double> input) const {
  Cache cache;
  forward(input, cache);
  return std::move(cache.values.back());
}

void Mlp::backward(const Cache& cache, std::span<const double> output_grad, std::span<double> param_grad) const {
  if (param_grad.size() != params_.size()) throw std::invalid_argument("gradient buffer size mismatch");
  if (output_grad.size() != output_size()) throw std::invalid_argument("output gradient size mismatch");
  if (cache.values.size() != sizes_.size()) throw std::invalid_argument("cache does not belong to this network");
  std::vector<double> delta(output_grad.begin(), output_grad.end());
  std::vector<double> prev;
  for (std::size_t l = sizes_.size() - 1; l-- > 0;) {
    const auto in = static_cast<std::size_t>(sizes_[l]);
    const auto out = static_cast<std::size_t>(sizes_[l + 1]);
    const double* w = params_.data() + offsets_[l];
    double* gw = param_grad.data() + offsets_[l];
    double* gb = gw + out * in;
    const std::vector<double>& x = cache.values[l];
    for (std::size_t o = 0; o < out; ++o) {
      const double d = delta[o];
      gb[o] += d;
      if (d == 0.0) continue;
      double* grow = gw + o * in;
#pragma omp simd
      for (std::size_t i = 0; i < in; ++i) grow[i] += d * x[i];
    }
    if (l == 0) break;
    prev.assign(in, 0.0);
    for (std::size_t o = 0; o < out; ++o) {
      const double d = delta[o];
      if (d == 0.0) continue;
      const double* row = w + o * in;
#pragma omp simd
      for (std::size_t i = 0; i < in; ++i) prev[i] += d * row[i];
    }
    // ReLU derivative: inactive units carry no gradient.
    for (std::size_t i = 0; i < in; ++i) {
      if (!(x[i] > 0.0)) prev[i] = 0.0;
    }
    delta.swap(prev);
  }
}

bool all_finite(std::span<const double> values) {
  for (double v : values) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

}  // namespace ntn
