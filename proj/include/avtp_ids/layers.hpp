#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "avtp_ids/tensor.hpp"

namespace avtp_ids {

// Layer primitives for the detector CNN. All activations are NHWC
// (batch, height, width, channels); dense inputs are (batch, features).
// Instantiated for float and double.

enum class Mode { train, infer };

// Stride-1 convolution with zero "same" padding. filters: (k, k, cin, cout)
// with odd k; bias: (cout).
template <typename T>
void conv2d_forward(const Tensor<T>& input, const Tensor<T>& filters, const Tensor<T>& bias,
                    Tensor<T>& output);

// d_input may be null when the input gradient is not needed (first layer).
template <typename T>
void conv2d_backward(const Tensor<T>& input, const Tensor<T>& filters, const Tensor<T>& d_output,
                     Tensor<T>* d_input, Tensor<T>& d_filters, Tensor<T>& d_bias);

template <typename T>
struct BatchNorm {
  Tensor<T> gamma;
  Tensor<T> beta;
  Tensor<T> running_mean;
  Tensor<T> running_var;
  T momentum = T(0.99);
  T epsilon = T(0.001);
  // Train-mode updates applied so far. The first one copies the batch
  // statistics; later ones blend with `momentum`.
  std::uint64_t updates = 0;

  explicit BatchNorm(std::size_t channels = 0)
      : gamma({channels}, T(1)), beta({channels}, T(0)), running_mean({channels}, T(0)),
        running_var({channels}, T(1)) {}
};

template <typename T>
struct BatchNormCache {
  Tensor<T> x_hat;
  std::vector<T> inv_std;
};

// Statistics per channel over batch and spatial positions.
template <typename T>
void batchnorm_forward(const Tensor<T>& input, BatchNorm<T>& bn, Mode mode, Tensor<T>& output,
                       BatchNormCache<T>* cache);

template <typename T>
void batchnorm_backward(const Tensor<T>& d_output, const BatchNorm<T>& bn,
                        const BatchNormCache<T>& cache, Tensor<T>& d_input, Tensor<T>& d_gamma,
                        Tensor<T>& d_beta);

// 2x2 max pooling, stride 2. argmax (may be null) receives, per output
// element, the flat input index of the winning element.
template <typename T>
void maxpool2x2_forward(const Tensor<T>& input, Tensor<T>& output,
                        std::vector<std::uint32_t>* argmax);

template <typename T>
void maxpool2x2_backward(const Tensor<T>& d_output, const std::vector<std::uint32_t>& argmax,
                         const Shape& input_shape, Tensor<T>& d_input);

// input (n, d) x weights (d, m) + bias (m).
template <typename T>
void dense_forward(const Tensor<T>& input, const Tensor<T>& weights, const Tensor<T>& bias,
                   Tensor<T>& output);

template <typename T>
void dense_backward(const Tensor<T>& input, const Tensor<T>& weights, const Tensor<T>& d_output,
                    Tensor<T>* d_input, Tensor<T>& d_weights, Tensor<T>& d_bias);

template <typename T>
void relu_forward(Tensor<T>& x);
// Uses the forward output: gradient passes where output > 0.
template <typename T>
void relu_backward(const Tensor<T>& output, Tensor<T>& d);

template <typename T>
T sigmoid(T x);

// Inverted dropout: kept units are scaled by 1 / (1 - rate) so inference
// is the identity. `mask` receives the per-element scale.
template <typename T>
void dropout_forward(Tensor<T>& x, double rate, std::mt19937_64& rng, Mode mode,
                     std::vector<T>& mask);
template <typename T>
void dropout_backward(Tensor<T>& d, const std::vector<T>& mask);

struct BceResult {
  double loss = 0.0;
  std::vector<double> d_pred;  // gradient w.r.t. each (unclamped) prediction
};

inline constexpr double bce_clamp = 1e-7;

// Mean binary cross-entropy with predictions clamped to
// [1e-7, 1 - 1e-7], plus an additive regularisation term.
BceResult bce_loss(std::span<const double> pred, std::span<const double> target,
                   double penalty = 0.0);

}  // namespace avtp_ids
