#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "avtp_ids/feature_gen.hpp"
#include "avtp_ids/layers.hpp"

namespace avtp_ids {

struct Hyper {
  std::size_t w = default_window;
  std::size_t j = layout::prefix_len;
  double l2_lambda = 0.01;
  double dropout_rate = 0.3;
  double bn_momentum = 0.99;
  double bn_epsilon = 0.001;
};

inline constexpr std::size_t conv1_filters = 32;
inline constexpr std::size_t conv2_filters = 64;
inline constexpr std::size_t kernel_size = 5;
inline constexpr std::size_t dense_units = 64;

// Conv(5x5, 32, ReLU) -> BN -> MaxPool -> Conv(5x5, 64, ReLU) -> BN -> MaxPool
// -> Flatten -> Dropout -> Dense(64, ReLU) -> Dropout -> Dense(1, sigmoid).
template <typename T>
struct Network {
  Hyper hyper;
  Tensor<T> conv1_w, conv1_b;
  BatchNorm<T> bn1;
  Tensor<T> conv2_w, conv2_b;
  BatchNorm<T> bn2;
  Tensor<T> dense1_w, dense1_b;
  Tensor<T> dense2_w, dense2_b;

  std::size_t height() const { return hyper.w; }
  std::size_t width() const { return 2 * hyper.j; }
  std::size_t flatten_size() const { return (height() / 4) * (width() / 4) * conv2_filters; }

  template <typename U>
  Network<U> cast() const;
};

using Model = Network<double>;

// Visits every trainable tensor as (name, tensor) in a fixed order.
template <typename T, typename F>
void for_each_param(Network<T>& net, F&& f) {
  f("conv1.w", net.conv1_w);
  f("conv1.b", net.conv1_b);
  f("bn1.gamma", net.bn1.gamma);
  f("bn1.beta", net.bn1.beta);
  f("conv2.w", net.conv2_w);
  f("conv2.b", net.conv2_b);
  f("bn2.gamma", net.bn2.gamma);
  f("bn2.beta", net.bn2.beta);
  f("dense1.w", net.dense1_w);
  f("dense1.b", net.dense1_b);
  f("dense2.w", net.dense2_w);
  f("dense2.b", net.dense2_b);
}

// He-uniform for the ReLU layers, Glorot-uniform for the sigmoid head, zero
// biases. BN starts at gamma 1, beta 0, running mean 0, running var 1.
Model build_model(std::size_t w, std::size_t j = layout::prefix_len, std::uint64_t seed = 0,
                  Hyper hyper = {});

// Same shapes as `model`, all zero.
Model zeros_like(const Model& model);

// Activations of one forward pass, kept for the backward pass.
template <typename T>
struct ForwardCache {
  Tensor<T> input;
  Tensor<T> conv1, bn1, pool1;
  Tensor<T> conv2, bn2, pool2;
  Tensor<T> flat, dense1, dense1_drop, logits;
  std::vector<T> prob;
  BatchNormCache<T> bn1_cache, bn2_cache;
  std::vector<std::uint32_t> pool1_argmax, pool2_argmax;
  std::vector<T> drop1_mask, drop2_mask;
};

// Nibble matrices scaled to [0, 1) by 1/16, shaped (n, w, 2j, 1).
template <typename T>
Tensor<T> make_input(const FeatureDataset& data, std::span<const std::size_t> indices);

// dropout_rng == nullptr disables dropout (used by inference and the
// gradient checks). Train mode updates BN running statistics.
template <typename T>
void forward(Network<T>& net, const Tensor<T>& input, Mode mode, std::mt19937_64* dropout_rng,
             ForwardCache<T>& cache);

// Sum over the conv kernels of w^2, times l2_lambda.
double l2_penalty(const Model& model);

// One train-mode forward/backward pass. Fills `grads` (shaped like the
// model) and returns the regularised batch loss.
double compute_gradients(Model& model, const Tensor<double>& input,
                         std::span<const double> targets, Model& grads,
                         std::mt19937_64* dropout_rng, ForwardCache<double>& cache);

struct AdamState {
  double learning_rate = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-7;
  std::uint64_t step = 0;
  std::vector<std::vector<double>> m, v;
};

// step is incremented first; update = lr * m_hat / (sqrt(v_hat) + eps).
void adam_step(std::span<Tensor<double>* const> params, std::span<const Tensor<double>* const> grads,
               AdamState& state);
void adam_step(Model& model, Model& grads, AdamState& state);

struct TrainConfig {
  std::size_t batch_size = 64;
  std::size_t epochs = 30;
  std::uint64_t seed = 0;
  bool shuffle = true;
  double learning_rate = 0.001;
  // Re-estimate BN running statistics over the training set after the last
  // epoch, with the final weights.
  bool recalibrate_bn = true;
};

struct EpochStats {
  std::size_t epoch = 0;
  double loss = 0.0;
  double accuracy = 0.0;
  double seconds = 0.0;
};

struct TrainHistory {
  std::vector<EpochStats> epochs;
  std::size_t samples = 0;
  double time_per_sample_us = 0.0;  // wall time / (samples * epochs)
};

using EpochCallback = std::function<void(const EpochStats&)>;

// Replaces the BN running statistics with the average batch statistics of
// `data` under the current weights. No parameter changes.
void recalibrate_batchnorm(Model& model, const FeatureDataset& data, std::size_t batch_size = 64);

TrainHistory train(Model& model, const FeatureDataset& data, const TrainConfig& config,
                   const EpochCallback& on_epoch = {});

// Inference-mode scorer (running BN statistics, no dropout). Holds its own
// workspace, so one Predictor serves one thread.
template <typename T>
class BasicPredictor {
 public:
  explicit BasicPredictor(const Model& model);

  std::size_t window() const { return net_.hyper.w; }
  double predict(std::span<const std::uint8_t> nibbles);
  std::vector<double> predict(const FeatureDataset& data, std::size_t batch = 64);

 private:
  Network<T> net_;
  ForwardCache<T> cache_;
};

using Predictor = BasicPredictor<float>;

// Scores every matrix in `data` with float Predictors; `threads` > 1 splits
// the work by sample.
std::vector<double> predict(const Model& model, const FeatureDataset& data,
                            std::size_t threads = 1);

void save_model(const std::filesystem::path& path, const Model& model);
Model load_model(const std::filesystem::path& path);

struct LayerShape {
  std::string name;
  Shape shape;  // per-sample output shape
};

// Output shape of every layer, read off an actual forward pass.
std::vector<LayerShape> layer_shapes(const Model& model);

}  // namespace avtp_ids
