#include "avtp_ids/model.hpp"

#include <bit>
#include <chrono>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <thread>

namespace avtp_ids {

namespace {

double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

void uniform_init(Tensor<double>& t, double limit, std::mt19937_64& rng) {
  for (auto& v : t) v = limit * (2.0 * unit_uniform(rng) - 1.0);
}

template <typename U, typename T>
BatchNorm<U> cast_bn(const BatchNorm<T>& bn) {
  BatchNorm<U> out;
  out.gamma = bn.gamma.template cast<U>();
  out.beta = bn.beta.template cast<U>();
  out.running_mean = bn.running_mean.template cast<U>();
  out.running_var = bn.running_var.template cast<U>();
  out.momentum = static_cast<U>(bn.momentum);
  out.epsilon = static_cast<U>(bn.epsilon);
  out.updates = bn.updates;
  return out;
}

}  // namespace

template <typename T>
template <typename U>
Network<U> Network<T>::cast() const {
  Network<U> out;
  out.hyper = hyper;
  out.conv1_w = conv1_w.template cast<U>();
  out.conv1_b = conv1_b.template cast<U>();
  out.bn1 = cast_bn<U>(bn1);
  out.conv2_w = conv2_w.template cast<U>();
  out.conv2_b = conv2_b.template cast<U>();
  out.bn2 = cast_bn<U>(bn2);
  out.dense1_w = dense1_w.template cast<U>();
  out.dense1_b = dense1_b.template cast<U>();
  out.dense2_w = dense2_w.template cast<U>();
  out.dense2_b = dense2_b.template cast<U>();
  return out;
}

template Network<float> Network<double>::cast<float>() const;
template Network<double> Network<double>::cast<double>() const;

Model build_model(std::size_t w, std::size_t j, std::uint64_t seed, Hyper hyper) {
  validate_window(w);
  if (j == 0 || (2 * j) % 4 != 0) {
    throw Error(Errc::odd_dimension, "2j = " + std::to_string(2 * j) + " must be divisible by 4");
  }
  hyper.w = w;
  hyper.j = j;

  Model m;
  m.hyper = hyper;
  std::mt19937_64 rng(seed);
  const std::size_t k = kernel_size;

  m.conv1_w = Tensor<double>({k, k, 1, conv1_filters});
  uniform_init(m.conv1_w, std::sqrt(6.0 / (k * k * 1)), rng);
  m.conv1_b = Tensor<double>({conv1_filters});
  m.bn1 = BatchNorm<double>(conv1_filters);

  m.conv2_w = Tensor<double>({k, k, conv1_filters, conv2_filters});
  uniform_init(m.conv2_w, std::sqrt(6.0 / (k * k * conv1_filters)), rng);
  m.conv2_b = Tensor<double>({conv2_filters});
  m.bn2 = BatchNorm<double>(conv2_filters);

  for (auto* bn : {&m.bn1, &m.bn2}) {
    bn->momentum = hyper.bn_momentum;
    bn->epsilon = hyper.bn_epsilon;
  }

  const std::size_t flat = m.flatten_size();
  m.dense1_w = Tensor<double>({flat, dense_units});
  uniform_init(m.dense1_w, std::sqrt(6.0 / flat), rng);
  m.dense1_b = Tensor<double>({dense_units});
  m.dense2_w = Tensor<double>({dense_units, 1});
  uniform_init(m.dense2_w, std::sqrt(6.0 / (dense_units + 1)), rng);
  m.dense2_b = Tensor<double>({1});
  return m;
}

Model zeros_like(const Model& model) {
  Model z = model;
  for_each_param(z, [](const char*, Tensor<double>& t) { t.fill(0.0); });
  return z;
}

template <typename T>
Tensor<T> make_input(const FeatureDataset& data, std::span<const std::size_t> indices) {
  const std::size_t per = data.window() * data.cols();
  Tensor<T> x({indices.size(), data.window(), data.cols(), 1});
  for (std::size_t s = 0; s < indices.size(); ++s) {
    const auto v = data.values(indices[s]);
    T* out = x.data() + s * per;
    for (std::size_t k = 0; k < per; ++k) out[k] = static_cast<T>(v[k]) / T(16);
  }
  return x;
}

template <typename T>
void forward(Network<T>& net, const Tensor<T>& input, Mode mode, std::mt19937_64* dropout_rng,
             ForwardCache<T>& c) {
  require_shape({input.dim(1), input.dim(2), input.dim(3)},
                {net.height(), net.width(), 1}, "model input");
  const bool train = mode == Mode::train;
  const std::size_t n = input.dim(0);
  if (&c.input != &input) c.input = input;

  conv2d_forward(c.input, net.conv1_w, net.conv1_b, c.conv1);
  relu_forward(c.conv1);
  batchnorm_forward(c.conv1, net.bn1, mode, c.bn1, train ? &c.bn1_cache : nullptr);
  maxpool2x2_forward(c.bn1, c.pool1, train ? &c.pool1_argmax : nullptr);

  conv2d_forward(c.pool1, net.conv2_w, net.conv2_b, c.conv2);
  relu_forward(c.conv2);
  batchnorm_forward(c.conv2, net.bn2, mode, c.bn2, train ? &c.bn2_cache : nullptr);
  maxpool2x2_forward(c.bn2, c.pool2, train ? &c.pool2_argmax : nullptr);

  c.flat = c.pool2;
  c.flat.reshape({n, net.flatten_size()});
  c.drop1_mask.clear();
  c.drop2_mask.clear();
  if (train && dropout_rng) dropout_forward(c.flat, net.hyper.dropout_rate, *dropout_rng, mode, c.drop1_mask);

  dense_forward(c.flat, net.dense1_w, net.dense1_b, c.dense1);
  relu_forward(c.dense1);
  c.dense1_drop = c.dense1;
  if (train && dropout_rng) {
    dropout_forward(c.dense1_drop, net.hyper.dropout_rate, *dropout_rng, mode, c.drop2_mask);
  }

  dense_forward(c.dense1_drop, net.dense2_w, net.dense2_b, c.logits);
  c.prob.resize(n);
  for (std::size_t s = 0; s < n; ++s) c.prob[s] = sigmoid(c.logits[s]);
}

double l2_penalty(const Model& model) {
  double sum = 0.0;
  for (const auto* t : {&model.conv1_w, &model.conv2_w}) {
    for (const double v : *t) sum += v * v;
  }
  return model.hyper.l2_lambda * sum;
}

double compute_gradients(Model& model, const Tensor<double>& input,
                         std::span<const double> targets, Model& grads,
                         std::mt19937_64* dropout_rng, ForwardCache<double>& c) {
  forward(model, input, Mode::train, dropout_rng, c);
  const std::size_t n = input.dim(0);
  std::vector<double> prob(c.prob.begin(), c.prob.end());
  const double loss = bce_loss(prob, targets, l2_penalty(model)).loss;

  // d(mean BCE)/d(logit) = (p - y) / n for sigmoid outputs.
  Tensor<double> d_logits({n, 1});
  for (std::size_t s = 0; s < n; ++s) d_logits[s] = (prob[s] - targets[s]) / static_cast<double>(n);

  Tensor<double> a, b;
  dense_backward(c.dense1_drop, model.dense2_w, d_logits, &a, grads.dense2_w, grads.dense2_b);
  if (!c.drop2_mask.empty()) dropout_backward(a, c.drop2_mask);
  relu_backward(c.dense1, a);
  dense_backward(c.flat, model.dense1_w, a, &b, grads.dense1_w, grads.dense1_b);
  if (!c.drop1_mask.empty()) dropout_backward(b, c.drop1_mask);
  b.reshape(c.pool2.shape());

  maxpool2x2_backward(b, c.pool2_argmax, c.bn2.shape(), a);
  batchnorm_backward(a, model.bn2, c.bn2_cache, b, grads.bn2.gamma, grads.bn2.beta);
  relu_backward(c.conv2, b);
  conv2d_backward(c.pool1, model.conv2_w, b, &a, grads.conv2_w, grads.conv2_b);

  maxpool2x2_backward(a, c.pool1_argmax, c.bn1.shape(), b);
  batchnorm_backward(b, model.bn1, c.bn1_cache, a, grads.bn1.gamma, grads.bn1.beta);
  relu_backward(c.conv1, a);
  conv2d_backward<double>(c.input, model.conv1_w, a, nullptr, grads.conv1_w, grads.conv1_b);

  const double l2 = 2.0 * model.hyper.l2_lambda;
  for (std::size_t k = 0; k < model.conv1_w.size(); ++k) grads.conv1_w[k] += l2 * model.conv1_w[k];
  for (std::size_t k = 0; k < model.conv2_w.size(); ++k) grads.conv2_w[k] += l2 * model.conv2_w[k];
  return loss;
}

void adam_step(std::span<Tensor<double>* const> params, std::span<const Tensor<double>* const> grads,
               AdamState& state) {
  if (params.size() != grads.size()) {
    throw Error(Errc::shape_mismatch, "adam: parameter and gradient counts differ");
  }
  if (state.m.empty()) {
    for (const auto* p : params) {
      state.m.emplace_back(p->size(), 0.0);
      state.v.emplace_back(p->size(), 0.0);
    }
  }
  if (state.m.size() != params.size()) {
    throw Error(Errc::shape_mismatch, "adam: state tracks a different parameter list");
  }
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double c1 = 1.0 - std::pow(state.beta1, t);
  const double c2 = 1.0 - std::pow(state.beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    Tensor<double>& p = *params[i];
    const Tensor<double>& g = *grads[i];
    if (p.shape() != g.shape() || state.m[i].size() != p.size()) {
      throw Error(Errc::shape_mismatch, "adam: parameter " + std::to_string(i));
    }
    auto& m = state.m[i];
    auto& v = state.v[i];
    for (std::size_t k = 0; k < p.size(); ++k) {
      m[k] = state.beta1 * m[k] + (1.0 - state.beta1) * g[k];
      v[k] = state.beta2 * v[k] + (1.0 - state.beta2) * g[k] * g[k];
      const double m_hat = m[k] / c1;
      const double v_hat = v[k] / c2;
      p[k] -= state.learning_rate * m_hat / (std::sqrt(v_hat) + state.epsilon);
    }
  }
}

void adam_step(Model& model, Model& grads, AdamState& state) {
  std::vector<Tensor<double>*> params;
  std::vector<const Tensor<double>*> g;
  for_each_param(model, [&](const char*, Tensor<double>& t) { params.push_back(&t); });
  for_each_param(grads, [&](const char*, Tensor<double>& t) { g.push_back(&t); });
  adam_step(params, g, state);
}

TrainHistory train(Model& model, const FeatureDataset& data, const TrainConfig& config,
                   const EpochCallback& on_epoch) {
  if (config.batch_size == 0 || config.epochs == 0) {
    throw Error(Errc::invalid_config, "batch_size and epochs must be >= 1");
  }
  if (data.window() != model.hyper.w || data.cols() != model.width()) {
    throw Error(Errc::shape_mismatch, "dataset " + std::to_string(data.window()) + "x" +
                                          std::to_string(data.cols()) + " for a model expecting " +
                                          std::to_string(model.hyper.w) + "x" +
                                          std::to_string(model.width()));
  }
  if (data.empty()) throw Error(Errc::too_few_samples, "empty training set");
  std::vector<double> targets(data.size());
  for (std::size_t k = 0; k < data.size(); ++k) {
    if (data.label(k) == Label::unlabeled) {
      throw Error(Errc::invalid_config, "training sample " + std::to_string(k) + " is unlabeled");
    }
    targets[k] = data.label(k) == Label::injected ? 1.0 : 0.0;
  }

  std::mt19937_64 rng(config.seed);
  AdamState adam;
  adam.learning_rate = config.learning_rate;
  Model grads = zeros_like(model);
  ForwardCache<double> cache;
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> batch_targets;

  TrainHistory history;
  history.samples = data.size();
  const auto started = std::chrono::steady_clock::now();
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    const auto epoch_start = std::chrono::steady_clock::now();
    if (config.shuffle) {
      for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng() % i]);
    }
    double loss_sum = 0.0;
    std::size_t correct = 0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t end = std::min(order.size(), start + config.batch_size);
      const std::span<const std::size_t> batch(order.data() + start, end - start);
      batch_targets.clear();
      for (const auto k : batch) batch_targets.push_back(targets[k]);
      cache.input = make_input<double>(data, batch);
      const double loss = compute_gradients(model, cache.input, batch_targets, grads, &rng, cache);
      adam_step(model, grads, adam);
      loss_sum += loss * static_cast<double>(batch.size());
      for (std::size_t s = 0; s < batch.size(); ++s) {
        if ((cache.prob[s] >= 0.5) == (batch_targets[s] == 1.0)) ++correct;
      }
    }
    EpochStats stats;
    stats.epoch = epoch + 1;
    stats.loss = loss_sum / static_cast<double>(order.size());
    stats.accuracy = static_cast<double>(correct) / static_cast<double>(order.size());
    stats.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - epoch_start).count();
    history.epochs.push_back(stats);
    if (on_epoch) on_epoch(stats);
  }
  const double total =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  history.time_per_sample_us =
      total * 1e6 / static_cast<double>(data.size() * config.epochs);
  if (config.recalibrate_bn) recalibrate_batchnorm(model, data, config.batch_size);
  return history;
}

void recalibrate_batchnorm(Model& model, const FeatureDataset& data, std::size_t batch_size) {
  if (data.empty() || batch_size == 0) return;
  const double momentum1 = model.bn1.momentum, momentum2 = model.bn2.momentum;
  const std::uint64_t updates1 = model.bn1.updates, updates2 = model.bn2.updates;
  model.bn1.updates = model.bn2.updates = 0;
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  ForwardCache<double> cache;
  std::size_t seen = 0;
  for (std::size_t start = 0; start < order.size(); start += batch_size) {
    const std::size_t end = std::min(order.size(), start + batch_size);
    const std::span<const std::size_t> batch(order.data() + start, end - start);
    // Running average weighted by batch size.
    const double keep = static_cast<double>(seen) / static_cast<double>(seen + batch.size());
    model.bn1.momentum = model.bn2.momentum = keep;
    forward(model, make_input<double>(data, batch), Mode::train, nullptr, cache);
    seen += batch.size();
  }
  model.bn1.momentum = momentum1;
  model.bn2.momentum = momentum2;
  model.bn1.updates = updates1;
  model.bn2.updates = updates2;
}

template <typename T>
BasicPredictor<T>::BasicPredictor(const Model& model) : net_(model.template cast<T>()) {}

template <typename T>
double BasicPredictor<T>::predict(std::span<const std::uint8_t> nibbles) {
  const std::size_t per = net_.height() * net_.width();
  if (nibbles.size() != per) {
    throw Error(Errc::shape_mismatch, "matrix of " + std::to_string(nibbles.size()) +
                                          " values, model expects " + std::to_string(per));
  }
  cache_.input.resize({1, net_.height(), net_.width(), 1});
  for (std::size_t k = 0; k < per; ++k) cache_.input[k] = static_cast<T>(nibbles[k]) / T(16);
  forward(net_, cache_.input, Mode::infer, nullptr, cache_);
  return static_cast<double>(cache_.prob[0]);
}

template <typename T>
std::vector<double> BasicPredictor<T>::predict(const FeatureDataset& data, std::size_t batch) {
  if (data.window() != net_.height() || data.cols() != net_.width()) {
    throw Error(Errc::model_window_mismatch,
                "dataset window " + std::to_string(data.window()) + ", model window " +
                    std::to_string(net_.height()));
  }
  batch = std::max<std::size_t>(batch, 1);
  std::vector<double> out;
  out.reserve(data.size());
  std::vector<std::size_t> idx;
  for (std::size_t start = 0; start < data.size(); start += batch) {
    idx.resize(std::min(batch, data.size() - start));
    std::iota(idx.begin(), idx.end(), start);
    cache_.input = make_input<T>(data, idx);
    forward(net_, cache_.input, Mode::infer, nullptr, cache_);
    for (const T p : cache_.prob) out.push_back(static_cast<double>(p));
  }
  return out;
}

template class BasicPredictor<float>;
template class BasicPredictor<double>;

std::vector<double> predict(const Model& model, const FeatureDataset& data, std::size_t threads) {
  threads = std::max<std::size_t>(1, std::min(threads, data.size()));
  if (threads <= 1) return Predictor(model).predict(data);
  std::vector<std::vector<double>> parts(threads);
  std::vector<std::thread> workers;
  const std::size_t chunk = (data.size() + threads - 1) / threads;
  for (std::size_t t = 0; t < threads; ++t) {
    workers.emplace_back([&, t] {
      const std::size_t begin = std::min(data.size(), t * chunk);
      const std::size_t end = std::min(data.size(), begin + chunk);
      std::vector<std::size_t> idx(end - begin);
      std::iota(idx.begin(), idx.end(), begin);
      parts[t] = Predictor(model).predict(data.subset(idx));
    });
  }
  for (auto& w : workers) w.join();
  std::vector<double> out;
  out.reserve(data.size());
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

// Model file, all integers and doubles little-endian:
//   "AVTPCNN1"  u32 version  u32 w  u32 j
//   f64 l2_lambda  f64 dropout_rate  f64 bn_momentum  f64 bn_epsilon
//   u64 bn1.updates  u64 bn2.updates  u32 tensor_count
//   per tensor: u16 name_len, name, u32 rank, u64 dims[rank], f64 values[]
namespace {

constexpr char model_magic[8] = {'A', 'V', 'T', 'P', 'C', 'N', 'N', '1'};
constexpr std::uint32_t model_version = 1;

class ByteWriter {
 public:
  template <typename U>
  void put(U value) {
    for (std::size_t k = 0; k < sizeof(U); ++k) {
      buf_.push_back(static_cast<char>(value & 0xFF));
      if constexpr (sizeof(U) > 1) value >>= 8;
    }
  }
  void f64(double v) { put(std::bit_cast<std::uint64_t>(v)); }
  void raw(const void* p, std::size_t n) { buf_.append(static_cast<const char*>(p), n); }
  const std::string& str() const { return buf_; }

 private:
  std::string buf_;
};

class ByteReader {
 public:
  explicit ByteReader(std::string data) : data_(std::move(data)) {}

  template <typename U>
  U get() {
    need(sizeof(U));
    U value = 0;
    for (std::size_t k = 0; k < sizeof(U); ++k) {
      value |= static_cast<U>(static_cast<unsigned char>(data_[pos_ + k])) << (8 * k);
    }
    pos_ += sizeof(U);
    return value;
  }
  double f64() { return std::bit_cast<double>(get<std::uint64_t>()); }
  std::string raw(std::size_t n) {
    need(n);
    std::string out = data_.substr(pos_, n);
    pos_ += n;
    return out;
  }
  bool done() const { return pos_ == data_.size(); }

 private:
  void need(std::size_t n) const {
    if (data_.size() - pos_ < n) throw Error(Errc::corrupt_model_file, "unexpected end of file");
  }
  std::string data_;
  std::size_t pos_ = 0;
};

template <typename F>
void for_each_tensor(Model& m, F&& f) {
  for_each_param(m, f);
  f("bn1.running_mean", m.bn1.running_mean);
  f("bn1.running_var", m.bn1.running_var);
  f("bn2.running_mean", m.bn2.running_mean);
  f("bn2.running_var", m.bn2.running_var);
}

}  // namespace

void save_model(const std::filesystem::path& path, const Model& model) {
  Model copy = model;
  ByteWriter w;
  w.raw(model_magic, sizeof(model_magic));
  w.put<std::uint32_t>(model_version);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(model.hyper.w));
  w.put<std::uint32_t>(static_cast<std::uint32_t>(model.hyper.j));
  w.f64(model.hyper.l2_lambda);
  w.f64(model.hyper.dropout_rate);
  w.f64(model.hyper.bn_momentum);
  w.f64(model.hyper.bn_epsilon);
  w.put<std::uint64_t>(model.bn1.updates);
  w.put<std::uint64_t>(model.bn2.updates);
  std::uint32_t count = 0;
  for_each_tensor(copy, [&](const char*, Tensor<double>&) { ++count; });
  w.put<std::uint32_t>(count);
  for_each_tensor(copy, [&](const char* name, Tensor<double>& t) {
    const std::size_t len = std::strlen(name);
    w.put<std::uint16_t>(static_cast<std::uint16_t>(len));
    w.raw(name, len);
    w.put<std::uint32_t>(static_cast<std::uint32_t>(t.rank()));
    for (const auto d : t.shape()) w.put<std::uint64_t>(d);
    for (const double v : t) w.f64(v);
  });
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::io_failure, "cannot create " + path.string());
  out.write(w.str().data(), static_cast<std::streamsize>(w.str().size()));
  if (!out) throw Error(Errc::io_failure, "write to " + path.string());
}

Model load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_failure, "cannot open " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  ByteReader r(std::move(bytes));
  if (r.raw(sizeof(model_magic)) != std::string(model_magic, sizeof(model_magic))) {
    throw Error(Errc::corrupt_model_file, path.string() + ": bad magic");
  }
  const auto version = r.get<std::uint32_t>();
  if (version != model_version) {
    throw Error(Errc::corrupt_model_file, "unsupported model version " + std::to_string(version));
  }
  Hyper hyper;
  hyper.w = r.get<std::uint32_t>();
  hyper.j = r.get<std::uint32_t>();
  hyper.l2_lambda = r.f64();
  hyper.dropout_rate = r.f64();
  hyper.bn_momentum = r.f64();
  hyper.bn_epsilon = r.f64();
  Model m;
  try {
    m = build_model(hyper.w, hyper.j, 0, hyper);
  } catch (const Error& e) {
    throw Error(Errc::corrupt_model_file, e.what());
  }
  m.bn1.updates = r.get<std::uint64_t>();
  m.bn2.updates = r.get<std::uint64_t>();
  std::uint32_t expected = 0;
  for_each_tensor(m, [&](const char*, Tensor<double>&) { ++expected; });
  if (r.get<std::uint32_t>() != expected) throw Error(Errc::corrupt_model_file, "tensor count");
  for_each_tensor(m, [&](const char* name, Tensor<double>& t) {
    const auto len = r.get<std::uint16_t>();
    if (r.raw(len) != name) throw Error(Errc::corrupt_model_file, std::string("expected ") + name);
    const auto rank = r.get<std::uint32_t>();
    Shape shape(rank);
    for (auto& d : shape) d = r.get<std::uint64_t>();
    if (shape != t.shape()) {
      throw Error(Errc::corrupt_model_file, std::string(name) + " has shape " + shape_string(shape));
    }
    for (auto& v : t) v = r.f64();
  });
  if (!r.done()) throw Error(Errc::corrupt_model_file, "trailing bytes");
  return m;
}

std::vector<LayerShape> layer_shapes(const Model& model) {
  Model copy = model;
  ForwardCache<double> c;
  Tensor<double> x({1, model.height(), model.width(), 1});
  forward(copy, x, Mode::infer, nullptr, c);
  auto per_sample = [](const Tensor<double>& t) { return Shape(t.shape().begin() + 1, t.shape().end()); };
  return {
      {"input", per_sample(c.input)},
      {"conv2d_1", per_sample(c.conv1)},
      {"batch_normalization_1", per_sample(c.bn1)},
      {"max_pooling2d_1", per_sample(c.pool1)},
      {"conv2d_2", per_sample(c.conv2)},
      {"batch_normalization_2", per_sample(c.bn2)},
      {"max_pooling2d_2", per_sample(c.pool2)},
      {"flatten", per_sample(c.flat)},
      {"dropout_1", per_sample(c.flat)},
      {"dense_1", per_sample(c.dense1)},
      {"dropout_2", per_sample(c.dense1_drop)},
      {"dense_2", per_sample(c.logits)},
  };
}

template Tensor<float> make_input<float>(const FeatureDataset&, std::span<const std::size_t>);
template Tensor<double> make_input<double>(const FeatureDataset&, std::span<const std::size_t>);
template void forward<float>(Network<float>&, const Tensor<float>&, Mode, std::mt19937_64*,
                             ForwardCache<float>&);
template void forward<double>(Network<double>&, const Tensor<double>&, Mode, std::mt19937_64*,
                              ForwardCache<double>&);

}  // namespace avtp_ids
