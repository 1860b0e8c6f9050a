#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>

#include "avtp_ids/error.hpp"
#include "avtp_ids/evaluation.hpp"
#include "avtp_ids/model.hpp"
#include "avtp_ids/pcap_store.hpp"
#include "test_util.hpp"

using namespace avtp_ids;
using test_util::fill_uniform;
using test_util::rel_error;

namespace {

std::vector<Tensor<double>*> params_of(Model& m) {
  std::vector<Tensor<double>*> out;
  for_each_param(m, [&](const char*, Tensor<double>& t) { out.push_back(&t); });
  return out;
}

double model_loss(Model& m, const Tensor<double>& x, std::span<const double> y) {
  ForwardCache<double> c;
  forward(m, x, Mode::train, nullptr, c);
  return bce_loss(c.prob, y, l2_penalty(m)).loss;
}

FeatureDataset attack_windows(std::size_t w, std::size_t packets, std::uint64_t seed) {
  const auto lc = test_util::attack_capture(packets, 1735, seed, 1'000'000, 400);
  return featurize_stream(join_labels(lc.capture, lc.labels), w).dataset;
}

FeatureDataset sample(const FeatureDataset& d, std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> idx(d.size());
  for (std::size_t k = 0; k < idx.size(); ++k) idx[k] = k;
  shuffle_indices(idx, seed);
  idx.resize(std::min(n, idx.size()));
  std::sort(idx.begin(), idx.end());
  return d.subset(idx);
}

bool same_params(Model& a, Model& b) {
  const auto pa = params_of(a);
  const auto pb = params_of(b);
  for (std::size_t k = 0; k < pa.size(); ++k) {
    if (!(*pa[k] == *pb[k])) return false;
  }
  return a.bn1.running_mean == b.bn1.running_mean && a.bn1.running_var == b.bn1.running_var &&
         a.bn2.running_mean == b.bn2.running_mean && a.bn2.running_var == b.bn2.running_var;
}

}  // namespace

TEST_CASE("layer shapes at w=44") {
  const auto shapes = layer_shapes(build_model(44));
  const std::vector<std::pair<std::string, Shape>> want{
      {"input", {44, 116, 1}},
      {"conv2d_1", {44, 116, 32}},
      {"batch_normalization_1", {44, 116, 32}},
      {"max_pooling2d_1", {22, 58, 32}},
      {"conv2d_2", {22, 58, 64}},
      {"batch_normalization_2", {22, 58, 64}},
      {"max_pooling2d_2", {11, 29, 64}},
      {"flatten", {20416}},
      {"dropout_1", {20416}},
      {"dense_1", {64}},
      {"dropout_2", {64}},
      {"dense_2", {1}}};
  REQUIRE(shapes.size() == want.size());
  for (std::size_t k = 0; k < want.size(); ++k) {
    CHECK(shapes[k].name == want[k].first);
    CHECK(shapes[k].shape == want[k].second);
  }
}

TEST_CASE("build_model validates and is seeded") {
  CHECK_THROWS_AS(build_model(6), Error);
  CHECK_THROWS_AS(build_model(8, 3), Error);
  Model a = build_model(8, 58, 1), b = build_model(8, 58, 1), c = build_model(8, 58, 2);
  CHECK(same_params(a, b));
  CHECK_FALSE(same_params(a, c));
  CHECK(a.flatten_size() == 2 * 29 * 64);
  for (const double v : a.conv1_b) CHECK(v == 0.0);
  const double lim = std::sqrt(6.0 / 25.0);
  for (const double v : a.conv1_w) CHECK(std::abs(v) <= lim);
}

TEST_CASE("whole-model gradient matches finite differences") {
  std::mt19937_64 rng(41);
  Model m = build_model(4, 2, 9);
  fill_uniform(m.bn1.gamma, rng, 0.5, 1.5);
  fill_uniform(m.bn2.beta, rng, -0.2, 0.2);
  Tensor<double> x({3, 4, 4, 1});
  fill_uniform(x, rng, 0.0, 1.0);
  const std::vector<double> y{1.0, 0.0, 1.0};

  Model grads = zeros_like(m);
  ForwardCache<double> cache;
  const double loss = compute_gradients(m, x, y, grads, nullptr, cache);
  CHECK(loss == doctest::Approx(model_loss(m, x, y)).epsilon(1e-12));

  const auto ps = params_of(m);
  const auto gs = params_of(grads);
  const char* names[] = {"conv1.w", "conv1.b", "bn1.gamma", "bn1.beta", "conv2.w", "conv2.b",
                         "bn2.gamma", "bn2.beta", "dense1.w", "dense1.b", "dense2.w", "dense2.b"};
  const double eps = 1e-5;
  for (std::size_t t = 0; t < ps.size(); ++t) {
    double worst = 0.0;
    auto& p = *ps[t];
    for (std::size_t k = 0; k < p.size(); ++k) {
      const double keep = p[k];
      p[k] = keep + eps;
      const double up = model_loss(m, x, y);
      p[k] = keep - eps;
      const double down = model_loss(m, x, y);
      p[k] = keep;
      worst = std::max(worst, rel_error((up - down) / (2 * eps), (*gs[t])[k]));
    }
    INFO(names[t] << " worst relative error " << worst);
    CHECK(worst < 1e-4);
  }
}

TEST_CASE("adam step") {
  Tensor<double> p({3}, 1.0), g({3}, 0.0);
  Tensor<double>* pp[] = {&p};
  const Tensor<double>* gp[] = {&g};
  AdamState st;
  adam_step(pp, gp, st);
  for (const double v : p) CHECK(v == 1.0);

  g.fill(0.5);
  AdamState fresh;
  Tensor<double> q({3}, 1.0);
  Tensor<double>* qp[] = {&q};
  adam_step(qp, gp, fresh);
  CHECK(q[0] == doctest::Approx(1.0 - 0.001).epsilon(1e-6));

  // Scalar oracle on f(x) = (x - 3)^2.
  Tensor<double> s({1}, 0.0), sg({1});
  Tensor<double>* sp[] = {&s};
  const Tensor<double>* sgp[] = {&sg};
  AdamState opt;
  opt.learning_rate = 0.05;
  double x = 0.0, m = 0.0, v = 0.0;
  for (int t = 1; t <= 100; ++t) {
    sg[0] = 2.0 * (s[0] - 3.0);
    adam_step(sp, sgp, opt);
    const double gr = 2.0 * (x - 3.0);
    m = 0.9 * m + 0.1 * gr;
    v = 0.999 * v + 0.001 * gr * gr;
    const double mh = m / (1.0 - std::pow(0.9, t));
    const double vh = v / (1.0 - std::pow(0.999, t));
    x -= 0.05 * mh / (std::sqrt(vh) + 1e-7);
  }
  CHECK(std::abs(s[0] - x) < 1e-10);
  CHECK(opt.step == 100);
}

TEST_CASE("predictions are probabilities and inference is deterministic") {
  const auto data = sample(attack_windows(8, 3000, 42), 300, 1);
  Model m = build_model(8, 58, 4);
  const auto a = predict(m, data);
  const auto b = predict(m, data, 3);
  REQUIRE(a.size() == data.size());
  CHECK(a == b);
  for (const double p : a) CHECK((p >= 0.0 && p <= 1.0));
  Predictor single(m);
  BasicPredictor<double> exact(m);
  for (std::size_t k = 0; k < 20; ++k) {
    CHECK(std::abs(exact.predict(data.values(k)) - a[k]) < 1e-4);
    CHECK(std::abs(single.predict(data.values(k)) - a[k]) < 1e-6);
  }
  CHECK_THROWS_AS(single.predict(std::vector<std::uint8_t>(10)), Error);
  const auto other = sample(attack_windows(4, 1000, 43), 10, 1);
  CHECK_THROWS_AS(predict(m, other), Error);
}

TEST_CASE("training reduces the loss and learns the replay") {
  const auto data = sample(attack_windows(8, 12'000, 44), 2000, 2);
  REQUIRE(data.count(Label::injected) > 200);
  REQUIRE(data.count(Label::benign) > 200);
  Model m = build_model(8, 58, 5);
  TrainConfig tc;
  tc.epochs = 5;
  tc.seed = 6;
  const auto hist = train(m, data, tc);
  REQUIRE(hist.epochs.size() == 5);
  for (std::size_t e = 1; e < 5; ++e) CHECK(hist.epochs[e].loss < hist.epochs[e - 1].loss);
  CHECK(hist.epochs.back().accuracy > 0.95);
  CHECK(hist.time_per_sample_us > 0.0);

  const auto scores = predict(m, data);
  const auto c = confusion(data.labels(), scores);
  CHECK(metrics(c).accuracy > 0.95);
}

TEST_CASE("training is reproducible and validates its inputs") {
  const auto data = sample(attack_windows(4, 3000, 45), 200, 3);
  TrainConfig tc;
  tc.epochs = 1;
  tc.seed = 7;
  Model a = build_model(4, 58, 1), b = build_model(4, 58, 1);
  train(a, data, tc);
  train(b, data, tc);
  CHECK(same_params(a, b));

  Model wrong = build_model(8, 58, 1);
  CHECK_THROWS_AS(train(wrong, data, tc), Error);
  tc.batch_size = 0;
  CHECK_THROWS_AS(train(a, data, tc), Error);
}

TEST_CASE("save/load is bit-exact") {
  test_util::TempDir dir;
  const auto data = sample(attack_windows(8, 3000, 46), 100, 4);
  Model m = build_model(8, 58, 8);
  TrainConfig tc;
  tc.epochs = 1;
  train(m, data, tc);
  save_model(dir / "m.bin", m);
  Model back = load_model(dir / "m.bin");
  CHECK(same_params(m, back));
  CHECK(back.bn1.updates == m.bn1.updates);
  CHECK(back.hyper.l2_lambda == m.hyper.l2_lambda);
  save_model(dir / "m2.bin", back);
  CHECK(test_util::slurp(dir / "m.bin") == test_util::slurp(dir / "m2.bin"));
  CHECK(predict(m, data) == predict(back, data));
  Predictor pa(m), pb(back);
  for (std::size_t k = 0; k < 10; ++k) CHECK(pa.predict(data.values(k)) == pb.predict(data.values(k)));
}

TEST_CASE("corrupt model files") {
  test_util::TempDir dir;
  save_model(dir / "m.bin", build_model(4, 58, 1));
  const std::string good = test_util::slurp(dir / "m.bin");
  auto code_of = [&](const std::string& bytes) {
    std::ofstream(dir / "bad.bin", std::ios::binary) << bytes;
    try {
      load_model(dir / "bad.bin");
    } catch (const Error& e) {
      return e.code();
    }
    return Errc::io_failure;
  };
  std::string magic = good;
  magic[0] = 'X';
  CHECK(code_of(magic) == Errc::corrupt_model_file);
  CHECK(code_of(good.substr(0, good.size() / 2)) == Errc::corrupt_model_file);
  CHECK(code_of(good + "x") == Errc::corrupt_model_file);
  CHECK_THROWS_AS(load_model(dir / "missing.bin"), Error);
}

TEST_CASE("recalibrate_batchnorm averages batch statistics") {
  const auto data = sample(attack_windows(4, 3000, 47), 128, 5);
  Model m = build_model(4, 58, 3);
  m.bn1.updates = 17;
  Model r = m;
  recalibrate_batchnorm(r, data, 64);
  CHECK(r.bn1.updates == 17);
  CHECK(r.bn1.momentum == m.bn1.momentum);
  CHECK(r.conv1_w == m.conv1_w);

  std::vector<Model> halves;
  for (std::size_t h = 0; h < 2; ++h) {
    Model c = m;
    c.bn1.updates = c.bn2.updates = 0;
    std::vector<std::size_t> idx(64);
    for (std::size_t k = 0; k < 64; ++k) idx[k] = h * 64 + k;
    ForwardCache<double> cache;
    forward(c, make_input<double>(data, idx), Mode::train, nullptr, cache);
    halves.push_back(c);
  }
  for (std::size_t ch = 0; ch < 32; ++ch) {
    CHECK(r.bn1.running_mean[ch] ==
          doctest::Approx((halves[0].bn1.running_mean[ch] + halves[1].bn1.running_mean[ch]) / 2).epsilon(1e-12));
    CHECK(r.bn1.running_var[ch] ==
          doctest::Approx((halves[0].bn1.running_var[ch] + halves[1].bn1.running_var[ch]) / 2).epsilon(1e-12));
  }
  for (std::size_t ch = 0; ch < 64; ++ch) {
    CHECK(r.bn2.running_mean[ch] ==
          doctest::Approx((halves[0].bn2.running_mean[ch] + halves[1].bn2.running_mean[ch]) / 2).epsilon(1e-12));
  }
}
