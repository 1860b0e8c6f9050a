#include "avtp_ids/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <mutex>
#include <numeric>
#include <random>
#include <thread>

#include <json.hpp>

namespace avtp_ids {

namespace {

bool is_positive(Label label, std::size_t k) {
  switch (label) {
    case Label::injected:
      return true;
    case Label::benign:
      return false;
    default:
      throw Error(Errc::invalid_config, "sample " + std::to_string(k) + " has no label");
  }
}

void check_lengths(std::size_t a, std::size_t b) {
  if (a != b) {
    throw Error(Errc::length_mismatch,
                std::to_string(a) + " labels vs " + std::to_string(b) + " scores");
  }
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(Errc::io_failure, "cannot create " + path.string());
  out.precision(10);
  return out;
}

nlohmann::json to_json(const Confusion& c) {
  return {{"tp", c.tp}, {"fp", c.fp}, {"tn", c.tn}, {"fn", c.fn}};
}

nlohmann::json to_json(const Metrics& m) {
  return {{"accuracy", m.accuracy}, {"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1}};
}

}  // namespace

Confusion confusion(std::span<const Label> labels, std::span<const double> scores,
                    double threshold) {
  check_lengths(labels.size(), scores.size());
  Confusion c;
  for (std::size_t k = 0; k < labels.size(); ++k) {
    const bool actual = is_positive(labels[k], k);
    const bool predicted = scores[k] >= threshold;
    if (actual && predicted) ++c.tp;
    else if (actual) ++c.fn;
    else if (predicted) ++c.fp;
    else ++c.tn;
  }
  return c;
}

Metrics metrics(const Confusion& c) {
  if (c.total() == 0) throw Error(Errc::empty_confusion, "no samples evaluated");
  Metrics m;
  m.accuracy = static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
  m.precision = c.tp + c.fp == 0 ? 0.0 : static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
  m.recall = c.tp + c.fn == 0 ? 0.0 : static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
  m.f1 = m.precision + m.recall == 0.0
             ? 0.0
             : 2.0 * m.precision * m.recall / (m.precision + m.recall);
  return m;
}

Roc roc_and_auc(std::span<const Label> labels, std::span<const double> scores) {
  check_lengths(labels.size(), scores.size());
  std::size_t pos = 0;
  for (std::size_t k = 0; k < labels.size(); ++k) pos += is_positive(labels[k], k) ? 1 : 0;
  const std::size_t neg = labels.size() - pos;
  if (pos == 0 || neg == 0) {
    throw Error(Errc::single_class_input, "ROC needs both benign and injected samples");
  }

  std::vector<std::size_t> order(labels.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  Roc roc;
  roc.points.push_back({0.0, 0.0, std::numeric_limits<double>::infinity()});
  std::size_t tp = 0, fp = 0;
  for (std::size_t i = 0; i < order.size();) {
    const double s = scores[order[i]];
    for (; i < order.size() && scores[order[i]] == s; ++i) {
      if (labels[order[i]] == Label::injected) ++tp;
      else ++fp;
    }
    const RocPoint p{static_cast<double>(fp) / static_cast<double>(neg),
                     static_cast<double>(tp) / static_cast<double>(pos), s};
    const RocPoint& q = roc.points.back();
    roc.auc += (p.fpr - q.fpr) * (p.tpr + q.tpr) / 2.0;
    roc.points.push_back(p);
  }
  return roc;
}

MetricsReport evaluate(std::span<const Label> labels, std::span<const double> scores,
                       double threshold) {
  MetricsReport r;
  r.threshold = threshold;
  r.confusion = confusion(labels, scores, threshold);
  r.metrics = metrics(r.confusion);
  if (r.confusion.tp + r.confusion.fn > 0 && r.confusion.tn + r.confusion.fp > 0) {
    r.roc = roc_and_auc(labels, scores);
  }
  return r;
}

void shuffle_indices(std::vector<std::size_t>& v, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng() % i]);
}

std::vector<std::vector<std::size_t>> stratified_folds(std::span<const Label> labels,
                                                       std::size_t k, std::uint64_t seed) {
  if (k < 2 || labels.size() < k) {
    throw Error(Errc::too_few_samples, std::to_string(labels.size()) + " samples for " +
                                           std::to_string(k) + " folds");
  }
  std::vector<std::size_t> benign, injected;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    (is_positive(labels[i], i) ? injected : benign).push_back(i);
  }
  if (benign.size() < k || injected.size() < k) {
    throw Error(Errc::single_class_input,
                "cannot stratify " + std::to_string(benign.size()) + " benign / " +
                    std::to_string(injected.size()) + " injected samples into " +
                    std::to_string(k) + " folds");
  }
  shuffle_indices(benign, seed);
  shuffle_indices(injected, seed + 1);

  // Dealing both classes round-robin, continuing across the class boundary,
  // keeps fold sizes and per-class counts within one of each other.
  std::vector<std::vector<std::size_t>> folds(k);
  std::size_t pos = 0;
  for (const auto* cls : {&benign, &injected}) {
    for (const auto i : *cls) folds[pos++ % k].push_back(i);
  }
  for (auto& f : folds) std::sort(f.begin(), f.end());
  return folds;
}

CvResult kfold_cv(const FeatureDataset& data, const CvConfig& config, const FoldCallback& on_fold) {
  const auto labels = data.labels();
  CvResult cv;
  cv.partition = stratified_folds(labels, config.k, config.split_seed);
  cv.folds.resize(config.k);
  cv.models.resize(config.k);

  std::mutex mu;
  auto run_fold = [&](std::size_t f) {
    std::vector<std::size_t> train_idx;
    for (std::size_t g = 0; g < config.k; ++g) {
      if (g != f) train_idx.insert(train_idx.end(), cv.partition[g].begin(), cv.partition[g].end());
    }
    std::sort(train_idx.begin(), train_idx.end());
    const FeatureDataset train_set = data.subset(train_idx);
    const FeatureDataset val_set = data.subset(cv.partition[f]);

    TrainConfig tc = config.train;
    tc.seed = config.train.seed + f;
    Model model = build_model(data.window(), data.cols() / 2, config.model_seed + f);
    CvFold fold;
    fold.fold = f + 1;
    fold.seed = tc.seed;
    fold.train_size = train_set.size();
    fold.val_size = val_set.size();
    fold.val_injected = val_set.count(Label::injected);
    fold.history = train(model, train_set, tc);
    const auto scores = predict(model, val_set);
    const auto val_labels = val_set.labels();
    const MetricsReport r = evaluate(val_labels, scores, config.threshold);
    fold.confusion = r.confusion;
    fold.metrics = r.metrics;
    if (r.roc) fold.auc = r.roc->auc;

    std::lock_guard lock(mu);
    cv.folds[f] = fold;
    cv.models[f] = std::move(model);
    if (on_fold) on_fold(fold);
  };

  const std::size_t threads = std::clamp<std::size_t>(config.threads, 1, config.k);
  if (threads == 1) {
    for (std::size_t f = 0; f < config.k; ++f) run_fold(f);
  } else {
    std::vector<std::thread> workers;
    std::size_t next = 0;
    std::mutex next_mu;
    for (std::size_t t = 0; t < threads; ++t) {
      workers.emplace_back([&] {
        for (;;) {
          std::size_t f;
          {
            std::lock_guard lock(next_mu);
            if (next >= config.k) return;
            f = next++;
          }
          run_fold(f);
        }
      });
    }
    for (auto& w : workers) w.join();
  }

  for (const auto& f : cv.folds) cv.totals += f.confusion;
  cv.total_metrics = metrics(cv.totals);
  return cv;
}

std::vector<SweepRow> window_sweep(std::span<const RawRecord> records, const SweepConfig& config,
                                   const SweepCallback& on_row) {
  if (config.windows.empty()) throw Error(Errc::invalid_config, "empty window list");
  if (!(config.train_fraction > 0.0 && config.train_fraction < 1.0)) {
    throw Error(Errc::invalid_config, "train fraction must lie in (0, 1)");
  }
  for (const auto w : config.windows) validate_window(w);

  std::vector<SweepRow> rows;
  for (const auto w : config.windows) {
    const FeatureDataset all = featurize_stream(records, w).dataset;
    std::vector<std::size_t> idx(all.size());
    std::iota(idx.begin(), idx.end(), 0);
    shuffle_indices(idx, config.split_seed);
    if (config.max_samples > 0 && idx.size() > config.max_samples) idx.resize(config.max_samples);
    const auto n_train = static_cast<std::size_t>(
        std::floor(config.train_fraction * static_cast<double>(idx.size())));
    if (n_train == 0 || n_train == idx.size()) {
      throw Error(Errc::too_few_samples, "w=" + std::to_string(w) + " leaves " +
                                             std::to_string(idx.size()) + " windows");
    }
    std::vector<std::size_t> train_idx(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_train));
    std::vector<std::size_t> test_idx(idx.begin() + static_cast<std::ptrdiff_t>(n_train), idx.end());
    std::sort(train_idx.begin(), train_idx.end());
    std::sort(test_idx.begin(), test_idx.end());
    const FeatureDataset train_set = all.subset(train_idx);
    const FeatureDataset test_set = all.subset(test_idx);

    Model model = build_model(w, layout::prefix_len, config.model_seed);
    const TrainHistory h = train(model, train_set, config.train);
    const auto scores = predict(model, test_set);
    const auto test_labels = test_set.labels();
    const Metrics m = metrics(confusion(test_labels, scores, config.threshold));

    SweepRow row;
    row.w = w;
    row.train_samples = train_set.size();
    row.test_samples = test_set.size();
    row.time_per_sample_us = h.time_per_sample_us;
    row.train_loss = h.epochs.back().loss;
    row.train_accuracy = h.epochs.back().accuracy;
    row.test_accuracy = m.accuracy;
    row.test_f1 = m.f1;
    rows.push_back(row);
    if (on_row) on_row(row);
  }
  return rows;
}

namespace {

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && v[order[j]] == v[order[i]]) ++j;
    const double r = (static_cast<double>(i + j - 1)) / 2.0 + 1.0;
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = r;
    i = j;
  }
  return ranks;
}

}  // namespace

double rank_correlation(std::span<const double> x, std::span<const double> y) {
  check_lengths(x.size(), y.size());
  if (x.size() < 2) throw Error(Errc::too_few_samples, "rank correlation needs two points");
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

void write_report_json(const std::filesystem::path& path, const MetricsReport& report) {
  nlohmann::json j;
  j["threshold"] = report.threshold;
  j["samples"] = report.confusion.total();
  j["confusion"] = to_json(report.confusion);
  j["metrics"] = to_json(report.metrics);
  if (report.roc) {
    j["metrics"]["auc"] = report.roc->auc;
    j["roc_points"] = report.roc->points.size();
  } else {
    j["metrics"]["auc"] = nullptr;
  }
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

void write_report_csv(const std::filesystem::path& path, const MetricsReport& report) {
  auto out = open_out(path);
  const auto& c = report.confusion;
  const auto& m = report.metrics;
  out << "threshold,tp,fp,tn,fn,accuracy,precision,recall,f1,auc\n"
      << report.threshold << ',' << c.tp << ',' << c.fp << ',' << c.tn << ',' << c.fn << ','
      << m.accuracy << ',' << m.precision << ',' << m.recall << ',' << m.f1 << ',';
  if (report.roc) out << report.roc->auc;
  out << '\n';
}

void write_roc_csv(const std::filesystem::path& path, const Roc& roc) {
  auto out = open_out(path);
  out << "fpr,tpr\n";
  for (const auto& p : roc.points) out << p.fpr << ',' << p.tpr << '\n';
}

void write_cv_csv(const std::filesystem::path& path, const CvResult& cv) {
  auto out = open_out(path);
  out << "fold,train_size,val_size,tp,fp,tn,fn,accuracy,precision,recall,f1,auc\n";
  for (const auto& f : cv.folds) {
    const auto& c = f.confusion;
    const auto& m = f.metrics;
    out << f.fold << ',' << f.train_size << ',' << f.val_size << ',' << c.tp << ',' << c.fp << ','
        << c.tn << ',' << c.fn << ',' << m.accuracy << ',' << m.precision << ',' << m.recall << ','
        << m.f1 << ',';
    if (f.auc) out << *f.auc;
    out << '\n';
  }
  const auto& c = cv.totals;
  const auto& m = cv.total_metrics;
  out << "total,," << c.total() << ',' << c.tp << ',' << c.fp << ',' << c.tn << ',' << c.fn << ','
      << m.accuracy << ',' << m.precision << ',' << m.recall << ',' << m.f1 << ",\n";
}

void write_cv_json(const std::filesystem::path& path, const CvResult& cv) {
  nlohmann::json j;
  j["k"] = cv.folds.size();
  j["folds"] = nlohmann::json::array();
  for (const auto& f : cv.folds) {
    nlohmann::json jf{{"fold", f.fold},
                      {"seed", f.seed},
                      {"train_size", f.train_size},
                      {"val_size", f.val_size},
                      {"val_injected", f.val_injected},
                      {"confusion", to_json(f.confusion)},
                      {"metrics", to_json(f.metrics)}};
    jf["metrics"]["auc"] = f.auc ? nlohmann::json(*f.auc) : nlohmann::json(nullptr);
    j["folds"].push_back(jf);
  }
  j["total"] = {{"confusion", to_json(cv.totals)}, {"metrics", to_json(cv.total_metrics)}};
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

void write_sweep_csv(const std::filesystem::path& path, std::span<const SweepRow> rows) {
  auto out = open_out(path);
  out << "w,train_samples,test_samples,train_time_per_sample_us,train_loss,train_accuracy,"
         "test_accuracy,test_f1\n";
  for (const auto& r : rows) {
    out << r.w << ',' << r.train_samples << ',' << r.test_samples << ',' << r.time_per_sample_us
        << ',' << r.train_loss << ',' << r.train_accuracy << ',' << r.test_accuracy << ','
        << r.test_f1 << '\n';
  }
}

void write_history_csv(const std::filesystem::path& path, const TrainHistory& history) {
  auto out = open_out(path);
  out << "epoch,loss,accuracy,seconds\n";
  for (const auto& e : history.epochs) {
    out << e.epoch << ',' << e.loss << ',' << e.accuracy << ',' << e.seconds << '\n';
  }
}

}  // namespace avtp_ids
