#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "avtp_ids/model.hpp"

namespace avtp_ids {

// Positive class is `injected`.
struct Confusion {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  std::size_t total() const { return tp + fp + tn + fn; }
  Confusion& operator+=(const Confusion& o) {
    tp += o.tp;
    fp += o.fp;
    tn += o.tn;
    fn += o.fn;
    return *this;
  }
  bool operator==(const Confusion&) const = default;
};

struct Metrics {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

inline constexpr double default_threshold = 0.5;

// Predicted injected iff score >= threshold. Labels must be benign/injected.
Confusion confusion(std::span<const Label> labels, std::span<const double> scores,
                    double threshold = default_threshold);

// precision = 0 when tp+fp = 0, recall = 0 when tp+fn = 0, f1 = 0 when both are 0.
Metrics metrics(const Confusion& c);

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
  double threshold = 0.0;  // +inf for the (0, 0) anchor
};

struct Roc {
  std::vector<RocPoint> points;  // from (0, 0) to (1, 1)
  double auc = 0.0;
};

// Exact step curve: one point per distinct score, trapezoid area.
Roc roc_and_auc(std::span<const Label> labels, std::span<const double> scores);

struct MetricsReport {
  double threshold = default_threshold;
  Confusion confusion;
  Metrics metrics;
  std::optional<Roc> roc;  // absent when only one class is present
};

MetricsReport evaluate(std::span<const Label> labels, std::span<const double> scores,
                       double threshold = default_threshold);

// Stratified partition into k folds: every sample lands in exactly one fold
// and each fold's class counts differ from k-th of the totals by < 1.
std::vector<std::vector<std::size_t>> stratified_folds(std::span<const Label> labels,
                                                       std::size_t k, std::uint64_t seed);

struct CvFold {
  std::size_t fold = 0;
  std::size_t train_size = 0;
  std::size_t val_size = 0;
  std::size_t val_injected = 0;
  std::uint64_t seed = 0;
  Confusion confusion;
  Metrics metrics;
  std::optional<double> auc;
  TrainHistory history;
};

struct CvResult {
  std::vector<CvFold> folds;
  std::vector<std::vector<std::size_t>> partition;
  Confusion totals;
  Metrics total_metrics;
  std::vector<Model> models;
};

struct CvConfig {
  std::size_t k = 5;
  TrainConfig train;          // fold i trains with seed train.seed + i
  std::uint64_t model_seed = 0;  // fold i initialises with model_seed + i
  std::uint64_t split_seed = 0;
  double threshold = default_threshold;
  std::size_t threads = 1;    // folds trained concurrently
};

using FoldCallback = std::function<void(const CvFold&)>;

CvResult kfold_cv(const FeatureDataset& data, const CvConfig& config,
                  const FoldCallback& on_fold = {});

struct SweepRow {
  std::size_t w = 0;
  std::size_t train_samples = 0;
  std::size_t test_samples = 0;
  double time_per_sample_us = 0.0;
  double train_loss = 0.0;
  double train_accuracy = 0.0;
  double test_accuracy = 0.0;
  double test_f1 = 0.0;
};

struct SweepConfig {
  std::vector<std::size_t> windows;
  TrainConfig train;
  std::uint64_t model_seed = 0;
  // One split seed for every w so the rows are comparable.
  std::uint64_t split_seed = 0;
  double train_fraction = 0.8;
  // Random subsample of the featurized windows; 0 keeps them all.
  std::size_t max_samples = 0;
  double threshold = default_threshold;
};

using SweepCallback = std::function<void(const SweepRow&)>;

std::vector<SweepRow> window_sweep(std::span<const RawRecord> records, const SweepConfig& config,
                                   const SweepCallback& on_row = {});

// Spearman rank correlation, average ranks for ties.
double rank_correlation(std::span<const double> x, std::span<const double> y);

// Deterministic Fisher-Yates shuffle driven by mt19937_64.
void shuffle_indices(std::vector<std::size_t>& v, std::uint64_t seed);

void write_report_json(const std::filesystem::path& path, const MetricsReport& report);
void write_report_csv(const std::filesystem::path& path, const MetricsReport& report);
void write_roc_csv(const std::filesystem::path& path, const Roc& roc);
// One row per fold plus a "total" row.
void write_cv_csv(const std::filesystem::path& path, const CvResult& cv);
void write_cv_json(const std::filesystem::path& path, const CvResult& cv);
void write_sweep_csv(const std::filesystem::path& path, std::span<const SweepRow> rows);
void write_history_csv(const std::filesystem::path& path, const TrainHistory& history);

}  // namespace avtp_ids
