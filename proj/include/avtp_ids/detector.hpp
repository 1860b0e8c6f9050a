#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "avtp_ids/evaluation.hpp"
#include "avtp_ids/model.hpp"
#include "avtp_ids/pcap_store.hpp"

namespace avtp_ids {

struct Verdict {
  std::size_t record_index = 0;
  std::uint64_t timestamp_us = 0;
  std::optional<double> score;  // empty while the window fills
  Label predicted = Label::unlabeled;
  Label truth = Label::unlabeled;
  double latency_us = 0.0;
};

inline constexpr const char* verdict_csv_header =
    "record_index,timestamp_us,score,predicted,true,latency_us";
std::string format_verdict(const Verdict& v);

// Packet-by-packet detector for one stream. Keeps only the sliding window.
class Detector {
 public:
  explicit Detector(const Model& model, double threshold = default_threshold);

  std::size_t window() const { return predictor_.window(); }

  // Verdict for stream AVTPDUs; nullopt for frames that never reach the
  // feature generator (non-stream, or shorter than the prefix).
  std::optional<Verdict> process(const RawRecord& record, std::size_t record_index);

 private:
  Predictor predictor_;
  WindowState window_;
  double threshold_;
};

struct DetectSummary {
  std::size_t records = 0;
  std::size_t verdicts = 0;
  std::size_t unscored = 0;
  std::size_t skipped_truncated = 0;
  std::size_t predicted_injected = 0;
  double mean_latency_us = 0.0;  // over scored verdicts
  std::optional<Confusion> confusion;  // when a sidecar was supplied
};

struct DetectOptions {
  double threshold = default_threshold;
  std::optional<std::filesystem::path> labels;
  std::ostream* out = nullptr;  // verdict CSV, flushed per packet
  std::vector<Verdict>* collect = nullptr;
};

// Reads the capture one record at a time.
DetectSummary run_detect(const std::filesystem::path& capture, const Model& model,
                         const DetectOptions& options);

struct BenchReport {
  std::size_t samples = 0;
  double mean_us = 0.0;
  double median_us = 0.0;
  double p99_us = 0.0;
  double budget_us = 1000.0;
  bool realtime_ok = false;
};

inline constexpr double default_budget_us = 1000.0;
inline constexpr std::size_t bench_warmup_calls = 10;

// realtime_ok = mean <= budget. p99 uses the nearest-rank definition.
BenchReport bench_report(std::span<const double> latencies_us, double budget_us = default_budget_us);

// Times single-sample predictions on random nibble matrices after
// bench_warmup_calls untimed calls.
BenchReport run_bench(const Model& model, std::size_t samples, double budget_us = default_budget_us,
                      std::uint64_t seed = 0);

}  // namespace avtp_ids
