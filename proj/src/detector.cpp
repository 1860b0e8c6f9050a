#include "avtp_ids/detector.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>

namespace avtp_ids {

std::string format_verdict(const Verdict& v) {
  std::string line = std::to_string(v.record_index) + ',' + std::to_string(v.timestamp_us) + ',';
  if (v.score) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", *v.score);
    line += buf;
    line += ',';
    line += to_string(v.predicted);
  } else {
    line += "unscored,unscored";
  }
  line += ',';
  line += to_string(v.truth);
  char buf[32];
  std::snprintf(buf, sizeof(buf), ",%.1f", v.latency_us);
  line += buf;
  return line;
}

Detector::Detector(const Model& model, double threshold)
    : predictor_(model), window_(model.hyper.w, model.hyper.j), threshold_(threshold) {}

std::optional<Verdict> Detector::process(const RawRecord& record, std::size_t record_index) {
  if (!is_usable_stream(record.bytes, window_.prefix_len())) return std::nullopt;
  const auto start = std::chrono::steady_clock::now();
  Verdict v;
  v.record_index = record_index;
  v.timestamp_us = record.timestamp_us;
  v.truth = record.label;
  const auto matrix =
      window_.push(std::span(record.bytes).first(window_.prefix_len()), record.label, record_index);
  if (matrix) {
    v.score = predictor_.predict(matrix->values);
    v.predicted = *v.score >= threshold_ ? Label::injected : Label::benign;
  }
  v.latency_us =
      std::chrono::duration<double, std::micro>(std::chrono::steady_clock::now() - start).count();
  return v;
}

DetectSummary run_detect(const std::filesystem::path& capture, const Model& model,
                         const DetectOptions& options) {
  PcapReader reader(capture);
  std::optional<LabelSidecar> sidecar;
  if (options.labels) sidecar = read_labels(*options.labels);
  std::size_t next_label = 0;

  Detector detector(model, options.threshold);
  DetectSummary summary;
  if (sidecar) summary.confusion = Confusion{};
  if (options.out) *options.out << verdict_csv_header << '\n';
  double latency_sum = 0.0;
  std::size_t scored = 0;

  for (std::size_t index = 0;; ++index) {
    auto record = reader.next();
    if (!record) break;
    ++summary.records;
    if (sidecar) {
      const auto& entries = sidecar->entries;
      const bool stream = classify_frame(record->bytes) == FrameKind::stream_avtpdu;
      const bool has_entry = next_label < entries.size() && entries[next_label].record_index == index;
      if (stream != has_entry) {
        throw Error(Errc::coverage_mismatch,
                    stream ? "stream record " + std::to_string(index) + " has no label"
                           : "label points at non-stream record " + std::to_string(index));
      }
      if (has_entry) record->label = entries[next_label++].label;
    }
    const auto verdict = detector.process(*record, index);
    if (!verdict) {
      if (classify_frame(record->bytes) == FrameKind::stream_avtpdu) ++summary.skipped_truncated;
      continue;
    }
    ++summary.verdicts;
    if (!verdict->score) {
      ++summary.unscored;
    } else {
      ++scored;
      latency_sum += verdict->latency_us;
      const bool predicted = verdict->predicted == Label::injected;
      if (predicted) ++summary.predicted_injected;
      if (summary.confusion) {
        auto& c = *summary.confusion;
        const bool actual = verdict->truth == Label::injected;
        if (actual && predicted) ++c.tp;
        else if (actual) ++c.fn;
        else if (predicted) ++c.fp;
        else ++c.tn;
      }
    }
    if (options.out) *options.out << format_verdict(*verdict) << std::endl;
    if (options.collect) options.collect->push_back(*verdict);
  }
  if (sidecar && next_label != sidecar->entries.size()) {
    throw Error(Errc::index_out_of_range,
                "label index " + std::to_string(sidecar->entries[next_label].record_index) +
                    " beyond " + std::to_string(summary.records) + " records");
  }
  summary.mean_latency_us = scored ? latency_sum / static_cast<double>(scored) : 0.0;
  return summary;
}

BenchReport bench_report(std::span<const double> latencies_us, double budget_us) {
  if (latencies_us.empty()) throw Error(Errc::too_few_samples, "no latencies to summarise");
  std::vector<double> v(latencies_us.begin(), latencies_us.end());
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  BenchReport r;
  r.samples = n;
  r.budget_us = budget_us;
  r.mean_us = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(n);
  r.median_us = n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
  const auto rank = static_cast<std::size_t>(std::ceil(0.99 * static_cast<double>(n)));
  r.p99_us = v[std::max<std::size_t>(rank, 1) - 1];
  r.realtime_ok = r.mean_us <= budget_us;
  return r;
}

BenchReport run_bench(const Model& model, std::size_t samples, double budget_us,
                      std::uint64_t seed) {
  if (samples == 0) throw Error(Errc::too_few_samples, "bench needs at least one sample");
  Predictor predictor(model);
  const std::size_t per = model.height() * model.width();
  std::mt19937_64 rng(seed);
  std::vector<std::uint8_t> x(per);
  auto randomize = [&] {
    for (auto& b : x) b = static_cast<std::uint8_t>(rng() & 0x0F);
  };
  volatile double sink = 0.0;
  for (std::size_t k = 0; k < bench_warmup_calls; ++k) {
    randomize();
    sink = sink + predictor.predict(x);
  }
  std::vector<double> lat;
  lat.reserve(samples);
  for (std::size_t k = 0; k < samples; ++k) {
    randomize();
    const auto start = std::chrono::steady_clock::now();
    sink = sink + predictor.predict(x);
    lat.push_back(
        std::chrono::duration<double, std::micro>(std::chrono::steady_clock::now() - start).count());
  }
  return bench_report(lat, budget_us);
}

}  // namespace avtp_ids
