// avtp_ids: synthesize, featurize, train, evaluate and run the AVTP replay detector.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "avtp_ids/detector.hpp"
#include "avtp_ids/evaluation.hpp"
#include "avtp_ids/feature_gen.hpp"
#include "avtp_ids/model.hpp"
#include "avtp_ids/pcap_store.hpp"
#include "avtp_ids/traffic_lab.hpp"

namespace fs = std::filesystem;
using namespace avtp_ids;

namespace {

enum class Level { error = 0, warn = 1, info = 2, debug = 3 };

Level g_level = Level::info;

Level level_from_env() {
  const char* v = std::getenv("AVTP_IDS_LOG");
  if (!v) return Level::info;
  const std::string s = v;
  if (s == "error") return Level::error;
  if (s == "warn") return Level::warn;
  if (s == "debug") return Level::debug;
  return Level::info;
}

template <typename... Args>
void log(Level level, const Args&... args) {
  if (level > g_level) return;
  static const char* names[] = {"error", "warn", "info", "debug"};
  std::ostringstream os;
  os << "[" << names[static_cast<int>(level)] << "] ";
  (os << ... << args);
  std::cerr << os.str() << '\n';
}

struct Global {
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  bool quiet = false;
};

// Stream AVTPDUs with their sidecar labels when one is present.
std::vector<RawRecord> load_records(const fs::path& capture, std::string labels) {
  CaptureFile cap = read_pcap(capture);
  if (labels.empty() && fs::exists(sidecar_path(capture))) labels = sidecar_path(capture).string();
  if (labels.empty()) {
    log(Level::warn, capture.string(), ": no label sidecar, samples are unlabeled");
    return std::move(cap.records);
  }
  return join_labels(cap, read_labels(labels));
}

FeatureDataset concat(const std::vector<FeatureDataset>& parts) {
  FeatureDataset out(parts.front().window(), parts.front().cols());
  for (const auto& p : parts) {
    if (p.window() != out.window() || p.cols() != out.cols()) {
      throw Error(Errc::shape_mismatch, "datasets with different window sizes");
    }
    for (std::size_t k = 0; k < p.size(); ++k) out.append(p.matrix(k));
  }
  return out;
}

FeatureDataset subsample(const FeatureDataset& data, std::size_t max_samples, std::uint64_t seed) {
  if (max_samples == 0 || data.size() <= max_samples) return data;
  std::vector<std::size_t> idx(data.size());
  std::iota(idx.begin(), idx.end(), 0);
  shuffle_indices(idx, seed);
  idx.resize(max_samples);
  std::sort(idx.begin(), idx.end());
  return data.subset(idx);
}

std::vector<std::size_t> parse_windows(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) {
      out.push_back(std::stoul(item));
      continue;
    }
    // lo:hi:step
    std::stringstream rs(item);
    std::string a, b, c;
    std::getline(rs, a, ':');
    std::getline(rs, b, ':');
    std::getline(rs, c, ':');
    const std::size_t step = c.empty() ? 4 : std::stoul(c);
    for (std::size_t w = std::stoul(a); w <= std::stoul(b); w += step) out.push_back(w);
  }
  return out;
}

void print_metrics(const MetricsReport& r) {
  const auto& c = r.confusion;
  const auto& m = r.metrics;
  std::printf("samples=%zu tp=%zu fp=%zu tn=%zu fn=%zu\n", c.total(), c.tp, c.fp, c.tn, c.fn);
  std::printf("accuracy=%.4f precision=%.4f recall=%.4f f1=%.4f", m.accuracy, m.precision,
              m.recall, m.f1);
  if (r.roc) std::printf(" auc=%.4f", r.roc->auc);
  std::printf("\n");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Replay-injection detector for IEEE 1722 stream AVTPDUs"};
  app.require_subcommand(1);
  Global g;
  app.add_option("--seed", g.seed, "Base random seed")->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads for file commands")->capture_default_str();
  app.add_flag("--quiet", g.quiet, "Only log errors");

  // synth
  auto* synth = app.add_subcommand("synth", "Synthesize a benign AVTP capture");
  SynthConfig sc;
  double jitter = -1.0;
  std::string synth_out;
  synth->add_option("--packets", sc.packet_count)->capture_default_str();
  synth->add_option("--mean-interval-us", sc.mean_interval_us)->capture_default_str();
  synth->add_option("--jitter-us", jitter, "Uniform jitter half-width (default 20% of mean)");
  synth->add_option("--frame-len", sc.frame_len_pkts, "Packets per video frame")->capture_default_str();
  synth->add_option("--payload-len", sc.payload_len)->capture_default_str();
  synth->add_option("-o,--output", synth_out, "Output PCAP")->required();

  // attack
  auto* attack = app.add_subcommand("attack", "Mount the replay attack on a benign capture");
  AttackConfig ac;
  ac.attack_interval_us = 400.0;
  std::string attack_in, attack_out;
  attack->add_option("-i,--input", attack_in, "Benign PCAP")->required()->check(CLI::ExistingFile);
  attack->add_option("-o,--output", attack_out, "Output PCAP")->required();
  attack->add_option("--clip-start", ac.clip_start_index, "First stream AVTPDU of the clip")
      ->capture_default_str();
  attack->add_option("--clip-len", ac.clip_len)->capture_default_str();
  attack->add_option("--warmup-us", ac.warmup_us)->capture_default_str();
  attack->add_option("--attack-interval-us", ac.attack_interval_us)->capture_default_str();
  attack->add_option("--repeats", ac.repeats, "Clip repetitions (0 fills the capture)")
      ->default_val(0);
  attack->add_option("--attack-jitter-us", ac.attack_jitter_us)->capture_default_str();

  // featurize
  auto* feat = app.add_subcommand("featurize", "Turn a capture into a feature dataset");
  std::string feat_in, feat_labels, feat_out;
  std::size_t feat_w = default_window;
  feat->add_option("-i,--input", feat_in)->required()->check(CLI::ExistingFile);
  feat->add_option("--labels", feat_labels, "Label sidecar (default <input>.labels.csv)");
  feat->add_option("-w,--window", feat_w)->capture_default_str();
  feat->add_option("-o,--output", feat_out)->required();

  // train
  auto* tr = app.add_subcommand("train", "Train the CNN on one or more datasets");
  std::vector<std::string> tr_data;
  std::string tr_out, tr_hist;
  std::size_t tr_w = default_window, tr_max = 0;
  TrainConfig tc;
  Hyper hyper;
  tr->add_option("-d,--dataset", tr_data)->required()->check(CLI::ExistingFile);
  tr->add_option("-o,--output", tr_out, "Model file")->required();
  tr->add_option("--history", tr_hist, "Per-epoch CSV");
  tr->add_option("-w,--window", tr_w, "Expected window size")->capture_default_str();
  tr->add_option("--batch", tc.batch_size)->capture_default_str();
  tr->add_option("--epochs", tc.epochs)->capture_default_str();
  tr->add_option("--lr", tc.learning_rate)->capture_default_str();
  tr->add_option("--l2", hyper.l2_lambda)->capture_default_str();
  tr->add_option("--dropout", hyper.dropout_rate)->capture_default_str();
  tr->add_option("--max-samples", tr_max, "Random subsample size (0 = all)")->capture_default_str();

  // eval
  auto* ev = app.add_subcommand("eval", "Score a dataset, or run k-fold cross-validation");
  std::string ev_model, ev_data, ev_csv, ev_json, ev_roc, ev_dir;
  double ev_thr = default_threshold;
  std::size_t ev_cv = 0, ev_max = 0;
  TrainConfig ev_tc;
  ev->add_option("-m,--model", ev_model)->check(CLI::ExistingFile);
  ev->add_option("-d,--dataset", ev_data)->required()->check(CLI::ExistingFile);
  ev->add_option("--threshold", ev_thr)->capture_default_str();
  ev->add_option("--csv", ev_csv, "Metrics CSV");
  ev->add_option("--json", ev_json, "Metrics JSON");
  ev->add_option("--roc", ev_roc, "ROC points CSV");
  ev->add_option("--cv", ev_cv, "Run k-fold cross-validation instead of scoring a model");
  ev->add_option("--out-dir", ev_dir, "CV output directory (fold_<i>.csv, cv.csv, cv.json)");
  ev->add_option("--batch", ev_tc.batch_size)->capture_default_str();
  ev->add_option("--epochs", ev_tc.epochs)->capture_default_str();
  ev->add_option("--lr", ev_tc.learning_rate)->capture_default_str();
  ev->add_option("--max-samples", ev_max, "Random subsample size (0 = all)")->capture_default_str();

  // sweep
  auto* sw = app.add_subcommand("sweep", "Window-size sweep on a labeled capture");
  std::string sw_in, sw_labels, sw_out, sw_windows = "4:80:4";
  SweepConfig swc;
  sw->add_option("-i,--input", sw_in)->required()->check(CLI::ExistingFile);
  sw->add_option("--labels", sw_labels);
  sw->add_option("--windows", sw_windows, "Comma list and/or lo:hi:step ranges")
      ->capture_default_str();
  sw->add_option("--batch", swc.train.batch_size)->capture_default_str();
  sw->add_option("--epochs", swc.train.epochs)->capture_default_str();
  sw->add_option("--lr", swc.train.learning_rate)->capture_default_str();
  sw->add_option("--max-samples", swc.max_samples, "Random subsample per w (0 = all)")
      ->capture_default_str();
  sw->add_option("-o,--output", sw_out, "Table CSV")->required();

  // detect
  auto* det = app.add_subcommand("detect", "Packet-by-packet detection over a capture");
  std::string det_in, det_labels, det_model, det_out;
  std::size_t det_w = 0;
  double det_thr = default_threshold;
  bool det_no_labels = false;
  det->add_option("-i,--input", det_in)->required()->check(CLI::ExistingFile);
  det->add_option("-m,--model", det_model)->required()->check(CLI::ExistingFile);
  det->add_option("-w,--window", det_w, "Must match the model when given");
  det->add_option("--threshold", det_thr)->capture_default_str();
  det->add_option("--labels", det_labels, "Label sidecar (default <input>.labels.csv if present)");
  det->add_flag("--no-labels", det_no_labels, "Ignore any sidecar");
  det->add_option("-o,--output", det_out, "Verdict CSV (default stdout)");

  // bench
  auto* be = app.add_subcommand("bench", "Single-sample inference latency");
  std::string be_model, be_json;
  std::size_t be_n = 1000, be_w = default_window;
  double be_budget = default_budget_us;
  be->add_option("-m,--model", be_model, "Model file (default: untrained model)")
      ->check(CLI::ExistingFile);
  be->add_option("-w,--window", be_w, "Window for the untrained model")->capture_default_str();
  be->add_option("-n,--samples", be_n)->capture_default_str()->check(CLI::Range(100, 100000000));
  be->add_option("--budget-us", be_budget)->capture_default_str();
  be->add_option("--json", be_json, "Report JSON");

  CLI11_PARSE(app, argc, argv);
  g_level = g.quiet ? Level::error : level_from_env();

  try {
    if (*synth) {
      sc.seed = g.seed;
      if (jitter >= 0.0) sc.interval_jitter_us = jitter;
      const auto lc = synth_benign(sc);
      write_pcap(synth_out, lc.capture);
      write_labels(sidecar_path(synth_out), lc.labels);
      log(Level::info, "wrote ", lc.capture.records.size(), " records to ", synth_out);
    } else if (*attack) {
      ac.seed = g.seed;
      const CaptureFile benign = read_pcap(attack_in);
      const auto clip = extract_clip(benign, ac.clip_start_index, ac.clip_len);
      if (ac.repeats == 0) ac.repeats = repeats_to_fill(benign, ac);
      const auto lc = inject_replay(benign, clip, ac);
      write_pcap(attack_out, lc.capture);
      write_labels(sidecar_path(attack_out), lc.labels);
      log(Level::info, "injected ", ac.repeats * ac.clip_len, " stream AVTPDUs (", ac.repeats,
          " x ", ac.clip_len, ") into ", attack_out);
    } else if (*feat) {
      const auto records = load_records(feat_in, feat_labels);
      const auto result = featurize_stream(records, feat_w);
      write_dataset(feat_out, result.dataset);
      if (result.skipped_truncated > 0) {
        log(Level::warn, "skipped ", result.skipped_truncated, " truncated stream AVTPDUs");
      }
      log(Level::info, "wrote ", result.dataset.size(), " matrices (", result.stream_packets,
          " stream AVTPDUs, w=", feat_w, ") to ", feat_out);
    } else if (*tr) {
      std::vector<FeatureDataset> parts;
      for (const auto& p : tr_data) parts.push_back(read_dataset(p));
      FeatureDataset data = parts.size() == 1 ? parts.front() : concat(parts);
      if (data.window() != tr_w) {
        throw Error(Errc::model_window_mismatch, "dataset window " + std::to_string(data.window()) +
                                                     " but -w " + std::to_string(tr_w));
      }
      data = subsample(data, tr_max, g.seed);
      Model model = build_model(data.window(), data.cols() / 2, g.seed, hyper);
      tc.seed = g.seed;
      log(Level::info, "training on ", data.size(), " samples (", data.count(Label::injected),
          " injected), w=", data.window());
      const auto h = train(model, data, tc, [](const EpochStats& e) {
        log(Level::info, "epoch ", e.epoch, " loss=", e.loss, " accuracy=", e.accuracy, " (",
            e.seconds, " s)");
      });
      save_model(tr_out, model);
      if (!tr_hist.empty()) write_history_csv(tr_hist, h);
      log(Level::info, "saved ", tr_out, " (", h.time_per_sample_us, " us/sample)");
    } else if (*ev) {
      const FeatureDataset data = subsample(read_dataset(ev_data), ev_max, g.seed);
      if (ev_cv > 0) {
        CvConfig cfg;
        cfg.k = ev_cv;
        cfg.train = ev_tc;
        cfg.train.seed = g.seed;
        cfg.model_seed = g.seed;
        cfg.split_seed = g.seed;
        cfg.threshold = ev_thr;
        cfg.threads = g.threads;
        const auto cv = kfold_cv(data, cfg, [](const CvFold& f) {
          log(Level::info, "fold ", f.fold, ": f1=", f.metrics.f1, " recall=", f.metrics.recall);
        });
        if (!ev_dir.empty()) {
          fs::create_directories(ev_dir);
          for (const auto& f : cv.folds) {
            MetricsReport r;
            r.threshold = ev_thr;
            r.confusion = f.confusion;
            r.metrics = f.metrics;
            write_report_csv(fs::path(ev_dir) / ("fold_" + std::to_string(f.fold) + ".csv"), r);
          }
          write_cv_csv(fs::path(ev_dir) / "cv.csv", cv);
          write_cv_json(fs::path(ev_dir) / "cv.json", cv);
        }
        MetricsReport total;
        total.threshold = ev_thr;
        total.confusion = cv.totals;
        total.metrics = cv.total_metrics;
        print_metrics(total);
      } else {
        if (ev_model.empty()) throw Error(Errc::invalid_config, "eval needs --model or --cv");
        const Model model = load_model(ev_model);
        if (model.hyper.w != data.window()) {
          throw Error(Errc::model_window_mismatch,
                      "model w=" + std::to_string(model.hyper.w) + ", dataset w=" +
                          std::to_string(data.window()));
        }
        const auto scores = predict(model, data, g.threads);
        const auto labels = data.labels();
        const auto report = evaluate(labels, scores, ev_thr);
        if (!ev_csv.empty()) write_report_csv(ev_csv, report);
        if (!ev_json.empty()) write_report_json(ev_json, report);
        if (!ev_roc.empty()) {
          if (!report.roc) throw Error(Errc::single_class_input, "no ROC for a single-class dataset");
          write_roc_csv(ev_roc, *report.roc);
        }
        print_metrics(report);
      }
    } else if (*sw) {
      swc.windows = parse_windows(sw_windows);
      swc.train.seed = g.seed;
      swc.model_seed = g.seed;
      swc.split_seed = g.seed;
      const auto records = load_records(sw_in, sw_labels);
      const auto rows = window_sweep(records, swc, [](const SweepRow& r) {
        log(Level::info, "w=", r.w, " time/sample=", r.time_per_sample_us, "us test_f1=", r.test_f1);
      });
      write_sweep_csv(sw_out, rows);
    } else if (*det) {
      const Model model = load_model(det_model);
      if (det_w != 0 && det_w != model.hyper.w) {
        throw Error(Errc::model_window_mismatch, "model w=" + std::to_string(model.hyper.w) +
                                                     ", -w " + std::to_string(det_w));
      }
      DetectOptions opt;
      opt.threshold = det_thr;
      if (!det_no_labels) {
        if (!det_labels.empty()) opt.labels = det_labels;
        else if (fs::exists(sidecar_path(det_in))) opt.labels = sidecar_path(det_in);
      }
      std::ofstream file;
      if (!det_out.empty()) {
        file.open(det_out, std::ios::trunc);
        if (!file) throw Error(Errc::io_failure, "cannot create " + det_out);
        opt.out = &file;
      } else {
        opt.out = &std::cout;
      }
      const auto s = run_detect(det_in, model, opt);
      log(Level::info, "verdicts=", s.verdicts, " unscored=", s.unscored,
          " predicted_injected=", s.predicted_injected, " mean_latency_us=", s.mean_latency_us);
      if (s.confusion) {
        const auto& c = *s.confusion;
        log(Level::info, "tp=", c.tp, " fp=", c.fp, " tn=", c.tn, " fn=", c.fn);
        if (c.total() > 0) {
          const auto m = metrics(c);
          log(Level::info, "accuracy=", m.accuracy, " precision=", m.precision,
              " recall=", m.recall, " f1=", m.f1);
        }
      }
    } else if (*be) {
      const Model model = be_model.empty() ? build_model(be_w, layout::prefix_len, g.seed)
                                           : load_model(be_model);
      const auto r = run_bench(model, be_n, be_budget, g.seed);
      std::printf("w=%zu samples=%zu mean_us=%.1f median_us=%.1f p99_us=%.1f budget_us=%.0f "
                  "realtime_ok=%s\n",
                  model.hyper.w, r.samples, r.mean_us, r.median_us, r.p99_us, r.budget_us,
                  r.realtime_ok ? "true" : "false");
      if (!be_json.empty()) {
        nlohmann::json j{{"w", model.hyper.w},       {"samples", r.samples},
                         {"mean_us", r.mean_us},     {"median_us", r.median_us},
                         {"p99_us", r.p99_us},       {"budget_us", r.budget_us},
                         {"realtime_ok", r.realtime_ok}};
        std::ofstream(be_json) << j.dump(2) << '\n';
      }
    }
  } catch (const std::exception& e) {
    log(Level::error, e.what());
    return 1;
  }
  return 0;
}
