#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <random>
#include <set>

#include "avtp_ids/error.hpp"
#include "avtp_ids/evaluation.hpp"
#include "test_util.hpp"

using namespace avtp_ids;

namespace {

constexpr Label B = Label::benign;
constexpr Label I = Label::injected;

struct Scored {
  std::vector<Label> labels;
  std::vector<double> scores;
};

// Scores quantised to 0.01 so ties are common.
Scored random_scored(std::size_t n, std::uint64_t seed, double p_injected = 0.4) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Scored s;
  for (std::size_t k = 0; k < n; ++k) {
    const bool inj = u(rng) < p_injected;
    s.labels.push_back(inj ? I : B);
    const double raw = std::clamp(u(rng) * 0.7 + (inj ? 0.3 : 0.0), 0.0, 1.0);
    s.scores.push_back(std::round(raw * 100.0) / 100.0);
  }
  return s;
}

FeatureDataset labeled_dataset(std::size_t n, std::size_t injected, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  FeatureDataset d(4, 116);
  std::vector<Label> labels(n, B);
  std::fill(labels.begin(), labels.begin() + static_cast<long>(injected), I);
  std::shuffle(labels.begin(), labels.end(), rng);
  for (std::size_t k = 0; k < n; ++k) {
    FeatureMatrix m{4, 116, std::vector<std::uint8_t>(4 * 116)};
    for (auto& v : m.values) v = static_cast<std::uint8_t>(rng() % 16);
    if (labels[k] == I) m.values[0] = 15;  // trivially separable
    else m.values[0] = 0;
    m.label = labels[k];
    m.newest_index = k;
    d.append(m);
  }
  return d;
}

}  // namespace

TEST_CASE("confusion examples and threshold boundary") {
  const std::vector<Label> l{I, I, B, B, I};
  const std::vector<double> s{0.9, 0.4, 0.6, 0.1, 0.5};
  const auto c = confusion(l, s);
  CHECK(c == Confusion{2, 1, 1, 1});
  CHECK(confusion(l, s, 0.95) == Confusion{0, 0, 2, 3});
  CHECK(confusion(l, s, 0.0) == Confusion{3, 2, 0, 0});
  CHECK_THROWS_AS(confusion(l, std::vector<double>{0.1}), Error);
  const std::vector<Label> u{Label::unlabeled};
  CHECK_THROWS_AS(confusion(u, std::vector<double>{0.1}), Error);
}

TEST_CASE("confusion matches a direct recount") {
  const auto s = random_scored(10'000, 51);
  const auto c = confusion(s.labels, s.scores, 0.37);
  Confusion want;
  for (std::size_t k = 0; k < s.labels.size(); ++k) {
    const bool pos = s.scores[k] >= 0.37;
    const bool inj = s.labels[k] == I;
    if (pos && inj) ++want.tp;
    else if (pos) ++want.fp;
    else if (inj) ++want.fn;
    else ++want.tn;
  }
  CHECK(c == want);
  CHECK(c.total() == 10'000);
}

TEST_CASE("metrics") {
  const auto m = metrics(Confusion{2, 1, 1, 1});
  CHECK(m.accuracy == doctest::Approx(0.6));
  CHECK(m.precision == doctest::Approx(2.0 / 3.0));
  CHECK(m.recall == doctest::Approx(2.0 / 3.0));
  CHECK(m.f1 == doctest::Approx(2.0 / 3.0));

  const auto z = metrics(Confusion{0, 0, 5, 0});
  CHECK(z.accuracy == 1.0);
  CHECK(z.precision == 0.0);
  CHECK(z.recall == 0.0);
  CHECK(z.f1 == 0.0);
  CHECK_THROWS_AS(metrics(Confusion{}), Error);

  std::mt19937_64 rng(52);
  for (int k = 0; k < 1000; ++k) {
    const Confusion c{1 + rng() % 500, 1 + rng() % 500, rng() % 500, 1 + rng() % 500};
    const auto r = metrics(c);
    const double p = double(c.tp) / double(c.tp + c.fp);
    const double q = double(c.tp) / double(c.tp + c.fn);
    CHECK(std::abs(r.precision - p) < 1e-12);
    CHECK(std::abs(r.recall - q) < 1e-12);
    CHECK(std::abs(r.f1 - 2 * p * q / (p + q)) < 1e-12);
    CHECK(std::abs(r.accuracy - double(c.tp + c.tn) / double(c.total())) < 1e-12);
  }
}

TEST_CASE("roc and auc") {
  const std::vector<Label> l{B, B, I, I};
  const auto perfect = roc_and_auc(l, std::vector<double>{0.1, 0.2, 0.8, 0.9});
  CHECK(perfect.auc == doctest::Approx(1.0));
  CHECK(perfect.points.front().fpr == 0.0);
  CHECK(perfect.points.front().tpr == 0.0);
  CHECK(std::isinf(perfect.points.front().threshold));
  CHECK(perfect.points.back().fpr == 1.0);
  CHECK(perfect.points.back().tpr == 1.0);

  const auto tied = roc_and_auc(l, std::vector<double>{0.5, 0.5, 0.5, 0.5});
  CHECK(tied.auc == doctest::Approx(0.5));
  CHECK(tied.points.size() == 2);

  const auto inverted = roc_and_auc(l, std::vector<double>{0.9, 0.8, 0.2, 0.1});
  CHECK(inverted.auc == doctest::Approx(0.0));

  CHECK_THROWS_AS(roc_and_auc(std::vector<Label>{B, B}, std::vector<double>{0.1, 0.2}), Error);
  CHECK_FALSE(evaluate(std::vector<Label>{B, B}, std::vector<double>{0.1, 0.2}).roc.has_value());
}

TEST_CASE("auc equals the Mann-Whitney statistic with ties") {
  for (const std::uint64_t seed : {53u, 54u, 55u}) {
    const auto s = random_scored(1000, seed);
    const auto roc = roc_and_auc(s.labels, s.scores);
    CHECK(std::abs(roc.auc - test_util::mann_whitney_auc(s.labels, s.scores)) < 1e-9);
    for (std::size_t k = 1; k < roc.points.size(); ++k) {
      CHECK(roc.points[k].fpr >= roc.points[k - 1].fpr);
      CHECK(roc.points[k].tpr >= roc.points[k - 1].tpr);
      CHECK(roc.points[k].threshold < roc.points[k - 1].threshold);
    }
  }
}

TEST_CASE("stratified folds partition the data") {
  std::vector<Label> labels(1000, B);
  std::fill(labels.begin(), labels.begin() + 370, I);
  std::shuffle(labels.begin(), labels.end(), std::mt19937_64(56));
  const auto folds = stratified_folds(labels, 5, 9);
  REQUIRE(folds.size() == 5);
  std::set<std::size_t> seen;
  for (const auto& f : folds) {
    CHECK(f.size() == 200);
    std::size_t inj = 0;
    for (const auto k : f) {
      CHECK(seen.insert(k).second);
      inj += labels[k] == I;
    }
    CHECK(inj >= 73);
    CHECK(inj <= 75);
  }
  CHECK(seen.size() == 1000);
  CHECK(stratified_folds(labels, 5, 9) == folds);
  CHECK(stratified_folds(labels, 5, 10) != folds);

  CHECK_THROWS_AS(stratified_folds(std::vector<Label>(10, B), 2, 1), Error);
  CHECK_THROWS_AS(stratified_folds(std::vector<Label>{B, I, B}, 5, 1), Error);
}

TEST_CASE("k-fold cross validation totals") {
  const auto data = labeled_dataset(250, 100, 57);
  CvConfig cfg;
  cfg.k = 5;
  cfg.train.epochs = 2;
  cfg.train.batch_size = 32;
  std::size_t calls = 0;
  const auto cv = kfold_cv(data, cfg, [&](const CvFold& f) { CHECK(f.fold == ++calls); });
  CHECK(calls == 5);
  REQUIRE(cv.folds.size() == 5);
  CHECK(cv.models.size() == 5);
  Confusion sum;
  for (const auto& f : cv.folds) {
    sum += f.confusion;
    CHECK(f.val_size == 50);
    CHECK(f.train_size == 200);
    CHECK(f.val_injected == 20);
    CHECK(f.confusion.total() == 50);
    CHECK(f.history.epochs.size() == 2);
  }
  CHECK(cv.totals == sum);
  CHECK(cv.totals.total() == 250);
  CHECK(cv.total_metrics.accuracy == doctest::Approx(metrics(sum).accuracy));

  test_util::TempDir dir;
  write_cv_csv(dir / "cv.csv", cv);
  std::ifstream in(dir / "cv.csv");
  std::string line;
  std::size_t rows = 0;
  std::string last;
  while (std::getline(in, line)) {
    ++rows;
    last = line;
  }
  CHECK(rows == 7);
  CHECK(last.rfind("total,", 0) == 0);
  write_cv_json(dir / "cv.json", cv);
  CHECK(std::filesystem::file_size(dir / "cv.json") > 0);
}

TEST_CASE("rank correlation") {
  const std::vector<double> x{1, 2, 3, 4, 5};
  CHECK(rank_correlation(x, std::vector<double>{10, 20, 30, 40, 50}) == doctest::Approx(1.0));
  CHECK(rank_correlation(x, std::vector<double>{5, 4, 3, 2, 1}) == doctest::Approx(-1.0));
  CHECK(rank_correlation(x, std::vector<double>{1, 4, 9, 16, 1000}) == doctest::Approx(1.0));
  // Ties use average ranks: y ranks 1.5,1.5,3,4,5.
  const double r = rank_correlation(x, std::vector<double>{1, 1, 2, 3, 4});
  CHECK(r == doctest::Approx(0.9746794344808963));
  CHECK_THROWS_AS(rank_correlation(x, std::vector<double>{1, 2}), Error);
}

TEST_CASE("report writers") {
  test_util::TempDir dir;
  const auto s = random_scored(200, 58);
  const auto rep = evaluate(s.labels, s.scores);
  write_report_json(dir / "r.json", rep);
  write_report_csv(dir / "r.csv", rep);
  write_roc_csv(dir / "roc.csv", *rep.roc);
  CHECK(test_util::slurp(dir / "roc.csv").rfind("fpr,tpr\n0,0\n", 0) == 0);
  const auto json = test_util::slurp(dir / "r.json");
  CHECK(json.find("\"f1\"") != std::string::npos);
  CHECK(json.find("\"auc\"") != std::string::npos);
}
