#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "auglabel/harness.hpp"

using namespace auglabel;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.synthetic.n_train = 300;
  cfg.synthetic.n_val = 150;
  cfg.synthetic.n_test = 150;
  cfg.hidden_sizes = {16};
  cfg.sgd.epochs = 4;
  cfg.seeds = {1, 2};
  cfg.alpha_grid = {0.5, 1.0};
  cfg.flip_rate_grid = {0.1};
  return cfg;
}

std::vector<CategoricalLabel> random_labels(std::size_t n, std::size_t m, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(0.5);
  std::vector<CategoricalLabel> out;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::uint8_t> bits(m);
    for (auto& b : bits) b = coin(rng) ? 1 : 0;
    out.emplace_back(bits);
  }
  return out;
}

}  // namespace

TEST(MeanAccuracy, PerfectPredictions) {
  std::mt19937_64 rng(1);
  const auto labels = random_labels(30, 5, rng);
  std::vector<Vector> preds;
  for (const auto& y : labels) {
    Vector p(5);
    for (std::size_t j = 0; j < 5; ++j) p[j] = y[j] ? 0.9 : 0.1;
    preds.push_back(p);
  }
  const auto r = mean_accuracy(preds, labels);
  EXPECT_EQ(r.mean, 1.0);
  EXPECT_EQ(r.per_attribute, Vector(5, 1.0));
}

TEST(MeanAccuracy, HalfCountsAsPositive) {
  const std::vector<CategoricalLabel> labels(4, CategoricalLabel{1, 1, 1});
  const std::vector<Vector> preds(4, Vector{0.5, 0.5, 0.5});
  EXPECT_EQ(mean_accuracy(preds, labels).mean, 1.0);
}

TEST(MeanAccuracy, MatchesCountingLoop) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto labels = random_labels(200, 8, rng);
  std::vector<Vector> preds(200, Vector(8));
  for (auto& p : preds)
    for (auto& v : p) v = unit(rng);
  double total = 0.0;
  std::vector<int> counts(8, 0);
  for (std::size_t j = 0; j < 8; ++j) {
    for (std::size_t i = 0; i < 200; ++i) {
      const int predicted = preds[i][j] >= 0.5 ? 1 : 0;
      if (predicted == labels[i][j]) ++counts[j];
    }
    total += counts[j] / 200.0;
  }
  const auto r = mean_accuracy(preds, labels);
  EXPECT_DOUBLE_EQ(r.mean, total / 8.0);
  for (std::size_t j = 0; j < 8; ++j) EXPECT_EQ(r.per_attribute[j], counts[j] / 200.0);
}

TEST(MeanAccuracy, MajorityPredictorIsAtLeastHalf) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    std::uniform_real_distribution<double> rate(0.0, 1.0);
    const std::size_t m = 1 + trial % 6;
    Vector prevalence(m);
    for (auto& p : prevalence) p = rate(rng);
    std::vector<CategoricalLabel> labels;
    for (int i = 0; i < 50; ++i) {
      std::vector<std::uint8_t> bits(m);
      for (std::size_t j = 0; j < m; ++j) bits[j] = std::bernoulli_distribution(prevalence[j])(rng);
      labels.emplace_back(bits);
    }
    Vector majority(m);
    for (std::size_t j = 0; j < m; ++j) {
      int ones = 0;
      for (const auto& y : labels) ones += y[j];
      majority[j] = 2 * ones >= 50 ? 1.0 : 0.0;
    }
    const std::vector<Vector> preds(labels.size(), majority);
    EXPECT_GE(mean_accuracy(preds, labels).mean, 0.5);
  }
}

TEST(MeanAccuracy, Errors) {
  EXPECT_THROW(mean_accuracy({}, {}), Error);
  EXPECT_THROW(mean_accuracy({Vector{0.5}}, {CategoricalLabel{1, 0}}), ShapeError);
  EXPECT_THROW(mean_accuracy({Vector{0.5}, Vector{0.5}}, {CategoricalLabel{1}}), ShapeError);
}

TEST(Method, ParseAndCanonicalName) {
  EXPECT_EQ(Method::parse("none").name(), "none");
  EXPECT_EQ(Method::parse("baseline").name(), "none");
  EXPECT_EQ(Method::parse("aug_label+geo").name(), "geo+aug_label");
  EXPECT_EQ(Method::parse("disturb+dropout+geo+auglabel").name(), "geo+dropout+disturb_label+aug_label");
  EXPECT_EQ(Method::parse("geo+aug_label").without_aug_label().name(), "geo");
  EXPECT_THROW(Method::parse("geo+mixup"), Error);
}

TEST(Summaries, SampleStdAndPairedError) {
  const auto s = summarize({1.0, 2.0, 3.0, 4.0});
  EXPECT_EQ(s.n, 4u);
  EXPECT_DOUBLE_EQ(s.mean, 2.5);
  EXPECT_DOUBLE_EQ(s.std, std::sqrt(5.0 / 3.0));
  const auto p = paired_difference("a", {0.8, 0.9, 0.7}, "b", {0.7, 0.7, 0.7});
  EXPECT_DOUBLE_EQ(p.mean_improvement, 0.1);
  EXPECT_DOUBLE_EQ(p.std_error, 0.1 / std::sqrt(3.0));
  EXPECT_THROW(paired_difference("a", {0.1}, "b", {0.1, 0.2}), ShapeError);
}

TEST(Config, JsonRoundTrip) {
  ExperimentConfig cfg = small_config();
  cfg.methods = {"geo+dropout", "disturb_label+aug_label"};
  cfg.synthetic.exclusive_pairs = {{3, 4}};
  cfg.sgd.learning_rate = 0.0125;
  cfg.data_fraction = 0.5;
  cfg.embedding_dim = 8;
  const auto j = config_to_json(cfg);
  const auto back = config_from_json(nlohmann::json::parse(j.dump()));
  EXPECT_EQ(config_to_json(back), j);
  EXPECT_EQ(back.synthetic.exclusive_pairs, cfg.synthetic.exclusive_pairs);
  EXPECT_EQ(back.sgd.learning_rate, 0.0125);
}

TEST(Config, Validation) {
  ExperimentConfig cfg = small_config();
  cfg.seeds.clear();
  EXPECT_THROW(cfg.validate(), Error);
  cfg = small_config();
  cfg.alpha_grid = {0.5, 1.5};
  EXPECT_THROW(cfg.validate(), Error);
  cfg = small_config();
  cfg.methods = {"bogus"};
  EXPECT_THROW(cfg.validate(), Error);
}

TEST(SelectAlpha, SingletonGrid) {
  ExperimentConfig cfg = small_config();
  cfg.alpha_grid = {1.0};
  const auto ws = prepare_workspace(cfg);
  const auto sel = select_alpha(cfg, ws, ws.data.train, switches_for(cfg, Method{}, 0.0), 1);
  EXPECT_EQ(sel.best_alpha, 1.0);
  EXPECT_EQ(sel.candidates.size(), 1u);
}

TEST(SelectAlpha, NoiseEmbeddingPrefersPureCategorical) {
  ExperimentConfig cfg = small_config();
  cfg.alpha_grid = {0.0, 1.0};
  cfg.sgd.epochs = 8;
  auto ws = prepare_workspace(cfg);
  // Continuous targets from a random matrix carry no group structure; with
  // alpha = 0 the categorical head is never trained at all.
  Rng rng(77);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix w(ws.space.d(), ws.space.m());
  for (auto& v : w.data()) v = normal(rng);
  ws.space = AttributeSpace(ws.space.names(), w);
  const auto sel = select_alpha(cfg, ws, ws.data.train, switches_for(cfg, Method{}, 0.0), 3);
  ASSERT_EQ(sel.candidates.size(), 2u);
  EXPECT_GT(sel.candidates[1].val_accuracy, sel.candidates[0].val_accuracy);
  EXPECT_EQ(sel.best_alpha, 1.0);
}

TEST(SelectAlpha, ReturnsArgmaxOfRecordedScores) {
  ExperimentConfig cfg = small_config();
  cfg.alpha_grid = {0.3, 0.5, 0.7, 0.9, 1.0};
  const auto ws = prepare_workspace(cfg);
  Method m;
  m.aug_label = true;
  const auto sel = select_alpha(cfg, ws, ws.data.train, switches_for(cfg, m, 0.0), 5);
  ASSERT_EQ(sel.candidates.size(), 5u);
  double best = -1.0;
  double best_alpha = 0.0;
  for (const auto& c : sel.candidates) {
    EXPECT_EQ(c.val_accuracy, c.result.trace.back().val_accuracy);
    if (c.val_accuracy >= best) {
      best = c.val_accuracy;
      best_alpha = c.alpha;
    }
  }
  EXPECT_EQ(sel.best_alpha, best_alpha);
}

TEST(RunComparison, SingleCellEqualsDirectTraining) {
  ExperimentConfig cfg = small_config();
  cfg.methods = {"none"};
  cfg.seeds = {4};
  const auto report = run_comparison(cfg);
  ASSERT_EQ(report.methods.size(), 1u);
  ASSERT_EQ(report.methods[0].cells.size(), 1u);
  const auto& cell = report.methods[0].cells[0];
  ASSERT_TRUE(cell.ok) << cell.error;
  EXPECT_EQ(cell.alpha, 1.0);

  const auto ws = prepare_workspace(cfg);
  const auto direct = train_single(cfg, ws, ws.data.train, switches_for(cfg, Method{}, 0.0), 1.0, 4);
  EXPECT_EQ(cell.test_accuracy, evaluate(direct.params, ws.data.test, cfg.crop_h, cfg.crop_w).mean);
  EXPECT_TRUE(report.paired.empty());
}

TEST(RunComparison, ShapeOfOutputAndPairing) {
  ExperimentConfig cfg = small_config();
  cfg.seeds = {1, 2, 3, 4, 5};
  cfg.methods = {"none", "aug_label", "disturb_label"};
  const auto report = run_comparison(cfg);
  EXPECT_EQ(report.failed_cells(), 0u);
  ASSERT_EQ(report.methods.size(), 3u);
  for (const auto& m : report.methods) {
    ASSERT_EQ(m.cells.size(), 5u);
    for (std::size_t i = 0; i < 5; ++i) {
      EXPECT_EQ(m.cells[i].seed, cfg.seeds[i]);
      EXPECT_GE(m.cells[i].test_accuracy, 0.0);
      EXPECT_LE(m.cells[i].test_accuracy, 1.0);
      EXPECT_EQ(m.cells[i].per_attribute.size(), 12u);
      EXPECT_EQ(m.cells[i].trace.size(), cfg.sgd.epochs);
    }
  }
  EXPECT_EQ(report.find("aug_label")->cells[0].searched.size(), 2u);
  EXPECT_EQ(report.find("disturb_label")->cells[0].flip_rate, 0.1);

  // Paired rows recomputed from the recorded per-seed values.
  ASSERT_EQ(report.paired.size(), 2u);
  for (const auto& p : report.paired) {
    const auto t = report.find(p.method)->accuracies();
    const auto c = report.find(p.control)->accuracies();
    Vector diff;
    for (std::size_t i = 0; i < t.size(); ++i) diff.push_back(t[i] - c[i]);
    const auto s = summarize(diff);
    EXPECT_EQ(p.control, "none");
    EXPECT_DOUBLE_EQ(p.mean_improvement, s.mean);
    EXPECT_DOUBLE_EQ(p.std_error, s.std / std::sqrt(5.0));
  }

  const auto j = report_to_json(report);
  EXPECT_EQ(j.at("format_version"), kReportFormatVersion);
  EXPECT_EQ(j.at("config"), config_to_json(cfg));
  std::ostringstream table;
  write_report_table(table, report);
  EXPECT_NE(table.str().find("aug_label"), std::string::npos);
}

TEST(RunComparison, FailedCellIsRecordedAndRunContinues) {
  ExperimentConfig cfg = small_config();
  cfg.seeds = {1};
  cfg.methods = {"none", "geo"};
  cfg.crop_h = 12;  // larger than the 10x10 grid
  const auto report = run_comparison(cfg);
  EXPECT_EQ(report.failed_cells(), 2u);
  EXPECT_FALSE(report.methods[1].cells[0].error.empty());
  EXPECT_EQ(report_to_json(report).at("failed_cells"), 2);
}

TEST(RunComparison, ByteIdenticalReports) {
  ExperimentConfig cfg = small_config();
  cfg.methods = {"geo+dropout+disturb_label+aug_label"};
  EXPECT_EQ(report_to_json(run_comparison(cfg)).dump(2), report_to_json(run_comparison(cfg)).dump(2));
}

TEST(FractionSweep, CsvRowsAndConsistencyWithComparison) {
  ExperimentConfig cfg = small_config();
  cfg.methods = {"none", "aug_label"};
  const auto sweep = run_fraction_sweep(cfg, {0.5, 1.0});
  EXPECT_EQ(sweep.failed_cells(), 0u);
  std::ostringstream csv;
  write_sweep_csv(csv, sweep);
  std::size_t lines = 0;
  for (char ch : csv.str()) lines += ch == '\n';
  EXPECT_EQ(lines, 1u + 2u * 2u);

  const auto cmp = run_comparison(cfg);
  for (const char* name : {"none", "aug_label"}) {
    EXPECT_EQ(sweep.find(1.0, name)->accuracies(), cmp.find(name)->accuracies()) << name;
  }
  EXPECT_EQ(sweep.find(0.5, "none")->cells[0].trace.size(), cfg.sgd.epochs);
  EXPECT_THROW(run_fraction_sweep(cfg, {0.0}), Error);
  EXPECT_THROW(run_fraction_sweep(cfg, {}), Error);
}

TEST(FractionSweep, BaselineCurveTrendsUpward) {
  ExperimentConfig cfg = small_config();
  cfg.synthetic.n_train = 1000;
  cfg.sgd.epochs = 8;
  cfg.seeds = {1, 2, 3};
  cfg.methods = {"none"};
  const std::vector<double> fractions = {0.1, 0.2, 0.5, 1.0};
  const auto sweep = run_fraction_sweep(cfg, fractions);
  Vector means;
  for (double f : fractions) means.push_back(summarize(sweep.find(f, "none")->accuracies()).mean);
  int inversions = 0;
  for (std::size_t i = 1; i < means.size(); ++i) inversions += means[i] < means[i - 1];
  EXPECT_LE(inversions, 1);
  EXPECT_GT(means.back(), means.front());
}
