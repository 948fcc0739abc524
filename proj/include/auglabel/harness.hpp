#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "auglabel/core.hpp"
#include "auglabel/dataset.hpp"
#include "auglabel/embeddings.hpp"
#include "auglabel/labelspace.hpp"
#include "auglabel/metrics.hpp"
#include "auglabel/net.hpp"
#include "auglabel/training.hpp"

namespace auglabel {

inline constexpr int kReportFormatVersion = 1;

/// A combination of regularizers, written "geo+dropout+aug_label" or "none".
struct Method {
  bool geo_aug = false;
  bool dropout = false;
  bool disturb_label = false;
  bool aug_label = false;

  static Method parse(const std::string& text) {
    Method m;
    if (text == "none" || text == "baseline") return m;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, '+')) {
      if (part == "geo" || part == "geo_aug") m.geo_aug = true;
      else if (part == "dropout") m.dropout = true;
      else if (part == "disturb" || part == "disturb_label") m.disturb_label = true;
      else if (part == "aug_label" || part == "auglabel") m.aug_label = true;
      else throw Error("unknown method component '" + part + "'");
    }
    return m;
  }

  std::string name() const {
    std::string out;
    auto add = [&](bool on, const char* s) {
      if (!on) return;
      if (!out.empty()) out += '+';
      out += s;
    };
    add(geo_aug, "geo");
    add(dropout, "dropout");
    add(disturb_label, "disturb_label");
    add(aug_label, "aug_label");
    return out.empty() ? "none" : out;
  }

  /// The same method with label augmentation switched off.
  Method without_aug_label() const {
    Method m = *this;
    m.aug_label = false;
    return m;
  }

  bool operator==(const Method&) const = default;
};

/// Everything a run needs. Loaded from one JSON document; every field has a
/// default giving the desk-scale synthetic task.
struct ExperimentConfig {
  // Data: a synthetic spec, or a dataset JSON file produced by export.
  SyntheticSpec synthetic = default_synthetic_spec(0);
  std::string dataset_path;

  // Embeddings: GloVe text file, or a synthetic table of `embedding_dim`.
  std::string glove_path;
  std::uint64_t embedding_seed = 7;
  std::size_t embedding_dim = 16;

  std::vector<std::string> methods = {"none", "aug_label"};
  std::vector<double> alpha_grid = {0.3, 0.5, 0.7, 0.9, 1.0};
  std::vector<double> flip_rate_grid = {0.05, 0.1, 0.2};

  std::vector<std::size_t> hidden_sizes = {64};
  double dropout_rate = 0.3;
  std::size_t crop_h = 8;
  std::size_t crop_w = 8;
  SgdConfig sgd;
  double data_fraction = 1.0;
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};

  void validate() const {
    if (seeds.empty()) throw Error("config: at least one seed is required");
    if (methods.empty()) throw Error("config: at least one method is required");
    for (const auto& m : methods) Method::parse(m);
    if (alpha_grid.empty()) throw Error("config: alpha grid is empty");
    for (double a : alpha_grid) {
      if (!(a >= 0.0 && a <= 1.0)) throw Error("config: alpha grid values must lie in [0, 1]");
    }
    if (flip_rate_grid.empty()) throw Error("config: flip-rate grid is empty");
    for (double f : flip_rate_grid) DisturbConfig{f}.validate();
    if (!(data_fraction > 0.0 && data_fraction <= 1.0)) throw Error("config: data_fraction must lie in (0, 1]");
    sgd.validate();
  }
};

inline nlohmann::json synthetic_to_json(const SyntheticSpec& s) {
  nlohmann::json pairs = nlohmann::json::array();
  for (auto [a, b] : s.exclusive_pairs) pairs.push_back({a, b});
  return {{"m", s.m},
          {"groups", s.groups},
          {"exclusive_pairs", pairs},
          {"n_train", s.n_train},
          {"n_val", s.n_val},
          {"n_test", s.n_test},
          {"grid_h", s.grid_h},
          {"grid_w", s.grid_w},
          {"noise_std", s.noise_std},
          {"attribute_flip", s.attribute_flip},
          {"seed", s.seed}};
}

inline SyntheticSpec synthetic_from_json(const nlohmann::json& j) {
  SyntheticSpec s = default_synthetic_spec(0);
  s.m = j.value("m", s.m);
  s.groups = j.value("groups", s.groups);
  if (j.contains("exclusive_pairs")) {
    s.exclusive_pairs.clear();
    for (const auto& p : j.at("exclusive_pairs")) {
      s.exclusive_pairs.emplace_back(p.at(0).get<std::size_t>(), p.at(1).get<std::size_t>());
    }
  }
  s.n_train = j.value("n_train", s.n_train);
  s.n_val = j.value("n_val", s.n_val);
  s.n_test = j.value("n_test", s.n_test);
  s.grid_h = j.value("grid_h", s.grid_h);
  s.grid_w = j.value("grid_w", s.grid_w);
  s.noise_std = j.value("noise_std", s.noise_std);
  s.attribute_flip = j.value("attribute_flip", s.attribute_flip);
  s.seed = j.value("seed", s.seed);
  return s;
}

inline nlohmann::json config_to_json(const ExperimentConfig& c) {
  nlohmann::json j;
  if (c.dataset_path.empty()) j["dataset"] = {{"synthetic", synthetic_to_json(c.synthetic)}};
  else j["dataset"] = {{"path", c.dataset_path}};
  if (c.glove_path.empty()) j["embeddings"] = {{"synthetic_seed", c.embedding_seed}, {"dimension", c.embedding_dim}};
  else j["embeddings"] = {{"glove", c.glove_path}};
  j["methods"] = c.methods;
  j["alpha_grid"] = c.alpha_grid;
  j["flip_rate_grid"] = c.flip_rate_grid;
  j["network"] = {{"hidden_sizes", c.hidden_sizes}, {"dropout_rate", c.dropout_rate}};
  j["crop"] = {c.crop_h, c.crop_w};
  j["sgd"] = {{"learning_rate", c.sgd.learning_rate}, {"epochs", c.sgd.epochs}, {"batch_size", c.sgd.batch_size}};
  j["data_fraction"] = c.data_fraction;
  j["seeds"] = c.seeds;
  return j;
}

inline ExperimentConfig config_from_json(const nlohmann::json& j) {
  ExperimentConfig c;
  if (j.contains("dataset")) {
    const auto& d = j.at("dataset");
    if (d.contains("path")) c.dataset_path = d.at("path").get<std::string>();
    if (d.contains("synthetic")) c.synthetic = synthetic_from_json(d.at("synthetic"));
  }
  if (j.contains("embeddings")) {
    const auto& e = j.at("embeddings");
    c.glove_path = e.value("glove", std::string());
    c.embedding_seed = e.value("synthetic_seed", c.embedding_seed);
    c.embedding_dim = e.value("dimension", c.embedding_dim);
  }
  c.methods = j.value("methods", c.methods);
  c.alpha_grid = j.value("alpha_grid", c.alpha_grid);
  c.flip_rate_grid = j.value("flip_rate_grid", c.flip_rate_grid);
  if (j.contains("network")) {
    c.hidden_sizes = j.at("network").value("hidden_sizes", c.hidden_sizes);
    c.dropout_rate = j.at("network").value("dropout_rate", c.dropout_rate);
  }
  if (j.contains("crop")) {
    c.crop_h = j.at("crop").at(0).get<std::size_t>();
    c.crop_w = j.at("crop").at(1).get<std::size_t>();
  }
  if (j.contains("sgd")) {
    const auto& s = j.at("sgd");
    c.sgd.learning_rate = s.value("learning_rate", c.sgd.learning_rate);
    c.sgd.epochs = s.value("epochs", c.sgd.epochs);
    c.sgd.batch_size = s.value("batch_size", c.sgd.batch_size);
  }
  c.data_fraction = j.value("data_fraction", c.data_fraction);
  c.seeds = j.value("seeds", c.seeds);
  c.validate();
  return c;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config '" + path + "'");
  return config_from_json(nlohmann::json::parse(in));
}

/// Dataset plus the attribute space built from the configured embeddings.
struct Workspace {
  Dataset data;
  AttributeSpace space;
};

inline Workspace prepare_workspace(const ExperimentConfig& cfg) {
  Dataset data;
  if (cfg.dataset_path.empty()) {
    data = generate_synthetic(cfg.synthetic);
  } else {
    std::ifstream in(cfg.dataset_path);
    if (!in) throw Error("cannot open dataset '" + cfg.dataset_path + "'");
    data = dataset_from_json(nlohmann::json::parse(in));
  }
  EmbeddingTable table;
  if (cfg.glove_path.empty()) {
    table = make_synthetic_table(data.attribute_names, cfg.embedding_dim, cfg.embedding_seed);
  } else {
    std::ifstream in(cfg.glove_path);
    if (!in) throw Error("cannot open embeddings '" + cfg.glove_path + "'");
    table = parse_embedding_file(in);
  }
  AttributeSpace space = build_attribute_space(table, data.attribute_names);
  return {std::move(data), std::move(space)};
}

namespace detail {

inline constexpr std::uint64_t kTrainStream = 0x9E3779B97F4A7C15ull;
inline constexpr std::uint64_t kSubsampleStream = 0xD1B54A32D192ED03ull;

}  // namespace detail

inline NetworkShape network_shape(const ExperimentConfig& cfg, const AttributeSpace& space) {
  NetworkShape s;
  s.input_size = cfg.crop_h * cfg.crop_w;
  s.hidden_sizes = cfg.hidden_sizes;
  s.m = space.m();
  s.d = space.d();
  s.dropout_rate = cfg.dropout_rate;
  return s;
}

inline RegularizerSwitches switches_for(const ExperimentConfig& cfg, const Method& method, double flip_rate) {
  RegularizerSwitches r;
  r.geo_aug = method.geo_aug;
  r.dropout = method.dropout;
  r.disturb_label = method.disturb_label;
  r.disturb.flip_rate = method.disturb_label ? flip_rate : 0.0;
  r.crop_h = cfg.crop_h;
  r.crop_w = cfg.crop_w;
  return r;
}

/// One trained model of a hyperparameter search.
struct Candidate {
  double alpha = 1.0;
  double flip_rate = 0.0;
  double val_accuracy = 0.0;
  TrainResult result;
};

/// Trains one model for a fixed (alpha, switches) pair with the run seed.
inline TrainResult train_single(const ExperimentConfig& cfg, const Workspace& ws, const Split& train_split,
                                const RegularizerSwitches& reg, double alpha, std::uint64_t seed) {
  const NetworkShape shape = network_shape(cfg, ws.space);
  SgdConfig sgd = cfg.sgd;
  sgd.seed = seed ^ detail::kTrainStream;
  JointLossConfig loss;
  loss.alpha = alpha;
  return train(init_params(shape, seed), train_split, ws.data.val, &ws.space, loss, sgd, reg);
}

struct AlphaSelection {
  double best_alpha = 1.0;
  std::vector<Candidate> candidates;  // grid order
  std::size_t best_index = 0;
};

/// Trains one model per grid value and keeps the one with the highest
/// validation mean accuracy; ties go to the larger alpha.
inline AlphaSelection select_alpha(const ExperimentConfig& cfg, const Workspace& ws, const Split& train_split,
                                   const RegularizerSwitches& reg, std::uint64_t seed) {
  if (cfg.alpha_grid.empty()) throw Error("select_alpha: empty alpha grid");
  AlphaSelection sel;
  for (double alpha : cfg.alpha_grid) {
    Candidate c;
    c.alpha = alpha;
    c.flip_rate = reg.disturb.flip_rate;
    c.result = train_single(cfg, ws, train_split, reg, alpha, seed);
    c.val_accuracy = c.result.trace.back().val_accuracy;
    sel.candidates.push_back(std::move(c));
  }
  for (std::size_t i = 1; i < sel.candidates.size(); ++i) {
    const auto& best = sel.candidates[sel.best_index];
    const auto& c = sel.candidates[i];
    if (c.val_accuracy > best.val_accuracy || (c.val_accuracy == best.val_accuracy && c.alpha > best.alpha)) {
      sel.best_index = i;
    }
  }
  sel.best_alpha = sel.candidates[sel.best_index].alpha;
  return sel;
}

/// Outcome of one (method, seed) cell.
struct CellResult {
  std::string method;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  double alpha = 1.0;
  double flip_rate = 0.0;
  double test_accuracy = 0.0;
  Vector per_attribute;
  std::vector<Candidate> searched;  // params dropped, scores kept
  std::vector<EpochRecord> trace;
};

/// Hyperparameter search on validation (alpha when aug_label is on, flip
/// rate when disturb_label is on), then test evaluation of the winner.
inline CellResult run_cell(const ExperimentConfig& cfg, const Workspace& ws, const Split& train_split,
                           const Method& method, std::uint64_t seed) {
  CellResult cell;
  cell.method = method.name();
  cell.seed = seed;
  try {
    ExperimentConfig local = cfg;
    if (!method.aug_label) local.alpha_grid = {1.0};
    const std::vector<double> flips = method.disturb_label ? cfg.flip_rate_grid : std::vector<double>{0.0};

    std::optional<Candidate> best;
    for (double flip : flips) {
      AlphaSelection sel = select_alpha(local, ws, train_split, switches_for(cfg, method, flip), seed);
      for (std::size_t i = 0; i < sel.candidates.size(); ++i) {
        auto& c = sel.candidates[i];
        Candidate summary{c.alpha, c.flip_rate, c.val_accuracy, {}};
        cell.searched.push_back(summary);
        if (i == sel.best_index && (!best || c.val_accuracy > best->val_accuracy)) best = std::move(c);
      }
    }
    const auto acc = evaluate(best->result.params, ws.data.test, cfg.crop_h, cfg.crop_w);
    cell.alpha = best->alpha;
    cell.flip_rate = best->flip_rate;
    cell.test_accuracy = acc.mean;
    cell.per_attribute = acc.per_attribute;
    cell.trace = best->result.trace;
    cell.ok = true;
  } catch (const std::exception& e) {
    cell.ok = false;
    cell.error = e.what();
  }
  return cell;
}

struct Summary {
  std::size_t n = 0;
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation
};

inline Summary summarize(const Vector& values) {
  Summary s;
  s.n = values.size();
  if (s.n == 0) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(s.n);
  if (s.n > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(s.n - 1));
  }
  return s;
}

/// Seed-paired difference treatment - control.
struct PairedComparison {
  std::string method;
  std::string control;
  std::size_t n = 0;
  double mean_improvement = 0.0;
  double std_error = 0.0;
};

inline PairedComparison paired_difference(const std::string& method, const Vector& treatment,
                                          const std::string& control, const Vector& baseline) {
  detail::require_same_size(treatment.size(), baseline.size(), "paired comparison");
  Vector diff(treatment.size());
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = treatment[i] - baseline[i];
  const Summary s = summarize(diff);
  PairedComparison p;
  p.method = method;
  p.control = control;
  p.n = s.n;
  p.mean_improvement = s.mean;
  p.std_error = s.n > 0 ? s.std / std::sqrt(static_cast<double>(s.n)) : 0.0;
  return p;
}

struct MethodReport {
  std::string method;
  std::vector<CellResult> cells;  // seed order

  Vector accuracies() const {
    Vector v;
    for (const auto& c : cells) {
      if (c.ok) v.push_back(c.test_accuracy);
    }
    return v;
  }
  bool all_ok() const {
    return std::all_of(cells.begin(), cells.end(), [](const CellResult& c) { return c.ok; });
  }
  Vector per_attribute_mean() const {
    Vector out;
    std::size_t n = 0;
    for (const auto& c : cells) {
      if (!c.ok) continue;
      if (out.empty()) out.assign(c.per_attribute.size(), 0.0);
      for (std::size_t j = 0; j < out.size(); ++j) out[j] += c.per_attribute[j];
      ++n;
    }
    for (auto& v : out) v /= static_cast<double>(n);
    return out;
  }
};

struct ExperimentReport {
  nlohmann::json config;
  std::vector<std::string> attribute_names;
  std::vector<MethodReport> methods;
  std::vector<PairedComparison> paired;

  std::size_t failed_cells() const {
    std::size_t n = 0;
    for (const auto& m : methods) {
      for (const auto& c : m.cells) n += c.ok ? 0 : 1;
    }
    return n;
  }

  const MethodReport* find(const std::string& name) const {
    for (const auto& m : methods) {
      if (m.method == name) return &m;
    }
    return nullptr;
  }
};

namespace detail {

/// Pairs every aug_label method with its counterpart lacking aug_label, and
/// every other method with "none", when both are present and fully ok.
inline std::vector<PairedComparison> paired_table(const std::vector<MethodReport>& methods) {
  std::vector<PairedComparison> out;
  auto find = [&](const std::string& n) -> const MethodReport* {
    for (const auto& m : methods) {
      if (m.method == n) return &m;
    }
    return nullptr;
  };
  for (const auto& m : methods) {
    const Method parsed = Method::parse(m.method);
    std::vector<std::string> controls;
    if (parsed.aug_label) controls.push_back(parsed.without_aug_label().name());
    if (m.method != "none" && (controls.empty() || controls.front() != "none")) controls.push_back("none");
    for (const auto& control : controls) {
      const MethodReport* base = find(control);
      if (!base || !base->all_ok() || !m.all_ok()) continue;
      out.push_back(paired_difference(m.method, m.accuracies(), control, base->accuracies()));
    }
  }
  return out;
}

}  // namespace detail

/// Table-style grid: every method x seed cell, seed-paired across methods.
inline ExperimentReport run_comparison(const ExperimentConfig& cfg) {
  cfg.validate();
  const Workspace ws = prepare_workspace(cfg);
  ExperimentReport report;
  report.config = config_to_json(cfg);
  report.attribute_names = ws.data.attribute_names;
  for (const auto& name : cfg.methods) {
    const Method method = Method::parse(name);
    MethodReport mr;
    mr.method = method.name();
    for (auto seed : cfg.seeds) {
      const Split train_split = cfg.data_fraction < 1.0
                                    ? subsample_fraction(ws.data.train, cfg.data_fraction, seed ^ detail::kSubsampleStream)
                                    : ws.data.train;
      mr.cells.push_back(run_cell(cfg, ws, train_split, method, seed));
    }
    report.methods.push_back(std::move(mr));
  }
  report.paired = detail::paired_table(report.methods);
  return report;
}

inline nlohmann::json report_to_json(const ExperimentReport& r) {
  nlohmann::json j;
  j["format_version"] = kReportFormatVersion;
  j["kind"] = "comparison";
  j["config"] = r.config;
  j["attribute_names"] = r.attribute_names;
  nlohmann::json methods = nlohmann::json::array();
  for (const auto& m : r.methods) {
    const Summary s = summarize(m.accuracies());
    nlohmann::json mj;
    mj["method"] = m.method;
    mj["mean_accuracy"] = s.mean;
    mj["std_accuracy"] = s.std;
    mj["n_ok"] = s.n;
    mj["per_attribute_accuracy"] = m.per_attribute_mean();
    nlohmann::json cells = nlohmann::json::array();
    for (const auto& c : m.cells) {
      nlohmann::json cj;
      cj["seed"] = c.seed;
      cj["ok"] = c.ok;
      if (!c.ok) {
        cj["error"] = c.error;
      } else {
        cj["test_accuracy"] = c.test_accuracy;
        cj["alpha"] = c.alpha;
        cj["flip_rate"] = c.flip_rate;
        cj["per_attribute_accuracy"] = c.per_attribute;
        nlohmann::json search = nlohmann::json::array();
        for (const auto& s2 : c.searched) {
          search.push_back({{"alpha", s2.alpha}, {"flip_rate", s2.flip_rate}, {"val_accuracy", s2.val_accuracy}});
        }
        cj["search"] = search;
        nlohmann::json trace = nlohmann::json::array();
        for (const auto& e : c.trace) {
          trace.push_back({{"epoch", e.epoch}, {"train_loss", e.train_loss}, {"val_accuracy", e.val_accuracy}});
        }
        cj["trace"] = trace;
      }
      cells.push_back(std::move(cj));
    }
    mj["cells"] = cells;
    methods.push_back(std::move(mj));
  }
  j["methods"] = methods;
  nlohmann::json paired = nlohmann::json::array();
  for (const auto& p : r.paired) {
    paired.push_back({{"method", p.method},
                      {"control", p.control},
                      {"n", p.n},
                      {"mean_improvement", p.mean_improvement},
                      {"std_error", p.std_error}});
  }
  j["paired"] = paired;
  j["failed_cells"] = r.failed_cells();
  return j;
}

/// Aligned human-readable summary of a comparison.
inline void write_report_table(std::ostream& out, const ExperimentReport& r) {
  std::size_t width = 6;
  for (const auto& m : r.methods) width = std::max(width, m.method.size());
  out << std::left << std::setw(static_cast<int>(width)) << "method" << "  mean_acc    std       n   alphas\n";
  out << std::fixed << std::setprecision(4);
  for (const auto& m : r.methods) {
    const Summary s = summarize(m.accuracies());
    out << std::left << std::setw(static_cast<int>(width)) << m.method << "  " << std::setw(10) << s.mean << "  "
        << std::setw(8) << s.std << "  " << std::setw(3) << s.n << "  ";
    for (std::size_t i = 0; i < m.cells.size(); ++i) {
      if (i) out << ' ';
      if (m.cells[i].ok) out << std::setprecision(2) << m.cells[i].alpha << std::setprecision(4);
      else out << "ERR";
    }
    out << '\n';
  }
  if (!r.paired.empty()) {
    out << "\npaired differences (method - control, mean +/- s.e.)\n";
    for (const auto& p : r.paired) {
      out << "  " << p.method << " - " << p.control << ": " << std::showpos << p.mean_improvement << std::noshowpos
          << " +/- " << p.std_error << " (n=" << p.n << ")\n";
    }
  }
  out.unsetf(std::ios::floatfield);
  out << std::setprecision(6);
}

// Data-fraction sweep -------------------------------------------------------

struct SweepPoint {
  double fraction = 1.0;
  std::string method;
  std::vector<CellResult> cells;

  Vector accuracies() const {
    Vector v;
    for (const auto& c : cells) {
      if (c.ok) v.push_back(c.test_accuracy);
    }
    return v;
  }
};

struct SweepReport {
  nlohmann::json config;
  std::vector<double> fractions;
  std::vector<SweepPoint> points;  // fraction-major, then method order

  std::size_t failed_cells() const {
    std::size_t n = 0;
    for (const auto& p : points) {
      for (const auto& c : p.cells) n += c.ok ? 0 : 1;
    }
    return n;
  }

  const SweepPoint* find(double fraction, const std::string& method) const {
    for (const auto& p : points) {
      if (p.fraction == fraction && p.method == method) return &p;
    }
    return nullptr;
  }
};

/// Accuracy versus training-set fraction for every configured method. The
/// validation and test splits stay whole.
inline SweepReport run_fraction_sweep(const ExperimentConfig& cfg, const std::vector<double>& fractions) {
  cfg.validate();
  if (fractions.empty()) throw Error("sweep: no fractions given");
  for (double f : fractions) {
    if (!(f > 0.0 && f <= 1.0)) throw Error("sweep: fractions must lie in (0, 1]");
  }
  const Workspace ws = prepare_workspace(cfg);
  SweepReport report;
  report.config = config_to_json(cfg);
  report.fractions = fractions;
  for (double f : fractions) {
    for (const auto& name : cfg.methods) {
      const Method method = Method::parse(name);
      SweepPoint point;
      point.fraction = f;
      point.method = method.name();
      for (auto seed : cfg.seeds) {
        try {
          const Split train_split =
              f < 1.0 ? subsample_fraction(ws.data.train, f, seed ^ detail::kSubsampleStream) : ws.data.train;
          point.cells.push_back(run_cell(cfg, ws, train_split, method, seed));
        } catch (const std::exception& e) {
          CellResult c;
          c.method = point.method;
          c.seed = seed;
          c.error = e.what();
          point.cells.push_back(std::move(c));
        }
      }
      report.points.push_back(std::move(point));
    }
  }
  return report;
}

/// One row per (fraction, method): `fraction,method,mean_accuracy,std,n`.
inline void write_sweep_csv(std::ostream& out, const SweepReport& r) {
  out << "fraction,method,mean_accuracy,std_accuracy,n_seeds\n";
  for (const auto& p : r.points) {
    const Summary s = summarize(p.accuracies());
    detail::write_double(out, p.fraction);
    out << ',' << p.method << ',';
    detail::write_double_17(out, s.mean);
    out << ',';
    detail::write_double_17(out, s.std);
    out << ',' << s.n << '\n';
  }
}

inline nlohmann::json sweep_to_json(const SweepReport& r) {
  nlohmann::json j;
  j["format_version"] = kReportFormatVersion;
  j["kind"] = "fraction_sweep";
  j["config"] = r.config;
  j["fractions"] = r.fractions;
  nlohmann::json points = nlohmann::json::array();
  for (const auto& p : r.points) {
    const Summary s = summarize(p.accuracies());
    nlohmann::json seeds = nlohmann::json::array();
    for (const auto& c : p.cells) {
      if (c.ok) seeds.push_back({{"seed", c.seed}, {"test_accuracy", c.test_accuracy}, {"alpha", c.alpha}});
      else seeds.push_back({{"seed", c.seed}, {"error", c.error}});
    }
    points.push_back({{"fraction", p.fraction},
                      {"method", p.method},
                      {"mean_accuracy", s.mean},
                      {"std_accuracy", s.std},
                      {"n_ok", s.n},
                      {"cells", seeds}});
  }
  j["points"] = points;
  j["failed_cells"] = r.failed_cells();
  return j;
}

}  // namespace auglabel
