// Command-line front end: label synthesis, single training runs, the
// method-comparison grid, data-fraction sweeps and gradient verification.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "auglabel/checkpoint.hpp"
#include "auglabel/dataset.hpp"
#include "auglabel/embeddings.hpp"
#include "auglabel/gradcheck.hpp"
#include "auglabel/harness.hpp"
#include "auglabel/labelspace.hpp"
#include "auglabel/training.hpp"

namespace fs = std::filesystem;
using namespace auglabel;

namespace {

struct Overrides {
  std::vector<std::uint64_t> seeds;
  std::vector<std::string> methods;
  std::size_t epochs = 0;
  double learning_rate = -1.0;
};

ExperimentConfig resolve_config(const std::string& path, const Overrides& o) {
  ExperimentConfig cfg = path.empty() ? ExperimentConfig{} : load_config(path);
  if (!o.seeds.empty()) cfg.seeds = o.seeds;
  if (!o.methods.empty()) cfg.methods = o.methods;
  if (o.epochs > 0) cfg.sgd.epochs = o.epochs;
  if (o.learning_rate >= 0.0) cfg.sgd.learning_rate = o.learning_rate;
  cfg.validate();
  return cfg;
}

std::ofstream open_out(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error("cannot write '" + p.string() + "'");
  return out;
}

void add_overrides(CLI::App* cmd, std::string& config, Overrides& o) {
  cmd->add_option("--config", config, "Experiment config (JSON)");
  cmd->add_option("--seeds", o.seeds, "Override the seed list");
  cmd->add_option("--methods", o.methods, "Override the method list, e.g. none geo+aug_label");
  cmd->add_option("--epochs", o.epochs, "Override the epoch count");
  cmd->add_option("--lr", o.learning_rate, "Override the learning rate");
}

int cmd_synth_labels(const std::string& annotations, const std::string& glove, std::size_t dim,
                     std::uint64_t emb_seed, const std::string& convention, const std::string& out_path) {
  std::ifstream in(annotations);
  if (!in) throw Error("cannot open '" + annotations + "'");
  const auto conv = convention == "01" ? LabelConvention::ZeroOne : LabelConvention::PlusMinusOne;
  const Annotations ann = parse_annotations(in, conv);

  EmbeddingTable table;
  if (!glove.empty()) {
    std::ifstream g(glove);
    if (!g) throw Error("cannot open '" + glove + "'");
    table = parse_embedding_file(g);
  } else {
    table = make_synthetic_table(ann.names, dim, emb_seed);
  }
  const AttributeSpace space = build_attribute_space(table, ann.names);
  const auto zs = synthesize_batch(space, ann.labels);
  if (out_path.empty() || out_path == "-") {
    write_continuous_csv(std::cout, zs);
  } else {
    auto out = open_out(out_path);
    write_continuous_csv(out, zs);
  }
  std::cerr << "synthesized " << zs.size() << " labels (m=" << space.m() << ", d=" << space.d() << ")\n";
  return 0;
}

int cmd_train(const ExperimentConfig& cfg, const std::string& method_name, std::uint64_t seed, double alpha,
              double flip_rate, const fs::path& out_dir) {
  const Workspace ws = prepare_workspace(cfg);
  const Method method = Method::parse(method_name);
  const RegularizerSwitches reg = switches_for(cfg, method, flip_rate);
  const TrainResult res = train_single(cfg, ws, ws.data.train, reg, alpha, seed);
  const auto acc = evaluate(res.params, ws.data.test, cfg.crop_h, cfg.crop_w);

  fs::create_directories(out_dir);
  {
    auto out = open_out(out_dir / "checkpoint.json");
    save_checkpoint(out, res.params);
  }
  {
    auto out = open_out(out_dir / "trace.csv");
    out << "epoch,train_loss,val_accuracy\n";
    for (const auto& e : res.trace) {
      out << e.epoch << ',';
      detail::write_double_17(out, e.train_loss);
      out << ',';
      detail::write_double_17(out, e.val_accuracy);
      out << '\n';
    }
  }
  {
    nlohmann::json j;
    j["format_version"] = kReportFormatVersion;
    j["kind"] = "train";
    j["config"] = config_to_json(cfg);
    j["method"] = method.name();
    j["seed"] = seed;
    j["alpha"] = alpha;
    j["flip_rate"] = reg.disturb.flip_rate;
    j["test_accuracy"] = acc.mean;
    j["per_attribute_accuracy"] = acc.per_attribute;
    auto out = open_out(out_dir / "summary.json");
    out << j.dump(2) << '\n';
  }
  std::cout << "method=" << method.name() << " seed=" << seed << " alpha=" << alpha
            << " test_mean_accuracy=" << acc.mean << '\n';
  return 0;
}

int cmd_compare(const ExperimentConfig& cfg, const fs::path& out_dir) {
  const ExperimentReport report = run_comparison(cfg);
  fs::create_directories(out_dir);
  {
    auto out = open_out(out_dir / "report.json");
    out << report_to_json(report).dump(2) << '\n';
  }
  {
    auto out = open_out(out_dir / "report.txt");
    write_report_table(out, report);
  }
  write_report_table(std::cout, report);
  if (report.failed_cells() > 0) {
    std::cerr << report.failed_cells() << " cell(s) failed; see report.json\n";
    return 1;
  }
  return 0;
}

int cmd_sweep(const ExperimentConfig& cfg, const std::vector<double>& fractions, const fs::path& out_dir) {
  const SweepReport report = run_fraction_sweep(cfg, fractions);
  fs::create_directories(out_dir);
  {
    auto out = open_out(out_dir / "sweep.csv");
    write_sweep_csv(out, report);
  }
  {
    auto out = open_out(out_dir / "sweep.json");
    out << sweep_to_json(report).dump(2) << '\n';
  }
  write_sweep_csv(std::cout, report);
  if (report.failed_cells() > 0) {
    std::cerr << report.failed_cells() << " cell(s) failed; see sweep.json\n";
    return 1;
  }
  return 0;
}

int cmd_check_gradients(std::size_t shapes, std::size_t points, std::uint64_t seed, double tolerance) {
  const auto r = check_network_gradients(shapes, points, seed);
  std::cout << "shapes=" << r.shapes << " points=" << r.points << " parameters=" << r.parameters_checked
            << " max_relative_error=" << r.max_relative_error << '\n';
  const bool ok = r.max_relative_error < tolerance;
  std::cout << (ok ? "PASS" : "FAIL") << " (tolerance " << tolerance << ")\n";
  return ok ? 0 : 1;
}

int cmd_export_dataset(const ExperimentConfig& cfg, const fs::path& out_path) {
  Workspace ws = prepare_workspace(cfg);
  fill_continuous_labels(ws.data.train, ws.space);
  fill_continuous_labels(ws.data.val, ws.space);
  fill_continuous_labels(ws.data.test, ws.space);
  auto out = open_out(out_path);
  out << dataset_to_json(ws.data).dump() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Label augmentation with word-embedding targets: experiments and tools"};
  app.require_subcommand(1);

  std::string annotations, glove, convention = "pm1", labels_out;
  std::size_t synth_dim = 16;
  std::uint64_t emb_seed = 7;
  auto* synth = app.add_subcommand("synth-labels", "Annotations + embeddings -> continuous-label CSV");
  synth->add_option("--annotations", annotations, "Attribute annotation file")->required();
  synth->add_option("--embeddings", glove, "GloVe text file (default: synthetic table)");
  synth->add_option("--synthetic-dim", synth_dim, "Dimension of the synthetic table");
  synth->add_option("--embedding-seed", emb_seed, "Seed of the synthetic table");
  synth->add_option("--convention", convention, "Value convention: pm1 or 01")
      ->check(CLI::IsMember({"pm1", "01"}));
  synth->add_option("--out", labels_out, "Output CSV (default stdout)");

  std::string train_config, train_method = "none";
  Overrides train_over;
  std::uint64_t train_seed = 0;
  double train_alpha = 1.0, train_flip = 0.1;
  std::string train_out;
  auto* train_cmd = app.add_subcommand("train", "Single training run");
  add_overrides(train_cmd, train_config, train_over);
  train_cmd->add_option("--seed", train_seed, "Run seed")->required();
  train_cmd->add_option("--alpha", train_alpha, "Weight of the categorical loss")->required()->check(CLI::Range(0.0, 1.0));
  train_cmd->add_option("--out-dir", train_out, "Output directory")->required();
  train_cmd->add_option("--method", train_method, "Regularizers, e.g. geo+dropout");
  train_cmd->add_option("--flip-rate", train_flip, "Flip rate when disturb_label is on");

  std::string cmp_config, cmp_out = "out";
  Overrides cmp_over;
  auto* compare = app.add_subcommand("compare", "Method comparison grid");
  add_overrides(compare, cmp_config, cmp_over);
  compare->add_option("--out-dir", cmp_out, "Output directory");

  std::string sweep_config, sweep_out = "out";
  Overrides sweep_over;
  std::vector<double> fractions = {0.1, 0.2, 0.5, 1.0};
  auto* sweep = app.add_subcommand("sweep", "Accuracy versus training-data fraction");
  add_overrides(sweep, sweep_config, sweep_over);
  sweep->add_option("--fractions", fractions, "Training fractions");
  sweep->add_option("--out-dir", sweep_out, "Output directory");

  std::size_t gc_shapes = 20, gc_points = 5;
  std::uint64_t gc_seed = 2024;
  double gc_tol = 1e-4;
  auto* gradcheck = app.add_subcommand("check-gradients", "Finite-difference verification of backprop");
  gradcheck->add_option("--shapes", gc_shapes, "Random network shapes");
  gradcheck->add_option("--points", gc_points, "Random points per shape");
  gradcheck->add_option("--seed", gc_seed, "Seed");
  gradcheck->add_option("--tolerance", gc_tol, "Maximum relative error");

  std::string export_config, export_out;
  Overrides export_over;
  auto* export_cmd = app.add_subcommand("export-dataset", "Write the configured dataset as JSON");
  add_overrides(export_cmd, export_config, export_over);
  export_cmd->add_option("--out", export_out, "Output JSON")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*synth) return cmd_synth_labels(annotations, glove, synth_dim, emb_seed, convention, labels_out);
    if (*train_cmd) {
      return cmd_train(resolve_config(train_config, train_over), train_method, train_seed, train_alpha, train_flip,
                       train_out);
    }
    if (*compare) return cmd_compare(resolve_config(cmp_config, cmp_over), cmp_out);
    if (*sweep) return cmd_sweep(resolve_config(sweep_config, sweep_over), fractions, sweep_out);
    if (*gradcheck) return cmd_check_gradients(gc_shapes, gc_points, gc_seed, gc_tol);
    if (*export_cmd) return cmd_export_dataset(resolve_config(export_config, export_over), export_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
