#pragma once

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "auglabel/core.hpp"
#include "auglabel/embeddings.hpp"
#include "auglabel/labelspace.hpp"
#include "auglabel/regularizers.hpp"

namespace auglabel {

struct LabeledExample {
  std::string id;
  GridInput x;
  CategoricalLabel y;
  ContinuousLabel z;  // empty until filled from an attribute space

  bool operator==(const LabeledExample&) const = default;
};

using Split = std::vector<LabeledExample>;

struct Dataset {
  std::vector<std::string> attribute_names;
  Split train;
  Split val;
  Split test;

  bool operator==(const Dataset&) const = default;
};

/// Desk-scale generator of correlated multi-attribute data.
///
/// Every group owns one binary latent per example; its attributes copy the
/// latent, each independently flipped with probability `attribute_flip`.
/// An exclusive pair (a, b) forces y_b = 1 - y_a exactly. Inputs are
/// x = bias + sum_j s_j * pattern_j + N(0, noise_std^2) on an H x W grid,
/// where s = 2y - 1 and each pattern is a left-right symmetric pair of
/// Gaussian bumps.
struct SyntheticSpec {
  std::size_t m = 12;
  std::vector<std::vector<std::size_t>> groups;
  std::vector<std::pair<std::size_t, std::size_t>> exclusive_pairs;
  std::size_t n_train = 2000;
  std::size_t n_val = 500;
  std::size_t n_test = 500;
  std::size_t grid_h = 10;
  std::size_t grid_w = 10;
  double noise_std = 1.0;
  double attribute_flip = 0.03;
  std::uint64_t seed = 0;

  std::size_t input_size() const { return grid_h * grid_w; }

  void validate() const {
    if (m == 0) throw Error("synthetic spec: m must be positive");
    std::vector<int> owner(m, -1);
    for (std::size_t g = 0; g < groups.size(); ++g) {
      if (groups[g].empty()) throw Error("synthetic spec: empty group");
      for (auto j : groups[g]) {
        if (j >= m) throw Error("synthetic spec: attribute index out of range");
        if (owner[j] != -1) throw Error("synthetic spec: attribute in more than one group");
        owner[j] = static_cast<int>(g);
      }
    }
    for (auto o : owner) {
      if (o == -1) throw Error("synthetic spec: groups do not cover every attribute");
    }
    std::set<std::size_t> dependent;
    for (auto [a, b] : exclusive_pairs) {
      if (a >= m || b >= m || a == b) throw Error("synthetic spec: invalid exclusive pair");
      if (!dependent.insert(b).second || dependent.count(a)) {
        throw Error("synthetic spec: exclusive pairs must not chain");
      }
    }
    for (auto [a, b] : exclusive_pairs) {
      if (dependent.count(a)) throw Error("synthetic spec: exclusive pairs must not chain");
    }
    if (n_train == 0 || n_val == 0 || n_test == 0) throw Error("synthetic spec: split sizes must be >= 1");
    if (grid_h < 8 || grid_w < 8) throw Error("synthetic spec: grid must be at least 8x8");
    if (!(noise_std >= 0.0)) throw Error("synthetic spec: noise_std must be nonnegative");
    if (!(attribute_flip >= 0.0 && attribute_flip < 0.5)) {
      throw Error("synthetic spec: attribute_flip must lie in [0, 0.5)");
    }
  }

  /// Names whose tokens tie each attribute to its group ("g1_a4"), so that a
  /// synthetic embedding table places same-group attributes closer together.
  std::vector<std::string> attribute_names() const {
    std::vector<std::string> names(m);
    for (std::size_t g = 0; g < groups.size(); ++g) {
      for (auto j : groups[g]) names[j] = "g" + std::to_string(g) + "_a" + std::to_string(j);
    }
    return names;
  }
};

/// Default task: 12 attributes in 4 correlated groups of 3, with one
/// mutually exclusive pair in two of the groups.
inline SyntheticSpec default_synthetic_spec(std::uint64_t seed = 0) {
  SyntheticSpec s;
  s.m = 12;
  s.groups = {{0, 1, 2}, {3, 4, 5}, {6, 7, 8}, {9, 10, 11}};
  s.exclusive_pairs = {{0, 1}, {6, 7}};
  s.seed = seed;
  return s;
}

namespace detail {

inline Matrix make_patterns(const SyntheticSpec& spec, Rng& rng) {
  const std::size_t h = spec.grid_h, w = spec.grid_w;
  std::uniform_real_distribution<double> row(0.0, static_cast<double>(h - 1));
  std::uniform_real_distribution<double> col(0.0, static_cast<double>(w - 1) / 2.0);
  std::uniform_real_distribution<double> width(1.0, 2.5);
  Matrix patterns(h * w, spec.m);
  for (std::size_t j = 0; j < spec.m; ++j) {
    const double r0 = row(rng), c0 = col(rng), sigma = width(rng);
    const double c1 = static_cast<double>(w - 1) - c0;
    double norm = 0.0;
    for (std::size_t r = 0; r < h; ++r) {
      for (std::size_t c = 0; c < w; ++c) {
        const double dr = static_cast<double>(r) - r0;
        const double da = static_cast<double>(c) - c0;
        const double db = static_cast<double>(c) - c1;
        const double v = std::exp(-(dr * dr + da * da) / (2 * sigma * sigma)) +
                         std::exp(-(dr * dr + db * db) / (2 * sigma * sigma));
        patterns(r * w + c, j) = v;
        norm += v * v;
      }
    }
    norm = std::sqrt(norm);
    for (std::size_t p = 0; p < h * w; ++p) patterns(p, j) /= norm;
  }
  return patterns;
}

}  // namespace detail

inline Dataset generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  const Matrix patterns = detail::make_patterns(spec, rng);
  Vector bias(spec.input_size());
  {
    std::normal_distribution<double> small(0.0, 0.1);
    for (auto& b : bias) b = small(rng);
  }

  std::vector<std::size_t> group_of(spec.m);
  for (std::size_t g = 0; g < spec.groups.size(); ++g) {
    for (auto j : spec.groups[g]) group_of[j] = g;
  }
  std::vector<bool> dependent(spec.m, false);
  for (auto [a, b] : spec.exclusive_pairs) dependent[b] = true;

  std::bernoulli_distribution coin(0.5);
  std::bernoulli_distribution flip(spec.attribute_flip);
  std::normal_distribution<double> noise(0.0, 1.0);

  auto make_split = [&](std::size_t n, const std::string& prefix) {
    Split split;
    split.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<std::uint8_t> latent(spec.groups.size());
      for (auto& u : latent) u = coin(rng) ? 1 : 0;
      std::vector<std::uint8_t> bits(spec.m);
      for (std::size_t j = 0; j < spec.m; ++j) {
        const bool flipped = flip(rng);
        if (dependent[j]) continue;
        bits[j] = latent[group_of[j]] ^ (flipped ? 1 : 0);
      }
      for (auto [a, b] : spec.exclusive_pairs) bits[b] = 1 - bits[a];

      GridInput x(spec.grid_h, spec.grid_w);
      auto& px = x.pixels().data();
      for (std::size_t p = 0; p < px.size(); ++p) {
        const auto prow = patterns.row(p);
        double v = bias[p];
        for (std::size_t j = 0; j < spec.m; ++j) v += bits[j] ? prow[j] : -prow[j];
        px[p] = v + spec.noise_std * noise(rng);
      }
      split.push_back({prefix + std::to_string(i), std::move(x), CategoricalLabel(std::move(bits)), {}});
    }
    return split;
  };

  Dataset ds;
  ds.attribute_names = spec.attribute_names();
  ds.train = make_split(spec.n_train, "train");
  ds.val = make_split(spec.n_val, "val");
  ds.test = make_split(spec.n_test, "test");
  return ds;
}

inline void fill_continuous_labels(Split& split, const AttributeSpace& space) {
  for (auto& ex : split) ex.z = synthesize_continuous_label(space, ex.y);
}

/// Uniform sample without replacement of round(fraction * n) examples,
/// returned in source order.
inline Split subsample_fraction(const Split& split, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction <= 1.0)) throw Error("fraction must lie in (0, 1]");
  const auto k = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(split.size())));
  if (k == 0) throw Error("subsample would be empty");
  std::vector<std::size_t> idx(split.size());
  std::iota(idx.begin(), idx.end(), 0);
  Rng rng(seed);
  std::shuffle(idx.begin(), idx.end(), rng);
  idx.resize(k);
  std::sort(idx.begin(), idx.end());
  Split out;
  out.reserve(k);
  for (auto i : idx) out.push_back(split[i]);
  return out;
}

enum class LabelConvention { PlusMinusOne, ZeroOne };

/// CelebA list_attr layout: optional count line, header of attribute names,
/// then `id v1 ... vm` rows.
struct Annotations {
  std::vector<std::string> names;
  std::vector<std::string> ids;
  std::vector<CategoricalLabel> labels;

  bool operator==(const Annotations&) const = default;
};

inline Annotations parse_annotations(std::istream& in, LabelConvention convention) {
  Annotations out;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  std::optional<std::size_t> declared_count;
  std::set<std::string> seen_ids;

  while (std::getline(in, line)) {
    ++line_no;
    detail::strip_cr(line);
    auto fields = detail::split_whitespace(line);
    if (fields.empty()) continue;

    if (!have_header) {
      if (!declared_count && out.names.empty() && fields.size() == 1 &&
          std::all_of(fields[0].begin(), fields[0].end(), [](char c) { return c >= '0' && c <= '9'; })) {
        declared_count = std::stoull(std::string(fields[0]));
        continue;
      }
      for (auto f : fields) out.names.emplace_back(f);
      std::set<std::string> uniq(out.names.begin(), out.names.end());
      if (uniq.size() != out.names.size()) throw ParseError(line_no, "duplicate attribute name in header");
      have_header = true;
      continue;
    }

    if (fields.size() != out.names.size() + 1) {
      throw ParseError(line_no, "expected " + std::to_string(out.names.size()) + " values, got " +
                                    std::to_string(fields.size() - 1));
    }
    std::string id(fields[0]);
    if (!seen_ids.insert(id).second) throw ParseError(line_no, "duplicate id '" + id + "'");

    std::vector<std::uint8_t> bits(out.names.size());
    for (std::size_t j = 0; j < bits.size(); ++j) {
      const auto v = fields[j + 1];
      if (convention == LabelConvention::PlusMinusOne) {
        if (v == "1" || v == "+1") bits[j] = 1;
        else if (v == "-1") bits[j] = 0;
        else throw ParseError(line_no, "value '" + std::string(v) + "' outside {-1,+1}");
      } else {
        if (v == "1") bits[j] = 1;
        else if (v == "0") bits[j] = 0;
        else throw ParseError(line_no, "value '" + std::string(v) + "' outside {0,1}");
      }
    }
    out.ids.push_back(std::move(id));
    out.labels.emplace_back(std::move(bits));
  }
  if (!have_header) throw Error("annotation stream has no header line");
  if (declared_count && *declared_count != out.labels.size()) {
    throw Error("annotation count line declares " + std::to_string(*declared_count) + " rows, found " +
                std::to_string(out.labels.size()));
  }
  return out;
}

inline void write_annotations(std::ostream& out, const Annotations& ann, LabelConvention convention) {
  for (std::size_t j = 0; j < ann.names.size(); ++j) out << (j ? " " : "") << ann.names[j];
  out << '\n';
  for (std::size_t i = 0; i < ann.labels.size(); ++i) {
    out << ann.ids[i];
    for (std::size_t j = 0; j < ann.names.size(); ++j) {
      const bool on = ann.labels[i][j] != 0;
      out << ' ' << (convention == LabelConvention::PlusMinusOne ? (on ? "1" : "-1") : (on ? "1" : "0"));
    }
    out << '\n';
  }
}

// JSON export/import -------------------------------------------------------

inline constexpr int kDatasetSchemaVersion = 1;

inline nlohmann::json split_to_json(const Split& split) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& ex : split) {
    nlohmann::json j;
    j["id"] = ex.id;
    j["height"] = ex.x.height();
    j["width"] = ex.x.width();
    j["pixels"] = ex.x.pixels().data();
    j["y"] = ex.y.bits();
    j["z"] = ex.z;
    arr.push_back(std::move(j));
  }
  return arr;
}

inline Split split_from_json(const nlohmann::json& arr) {
  Split split;
  for (const auto& j : arr) {
    Matrix px(j.at("height").get<std::size_t>(), j.at("width").get<std::size_t>());
    auto values = j.at("pixels").get<std::vector<double>>();
    detail::require_same_size(values.size(), px.size(), "dataset grid pixels");
    px.data() = std::move(values);
    split.push_back({j.at("id").get<std::string>(), GridInput(std::move(px)),
                     CategoricalLabel(j.at("y").get<std::vector<std::uint8_t>>()),
                     j.at("z").get<Vector>()});
  }
  return split;
}

inline nlohmann::json dataset_to_json(const Dataset& ds) {
  nlohmann::json j;
  j["schema_version"] = kDatasetSchemaVersion;
  j["attribute_names"] = ds.attribute_names;
  j["train"] = split_to_json(ds.train);
  j["val"] = split_to_json(ds.val);
  j["test"] = split_to_json(ds.test);
  return j;
}

inline Dataset dataset_from_json(const nlohmann::json& j) {
  if (j.value("schema_version", -1) != kDatasetSchemaVersion) {
    throw Error("unsupported dataset schema version");
  }
  Dataset ds;
  ds.attribute_names = j.at("attribute_names").get<std::vector<std::string>>();
  ds.train = split_from_json(j.at("train"));
  ds.val = split_from_json(j.at("val"));
  ds.test = split_from_json(j.at("test"));
  return ds;
}

}  // namespace auglabel
