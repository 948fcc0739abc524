#pragma once

#include <cmath>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "auglabel/core.hpp"
#include "auglabel/embeddings.hpp"

namespace auglabel {

/// Presence/absence vector over m attributes; every entry is 0 or 1.
class CategoricalLabel {
 public:
  CategoricalLabel() = default;
  explicit CategoricalLabel(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
    for (auto b : bits_) {
      if (b > 1) throw Error("categorical label entries must be 0 or 1");
    }
  }
  CategoricalLabel(std::initializer_list<int> bits) {
    bits_.reserve(bits.size());
    for (int b : bits) {
      if (b != 0 && b != 1) throw Error("categorical label entries must be 0 or 1");
      bits_.push_back(static_cast<std::uint8_t>(b));
    }
  }

  std::size_t size() const noexcept { return bits_.size(); }
  std::uint8_t operator[](std::size_t j) const { return bits_[j]; }
  void set(std::size_t j, bool value) { bits_[j] = value ? 1 : 0; }
  const std::vector<std::uint8_t>& bits() const noexcept { return bits_; }

  CategoricalLabel complement() const {
    CategoricalLabel out = *this;
    for (auto& b : out.bits_) b = 1 - b;
    return out;
  }

  bool operator==(const CategoricalLabel&) const = default;
  auto operator<=>(const CategoricalLabel&) const = default;

 private:
  std::vector<std::uint8_t> bits_;
};

using ContinuousLabel = Vector;

/// Ordered attribute names with their d x m embedding matrix W.
class AttributeSpace {
 public:
  AttributeSpace(std::vector<std::string> names, Matrix w) : names_(std::move(names)), w_(std::move(w)) {
    if (names_.empty()) throw Error("attribute space needs at least one attribute");
    detail::require_same_size(w_.cols(), names_.size(), "attribute matrix columns");
    std::set<std::string> seen;
    for (const auto& n : names_) {
      if (!seen.insert(n).second) throw Error("duplicate attribute name '" + n + "'");
    }
  }

  std::size_t m() const noexcept { return names_.size(); }
  std::size_t d() const noexcept { return w_.rows(); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  const Matrix& w() const noexcept { return w_; }

 private:
  std::vector<std::string> names_;
  Matrix w_;
};

inline AttributeSpace build_attribute_space(const EmbeddingTable& table,
                                            const std::vector<std::string>& names) {
  if (names.empty()) throw Error("attribute space needs at least one attribute");
  std::set<std::string> seen;
  for (const auto& n : names) {
    if (!seen.insert(n).second) throw Error("duplicate attribute name '" + n + "'");
  }
  Matrix w(table.dimension(), names.size());
  for (std::size_t j = 0; j < names.size(); ++j) {
    Vector col;
    try {
      col = table.attribute_vector(names[j]);
    } catch (const OutOfVocabulary& e) {
      throw Error("attribute '" + names[j] + "': " + e.what());
    }
    for (std::size_t i = 0; i < col.size(); ++i) w(i, j) = col[i];
  }
  return AttributeSpace(names, std::move(w));
}

/// Maps {0,1} to {-1,+1}.
inline std::vector<int> sign_labels(const CategoricalLabel& y) {
  std::vector<int> s(y.size());
  for (std::size_t j = 0; j < y.size(); ++j) s[j] = 2 * static_cast<int>(y[j]) - 1;
  return s;
}

/// z = W s with s = sign_labels(y): the signed, unnormalized sum of the
/// attribute vectors. Absent attributes contribute their negated vector.
inline ContinuousLabel synthesize_continuous_label(const AttributeSpace& space,
                                                   const CategoricalLabel& y) {
  detail::require_same_size(y.size(), space.m(), "categorical label");
  const auto s = sign_labels(y);
  const Matrix& w = space.w();
  ContinuousLabel z(space.d(), 0.0);
  for (std::size_t i = 0; i < space.d(); ++i) {
    const auto row = w.row(i);
    double acc = 0.0;
    for (std::size_t j = 0; j < space.m(); ++j) acc += s[j] > 0 ? row[j] : -row[j];
    z[i] = acc;
  }
  return z;
}

inline std::vector<ContinuousLabel> synthesize_batch(const AttributeSpace& space,
                                                     const std::vector<CategoricalLabel>& labels) {
  std::vector<ContinuousLabel> out;
  out.reserve(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    try {
      out.push_back(synthesize_continuous_label(space, labels[i]));
    } catch (const ShapeError& e) {
      throw ShapeError("label " + std::to_string(i) + ": " + e.what());
    }
  }
  return out;
}

/// One row per label, d columns, 17 significant digits.
inline void write_continuous_csv(std::ostream& out, const std::vector<ContinuousLabel>& labels) {
  for (const auto& z : labels) {
    for (std::size_t i = 0; i < z.size(); ++i) {
      if (i) out << ',';
      detail::write_double_17(out, z[i]);
    }
    out << '\n';
  }
}

}  // namespace auglabel
