#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "auglabel/core.hpp"

namespace auglabel {

inline std::string to_lower_ascii(std::string_view s) {
  std::string out(s);
  for (auto& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

/// Splits an attribute name such as "Pointy_Nose" or "mouth slightly open"
/// into lowercase tokens. Separators are whitespace and underscore.
inline std::vector<std::string> tokenize_attribute_name(std::string_view name) {
  std::vector<std::string> tokens;
  std::string current;
  for (char c : name) {
    if (c == '_' || std::isspace(static_cast<unsigned char>(c))) {
      if (!current.empty()) tokens.push_back(to_lower_ascii(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  if (!current.empty()) tokens.push_back(to_lower_ascii(current));
  return tokens;
}

namespace detail {

inline std::vector<std::string_view> split_whitespace(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

inline bool parse_double(std::string_view field, double& out) {
  const char* first = field.data();
  const char* last = field.data() + field.size();
  // from_chars rejects a leading '+', which some writers emit.
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

inline void write_double(std::ostream& os, double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  os.write(buf, ptr - buf);
}

inline void write_double_17(std::ostream& os, double v) {
  char buf[64];
  auto [ptr, ec] =
      std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  os.write(buf, ptr - buf);
}

inline void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

}  // namespace detail

/// Token -> vector table with a fixed dimension. Immutable once built.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;

  std::size_t dimension() const noexcept { return dimension_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool contains(std::string_view token) const {
    return entries_.count(to_lower_ascii(token)) != 0;
  }

  /// Returns a copy of the stored vector for `token` (case-insensitive).
  Vector lookup(std::string_view token) const {
    auto it = entries_.find(to_lower_ascii(token));
    if (it == entries_.end()) throw OutOfVocabulary({std::string(token)});
    return it->second;
  }

  /// Mean of the component-token vectors of a possibly multi-word name.
  Vector attribute_vector(std::string_view attribute_name) const {
    const auto tokens = tokenize_attribute_name(attribute_name);
    if (tokens.empty()) throw Error("empty attribute name");
    std::vector<std::string> missing;
    for (const auto& t : tokens) {
      if (!entries_.count(t)) missing.push_back(t);
    }
    if (!missing.empty()) throw OutOfVocabulary(std::move(missing));

    if (tokens.size() == 1) return entries_.at(tokens.front());
    Vector sum(dimension_, 0.0);
    for (const auto& t : tokens) {
      const auto& v = entries_.at(t);
      for (std::size_t i = 0; i < dimension_; ++i) sum[i] += v[i];
    }
    const double scale = 1.0 / static_cast<double>(tokens.size());
    for (auto& x : sum) x = scale * x;
    return sum;
  }

  const std::map<std::string, Vector>& entries() const noexcept { return entries_; }

  /// Adds an entry; the first insertion fixes the dimension.
  void insert(std::string token, Vector vec) {
    if (token.empty()) throw Error("empty token");
    token = to_lower_ascii(token);
    if (vec.empty()) throw ShapeError("empty vector for token '" + token + "'");
    if (entries_.empty()) dimension_ = vec.size();
    detail::require_same_size(vec.size(), dimension_, "embedding vector");
    if (!entries_.emplace(token, std::move(vec)).second) {
      throw Error("duplicate token '" + token + "'");
    }
  }

  bool operator==(const EmbeddingTable&) const = default;

 private:
  std::size_t dimension_ = 0;
  std::map<std::string, Vector> entries_;
};

/// Reads GloVe text: `<token> <f1> ... <fd>` per line, no header.
/// Blank lines are ignored; the first record fixes d.
inline EmbeddingTable parse_embedding_file(std::istream& in) {
  EmbeddingTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    detail::strip_cr(line);
    auto fields = detail::split_whitespace(line);
    if (fields.empty()) continue;
    if (fields.size() < 2) throw ParseError(line_no, "record has no vector components");

    Vector vec(fields.size() - 1);
    for (std::size_t i = 1; i < fields.size(); ++i) {
      if (!detail::parse_double(fields[i], vec[i - 1])) {
        throw ParseError(line_no, "non-numeric component '" + std::string(fields[i]) + "'");
      }
    }
    if (table.size() > 0 && vec.size() != table.dimension()) {
      throw ParseError(line_no, "dimension mismatch: expected " +
                                    std::to_string(table.dimension()) + ", got " +
                                    std::to_string(vec.size()));
    }
    const std::string token = to_lower_ascii(fields[0]);
    if (table.contains(token)) throw ParseError(line_no, "duplicate token '" + token + "'");
    table.insert(token, std::move(vec));
  }
  if (table.size() == 0) throw Error("embedding stream contains no records");
  return table;
}

/// Writes the table in GloVe text format, sorted by token, with shortest
/// round-trip float formatting.
inline void write_embedding_file(std::ostream& out, const EmbeddingTable& table) {
  for (const auto& [token, vec] : table.entries()) {
    out << token;
    for (double v : vec) {
      out << ' ';
      detail::write_double(out, v);
    }
    out << '\n';
  }
}

/// Random stand-in table covering every token of `attribute_names`, used when
/// no pretrained embedding file is available.
inline EmbeddingTable make_synthetic_table(const std::vector<std::string>& attribute_names,
                                           std::size_t dimension, std::uint64_t seed,
                                           double scale = 0.4) {
  std::set<std::string> vocab;
  for (const auto& name : attribute_names) {
    for (auto& t : tokenize_attribute_name(name)) vocab.insert(std::move(t));
  }
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, scale);
  EmbeddingTable table;
  for (const auto& token : vocab) {
    Vector v(dimension);
    for (auto& x : v) x = normal(rng);
    table.insert(token, std::move(v));
  }
  return table;
}

}  // namespace auglabel
