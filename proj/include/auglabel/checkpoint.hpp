#pragma once

#include <istream>
#include <ostream>
#include <string>

#include <json.hpp>

#include "auglabel/net.hpp"

namespace auglabel {

inline constexpr int kCheckpointFormatVersion = 1;

namespace detail {

inline nlohmann::json layer_to_json(const Layer& l) {
  return {{"rows", l.weights.rows()}, {"cols", l.weights.cols()}, {"weights", l.weights.data()}, {"bias", l.bias}};
}

inline void layer_from_json(const nlohmann::json& j, Layer& l) {
  detail::require_same_size(j.at("rows").get<std::size_t>(), l.weights.rows(), "checkpoint layer rows");
  detail::require_same_size(j.at("cols").get<std::size_t>(), l.weights.cols(), "checkpoint layer cols");
  auto w = j.at("weights").get<std::vector<double>>();
  auto b = j.at("bias").get<std::vector<double>>();
  detail::require_same_size(w.size(), l.weights.size(), "checkpoint weights");
  detail::require_same_size(b.size(), l.bias.size(), "checkpoint bias");
  l.weights.data() = std::move(w);
  l.bias = std::move(b);
}

}  // namespace detail

inline nlohmann::json shape_to_json(const NetworkShape& s) {
  return {{"input_size", s.input_size},
          {"hidden_sizes", s.hidden_sizes},
          {"m", s.m},
          {"d", s.d},
          {"dropout_rate", s.dropout_rate}};
}

inline NetworkShape shape_from_json(const nlohmann::json& j) {
  NetworkShape s;
  s.input_size = j.at("input_size").get<std::size_t>();
  s.hidden_sizes = j.at("hidden_sizes").get<std::vector<std::size_t>>();
  s.m = j.at("m").get<std::size_t>();
  s.d = j.at("d").get<std::size_t>();
  s.dropout_rate = j.at("dropout_rate").get<double>();
  s.validate();
  return s;
}

/// JSON checkpoint. Doubles are written in shortest round-trip form, so a
/// reloaded model reproduces forward outputs bit for bit.
inline nlohmann::json checkpoint_to_json(const ModelParams& p) {
  nlohmann::json trunk = nlohmann::json::array();
  for (const auto& l : p.layers.trunk) trunk.push_back(detail::layer_to_json(l));
  return {{"format", "auglabel-checkpoint"},
          {"format_version", kCheckpointFormatVersion},
          {"shape", shape_to_json(p.shape)},
          {"seed", p.seed},
          {"trunk", trunk},
          {"categorical", detail::layer_to_json(p.layers.categorical)},
          {"continuous", detail::layer_to_json(p.layers.continuous)}};
}

inline ModelParams checkpoint_from_json(const nlohmann::json& j) {
  if (j.value("format", std::string()) != "auglabel-checkpoint") throw Error("not a checkpoint document");
  if (j.value("format_version", -1) != kCheckpointFormatVersion) throw Error("unsupported checkpoint version");
  ModelParams p;
  p.shape = shape_from_json(j.at("shape"));
  p.seed = j.at("seed").get<std::uint64_t>();
  p.layers = LayerStack::zeros_like(p.shape);
  const auto& trunk = j.at("trunk");
  detail::require_same_size(trunk.size(), p.layers.trunk.size(), "checkpoint trunk depth");
  for (std::size_t l = 0; l < trunk.size(); ++l) detail::layer_from_json(trunk[l], p.layers.trunk[l]);
  detail::layer_from_json(j.at("categorical"), p.layers.categorical);
  detail::layer_from_json(j.at("continuous"), p.layers.continuous);
  if (!p.layers.all_finite()) throw Error("checkpoint contains non-finite parameters");
  return p;
}

inline void save_checkpoint(std::ostream& out, const ModelParams& p) { out << checkpoint_to_json(p).dump(1) << '\n'; }

inline ModelParams load_checkpoint(std::istream& in) { return checkpoint_from_json(nlohmann::json::parse(in)); }

}  // namespace auglabel
