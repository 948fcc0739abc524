#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "auglabel/core.hpp"
#include "auglabel/lossgrad.hpp"

namespace auglabel {

/// Trunk of tanh layers feeding a sigmoid categorical head (m outputs) and a
/// linear continuous head (d outputs). Both heads read the last trunk layer.
struct NetworkShape {
  std::size_t input_size = 0;
  std::vector<std::size_t> hidden_sizes;
  std::size_t m = 0;
  std::size_t d = 0;
  double dropout_rate = 0.0;

  void validate() const {
    if (input_size == 0) throw ShapeError("network input size must be positive");
    if (hidden_sizes.empty()) throw ShapeError("network needs at least one hidden layer");
    for (auto h : hidden_sizes) {
      if (h == 0) throw ShapeError("hidden layer sizes must be positive");
    }
    if (m == 0 || d == 0) throw ShapeError("head widths must be positive");
    if (!(dropout_rate >= 0.0 && dropout_rate < 1.0)) throw Error("dropout rate must lie in [0, 1)");
  }

  std::size_t last_hidden() const { return hidden_sizes.back(); }

  bool operator==(const NetworkShape&) const = default;
};

/// Fully connected layer, weights stored out x in.
struct Layer {
  Matrix weights;
  Vector bias;

  Layer() = default;
  Layer(std::size_t out, std::size_t in) : weights(out, in), bias(out, 0.0) {}

  std::size_t parameter_count() const { return weights.size() + bias.size(); }
  bool operator==(const Layer&) const = default;
};

/// Parameters (or gradients) laid out like the network.
struct LayerStack {
  std::vector<Layer> trunk;
  Layer categorical;
  Layer continuous;

  static LayerStack zeros_like(const NetworkShape& shape) {
    LayerStack s;
    std::size_t fan_in = shape.input_size;
    for (auto h : shape.hidden_sizes) {
      s.trunk.emplace_back(h, fan_in);
      fan_in = h;
    }
    s.categorical = Layer(shape.m, fan_in);
    s.continuous = Layer(shape.d, fan_in);
    return s;
  }

  template <typename Fn>
  void for_each_layer(Fn&& fn) {
    for (auto& l : trunk) fn(l);
    fn(categorical);
    fn(continuous);
  }
  template <typename Fn>
  void for_each_layer(Fn&& fn) const {
    for (const auto& l : trunk) fn(l);
    fn(categorical);
    fn(continuous);
  }

  std::size_t parameter_count() const {
    std::size_t n = 0;
    for_each_layer([&](const Layer& l) { n += l.parameter_count(); });
    return n;
  }

  /// Concatenation of every layer's weights then bias, trunk first.
  Vector flatten() const {
    Vector out;
    out.reserve(parameter_count());
    for_each_layer([&](const Layer& l) {
      out.insert(out.end(), l.weights.data().begin(), l.weights.data().end());
      out.insert(out.end(), l.bias.begin(), l.bias.end());
    });
    return out;
  }

  void assign(std::span<const double> flat) {
    detail::require_same_size(flat.size(), parameter_count(), "flattened parameters");
    std::size_t k = 0;
    for_each_layer([&](Layer& l) {
      for (auto& w : l.weights.data()) w = flat[k++];
      for (auto& b : l.bias) b = flat[k++];
    });
  }

  bool all_finite() const {
    bool ok = true;
    for_each_layer([&](const Layer& l) {
      for (double w : l.weights.data()) ok = ok && std::isfinite(w);
      for (double b : l.bias) ok = ok && std::isfinite(b);
    });
    return ok;
  }

  bool operator==(const LayerStack&) const = default;
};

using Gradients = LayerStack;

struct ModelParams {
  NetworkShape shape;
  std::uint64_t seed = 0;
  LayerStack layers;
  // Bumped by every update so caches from older forward passes are rejected.
  std::uint64_t version = 0;

  bool operator==(const ModelParams& o) const {
    return shape == o.shape && seed == o.seed && layers == o.layers;
  }
};

inline ModelParams init_params(const NetworkShape& shape, std::uint64_t seed) {
  shape.validate();
  ModelParams p;
  p.shape = shape;
  p.seed = seed;
  p.layers = LayerStack::zeros_like(shape);
  Rng rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  p.layers.for_each_layer([&](Layer& l) {
    const double scale = 1.0 / std::sqrt(static_cast<double>(l.weights.cols()));
    for (auto& w : l.weights.data()) w = scale * unit(rng);
  });
  return p;
}

/// Per hidden layer keep flags (1 = keep).
using DropoutMask = std::vector<std::vector<std::uint8_t>>;

inline DropoutMask sample_dropout_mask(const NetworkShape& shape, Rng& rng) {
  std::bernoulli_distribution drop(shape.dropout_rate);
  DropoutMask mask;
  for (auto h : shape.hidden_sizes) {
    std::vector<std::uint8_t> layer(h);
    for (auto& k : layer) k = drop(rng) ? 0 : 1;
    mask.push_back(std::move(layer));
  }
  return mask;
}

/// Activations retained by forward() for backward().
struct ForwardCache {
  Vector input;
  std::vector<Vector> activations;  // tanh output per hidden layer, before dropout
  std::vector<Vector> scales;       // dropout multiplier per unit (empty: none)
  std::vector<Vector> outputs;      // post-dropout output per hidden layer
  Vector logits;
  Prediction prediction;
  std::uint64_t params_version = 0;
};

namespace detail {

inline void affine(const Layer& l, std::span<const double> in, Vector& out) {
  const std::size_t rows = l.weights.rows();
  const std::size_t cols = l.weights.cols();
  out.resize(rows);
  const double* w = l.weights.data().data();
  for (std::size_t r = 0; r < rows; ++r) {
    const double* wr = w + r * cols;
    double acc = l.bias[r];
    for (std::size_t c = 0; c < cols; ++c) acc += wr[c] * in[c];
    out[r] = acc;
  }
}

}  // namespace detail

/// Runs the network on `x`. A mask is applied only when supplied (training);
/// kept units are scaled by 1/(1 - rate).
inline ForwardCache forward(const ModelParams& params, std::span<const double> x,
                            const DropoutMask* mask = nullptr) {
  const auto& shape = params.shape;
  detail::require_same_size(x.size(), shape.input_size, "network input");
  if (mask) detail::require_same_size(mask->size(), shape.hidden_sizes.size(), "dropout mask layers");

  ForwardCache c;
  c.params_version = params.version;
  c.input.assign(x.begin(), x.end());
  const double keep_scale = 1.0 / (1.0 - shape.dropout_rate);

  std::span<const double> in = c.input;
  for (std::size_t l = 0; l < params.layers.trunk.size(); ++l) {
    Vector act;
    detail::affine(params.layers.trunk[l], in, act);
    for (auto& a : act) a = std::tanh(a);
    Vector out = act;
    Vector scale;
    if (mask) {
      const auto& keep = (*mask)[l];
      detail::require_same_size(keep.size(), act.size(), "dropout mask width");
      scale.resize(act.size());
      for (std::size_t i = 0; i < act.size(); ++i) {
        scale[i] = keep[i] ? keep_scale : 0.0;
        out[i] = act[i] * scale[i];
      }
    }
    c.activations.push_back(std::move(act));
    c.scales.push_back(std::move(scale));
    c.outputs.push_back(std::move(out));
    in = c.outputs.back();
  }

  detail::affine(params.layers.categorical, in, c.logits);
  c.prediction.y_p.resize(c.logits.size());
  for (std::size_t j = 0; j < c.logits.size(); ++j) c.prediction.y_p[j] = sigmoid(c.logits[j]);
  detail::affine(params.layers.continuous, in, c.prediction.z_p);
  return c;
}

/// Adds the parameter gradients of one example to `accum`.
inline void accumulate_backward(const ModelParams& params, const ForwardCache& cache,
                                const HeadGradient& head, Gradients& accum) {
  if (cache.params_version != params.version) {
    throw Error("backward: forward cache is stale (parameters changed since forward)");
  }
  const auto& shape = params.shape;
  if (cache.outputs.size() != shape.hidden_sizes.size() || cache.input.size() != shape.input_size) {
    throw ShapeError("backward: cache does not match network shape");
  }
  detail::require_same_size(head.logits.size(), shape.m, "categorical head gradient");
  detail::require_same_size(head.z_p.size(), shape.d, "continuous head gradient");

  const std::size_t top = shape.last_hidden();
  const Vector& h = cache.outputs.back();
  Vector dh(top, 0.0);

  auto head_backward = [&](const Layer& layer, const Vector& g, Layer& grad) {
    for (std::size_t r = 0; r < g.size(); ++r) {
      const double gr = g[r];
      if (gr == 0.0) continue;
      auto grow = grad.weights.row(r);
      auto wrow = layer.weights.row(r);
      for (std::size_t c = 0; c < top; ++c) {
        grow[c] += gr * h[c];
        dh[c] += wrow[c] * gr;
      }
      grad.bias[r] += gr;
    }
  };
  head_backward(params.layers.categorical, head.logits, accum.categorical);
  head_backward(params.layers.continuous, head.z_p, accum.continuous);

  for (std::size_t l = shape.hidden_sizes.size(); l-- > 0;) {
    const Vector& act = cache.activations[l];
    const Vector& scale = cache.scales[l];
    const Vector& in = l == 0 ? cache.input : cache.outputs[l - 1];
    Vector dpre(act.size());
    for (std::size_t i = 0; i < act.size(); ++i) {
      const double through = scale.empty() ? dh[i] : dh[i] * scale[i];
      dpre[i] = through * (1.0 - act[i] * act[i]);
    }
    const Layer& layer = params.layers.trunk[l];
    Layer& grad = accum.trunk[l];
    Vector dprev(l == 0 ? 0 : in.size(), 0.0);
    for (std::size_t r = 0; r < dpre.size(); ++r) {
      const double g = dpre[r];
      if (g == 0.0) continue;
      auto grow = grad.weights.row(r);
      for (std::size_t c = 0; c < in.size(); ++c) grow[c] += g * in[c];
      grad.bias[r] += g;
      if (l > 0) {
        auto wrow = layer.weights.row(r);
        for (std::size_t c = 0; c < in.size(); ++c) dprev[c] += wrow[c] * g;
      }
    }
    dh = std::move(dprev);
  }
}

inline Gradients backward(const ModelParams& params, const ForwardCache& cache, const HeadGradient& head) {
  Gradients g = LayerStack::zeros_like(params.shape);
  accumulate_backward(params, cache, head, g);
  return g;
}

/// Plain SGD: p <- p - lr * g. Non-finite gradients abort the update.
inline void sgd_step(ModelParams& params, const Gradients& grads, double learning_rate) {
  if (!grads.all_finite()) throw Error("sgd_step: non-finite gradient");
  if (grads.parameter_count() != params.layers.parameter_count()) {
    throw ShapeError("sgd_step: gradient shape does not match parameters");
  }
  auto apply = [learning_rate](Layer& p, const Layer& g) {
    detail::require_same_size(g.weights.size(), p.weights.size(), "sgd_step weights");
    detail::require_same_size(g.bias.size(), p.bias.size(), "sgd_step bias");
    auto& pw = p.weights.data();
    const auto& gw = g.weights.data();
    for (std::size_t i = 0; i < pw.size(); ++i) pw[i] -= learning_rate * gw[i];
    for (std::size_t i = 0; i < p.bias.size(); ++i) p.bias[i] -= learning_rate * g.bias[i];
  };
  detail::require_same_size(grads.trunk.size(), params.layers.trunk.size(), "sgd_step trunk depth");
  for (std::size_t l = 0; l < grads.trunk.size(); ++l) apply(params.layers.trunk[l], grads.trunk[l]);
  apply(params.layers.categorical, grads.categorical);
  apply(params.layers.continuous, grads.continuous);
  ++params.version;
}

}  // namespace auglabel
