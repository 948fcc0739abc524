#pragma once

#include <algorithm>
#include <vector>

#include "auglabel/lossgrad.hpp"
#include "auglabel/net.hpp"

namespace auglabel {

/// A batch for evaluating the joint objective through the network.
struct GradientProbe {
  std::vector<Vector> inputs;
  std::vector<CategoricalLabel> labels;
  std::vector<ContinuousLabel> targets;
  JointLossConfig loss;
};

/// joint_loss(forward(params, x_i)) over the probe batch, no dropout.
inline double network_objective(const ModelParams& params, const GradientProbe& probe) {
  std::vector<ForwardCache> caches;
  caches.reserve(probe.inputs.size());
  for (const auto& x : probe.inputs) caches.push_back(forward(params, x));
  std::vector<LossTerm> terms;
  for (std::size_t i = 0; i < caches.size(); ++i) {
    terms.push_back({&probe.labels[i], &probe.targets[i], &caches[i].prediction});
  }
  return joint_loss(probe.loss, terms);
}

/// Analytic parameter gradient of network_objective via backward().
inline Gradients network_gradient(const ModelParams& params, const GradientProbe& probe) {
  std::vector<ForwardCache> caches;
  for (const auto& x : probe.inputs) caches.push_back(forward(params, x));
  std::vector<LossTerm> terms;
  for (std::size_t i = 0; i < caches.size(); ++i) {
    terms.push_back({&probe.labels[i], &probe.targets[i], &caches[i].prediction});
  }
  const auto heads = joint_loss_grad(probe.loss, terms);
  Gradients g = LayerStack::zeros_like(params.shape);
  for (std::size_t i = 0; i < caches.size(); ++i) accumulate_backward(params, caches[i], heads[i], g);
  return g;
}

inline GradientProbe random_probe(const NetworkShape& shape, std::size_t batch, Rng& rng) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> alpha(0.05, 0.95);
  std::bernoulli_distribution coin(0.5);
  std::normal_distribution<double> normal(0.0, 1.0);
  GradientProbe p;
  p.loss.alpha = alpha(rng);
  for (std::size_t b = 0; b < batch; ++b) {
    Vector x(shape.input_size);
    for (auto& v : x) v = unit(rng);
    std::vector<std::uint8_t> bits(shape.m);
    for (auto& v : bits) v = coin(rng) ? 1 : 0;
    Vector z(shape.d);
    for (auto& v : z) v = normal(rng);
    p.inputs.push_back(std::move(x));
    p.labels.emplace_back(std::move(bits));
    p.targets.push_back(std::move(z));
  }
  return p;
}

inline NetworkShape random_shape(Rng& rng) {
  std::uniform_int_distribution<std::size_t> input(1, 8), hidden(1, 16), heads_m(1, 6), heads_d(1, 8),
      depth(1, 2);
  NetworkShape s;
  s.input_size = input(rng);
  const std::size_t layers = depth(rng);
  for (std::size_t l = 0; l < layers; ++l) s.hidden_sizes.push_back(hidden(rng));
  s.m = heads_m(rng);
  s.d = heads_d(rng);
  return s;
}

struct GradientCheckReport {
  std::size_t shapes = 0;
  std::size_t points = 0;
  std::size_t parameters_checked = 0;
  double max_relative_error = 0.0;
};

/// Compares backward() against central differences of the joint objective
/// for `shapes` random network shapes with `points_per_shape` random
/// parameter/batch draws each.
inline GradientCheckReport check_network_gradients(std::size_t shapes, std::size_t points_per_shape,
                                                   std::uint64_t seed, double step = 1e-5) {
  Rng rng(seed);
  GradientCheckReport report;
  for (std::size_t s = 0; s < shapes; ++s) {
    const NetworkShape shape = random_shape(rng);
    for (std::size_t p = 0; p < points_per_shape; ++p) {
      const ModelParams params = init_params(shape, rng());
      const GradientProbe probe = random_probe(shape, 3, rng);
      const Vector analytic = network_gradient(params, probe).flatten();
      ModelParams scratch = params;
      auto objective = [&](std::span<const double> flat) {
        scratch.layers.assign(flat);
        return network_objective(scratch, probe);
      };
      const Vector point = params.layers.flatten();
      const double err = finite_difference_check(objective, analytic, point, step);
      report.max_relative_error = std::max(report.max_relative_error, err);
      report.parameters_checked += point.size();
      ++report.points;
    }
    ++report.shapes;
  }
  return report;
}

}  // namespace auglabel
