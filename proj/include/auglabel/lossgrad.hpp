#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "auglabel/core.hpp"
#include "auglabel/labelspace.hpp"

namespace auglabel {

inline constexpr double kDefaultClampEpsilon = 1e-7;

/// Weight between the categorical (BCE) and continuous (MSE) terms.
struct JointLossConfig {
  double alpha = 1.0;
  double epsilon = kDefaultClampEpsilon;

  void validate() const {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw Error("alpha must lie in [0, 1]");
    if (!(epsilon > 0.0 && epsilon < 1e-3)) throw Error("epsilon must lie in (0, 1e-3)");
  }
};

/// Network outputs for one example: post-sigmoid probabilities and the
/// continuous head.
struct Prediction {
  Vector y_p;
  Vector z_p;
};

/// One batch element as seen by the joint objective.
struct LossTerm {
  const CategoricalLabel* y;
  const ContinuousLabel* z;
  const Prediction* prediction;
};

inline double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

/// Sum over categories of the per-category binary cross entropy, with
/// probabilities clamped to [eps, 1 - eps].
inline double bce_loss(const CategoricalLabel& y, std::span<const double> y_p,
                       double epsilon = kDefaultClampEpsilon) {
  detail::require_same_size(y_p.size(), y.size(), "bce_loss prediction");
  double total = 0.0;
  for (std::size_t j = 0; j < y.size(); ++j) {
    if (std::isnan(y_p[j])) throw Error("bce_loss: NaN prediction");
    const double p = std::clamp(y_p[j], epsilon, 1.0 - epsilon);
    total += y[j] ? -std::log(p) : -std::log1p(-p);
  }
  return total;
}

/// Squared Euclidean distance, not averaged over dimensions.
inline double mse_loss(std::span<const double> z, std::span<const double> z_p) {
  detail::require_same_size(z_p.size(), z.size(), "mse_loss prediction");
  double total = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double diff = z[i] - z_p[i];
    total += diff * diff;
  }
  return total;
}

namespace detail {

inline void check_batch(std::span<const LossTerm> batch) {
  if (batch.empty()) throw Error("joint loss: empty batch");
  for (const auto& t : batch) {
    if (!t.y || !t.z || !t.prediction) throw Error("joint loss: null batch element");
  }
}

}  // namespace detail

/// alpha * mean BCE + (1 - alpha) * mean squared L2, both averaged over the
/// batch only.
inline double joint_loss(const JointLossConfig& cfg, std::span<const LossTerm> batch) {
  cfg.validate();
  detail::check_batch(batch);
  double bce = 0.0;
  double mse = 0.0;
  for (const auto& t : batch) {
    bce += bce_loss(*t.y, t.prediction->y_p, cfg.epsilon);
    mse += mse_loss(*t.z, t.prediction->z_p);
  }
  const double n = static_cast<double>(batch.size());
  return cfg.alpha * (bce / n) + (1.0 - cfg.alpha) * (mse / n);
}

/// Gradient of the joint objective at the two heads of one batch element.
struct HeadGradient {
  Vector logits;  // w.r.t. pre-sigmoid categorical logits
  Vector z_p;     // w.r.t. the continuous head output
};

/// Fused sigmoid+BCE gradient per logit and the MSE gradient per output.
inline std::vector<HeadGradient> joint_loss_grad(const JointLossConfig& cfg,
                                                 std::span<const LossTerm> batch) {
  cfg.validate();
  detail::check_batch(batch);
  const double n = static_cast<double>(batch.size());
  const double cat_scale = cfg.alpha / n;
  const double cont_scale = (1.0 - cfg.alpha) * 2.0 / n;

  std::vector<HeadGradient> grads(batch.size());
  for (std::size_t b = 0; b < batch.size(); ++b) {
    const auto& y = *batch[b].y;
    const auto& z = *batch[b].z;
    const auto& pred = *batch[b].prediction;
    detail::require_same_size(pred.y_p.size(), y.size(), "joint_loss_grad prediction");
    detail::require_same_size(pred.z_p.size(), z.size(), "joint_loss_grad continuous");

    auto& g = grads[b];
    g.logits.resize(y.size());
    for (std::size_t j = 0; j < y.size(); ++j) {
      g.logits[j] = cat_scale * (pred.y_p[j] - static_cast<double>(y[j]));
    }
    g.z_p.resize(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) g.z_p[i] = cont_scale * (pred.z_p[i] - z[i]);
  }
  return grads;
}

/// Relative error between an analytic and a numeric derivative.
inline double relative_error(double analytic, double numeric) {
  const double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-12});
  return std::abs(analytic - numeric) / denom;
}

/// Compares `analytic` against central differences of `loss` at `point`
/// and returns the largest per-coordinate relative error.
inline double finite_difference_check(const std::function<double(std::span<const double>)>& loss,
                                      std::span<const double> analytic,
                                      std::span<const double> point, double step) {
  if (!(step >= 1e-7 && step <= 1e-3)) throw Error("finite difference step must lie in [1e-7, 1e-3]");
  detail::require_same_size(analytic.size(), point.size(), "analytic gradient");
  Vector x(point.begin(), point.end());
  double worst = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double saved = x[k];
    const double hi = saved + step;
    const double lo = saved - step;
    x[k] = hi;
    const double up = loss(x);
    x[k] = lo;
    const double down = loss(x);
    x[k] = saved;
    if (!std::isfinite(up) || !std::isfinite(down)) {
      throw Error("non-finite loss at perturbed coordinate " + std::to_string(k));
    }
    const double numeric = (up - down) / (hi - lo);
    worst = std::max(worst, relative_error(analytic[k], numeric));
  }
  return worst;
}

}  // namespace auglabel
