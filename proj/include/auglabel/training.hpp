#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "auglabel/core.hpp"
#include "auglabel/dataset.hpp"
#include "auglabel/labelspace.hpp"
#include "auglabel/lossgrad.hpp"
#include "auglabel/metrics.hpp"
#include "auglabel/net.hpp"
#include "auglabel/regularizers.hpp"

namespace auglabel {

struct SgdConfig {
  double learning_rate = 0.05;
  std::size_t epochs = 30;
  std::size_t batch_size = 16;
  std::uint64_t seed = 0;

  // A zero learning rate is accepted and freezes the parameters.
  void validate() const {
    if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) throw Error("learning rate must be >= 0");
    if (epochs == 0) throw Error("epochs must be positive");
    if (batch_size == 0) throw Error("batch size must be positive");
  }
};

/// Which baseline regularizers are active during training. Inputs are
/// always cropped to crop_h x crop_w: a random five-crop with mirroring when
/// geo_aug is on, the centre crop otherwise (and always at evaluation).
struct RegularizerSwitches {
  bool geo_aug = false;
  bool dropout = false;
  bool disturb_label = false;
  DisturbConfig disturb;
  std::size_t crop_h = 8;
  std::size_t crop_w = 8;
};

struct EpochRecord {
  std::size_t epoch = 0;
  double train_loss = 0.0;
  double val_accuracy = 0.0;
};

struct TrainResult {
  ModelParams params;
  std::vector<EpochRecord> trace;
};

/// Probabilities of the categorical head on centre-cropped inputs.
inline std::vector<Vector> predict_probabilities(const ModelParams& params, const Split& split,
                                                 std::size_t crop_h, std::size_t crop_w) {
  std::vector<Vector> out;
  out.reserve(split.size());
  for (const auto& ex : split) {
    const GridInput in = centre_crop(ex.x, crop_h, crop_w);
    out.push_back(forward(params, in.flat()).prediction.y_p);
  }
  return out;
}

inline std::vector<CategoricalLabel> labels_of(const Split& split) {
  std::vector<CategoricalLabel> out;
  out.reserve(split.size());
  for (const auto& ex : split) out.push_back(ex.y);
  return out;
}

inline AccuracyReport evaluate(const ModelParams& params, const Split& split, std::size_t crop_h,
                               std::size_t crop_w) {
  return mean_accuracy(predict_probabilities(params, split, crop_h, crop_w), labels_of(split));
}

/// Minibatch SGD on the joint objective. All randomness (shuffling, crops,
/// label flips, dropout masks) comes from one generator seeded by sgd.seed.
/// `space` supplies continuous targets and may be null only when alpha == 1.
inline TrainResult train(ModelParams params, const Split& train_split, const Split& val_split,
                         const AttributeSpace* space, const JointLossConfig& loss_cfg, const SgdConfig& sgd,
                         const RegularizerSwitches& reg) {
  loss_cfg.validate();
  sgd.validate();
  reg.disturb.validate();
  if (train_split.empty()) throw Error("train: empty training split");
  const auto& shape = params.shape;
  detail::require_same_size(reg.crop_h * reg.crop_w, shape.input_size, "train: crop area vs network input");
  if (space) {
    detail::require_same_size(space->m(), shape.m, "train: attribute count vs categorical head");
    detail::require_same_size(space->d(), shape.d, "train: embedding dimension vs continuous head");
  } else if (loss_cfg.alpha != 1.0) {
    throw Error("train: continuous targets need an attribute space when alpha < 1");
  }

  Rng rng(sgd.seed);
  std::vector<std::size_t> order(train_split.size());
  std::iota(order.begin(), order.end(), 0);
  Vector example_loss(train_split.size());
  Gradients grads = LayerStack::zeros_like(shape);
  const ContinuousLabel zero_z(shape.d, 0.0);

  TrainResult result;
  for (std::size_t epoch = 1; epoch <= sgd.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < order.size(); start += sgd.batch_size) {
      const std::size_t stop = std::min(order.size(), start + sgd.batch_size);
      const std::size_t n = stop - start;

      std::vector<CategoricalLabel> ys(n);
      std::vector<ContinuousLabel> zs(n);
      std::vector<ForwardCache> caches(n);
      for (std::size_t b = 0; b < n; ++b) {
        const auto& ex = train_split[order[start + b]];
        const GridInput in = reg.geo_aug ? five_crop_flip(ex.x, reg.crop_h, reg.crop_w, rng)
                                         : centre_crop(ex.x, reg.crop_h, reg.crop_w);
        ys[b] = reg.disturb_label ? disturb_labels(ex.y, reg.disturb, rng) : ex.y;
        zs[b] = space ? synthesize_continuous_label(*space, ys[b]) : zero_z;
        if (reg.dropout) {
          const DropoutMask mask = sample_dropout_mask(shape, rng);
          caches[b] = forward(params, in.flat(), &mask);
        } else {
          caches[b] = forward(params, in.flat());
        }
      }

      std::vector<LossTerm> terms(n);
      for (std::size_t b = 0; b < n; ++b) terms[b] = {&ys[b], &zs[b], &caches[b].prediction};
      for (std::size_t b = 0; b < n; ++b) {
        const double l = joint_loss(loss_cfg, std::span<const LossTerm>(&terms[b], 1));
        if (!std::isfinite(l)) throw DivergenceError(epoch, "non-finite training loss");
        example_loss[order[start + b]] = l;
      }

      const auto head_grads = joint_loss_grad(loss_cfg, terms);
      grads.for_each_layer([](Layer& l) {
        std::fill(l.weights.data().begin(), l.weights.data().end(), 0.0);
        std::fill(l.bias.begin(), l.bias.end(), 0.0);
      });
      for (std::size_t b = 0; b < n; ++b) accumulate_backward(params, caches[b], head_grads[b], grads);
      try {
        sgd_step(params, grads, sgd.learning_rate);
      } catch (const Error& e) {
        throw DivergenceError(epoch, e.what());
      }
    }

    EpochRecord rec;
    rec.epoch = epoch;
    // Summed in example order so the value does not depend on the shuffle.
    rec.train_loss = std::accumulate(example_loss.begin(), example_loss.end(), 0.0) /
                     static_cast<double>(example_loss.size());
    rec.val_accuracy = val_split.empty() ? 0.0 : evaluate(params, val_split, reg.crop_h, reg.crop_w).mean;
    result.trace.push_back(rec);
  }
  result.params = std::move(params);
  return result;
}

}  // namespace auglabel
