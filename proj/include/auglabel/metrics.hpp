#pragma once

#include <vector>

#include "auglabel/core.hpp"
#include "auglabel/labelspace.hpp"

namespace auglabel {

struct AccuracyReport {
  double mean = 0.0;
  Vector per_attribute;
};

/// Per-attribute thresholded accuracy and its unweighted mean. A probability
/// equal to the threshold counts as a positive prediction.
inline AccuracyReport mean_accuracy(const std::vector<Vector>& predictions,
                                    const std::vector<CategoricalLabel>& labels, double threshold = 0.5) {
  if (predictions.empty()) throw Error("mean_accuracy: empty input");
  detail::require_same_size(predictions.size(), labels.size(), "mean_accuracy predictions");
  const std::size_t m = labels.front().size();
  if (m == 0) throw Error("mean_accuracy: zero attributes");
  std::vector<std::size_t> hits(m, 0);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    detail::require_same_size(labels[i].size(), m, "mean_accuracy label");
    detail::require_same_size(predictions[i].size(), m, "mean_accuracy prediction");
    for (std::size_t j = 0; j < m; ++j) {
      const bool positive = predictions[i][j] >= threshold;
      if (positive == (labels[i][j] != 0)) ++hits[j];
    }
  }
  AccuracyReport r;
  r.per_attribute.resize(m);
  double sum = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    r.per_attribute[j] = static_cast<double>(hits[j]) / static_cast<double>(labels.size());
    sum += r.per_attribute[j];
  }
  r.mean = sum / static_cast<double>(m);
  return r;
}

}  // namespace auglabel
