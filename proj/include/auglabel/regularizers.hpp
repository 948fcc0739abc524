#pragma once

#include <random>

#include "auglabel/core.hpp"
#include "auglabel/labelspace.hpp"

namespace auglabel {

/// Single-channel H x W input grid.
class GridInput {
 public:
  GridInput() = default;
  GridInput(std::size_t height, std::size_t width, double fill = 0.0) : pixels_(height, width, fill) {}
  explicit GridInput(Matrix pixels) : pixels_(std::move(pixels)) {}

  std::size_t height() const noexcept { return pixels_.rows(); }
  std::size_t width() const noexcept { return pixels_.cols(); }
  double& operator()(std::size_t r, std::size_t c) { return pixels_(r, c); }
  double operator()(std::size_t r, std::size_t c) const { return pixels_(r, c); }
  const Matrix& pixels() const noexcept { return pixels_; }
  Matrix& pixels() noexcept { return pixels_; }
  std::span<const double> flat() const noexcept { return pixels_.data(); }

  bool operator==(const GridInput&) const = default;

 private:
  Matrix pixels_;
};

/// Per-bit flip probability for label disturbance.
struct DisturbConfig {
  double flip_rate = 0.0;

  void validate() const {
    if (!(flip_rate >= 0.0 && flip_rate < 1.0)) throw Error("flip rate must lie in [0, 1)");
  }
};

inline CategoricalLabel disturb_labels(const CategoricalLabel& y, const DisturbConfig& cfg, Rng& rng) {
  cfg.validate();
  CategoricalLabel out = y;
  if (cfg.flip_rate == 0.0) return out;
  std::bernoulli_distribution flip(cfg.flip_rate);
  for (std::size_t j = 0; j < y.size(); ++j) {
    if (flip(rng)) out.set(j, y[j] == 0);
  }
  return out;
}

enum class CropLocation { TopLeft = 0, TopRight, BottomLeft, BottomRight, Centre };

inline constexpr std::size_t kCropLocations = 5;

namespace detail {

inline void check_crop(const GridInput& x, std::size_t crop_h, std::size_t crop_w) {
  if (crop_h == 0 || crop_w == 0) throw ShapeError("crop size must be positive");
  if (crop_h > x.height() || crop_w > x.width()) {
    throw ShapeError("crop " + std::to_string(crop_h) + "x" + std::to_string(crop_w) +
                     " exceeds input " + std::to_string(x.height()) + "x" + std::to_string(x.width()));
  }
}

}  // namespace detail

/// Crop window at one of the five fixed locations. The centre offset rounds
/// down when the margin is odd.
inline GridInput crop_at(const GridInput& x, std::size_t crop_h, std::size_t crop_w, CropLocation where,
                         bool mirror = false) {
  detail::check_crop(x, crop_h, crop_w);
  const std::size_t dy = x.height() - crop_h;
  const std::size_t dx = x.width() - crop_w;
  std::size_t top = 0, left = 0;
  switch (where) {
    case CropLocation::TopLeft: break;
    case CropLocation::TopRight: left = dx; break;
    case CropLocation::BottomLeft: top = dy; break;
    case CropLocation::BottomRight: top = dy; left = dx; break;
    case CropLocation::Centre: top = dy / 2; left = dx / 2; break;
  }
  GridInput out(crop_h, crop_w);
  for (std::size_t r = 0; r < crop_h; ++r) {
    for (std::size_t c = 0; c < crop_w; ++c) {
      const std::size_t src_c = mirror ? left + crop_w - 1 - c : left + c;
      out(r, c) = x(top + r, src_c);
    }
  }
  return out;
}

inline GridInput centre_crop(const GridInput& x, std::size_t crop_h, std::size_t crop_w) {
  return crop_at(x, crop_h, crop_w, CropLocation::Centre);
}

/// Uniformly picks one of the four corner or centre windows, then mirrors it
/// horizontally with probability 0.5.
inline GridInput five_crop_flip(const GridInput& x, std::size_t crop_h, std::size_t crop_w, Rng& rng) {
  detail::check_crop(x, crop_h, crop_w);
  std::uniform_int_distribution<int> location(0, static_cast<int>(kCropLocations) - 1);
  std::bernoulli_distribution coin(0.5);
  const auto where = static_cast<CropLocation>(location(rng));
  const bool mirror = coin(rng);
  return crop_at(x, crop_h, crop_w, where, mirror);
}

}  // namespace auglabel
