#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "visnerf/image.hpp"

namespace visnerf {

class HashGridField;

struct LossWeights {
  double rgb = 1.0;
  double depth = 0.1;
  double inpaint = 1.0;
  double distortion = 0.002;
  double hash_decay = 0.1;
};

struct LossReport {
  int64_t iteration = 0;
  double rgb = 0.0;
  double depth = 0.0;
  double inpaint = 0.0;
  double distortion = 0.0;
  double hash_decay = 0.0;
  double total = 0.0;
  double lr = 0.0;
};

/// Noise-level dependent weighting w(t) for the inpaint/enhance losses.
struct NoiseWeightFn {
  enum class Kind { uniform, gaussian };
  Kind kind = Kind::uniform;
  double scale = 0.5;  // gaussian: w = exp(-t^2 / (2 scale^2))

  double operator()(double t) const {
    return kind == Kind::uniform ? 1.0 : std::exp(-t * t / (2.0 * scale * scale));
  }
};

/// Mean squared error over unmasked pixels (all channels); gradient
/// 2 (rendered - target) / count on those pixels, zero elsewhere, where
/// count is the number of unmasked pixels. An empty unmasked set yields 0
/// with zero gradients. `mask` true means excluded.
double rgb_loss(const Image& rendered, const Image& target, const Mask* mask = nullptr,
                Image* grad = nullptr);

/// Same as rgb_loss on scalar maps.
double depth_loss(const Image& rendered, const Image& target, const Mask* mask = nullptr,
                  Image* grad = nullptr);

/// L1 variant used by the inpaint/enhance stages: mean |diff| over unmasked
/// pixels, gradient sign(diff)/count.
double depth_loss_l1(const Image& rendered, const Image& target,
                     const Mask* mask = nullptr, Image* grad = nullptr);

/// w(t_noise) times the mean absolute error over *masked* pixels (the
/// unobserved set). t_noise must lie in [0, 1].
double inpaint_rgb_loss(const Image& rendered, const Image& provided, const Mask& mask,
                        double t_noise, const NoiseWeightFn& w_fn = {},
                        Image* grad = nullptr);

/// Distortion regularizer over one ray's weights: for ray-normalized
/// midpoints m and deltas d,
///   sum_{i,j} w_i w_j |m_i - m_j| + (1/3) sum_i w_i^2 d_i,
/// computed in O(N) with prefix sums (midpoints must be ascending).
/// grad_w, when given, receives the analytic gradient w.r.t. w.
double distortion_loss(std::span<const double> w, std::span<const double> m,
                       std::span<const double> d, std::vector<double>* grad_w = nullptr);

/// Reference O(N^2) evaluation of the same sum, for oracle checks.
double distortion_loss_quadratic(std::span<const double> w, std::span<const double> m,
                                 std::span<const double> d);

/// Mean squared norm of the hash-table features: (1/P) sum e^2.
double hash_decay_loss(const HashGridField& field);

/// Adds weight * d(hash_decay)/d(entry) = weight * 2 e / P into the field's
/// gradients and returns the loss value.
double hash_decay_loss_backward(HashGridField& field, double weight);

}  // namespace visnerf
