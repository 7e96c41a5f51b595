#include "visnerf/losses.hpp"

#include <cmath>

#include "visnerf/errors.hpp"
#include "visnerf/hash_field.hpp"

namespace visnerf {

namespace {

enum class Norm { l2, l1 };

// Shared pixel loop for the masked mean losses. `include_masked` selects
// whether the mask picks the pixels to include (inpaint losses) or to
// exclude (photometric/depth losses).
double masked_mean_loss(const Image& rendered, const Image& target, const Mask* mask,
                        bool include_masked, Norm norm, double scale, Image* grad) {
  if (!rendered.same_shape(target))
    throw ConfigError("loss: image shapes differ");
  if (mask && (mask->width != rendered.width || mask->height != rendered.height))
    throw ConfigError("loss: mask shape differs");
  if (grad) *grad = Image(rendered.width, rendered.height, rendered.channels);

  size_t count = 0;
  for (int y = 0; y < rendered.height; ++y)
    for (int x = 0; x < rendered.width; ++x) {
      const bool m = mask ? mask->at(x, y) : false;
      if (m != include_masked && mask) continue;
      if (!mask && include_masked) continue;  // no mask: the masked set is empty
      ++count;
    }
  if (count == 0) return 0.0;

  // L2 follows the squared-norm-per-pixel convention (channel sum, pixel
  // mean); L1 is the plain mean absolute error over elements.
  double sum = 0.0;
  const double denom = norm == Norm::l2
                           ? static_cast<double>(count)
                           : static_cast<double>(count) * rendered.channels;
  for (int y = 0; y < rendered.height; ++y)
    for (int x = 0; x < rendered.width; ++x) {
      const bool m = mask ? mask->at(x, y) : false;
      if (mask && m != include_masked) continue;
      if (!mask && include_masked) continue;
      for (int c = 0; c < rendered.channels; ++c) {
        const double diff = rendered.at(x, y, c) - target.at(x, y, c);
        if (norm == Norm::l2) {
          sum += diff * diff;
          if (grad) grad->at(x, y, c) = scale * 2.0 * diff / denom;
        } else {
          sum += std::abs(diff);
          if (grad)
            grad->at(x, y, c) =
                scale * (diff > 0 ? 1.0 : diff < 0 ? -1.0 : 0.0) / denom;
        }
      }
    }
  return scale * sum / denom;
}

}  // namespace

double rgb_loss(const Image& rendered, const Image& target, const Mask* mask,
                Image* grad) {
  return masked_mean_loss(rendered, target, mask, false, Norm::l2, 1.0, grad);
}

double depth_loss(const Image& rendered, const Image& target, const Mask* mask,
                  Image* grad) {
  return masked_mean_loss(rendered, target, mask, false, Norm::l2, 1.0, grad);
}

double depth_loss_l1(const Image& rendered, const Image& target, const Mask* mask,
                     Image* grad) {
  return masked_mean_loss(rendered, target, mask, false, Norm::l1, 1.0, grad);
}

double inpaint_rgb_loss(const Image& rendered, const Image& provided, const Mask& mask,
                        double t_noise, const NoiseWeightFn& w_fn, Image* grad) {
  if (!(t_noise >= 0.0 && t_noise <= 1.0))
    throw ConfigError("inpaint_rgb_loss: t_noise must be in [0, 1]");
  return masked_mean_loss(rendered, provided, &mask, true, Norm::l1, w_fn(t_noise), grad);
}

double distortion_loss(std::span<const double> w, std::span<const double> m,
                       std::span<const double> d, std::vector<double>* grad_w) {
  const size_t n = w.size();
  if (m.size() != n || d.size() != n)
    throw ConfigError("distortion_loss: mismatched lengths");
  if (grad_w) grad_w->assign(n, 0.0);
  if (n == 0) return 0.0;

  // With ascending midpoints, sum_{i,j} w_i w_j |m_i - m_j| unrolls into
  // prefix sums A_k = sum_{j<=k} w_j and B_k = sum_{j<=k} w_j m_j.
  double pair_term = 0.0;
  double self_term = 0.0;
  double prefix_w = 0.0, prefix_wm = 0.0;
  std::vector<double> left(n);
  for (size_t i = 0; i < n; ++i) {
    left[i] = m[i] * prefix_w - prefix_wm;  // sum_{j<i} w_j (m_i - m_j)
    pair_term += 2.0 * w[i] * left[i];
    self_term += w[i] * w[i] * d[i];
    prefix_w += w[i];
    prefix_wm += w[i] * m[i];
  }
  const double total_w = prefix_w, total_wm = prefix_wm;

  if (grad_w) {
    double running_w = 0.0, running_wm = 0.0;  // inclusive prefixes
    for (size_t i = 0; i < n; ++i) {
      running_w += w[i];
      running_wm += w[i] * m[i];
      const double right = (total_wm - running_wm) - m[i] * (total_w - running_w);
      (*grad_w)[i] = 2.0 * (left[i] + right) + (2.0 / 3.0) * w[i] * d[i];
    }
  }
  return pair_term + self_term / 3.0;
}

double distortion_loss_quadratic(std::span<const double> w, std::span<const double> m,
                                 std::span<const double> d) {
  const size_t n = w.size();
  double out = 0.0;
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) out += w[i] * w[j] * std::abs(m[i] - m[j]);
    out += w[i] * w[i] * d[i] / 3.0;
  }
  return out;
}

double hash_decay_loss(const HashGridField& field) {
  const auto values = field.params().values();
  const size_t begin = field.hash_param_offset();
  const size_t count = field.hash_param_count();
  double sum = 0.0;
  for (size_t i = begin; i < begin + count; ++i) sum += values[i] * values[i];
  return sum / static_cast<double>(count);
}

double hash_decay_loss_backward(HashGridField& field, double weight) {
  const size_t begin = field.hash_param_offset();
  const size_t count = field.hash_param_count();
  const auto values = field.params().values();
  auto grads = field.params().grads();
  double sum = 0.0;
  const double g_scale = weight * 2.0 / static_cast<double>(count);
  for (size_t i = begin; i < begin + count; ++i) {
    sum += values[i] * values[i];
    grads[i] += g_scale * values[i];
  }
  return sum / static_cast<double>(count);
}

}  // namespace visnerf
