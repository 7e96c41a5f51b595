#include "visnerf/param_vector.hpp"

#include <algorithm>
#include <cmath>

#include "visnerf/errors.hpp"

namespace visnerf {

int ParamVector::add_segment(const std::string& name, size_t size) {
  ParamSegment seg;
  seg.name = name;
  seg.offset = values_.size();
  seg.size = size;
  segments_.push_back(seg);
  values_.resize(values_.size() + size, 0.0);
  grads_.resize(values_.size(), 0.0);
  return static_cast<int>(segments_.size()) - 1;
}

int ParamVector::find_segment(const std::string& name) const {
  for (int i = 0; i < segment_count(); ++i)
    if (segments_[i].name == name) return i;
  return -1;
}

std::span<double> ParamVector::segment_values(int i) {
  const auto& s = segments_[i];
  return {values_.data() + s.offset, s.size};
}

std::span<const double> ParamVector::segment_values(int i) const {
  const auto& s = segments_[i];
  return {values_.data() + s.offset, s.size};
}

std::span<double> ParamVector::segment_grads(int i) {
  const auto& s = segments_[i];
  return {grads_.data() + s.offset, s.size};
}

void ParamVector::zero_grads() { std::fill(grads_.begin(), grads_.end(), 0.0); }

Adam::Adam(size_t param_count, AdamConfig config)
    : config_(config), m_(param_count, 0.0), v_(param_count, 0.0) {}

std::vector<int> Adam::step(ParamVector& params, double lr) {
  if (params.size() != m_.size())
    throw ConfigError("adam: parameter count changed after construction");
  ++step_;
  const double bc1 = 1.0 - std::pow(config_.beta1, static_cast<double>(step_));
  const double bc2 = 1.0 - std::pow(config_.beta2, static_cast<double>(step_));

  std::vector<int> skipped;
  for (int s = 0; s < params.segment_count(); ++s) {
    const auto& seg = params.segment(s);
    auto grads = params.segment_grads(s);
    bool finite = true;
    for (double g : grads)
      if (!std::isfinite(g)) {
        finite = false;
        break;
      }
    if (!finite) {
      skipped.push_back(s);
      continue;
    }
    auto values = params.segment_values(s);
    double* m = m_.data() + seg.offset;
    double* v = v_.data() + seg.offset;
    for (size_t i = 0; i < seg.size; ++i) {
      const double g = grads[i];
      m[i] = config_.beta1 * m[i] + (1.0 - config_.beta1) * g;
      v[i] = config_.beta2 * v[i] + (1.0 - config_.beta2) * g * g;
      const double m_hat = m[i] / bc1;
      const double v_hat = v[i] / bc2;
      values[i] -= lr * m_hat / (std::sqrt(v_hat) + config_.eps);
    }
  }
  params.zero_grads();
  return skipped;
}

double log_lerp_lr(double lr_start, double lr_end, int64_t iteration, int64_t total) {
  if (total <= 0) return lr_end;
  const double f = std::clamp(static_cast<double>(iteration) / static_cast<double>(total),
                              0.0, 1.0);
  return lr_start * std::pow(lr_end / lr_start, f);
}

}  // namespace visnerf
