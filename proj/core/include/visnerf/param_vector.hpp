#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace visnerf {

struct ParamSegment {
  std::string name;
  size_t offset = 0;
  size_t size = 0;
};

/// Flat view of all learnable parameters with named segments and gradients
/// of identical shape. Segment offsets partition the vector.
class ParamVector {
 public:
  /// Appends a zero-initialized segment and returns its index.
  int add_segment(const std::string& name, size_t size);

  size_t size() const { return values_.size(); }
  int segment_count() const { return static_cast<int>(segments_.size()); }
  const ParamSegment& segment(int i) const { return segments_[i]; }
  int find_segment(const std::string& name) const;  // -1 if absent

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  std::span<double> grads() { return grads_; }
  std::span<const double> grads() const { return grads_; }

  std::span<double> segment_values(int i);
  std::span<const double> segment_values(int i) const;
  std::span<double> segment_grads(int i);

  void zero_grads();

 private:
  std::vector<double> values_;
  std::vector<double> grads_;
  std::vector<ParamSegment> segments_;
};

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.99;
  double eps = 1e-15;
};

/// Bias-corrected adaptive-moment optimizer over a ParamVector. Gradients
/// are zeroed after each step. Segments containing non-finite gradients are
/// skipped (their parameters and moments stay untouched) and reported.
class Adam {
 public:
  explicit Adam(size_t param_count, AdamConfig config = {});

  /// Returns the indices of segments skipped because of non-finite grads.
  std::vector<int> step(ParamVector& params, double lr);

  int64_t steps_taken() const { return step_; }

 private:
  AdamConfig config_;
  std::vector<double> m_, v_;
  int64_t step_ = 0;
};

/// Log-linear learning-rate interpolation: lr(0) = lr_start and
/// lr(total) = lr_end. Iterations past `total` stay at lr_end.
double log_lerp_lr(double lr_start, double lr_end, int64_t iteration, int64_t total);

}  // namespace visnerf
