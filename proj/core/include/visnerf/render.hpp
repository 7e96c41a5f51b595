#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "visnerf/field.hpp"
#include "visnerf/geometry.hpp"
#include "visnerf/image.hpp"
#include "visnerf/rng.hpp"

namespace visnerf {

/// Sample positions along one ray with the field values at each position.
/// delta[i] = t[i+1] - t[i]; the last delta closes the interval to t_far.
struct RaySamples {
  std::vector<double> t;
  std::vector<double> delta;
  std::vector<FieldSample> samples;
  double t_near = 0.0;
  double t_far = 0.0;

  int count() const { return static_cast<int>(t.size()); }
};

/// Splits [t_near, t_far] into n equal bins and samples one position per
/// bin: the bin center when jitter is null, uniform within the bin
/// otherwise. Field values are left empty.
RaySamples stratified_samples(const Ray& ray, int n, Rng* jitter = nullptr);

/// Fills samples[i] = field.sample(ray.at(t[i]), ray.direction).
void sample_field_along(const RadianceField& field, const Ray& ray, RaySamples& samples);

struct RayRenderResult {
  Vec3 color = Vec3::Zero();
  double depth = 0.0;    // expected termination depth, unnormalized
  double opacity = 0.0;  // 1 - residual transmittance = sum of weights
  std::vector<double> weights;
  std::vector<double> transmittance;  // T[0] = 1, non-increasing
};

/// Front-to-back compositing: w_i = T_i (1 - exp(-sigma_i delta_i)),
/// color = sum w_i c_i, depth = sum w_i t_i. Residual transmittance
/// composites to black and contributes zero depth. Throws NumericError
/// (naming the sample index) on non-finite density.
RayRenderResult composite(const RaySamples& samples);

struct CompositeUpstream {
  Vec3 d_color = Vec3::Zero();
  double d_depth = 0.0;
  double d_opacity = 0.0;
  /// Optional extra per-sample upstream dL/dw_i (e.g. from the distortion
  /// term). Empty or sized like the samples.
  std::vector<double> d_weight;
};

struct CompositeGrads {
  std::vector<double> d_sigma;
  std::vector<Vec3> d_color;
};

/// Exact analytic gradients of composite(), including the transmittance
/// chain dT_j/dsigma_i for i < j (computed with suffix sums in O(N)).
CompositeGrads composite_backward(const RaySamples& samples,
                                  const RayRenderResult& forward,
                                  const CompositeUpstream& upstream);

/// Backward attenuation for samples near the ray origin:
/// min(1, (s/s_g)^2). Disabled (returns exactly 1) when s_g <= 0 or
/// non-finite.
double gradient_scale_factor(double s, double s_g);

struct RenderedView {
  Image color;    // 3 channels
  Image depth;    // 1 channel
  Image opacity;  // 1 channel
};

/// Per-pixel composite over pixel-center rays. Deterministic for any
/// thread count: jitter streams are derived per pixel from jitter_seed.
RenderedView render_image(const RadianceField& field, const Camera& camera,
                          int n_samples, std::optional<uint64_t> jitter_seed = {},
                          int threads = 1);

/// Transmittance exp(-integral of sigma) marched from `from` to `to` with n
/// midpoint samples; the density at `to` itself is excluded (the last
/// sample sits half a bin short of it). Returns 1 for empty space.
double transmittance_to_point(const RadianceField& field, const Vec3& from,
                              const Vec3& to, int n_samples);

}  // namespace visnerf
