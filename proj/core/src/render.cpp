#include "visnerf/render.hpp"

#include <cmath>
#include <string>

#include "visnerf/errors.hpp"
#include "visnerf/parallel.hpp"

namespace visnerf {

RaySamples stratified_samples(const Ray& ray, int n, Rng* jitter) {
  if (n < 1) throw ConfigError("stratified_samples: n must be >= 1");
  RaySamples out;
  out.t_near = ray.t_near;
  out.t_far = ray.t_far;
  out.t.resize(n);
  out.delta.resize(n);
  const double span = ray.t_far - ray.t_near;
  const double bin = span / n;
  for (int i = 0; i < n; ++i) {
    const double u = jitter ? jitter->uniform() : 0.5;
    out.t[i] = ray.t_near + (i + u) * bin;
  }
  for (int i = 0; i + 1 < n; ++i) out.delta[i] = out.t[i + 1] - out.t[i];
  out.delta[n - 1] = ray.t_far - out.t[n - 1];
  return out;
}

void sample_field_along(const RadianceField& field, const Ray& ray, RaySamples& samples) {
  samples.samples.resize(samples.t.size());
  for (size_t i = 0; i < samples.t.size(); ++i)
    samples.samples[i] = field.sample(ray.at(samples.t[i]), ray.direction);
}

RayRenderResult composite(const RaySamples& samples) {
  const int n = samples.count();
  RayRenderResult out;
  out.weights.resize(n);
  out.transmittance.resize(n);
  double transmittance = 1.0;
  for (int i = 0; i < n; ++i) {
    const FieldSample& s = samples.samples[i];
    if (!std::isfinite(s.sigma))
      throw NumericError("composite: non-finite density at sample " + std::to_string(i));
    out.transmittance[i] = transmittance;
    const double att = std::exp(-s.sigma * samples.delta[i]);
    const double w = transmittance * (1.0 - att);
    out.weights[i] = w;
    out.color += w * s.color;
    out.depth += w * samples.t[i];
    out.opacity += w;
    transmittance *= att;  // multiplicative so sum(w) telescopes to 1 - T
  }
  return out;
}

CompositeGrads composite_backward(const RaySamples& samples,
                                  const RayRenderResult& forward,
                                  const CompositeUpstream& upstream) {
  const int n = samples.count();
  CompositeGrads grads;
  grads.d_sigma.assign(n, 0.0);
  grads.d_color.assign(n, Vec3::Zero());

  // u_i = dL/dw_i pulled together from all outputs.
  std::vector<double> u(n);
  for (int i = 0; i < n; ++i) {
    double ui = upstream.d_color.dot(samples.samples[i].color) +
                upstream.d_depth * samples.t[i] + upstream.d_opacity;
    if (!upstream.d_weight.empty()) ui += upstream.d_weight[i];
    u[i] = ui;
    grads.d_color[i] = upstream.d_color * forward.weights[i];
  }

  // dw_i/dsigma_i = T_i delta_i exp(-sigma_i delta_i);
  // dw_j/dsigma_i = -delta_i w_j for j > i, handled with a suffix sum.
  double suffix = 0.0;  // sum_{j>i} u_j w_j
  for (int i = n - 1; i >= 0; --i) {
    const double sd = samples.samples[i].sigma * samples.delta[i];
    const double own = u[i] * forward.transmittance[i] * samples.delta[i] * std::exp(-sd);
    grads.d_sigma[i] = own - samples.delta[i] * suffix;
    suffix += u[i] * forward.weights[i];
  }
  return grads;
}

double gradient_scale_factor(double s, double s_g) {
  if (!(s_g > 0.0) || !std::isfinite(s_g)) return 1.0;
  const double r = s / s_g;
  const double f = r * r;
  return f < 1.0 ? f : 1.0;
}

RenderedView render_image(const RadianceField& field, const Camera& camera,
                          int n_samples, std::optional<uint64_t> jitter_seed,
                          int threads) {
  const int width = camera.intrinsics.width;
  const int height = camera.intrinsics.height;
  RenderedView view{Image::rgb(width, height), Image::gray(width, height),
                    Image::gray(width, height)};

  parallel_for(0, height, threads, [&](int y) {
    for (int x = 0; x < width; ++x) {
      const Ray ray = pixel_ray(camera, x, y);
      Rng rng(jitter_seed ? derive_seed(*jitter_seed, static_cast<uint64_t>(y) * width + x)
                          : 0);
      RaySamples samples =
          stratified_samples(ray, n_samples, jitter_seed ? &rng : nullptr);
      sample_field_along(field, ray, samples);
      const RayRenderResult result = composite(samples);
      for (int c = 0; c < 3; ++c) view.color.at(x, y, c) = result.color[c];
      view.depth.at(x, y) = result.depth;
      view.opacity.at(x, y) = result.opacity;
    }
  });
  return view;
}

double transmittance_to_point(const RadianceField& field, const Vec3& from,
                              const Vec3& to, int n_samples) {
  const Vec3 offset = to - from;
  const double dist = offset.norm();
  if (dist < 1e-12) throw ConfigError("transmittance_to_point: from == to");
  const Vec3 dir = offset / dist;
  const double bin = dist / n_samples;
  double optical_depth = 0.0;
  for (int i = 0; i < n_samples; ++i) {
    const double s = (i + 0.5) * bin;
    optical_depth += field.density(from + s * dir) * bin;
  }
  return std::exp(-optical_depth);
}

}  // namespace visnerf
