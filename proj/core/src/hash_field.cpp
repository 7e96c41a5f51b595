#include "visnerf/hash_field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "visnerf/errors.hpp"
#include "visnerf/rng.hpp"
#include "visnerf/sh.hpp"

namespace visnerf {

namespace {

// One exp serves both the value and the derivative.
inline void softplus_pair(double x, double& value, double& deriv) {
  const double e = std::exp(-std::abs(x));
  value = std::max(x, 0.0) + std::log1p(e);
  deriv = x >= 0 ? 1.0 / (1.0 + e) : e / (1.0 + e);
}

inline double sigmoid(double x) {
  const double e = std::exp(-std::abs(x));
  return x >= 0 ? 1.0 / (1.0 + e) : e / (1.0 + e);
}

// y = W x + b, W row-major [rows][cols].
inline void affine(const double* w, const double* b, const double* x, int rows,
                   int cols, double* y) {
  for (int r = 0; r < rows; ++r) {
    double acc = b[r];
    const double* wr = w + static_cast<size_t>(r) * cols;
    for (int c = 0; c < cols; ++c) acc += wr[c] * x[c];
    y[r] = acc;
  }
}

}  // namespace

HashGridField::HashGridField(const HashGridConfig& config) : config_(config) {
  if (config.levels < 1) throw ConfigError("hash field: levels must be >= 1");
  if (config.base_resolution < 2)
    throw ConfigError("hash field: base_resolution must be >= 2");
  if (!(config.per_level_scale > 1.0))
    throw ConfigError("hash field: per_level_scale must be > 1");
  if (config.log2_table_size < 1 || config.log2_table_size > 24)
    throw ConfigError("hash field: log2_table_size out of range");
  if (config.features_per_level < 1)
    throw ConfigError("hash field: features_per_level must be >= 1");
  if (config.sh_degree < 0 || config.sh_degree > 3)
    throw ConfigError("hash field: sh_degree must be in [0, 3]");
  if (config.hidden_width < 1) throw ConfigError("hash field: hidden_width must be >= 1");

  resolutions_.resize(config.levels);
  for (int l = 0; l < config.levels; ++l)
    resolutions_[l] = static_cast<int>(
        std::floor(config.base_resolution * std::pow(config.per_level_scale, l)));

  const size_t table = config.table_size();
  const int f = config.features_per_level;
  const int fin = config.feature_dim();
  const int h = config.hidden_width;
  const int s = sh_terms(config.sh_degree);

  offsets_.hash.resize(config.levels);
  for (int l = 0; l < config.levels; ++l) {
    const int seg = params_.add_segment("hash_l" + std::to_string(l), table * f);
    offsets_.hash[l] = params_.segment(seg).offset;
  }
  auto add = [&](const char* name, size_t n) {
    const int seg = params_.add_segment(name, n);
    return params_.segment(seg).offset;
  };
  offsets_.density_w1 = add("density_w1", static_cast<size_t>(h) * fin);
  offsets_.density_b1 = add("density_b1", h);
  offsets_.density_w2 = add("density_w2", h);
  offsets_.density_b2 = add("density_b2", 1);
  offsets_.color_w1 = add("color_w1", static_cast<size_t>(h) * (fin + s));
  offsets_.color_b1 = add("color_b1", h);
  offsets_.color_w2 = add("color_w2", static_cast<size_t>(h) * h);
  offsets_.color_b2 = add("color_b2", h);
  offsets_.color_w3 = add("color_w3", static_cast<size_t>(3) * h);
  offsets_.color_b3 = add("color_b3", 3);
}

size_t HashGridField::hash_param_count() const {
  return static_cast<size_t>(config_.levels) * config_.table_size() *
         config_.features_per_level;
}

void HashGridField::init_params(uint64_t seed) {
  Rng rng(derive_seed(seed, 0x4a51));
  auto values = params_.values();
  const size_t hash_end = hash_param_count();
  for (size_t i = 0; i < hash_end; ++i) values[i] = rng.uniform(-1e-4, 1e-4);

  auto xavier = [&](size_t offset, int rows, int cols) {
    const double bound = std::sqrt(6.0 / (rows + cols));
    for (size_t i = 0; i < static_cast<size_t>(rows) * cols; ++i)
      values[offset + i] = rng.uniform(-bound, bound);
  };
  const int fin = config_.feature_dim();
  const int h = config_.hidden_width;
  const int s = sh_terms(config_.sh_degree);
  xavier(offsets_.density_w1, h, fin);
  xavier(offsets_.density_w2, 1, h);
  xavier(offsets_.color_w1, h, fin + s);
  xavier(offsets_.color_w2, h, h);
  xavier(offsets_.color_w3, 3, h);
  // Biases stay zero except the raw-density bias: start nearly empty.
  values[offsets_.density_b2] = -2.0;
}

int HashGridField::level_resolution(int level) const { return resolutions_[level]; }

uint32_t HashGridField::corner_hash(int x, int y, int z) const {
  const uint32_t h = static_cast<uint32_t>(x) * 1u ^
                     static_cast<uint32_t>(y) * 2654435761u ^
                     static_cast<uint32_t>(z) * 805459861u;
  return h & (config_.table_size() - 1u);
}

Vec3 HashGridField::to_grid(const Vec3& world) const {
  const Vec3 p = config_.contract_points ? contract(world) : world;
  const double r = config_.domain_radius;
  Vec3 q = (p + Vec3::Constant(r)) / (2.0 * r);
  q.x() = std::clamp(q.x(), 0.0, 1.0);
  q.y() = std::clamp(q.y(), 0.0, 1.0);
  q.z() = std::clamp(q.z(), 0.0, 1.0);
  return q;
}

void HashGridField::encode_into(const Vec3& grid_pos, HashQueryCache& cache) const {
  const int f = config_.features_per_level;
  cache.grid_pos = grid_pos;
  cache.cell.resize(config_.levels);
  cache.frac.resize(config_.levels);
  cache.feat.assign(config_.feature_dim(), 0.0);

  const auto values = params_.values();
  for (int l = 0; l < config_.levels; ++l) {
    const double res = resolutions_[l];
    double g[3] = {grid_pos.x() * res, grid_pos.y() * res, grid_pos.z() * res};
    for (int a = 0; a < 3; ++a) {
      const double cell = std::floor(g[a]);
      cache.cell[l][a] = static_cast<int>(cell);
      cache.frac[l][a] = g[a] - cell;
    }
    const int cx = cache.cell[l][0], cy = cache.cell[l][1], cz = cache.cell[l][2];
    const double fx = cache.frac[l][0], fy = cache.frac[l][1], fz = cache.frac[l][2];
    const double wx[2] = {1.0 - fx, fx}, wy[2] = {1.0 - fy, fy}, wz[2] = {1.0 - fz, fz};
    double* out = cache.feat.data() + static_cast<size_t>(l) * f;
    const double* table = values.data() + offsets_.hash[l];
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int c = 0; c < 2; ++c) {
          const double w = wx[a] * wy[b] * wz[c];
          if (w == 0.0) continue;
          const double* entry =
              table + static_cast<size_t>(corner_hash(cx + a, cy + b, cz + c)) * f;
          for (int k = 0; k < f; ++k) out[k] += w * entry[k];
        }
  }
}

std::vector<double> HashGridField::hash_encode(const Vec3& grid_pos) const {
  Vec3 q = grid_pos;
  q.x() = std::clamp(q.x(), 0.0, 1.0);
  q.y() = std::clamp(q.y(), 0.0, 1.0);
  q.z() = std::clamp(q.z(), 0.0, 1.0);
  thread_local HashQueryCache scratch;
  encode_into(q, scratch);
  return scratch.feat;
}

void HashGridField::forward_from_cache(const Vec3& direction, HashQueryCache& cache) const {
  const int fin = config_.feature_dim();
  const int h = config_.hidden_width;
  const int s = sh_terms(config_.sh_degree);
  const auto values = params_.values();

  // Density decoder.
  cache.dz1.resize(h);
  cache.dh1.resize(h);
  affine(values.data() + offsets_.density_w1, values.data() + offsets_.density_b1,
         cache.feat.data(), h, fin, cache.dz1.data());
  for (int i = 0; i < h; ++i) {
    double value, deriv;
    softplus_pair(cache.dz1[i], value, deriv);
    cache.dh1[i] = value;
    cache.dz1[i] = deriv;  // keep only the derivative; the value lives in dh1
  }
  const double* w2 = values.data() + offsets_.density_w2;
  double d_raw = values[offsets_.density_b2];
  for (int i = 0; i < h; ++i) d_raw += w2[i] * cache.dh1[i];
  cache.d_raw = d_raw;
  double sigma, sigma_deriv;
  softplus_pair(d_raw, sigma, sigma_deriv);
  cache.value.sigma = sigma;

  // Color decoder on [features, sh(direction)].
  cache.sh.resize(s);
  sh_basis(config_.sh_degree, direction, cache.sh.data());
  cache.c_in.resize(fin + s);
  std::copy(cache.feat.begin(), cache.feat.end(), cache.c_in.begin());
  std::copy(cache.sh.begin(), cache.sh.end(), cache.c_in.begin() + fin);

  cache.cs1.resize(h);
  cache.cg1.resize(h);
  affine(values.data() + offsets_.color_w1, values.data() + offsets_.color_b1,
         cache.c_in.data(), h, fin + s, cache.cs1.data());
  for (int i = 0; i < h; ++i) {
    double value, deriv;
    softplus_pair(cache.cs1[i], value, deriv);
    cache.cg1[i] = value;
    cache.cs1[i] = deriv;
  }
  cache.cs2.resize(h);
  cache.cg2.resize(h);
  affine(values.data() + offsets_.color_w2, values.data() + offsets_.color_b2,
         cache.cg1.data(), h, h, cache.cs2.data());
  for (int i = 0; i < h; ++i) {
    double value, deriv;
    softplus_pair(cache.cs2[i], value, deriv);
    cache.cg2[i] = value;
    cache.cs2[i] = deriv;
  }
  affine(values.data() + offsets_.color_w3, values.data() + offsets_.color_b3,
         cache.cg2.data(), 3, h, cache.c_raw.data());
  for (int c = 0; c < 3; ++c) cache.value.color[c] = sigmoid(cache.c_raw[c]);
  cache.valid = true;
}

FieldSample HashGridField::sample_cached(const Vec3& point, const Vec3& direction,
                                         HashQueryCache& cache) const {
  if (!point.allFinite() || !direction.allFinite())
    throw NumericError("hash field: non-finite query");
  encode_into(to_grid(point), cache);
  forward_from_cache(direction, cache);
  return cache.value;
}

FieldSample HashGridField::sample(const Vec3& point, const Vec3& direction) const {
  thread_local HashQueryCache scratch;
  return sample_cached(point, direction, scratch);
}

double HashGridField::density(const Vec3& point) const {
  if (!point.allFinite()) throw NumericError("hash field: non-finite query");
  thread_local HashQueryCache scratch;
  encode_into(to_grid(point), scratch);

  const int fin = config_.feature_dim();
  const int h = config_.hidden_width;
  const auto values = params_.values();
  scratch.dh1.resize(h);
  affine(values.data() + offsets_.density_w1, values.data() + offsets_.density_b1,
         scratch.feat.data(), h, fin, scratch.dh1.data());
  double d_raw = values[offsets_.density_b2];
  const double* w2 = values.data() + offsets_.density_w2;
  for (int i = 0; i < h; ++i) {
    double value, deriv;
    softplus_pair(scratch.dh1[i], value, deriv);
    d_raw += w2[i] * value;
  }
  double sigma, deriv;
  softplus_pair(d_raw, sigma, deriv);
  return sigma;
}

void HashGridField::backward(const HashQueryCache& cache, const SampleGrad& upstream,
                             std::span<double> grads) const {
  if (!cache.valid)
    throw std::logic_error("hash field: backward without a cached forward pass");
  if (grads.size() != params_.size())
    throw std::logic_error("hash field: gradient buffer size mismatch");

  const int fin = config_.feature_dim();
  const int h = config_.hidden_width;
  const int s = sh_terms(config_.sh_degree);
  const int f = config_.features_per_level;
  const auto values = params_.values();

  thread_local std::vector<double> d_feat, buf_a, buf_b;
  d_feat.assign(fin, 0.0);

  // Density path.
  if (upstream.d_sigma != 0.0) {
    double sp, sigma_deriv;
    softplus_pair(cache.d_raw, sp, sigma_deriv);
    const double d_raw = upstream.d_sigma * sigma_deriv;
    grads[offsets_.density_b2] += d_raw;
    const double* w2 = values.data() + offsets_.density_w2;
    buf_a.resize(h);  // d z1
    for (int i = 0; i < h; ++i) {
      grads[offsets_.density_w2 + i] += d_raw * cache.dh1[i];
      buf_a[i] = d_raw * w2[i] * cache.dz1[i];
    }
    for (int i = 0; i < h; ++i) {
      const double dz = buf_a[i];
      if (dz == 0.0) continue;
      grads[offsets_.density_b1 + i] += dz;
      double* wrow = grads.data() + offsets_.density_w1 + static_cast<size_t>(i) * fin;
      const double* vrow =
          values.data() + offsets_.density_w1 + static_cast<size_t>(i) * fin;
      for (int k = 0; k < fin; ++k) {
        wrow[k] += dz * cache.feat[k];
        d_feat[k] += dz * vrow[k];
      }
    }
  }

  // Color path.
  if (upstream.d_color != Vec3::Zero()) {
    double d_u3[3];
    for (int c = 0; c < 3; ++c) {
      const double y = cache.value.color[c];
      d_u3[c] = upstream.d_color[c] * y * (1.0 - y);
    }
    buf_a.assign(h, 0.0);  // d g2
    for (int c = 0; c < 3; ++c) {
      if (d_u3[c] == 0.0) continue;
      grads[offsets_.color_b3 + c] += d_u3[c];
      double* wrow = grads.data() + offsets_.color_w3 + static_cast<size_t>(c) * h;
      const double* vrow = values.data() + offsets_.color_w3 + static_cast<size_t>(c) * h;
      for (int i = 0; i < h; ++i) {
        wrow[i] += d_u3[c] * cache.cg2[i];
        buf_a[i] += d_u3[c] * vrow[i];
      }
    }
    buf_b.assign(h, 0.0);  // d g1
    for (int i = 0; i < h; ++i) {
      const double du2 = buf_a[i] * cache.cs2[i];
      if (du2 == 0.0) continue;
      grads[offsets_.color_b2 + i] += du2;
      double* wrow = grads.data() + offsets_.color_w2 + static_cast<size_t>(i) * h;
      const double* vrow = values.data() + offsets_.color_w2 + static_cast<size_t>(i) * h;
      for (int k = 0; k < h; ++k) {
        wrow[k] += du2 * cache.cg1[k];
        buf_b[k] += du2 * vrow[k];
      }
    }
    for (int i = 0; i < h; ++i) {
      const double du1 = buf_b[i] * cache.cs1[i];
      if (du1 == 0.0) continue;
      grads[offsets_.color_b1 + i] += du1;
      double* wrow = grads.data() + offsets_.color_w1 + static_cast<size_t>(i) * (fin + s);
      const double* vrow =
          values.data() + offsets_.color_w1 + static_cast<size_t>(i) * (fin + s);
      for (int k = 0; k < fin + s; ++k) wrow[k] += du1 * cache.c_in[k];
      for (int k = 0; k < fin; ++k) d_feat[k] += du1 * vrow[k];
      // The SH inputs carry no learnable parameters upstream.
    }
  }

  // Scatter feature gradients back into the hash tables with the trilinear
  // weights recorded at forward time.
  for (int l = 0; l < config_.levels; ++l) {
    const double* df = d_feat.data() + static_cast<size_t>(l) * f;
    bool any = false;
    for (int k = 0; k < f; ++k) any |= df[k] != 0.0;
    if (!any) continue;
    const int cx = cache.cell[l][0], cy = cache.cell[l][1], cz = cache.cell[l][2];
    const double fx = cache.frac[l][0], fy = cache.frac[l][1], fz = cache.frac[l][2];
    const double wx[2] = {1.0 - fx, fx}, wy[2] = {1.0 - fy, fy}, wz[2] = {1.0 - fz, fz};
    double* table = grads.data() + offsets_.hash[l];
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int c = 0; c < 2; ++c) {
          const double w = wx[a] * wy[b] * wz[c];
          if (w == 0.0) continue;
          double* entry =
              table + static_cast<size_t>(corner_hash(cx + a, cy + b, cz + c)) * f;
          for (int k = 0; k < f; ++k) entry[k] += w * df[k];
        }
  }
}

void HashGridField::backward(const HashQueryCache& cache, const SampleGrad& upstream) {
  backward(cache, upstream, params_.grads());
}

}  // namespace visnerf
