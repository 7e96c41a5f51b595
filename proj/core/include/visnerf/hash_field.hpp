#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "visnerf/field.hpp"
#include "visnerf/geometry.hpp"
#include "visnerf/param_vector.hpp"

namespace visnerf {

struct HashGridConfig {
  int levels = 8;
  int base_resolution = 16;
  double per_level_scale = 1.5;
  int log2_table_size = 15;
  int features_per_level = 2;
  int hidden_width = 64;       // both decoders
  int sh_degree = 3;           // direction encoding for the color decoder
  bool contract_points = true; // apply scene contraction before grid lookup
  double domain_radius = 2.0;  // world half-extent mapped onto [0,1]^3

  int feature_dim() const { return levels * features_per_level; }
  uint32_t table_size() const { return 1u << log2_table_size; }
};

/// Per-query forward state kept for the backward pass. Reusable: repeated
/// calls to sample_cached on the same object do not allocate.
struct HashQueryCache {
  bool valid = false;
  Vec3 grid_pos = Vec3::Zero();
  std::vector<std::array<int, 3>> cell;   // per level: base corner
  std::vector<std::array<double, 3>> frac;
  std::vector<double> feat;               // concatenated encoding
  std::vector<double> sh;
  std::vector<double> dz1, dh1;           // density hidden: sigmoid(z), softplus(z)
  double d_raw = 0;                       // pre-softplus density
  std::vector<double> c_in;               // [feat, sh]
  std::vector<double> cs1, cg1, cs2, cg2; // color hidden layers
  std::array<double, 3> c_raw{};          // pre-sigmoid color
  FieldSample value;
};

struct SampleGrad {
  double d_sigma = 0.0;
  Vec3 d_color = Vec3::Zero();
};

/// Learnable radiance field: multiresolution hash encoding feeding two
/// small decoders (one hidden layer for density, two for color, with a
/// spherical-harmonics direction encoding). Activations are softplus in
/// the hidden layers and on the raw density, sigmoid on the raw color, so
/// FieldSample invariants hold by construction and gradients are smooth
/// everywhere. The backward pass is handwritten for this fixed topology.
class HashGridField : public RadianceField {
 public:
  explicit HashGridField(const HashGridConfig& config);

  const HashGridConfig& config() const { return config_; }
  ParamVector& params() { return params_; }
  const ParamVector& params() const { return params_; }

  /// Seeds hash tables with small uniform noise and decoder weights with
  /// Xavier-uniform values.
  void init_params(uint64_t seed);

  FieldSample sample(const Vec3& point, const Vec3& direction) const override;
  double density(const Vec3& point) const override;

  /// Forward pass that records intermediates for backward().
  FieldSample sample_cached(const Vec3& point, const Vec3& direction,
                            HashQueryCache& cache) const;

  /// Accumulates (+=) parameter gradients for one cached query into `grads`
  /// (must have params().size() entries). Throws std::logic_error when the
  /// cache has no recorded forward pass.
  void backward(const HashQueryCache& cache, const SampleGrad& upstream,
                std::span<double> grads) const;
  void backward(const HashQueryCache& cache, const SampleGrad& upstream);

  /// Contraction plus normalization into the grid domain [0,1]^3.
  /// Out-of-domain coordinates are clamped.
  Vec3 to_grid(const Vec3& world) const;

  /// Multiresolution encoding of a grid-domain point (clamped to [0,1]^3):
  /// per level the 8 corner features of the enclosing cell, trilinearly
  /// interpolated and concatenated. Length = feature_dim().
  std::vector<double> hash_encode(const Vec3& grid_pos) const;

  /// Grid cells per axis at one level.
  int level_resolution(int level) const;

  /// Spatial hash of an integer corner, masked to the table size.
  uint32_t corner_hash(int x, int y, int z) const;

  /// Total number of hash-table entries (across levels and features).
  size_t hash_param_count() const;
  /// Offset of the first hash-table parameter (they are stored first).
  size_t hash_param_offset() const { return 0; }

 private:
  struct Layout {
    std::vector<size_t> hash;  // per level
    size_t density_w1, density_b1, density_w2, density_b2;
    size_t color_w1, color_b1, color_w2, color_b2, color_w3, color_b3;
  };

  void encode_into(const Vec3& grid_pos, HashQueryCache& cache) const;
  void forward_from_cache(const Vec3& direction, HashQueryCache& cache) const;

  HashGridConfig config_;
  ParamVector params_;
  Layout offsets_;
  std::vector<int> resolutions_;
};

}  // namespace visnerf
