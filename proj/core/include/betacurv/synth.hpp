#pragma once

#include <cstdint>

#include "betacurv/measure.hpp"

namespace betacurv {

// Deterministic sample measures. Everything that needs randomness takes an
// explicit seed; the rest is reproducible by construction. The flat
// generators (segment, plane grid) place atoms with exactly zero off-plane
// coordinates so flatness-sensitive functionals vanish identically on them.

struct SegmentSpec {
  double length = 1.0;
  int count = 50;
  int ambient_dim = 2;  // atoms along the first axis
};

struct CircleSpec {
  double radius = 1.0;
  int count = 100;  // ambient dimension 2
};

struct PlaneGridSpec {
  double side = 1.0;
  int per_side = 8;     // per_side^2 atoms in the xy-plane
  int ambient_dim = 3;
};

struct SphereSpec {
  double radius = 1.0;
  int count = 200;  // Fibonacci lattice on the sphere, ambient dimension 3
};

struct RandomCloudSpec {
  int ambient_dim = 2;
  int count = 10;
  double box_halfwidth = 1.5;  // coordinates uniform in [-h, h]
  double weight_lo = 0.0;      // weights uniform in (weight_lo, weight_hi]
  double weight_hi = 2.0;
};

PointCloudMeasure synthesize_segment(const SegmentSpec& spec);
PointCloudMeasure synthesize_circle(const CircleSpec& spec);
PointCloudMeasure synthesize_plane_grid(const PlaneGridSpec& spec);
PointCloudMeasure synthesize_sphere(const SphereSpec& spec);
PointCloudMeasure synthesize_random_cloud(const RandomCloudSpec& spec, std::uint64_t seed);

// Unit atoms at (0,0), (1,0), (0,1); the standard three-point example.
PointCloudMeasure make_triangle();

// Displace every atom by an isotropic perturbation of magnitude at most
// `amplitude` (uniform in [0, amplitude), direction uniform on the sphere).
// amplitude 0 returns the measure unchanged.
PointCloudMeasure add_isotropic_noise(const PointCloudMeasure& mu, double amplitude,
                                      std::uint64_t seed);

}  // namespace betacurv
