#pragma once

#include "hopfdeg/geometry.hpp"
#include "hopfdeg/sphere_map.hpp"

#include <json.hpp>

#include <vector>

namespace hopfdeg {

// Odd polynomial q on [0, 1] with q(0) = 0, q(1) = 1, q'(1) = q''(1) = 0 and
// q'(0) = slope. slope = 15/8 gives the quintic (15t - 10t^3 + 3t^5)/8; any
// slope in [1, 15/8] keeps q strictly increasing.
double flat_profile(double t, double slope);
double flat_profile_derivative(double t, double slope);
inline constexpr double kQuinticSlope = 15.0 / 8.0;

struct BubbleParams {
  int n = 0;
  int d = 0;
  std::vector<Vec> centers;
  double radius = 0.0;  // geodesic
  Vec basepoint;        // b, the value outside all bubbles
  int orientation = 1;  // degree of each bubble
  // radius * |d|^{1/n}; bounded in d by construction.
  double packing_constant = 0.0;
  double profile_slope = kQuinticSlope;
};

// Smallest admissible bubble radius; layouts below it are rejected.
inline constexpr double kMinBubbleRadius = 1e-3;

// Centers spread over the whole sphere (uniform angles on S^1, Fibonacci
// lattice on S^2, greedy farthest-point on S^3), radius = 0.4 x the minimum
// pairwise geodesic distance (pi for a single center).
BubbleParams bubble_layout(int n, int d, double profile_slope = kQuinticSlope);
// k centers inside the cap of geodesic radius cap_angle around the north
// pole of S^n, bubbles contained in the cap.
BubbleParams cap_bubble_layout(int n, int k, double cap_angle);

SphereMap bubble_map(int n, int d);
SphereMap bubble_map(const BubbleParams& params);

struct WhiteheadParams {
  int n = 1;
  int k = 1;
  BubbleParams inner;  // on S^{2n}, inside the northern hemisphere
  Vec basepoint;       // a_*
  // Largest |y| on which the inner map g differs from a_*.
  double inner_support = 1.0;
};

WhiteheadParams whitehead_params(int n, int k);
// g = (inner bubble map) o Upsilon : R^{2n} -> S^{2n}; g = a_* outside B^{2n}.
EuclideanMap whitehead_inner_map(const WhiteheadParams& params);

// f = g(sqrt2 x_+) where |x_+| < |x_-|, g(sqrt2 x_-) where |x_-| < |x_+|,
// a_* on the Clifford torus.
SphereMap whitehead_map(int n, int k);
SphereMap whitehead_map(const WhiteheadParams& params);
// Only the x_+ branch; Hopf invariant 0.
SphereMap whitehead_half_map(int n, int k);
// whitehead_map precomposed with a rotation taking the south pole onto the
// Clifford torus, so f is constantly a_* near the south pole.
SphereMap whitehead_map_pole_on_torus(int n, int k);

// Default cap radius for the capped Hopf map, 0.9 x the default box L = 6.
inline constexpr double kDefaultCapRadius = 5.4;

// h(z1, z2) = (2 z1 conj(z2), |z1|^2 - |z2|^2) with z1 = p0 + i p1, z2 = p2 + i p3.
SphereMap hopf_fibration(bool capped, double cap_radius = kDefaultCapRadius);
// f o tau_R where tau_R(Upsilon(x)) = exp_N(pi q(|x|/R) x/|x|) for |x| < R and
// the south pole otherwise: a degree-one self-map of S^m, so the Hopf
// invariant is unchanged and f o tau_R o Upsilon is constant for |x| >= R.
SphereMap cap_at_pole(const SphereMap& f, double radius);
// h composed with a degree-k bubble map of S^3; Hopf invariant k.
SphereMap hopf_bubble_map(int k);

SphereMap identity_map(int m);
SphereMap constant_map(int m, const Vec& value);
SphereMap scale_map(const SphereMap& f, double lambda);
SphereMap rotate_domain(const SphereMap& f, const Mat& q);
SphereMap rotate_target(const SphereMap& f, const Mat& q);

EuclideanMap compose_with_stereographic(const SphereMap& f);

// Builds a map from {"family": ..., "params": {...}}; unknown keys rejected.
SphereMap make_map(const nlohmann::json& spec);

}  // namespace hopfdeg
