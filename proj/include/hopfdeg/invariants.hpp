#pragma once

#include "hopfdeg/geometry.hpp"
#include "hopfdeg/potentials.hpp"
#include "hopfdeg/sphere_map.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace hopfdeg {

struct InvariantResult {
  double raw = 0.0;
  long rounded = 0;
  double residual = 0.0;  // |raw - rounded|
  bool conclusive = false;
  std::string method;
  nlohmann::json params;       // discretization parameters
  nlohmann::json diagnostics;  // method-specific extras

  // Sets rounded/residual/conclusive from raw (conclusive iff residual < 0.5).
  void finalize();
  nlohmann::json to_json() const;
};

// ---- Brouwer degree ----

// sum_i w_i (f^* omega)(x_i) for the normalized volume form of S^n, with the
// differential taken by geodesic central differences.
InvariantResult brouwer_degree_integral(const SphereMap& f, const QuadratureRule& rule);

// sum_i w_i (f^* w)(x_i) for a volume-form extension w on R^{n+1}; f need
// not be sphere-valued.
double pullback_integral(const SphereMap& f, const QuadratureRule& rule, const VolumeFormExtension& omega);

struct CountOptions {
  int resolution = 0;           // scan rule resolution; 0 picks one from the map's Lipschitz hint
  double scan_radius = 0.5;     // chordal |f(x) - y| below which a node seeds Newton
  double det_tolerance = 1e-6;  // preimages with |det| below this make y non-regular
  double dedupe = 1e-6;         // geodesic distance merging Newton limits
};

// Signed preimage count. Throws ErrorCode::NotRegular when a located preimage
// is (numerically) critical, or when Newton fails to converge from a seed.
InvariantResult brouwer_degree_count(const SphereMap& f, const UnitVector& y, const CountOptions& options = {});
// Tries quasi-random values until one is regular.
InvariantResult brouwer_degree_count_auto(const SphereMap& f, std::uint64_t seed = 1,
                                          const CountOptions& options = {});

// Node count per axis that resolves a map with the given Lipschitz bound.
int degree_resolution(const SphereMap& f, int n);

// ---- Hopf invariant ----

struct HopfGrid {
  double half_width = 6.0;  // L
  int n = 96;               // N
  Stencil stencil = Stencil::Spectral;
  VolumeFormKind form = VolumeFormKind::Homogeneous;
  // The map is precomposed with the degree-one capping map of this chart
  // radius unless it is already constant outside it; 0 means 0.9 L.
  double cap_radius = 0.0;
  double fd_step = 1e-4;
  // Constant added to every component of theta before d*; the result must not
  // depend on it.
  double theta_offset = 0.0;

  double effective_cap_radius() const { return cap_radius > 0.0 ? cap_radius : 0.9 * half_width; }
  nlohmann::json to_json() const;
};

// The map actually sampled in the chart: f itself when f o Upsilon is already
// constant outside the cap radius, otherwise cap_at_pole(f, R).
SphereMap hopf_chart_map(const SphereMap& f, const HopfGrid& grid, bool* capped = nullptr, bool* rotated = nullptr);

// F = (f o Upsilon)^* omega on the periodic-tagged grid. Throws
// SupportViolation (with the outer-shell mass in the message) when F does not
// vanish near the box boundary.
GridField hopf_pullback_field(const SphereMap& f, const HopfGrid& grid);

// theta = Newton potential of F, eta = d* theta, raw = integral eta ^ F.
InvariantResult hopf_invariant_whitehead(const SphereMap& f, const HopfGrid& grid = {});

struct FiberCurve {
  std::vector<Vec> vertices;  // closed: first == last
  Vec value;                  // the regular value p
  double max_value_error = 0.0;
  int refinement_steps = 0;
};

struct LinkingOptions {
  double min_separation_cells = 2.0;
  int newton_steps = 3;  // per-vertex projection onto the level set
};

// Components of (f o Upsilon)^{-1}(p), oriented by grad u x grad v for the
// coordinates (u, v) = (G.e1, G.e2) in a positive frame at p. Throws
// Inconclusive on open curves or branching.
std::vector<FiberCurve> extract_fiber(const SphereMap& f, const UnitVector& p, const HopfGrid& grid,
                                      const LinkingOptions& options = {});

// Exact linking number of two closed polylines via per-segment-pair solid angles.
double gauss_linking_number(const std::vector<Vec>& a, const std::vector<Vec>& b);
double gauss_linking_number(const std::vector<FiberCurve>& a, const std::vector<FiberCurve>& b);

InvariantResult hopf_invariant_linking(const SphereMap& f, const UnitVector& p, const UnitVector& q,
                                       const HopfGrid& grid = {}, const LinkingOptions& options = {});
// Quasi-random pairs (p, q) away from the value at the chart pole; the first
// pair giving conclusive, well-separated fibers wins.
InvariantResult hopf_invariant_linking_auto(const SphereMap& f, const HopfGrid& grid = {},
                                            std::uint64_t seed = 1, const LinkingOptions& options = {},
                                            int attempts = 12);

// |integral (eta + a dphi) ^ F - integral eta ^ F| for a random compactly
// supported 0-form phi, with dphi evaluated in closed form.
double whitehead_integrand_check(const SphereMap& f, const HopfGrid& grid, double amplitude,
                                 std::uint64_t seed = 1);

}  // namespace hopfdeg
