#pragma once

#include "hopfdeg/geometry.hpp"
#include "hopfdeg/sphere_map.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>

namespace hopfdeg {

enum class SeminormDomain { Sphere, Euclidean };
enum class Metric { Chordal, Geodesic };

struct SeminormSpec {
  double s = 0.5;
  double p = 2.0;
  SeminormDomain domain = SeminormDomain::Sphere;
  int dim = 1;
  Metric metric = Metric::Chordal;

  // p = m / s.
  static SeminormSpec critical(int m, double s, SeminormDomain domain = SeminormDomain::Sphere);
  bool is_critical() const;
  void validate() const;
};

struct SeminormEstimate {
  double value = 0.0;    // [f]_{W^{s,p}}
  double p_power = 0.0;  // [f]^p
  std::string method;    // "full-pair-sum", "monte-carlo", "gradient-energy"
  std::size_t samples = 0;
  double std_error = 0.0;          // of value (delta method)
  double p_power_std_error = 0.0;  // of p_power

  nlohmann::json to_json() const;
};

// p-th root of sum_{i != j} w_i w_j |f_i - f_j|^p / |x_i - x_j|^{m+sp} over
// pairs at distance >= h_mesh / 2, summed in a canonical node order. On the
// uniform circle rule the excluded diagonal is restored by the
// zeta-function correction -2 zeta(1 - p(1-s)) h^{p(1-s)} |f'(x_i)|^p; on
// other rules by the linearized integral over the excluded ball.
SeminormEstimate fractional_seminorm(const SphereMap& f, const SeminormSpec& spec,
                                     const QuadratureRule& rule);

// Importance-sampled Monte Carlo estimate of [f]^p on S^m. x is uniform; y is
// drawn at geodesic distance r = pi U^{1/a}, a = p(1 - s), in a uniform
// direction, which keeps the weighted integrand bounded.
SeminormEstimate fractional_seminorm_mc(const SphereMap& f, const SeminormSpec& spec,
                                        std::uint64_t seed, std::size_t samples);

struct EuclideanSampling {
  enum class Kind { WholeSpace, PeriodicCell };
  Kind kind = Kind::WholeSpace;
  // WholeSpace: x = scale * Upsilon^{-1}(uniform point on S^m).
  double scale = 1.0;
  // PeriodicCell: x uniform in [cell_lo, cell_hi)^m, v over all of R^m.
  double cell_lo = 0.0;
  double cell_hi = 2.0 * kPi;
  // Offsets v = r u with density ~ r^{a-1} below r0 and ~ r^{-1-sp} above.
  double r0 = 1.0;
};

SeminormEstimate fractional_seminorm_mc(const EuclideanMap& f, const SeminormSpec& spec,
                                        const EuclideanSampling& sampling, std::uint64_t seed,
                                        std::size_t samples);

// sum_i w_i |Df(x_i)|_F^p.
double gradient_energy(const SphereMap& f, double p, const QuadratureRule& rule);
// Monte Carlo version with uniform nodes on S^m.
SeminormEstimate gradient_energy_mc(const SphereMap& f, double p, std::uint64_t seed, std::size_t samples);
// s = 1 endpoint: (integral |Df|^p)^{1/p}.
SeminormEstimate sobolev_seminorm_s1(const SphereMap& f, double p, const QuadratureRule& rule);

// Max over nodes of the operator norm of the numerical Jacobian.
double lipschitz_norm(const SphereMap& f, const QuadratureRule& rule);

struct GnRatio {
  bool applicable = false;
  double ratio = 0.0;
  double seminorm_power = 0.0;  // [f]_{W^{s,n/s}}^{n/s}
  double sup_norm = 0.0;
  double energy = 0.0;  // integral |Df|^n
};

// [f]_{W^{s,n/s}}^{n/s} / (||f||_inf^{n/s - n} integral |Df|^n); not applicable
// for constant maps.
GnRatio gagliardo_nirenberg_ratio(const SphereMap& f, double s, const QuadratureRule& rule);

}  // namespace hopfdeg
