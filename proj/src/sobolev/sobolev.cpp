#include "hopfdeg/sobolev.hpp"

#include "hopfdeg/parallel.hpp"
#include "hopfdeg/rng.hpp"

#include <boost/math/special_functions/zeta.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace hopfdeg {

SeminormSpec SeminormSpec::critical(int m, double s, SeminormDomain domain) {
  SeminormSpec spec;
  spec.s = s;
  spec.p = m / s;
  spec.dim = m;
  spec.domain = domain;
  return spec;
}

bool SeminormSpec::is_critical() const { return std::abs(p * s - dim) < 1e-12 * dim; }

void SeminormSpec::validate() const {
  require(s > 0.0 && s <= 1.0, ErrorCode::InvalidArgument, "seminorm order s must lie in (0, 1]");
  require(p > 1.0, ErrorCode::InvalidArgument, "seminorm exponent p must exceed 1");
  require(dim >= 1, ErrorCode::InvalidArgument, "seminorm dimension must be positive");
}

nlohmann::json SeminormEstimate::to_json() const {
  return {{"value", value},         {"p_power", p_power},
          {"method", method},       {"samples", samples},
          {"std_error", std_error}, {"p_power_std_error", p_power_std_error}};
}

namespace {

constexpr std::size_t kPairChunk = 64;
constexpr std::size_t kMcChunk = 4096;

// Weighted p-th power of the difference quotient, computed in log space.
inline double kernel_term(double df2, double dist2, double half_p, double half_q) {
  if (df2 == 0.0) return 0.0;
  return std::exp(half_p * std::log(df2) - half_q * std::log(dist2));
}

// Directions and weights on S^{m-1} for the local diagonal term, stored as
// consecutive (direction, {weight}) pairs.
std::vector<Vec> unit_directions(int m) {
  std::vector<Vec> out;
  if (m == 2) {
    constexpr int kDirs = 128;
    for (int k = 0; k < kDirs; ++k) {
      Vec u(2), wt(1);
      u << std::cos(2.0 * kPi * k / kDirs), std::sin(2.0 * kPi * k / kDirs);
      wt << 2.0 * kPi / kDirs;
      out.push_back(u);
      out.push_back(wt);
    }
  } else {
    const QuadratureRule q = make_quadrature(m - 1, m - 1 == 1 ? 128 : 24);
    for (std::size_t k = 0; k < q.size(); ++k) {
      Vec wt(1);
      wt << q.weights[k];
      out.push_back(q.nodes[k]);
      out.push_back(wt);
    }
  }
  return out;
}

SeminormEstimate finish(double p_power, double p_power_se, double p, const char* method,
                        std::size_t samples) {
  SeminormEstimate e;
  e.p_power = std::max(0.0, p_power);
  e.value = std::pow(e.p_power, 1.0 / p);
  e.method = method;
  e.samples = samples;
  e.p_power_std_error = p_power_se;
  e.std_error = e.p_power > 0.0 ? p_power_se * e.value / (p * e.p_power) : 0.0;
  return e;
}

}  // namespace

SeminormEstimate fractional_seminorm(const SphereMap& f, const SeminormSpec& spec,
                                     const QuadratureRule& rule) {
  spec.validate();
  require(spec.s < 1.0, ErrorCode::InvalidArgument,
          "fractional_seminorm needs s < 1; use sobolev_seminorm_s1 for s = 1");
  require(spec.domain == SeminormDomain::Sphere && spec.dim == rule.dim && f.source_dim() == rule.dim,
          ErrorCode::DimensionMismatch, "seminorm spec, rule and map must live on the same sphere");
  const std::size_t n = rule.size();
  const int m = rule.dim;

  // Canonical node order makes the sum independent of how the rule is listed.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const Vec& x = rule.nodes[a];
    const Vec& y = rule.nodes[b];
    for (int i = 0; i <= m; ++i) {
      if (x[i] != y[i]) return x[i] < y[i];
    }
    return rule.weights[a] < rule.weights[b];
  });
  std::vector<Vec> x(n), fx(n);
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = rule.nodes[order[i]];
    w[i] = rule.weights[order[i]];
  }
  parallel_for(n, [&](std::size_t i) { fx[i] = f(x[i]); });

  const double half_p = 0.5 * spec.p;
  const double half_q = 0.5 * (m + spec.s * spec.p);
  const double min_dist = 0.5 * rule.mesh_width;
  const bool geodesic = spec.metric == Metric::Geodesic;

  const double pair_sum = chunked_sum(n, kPairChunk, [&](std::size_t i) {
    double acc = 0.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double df2 = (fx[i] - fx[j]).squaredNorm();
      if (df2 == 0.0) continue;
      double d2 = (x[i] - x[j]).squaredNorm();
      if (geodesic) {
        const double g = geodesic_distance(x[i], x[j]);
        d2 = g * g;
      }
      if (d2 < min_dist * min_dist) continue;
      acc += w[j] * kernel_term(df2, d2, half_p, half_q);
    }
    return 2.0 * w[i] * acc;
  });

  double total = pair_sum;
  const double gamma = spec.p * (1.0 - spec.s);
  if (rule.uniform_circle) {
    const double h = 2.0 * kPi / static_cast<double>(n);
    const double coef = -2.0 * boost::math::zeta(1.0 - gamma) * std::pow(h, gamma);
    total += chunked_sum(n, kPairChunk, [&](std::size_t i) {
      const Mat j = numerical_jacobian(f, x[i]);
      const double d = j.col(0).norm();
      return d == 0.0 ? 0.0 : w[i] * coef * std::pow(d, spec.p);
    });
  } else {
    // Excluded ball of radius min_dist around each node, with f replaced by
    // its linearization: rho^gamma / gamma * integral over unit u of |Df u|^p.
    const std::vector<Vec> dirs = unit_directions(m);
    const double coef = std::pow(min_dist, gamma) / gamma;
    total += chunked_sum(n, kPairChunk, [&](std::size_t i) {
      const Mat j = numerical_jacobian(f, x[i]);
      double a = 0.0;
      for (std::size_t k = 0; k + 1 < dirs.size(); k += 2) a += dirs[k + 1][0] * std::pow((j * dirs[k]).norm(), spec.p);
      return w[i] * coef * a;
    });
  }
  return finish(total, 0.0, spec.p, "full-pair-sum", n);
}

namespace {

// Uniform point on S^m.
Vec uniform_sphere(Rng& rng, int m) {
  Vec v(m + 1);
  double n2 = 0.0;
  do {
    for (int i = 0; i <= m; ++i) v[i] = rng.normal();
    n2 = v.squaredNorm();
  } while (n2 < 1e-20);
  return v / std::sqrt(n2);
}

// Uniform unit vector in the tangent space at p.
Vec uniform_tangent(Rng& rng, const Vec& p) {
  for (;;) {
    Vec v(p.size());
    for (int i = 0; i < p.size(); ++i) v[i] = rng.normal();
    v -= v.dot(p) * p;
    const double n = v.norm();
    if (n > 1e-10) return v / n;
  }
}

struct Moments {
  double sum = 0.0;
  double sum2 = 0.0;
};

// Runs `draw` once per sample with a per-chunk generator and combines chunk
// moments in order, so the result does not depend on the thread count.
template <class Draw>
std::pair<double, double> mc_mean_se(std::uint64_t seed, std::size_t samples, Draw&& draw) {
  const std::size_t nchunks = (samples + kMcChunk - 1) / kMcChunk;
  std::vector<Moments> parts(nchunks);
  parallel_chunks(samples, kMcChunk, [&](std::size_t b, std::size_t e, std::size_t c) {
    Rng rng(seed, c);
    Moments mo;
    for (std::size_t i = b; i < e; ++i) {
      const double z = draw(rng);
      mo.sum += z;
      mo.sum2 += z * z;
    }
    parts[c] = mo;
  });
  Moments total;
  for (const auto& mo : parts) {
    total.sum += mo.sum;
    total.sum2 += mo.sum2;
  }
  const double nn = static_cast<double>(samples);
  const double mean = total.sum / nn;
  const double var = std::max(0.0, total.sum2 / nn - mean * mean);
  return {mean, std::sqrt(var / std::max(1.0, nn - 1.0))};
}

}  // namespace

SeminormEstimate fractional_seminorm_mc(const SphereMap& f, const SeminormSpec& spec,
                                        std::uint64_t seed, std::size_t samples) {
  spec.validate();
  require(spec.s < 1.0, ErrorCode::InvalidArgument, "Monte Carlo seminorm needs s < 1");
  require(spec.domain == SeminormDomain::Sphere && spec.dim == f.source_dim(),
          ErrorCode::DimensionMismatch, "seminorm spec does not match the map's source sphere");
  require(samples >= 10000, ErrorCode::InvalidArgument, "Monte Carlo seminorm needs at least 1e4 samples");
  const int m = spec.dim;
  const double a = std::max(0.05, spec.p * (1.0 - spec.s));
  const double area = sphere_area(m);
  const double area_dir = m == 1 ? 2.0 : sphere_area(m - 1);
  const double q = m + spec.s * spec.p;
  const bool geodesic = spec.metric == Metric::Geodesic;
  auto [mean, se] = mc_mean_se(seed, samples, [&](Rng& rng) {
    const Vec x = uniform_sphere(rng, m);
    const double r = kPi * std::pow(rng.uniform_open0(), 1.0 / a);
    const Vec u = uniform_tangent(rng, x);
    const Vec y = std::cos(r) * x + std::sin(r) * u;
    const double df2 = (f(x) - f(y)).squaredNorm();
    if (df2 == 0.0) return 0.0;
    const double dist = geodesic ? r : 2.0 * std::sin(0.5 * r);
    const double density_r = a * std::pow(r, a - 1.0) / std::pow(kPi, a);
    const double jac = std::pow(std::sin(r), m - 1);
    return area * area_dir * jac * std::pow(df2, 0.5 * spec.p) / (std::pow(dist, q) * density_r);
  });
  return finish(mean, se, spec.p, "monte-carlo", samples);
}

SeminormEstimate fractional_seminorm_mc(const EuclideanMap& f, const SeminormSpec& spec,
                                        const EuclideanSampling& sampling, std::uint64_t seed,
                                        std::size_t samples) {
  spec.validate();
  require(spec.s < 1.0, ErrorCode::InvalidArgument, "Monte Carlo seminorm needs s < 1");
  require(spec.domain == SeminormDomain::Euclidean && spec.dim == f.dim(), ErrorCode::DimensionMismatch,
          "seminorm spec does not match the map's domain");
  require(samples >= 10000, ErrorCode::InvalidArgument, "Monte Carlo seminorm needs at least 1e4 samples");
  const int m = spec.dim;
  const double a = std::max(0.05, spec.p * (1.0 - spec.s));
  const double b = spec.s * spec.p;
  const double r0 = sampling.r0;
  const double area_dir = m == 1 ? 2.0 : sphere_area(m - 1);
  const double sphere_m = sphere_area(m);
  const double cell_len = sampling.cell_hi - sampling.cell_lo;
  const double cell_vol = std::pow(cell_len, m);
  const bool periodic = sampling.kind == EuclideanSampling::Kind::PeriodicCell;

  auto [mean, se] = mc_mean_se(seed, samples, [&](Rng& rng) {
    Vec x(m);
    double inv_density_x = 0.0;
    if (periodic) {
      for (int i = 0; i < m; ++i) x[i] = sampling.cell_lo + cell_len * rng.uniform();
      inv_density_x = cell_vol;
    } else {
      Vec p = uniform_sphere(rng, m);
      while (p[m] < -1.0 + 1e-12) p = uniform_sphere(rng, m);
      x = sampling.scale * (p.head(m) / (1.0 + p[m]));
      // Density of x: c^{-m} (2 / (1 + |x/c|^2))^m / |S^m|.
      const double lam = 2.0 / (1.0 + (x / sampling.scale).squaredNorm());
      inv_density_x = sphere_m * std::pow(sampling.scale, m) / std::pow(lam, m);
    }
    double r = 0.0;
    if (rng.uniform() < 0.5) {
      r = r0 * std::pow(rng.uniform_open0(), 1.0 / a);
    } else {
      r = r0 * std::pow(rng.uniform_open0(), -1.0 / b);
    }
    const double density_r = r < r0 ? 0.5 * a * std::pow(r / r0, a - 1.0) / r0
                                    : 0.5 * b * std::pow(r0 / r, b) / r;
    Vec u(m);
    for (int i = 0; i < m; ++i) u[i] = rng.normal();
    u /= u.norm();
    const Vec y = x + r * u;
    const double df2 = (f(x) - f(y)).squaredNorm();
    if (df2 == 0.0) return 0.0;
    return inv_density_x * area_dir * std::pow(df2, 0.5 * spec.p) * std::pow(r, -1.0 - b) / density_r;
  });
  return finish(mean, se, spec.p, "monte-carlo", samples);
}

double gradient_energy(const SphereMap& f, double p, const QuadratureRule& rule) {
  require(f.source_dim() == rule.dim, ErrorCode::DimensionMismatch, "rule and map spheres differ");
  return chunked_sum(rule.size(), kPairChunk, [&](std::size_t i) {
    const double nf = numerical_jacobian(f, rule.nodes[i]).norm();
    return nf == 0.0 ? 0.0 : rule.weights[i] * std::pow(nf, p);
  });
}

SeminormEstimate gradient_energy_mc(const SphereMap& f, double p, std::uint64_t seed, std::size_t samples) {
  require(samples >= 10000, ErrorCode::InvalidArgument, "Monte Carlo energy needs at least 1e4 samples");
  const int m = f.source_dim();
  const double area = sphere_area(m);
  auto [mean, se] = mc_mean_se(seed, samples, [&](Rng& rng) {
    const double nf = numerical_jacobian(f, uniform_sphere(rng, m)).norm();
    return nf == 0.0 ? 0.0 : area * std::pow(nf, p);
  });
  return finish(mean, se, p, "gradient-energy-mc", samples);
}

SeminormEstimate sobolev_seminorm_s1(const SphereMap& f, double p, const QuadratureRule& rule) {
  return finish(gradient_energy(f, p, rule), 0.0, p, "gradient-energy", rule.size());
}

double lipschitz_norm(const SphereMap& f, const QuadratureRule& rule) {
  require(f.source_dim() == rule.dim, ErrorCode::DimensionMismatch, "rule and map spheres differ");
  const std::size_t n = rule.size();
  const std::size_t nchunks = (n + kPairChunk - 1) / kPairChunk;
  std::vector<double> part(nchunks, 0.0);
  parallel_chunks(n, kPairChunk, [&](std::size_t b, std::size_t e, std::size_t c) {
    double best = 0.0;
    for (std::size_t i = b; i < e; ++i) {
      best = std::max(best, operator_norm(numerical_jacobian(f, rule.nodes[i])));
    }
    part[c] = best;
  });
  return *std::max_element(part.begin(), part.end());
}

GnRatio gagliardo_nirenberg_ratio(const SphereMap& f, double s, const QuadratureRule& rule) {
  require(s > 0.0 && s < 1.0, ErrorCode::InvalidArgument, "interpolation ratio needs s in (0, 1)");
  const int n = rule.dim;
  GnRatio out;
  double sup = 0.0;
  for (const Vec& x : rule.nodes) sup = std::max(sup, f(x).norm());
  out.sup_norm = sup;
  out.energy = gradient_energy(f, n, rule);
  if (out.energy <= 0.0 || sup <= 0.0) return out;
  const SeminormEstimate sem = fractional_seminorm(f, SeminormSpec::critical(n, s), rule);
  out.seminorm_power = sem.p_power;
  out.ratio = sem.p_power / (std::pow(sup, n / s - n) * out.energy);
  out.applicable = true;
  return out;
}

}  // namespace hopfdeg
