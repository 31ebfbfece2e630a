#include "hopfdeg/invariants.hpp"
#include "hopfdeg/parallel.hpp"
#include "hopfdeg/rng.hpp"
#include "hopfdeg/sobolev.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hopfdeg {

void InvariantResult::finalize() {
  if (!std::isfinite(raw)) {
    rounded = 0;
    residual = std::numeric_limits<double>::infinity();
    conclusive = false;
    return;
  }
  rounded = std::lround(raw);
  residual = std::abs(raw - static_cast<double>(rounded));
  conclusive = residual < 0.5;
}

nlohmann::json InvariantResult::to_json() const {
  return {{"method", method},       {"raw", raw},           {"rounded", rounded},
          {"residual", residual},   {"conclusive", conclusive}, {"grid", params},
          {"diagnostics", diagnostics}};
}

double pullback_integral(const SphereMap& f, const QuadratureRule& rule, const VolumeFormExtension& omega) {
  require(f.source_dim() == rule.dim && omega.dim() == rule.dim && f.target_dim() == rule.dim + 1,
          ErrorCode::DimensionMismatch, "form, rule and map dimensions differ");
  return chunked_sum(rule.size(), 256, [&](std::size_t i) {
    const Vec& x = rule.nodes[i];
    return rule.weights[i] * omega.evaluate(f(x), numerical_jacobian(f, x));
  });
}

InvariantResult brouwer_degree_integral(const SphereMap& f, const QuadratureRule& rule) {
  const int n = rule.dim;
  require(f.source_dim() == n && f.target_dim() == n + 1, ErrorCode::DimensionMismatch,
          "degree needs a map S^n -> S^n matching the rule");
  require(f.sphere_valued(), ErrorCode::InvalidArgument, "degree needs a sphere-valued map");
  InvariantResult r;
  r.method = "integral";
  r.raw = pullback_integral(f, rule, VolumeFormExtension::homogeneous(n));
  r.finalize();
  r.params = {{"n", n}, {"resolution", rule.resolution}, {"nodes", rule.size()}};
  return r;
}

int degree_resolution(const SphereMap& f, int n) {
  double lip = f.lipschitz_hint().value_or(0.0);
  if (lip <= 0.0) lip = std::max(1.0, lipschitz_norm(f, make_quadrature(n, n == 1 ? 1024 : 48)));
  if (n == 1) return std::max(256, static_cast<int>(std::ceil(2.0 * kPi * lip / 0.05)));
  if (n == 2) return std::max(64, static_cast<int>(std::ceil(kPi * lip / 0.1)));
  return std::max(32, static_cast<int>(std::ceil(kPi * lip / 0.2)));
}

namespace {

struct Root {
  Vec x;
  double det = 0.0;
};

// Newton in the tangent frames: solves T_y^T f(p) = 0 with f(p).y > 0.
bool newton_root(const SphereMap& f, const Vec& y, const Mat& ty, Vec p, Root& out) {
  for (int it = 0; it < 60; ++it) {
    const Vec fp = f(p);
    const Vec r = ty.transpose() * fp;
    const Mat e = tangent_frame(p);
    const Mat j = ty.transpose() * numerical_jacobian(f, p, e);
    if (r.norm() < 1e-12 && fp.dot(y) > 0.0) {
      out.x = p;
      out.det = j.determinant();
      return true;
    }
    if (std::abs(j.determinant()) < 1e-14) return false;
    Vec step = -j.partialPivLu().solve(r);
    const double len = step.norm();
    if (len > 0.25) step *= 0.25 / len;
    p = exp_map(p, e * step);
    p /= p.norm();
  }
  const Vec fp = f(p);
  if ((ty.transpose() * fp).norm() < 1e-9 && fp.dot(y) > 0.0) {
    out.x = p;
    out.det = (ty.transpose() * numerical_jacobian(f, p)).determinant();
    return true;
  }
  return false;
}

}  // namespace

InvariantResult brouwer_degree_count(const SphereMap& f, const UnitVector& yv, const CountOptions& options) {
  const int n = f.source_dim();
  require(f.target_dim() == n + 1 && yv.sphere_dim() == n, ErrorCode::DimensionMismatch,
          "degree count needs a map S^n -> S^n and a value on S^n");
  require(f.sphere_valued(), ErrorCode::InvalidArgument, "degree needs a sphere-valued map");
  const Vec& y = yv.coords();
  const int res = options.resolution > 0 ? options.resolution : degree_resolution(f, n);
  const QuadratureRule rule = make_quadrature(n, res);
  const Mat ty = tangent_frame(y);

  std::vector<std::size_t> seeds;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    if ((f(rule.nodes[i]) - y).norm() < options.scan_radius) seeds.push_back(i);
  }
  std::vector<char> ok(seeds.size(), 0);
  std::vector<Root> found(seeds.size());
  parallel_for(seeds.size(), [&](std::size_t s) {
    ok[s] = newton_root(f, y, ty, rule.nodes[seeds[s]], found[s]) ? 1 : 0;
  }, 16);

  std::vector<Root> roots;
  for (std::size_t s = 0; s < seeds.size(); ++s) {
    require(ok[s], ErrorCode::NotRegular, "Newton did not converge from a scan seed");
    const Root& cand = found[s];
    require(std::abs(cand.det) > options.det_tolerance, ErrorCode::NotRegular,
            "value is not regular: preimage with |det| = " + std::to_string(std::abs(cand.det)));
    bool dup = false;
    for (const Root& r : roots) {
      if (geodesic_distance(r.x, cand.x) < options.dedupe) dup = true;
    }
    if (!dup) roots.push_back(cand);
  }
  InvariantResult res_out;
  res_out.method = "count";
  long total = 0;
  double min_det = std::numeric_limits<double>::infinity();
  for (const Root& r : roots) {
    min_det = std::min(min_det, std::abs(r.det));
    total += r.det > 0.0 ? 1 : -1;
  }
  res_out.raw = static_cast<double>(total);
  res_out.finalize();
  std::vector<double> yj(y.data(), y.data() + y.size());
  res_out.params = {{"n", n}, {"resolution", res}, {"value", yj}};
  res_out.diagnostics = {{"preimages", roots.size()},
                         {"seeds", seeds.size()},
                         {"min_abs_det", roots.empty() ? 0.0 : min_det}};
  return res_out;
}

InvariantResult brouwer_degree_count_auto(const SphereMap& f, std::uint64_t seed, const CountOptions& options) {
  const int n = f.source_dim();
  Rng rng(seed, 0x5eed);
  std::string last;
  for (int attempt = 0; attempt < 16; ++attempt) {
    Vec y(n + 1);
    for (int i = 0; i <= n; ++i) y[i] = rng.normal();
    try {
      InvariantResult r = brouwer_degree_count(f, UnitVector(y), options);
      r.diagnostics["attempts"] = attempt + 1;
      return r;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NotRegular) throw;
      last = e.what();
    }
  }
  fail(ErrorCode::Inconclusive, "no regular value found after 16 attempts: " + last);
}

}  // namespace hopfdeg
