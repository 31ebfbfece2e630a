#include "chart.hpp"

#include "hopfdeg/mapzoo.hpp"
#include "hopfdeg/parallel.hpp"
#include "hopfdeg/rng.hpp"

#include <algorithm>
#include <cmath>

namespace hopfdeg {

namespace {

const char* stencil_name(Stencil s) {
  switch (s) {
    case Stencil::Centered2: return "centered2";
    case Stencil::Centered4: return "centered4";
    case Stencil::Spectral: return "spectral";
  }
  return "?";
}

const char* form_name(VolumeFormKind k) {
  switch (k) {
    case VolumeFormKind::Cutoff: return "cutoff";
    case VolumeFormKind::Homogeneous: return "homogeneous";
    case VolumeFormKind::Product: return "product";
  }
  return "?";
}

VolumeFormExtension make_form(VolumeFormKind k) {
  switch (k) {
    case VolumeFormKind::Cutoff: return VolumeFormExtension::cutoff(2);
    case VolumeFormKind::Homogeneous: return VolumeFormExtension::homogeneous(2);
    case VolumeFormKind::Product: return VolumeFormExtension::product(2);
  }
  return VolumeFormExtension::homogeneous(2);
}

}  // namespace

nlohmann::json HopfGrid::to_json() const {
  return {{"L", half_width},
          {"N", n},
          {"stencil", stencil_name(stencil)},
          {"form", form_name(form)},
          {"cap_radius", effective_cap_radius()},
          {"fd_step", fd_step}};
}

SphereMap hopf_chart_map(const SphereMap& f, const HopfGrid& grid, bool* capped, bool* rotated) {
  require(f.source_dim() == 3 && f.target_dim() == 3, ErrorCode::DimensionMismatch,
          "Hopf invariants need a map S^3 -> R^3");
  const double radius = grid.effective_cap_radius();
  require(radius < grid.half_width, ErrorCode::InvalidArgument, "cap radius must lie inside the box");
  SphereMap g = f;
  const auto ball = f.constant_ball();
  const bool rotate = !f.pole_constant_radius() && ball && ball->radius > 0.0;
  if (rotate) {
    // Rotate in the plane of the south pole s and the ball centre c so that
    // g(s) = f(c); SO(4) rotations do not change the Hopf invariant.
    const Vec s = f.south_pole();
    const Vec c = ball->center / ball->center.norm();
    const double cos_a = std::clamp(s.dot(c), -1.0, 1.0);
    Mat q = Mat::Identity(4, 4);
    if (cos_a < 1.0 - 1e-15) {
      const Vec t = (c - cos_a * s) / (c - cos_a * s).norm();
      const double sin_a = std::sqrt(1.0 - cos_a * cos_a);
      q += (cos_a - 1.0) * (s * s.transpose() + t * t.transpose()) + sin_a * (t * s.transpose() - s * t.transpose());
    }
    g = rotate_domain(f, q);
    g.set_pole_constant_radius(ball->radius);
  }
  if (rotated) *rotated = rotate;
  const auto pole = g.pole_constant_radius();
  const bool already = pole && *pole > 0.0 && 1.0 / std::tan(0.5 * *pole) <= radius;
  if (capped) *capped = !already;
  return already ? g : cap_at_pole(g, radius);
}

namespace detail {

Chart::Chart(const SphereMap& f, const HopfGrid& grid) {
  g = hopf_chart_map(f, grid, &capped, &rotated);
  spec.dim = 3;
  spec.n = grid.n;
  spec.half_width = grid.half_width;
  spec.boundary = Boundary::Periodic;
  far_value = g(g.south_pole());
}

Mat Chart::jacobian(const Vec& x, double step) const {
  Mat j(g.target_dim(), 3);
  for (int a = 0; a < 3; ++a) {
    Vec xp = x, xm = x;
    xp[a] += step;
    xm[a] -= step;
    j.col(a) = ((*this)(xp) - (*this)(xm)) / (2.0 * step);
  }
  return j;
}

std::vector<double> Chart::sample() const {
  const std::size_t total = spec.points();
  std::vector<double> out(3 * total);
  const int n = spec.n;
  parallel_for(total, [&](std::size_t idx) {
    Vec x(3);
    x << spec.coord(static_cast<int>(idx / (n * n))), spec.coord(static_cast<int>((idx / n) % n)),
        spec.coord(static_cast<int>(idx % n));
    const Vec v = (*this)(x);
    for (int c = 0; c < 3; ++c) out[3 * idx + c] = v[c];
  }, 1024);
  return out;
}

}  // namespace detail

GridField hopf_pullback_field(const SphereMap& f, const HopfGrid& grid) {
  require(grid.n >= 8 && grid.n % 2 == 0, ErrorCode::InvalidArgument, "Hopf grid needs an even N >= 8");
  const detail::Chart chart(f, grid);
  const VolumeFormExtension omega = make_form(grid.form);
  GridField F(chart.spec, 2);
  const double d = grid.fd_step;
  parallel_for(F.points(), [&](std::size_t idx) {
    const Vec x = F.position(idx);
    const Vec g0 = chart(x);
    Mat j(3, 3);
    bool all_far = g0 == chart.far_value;
    for (int a = 0; a < 3; ++a) {
      Vec xp = x, xm = x;
      xp[a] += d;
      xm[a] -= d;
      const Vec gp = chart(xp);
      const Vec gm = chart(xm);
      all_far = all_far && gp == chart.far_value && gm == chart.far_value;
      j.col(a) = (gp - gm) / (2.0 * d);
    }
    if (all_far) return;
    // Components dx0^dx1, dx0^dx2, dx1^dx2.
    static constexpr int pairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
    for (int c = 0; c < 3; ++c) {
      Mat v(3, 2);
      v.col(0) = j.col(pairs[c][0]);
      v.col(1) = j.col(pairs[c][1]);
      F.component(c)[idx] = omega.evaluate(g0, v);
    }
  }, 512);
  const double peak = F.max_abs();
  const double shell = F.shell_max(2);
  if (peak > 0.0 && shell > 1e-12 * peak) {
    double tail = 0.0;
    int ijk[3];
    for (std::size_t idx = 0; idx < F.points(); ++idx) {
      F.unravel(idx, ijk);
      bool edge = false;
      for (int a = 0; a < 3; ++a) edge = edge || ijk[a] < 2 || ijk[a] >= grid.n - 2;
      if (!edge) continue;
      for (int c = 0; c < 3; ++c) tail += std::abs(F.component(c)[idx]);
    }
    tail *= std::pow(chart.spec.h(), 3);
    fail(ErrorCode::SupportViolation,
         "pulled-back form reaches the box boundary: outer-shell mass " + std::to_string(tail));
  }
  return F;
}

namespace {

GridField primitive(const GridField& F, const HopfGrid& grid) {
  GridField theta = riesz_potential(F, 2.0);
  if (grid.theta_offset != 0.0) {
    for (double& v : theta.data()) v += grid.theta_offset;
  }
  return codifferential(theta, grid.stencil);
}

}  // namespace

InvariantResult hopf_invariant_whitehead(const SphereMap& f, const HopfGrid& grid) {
  bool capped = false, rotated = false;
  hopf_chart_map(f, grid, &capped, &rotated);
  const GridField F = hopf_pullback_field(f, grid);
  const GridField eta = primitive(F, grid);
  InvariantResult r;
  r.method = "whitehead";
  r.raw = detail::kChartOrientation * wedge_integral(eta, F);
  r.finalize();
  r.params = grid.to_json();
  const GridField dF = exterior_derivative(F, grid.stencil);
  r.diagnostics = {{"capped", capped},
                   {"chart_rotated", rotated},
                   {"max_abs_F", F.max_abs()},
                   {"max_abs_dF", dF.max_abs()},
                   {"flux_l2", std::sqrt(inner_product(F, F))}};
  return r;
}

double whitehead_integrand_check(const SphereMap& f, const HopfGrid& grid, double amplitude,
                                 std::uint64_t seed) {
  const GridField F = hopf_pullback_field(f, grid);
  const GridField eta = primitive(F, grid);
  const double base = wedge_integral(eta, F);
  if (amplitude == 0.0) return 0.0;

  struct Bump {
    Vec c;
    double r = 1.0;
    double a = 1.0;
  };
  Rng rng(seed, 0xb0b);
  std::vector<Bump> bumps(3);
  const double L = grid.half_width;
  for (Bump& b : bumps) {
    Vec c(3);
    do {
      for (int i = 0; i < 3; ++i) c[i] = (2.0 * rng.uniform() - 1.0) * 0.5 * L;
    } while (c.norm() > 0.5 * L);
    b.c = c;
    b.r = L * (0.2 + 0.2 * rng.uniform());
    b.a = rng.normal();
  }
  // phi = sum_j a_j S(1 - |x - c_j| / r_j) with the quintic smoothstep S.
  const GridField dphi = sample_form(F.spec(), 1, [&](const Vec& x) {
    KFormValue v(3, 1);
    for (const Bump& b : bumps) {
      const Vec d = x - b.c;
      const double rho = d.norm();
      if (rho >= b.r || rho == 0.0) continue;
      const double t = 1.0 - rho / b.r;
      const double ds = 30.0 * t * t * (1.0 - t) * (1.0 - t);
      for (int i = 0; i < 3; ++i) v[i] -= amplitude * b.a * ds * d[i] / (rho * b.r);
    }
    return v;
  });
  GridField shifted = eta;
  shifted += dphi;
  return std::abs(wedge_integral(shifted, F) - base);
}

}  // namespace hopfdeg
