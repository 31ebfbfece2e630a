#include <doctest.h>

#include "hopfdeg/experiments.hpp"
#include "hopfdeg/potentials.hpp"
#include "hopfdeg/rng.hpp"

#include <cmath>
#include <sstream>

using namespace hopfdeg;

namespace {

GridSpec periodic(int n) {
  GridSpec g;
  g.n = n;
  g.half_width = kPi;
  g.boundary = Boundary::Periodic;
  return g;
}

GridSpec padded(int n, double half_width) {
  GridSpec g;
  g.n = n;
  g.half_width = half_width;
  g.boundary = Boundary::ZeroPadded;
  return g;
}

// Smooth periodic 1-form with closed-form d, d* and Laplacian.
//   A = a0 dx + a1 dy + a2 dz
//   a0 = sin(x + 2y) cos z, a1 = cos(2x - z), a2 = sin(y) sin(x + z)
KFormValue form_a(const Vec& p) {
  const double x = p[0], y = p[1], z = p[2];
  return KFormValue(3, 1, {std::sin(x + 2 * y) * std::cos(z), std::cos(2 * x - z), std::sin(y) * std::sin(x + z)});
}
// dA in the basis dx^dy, dx^dz, dy^dz.
KFormValue form_da(const Vec& p) {
  const double x = p[0], y = p[1], z = p[2];
  const double d0a1 = -2 * std::sin(2 * x - z), d1a0 = 2 * std::cos(x + 2 * y) * std::cos(z);
  const double d0a2 = std::sin(y) * std::cos(x + z), d2a0 = -std::sin(x + 2 * y) * std::sin(z);
  const double d1a2 = std::cos(y) * std::sin(x + z), d2a1 = std::sin(2 * x - z);
  return KFormValue(3, 2, {d0a1 - d1a0, d0a2 - d2a0, d1a2 - d2a1});
}
// Componentwise -Laplacian: eigenvalues 1+4+1, 4+1, 1+1+1.
KFormValue form_lap(const Vec& p) {
  KFormValue a = form_a(p);
  a[0] *= 6.0;
  a[1] *= 5.0;
  a[2] *= 3.0;
  return a;
}

double max_diff(const GridField& a, const GridField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

double gaussian_bump(const Vec& x, double sigma) { return std::exp(-x.squaredNorm() / (2 * sigma * sigma)); }

}  // namespace

TEST_CASE("exterior derivative: exact cases") {
  const GridSpec g = padded(24, 3.0);
  const GridField c = sample_form(g, 1, [](const Vec&) { return KFormValue(3, 1, {1.0, -2.0, 0.5}); });
  for (Stencil st : {Stencil::Centered2, Stencil::Centered4}) {
    const GridField dc = exterior_derivative(sample_form(periodic(16), 0, [](const Vec&) {
      return KFormValue(3, 0, {4.0});
    }), st);
    CHECK(dc.max_abs() == 0.0);
  }
  // x dy: d = dx ^ dy, exact for central differences away from the padding.
  const GridField f = sample_form(g, 1, [](const Vec& x) { return KFormValue(3, 1, {0.0, x[0], 0.0}); });
  const GridField df = exterior_derivative(f, Stencil::Centered2);
  // x dx: d* = -div = -1.
  const GridField h = sample_form(g, 1, [](const Vec& x) { return KFormValue(3, 1, {x[0], 0.0, 0.0}); });
  const GridField dh = codifferential(h, Stencil::Centered2);
  double e1 = 0.0, e2 = 0.0;
  for (std::size_t i = 0; i < g.points(); ++i) {
    int ijk[3];
    df.unravel(i, ijk);
    bool interior = true;
    for (int a = 0; a < 3; ++a) interior = interior && ijk[a] >= 2 && ijk[a] <= g.n - 3;
    if (!interior) continue;
    e1 = std::max({e1, std::abs(df.component(0)[i] - 1.0), std::abs(df.component(1)[i]),
                   std::abs(df.component(2)[i])});
    e2 = std::max(e2, std::abs(dh.component(0)[i] + 1.0));
  }
  CHECK(e1 < 1e-10);
  CHECK(e2 < 1e-10);
  (void)c;
}

TEST_CASE("d d vanishes") {
  for (Stencil st : {Stencil::Centered2, Stencil::Centered4, Stencil::Spectral}) {
    for (int n : {32, 64}) {
      const GridField a = sample_form(periodic(n), 1, form_a);
      CHECK(exterior_derivative(exterior_derivative(a, st), st).max_abs() < 1e-10);
      const GridField z = sample_form(periodic(n), 0, [](const Vec& x) {
        return KFormValue(3, 0, {std::sin(x[0] - x[1]) * std::cos(2 * x[2])});
      });
      CHECK(exterior_derivative(exterior_derivative(z, st), st).max_abs() < 1e-10);
      CHECK(codifferential(codifferential(exterior_derivative(a, st), st), st).max_abs() < 1e-10);
    }
  }
}

TEST_CASE("second-order rates of d, adjointness and the Hodge Laplacian") {
  double err_d[2], err_adj[2], err_lap[2];
  for (int r = 0; r < 2; ++r) {
    const GridSpec g = periodic(r == 0 ? 32 : 64);
    const GridField a = sample_form(g, 1, form_a);
    const GridField da_exact = sample_form(g, 2, form_da);
    const GridField da = exterior_derivative(a, Stencil::Centered2);
    const GridField& b = da_exact;
    err_d[r] = max_diff(da, da_exact);
    // Discrete pairing against the continuum one (trapezoid is spectral here).
    err_adj[r] = std::abs(inner_product(a, codifferential(b, Stencil::Centered2)) - inner_product(da_exact, b));
    err_lap[r] = max_diff(hodge_laplacian(a, Stencil::Centered2), sample_form(g, 1, form_lap));
    // Discrete adjointness holds to rounding at every resolution.
    CHECK(std::abs(inner_product(da, b) - inner_product(a, codifferential(b, Stencil::Centered2))) < 1e-10);
  }
  MESSAGE("ratios d " << err_d[0] / err_d[1] << " adj " << err_adj[0] / err_adj[1] << " lap "
                      << err_lap[0] / err_lap[1]);
  CHECK(err_d[0] / err_d[1] >= 3.5);
  CHECK(err_adj[0] / err_adj[1] >= 3.5);
  CHECK(err_lap[0] / err_lap[1] >= 3.5);
}

TEST_CASE("adjointness on random compact fields") {
  Rng rng(3);
  const GridSpec g = padded(64, 4.0);
  auto random_bumps = [&](int degree) {
    std::vector<std::pair<Vec, std::vector<double>>> bumps;
    for (int i = 0; i < 4; ++i) {
      Vec c(3);
      c << rng.uniform() - 0.5, rng.uniform() - 0.5, rng.uniform() - 0.5;
      std::vector<double> co(3);
      for (double& v : co) v = rng.normal();
      bumps.push_back({c, co});
    }
    return sample_form(g, degree, [bumps, degree](const Vec& x) {
      KFormValue v(3, degree);
      for (const auto& [c, co] : bumps) {
        const double e = std::exp(-(x - c).squaredNorm() / 0.3);
        for (int k = 0; k < 3; ++k) v[k] += co[k] * e;
      }
      return v;
    });
  };
  const GridField a = random_bumps(1);
  const GridField b = random_bumps(2);
  const double lhs = inner_product(exterior_derivative(a), b);
  const double rhs = inner_product(a, codifferential(b));
  CHECK(std::abs(lhs - rhs) <= 1e-3 * std::max(1.0, std::abs(lhs)));
}

TEST_CASE("Riesz potentials") {
  const GridSpec g = padded(64, 8.0);
  CHECK(riesz_potential(GridField(g, 0), 2.0).max_abs() == 0.0);

  const double sigma = 0.3;
  const GridField bump = sample_form(g, 0, [&](const Vec& x) { return KFormValue(3, 0, {gaussian_bump(x, sigma)}); });
  const double mass = std::pow(2 * kPi * sigma * sigma, 1.5);
  const GridField u = riesz_potential(bump, 2.0);
  // Compare potential differences along an axis with the Newton kernel.
  auto at = [&](double r) {
    const int i = static_cast<int>(std::lround((r + g.half_width) / g.h()));
    const int mid = g.n / 2;
    const int ijk[3] = {i, mid, mid};
    return std::pair{u.component(0)[u.index(ijk)], g.coord(i)};
  };
  const auto [u1, r1] = at(1.0);
  for (double r : {1.5, 2.0, 2.5}) {
    const auto [u2, r2] = at(r);
    const double expected = mass / (4 * kPi) * (1 / r1 - 1 / r2);
    CHECK(std::abs((u1 - u2) - expected) < 0.05 * expected);
  }

  // The Centered2 Laplacian inverts it to second order, away from the mean.
  double errs[2];
  for (int r = 0; r < 2; ++r) {
    const GridSpec gp = periodic(r == 0 ? 32 : 64);
    const GridField f = sample_form(gp, 0, [](const Vec& x) {
      return KFormValue(3, 0, {std::exp(std::cos(x[0]) + std::sin(x[1] - x[2]))});
    });
    GridField back = hodge_laplacian(riesz_potential(f, 2.0), Stencil::Centered2);
    double mean = 0.0;
    for (double v : f.data()) mean += v;
    mean /= static_cast<double>(f.data().size());
    double e = 0.0;
    for (std::size_t i = 0; i < f.data().size(); ++i) e = std::max(e, std::abs(back.data()[i] - (f.data()[i] - mean)));
    errs[r] = e;
  }
  CHECK(errs[0] / errs[1] >= 3.5);

  // Half-order twice is the first-order potential.
  const GridField f = sample_form(periodic(32), 0, [](const Vec& x) {
    return KFormValue(3, 0, {std::sin(x[0]) + std::cos(2 * x[1] + x[2])});
  });
  CHECK(max_diff(riesz_potential(riesz_potential(f, 0.5), 0.5), riesz_potential(f, 1.0)) < 1e-12);
  // sin x is an eigenfunction with eigenvalue 1, cos(2y + z) with 5.
  const GridField g2 = riesz_potential(f, 2.0);
  const GridField expect = sample_form(periodic(32), 0, [](const Vec& x) {
    return KFormValue(3, 0, {std::sin(x[0]) + std::cos(2 * x[1] + x[2]) / 5.0});
  });
  CHECK(max_diff(g2, expect) < 1e-12);
}

TEST_CASE("compact fields are checked") {
  const GridSpec g = padded(32, 2.0);
  const GridField wide = sample_form(g, 0, [](const Vec&) { return KFormValue(3, 0, {1.0}); });
  CHECK_THROWS_AS(riesz_potential(wide, 2.0), Error);
  CHECK(wide.shell_max() == 1.0);
}

TEST_CASE("Poisson extension") {
  const GridSpec g = periodic(32);
  const GridField one = sample_form(g, 0, [](const Vec&) { return KFormValue(3, 0, {1.0}); });
  for (double t : {0.1, 0.5, 2.0}) {
    HalfSpacePoint p;
    p.x = Vec::Zero(3);
    p.x[0] = 0.3;
    p.t = t;
    CHECK(poisson_extension(one, p) == doctest::Approx(1.0).epsilon(1e-3));
  }
  const GridSpec gz = padded(32, 4.0);
  const GridField gauss = sample_form(gz, 0, [](const Vec& x) { return KFormValue(3, 0, {gaussian_bump(x, 0.5)}); });
  double prev = 2.0;
  for (double t : {0.2, 0.4, 0.8, 1.6, 3.2}) {
    HalfSpacePoint p;
    p.x = Vec::Zero(3);
    p.t = t;
    const double v = poisson_extension(gauss, p);
    CHECK(v < prev);
    prev = v;
  }
  // Harmonic in (x, t): five-point Laplacian in the (x_1, t) plane plus the
  // other two x directions.
  double res[2];
  int r = 0;
  for (double step : {0.2, 0.1}) {
    auto u = [&](double dx, double dy, double dz, double dt) {
      HalfSpacePoint p;
      p.x = Vec::Zero(3);
      p.x << 0.3 + dx, -0.2 + dy, 0.1 + dz;
      p.t = 1.0 + dt;
      return poisson_extension(gauss, p);
    };
    const double c = u(0, 0, 0, 0);
    const double lap = (u(step, 0, 0, 0) + u(-step, 0, 0, 0) + u(0, step, 0, 0) + u(0, -step, 0, 0) +
                        u(0, 0, step, 0) + u(0, 0, -step, 0) + u(0, 0, 0, step) + u(0, 0, 0, -step) - 8 * c) /
                       (step * step);
    res[r++] = std::abs(lap);
  }
  CHECK(res[1] < res[0]);
  CHECK(res[0] / res[1] >= 3.5);
}

TEST_CASE("commutator quantities") {
  Vec base(3);
  base << 0.6, 0.2, -0.1;
  const TrigPolynomialMap constant(3, 3, base, {});
  const CompactForm kappa = commutator_form();
  const CommutatorResult c = commutator_experiment(constant, kappa, 0.75);
  CHECK(c.lhs == 0.0);
  CHECK(c.ratio == 0.0);

  const TrigPolynomialMap f = commutator_base_map(0.01);
  CommutatorOptions o;
  o.mc_samples = 20000;
  const CommutatorResult a = commutator_experiment(f, kappa, 0.75, o);
  const CommutatorResult b = commutator_experiment(f, kappa.scaled(2.5), 0.75, o);
  CHECK(b.lhs == doctest::Approx(6.25 * a.lhs).epsilon(1e-10));
  CHECK(std::abs(b.ratio - a.ratio) <= 1e-8 * a.ratio);
}

TEST_CASE("grid field binary round trip") {
  const GridField a = sample_form(padded(8, 1.5), 2, [](const Vec& x) {
    return KFormValue(3, 2, {x[0], x[1] * x[2], -1.0});
  });
  std::stringstream ss;
  a.write(ss);
  const GridField b = GridField::read(ss);
  CHECK(b.degree() == 2);
  CHECK(b.spec().n == 8);
  CHECK(b.spec().half_width == 1.5);
  CHECK(b.data() == a.data());
  std::stringstream bad("HDGRID00 junk");
  CHECK_THROWS_AS(GridField::read(bad), Error);
}
