#include <doctest.h>

#include "hopfdeg/invariants.hpp"
#include "hopfdeg/mapzoo.hpp"
#include "hopfdeg/rng.hpp"

#include <cmath>

using namespace hopfdeg;

namespace {

using Curve = std::function<Vec(double)>;

std::vector<Vec> polyline(const Curve& c, int n) {
  std::vector<Vec> v;
  for (int i = 0; i <= n; ++i) v.push_back(c(2 * kPi * (i % n) / n));
  return v;
}

// Trapezoid rule for the Gauss double integral of two smooth closed curves.
double gauss_integral(const Curve& a, const Curve& b, int n) {
  const double h = 2 * kPi / n, e = 1e-6;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double s = i * h;
    const Vec ra = a(s), da = (a(s + e) - a(s - e)) / (2 * e);
    for (int j = 0; j < n; ++j) {
      const double t = j * h;
      const Vec rb = b(t), db = (b(t + e) - b(t - e)) / (2 * e);
      const Eigen::Vector3d d = ra - rb;
      const Eigen::Vector3d x = Eigen::Vector3d(da).cross(Eigen::Vector3d(db));
      sum += d.dot(x) / std::pow(d.norm(), 3);
    }
  }
  return sum * h * h / (4 * kPi);
}

Vec v3(double x, double y, double z) {
  Vec v(3);
  v << x, y, z;
  return v;
}

HopfGrid grid(int n) {
  HopfGrid g;
  g.n = n;
  return g;
}

}  // namespace

TEST_CASE("degree by quadrature") {
  const QuadratureRule q2 = make_quadrature(2, 200);
  const InvariantResult id = brouwer_degree_integral(identity_map(2), q2);
  CHECK(id.rounded == 1);
  CHECK(id.residual < 0.02);
  CHECK(brouwer_degree_integral(constant_map(2, v3(0, 0, 1)), q2).raw == 0.0);
  for (int d = -3; d <= 3; ++d) {
    const SphereMap f = bubble_map(2, d);
    const InvariantResult r = brouwer_degree_integral(f, make_quadrature(2, degree_resolution(f, 2)));
    CHECK(r.rounded == d);
    CHECK(r.conclusive);
  }
}

TEST_CASE("degree by counting") {
  Rng rng(5);
  for (int i = 0; i < 5; ++i) {
    Vec y(3);
    y << rng.normal(), rng.normal(), rng.normal();
    CHECK(brouwer_degree_count(identity_map(2), UnitVector(y)).raw == 1.0);
  }
  const BubbleParams prm = bubble_layout(2, 5);
  const InvariantResult r = brouwer_degree_count(bubble_map(prm), UnitVector(-prm.basepoint));
  CHECK(r.raw == 5.0);
  CHECK(r.residual == 0.0);
  // The base point is attained on an open set.
  CHECK_THROWS_AS(brouwer_degree_count(bubble_map(prm), UnitVector(prm.basepoint)), Error);
  try {
    brouwer_degree_count(bubble_map(prm), UnitVector(prm.basepoint));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotRegular);
  }
}

TEST_CASE("integral and count agree across the families") {
  Rng rng(7);
  int checked = 0;
  for (int i = 0; i < 20; ++i) {
    const int n = 1 + static_cast<int>(rng.next() % 2);
    const int d = static_cast<int>(rng.next() % 13) - 4;
    SphereMap f = bubble_map(n, d);
    if (i % 3 == 0) {
      // Rotations of the target do not change the degree.
      Eigen::MatrixXd a = Eigen::MatrixXd::Random(n + 1, n + 1);
      Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
      Mat q = qr.householderQ();
      if (q.determinant() < 0) q.col(0) *= -1;
      f = rotate_target(f, q);
    }
    const int res = degree_resolution(f, n);
    const InvariantResult a = brouwer_degree_integral(f, make_quadrature(n, res));
    CountOptions o;
    o.resolution = res;
    const InvariantResult b = brouwer_degree_count_auto(f, rng.next(), o);
    CHECK(a.rounded == b.rounded);
    CHECK(a.rounded == d);
    ++checked;
  }
  CHECK(checked == 20);
}

TEST_CASE("Gauss linking number against the double integral") {
  const Curve ring = [](double t) { return v3(std::cos(t), std::sin(t), 0); };
  const Curve hook = [](double t) { return v3(1 + std::cos(t), 0, std::sin(t)); };
  const Curve far = [](double t) { return v3(5 + std::cos(t), 0, std::sin(t)); };
  const Curve twice = [](double t) {
    const double r = 1 + 0.3 * std::cos(2 * t);
    return v3(r * std::cos(t), r * std::sin(t), 0.3 * std::sin(2 * t));
  };
  struct Case {
    Curve a, b;
  };
  for (const auto& [a, b] : {Case{ring, hook}, Case{ring, far}, Case{ring, twice}, Case{hook, ring}}) {
    const double oracle = gauss_integral(a, b, 400);
    const double lib = gauss_linking_number(polyline(a, 300), polyline(b, 300));
    CHECK(std::abs(lib - oracle) < 1e-6);
    CHECK(std::abs(lib - std::round(lib)) < 1e-9);
  }
  CHECK(std::abs(gauss_integral(ring, twice, 400)) == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("Hopf invariant of the Hopf fibration") {
  const SphereMap h = hopf_fibration(false);
  const InvariantResult l = hopf_invariant_linking(h, UnitVector(v3(0.3, 0.5, 0.8)), UnitVector(v3(-0.6, 0.1, 0.2)),
                                                   grid(48));
  CHECK(l.rounded == 1);
  CHECK(l.residual < 1e-6);
  const InvariantResult w = hopf_invariant_whitehead(hopf_fibration(true), grid(64));
  CHECK(w.rounded == 1);
  CHECK(std::abs(w.raw - 1.0) < 0.05);
}

TEST_CASE("null-homotopic maps") {
  const InvariantResult c = hopf_invariant_whitehead(constant_map(3, v3(0, 0, 1)), grid(32));
  CHECK(c.raw == 0.0);
  const SphereMap half = whitehead_half_map(1, 2);
  CHECK(hopf_invariant_linking_auto(half, grid(64)).rounded == 0);
  CHECK(hopf_invariant_whitehead(half, grid(64)).rounded == 0);
}

TEST_CASE("Whitehead map k = 1 and refinement") {
  const SphereMap f = whitehead_map_pole_on_torus(1, 1);
  const InvariantResult a = hopf_invariant_whitehead(f, grid(48));
  const InvariantResult b = hopf_invariant_whitehead(f, grid(64));
  CHECK(a.rounded == 2);
  CHECK(b.rounded == 2);
  CHECK(b.residual < a.residual);
  CHECK(hopf_invariant_linking_auto(f, grid(64)).rounded == 2);
  // The plain family member is rotated so its constant ball sits at the pole.
  bool rotated = false;
  hopf_chart_map(whitehead_map(1, 1), grid(64), nullptr, &rotated);
  CHECK(rotated);
  CHECK(hopf_invariant_whitehead(whitehead_map(1, 1), grid(64)).rounded == 2);
}

TEST_CASE("gauge invariance of the Whitehead integrand") {
  const SphereMap f = whitehead_map_pole_on_torus(1, 1);
  CHECK(whitehead_integrand_check(f, grid(64), 0.0) == 0.0);
  const double d1 = whitehead_integrand_check(f, grid(64), 1.0, 3);
  const double d2 = whitehead_integrand_check(f, grid(64), 2.0, 3);
  CHECK(d1 < 1e-2 * 2);
  CHECK(d2 < 1e-2 * 2);
  HopfGrid shifted = grid(64);
  shifted.theta_offset = 0.7;
  CHECK(std::abs(hopf_invariant_whitehead(f, shifted).raw - hopf_invariant_whitehead(f, grid(64)).raw) < 1e-8);
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(brouwer_degree_integral(identity_map(2), make_quadrature(1, 16)), Error);
  CHECK_THROWS_AS(hopf_invariant_whitehead(bubble_map(2, 1)), Error);
  HopfGrid tiny = grid(64);
  tiny.half_width = 1.0;
  tiny.cap_radius = 3.0;
  CHECK_THROWS_AS(hopf_invariant_whitehead(hopf_fibration(false), tiny), Error);
}
