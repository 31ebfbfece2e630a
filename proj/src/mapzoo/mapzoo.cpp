#include "hopfdeg/mapzoo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <set>

namespace hopfdeg {

using nlohmann::json;

double flat_profile(double t, double a) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double d = (15.0 - 8.0 * a) / 8.0;
  const double c = (a - 14.0 * d) / 5.0;
  const double b = -(10.0 * c + 21.0 * d) / 3.0;
  const double t2 = t * t;
  return t * (a + t2 * (b + t2 * (c + t2 * d)));
}

double flat_profile_derivative(double t, double a) {
  if (t <= 0.0) return a;
  if (t >= 1.0) return 0.0;
  // q'(t) = (1 - t^2)^2 (a + c' t^2) with c' = 105/8 - 7a.
  const double u = 1.0 - t * t;
  return u * u * (a + (105.0 / 8.0 - 7.0 * a) * t * t);
}

namespace {

Vec unit(int dim, int axis, double sign = 1.0) {
  Vec v = Vec::Zero(dim);
  v[axis] = sign;
  return v;
}

double min_separation(const std::vector<Vec>& c) {
  if (c.size() < 2) return kPi;
  double best = kPi;
  for (std::size_t i = 0; i < c.size(); ++i) {
    for (std::size_t j = i + 1; j < c.size(); ++j) {
      best = std::min(best, geodesic_distance(c[i], c[j]));
    }
  }
  return best;
}

// Orthogonal Q with Q a = -b; det Q = orientation.
Mat bubble_rotation(const Vec& a, const Vec& b, int orientation) {
  const int dim = static_cast<int>(a.size());
  Mat h1 = Mat::Identity(dim, dim);
  int det = 1;
  const Vec v = a + b;
  if (v.norm() > 1e-12) {
    h1 -= 2.0 * v * v.transpose() / v.squaredNorm();
    det = -1;
  }
  if (det == orientation) return h1;
  // Reflection fixing b: through the hyperplane orthogonal to a unit e _|_ b.
  Vec e = Vec::Zero(dim);
  for (int i = 0; i < dim; ++i) {
    e = unit(dim, i);
    e -= e.dot(b) * b;
    if (e.norm() > 0.5) break;
  }
  e.normalize();
  Mat h2 = Mat::Identity(dim, dim) - 2.0 * e * e.transpose();
  return h2 * h1;
}

std::vector<Vec> farthest_point_centers(int n, int count) {
  const int dim = n + 1;
  std::vector<Vec> cand;
  cand.push_back(unit(dim, n));
  for (int i = 0; i < dim; ++i) {
    cand.push_back(unit(dim, i, -1.0));
    cand.push_back(unit(dim, i, 1.0));
  }
  if (n >= 2) {
    const QuadratureRule rule = make_quadrature(n, n == 2 ? 24 : 8);
    cand.insert(cand.end(), rule.nodes.begin(), rule.nodes.end());
  }
  std::vector<Vec> chosen{cand.front()};
  std::vector<double> dist(cand.size());
  for (std::size_t i = 0; i < cand.size(); ++i) dist[i] = geodesic_distance(cand[i], chosen[0]);
  while (static_cast<int>(chosen.size()) < count) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < cand.size(); ++i) {
      if (dist[i] > dist[best] + 1e-12) best = i;
    }
    chosen.push_back(cand[best]);
    for (std::size_t i = 0; i < cand.size(); ++i) {
      dist[i] = std::min(dist[i], geodesic_distance(cand[i], cand[best]));
    }
  }
  return chosen;
}

void finish_layout(BubbleParams& p) {
  require(p.radius >= kMinBubbleRadius, ErrorCode::InvalidArgument,
          "bubble count exceeds the packing capacity of the center lattice (radius " +
              std::to_string(p.radius) + ")");
  p.packing_constant = p.radius * std::pow(std::max(1, std::abs(p.d)), 1.0 / p.n);
}

struct BubbleEval {
  BubbleParams prm;
  std::vector<Mat> rot;
  double cos_rho = 1.0;

  Vec operator()(const Vec& p) const {
    for (std::size_t i = 0; i < prm.centers.size(); ++i) {
      const Vec& a = prm.centers[i];
      const double c = p.dot(a);
      if (c <= cos_rho) continue;
      const Vec w = p - c * a;
      const double s = w.norm();
      const double r = std::atan2(s, c);
      if (r >= prm.radius) continue;
      const double theta = kPi * (1.0 - flat_profile(r / prm.radius, prm.profile_slope));
      if (s < 1e-300) return -prm.basepoint;
      Vec out = std::cos(theta) * prm.basepoint + (std::sin(theta) / s) * (rot[i] * w);
      return out / out.norm();
    }
    return prm.basepoint;
  }
};

json bubble_descriptor(const BubbleParams& p) {
  return {{"family", "bubble"}, {"params", {{"n", p.n}, {"d", p.d}}}};
}

}  // namespace

BubbleParams bubble_layout(int n, int d, double profile_slope) {
  require(n >= 1 && n <= 3, ErrorCode::InvalidArgument, "bubble maps are available on S^1, S^2, S^3");
  BubbleParams p;
  p.n = n;
  p.d = d;
  p.basepoint = unit(n + 1, n);
  p.orientation = d >= 0 ? 1 : -1;
  p.profile_slope = profile_slope;
  const int count = std::abs(d);
  if (count == 0) {
    p.radius = kPi;
    p.packing_constant = 0.0;
    return p;
  }
  if (n == 1) {
    for (int i = 0; i < count; ++i) {
      const double th = 2.0 * kPi * (i + 0.5) / count;
      Vec c(2);
      c << std::cos(th), std::sin(th);
      p.centers.push_back(c);
    }
  } else if (n == 2) {
    const double golden = kPi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < count; ++i) {
      const double z = 1.0 - (2.0 * i + 1.0) / count;
      const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
      Vec c(3);
      c << rho * std::cos(golden * i), rho * std::sin(golden * i), z;
      p.centers.push_back(c);
    }
  } else {
    p.centers = farthest_point_centers(3, count);
  }
  p.radius = 0.4 * min_separation(p.centers);
  finish_layout(p);
  return p;
}

BubbleParams cap_bubble_layout(int n, int k, double cap_angle) {
  require(n >= 2 && k >= 1, ErrorCode::InvalidArgument, "cap layout needs n >= 2 and k >= 1");
  BubbleParams p;
  p.n = n;
  p.d = k;
  p.basepoint = unit(n + 1, n);
  p.orientation = 1;
  auto point = [&](double polar, double azimuth) {
    Vec c = Vec::Zero(n + 1);
    c[0] = std::sin(polar) * std::cos(azimuth);
    c[1] = std::sin(polar) * std::sin(azimuth);
    c[n] = std::cos(polar);
    return c;
  };
  auto score = [&](const std::vector<Vec>& centers) {
    double max_polar = 0.0;
    for (const Vec& c : centers) max_polar = std::max(max_polar, std::acos(std::clamp(c[n], -1.0, 1.0)));
    return std::min(0.4 * min_separation(centers), 0.9 * (cap_angle - max_polar));
  };
  if (k == 1) {
    p.centers = {point(0.0, 0.0)};
  } else {
    const int steps = 2000;
    double best = -1.0;
    for (int s = 1; s < steps; ++s) {
      const double frac = static_cast<double>(s) / steps;
      std::vector<Vec> centers;
      if (k <= 6) {
        for (int j = 0; j < k; ++j) centers.push_back(point(frac * cap_angle, 2.0 * kPi * j / k));
      } else {
        // Area-uniform spiral over the polar cap of angle frac * cap_angle.
        const double golden = kPi * (3.0 - std::sqrt(5.0));
        const double zmin = std::cos(frac * cap_angle);
        for (int j = 0; j < k; ++j) {
          const double z = 1.0 - (1.0 - zmin) * (j + 0.5) / k;
          centers.push_back(point(std::acos(z), golden * j));
        }
      }
      const double sc = score(centers);
      if (sc > best) {
        best = sc;
        p.centers = centers;
      }
    }
  }
  p.radius = score(p.centers);
  finish_layout(p);
  return p;
}

SphereMap bubble_map(const BubbleParams& params) {
  auto ev = std::make_shared<BubbleEval>();
  ev->prm = params;
  ev->cos_rho = std::cos(std::min(params.radius, kPi));
  for (const Vec& a : params.centers) {
    ev->rot.push_back(bubble_rotation(a, params.basepoint, params.orientation));
  }
  const int n = params.n;
  SphereMap f(n, n + 1, true, [ev](const Vec& p) { return (*ev)(p); }, bubble_descriptor(params));
  if (!params.centers.empty()) {
    f.set_lipschitz_hint(kPi * params.profile_slope / params.radius);
  } else {
    f.set_lipschitz_hint(0.0);
  }
  return f;
}

SphereMap bubble_map(int n, int d) {
  require(n >= 1 && n <= 2, ErrorCode::InvalidArgument, "bubble_map supports n in {1, 2}");
  return bubble_map(bubble_layout(n, d));
}

// ------------------------------------------------------------- Whitehead

WhiteheadParams whitehead_params(int n, int k) {
  require(n >= 1 && 4 * n <= kMaxDim, ErrorCode::InvalidArgument, "Whitehead maps need 1 <= n <= 2");
  require(k >= 1, ErrorCode::InvalidArgument, "Whitehead maps need k >= 1");
  WhiteheadParams w;
  w.n = n;
  w.k = k;
  w.inner = cap_bubble_layout(2 * n, k, kPi / 2.0);
  w.basepoint = w.inner.basepoint;
  double support = 0.0;
  for (const Vec& c : w.inner.centers) {
    const double polar = std::acos(std::clamp(c[2 * n], -1.0, 1.0));
    support = std::max(support, std::tan(0.5 * (polar + w.inner.radius)));
  }
  w.inner_support = std::min(1.0, support);
  return w;
}

namespace {

struct WhiteheadEval {
  WhiteheadParams prm;
  SphereMap bubble;
  bool half = false;

  Vec g(const Vec& y) const {
    if (y.squaredNorm() >= prm.inner_support * prm.inner_support) return prm.basepoint;
    return bubble(stereographic_inverse(y).coords());
  }

  Vec operator()(const Vec& x) const {
    const int h = 2 * prm.n;
    const double a = x.head(h).squaredNorm();
    const double b = x.tail(h).squaredNorm();
    if (a < b) return g(std::sqrt(2.0) * Vec(x.head(h)));
    if (b < a && !half) return g(std::sqrt(2.0) * Vec(x.tail(h)));
    return prm.basepoint;
  }

  int region(const Vec& x) const {
    const int h = 2 * prm.n;
    const double a = x.head(h).squaredNorm();
    const double b = x.tail(h).squaredNorm();
    return a < b ? 1 : (b < a ? -1 : 0);
  }
};

json whitehead_descriptor(const WhiteheadParams& w, bool half, bool pole_on_torus) {
  json params = {{"n", w.n}, {"k", w.k}};
  if (half) params["half"] = true;
  if (pole_on_torus) params["pole_on_torus"] = true;
  return {{"family", "whitehead"}, {"params", params}};
}

SphereMap make_whitehead(const WhiteheadParams& w, bool half) {
  auto ev = std::make_shared<WhiteheadEval>();
  ev->prm = w;
  ev->bubble = bubble_map(w.inner);
  ev->half = half;
  SphereMap f(4 * w.n - 1, 2 * w.n + 1, true, [ev](const Vec& x) { return (*ev)(x); },
              whitehead_descriptor(w, half, false));
  f.set_region([ev](const Vec& x) { return ev->region(x); });
  // Around the Clifford torus point (e_0 + e_{2n}) / sqrt2 both arguments of g
  // stay outside its support.
  const int dim = 4 * w.n;
  f.set_constant_ball((unit(dim, 0) + unit(dim, 2 * w.n)) / std::sqrt(2.0),
                      std::acos(w.inner_support / std::sqrt(2.0)) - kPi / 4.0);
  return f;
}

}  // namespace

EuclideanMap whitehead_inner_map(const WhiteheadParams& params) {
  auto ev = std::make_shared<WhiteheadEval>();
  ev->prm = params;
  ev->bubble = bubble_map(params.inner);
  EuclideanMap g(2 * params.n, 2 * params.n + 1, [ev](const Vec& y) { return ev->g(y); },
                 {{"family", "whitehead_inner"}, {"params", {{"n", params.n}, {"k", params.k}}}});
  g.support_radius = params.inner_support;
  g.far_value = params.basepoint;
  return g;
}

SphereMap whitehead_map(const WhiteheadParams& params) { return make_whitehead(params, false); }

SphereMap whitehead_map(int n, int k) { return whitehead_map(whitehead_params(n, k)); }

SphereMap whitehead_half_map(int n, int k) { return make_whitehead(whitehead_params(n, k), true); }

SphereMap whitehead_map_pole_on_torus(int n, int k) {
  const WhiteheadParams w = whitehead_params(n, k);
  const int dim = 4 * n;
  const Vec s = unit(dim, dim - 1, -1.0);
  Vec t = (unit(dim, 0) + unit(dim, 2 * n)) / std::sqrt(2.0);
  // Rotation by a right angle in the (s, t) plane with R s = t.
  Mat r = Mat::Identity(dim, dim) - s * s.transpose() - t * t.transpose() + t * s.transpose() -
          s * t.transpose();
  SphereMap f = rotate_domain(make_whitehead(w, false), r);
  f.set_descriptor(whitehead_descriptor(w, false, true));
  f.set_pole_constant_radius(std::acos(w.inner_support / std::sqrt(2.0)) - kPi / 4.0);
  return f;
}

// ------------------------------------------------------------------ Hopf

namespace {

Vec hopf_eval(const Vec& p) {
  const double re = p[0] * p[2] + p[1] * p[3];
  const double im = p[1] * p[2] - p[0] * p[3];
  Vec out(3);
  out << 2.0 * re, 2.0 * im, p[0] * p[0] + p[1] * p[1] - p[2] * p[2] - p[3] * p[3];
  return out / out.norm();
}

}  // namespace

SphereMap cap_at_pole(const SphereMap& f, double radius) {
  require(radius > 0.0, ErrorCode::InvalidArgument, "cap radius must be positive");
  const int m = f.source_dim();
  auto base = std::make_shared<SphereMap>(f);
  auto pull = [m, radius](const Vec& p) -> Vec {
    Vec south = Vec::Zero(m + 1);
    south[m] = -1.0;
    if (p[m] <= -1.0 + 1e-15) return south;
    const Vec x = p.head(m) / (1.0 + p[m]);
    const double r = x.norm();
    if (r >= radius) return south;
    Vec q = Vec::Zero(m + 1);
    if (r == 0.0) {
      q[m] = 1.0;
      return q;
    }
    const double alpha = kPi * flat_profile(r / radius, 1.0);
    q.head(m) = (std::sin(alpha) / r) * x;
    q[m] = std::cos(alpha);
    return q;
  };
  SphereMap out(m, f.target_dim(), f.sphere_valued(),
                [base, pull](const Vec& p) { return (*base)(pull(p)); },
                {{"family", "capped"}, {"params", {{"radius", radius}, {"base", f.descriptor()}}}});
  if (f.region()) out.set_region([base, pull](const Vec& p) { return base->region()(pull(p)); });
  out.set_pole_constant_radius(2.0 * std::atan(1.0 / radius));
  return out;
}

SphereMap hopf_fibration(bool capped, double cap_radius) {
  SphereMap h(3, 3, true, hopf_eval, {{"family", "hopf"}, {"params", {{"capped", false}}}});
  h.set_lipschitz_hint(2.0);
  if (!capped) return h;
  SphereMap c = cap_at_pole(h, cap_radius);
  c.set_descriptor({{"family", "hopf"}, {"params", {{"capped", true}, {"cap_radius", cap_radius}}}});
  return c;
}

SphereMap hopf_bubble_map(int k) {
  require(k >= 1, ErrorCode::InvalidArgument, "hopf_bubble needs k >= 1");
  // The gentler septic profile spreads the bubble's differential more evenly,
  // which keeps the centres resolvable on the R^3 grid.
  const SphereMap b = bubble_map(bubble_layout(3, k, 1.0));
  SphereMap f(3, 3, true, [b](const Vec& p) { return hopf_eval(b(p)); },
              {{"family", "hopf_bubble"}, {"params", {{"k", k}}}});
  return f;
}

// ----------------------------------------------------------------- misc

SphereMap identity_map(int m) {
  return SphereMap(m, m + 1, true, [](const Vec& p) { return p; },
                   {{"family", "identity"}, {"params", {{"m", m}}}});
}

SphereMap constant_map(int m, const Vec& value) {
  std::vector<double> v(value.data(), value.data() + value.size());
  const bool on_sphere = std::abs(value.norm() - 1.0) < 1e-12;
  SphereMap f(m, static_cast<int>(value.size()), on_sphere, [value](const Vec&) { return value; },
              {{"family", "constant"}, {"params", {{"m", m}, {"value", v}}}});
  f.set_pole_constant_radius(kPi);
  f.set_lipschitz_hint(0.0);
  return f;
}

SphereMap scale_map(const SphereMap& f, double lambda) {
  require(lambda > 0.0, ErrorCode::InvalidArgument, "scale factor must be positive");
  auto base = std::make_shared<SphereMap>(f);
  SphereMap out(f.source_dim(), f.target_dim(), f.sphere_valued() && lambda == 1.0,
                [base, lambda](const Vec& p) { return Vec(lambda * (*base)(p)); },
                {{"family", "scaled"}, {"params", {{"lambda", lambda}, {"base", f.descriptor()}}}});
  if (f.region()) out.set_region(f.region());
  if (f.pole_constant_radius()) out.set_pole_constant_radius(*f.pole_constant_radius());
  if (f.constant_ball()) out.set_constant_ball(f.constant_ball()->center, f.constant_ball()->radius);
  if (f.lipschitz_hint()) out.set_lipschitz_hint(lambda * *f.lipschitz_hint());
  return out;
}

SphereMap rotate_domain(const SphereMap& f, const Mat& q) {
  const int dim = f.source_dim() + 1;
  require(q.rows() == dim && q.cols() == dim, ErrorCode::DimensionMismatch,
          "domain rotation has the wrong size");
  auto base = std::make_shared<SphereMap>(f);
  std::vector<double> flat(q.data(), q.data() + q.size());
  SphereMap out(f.source_dim(), f.target_dim(), f.sphere_valued(),
                [base, q](const Vec& p) { return (*base)(q * p); },
                {{"family", "rotated_domain"}, {"params", {{"matrix", flat}, {"base", f.descriptor()}}}});
  if (f.region()) out.set_region([base, q](const Vec& p) { return base->region()(q * p); });
  // f(q p) is constant on q^T B.
  if (f.constant_ball()) {
    out.set_constant_ball(q.transpose() * f.constant_ball()->center, f.constant_ball()->radius);
  } else if (f.pole_constant_radius()) {
    out.set_constant_ball(q.transpose() * f.south_pole(), *f.pole_constant_radius());
  }
  if (f.lipschitz_hint()) out.set_lipschitz_hint(*f.lipschitz_hint());
  return out;
}

SphereMap rotate_target(const SphereMap& f, const Mat& q) {
  const int dim = f.target_dim();
  require(q.rows() == dim && q.cols() == dim, ErrorCode::DimensionMismatch,
          "target rotation has the wrong size");
  auto base = std::make_shared<SphereMap>(f);
  std::vector<double> flat(q.data(), q.data() + q.size());
  SphereMap out(f.source_dim(), dim, f.sphere_valued(),
                [base, q](const Vec& p) { return Vec(q * (*base)(p)); },
                {{"family", "rotated_target"}, {"params", {{"matrix", flat}, {"base", f.descriptor()}}}});
  if (f.region()) out.set_region(f.region());
  if (f.pole_constant_radius()) out.set_pole_constant_radius(*f.pole_constant_radius());
  if (f.constant_ball()) out.set_constant_ball(f.constant_ball()->center, f.constant_ball()->radius);
  if (f.lipschitz_hint()) out.set_lipschitz_hint(*f.lipschitz_hint());
  return out;
}

EuclideanMap compose_with_stereographic(const SphereMap& f) {
  auto base = std::make_shared<SphereMap>(f);
  const int m = f.source_dim();
  EuclideanMap g(m, f.target_dim(),
                 [base](const Vec& x) { return (*base)(stereographic_inverse(x).coords()); },
                 {{"family", "stereographic_pullback"}, {"params", {{"base", f.descriptor()}}}});
  if (f.pole_constant_radius()) {
    g.support_radius = 1.0 / std::tan(0.5 * *f.pole_constant_radius());
    g.far_value = f(f.south_pole());
  }
  return g;
}

// --------------------------------------------------------------- factory

namespace {

void check_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  require(obj.is_object(), ErrorCode::Config, where + " must be a JSON object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    require(ok.count(it.key()) > 0, ErrorCode::Config, "unknown key '" + it.key() + "' in " + where);
  }
}

int get_int(const json& p, const char* key, const std::string& where) {
  require(p.contains(key) && p[key].is_number_integer(), ErrorCode::Config,
          where + ": integer parameter '" + key + "' is required");
  return p[key].get<int>();
}

Mat matrix_from(const json& v, int dim, const std::string& where) {
  require(v.is_array() && static_cast<int>(v.size()) == dim * dim, ErrorCode::Config,
          where + ": matrix must be a flat column-major array of size dim^2");
  Mat q(dim, dim);
  for (int i = 0; i < dim * dim; ++i) q.data()[i] = v[i].get<double>();
  require((q.transpose() * q - Mat::Identity(dim, dim)).norm() < 1e-9, ErrorCode::Config,
          where + ": matrix must be orthogonal");
  return q;
}

}  // namespace

SphereMap make_map(const json& spec) {
  check_keys(spec, {"family", "params"}, "map spec");
  require(spec.contains("family") && spec["family"].is_string(), ErrorCode::Config,
          "map spec needs a string 'family'");
  const std::string fam = spec["family"];
  const json params = spec.value("params", json::object());
  const std::string where = "params of family '" + fam + "'";
  if (fam == "identity") {
    check_keys(params, {"m"}, where);
    const int m = get_int(params, "m", where);
    require(m >= 1 && m + 1 <= kMaxDim, ErrorCode::Config, where + ": m out of range");
    return identity_map(m);
  }
  if (fam == "constant") {
    check_keys(params, {"m", "value"}, where);
    const int m = get_int(params, "m", where);
    require(params.contains("value") && params["value"].is_array() && !params["value"].empty() &&
                params["value"].size() <= kMaxDim,
            ErrorCode::Config, where + ": 'value' must be a non-empty array");
    Vec v(static_cast<int>(params["value"].size()));
    for (int i = 0; i < v.size(); ++i) v[i] = params["value"][i].get<double>();
    return constant_map(m, v);
  }
  if (fam == "bubble") {
    check_keys(params, {"n", "d"}, where);
    const int n = get_int(params, "n", where);
    require(n == 1 || n == 2, ErrorCode::Config, where + ": n must be 1 or 2");
    return bubble_map(n, get_int(params, "d", where));
  }
  if (fam == "whitehead") {
    check_keys(params, {"n", "k", "half", "pole_on_torus"}, where);
    const int n = get_int(params, "n", where);
    const int k = get_int(params, "k", where);
    const bool half = params.value("half", false);
    const bool torus = params.value("pole_on_torus", false);
    require(!(half && torus), ErrorCode::Config, where + ": 'half' and 'pole_on_torus' are exclusive");
    if (half) return whitehead_half_map(n, k);
    if (torus) return whitehead_map_pole_on_torus(n, k);
    return whitehead_map(n, k);
  }
  if (fam == "hopf") {
    check_keys(params, {"capped", "cap_radius"}, where);
    return hopf_fibration(params.value("capped", false), params.value("cap_radius", kDefaultCapRadius));
  }
  if (fam == "hopf_bubble") {
    check_keys(params, {"k"}, where);
    return hopf_bubble_map(get_int(params, "k", where));
  }
  if (fam == "scaled") {
    check_keys(params, {"lambda", "base"}, where);
    require(params.contains("lambda") && params["lambda"].is_number() && params.contains("base"),
            ErrorCode::Config, where + ": needs numeric 'lambda' and 'base'");
    return scale_map(make_map(params["base"]), params["lambda"].get<double>());
  }
  if (fam == "capped") {
    check_keys(params, {"radius", "base"}, where);
    require(params.contains("radius") && params["radius"].is_number() && params.contains("base"),
            ErrorCode::Config, where + ": needs numeric 'radius' and 'base'");
    return cap_at_pole(make_map(params["base"]), params["radius"].get<double>());
  }
  if (fam == "rotated_domain" || fam == "rotated_target") {
    check_keys(params, {"matrix", "base"}, where);
    require(params.contains("matrix") && params.contains("base"), ErrorCode::Config,
            where + ": needs 'matrix' and 'base'");
    const SphereMap base = make_map(params["base"]);
    if (fam == "rotated_domain") {
      return rotate_domain(base, matrix_from(params["matrix"], base.source_dim() + 1, where));
    }
    return rotate_target(base, matrix_from(params["matrix"], base.target_dim(), where));
  }
  fail(ErrorCode::Config, "unknown map family '" + fam + "'");
}

}  // namespace hopfdeg
