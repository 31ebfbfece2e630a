#include "hopfdeg/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace hopfdeg {

UnitVector::UnitVector(const Vec& v) {
  const double n = v.norm();
  require(v.size() >= 2, ErrorCode::InvalidArgument, "unit vector needs ambient dimension >= 2");
  require(n > 1e-300 && std::isfinite(n), ErrorCode::InvalidArgument,
          "cannot normalize a zero or non-finite vector");
  c_ = v / n;
}

Vec SphereMap::south_pole() const {
  Vec s = Vec::Zero(m_ + 1);
  s[m_] = -1.0;
  return s;
}

SphereMap::SphereMap(int source_dim, int target_dim, bool sphere_valued, Eval eval,
                     nlohmann::json descriptor)
    : m_(source_dim),
      l_(target_dim),
      sphere_valued_(sphere_valued),
      eval_(std::move(eval)),
      descriptor_(std::move(descriptor)) {
  require(m_ >= 1 && m_ + 1 <= kMaxDim && l_ >= 1 && l_ <= kMaxDim,
          ErrorCode::InvalidArgument, "sphere map dimensions out of range");
}

// ---------------------------------------------------------------- charts

UnitVector stereographic_inverse(const Vec& x) {
  const int m = static_cast<int>(x.size());
  const double r2 = x.squaredNorm();
  Vec p(m + 1);
  if (!std::isfinite(r2)) {
    p.setZero();
    p[m] = -1.0;
    return UnitVector(p);
  }
  const double den = 1.0 + r2;
  p.head(m) = (2.0 / den) * x;
  p[m] = (1.0 - r2) / den;
  return UnitVector(p);
}

Vec stereographic_forward_raw(const Vec& p) {
  const int m = static_cast<int>(p.size()) - 1;
  const double den = 1.0 + p[m];
  require(den > 1e-14, ErrorCode::InvalidArgument,
          "stereographic chart is undefined at the south pole");
  return p.head(m) / den;
}

Vec stereographic_forward(const UnitVector& p) { return stereographic_forward_raw(p.coords()); }

double conformal_factor(const Vec& x) { return 2.0 / (1.0 + x.squaredNorm()); }

Mat stereographic_jacobian(const Vec& x) {
  const int m = static_cast<int>(x.size());
  const double r2 = x.squaredNorm();
  const double den = 1.0 + r2;
  Mat j(m + 1, m);
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      j(a, b) = (a == b ? 2.0 / den : 0.0) - 4.0 * x[a] * x[b] / (den * den);
    }
    j(m, a) = -4.0 * x[a] / (den * den);
  }
  return j;
}

// ------------------------------------------------------- sphere helpers

Mat tangent_frame(const Vec& p) {
  const int n = static_cast<int>(p.size());
  const int m = n - 1;
  // Householder reflection H with H e_0 = -sign(p_0) p; its remaining
  // columns form an orthonormal basis of p^perp.
  Vec v = p;
  const double s = p[0] >= 0.0 ? 1.0 : -1.0;
  v[0] += s;
  const double vv = v.squaredNorm();
  Mat frame(n, m);
  for (int c = 1; c < n; ++c) {
    Vec e = Vec::Zero(n);
    e[c] = 1.0;
    frame.col(c - 1) = e - (2.0 * v[c] / vv) * v;
  }
  Mat full(n, n);
  full.col(0) = p;
  full.rightCols(m) = frame;
  if (full.determinant() < 0.0) frame.col(m - 1) *= -1.0;
  return frame;
}

Vec exp_map(const Vec& p, const Vec& v) {
  const double t = v.norm();
  if (t < 1e-300) return p;
  Vec q = std::cos(t) * p + (std::sin(t) / t) * v;
  return q / q.norm();
}

double geodesic_distance(const Vec& a, const Vec& b) {
  // atan2 form is accurate at both small and near-antipodal separations.
  const double c = a.dot(b);
  const double s = (a - c * b).norm();
  return std::atan2(s, c);
}

// ----------------------------------------------------------- multi-indices

namespace {

struct IndexTables {
  std::array<std::array<std::vector<std::vector<int>>, kMaxDim + 1>, kMaxDim + 1> combos;
  std::array<std::array<int, 1 << kMaxDim>, kMaxDim + 1> position{};

  IndexTables() {
    for (int m = 0; m <= kMaxDim; ++m) {
      for (int k = 0; k <= m; ++k) {
        auto& out = combos[m][k];
        std::vector<int> c(k);
        for (int i = 0; i < k; ++i) c[i] = i;
        for (;;) {
          out.push_back(c);
          int i = k - 1;
          while (i >= 0 && c[i] == m - k + i) --i;
          if (i < 0) break;
          ++c[i];
          for (int j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
        }
        for (std::size_t pos = 0; pos < out.size(); ++pos) {
          int mask = 0;
          for (int idx : out[pos]) mask |= 1 << idx;
          position[m][mask] = static_cast<int>(pos);
        }
      }
    }
  }
};

const IndexTables& tables() {
  static const IndexTables t;
  return t;
}

int mask_of(const std::vector<int>& idx) {
  int mask = 0;
  for (int i : idx) mask |= 1 << i;
  return mask;
}

double small_det(const Mat& a) {
  switch (a.rows()) {
    case 0:
      return 1.0;
    case 1:
      return a(0, 0);
    case 2:
      return a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    case 3:
      return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) -
             a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
             a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
    default:
      return a.determinant();
  }
}

}  // namespace

const std::vector<std::vector<int>>& multi_indices(int m, int k) {
  require(m >= 0 && m <= kMaxDim && k >= 0 && k <= m, ErrorCode::InvalidArgument,
          "multi-index request out of range");
  return tables().combos[m][k];
}

int multi_index_position(int m, const std::vector<int>& sorted) {
  return tables().position[m][mask_of(sorted)];
}

int permutation_sign(std::vector<int> idx) {
  int sign = 1;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    for (std::size_t j = i + 1; j < idx.size(); ++j) {
      if (idx[i] == idx[j]) return 0;
      if (idx[i] > idx[j]) sign = -sign;
    }
  }
  return sign;
}

// -------------------------------------------------------------- k-forms

KFormValue::KFormValue(int dim, int degree) : m_(dim), k_(degree) {
  require(dim >= 0 && dim <= kMaxDim && degree >= 0 && degree <= dim,
          ErrorCode::InvalidArgument, "k-form degree out of range");
  c_.assign(static_cast<std::size_t>(binomial(dim, degree)), 0.0);
}

KFormValue::KFormValue(int dim, int degree, std::vector<double> coeffs) : KFormValue(dim, degree) {
  require(coeffs.size() == c_.size(), ErrorCode::DimensionMismatch,
          "k-form coefficient count must equal binomial(m, k)");
  c_ = std::move(coeffs);
}

KFormValue KFormValue::basis(int dim, const std::vector<int>& indices) {
  KFormValue out(dim, static_cast<int>(indices.size()));
  const int sign = permutation_sign(indices);
  if (sign == 0) return out;
  std::vector<int> sorted = indices;
  std::sort(sorted.begin(), sorted.end());
  out[multi_index_position(dim, sorted)] = sign;
  return out;
}

double KFormValue::evaluate(const Mat& v) const {
  require(v.rows() == m_ && v.cols() == k_, ErrorCode::DimensionMismatch,
          "k-form evaluated on a wrong number of vectors");
  const auto& combos = multi_indices(m_, k_);
  double total = 0.0;
  Mat sub(k_, k_);
  for (std::size_t pos = 0; pos < combos.size(); ++pos) {
    if (c_[pos] == 0.0) continue;
    for (int r = 0; r < k_; ++r) sub.row(r) = v.row(combos[pos][r]);
    total += c_[pos] * small_det(sub);
  }
  return total;
}

double KFormValue::max_abs() const {
  double m = 0.0;
  for (double v : c_) m = std::max(m, std::abs(v));
  return m;
}

KFormValue& KFormValue::operator+=(const KFormValue& o) {
  require(o.m_ == m_ && o.k_ == k_, ErrorCode::DimensionMismatch, "adding forms of different type");
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

KFormValue& KFormValue::operator*=(double a) {
  for (double& v : c_) v *= a;
  return *this;
}

KFormValue wedge(const KFormValue& a, const KFormValue& b) {
  require(a.dim() == b.dim(), ErrorCode::DimensionMismatch, "wedge of forms on different spaces");
  const int m = a.dim();
  const int k = a.degree() + b.degree();
  require(k <= m, ErrorCode::InvalidArgument, "wedge degree exceeds the dimension");
  KFormValue out(m, k);
  const auto& ia = multi_indices(m, a.degree());
  const auto& ib = multi_indices(m, b.degree());
  for (std::size_t i = 0; i < ia.size(); ++i) {
    if (a[i] == 0.0) continue;
    const int ma = mask_of(ia[i]);
    for (std::size_t j = 0; j < ib.size(); ++j) {
      if (b[j] == 0.0 || (ma & mask_of(ib[j])) != 0) continue;
      std::vector<int> merged = ia[i];
      merged.insert(merged.end(), ib[j].begin(), ib[j].end());
      const int sign = permutation_sign(merged);
      out[tables().position[m][ma | mask_of(ib[j])]] += sign * a[i] * b[j];
    }
  }
  return out;
}

KFormValue pullback(const Mat& jacobian, const KFormValue& omega) {
  const int l = static_cast<int>(jacobian.rows());
  const int m = static_cast<int>(jacobian.cols());
  const int k = omega.degree();
  require(omega.dim() == l, ErrorCode::DimensionMismatch,
          "pullback: form dimension must equal the Jacobian row count");
  require(k <= std::min(m, l), ErrorCode::DimensionMismatch,
          "pullback: form degree exceeds min(m, l)");
  KFormValue out(m, k);
  const auto& rows = multi_indices(l, k);
  const auto& cols = multi_indices(m, k);
  Mat sub(k, k);
  for (std::size_t K = 0; K < cols.size(); ++K) {
    double acc = 0.0;
    for (std::size_t I = 0; I < rows.size(); ++I) {
      if (omega[I] == 0.0) continue;
      for (int r = 0; r < k; ++r) {
        for (int c = 0; c < k; ++c) sub(r, c) = jacobian(rows[I][r], cols[K][c]);
      }
      acc += omega[I] * small_det(sub);
    }
    out[K] = acc;
  }
  return out;
}

KFormValue hodge_star(const KFormValue& a) {
  const int m = a.dim();
  const int k = a.degree();
  KFormValue out(m, m - k);
  const auto& combos = multi_indices(m, k);
  for (std::size_t i = 0; i < combos.size(); ++i) {
    if (a[i] == 0.0) continue;
    const int mask = mask_of(combos[i]);
    std::vector<int> full = combos[i];
    std::vector<int> comp;
    for (int j = 0; j < m; ++j) {
      if (!(mask & (1 << j))) comp.push_back(j);
    }
    full.insert(full.end(), comp.begin(), comp.end());
    out[multi_index_position(m, comp)] += permutation_sign(full) * a[i];
  }
  return out;
}

// ------------------------------------------------------------ quadrature

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = z;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    double p0 = 1.0;
    double p1 = z;
    for (int j = 2; j <= n; ++j) {
      const double p2 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p0) / j;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (z * p1 - p0) / (z * z - 1.0);
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
}

QuadratureRule make_quadrature(int m, int resolution) {
  require(m >= 1 && m <= 3, ErrorCode::Unsupported, "quadrature is available on S^1, S^2, S^3 only");
  require(resolution >= 4, ErrorCode::InvalidArgument, "quadrature resolution must be >= 4");
  QuadratureRule rule;
  rule.dim = m;
  rule.resolution = resolution;
  if (m == 1) {
    rule.uniform_circle = true;
    const double h = 2.0 * kPi / resolution;
    for (int i = 0; i < resolution; ++i) {
      Vec p(2);
      p << std::cos(i * h), std::sin(i * h);
      rule.nodes.push_back(p);
      rule.weights.push_back(h);
    }
  } else if (m == 2) {
    std::vector<double> z, wz;
    gauss_legendre(resolution, z, wz);
    const int nphi = 2 * resolution;
    const double dphi = 2.0 * kPi / nphi;
    for (int j = 0; j < resolution; ++j) {
      const double rho = std::sqrt(std::max(0.0, 1.0 - z[j] * z[j]));
      for (int l = 0; l < nphi; ++l) {
        const double phi = (l + 0.5) * dphi;
        Vec p(3);
        p << rho * std::cos(phi), rho * std::sin(phi), z[j];
        rule.nodes.push_back(p);
        rule.weights.push_back(wz[j] * dphi);
      }
    }
  } else {
    const int half = (resolution + 1) / 2;
    std::vector<double> g, wg;
    gauss_legendre(half, g, wg);
    std::vector<double> u, wu;
    for (int panel = 0; panel < 2; ++panel) {
      for (int j = 0; j < half; ++j) {
        u.push_back(0.25 * (g[j] + 1.0) + 0.5 * panel);
        wu.push_back(0.25 * wg[j]);
      }
    }
    const int nxi = 2 * resolution;
    const double dxi = 2.0 * kPi / nxi;
    for (std::size_t j = 0; j < u.size(); ++j) {
      const double c = std::sqrt(1.0 - u[j]);
      const double s = std::sqrt(u[j]);
      for (int a = 0; a < nxi; ++a) {
        const double x1 = (a + 0.5) * dxi;
        for (int b = 0; b < nxi; ++b) {
          const double x2 = (b + 0.5) * dxi;
          Vec p(4);
          p << c * std::cos(x1), c * std::sin(x1), s * std::cos(x2), s * std::sin(x2);
          rule.nodes.push_back(p);
          rule.weights.push_back(0.5 * wu[j] * dxi * dxi);
        }
      }
    }
  }
  rule.mesh_width = std::pow(sphere_area(m) / static_cast<double>(rule.nodes.size()), 1.0 / m);
  return rule;
}

// ---------------------------------------------------------- volume forms

double smoothstep5(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

VolumeFormExtension VolumeFormExtension::cutoff(int m) {
  VolumeFormExtension v;
  v.m_ = m;
  v.kind_ = VolumeFormKind::Cutoff;
  v.c_ = 1.0 / sphere_area(m);
  return v;
}

VolumeFormExtension VolumeFormExtension::homogeneous(int m) {
  VolumeFormExtension v = cutoff(m);
  v.kind_ = VolumeFormKind::Homogeneous;
  return v;
}

VolumeFormExtension VolumeFormExtension::product(int m, bool normalized) {
  VolumeFormExtension v;
  v.m_ = m;
  v.kind_ = VolumeFormKind::Product;
  v.c_ = normalized ? 1.0 / ball_volume(m + 1) : 1.0;
  return v;
}

double VolumeFormExtension::chi(double r) const {
  if (kind_ != VolumeFormKind::Cutoff) return 1.0;
  if (r <= inner_radius() || r >= outer_radius()) return 0.0;
  if (r < plateau_lo()) return smoothstep5((r - inner_radius()) / (plateau_lo() - inner_radius()));
  if (r > plateau_hi()) return smoothstep5((outer_radius() - r) / (outer_radius() - plateau_hi()));
  return 1.0;
}

KFormValue VolumeFormExtension::at(const Vec& y) const {
  const int n = m_ + 1;
  require(y.size() == n, ErrorCode::DimensionMismatch, "volume form evaluated at a wrong dimension");
  KFormValue out(n, m_);
  if (kind_ == VolumeFormKind::Product) {
    std::vector<int> idx;
    for (int i = 1; i < n; ++i) idx.push_back(i);
    out[multi_index_position(n, idx)] = c_ * y[0];
    return out;
  }
  const double scale = c_ * chi(y.norm());
  if (scale == 0.0) return out;
  for (int i = 0; i < n; ++i) {
    std::vector<int> idx;
    for (int j = 0; j < n; ++j) {
      if (j != i) idx.push_back(j);
    }
    out[multi_index_position(n, idx)] = scale * ((i % 2 == 0) ? y[i] : -y[i]);
  }
  return out;
}

double VolumeFormExtension::evaluate(const Vec& y, const Mat& v) const {
  const int n = m_ + 1;
  require(y.size() == n && v.rows() == n && v.cols() == m_, ErrorCode::DimensionMismatch,
          "volume form evaluated on wrong-shaped arguments");
  if (kind_ == VolumeFormKind::Product) {
    Mat sub = v.bottomRows(m_);
    return c_ * y[0] * small_det(sub);
  }
  const double scale = c_ * chi(y.norm());
  if (scale == 0.0) return 0.0;
  Mat full(n, n);
  full.col(0) = y;
  full.rightCols(m_) = v;
  return scale * small_det(full);
}

// ------------------------------------------------------------ Jacobians

Mat numerical_jacobian(const SphereMap& f, const Vec& p, const Mat& frame, double h) {
  require(h > 0.0, ErrorCode::InvalidArgument, "finite-difference step must be positive");
  const int m = f.source_dim();
  require(p.size() == m + 1 && frame.rows() == m + 1, ErrorCode::DimensionMismatch,
          "point/frame dimension does not match the map's source sphere");
  const int cols = static_cast<int>(frame.cols());
  Mat jac(f.target_dim(), cols);
  const auto& region = f.region();
  const int r0 = region ? region(p) : 0;
  Vec f0;
  bool have_f0 = false;
  for (int c = 0; c < cols; ++c) {
    const Vec e = frame.col(c);
    const Vec pp = exp_map(p, h * e);
    const Vec pm = exp_map(p, -h * e);
    if (region) {
      const bool plus_ok = region(pp) == r0;
      const bool minus_ok = region(pm) == r0;
      if (!(plus_ok && minus_ok)) {
        if (!have_f0) {
          f0 = f(p);
          have_f0 = true;
        }
        if (minus_ok) {
          const Vec pm2 = exp_map(p, -2.0 * h * e);
          if (region(pm2) == r0) {
            jac.col(c) = (3.0 * f0 - 4.0 * f(pm) + f(pm2)) / (2.0 * h);
            continue;
          }
        } else if (plus_ok) {
          const Vec pp2 = exp_map(p, 2.0 * h * e);
          if (region(pp2) == r0) {
            jac.col(c) = (-3.0 * f0 + 4.0 * f(pp) - f(pp2)) / (2.0 * h);
            continue;
          }
        }
      }
    }
    jac.col(c) = (f(pp) - f(pm)) / (2.0 * h);
  }
  return jac;
}

Mat numerical_jacobian(const SphereMap& f, const Vec& p, double h) {
  return numerical_jacobian(f, p, tangent_frame(p), h);
}

Mat numerical_jacobian(const SphereMap& f, const UnitVector& p, double h) {
  return numerical_jacobian(f, p.coords(), h);
}

double operator_norm(const Mat& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(a);
  return svd.singularValues()[0];
}

}  // namespace hopfdeg
