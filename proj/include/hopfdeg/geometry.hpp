#pragma once

#include "hopfdeg/core.hpp"
#include "hopfdeg/sphere_map.hpp"

#include <vector>

namespace hopfdeg {

class UnitVector {
 public:
  UnitVector() = default;
  // Normalizes v; throws on a (numerically) zero vector.
  explicit UnitVector(const Vec& v);

  const Vec& coords() const { return c_; }
  int sphere_dim() const { return static_cast<int>(c_.size()) - 1; }
  double operator[](int i) const { return c_[i]; }

 private:
  Vec c_;
};

// ---- stereographic chart centred at the north pole (0,...,0,1) ----

UnitVector stereographic_inverse(const Vec& x);
// Throws at the south pole.
Vec stereographic_forward(const UnitVector& p);
Vec stereographic_forward_raw(const Vec& p);
// lambda(x) = 2 / (1 + |x|^2); |det D Upsilon| = lambda^m.
double conformal_factor(const Vec& x);
// Closed-form D Upsilon(x), an (m+1) x m matrix.
Mat stereographic_jacobian(const Vec& x);

// ---- intrinsic sphere helpers ----

// Orthonormal basis of T_p S^m as columns, with det[p | E] > 0.
Mat tangent_frame(const Vec& p);
// Riemannian exponential map at p applied to the tangent vector v.
Vec exp_map(const Vec& p, const Vec& v);
double geodesic_distance(const Vec& a, const Vec& b);

// ---- pointwise k-forms ----

// Increasing multi-indices of length k from {0,...,m-1}, lexicographic.
const std::vector<std::vector<int>>& multi_indices(int m, int k);
int multi_index_position(int m, const std::vector<int>& sorted);

class KFormValue {
 public:
  KFormValue() = default;
  KFormValue(int dim, int degree);
  KFormValue(int dim, int degree, std::vector<double> coeffs);
  // dx^{i_1} ^ ... ^ dx^{i_k}; indices need not be sorted.
  static KFormValue basis(int dim, const std::vector<int>& indices);

  int dim() const { return m_; }
  int degree() const { return k_; }
  std::size_t size() const { return c_.size(); }
  double& operator[](std::size_t i) { return c_[i]; }
  double operator[](std::size_t i) const { return c_[i]; }
  const std::vector<double>& coeffs() const { return c_; }

  // Value on the k column vectors of v (dim x k).
  double evaluate(const Mat& v) const;
  double max_abs() const;

  KFormValue& operator+=(const KFormValue& o);
  KFormValue& operator*=(double a);

 private:
  int m_ = 0;
  int k_ = 0;
  std::vector<double> c_;
};

KFormValue wedge(const KFormValue& a, const KFormValue& b);
// (J^* w)_K = sum_I w_I det J[I, K]; J is l x m, w a k-form on R^l.
KFormValue pullback(const Mat& jacobian, const KFormValue& omega);
// Euclidean Hodge star, defined by a ^ *b = <a, b> dx^1 ^ ... ^ dx^m.
KFormValue hodge_star(const KFormValue& a);
// Sign of the permutation sorting `indices` (0 if an index repeats).
int permutation_sign(std::vector<int> indices);

// ---- quadrature ----

struct QuadratureRule {
  int dim = 0;
  int resolution = 0;
  std::vector<Vec> nodes;
  std::vector<double> weights;
  // Typical node spacing (|S^m| / N)^{1/m}.
  double mesh_width = 0.0;
  // Uniform rule on S^1: node i sits at angle 2 pi i / N.
  bool uniform_circle = false;

  std::size_t size() const { return nodes.size(); }
};

// S^1: uniform angles. S^2: Gauss-Legendre in z times uniform longitude.
// S^3: Hopf coordinates z1 = cos(eta) e^{i xi1}, z2 = sin(eta) e^{i xi2},
// Gauss-Legendre in u = sin^2(eta) (two panels) times uniform angles.
QuadratureRule make_quadrature(int m, int resolution);

// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w);

// ---- volume forms on S^m extended to R^{m+1} ----

enum class VolumeFormKind {
  // chi(|y|) * i_y(dy^0 ^ ... ^ dy^m) / |S^m| with a compactly supported chi.
  Cutoff,
  // i_y(dy^0 ^ ... ^ dy^m) / |S^m|; homogeneous of degree m+1.
  Homogeneous,
  // c * y^0 dy^1 ^ ... ^ dy^m with c = 1/|B^{m+1}| (or 1 if unnormalized).
  Product,
};

class VolumeFormExtension {
 public:
  static VolumeFormExtension cutoff(int m);
  static VolumeFormExtension homogeneous(int m);
  static VolumeFormExtension product(int m, bool normalized = true);

  int dim() const { return m_; }
  VolumeFormKind kind() const { return kind_; }
  double normalization() const { return c_; }
  // Support [inner, outer] and plateau [plateau_lo, plateau_hi] of chi.
  double inner_radius() const { return 0.25; }
  double plateau_lo() const { return 0.5; }
  double plateau_hi() const { return 1.5; }
  double outer_radius() const { return 1.75; }

  double chi(double r) const;
  // The m-form on R^{m+1} at y.
  KFormValue at(const Vec& y) const;
  // w_y(v_1, ..., v_m) for the columns of v, without building the form.
  double evaluate(const Vec& y, const Mat& v) const;

 private:
  int m_ = 0;
  VolumeFormKind kind_ = VolumeFormKind::Cutoff;
  double c_ = 1.0;
};

// Quintic smoothstep 0 -> 1 on [0, 1] with vanishing first and second derivatives.
double smoothstep5(double t);

// ---- differentials of sphere maps ----

inline constexpr double kDefaultFdStep = 1e-4;

// Columns are directional derivatives along the columns of `frame` (an
// orthonormal tangent frame at p), using geodesic central differences. Where
// f reports regions, stencils that would straddle a junction become one-sided
// second-order stencils.
Mat numerical_jacobian(const SphereMap& f, const Vec& p, const Mat& frame,
                       double h = kDefaultFdStep);
Mat numerical_jacobian(const SphereMap& f, const Vec& p, double h = kDefaultFdStep);
Mat numerical_jacobian(const SphereMap& f, const UnitVector& p, double h = kDefaultFdStep);

// Largest singular value.
double operator_norm(const Mat& a);

}  // namespace hopfdeg
