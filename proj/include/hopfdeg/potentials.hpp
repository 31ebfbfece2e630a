#pragma once

#include "hopfdeg/geometry.hpp"
#include "hopfdeg/sphere_map.hpp"

#include <complex>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

namespace hopfdeg {

enum class Boundary { Periodic, ZeroPadded };

// Derivative discretization. Centered2/Centered4 are the standard central
// stencils; Spectral differentiates the trigonometric interpolant.
enum class Stencil { Centered2, Centered4, Spectral };

// Nodes x_i = -L + i h, h = 2L / N, on every axis.
struct GridSpec {
  int dim = 3;
  int n = 64;
  double half_width = 1.0;
  Boundary boundary = Boundary::ZeroPadded;

  double h() const { return 2.0 * half_width / n; }
  double coord(int i) const { return -half_width + i * h(); }
  std::size_t points() const;
};

class GridField {
 public:
  GridField() = default;
  GridField(const GridSpec& spec, int degree);

  const GridSpec& spec() const { return spec_; }
  int dim() const { return spec_.dim; }
  int degree() const { return k_; }
  int components() const { return static_cast<int>(binomial(spec_.dim, k_)); }
  std::size_t points() const { return spec_.points(); }

  double* component(int c) { return data_.data() + static_cast<std::size_t>(c) * points(); }
  const double* component(int c) const { return data_.data() + static_cast<std::size_t>(c) * points(); }
  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  // C-order linear index (last axis fastest).
  std::size_t index(const int* ijk) const;
  void unravel(std::size_t idx, int* ijk) const;
  Vec position(std::size_t idx) const;

  KFormValue value(std::size_t idx) const;
  void set_value(std::size_t idx, const KFormValue& v);

  double max_abs() const;
  // Largest |value| on the outermost `cells`-thick shell of the box.
  double shell_max(int cells = 2) const;

  GridField& operator+=(const GridField& o);
  GridField& operator*=(double a);

  // Flat binary layout: magic "HDGRID01", int32 m, k, N, convention, float64
  // L, then C(m,k) x N^m little-endian float64 values, component-major and
  // C-order within a component.
  void write(std::ostream& out) const;
  static GridField read(std::istream& in);

 private:
  GridSpec spec_;
  int k_ = 0;
  std::vector<double> data_;
};

GridField sample_form(const GridSpec& spec, int degree,
                      const std::function<KFormValue(const Vec&)>& form);

// (dA)_J = sum_p (-1)^p d_{j_p} A_{J \ j_p}.
GridField exterior_derivative(const GridField& F, Stencil stencil = Stencil::Centered2);
// d* A = -sum_j d_j (e_j _| A), so d* = -div on 1-forms and <dA, B> = <A, d*B>.
GridField codifferential(const GridField& F, Stencil stencil = Stencil::Centered2);
// dd* + d*d.
GridField hodge_laplacian(const GridField& F, Stencil stencil = Stencil::Centered2);
// Single partial derivative of one scalar array along `axis`.
std::vector<double> partial(const GridSpec& spec, const double* values, int axis, Stencil stencil);

// Multiplier |xi|^{-order} on the periodic box; order 2 is the Newton
// potential (-Laplacian)^{-1}, order 1/2 is (-Laplacian)^{-1/4}. The zero
// mode is set to zero. Zero-padded fields must vanish on the outer shell and
// occupy at most half the box per axis.
GridField riesz_potential(const GridField& F, double order);

// Spectral (-Laplacian) of a scalar or form field, componentwise.
GridField spectral_laplacian(const GridField& F);

// h^m sum_nodes <A, B>.
double inner_product(const GridField& a, const GridField& b);
// h^m sum_nodes of the top-degree coefficient of A ^ B.
double wedge_integral(const GridField& a, const GridField& b);

struct HalfSpacePoint {
  Vec x;
  double t = 1.0;
};

// Psi(x, t) = c_m sum_y h^m t psi(y) / (t^2 + |x - y|^2)^{(m+1)/2}, with
// c_m = Gamma((m+1)/2) / pi^{(m+1)/2}. Periodic fields add the nearest image
// cells and assign the remaining kernel mass to the mean of psi.
double poisson_extension(const GridField& psi, const HalfSpacePoint& point);
double poisson_constant(int m);

// ---- commutator experiment ----

// f(x) = base + sum_j a_j sin(<k_j, x> + phi_j), 2 pi periodic on every axis.
struct TrigTerm {
  Vec amplitude;  // in R^l
  std::vector<int> wavevector;
  double phase = 0.0;
};

class TrigPolynomialMap {
 public:
  TrigPolynomialMap(int dim, int target_dim, Vec base, std::vector<TrigTerm> terms);

  int dim() const { return m_; }
  int target_dim() const { return l_; }
  Vec operator()(const Vec& x) const;
  Mat jacobian(const Vec& x) const;
  // f(M x): every wavevector multiplied by M.
  TrigPolynomialMap with_frequency(int multiplier) const;
  bool constant() const { return terms_.empty(); }
  // Largest |k_j| component over all terms.
  int max_frequency() const;
  EuclideanMap as_euclidean() const;

 private:
  int m_;
  int l_;
  Vec base_;
  std::vector<TrigTerm> terms_;
};

// A compactly supported k-form on R^l with known sup norms of its
// coefficients and of their first derivatives.
struct CompactForm {
  int dim = 3;
  int degree = 2;
  std::function<KFormValue(const Vec&)> eval;
  double sup_norm = 0.0;
  double sup_derivative = 0.0;

  CompactForm scaled(double lambda) const;
};

// h(|y - center|) dy^a ^ dy^b with h = 1 on [0, r1], smoothstep down to 0 at r2.
CompactForm radial_bump_form(int dim, int a, int b, const Vec& center, double r1, double r2);

struct CommutatorOptions {
  int grid_n = 0;  // 0: choose from the map's highest frequency
  std::uint64_t seed = 1;
  std::size_t mc_samples = 200000;
};

struct CommutatorResult {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  double seminorm_low = 0.0;       // [f]_{W^{1-1/(2k), 2k}}
  double seminorm_critical = 0.0;  // [f]_{W^{s, m/s}}
  double seminorm_low_se = 0.0;
  double seminorm_critical_se = 0.0;
  int grid_n = 0;
};

// lhs = ||(-Laplacian)^{-1/4} f^*kappa||_{L^2}^2 on the periodic cell,
// rhs = [f]_{W^{1-1/2k,2k}}^{2k} ||kappa||^{2-1/s} (||kappa|| + ||D kappa|| [f]_{W^{s,m/s}})^{1/s}.
CommutatorResult commutator_experiment(const TrigPolynomialMap& f, const CompactForm& kappa, double s,
                                       const CommutatorOptions& options = {});

}  // namespace hopfdeg
