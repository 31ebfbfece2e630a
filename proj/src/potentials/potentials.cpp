#include "hopfdeg/potentials.hpp"

#include "hopfdeg/parallel.hpp"
#include "hopfdeg/sobolev.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <mutex>
#include <ostream>

namespace hopfdeg {

static_assert(std::endian::native == std::endian::little, "grid serialization assumes little-endian");

std::size_t GridSpec::points() const {
  std::size_t p = 1;
  for (int i = 0; i < dim; ++i) p *= static_cast<std::size_t>(n);
  return p;
}

GridField::GridField(const GridSpec& spec, int degree) : spec_(spec), k_(degree) {
  require(spec.dim >= 1 && spec.dim <= kMaxDim && degree >= 0 && degree <= spec.dim,
          ErrorCode::InvalidArgument, "grid field degree out of range");
  require(spec.n >= 4 && spec.half_width > 0.0, ErrorCode::InvalidArgument,
          "grid needs N >= 4 and L > 0");
  data_.assign(static_cast<std::size_t>(components()) * points(), 0.0);
}

std::size_t GridField::index(const int* ijk) const {
  std::size_t idx = 0;
  for (int a = 0; a < spec_.dim; ++a) idx = idx * spec_.n + ijk[a];
  return idx;
}

void GridField::unravel(std::size_t idx, int* ijk) const {
  for (int a = spec_.dim - 1; a >= 0; --a) {
    ijk[a] = static_cast<int>(idx % spec_.n);
    idx /= spec_.n;
  }
}

Vec GridField::position(std::size_t idx) const {
  int ijk[kMaxDim];
  unravel(idx, ijk);
  Vec x(spec_.dim);
  for (int a = 0; a < spec_.dim; ++a) x[a] = spec_.coord(ijk[a]);
  return x;
}

KFormValue GridField::value(std::size_t idx) const {
  KFormValue v(spec_.dim, k_);
  for (int c = 0; c < components(); ++c) v[c] = component(c)[idx];
  return v;
}

void GridField::set_value(std::size_t idx, const KFormValue& v) {
  require(v.dim() == spec_.dim && v.degree() == k_, ErrorCode::DimensionMismatch,
          "form value does not match the grid field type");
  for (int c = 0; c < components(); ++c) component(c)[idx] = v[c];
}

double GridField::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

double GridField::shell_max(int cells) const {
  double m = 0.0;
  int ijk[kMaxDim];
  for (std::size_t idx = 0; idx < points(); ++idx) {
    unravel(idx, ijk);
    bool shell = false;
    for (int a = 0; a < spec_.dim; ++a) {
      if (ijk[a] < cells || ijk[a] >= spec_.n - cells) shell = true;
    }
    if (!shell) continue;
    for (int c = 0; c < components(); ++c) m = std::max(m, std::abs(component(c)[idx]));
  }
  return m;
}

GridField& GridField::operator+=(const GridField& o) {
  require(o.spec_.dim == spec_.dim && o.spec_.n == spec_.n && o.k_ == k_, ErrorCode::DimensionMismatch,
          "adding grid fields of different shape");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

GridField& GridField::operator*=(double a) {
  for (double& v : data_) v *= a;
  return *this;
}

namespace {
constexpr char kMagic[8] = {'H', 'D', 'G', 'R', 'I', 'D', '0', '1'};
}

void GridField::write(std::ostream& out) const {
  out.write(kMagic, 8);
  const std::int32_t header[4] = {spec_.dim, k_, spec_.n,
                                  spec_.boundary == Boundary::Periodic ? 1 : 0};
  out.write(reinterpret_cast<const char*>(header), sizeof(header));
  out.write(reinterpret_cast<const char*>(&spec_.half_width), sizeof(double));
  out.write(reinterpret_cast<const char*>(data_.data()),
            static_cast<std::streamsize>(data_.size() * sizeof(double)));
  require(static_cast<bool>(out), ErrorCode::Io, "failed to write grid field");
}

GridField GridField::read(std::istream& in) {
  char magic[8];
  in.read(magic, 8);
  require(in && std::memcmp(magic, kMagic, 8) == 0, ErrorCode::Io, "not a grid field stream");
  std::int32_t header[4];
  in.read(reinterpret_cast<char*>(header), sizeof(header));
  GridSpec spec;
  spec.dim = header[0];
  spec.n = header[2];
  spec.boundary = header[3] == 1 ? Boundary::Periodic : Boundary::ZeroPadded;
  in.read(reinterpret_cast<char*>(&spec.half_width), sizeof(double));
  require(static_cast<bool>(in), ErrorCode::Io, "truncated grid field header");
  GridField f(spec, header[1]);
  in.read(reinterpret_cast<char*>(f.data_.data()),
          static_cast<std::streamsize>(f.data_.size() * sizeof(double)));
  require(static_cast<bool>(in), ErrorCode::Io, "truncated grid field data");
  return f;
}

GridField sample_form(const GridSpec& spec, int degree,
                      const std::function<KFormValue(const Vec&)>& form) {
  GridField out(spec, degree);
  parallel_for(out.points(), [&](std::size_t idx) { out.set_value(idx, form(out.position(idx))); }, 1024);
  return out;
}

// ------------------------------------------------------------------ FFT

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

class Spectral {
 public:
  explicit Spectral(const GridSpec& spec) : spec_(spec) {
    dims_.assign(spec.dim, spec.n);
    real_size_ = spec.points();
    complex_size_ = real_size_ / spec.n * (spec.n / 2 + 1);
  }

  std::size_t complex_size() const { return complex_size_; }

  std::vector<std::complex<double>> forward(const double* in) const {
    std::vector<double> tmp(in, in + real_size_);
    std::vector<std::complex<double>> out(complex_size_);
    fftw_plan plan;
    {
      std::lock_guard<std::mutex> lock(planner_mutex());
      plan = fftw_plan_dft_r2c(spec_.dim, dims_.data(), tmp.data(),
                               reinterpret_cast<fftw_complex*>(out.data()), FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
      std::lock_guard<std::mutex> lock(planner_mutex());
      fftw_destroy_plan(plan);
    }
    return out;
  }

  std::vector<double> inverse(std::vector<std::complex<double>> spec) const {
    std::vector<double> out(real_size_);
    fftw_plan plan;
    {
      std::lock_guard<std::mutex> lock(planner_mutex());
      plan = fftw_plan_dft_c2r(spec_.dim, dims_.data(), reinterpret_cast<fftw_complex*>(spec.data()),
                               out.data(), FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
      std::lock_guard<std::mutex> lock(planner_mutex());
      fftw_destroy_plan(plan);
    }
    const double scale = 1.0 / static_cast<double>(real_size_);
    for (double& v : out) v *= scale;
    return out;
  }

  // Signed integer wave numbers of complex index c; returns false at a Nyquist
  // index on any axis.
  bool modes(std::size_t c, int* kk) const {
    const int n = spec_.n;
    const int last = n / 2 + 1;
    bool nyquist = false;
    kk[spec_.dim - 1] = static_cast<int>(c % last);
    if (kk[spec_.dim - 1] == n / 2) nyquist = true;
    c /= last;
    for (int a = spec_.dim - 2; a >= 0; --a) {
      int j = static_cast<int>(c % n);
      c /= n;
      if (j == n / 2) nyquist = true;
      kk[a] = j <= n / 2 ? j : j - n;
    }
    return !nyquist;
  }

  double unit() const { return kPi / spec_.half_width; }

 private:
  GridSpec spec_;
  std::vector<int> dims_;
  std::size_t real_size_ = 0;
  std::size_t complex_size_ = 0;
};

template <class Multiplier>
std::vector<double> apply_multiplier(const GridSpec& spec, const double* values, Multiplier&& mult) {
  Spectral sp(spec);
  auto hat = sp.forward(values);
  const double u = sp.unit();
  parallel_for(hat.size(), [&](std::size_t c) {
    int kk[kMaxDim];
    const bool regular = sp.modes(c, kk);
    double xi[kMaxDim];
    for (int a = 0; a < spec.dim; ++a) xi[a] = u * kk[a];
    hat[c] *= mult(xi, regular);
  }, 4096);
  return sp.inverse(std::move(hat));
}

std::size_t axis_stride(const GridSpec& spec, int axis) {
  std::size_t s = 1;
  for (int a = axis + 1; a < spec.dim; ++a) s *= spec.n;
  return s;
}

}  // namespace

std::vector<double> partial(const GridSpec& spec, const double* v, int axis, Stencil stencil) {
  require(axis >= 0 && axis < spec.dim, ErrorCode::InvalidArgument, "derivative axis out of range");
  const std::size_t total = spec.points();
  if (stencil == Stencil::Spectral) {
    return apply_multiplier(spec, v, [axis](const double* xi, bool regular) {
      return regular ? std::complex<double>(0.0, xi[axis]) : std::complex<double>(0.0, 0.0);
    });
  }
  std::vector<double> out(total, 0.0);
  const std::size_t stride = axis_stride(spec, axis);
  const int n = spec.n;
  const double h = spec.h();
  const bool periodic = spec.boundary == Boundary::Periodic;
  auto at = [&](std::size_t idx, int i, int off) -> double {
    int j = i + off;
    if (j < 0 || j >= n) {
      if (!periodic) return 0.0;
      j = (j % n + n) % n;
    }
    return v[idx + static_cast<std::ptrdiff_t>(j - i) * static_cast<std::ptrdiff_t>(stride)];
  };
  parallel_for(total, [&](std::size_t idx) {
    const int i = static_cast<int>((idx / stride) % n);
    if (stencil == Stencil::Centered2) {
      out[idx] = (at(idx, i, 1) - at(idx, i, -1)) / (2.0 * h);
    } else {
      out[idx] = (-at(idx, i, 2) + 8.0 * at(idx, i, 1) - 8.0 * at(idx, i, -1) + at(idx, i, -2)) /
                 (12.0 * h);
    }
  }, 4096);
  return out;
}

GridField exterior_derivative(const GridField& F, Stencil stencil) {
  const int m = F.dim();
  const int k = F.degree();
  require(k < m, ErrorCode::InvalidArgument, "exterior derivative of a top-degree field");
  GridField out(F.spec(), k + 1);
  const auto& outs = multi_indices(m, k + 1);
  for (std::size_t J = 0; J < outs.size(); ++J) {
    double* dst = out.component(static_cast<int>(J));
    for (int p = 0; p <= k; ++p) {
      std::vector<int> rest;
      for (int q = 0; q <= k; ++q) {
        if (q != p) rest.push_back(outs[J][q]);
      }
      const int src = multi_index_position(m, rest);
      const auto d = partial(F.spec(), F.component(src), outs[J][p], stencil);
      const double sign = (p % 2 == 0) ? 1.0 : -1.0;
      for (std::size_t i = 0; i < d.size(); ++i) dst[i] += sign * d[i];
    }
  }
  return out;
}

GridField codifferential(const GridField& F, Stencil stencil) {
  const int m = F.dim();
  const int k = F.degree();
  require(k >= 1, ErrorCode::InvalidArgument, "codifferential of a 0-form");
  GridField out(F.spec(), k - 1);
  const auto& outs = multi_indices(m, k - 1);
  for (std::size_t I = 0; I < outs.size(); ++I) {
    double* dst = out.component(static_cast<int>(I));
    for (int j = 0; j < m; ++j) {
      if (std::find(outs[I].begin(), outs[I].end(), j) != outs[I].end()) continue;
      std::vector<int> merged{j};
      merged.insert(merged.end(), outs[I].begin(), outs[I].end());
      const int sign = permutation_sign(merged);
      std::sort(merged.begin(), merged.end());
      const int src = multi_index_position(m, merged);
      const auto d = partial(F.spec(), F.component(src), j, stencil);
      for (std::size_t i = 0; i < d.size(); ++i) dst[i] -= sign * d[i];
    }
  }
  return out;
}

GridField hodge_laplacian(const GridField& F, Stencil stencil) {
  const int k = F.degree();
  GridField out(F.spec(), k);
  if (k >= 1) out += exterior_derivative(codifferential(F, stencil), stencil);
  if (k < F.dim()) out += codifferential(exterior_derivative(F, stencil), stencil);
  return out;
}

namespace {

void check_compact(const GridField& F) {
  if (F.spec().boundary == Boundary::Periodic) return;
  const double peak = F.max_abs();
  if (peak == 0.0) return;
  const double shell = F.shell_max(2);
  require(shell <= 1e-12 * peak, ErrorCode::SupportViolation,
          "field is not compactly supported inside the box (outer-shell max " + std::to_string(shell) +
              ", peak " + std::to_string(peak) + "); tag it periodic to solve on the torus");
  const int m = F.dim();
  std::vector<int> lo(m, F.spec().n), hi(m, -1);
  int ijk[kMaxDim];
  for (std::size_t idx = 0; idx < F.points(); ++idx) {
    bool any = false;
    for (int c = 0; c < F.components(); ++c) {
      if (std::abs(F.component(c)[idx]) > 1e-12 * peak) any = true;
    }
    if (!any) continue;
    F.unravel(idx, ijk);
    for (int a = 0; a < m; ++a) {
      lo[a] = std::min(lo[a], ijk[a]);
      hi[a] = std::max(hi[a], ijk[a]);
    }
  }
  for (int a = 0; a < m; ++a) {
    require(hi[a] - lo[a] + 1 <= F.spec().n / 2, ErrorCode::SupportViolation,
            "support exceeds half the box along an axis; periodic images would interact");
  }
}

}  // namespace

GridField riesz_potential(const GridField& F, double order) {
  require(order > 0.0, ErrorCode::InvalidArgument, "Riesz potential order must be positive");
  check_compact(F);
  GridField out(F.spec(), F.degree());
  const int m = F.dim();
  for (int c = 0; c < F.components(); ++c) {
    const auto r = apply_multiplier(F.spec(), F.component(c), [order, m](const double* xi, bool) {
      double k2 = 0.0;
      for (int a = 0; a < m; ++a) k2 += xi[a] * xi[a];
      return k2 == 0.0 ? std::complex<double>(0.0, 0.0)
                       : std::complex<double>(std::pow(k2, -0.5 * order), 0.0);
    });
    std::copy(r.begin(), r.end(), out.component(c));
  }
  return out;
}

GridField spectral_laplacian(const GridField& F) {
  GridField out(F.spec(), F.degree());
  const int m = F.dim();
  for (int c = 0; c < F.components(); ++c) {
    const auto r = apply_multiplier(F.spec(), F.component(c), [m](const double* xi, bool) {
      double k2 = 0.0;
      for (int a = 0; a < m; ++a) k2 += xi[a] * xi[a];
      return std::complex<double>(k2, 0.0);
    });
    std::copy(r.begin(), r.end(), out.component(c));
  }
  return out;
}

double inner_product(const GridField& a, const GridField& b) {
  require(a.dim() == b.dim() && a.spec().n == b.spec().n && a.degree() == b.degree(),
          ErrorCode::DimensionMismatch, "inner product of different field types");
  const double vol = std::pow(a.spec().h(), a.dim());
  const std::size_t total = a.data().size();
  return vol * chunked_sum(total, 4096, [&](std::size_t i) { return a.data()[i] * b.data()[i]; });
}

double wedge_integral(const GridField& a, const GridField& b) {
  const int m = a.dim();
  require(b.dim() == m && a.spec().n == b.spec().n && a.degree() + b.degree() == m,
          ErrorCode::DimensionMismatch, "wedge integral needs complementary degrees on one grid");
  struct Term {
    int ia, ib;
    double sign;
  };
  std::vector<Term> terms;
  const auto& ca = multi_indices(m, a.degree());
  const auto& cb = multi_indices(m, b.degree());
  for (std::size_t i = 0; i < ca.size(); ++i) {
    for (std::size_t j = 0; j < cb.size(); ++j) {
      std::vector<int> merged = ca[i];
      merged.insert(merged.end(), cb[j].begin(), cb[j].end());
      const int sign = permutation_sign(merged);
      if (sign != 0) terms.push_back({static_cast<int>(i), static_cast<int>(j), double(sign)});
    }
  }
  const double vol = std::pow(a.spec().h(), m);
  return vol * chunked_sum(a.points(), 4096, [&](std::size_t idx) {
    double acc = 0.0;
    for (const Term& t : terms) acc += t.sign * a.component(t.ia)[idx] * b.component(t.ib)[idx];
    return acc;
  });
}

// ------------------------------------------------------------- Poisson

double poisson_constant(int m) {
  return std::tgamma(0.5 * (m + 1)) / std::pow(kPi, 0.5 * (m + 1));
}

double poisson_extension(const GridField& psi, const HalfSpacePoint& point) {
  require(psi.degree() == 0, ErrorCode::InvalidArgument, "Poisson extension takes a scalar field");
  require(point.t > 0.0, ErrorCode::InvalidArgument, "half-space point needs t > 0");
  const int m = psi.dim();
  require(point.x.size() == m, ErrorCode::DimensionMismatch, "half-space point has the wrong dimension");
  const GridSpec& spec = psi.spec();
  const double cm = poisson_constant(m);
  const double vol = std::pow(spec.h(), m);
  const double t = point.t;
  const double expo = 0.5 * (m + 1);
  const bool periodic = spec.boundary == Boundary::Periodic;
  const double period = 2.0 * spec.half_width;
  std::vector<std::vector<int>> shifts;
  if (periodic) {
    int count = 1;
    for (int a = 0; a < m; ++a) count *= 3;
    for (int s = 0; s < count; ++s) {
      std::vector<int> sh(m);
      int r = s;
      for (int a = 0; a < m; ++a) {
        sh[a] = r % 3 - 1;
        r /= 3;
      }
      shifts.push_back(sh);
    }
  } else {
    shifts.push_back(std::vector<int>(m, 0));
  }
  double sum = 0.0;
  double mass = 0.0;
  double mean = 0.0;
  const std::size_t total = psi.points();
  const std::size_t nchunks = (total + 4095) / 4096;
  std::vector<double> ps(nchunks), pm(nchunks), pv(nchunks);
  parallel_chunks(total, 4096, [&](std::size_t b, std::size_t e, std::size_t c) {
    double s_acc = 0.0, m_acc = 0.0, v_acc = 0.0;
    for (std::size_t idx = b; idx < e; ++idx) {
      const Vec y = psi.position(idx);
      const double val = psi.component(0)[idx];
      v_acc += val;
      for (const auto& sh : shifts) {
        double r2 = t * t;
        for (int a = 0; a < m; ++a) {
          const double d = point.x[a] - y[a] - sh[a] * period;
          r2 += d * d;
        }
        const double k = cm * t / std::pow(r2, expo) * vol;
        s_acc += k * val;
        m_acc += k;
      }
    }
    ps[c] = s_acc;
    pm[c] = m_acc;
    pv[c] = v_acc;
  });
  for (std::size_t c = 0; c < nchunks; ++c) {
    sum += ps[c];
    mass += pm[c];
    mean += pv[c];
  }
  mean /= static_cast<double>(total);
  if (periodic) sum += (1.0 - mass) * mean;
  return sum;
}

// ---------------------------------------------------------- commutator

TrigPolynomialMap::TrigPolynomialMap(int dim, int target_dim, Vec base, std::vector<TrigTerm> terms)
    : m_(dim), l_(target_dim), base_(std::move(base)), terms_(std::move(terms)) {
  require(base_.size() == l_, ErrorCode::DimensionMismatch, "trig map base has the wrong dimension");
  for (const auto& t : terms_) {
    require(t.amplitude.size() == l_ && static_cast<int>(t.wavevector.size()) == m_,
            ErrorCode::DimensionMismatch, "trig term has the wrong shape");
  }
}

Vec TrigPolynomialMap::operator()(const Vec& x) const {
  Vec out = base_;
  for (const auto& t : terms_) {
    double ph = t.phase;
    for (int a = 0; a < m_; ++a) ph += t.wavevector[a] * x[a];
    out += std::sin(ph) * t.amplitude;
  }
  return out;
}

Mat TrigPolynomialMap::jacobian(const Vec& x) const {
  Mat j = Mat::Zero(l_, m_);
  for (const auto& t : terms_) {
    double ph = t.phase;
    for (int a = 0; a < m_; ++a) ph += t.wavevector[a] * x[a];
    const double c = std::cos(ph);
    for (int a = 0; a < m_; ++a) j.col(a) += (c * t.wavevector[a]) * t.amplitude;
  }
  return j;
}

int TrigPolynomialMap::max_frequency() const {
  int k = 0;
  for (const auto& t : terms_) {
    for (int w : t.wavevector) k = std::max(k, std::abs(w));
  }
  return k;
}

TrigPolynomialMap TrigPolynomialMap::with_frequency(int multiplier) const {
  std::vector<TrigTerm> terms = terms_;
  for (auto& t : terms) {
    for (int& k : t.wavevector) k *= multiplier;
  }
  return TrigPolynomialMap(m_, l_, base_, terms);
}

EuclideanMap TrigPolynomialMap::as_euclidean() const {
  const TrigPolynomialMap self = *this;
  EuclideanMap g(m_, l_, [self](const Vec& x) { return self(x); },
                 {{"family", "trig_polynomial"}, {"params", {{"terms", terms_.size()}}}});
  g.period = 2.0 * kPi;
  return g;
}

CompactForm CompactForm::scaled(double lambda) const {
  CompactForm out = *this;
  const auto base = eval;
  out.eval = [base, lambda](const Vec& y) {
    KFormValue v = base(y);
    v *= lambda;
    return v;
  };
  out.sup_norm = std::abs(lambda) * sup_norm;
  out.sup_derivative = std::abs(lambda) * sup_derivative;
  return out;
}

CompactForm radial_bump_form(int dim, int a, int b, const Vec& center, double r1, double r2) {
  require(r2 > r1 && r1 >= 0.0, ErrorCode::InvalidArgument, "bump form needs 0 <= r1 < r2");
  CompactForm k;
  k.dim = dim;
  k.degree = 2;
  const KFormValue basis = KFormValue::basis(dim, {a, b});
  k.eval = [basis, center, r1, r2](const Vec& y) {
    const double r = (y - center).norm();
    KFormValue v = basis;
    v *= r <= r1 ? 1.0 : smoothstep5((r2 - r) / (r2 - r1));
    return v;
  };
  k.sup_norm = 1.0;
  // max of the quintic smoothstep derivative is 30/16.
  k.sup_derivative = 1.875 / (r2 - r1);
  return k;
}

CommutatorResult commutator_experiment(const TrigPolynomialMap& f, const CompactForm& kappa, double s,
                                       const CommutatorOptions& options) {
  require(s > 0.5 && s < 1.0, ErrorCode::InvalidArgument, "commutator experiment needs s in (1/2, 1)");
  require(kappa.dim == f.target_dim(), ErrorCode::DimensionMismatch, "form and map target differ");
  const int m = f.dim();
  const int k = kappa.degree;
  require(k >= 1 && k <= m, ErrorCode::InvalidArgument, "form degree must lie in [1, m]");
  CommutatorResult res;
  int n = options.grid_n;
  if (n == 0) n = std::max(32, 4 * ((12 * f.max_frequency() + 3) / 4));
  require(n >= 8 && n % 2 == 0, ErrorCode::InvalidArgument, "commutator grid needs an even N >= 8");
  res.grid_n = n;

  GridSpec spec;
  spec.dim = m;
  spec.n = n;
  spec.half_width = kPi;
  spec.boundary = Boundary::Periodic;
  const GridField F = sample_form(spec, k, [&](const Vec& x) {
    return pullback(f.jacobian(x), kappa.eval(f(x)));
  });
  const GridField psi = riesz_potential(F, 0.5);
  res.lhs = inner_product(psi, psi);

  const EuclideanMap g = f.as_euclidean();
  EuclideanSampling sampling;
  sampling.kind = EuclideanSampling::Kind::PeriodicCell;
  sampling.cell_lo = -kPi;
  sampling.cell_hi = kPi;
  sampling.r0 = 1.0 / std::max(1, f.max_frequency());
  if (!f.constant()) {
    SeminormSpec low;
    low.s = 1.0 - 1.0 / (2.0 * k);
    low.p = 2.0 * k;
    low.dim = m;
    low.domain = SeminormDomain::Euclidean;
    const auto lo = fractional_seminorm_mc(g, low, sampling, options.seed, options.mc_samples);
    const auto crit = fractional_seminorm_mc(g, SeminormSpec::critical(m, s, SeminormDomain::Euclidean),
                                             sampling, options.seed + 1, options.mc_samples);
    res.seminorm_low = lo.value;
    res.seminorm_low_se = lo.std_error;
    res.seminorm_critical = crit.value;
    res.seminorm_critical_se = crit.std_error;
    res.rhs = lo.p_power * std::pow(kappa.sup_norm, 2.0 - 1.0 / s) *
              std::pow(kappa.sup_norm + kappa.sup_derivative * crit.value, 1.0 / s);
  }
  res.ratio = res.lhs == 0.0 ? 0.0 : res.lhs / res.rhs;
  return res;
}

}  // namespace hopfdeg
