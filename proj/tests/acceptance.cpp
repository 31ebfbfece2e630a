// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include "hopfdeg/experiments.hpp"
#include "hopfdeg/invariants.hpp"
#include "hopfdeg/mapzoo.hpp"
#include "hopfdeg/potentials.hpp"
#include "hopfdeg/sobolev.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <sstream>
#include <string>

using namespace hopfdeg;
using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* name, const std::function<Outcome()>& body) {
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  if (!o.pass) ++failures;
  std::printf("[%s] %d %s: %s\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str());
  std::fflush(stdout);
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

GridSpec periodic(int n) {
  GridSpec g;
  g.n = n;
  g.half_width = kPi;
  g.boundary = Boundary::Periodic;
  return g;
}

// A = sin(x + 2y) cos z dx + cos(2x - z) dy + sin y sin(x + z) dz with its
// exact dA and componentwise -Laplacian.
KFormValue form_a(const Vec& p) {
  const double x = p[0], y = p[1], z = p[2];
  return KFormValue(3, 1, {std::sin(x + 2 * y) * std::cos(z), std::cos(2 * x - z), std::sin(y) * std::sin(x + z)});
}
KFormValue form_da(const Vec& p) {
  const double x = p[0], y = p[1], z = p[2];
  const double d0a1 = -2 * std::sin(2 * x - z), d1a0 = 2 * std::cos(x + 2 * y) * std::cos(z);
  const double d0a2 = std::sin(y) * std::cos(x + z), d2a0 = -std::sin(x + 2 * y) * std::sin(z);
  const double d1a2 = std::cos(y) * std::sin(x + z), d2a1 = std::sin(2 * x - z);
  return KFormValue(3, 2, {d0a1 - d1a0, d0a2 - d2a0, d1a2 - d2a1});
}
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

double fit_slope(const json& fit) { return fit.at("slope").get<double>(); }
double spread(const json& stats) { return stats.at("max_over_min").get<double>(); }

}  // namespace

int main() {
  criterion(1, "degree oracle agreement", [] {
    const auto t0 = Clock::now();
    int checked = 0;
    double worst = 0.0;
    std::string bad;
    for (int n : {1, 2}) {
      for (int d = -3; d <= 8; ++d) {
        const SphereMap f = bubble_map(n, d);
        const InvariantResult di = brouwer_degree_integral(f, make_quadrature(n, degree_resolution(f, n)));
        const InvariantResult dc = brouwer_degree_count_auto(f, 1);
        worst = std::max(worst, di.residual);
        if (di.rounded != d || di.residual >= 0.1 || dc.rounded != d) {
          bad += " n=" + std::to_string(n) + ",d=" + std::to_string(d);
        }
        ++checked;
      }
    }
    const double t = seconds_since(t0);
    const bool pass = bad.empty() && t < 60.0;
    return Outcome{pass, std::to_string(checked) + " maps, max integral residual " + fmt(worst) + ", " + fmt(t) +
                             " s" + (bad.empty() ? "" : ", mismatches:" + bad)};
  });

  criterion(2, "Hopf pipelines", [] {
    std::ostringstream os;
    bool pass = true;
    HopfGrid grid;
    grid.n = 96;
    {
      const auto t0 = Clock::now();
      const SphereMap f = hopf_fibration(true);
      const InvariantResult w = hopf_invariant_whitehead(f, grid);
      const InvariantResult l = hopf_invariant_linking_auto(f, grid, 1);
      pass = pass && w.conclusive && l.conclusive && w.rounded == 1 && l.rounded == 1 && std::abs(w.raw - 1.0) < 0.05;
      os << "capped Hopf W=" << fmt(w.raw) << " L=" << l.rounded << " (" << fmt(seconds_since(t0)) << " s)";
    }
    int sign = 0;
    for (int k : {1, 2, 3}) {
      const auto t0 = Clock::now();
      const SphereMap f = whitehead_map(1, k);
      const InvariantResult w = hopf_invariant_whitehead(f, grid);
      const InvariantResult l = hopf_invariant_linking_auto(f, grid, 1);
      const double t = seconds_since(t0);
      const long expected = 2L * k * k;
      const int s = w.rounded > 0 ? 1 : -1;
      if (sign == 0) sign = s;
      const bool ok = w.conclusive && l.conclusive && w.rounded == l.rounded && std::labs(w.rounded) == expected &&
                      s == sign && std::abs(std::abs(w.raw) - expected) < 0.05 * expected && t < 600.0;
      pass = pass && ok;
      os << "; k=" << k << " W=" << fmt(w.raw) << " L=" << (l.conclusive ? std::to_string(l.rounded) : "n/a") << " ("
         << fmt(t) << " s)";
    }
    return Outcome{pass, os.str()};
  });

  criterion(3, "gauge invariance", [] {
    const SphereMap f = whitehead_map(1, 1);
    double diff[2];
    const int ns[2] = {64, 96};
    for (int i = 0; i < 2; ++i) {
      HopfGrid grid;
      grid.n = ns[i];
      diff[i] = whitehead_integrand_check(f, grid, 1.0, 3);
    }
    const double bound = 1e-2 * 2.0;
    const bool pass = diff[0] < bound && diff[1] < bound && diff[1] < diff[0];
    return Outcome{pass, "N=64 " + fmt(diff[0]) + ", N=96 " + fmt(diff[1]) + " (bound " + fmt(bound) + ")"};
  });

  criterion(4, "exterior calculus consistency", [] {
    double err_d[2], err_adj[2], err_lap[2], dd = 0.0;
    for (int r = 0; r < 2; ++r) {
      const GridSpec g = periodic(r == 0 ? 32 : 64);
      const GridField a = sample_form(g, 1, form_a);
      const GridField b = sample_form(g, 2, form_da);
      const GridField da = exterior_derivative(a, Stencil::Centered2);
      dd = std::max(dd, exterior_derivative(da, Stencil::Centered2).max_abs());
      err_d[r] = max_diff(da, b);
      err_adj[r] = std::abs(inner_product(a, codifferential(b, Stencil::Centered2)) - inner_product(b, b));
      err_lap[r] = max_diff(hodge_laplacian(a, Stencil::Centered2), sample_form(g, 1, form_lap));
    }
    const double rd = err_d[0] / err_d[1], ra = err_adj[0] / err_adj[1], rl = err_lap[0] / err_lap[1];
    const bool pass = dd < 1e-10 && rd >= 3.5 && ra >= 3.5 && rl >= 3.5;
    return Outcome{pass, "|dd| " + fmt(dd) + ", Richardson ratios d " + fmt(rd) + " adjoint " + fmt(ra) +
                             " Laplacian " + fmt(rl)};
  });

  criterion(5, "degree sharpness slope", [] {
    std::vector<int> d_list;
    for (int d = 1; d <= 16; ++d) d_list.push_back(d);
    const ExperimentReport r = run_degree_sharpness(1, {0.6, 0.8}, d_list);
    const double a = fit_slope(r.summary["fits"]["s=0.6"]);
    const double b = fit_slope(r.summary["fits"]["s=0.8"]);
    const bool pass = std::abs(a - 1.0) <= 0.15 && std::abs(b - 1.0) <= 0.15;
    return Outcome{pass, "slope s=0.6 " + fmt(a) + ", s=0.8 " + fmt(b)};
  });

  criterion(6, "degree blow-up", [] {
    const ExperimentReport r = run_degree_blowup(1, 0.4, 0.4, {1, 2, 4, 8, 16, 32, 64});
    const double slope = fit_slope(r.summary["integral_fit"]);
    const double sem = spread(r.summary["seminorm_stats"]);
    const double deg = spread(r.summary["degree_ratio_stats"]);
    const bool pass = std::abs(slope - 0.2) <= 0.1 && sem <= 2.0 && std::isfinite(deg);
    return Outcome{pass, "integral slope " + fmt(slope) + ", seminorm max/min " + fmt(sem) +
                             ", degree ratio max/min " + fmt(deg)};
  });

  criterion(7, "Hopf sharpness ratio", [] {
    ExperimentOptions o;
    o.grid.n = 128;
    o.hopf_max_computed_k = 4;
    // k = 4 only enters the s = 1 slope, which needs four points.
    const ExperimentReport r = run_hopf_sharpness({0.8, 1.0}, {1, 2, 3, 4}, o);
    std::vector<double> ratios[2];
    for (const auto& row : r.rows) {
      if (row[1].get<int>() > 3) continue;
      ratios[row[0].get<double>() == 1.0 ? 1 : 0].push_back(row[9].get<double>());
    }
    const double a = RatioStats::of(ratios[0]).spread, b = RatioStats::of(ratios[1]).spread;
    const double slope = fit_slope(r.summary["per_s"]["s=1"]["fit"]);
    const bool pass = a <= 3.0 && b <= 3.0 && std::abs(slope - 1.0) <= 0.2;
    return Outcome{pass, "ratio max/min over k=1..3: s=0.8 " + fmt(a) + ", s=1 " + fmt(b) + "; s=1 slope " + fmt(slope)};
  });

  criterion(8, "Hopf blow-up", [] {
    const ExperimentReport r = run_hopf_blowup(0.4, 0.1, {1, 2, 4, 8});
    const double slope = fit_slope(r.summary["integral_fit"]);
    const double sem = spread(r.summary["seminorm_stats"]);
    const bool pass = std::abs(slope - 0.4) <= 0.1 && sem <= 2.0;
    return Outcome{pass, "Whitehead slope " + fmt(slope) + ", seminorm max/min " + fmt(sem)};
  });

  criterion(9, "commutator boundedness", [] {
    const ExperimentReport r = run_commutator_sweep({1, 2, 4, 8}, {0.6, 0.75, 0.9});
    bool pass = true;
    std::ostringstream os;
    for (const auto& [key, entry] : r.summary["per_s"].items()) {
      const double sp = spread(entry["ratio_stats"]);
      const double h = entry["homogeneity_rel_diff"].get<double>();
      pass = pass && sp <= 3.0 && h <= 1e-8;
      os << key << " max/min " << fmt(sp) << " homogeneity " << fmt(h) << "; ";
    }
    std::string d = os.str();
    return Outcome{pass, d.substr(0, d.size() - 2)};
  });

  criterion(10, "seminorm correctness", [] {
    double homog = 0.0;
    const SphereMap f = bubble_map(2, 2);
    const SeminormSpec spec = SeminormSpec::critical(2, 0.6);
    const double base = fractional_seminorm(f, spec, make_quadrature(2, 24)).value;
    for (double lambda : {0.5, 3.0}) {
      const double v = fractional_seminorm(scale_map(f, lambda), spec, make_quadrature(2, 24)).value;
      homog = std::max(homog, std::abs(v - lambda * base) / (lambda * base));
    }

    const SphereMap h = hopf_fibration(false);
    const SeminormEstimate a = fractional_seminorm_mc(h, SeminormSpec::critical(3, 0.8), 31, 400000);
    const SeminormEstimate b = fractional_seminorm_mc(compose_with_stereographic(h),
                                                      SeminormSpec::critical(3, 0.8, SeminormDomain::Euclidean),
                                                      EuclideanSampling{}, 32, 400000);
    const double z = std::abs(a.p_power - b.p_power) / std::hypot(a.p_power_std_error, b.p_power_std_error);

    double refine = 0.0;
    for (double s : {0.4, 0.6, 0.8}) {
      const SphereMap f1 = bubble_map(1, 4);
      const SeminormSpec c1 = SeminormSpec::critical(1, s);
      const double x1 = fractional_seminorm(f1, c1, make_quadrature(1, 2048)).value;
      const double y1 = fractional_seminorm(f1, c1, make_quadrature(1, 4096)).value;
      const SeminormSpec c2 = SeminormSpec::critical(2, s);
      const double x2 = fractional_seminorm(f, c2, make_quadrature(2, 24)).value;
      const double y2 = fractional_seminorm(f, c2, make_quadrature(2, 48)).value;
      refine = std::max({refine, std::abs(x1 - y1) / y1, std::abs(x2 - y2) / y2});
    }
    const bool pass = homog <= 1e-10 && z < 3.0 && refine < 0.02;
    return Outcome{pass, "homogeneity rel " + fmt(homog) + ", chart difference " + fmt(z) +
                             " combined SE, refinement change " + fmt(100 * refine) + "%"};
  });

  criterion(11, "determinism", [] {
    const json cfg = {{"experiment", "degree_blowup"}, {"n", 1}, {"s", 0.4}, {"sigma", 0.4},
                      {"k_list", {1, 2, 4, 8}}};
    ExperimentOptions o;
    o.seed = 7;
    const std::string a = run_experiment(cfg, o).to_csv();
    const std::string b = run_experiment(cfg, o).to_csv();
    const json cfg2 = {{"experiment", "hopf_blowup"}, {"s", 0.4}, {"sigma", 0.1}, {"k_list", {1, 2}}};
    o.mc_samples = 100000;
    const std::string c = run_experiment(cfg2, o).to_csv();
    const std::string d = run_experiment(cfg2, o).to_csv();
    const bool pass = a == b && c == d && !a.empty() && !c.empty();
    return Outcome{pass, std::string("degree_blowup CSV ") + (a == b ? "identical" : "differs") + ", hopf_blowup CSV " +
                             (c == d ? "identical" : "differs")};
  });

  std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
