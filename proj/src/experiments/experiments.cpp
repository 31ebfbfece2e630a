#include "hopfdeg/experiments.hpp"

#include "hopfdeg/mapzoo.hpp"
#include "hopfdeg/parallel.hpp"
#include "hopfdeg/sobolev.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

namespace hopfdeg {

using nlohmann::json;

// ------------------------------------------------------------ statistics

json LogLogFit::to_json() const {
  return {{"points", points}, {"slope", slope},   {"intercept", intercept}, {"slope_se", slope_se},
          {"ci95_low", ci_low}, {"ci95_high", ci_high}, {"r2", r2},       {"residuals", residuals}};
}

LogLogFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  require(x.size() == y.size(), ErrorCode::DimensionMismatch, "regression columns differ in length");
  require(x.size() >= 4, ErrorCode::InvalidArgument, "regression needs at least 4 family members");
  const std::size_t n = x.size();
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    require(x[i] > 0.0 && y[i] > 0.0, ErrorCode::InvalidArgument, "log-log regression needs positive data");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  require(sxx > 0.0, ErrorCode::InvalidArgument, "regression needs at least two distinct x values");
  LogLogFit fit;
  fit.points = static_cast<int>(n);
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double sse = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
    fit.residuals.push_back(r);
    sse += r * r;
  }
  const double dof = static_cast<double>(n) - 2.0;
  fit.slope_se = std::sqrt(sse / dof / sxx);
  const boost::math::students_t dist(dof);
  const double t = boost::math::quantile(boost::math::complement(dist, 0.025));
  fit.ci_low = fit.slope - t * fit.slope_se;
  fit.ci_high = fit.slope + t * fit.slope_se;
  fit.r2 = syy > 0.0 ? 1.0 - sse / syy : 1.0;
  return fit;
}

RatioStats RatioStats::of(const std::vector<double>& values) {
  require(!values.empty(), ErrorCode::InvalidArgument, "ratio statistics of an empty list");
  RatioStats r;
  r.min = *std::min_element(values.begin(), values.end());
  r.max = *std::max_element(values.begin(), values.end());
  r.spread = r.min > 0.0 ? r.max / r.min : std::numeric_limits<double>::infinity();
  return r;
}

json RatioStats::to_json() const { return {{"min", min}, {"max", max}, {"max_over_min", spread}}; }

// ---------------------------------------------------------------- report

void ExperimentReport::add_row(std::vector<json> row) {
  require(row.size() == columns.size(), ErrorCode::DimensionMismatch, "row width differs from the header");
  rows.push_back(std::move(row));
}

std::vector<double> ExperimentReport::column(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  require(it != columns.end(), ErrorCode::InvalidArgument, "no column named " + name);
  const std::size_t c = static_cast<std::size_t>(it - columns.begin());
  std::vector<double> out;
  for (const auto& r : rows) out.push_back(r[c].get<double>());
  return out;
}

namespace {

std::string csv_field(const json& v) {
  if (v.is_null()) return "";
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number_unsigned()) return std::to_string(v.get<unsigned long long>());
  if (v.is_number_float()) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v.get<double>());
    return buf;
  }
  const std::string s = v.is_string() ? v.get<std::string>() : v.dump();
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

}  // namespace

std::string ExperimentReport::to_csv() const {
  std::string out;
  for (std::size_t i = 0; i < columns.size(); ++i) out += (i ? "," : "") + csv_field(columns[i]);
  out += "\r\n";
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) out += (i ? "," : "") + csv_field(r[i]);
    out += "\r\n";
  }
  return out;
}

json ExperimentReport::to_json() const {
  return {{"experiment", id},
          {"config", config},
          {"summary", summary},
          {"rows", rows.size()},
          {"columns", columns},
          {"metadata", {{"runtime_seconds", runtime_seconds}, {"threads", num_threads()}}}};
}

std::string ExperimentReport::plot_script(const std::string& csv_name) const {
  const json plot = summary.value("plot", json::object());
  std::ostringstream s;
  s << "# Plots " << id << " from " << csv_name << " on log-log axes.\n"
    << "import csv\nimport sys\n\nimport matplotlib\nmatplotlib.use(\"Agg\")\nimport matplotlib.pyplot as plt\n\n"
    << "X = " << json(plot.value("x", columns.empty() ? "" : columns.front())).dump() << "\n"
    << "Y = " << json(plot.value("y", columns.size() > 1 ? columns[1] : "")).dump() << "\n"
    << "GROUP = " << json(plot.value("group", "")).dump() << "\n\n"
    << "path = sys.argv[1] if len(sys.argv) > 1 else " << json(csv_name).dump() << "\n"
    << "series = {}\n"
    << "with open(path, newline=\"\") as fh:\n"
    << "    for row in csv.DictReader(fh):\n"
    << "        key = row[GROUP] if GROUP else \"\"\n"
    << "        series.setdefault(key, []).append((float(row[X]), float(row[Y])))\n"
    << "fig, ax = plt.subplots()\n"
    << "for key, pts in sorted(series.items()):\n"
    << "    pts.sort()\n"
    << "    ax.loglog([p[0] for p in pts], [p[1] for p in pts], \"o-\", label=f\"{GROUP}={key}\" if GROUP else None)\n"
    << "ax.set_xlabel(X)\nax.set_ylabel(Y)\n"
    << "if GROUP:\n    ax.legend()\n"
    << "fig.savefig(path.rsplit(\".\", 1)[0] + \".png\", dpi=120)\n";
  return s.str();
}

json ExperimentOptions::to_json() const {
  return {{"seed", seed},
          {"mc_samples", mc_samples},
          {"grid", grid.to_json()},
          {"hopf_max_computed_k", hopf_max_computed_k},
          {"commutator_amplitude", commutator_amplitude}};
}

// ----------------------------------------------------------- experiments

namespace {

using Clock = std::chrono::steady_clock;

double elapsed(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string s_key(double s) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "s=%g", s);
  return buf;
}

// [f]^{n/s} on S^n: the full pair sum on S^1, Monte Carlo above.
SeminormEstimate critical_power(const SphereMap& f, int n, double s, int count, const ExperimentOptions& o,
                                std::uint64_t stream) {
  if (s == 1.0) {
    if (n <= 2) {
      const int res = degree_resolution(f, n);
      return sobolev_seminorm_s1(f, n, make_quadrature(n, res));
    }
    return gradient_energy_mc(f, n, o.seed + stream, o.mc_samples);
  }
  const SeminormSpec spec = SeminormSpec::critical(n, s);
  if (n == 1) return fractional_seminorm(f, spec, make_quadrature(1, std::max(2048, 256 * count)));
  return fractional_seminorm_mc(f, spec, o.seed + stream, o.mc_samples);
}

void check_sorted_positive(const std::vector<int>& v, const char* what) {
  require(!v.empty(), ErrorCode::InvalidArgument, std::string(what) + " must not be empty");
  for (int x : v) require(x >= 1, ErrorCode::InvalidArgument, std::string(what) + " entries must be >= 1");
}

}  // namespace

ExperimentReport run_degree_sharpness(int n, const std::vector<double>& s_list, const std::vector<int>& d_list,
                                      const ExperimentOptions& o) {
  require(n == 1 || n == 2, ErrorCode::InvalidArgument, "degree sharpness runs on S^1 or S^2");
  require(!s_list.empty(), ErrorCode::InvalidArgument, "s-list must not be empty");
  check_sorted_positive(d_list, "d-list");
  require(d_list.size() >= 4, ErrorCode::InvalidArgument, "regression needs at least 4 family members");
  for (double s : s_list) require(s > 0.0 && s <= 1.0, ErrorCode::InvalidArgument, "s must lie in (0, 1]");
  const auto t0 = Clock::now();
  ExperimentReport rep;
  rep.id = "degree_sharpness";
  rep.config = {{"n", n}, {"s_list", s_list}, {"d_list", d_list}, {"options", o.to_json()}};
  rep.columns = {"n", "s", "d", "degree_integral", "degree_count", "seminorm_power", "seminorm_power_se", "method"};
  std::vector<std::vector<double>> powers(s_list.size());
  for (int d : d_list) {
    const SphereMap f = bubble_map(n, d);
    const InvariantResult di = brouwer_degree_integral(f, make_quadrature(n, degree_resolution(f, n)));
    const InvariantResult dc = brouwer_degree_count_auto(f, o.seed);
    require(di.conclusive && dc.conclusive && di.rounded == d && dc.rounded == d, ErrorCode::Inconclusive,
            "degree check failed for d = " + std::to_string(d) + ": integral " + std::to_string(di.raw) +
                ", count " + std::to_string(dc.rounded));
    for (std::size_t i = 0; i < s_list.size(); ++i) {
      const SeminormEstimate e = critical_power(f, n, s_list[i], d, o, static_cast<std::uint64_t>(d));
      powers[i].push_back(e.p_power);
      rep.add_row({n, s_list[i], d, di.raw, dc.rounded, e.p_power, e.p_power_std_error, e.method});
    }
  }
  json fits = json::object();
  std::vector<double> dx(d_list.begin(), d_list.end());
  for (std::size_t i = 0; i < s_list.size(); ++i) fits[s_key(s_list[i])] = fit_loglog(dx, powers[i]).to_json();
  rep.summary = {{"fits", fits}, {"expected_slope", 1.0}, {"plot", {{"x", "d"}, {"y", "seminorm_power"}, {"group", "s"}}}};
  rep.runtime_seconds = elapsed(t0);
  return rep;
}

ExperimentReport run_degree_blowup(int n, double s, double sigma, const std::vector<int>& k_list,
                                   const ExperimentOptions& o) {
  require(n == 1 || n == 2, ErrorCode::InvalidArgument, "degree blow-up runs on S^1 or S^2");
  require(s > 0.0 && s < static_cast<double>(n) / (n + 1), ErrorCode::InvalidArgument,
          "degree blow-up needs 0 < s < n/(n+1)");
  require(sigma > 0.0, ErrorCode::InvalidArgument, "sigma must be positive");
  check_sorted_positive(k_list, "k-list");
  const auto t0 = Clock::now();
  ExperimentReport rep;
  rep.id = "degree_blowup";
  rep.config = {{"n", n}, {"s", s}, {"sigma", sigma}, {"k_list", k_list}, {"options", o.to_json()}};
  rep.columns = {"n", "s", "sigma", "k", "integral", "seminorm", "seminorm_se", "degree", "degree_ratio"};
  std::vector<double> kx, integrals, seminorms, ratios;
  const VolumeFormExtension omega = VolumeFormExtension::homogeneous(n);
  for (int k : k_list) {
    const SphereMap fk = bubble_map(n, k);
    const double lambda = std::pow(static_cast<double>(k), -sigma);
    const SphereMap gk = scale_map(fk, lambda);
    const double integral = pullback_integral(gk, make_quadrature(n, degree_resolution(fk, n)), omega);
    const SeminormSpec spec = SeminormSpec::critical(n, s);
    const SeminormEstimate e = n == 1
        ? fractional_seminorm(gk, spec, make_quadrature(1, std::max(2048, 256 * k)))
        : fractional_seminorm_mc(gk, spec, o.seed + k, o.mc_samples);
    const InvariantResult deg = brouwer_degree_count_auto(fk, o.seed);
    // [f_k]^{n/s} = lambda^{-n/s} [g_k]^{n/s} by homogeneity.
    const double f_power = e.p_power * std::pow(lambda, -spec.p);
    const double ratio = std::abs(static_cast<double>(deg.rounded)) / f_power;
    kx.push_back(k);
    integrals.push_back(integral);
    seminorms.push_back(e.value);
    ratios.push_back(ratio);
    rep.add_row({n, s, sigma, k, integral, e.value, e.std_error, deg.rounded, ratio});
  }
  rep.summary = {{"expected_slope", 1.0 - sigma * (n + 1)},
                 {"seminorm_stats", RatioStats::of(seminorms).to_json()},
                 {"degree_ratio_stats", RatioStats::of(ratios).to_json()},
                 {"plot", {{"x", "k"}, {"y", "integral"}}}};
  if (kx.size() >= 4) rep.summary["integral_fit"] = fit_loglog(kx, integrals).to_json();
  rep.runtime_seconds = elapsed(t0);
  return rep;
}

ExperimentReport run_hopf_sharpness(const std::vector<double>& s_list, const std::vector<int>& k_list,
                                    const ExperimentOptions& o) {
  require(!s_list.empty(), ErrorCode::InvalidArgument, "s-list must not be empty");
  check_sorted_positive(k_list, "k-list");
  for (double s : s_list) {
    require(s >= 0.75 && s <= 1.0, ErrorCode::InvalidArgument, "Hopf sharpness needs s in [3/4, 1]");
  }
  const auto t0 = Clock::now();
  ExperimentReport rep;
  rep.id = "hopf_sharpness";
  rep.config = {{"s_list", s_list}, {"k_list", k_list}, {"options", o.to_json()}};
  rep.columns = {"s", "k", "deg_h", "deg_h_whitehead_raw", "deg_h_linking", "extrapolated",
                 "seminorm", "seminorm_se", "seminorm_power", "ratio"};
  std::vector<std::vector<double>> degs(s_list.size()), powers(s_list.size()), ratios(s_list.size()),
      computed_ratios(s_list.size());
  for (int k : k_list) {
    const SphereMap f = whitehead_map(1, k);
    long deg = 2L * k * k;
    json raw = nullptr, link = nullptr;
    const bool extrapolated = k > o.hopf_max_computed_k;
    if (!extrapolated) {
      const InvariantResult w = hopf_invariant_whitehead(f, o.grid);
      const InvariantResult l = hopf_invariant_linking_auto(f, o.grid, o.seed);
      require(w.conclusive && l.conclusive && w.rounded == l.rounded, ErrorCode::Inconclusive,
              "Hopf pipelines disagree for k = " + std::to_string(k));
      deg = w.rounded;
      raw = w.raw;
      link = l.rounded;
    }
    for (std::size_t i = 0; i < s_list.size(); ++i) {
      const double s = s_list[i];
      SeminormEstimate e;
      if (s == 1.0) {
        e = gradient_energy_mc(f, 3.0, o.seed + k, o.mc_samples);
      } else {
        e = fractional_seminorm_mc(f, SeminormSpec::critical(3, s), o.seed + k, o.mc_samples);
      }
      const double power = std::pow(e.value, 4.0 / s);
      const double ratio = std::abs(static_cast<double>(deg)) / power;
      degs[i].push_back(std::abs(static_cast<double>(deg)));
      powers[i].push_back(power);
      ratios[i].push_back(ratio);
      if (!extrapolated) computed_ratios[i].push_back(ratio);
      rep.add_row({s, k, deg, raw, link, extrapolated, e.value, e.std_error, power, ratio});
    }
  }
  json per_s = json::object();
  for (std::size_t i = 0; i < s_list.size(); ++i) {
    json entry = {{"ratio_stats", RatioStats::of(ratios[i]).to_json()}};
    if (!computed_ratios[i].empty()) entry["ratio_stats_computed"] = RatioStats::of(computed_ratios[i]).to_json();
    if (degs[i].size() >= 4) entry["fit"] = fit_loglog(degs[i], powers[i]).to_json();
    per_s[s_key(s_list[i])] = entry;
  }
  rep.summary = {{"per_s", per_s},
                 {"expected_slope", 1.0},
                 {"plot", {{"x", "deg_h"}, {"y", "seminorm_power"}, {"group", "s"}}}};
  rep.runtime_seconds = elapsed(t0);
  return rep;
}

ExperimentReport run_hopf_blowup(double s, double sigma, const std::vector<int>& k_list, const ExperimentOptions& o) {
  require(s > 0.0 && s < 2.0 / 3.0, ErrorCode::InvalidArgument, "Hopf blow-up needs 0 < s < 2/3");
  require(sigma > 0.0, ErrorCode::InvalidArgument, "sigma must be positive");
  check_sorted_positive(k_list, "k-list");
  const auto t0 = Clock::now();
  ExperimentReport rep;
  rep.id = "hopf_blowup";
  rep.config = {{"s", s}, {"sigma", sigma}, {"k_list", k_list}, {"options", o.to_json()}};
  rep.columns = {"s", "sigma", "k", "whitehead_integral", "seminorm", "seminorm_se"};
  std::vector<double> kx, integrals, seminorms;
  for (int k : k_list) {
    const SphereMap gk = scale_map(hopf_bubble_map(k), std::pow(static_cast<double>(k), -sigma));
    const InvariantResult w = hopf_invariant_whitehead(gk, o.grid);
    const SeminormEstimate e = fractional_seminorm_mc(gk, SeminormSpec::critical(3, s), o.seed + k, o.mc_samples);
    kx.push_back(k);
    integrals.push_back(w.raw);
    seminorms.push_back(e.value);
    rep.add_row({s, sigma, k, w.raw, e.value, e.std_error});
  }
  rep.summary = {{"expected_slope", 1.0 - 6.0 * sigma},
                 {"seminorm_stats", RatioStats::of(seminorms).to_json()},
                 {"plot", {{"x", "k"}, {"y", "whitehead_integral"}}}};
  if (kx.size() >= 4) rep.summary["integral_fit"] = fit_loglog(kx, integrals).to_json();
  rep.runtime_seconds = elapsed(t0);
  return rep;
}

TrigPolynomialMap commutator_base_map(double amplitude) {
  auto v3 = [](double a, double b, double c) {
    Vec v(3);
    v << a, b, c;
    return v;
  };
  std::vector<TrigTerm> terms = {
      {amplitude * v3(1.0, 0.3, -0.2), {1, 0, 0}, 0.0},
      {amplitude * v3(-0.4, 1.0, 0.5), {0, 1, 1}, 0.7},
      {amplitude * v3(0.2, -0.6, 1.0), {1, -1, 0}, 1.9},
      {amplitude * v3(0.7, 0.5, 0.3), {0, 0, 1}, 2.6},
  };
  return TrigPolynomialMap(3, 3, v3(0.6, 0.2, -0.1), terms);
}

CompactForm commutator_form() { return radial_bump_form(3, 0, 1, Vec::Zero(3), 0.25, 1.75); }

ExperimentReport run_commutator_sweep(const std::vector<int>& frequencies, const std::vector<double>& s_list,
                                      const ExperimentOptions& o) {
  check_sorted_positive(frequencies, "frequency list");
  require(!s_list.empty(), ErrorCode::InvalidArgument, "s-list must not be empty");
  for (double s : s_list) require(s > 0.5 && s < 1.0, ErrorCode::InvalidArgument, "s must lie in (1/2, 1)");
  const auto t0 = Clock::now();
  ExperimentReport rep;
  rep.id = "commutator_sweep";
  rep.config = {{"frequencies", frequencies}, {"s_list", s_list}, {"options", o.to_json()}};
  rep.columns = {"s", "M", "grid_n", "lhs", "rhs", "ratio", "seminorm_low", "seminorm_critical", "ratio_scaled_form"};
  const TrigPolynomialMap base = commutator_base_map(o.commutator_amplitude);
  const CompactForm kappa = commutator_form();
  const CompactForm scaled = kappa.scaled(2.5);
  json per_s = json::object();
  for (double s : s_list) {
    std::vector<double> ratios;
    double homogeneity = 0.0;
    for (int m : frequencies) {
      CommutatorOptions co;
      co.seed = o.seed;
      co.mc_samples = o.mc_samples;
      const TrigPolynomialMap f = base.with_frequency(m);
      const CommutatorResult r = commutator_experiment(f, kappa, s, co);
      const CommutatorResult r2 = commutator_experiment(f, scaled, s, co);
      homogeneity = std::max(homogeneity, std::abs(r2.ratio - r.ratio) / r.ratio);
      ratios.push_back(r.ratio);
      rep.add_row({s, m, r.grid_n, r.lhs, r.rhs, r.ratio, r.seminorm_low, r.seminorm_critical, r2.ratio});
    }
    per_s[s_key(s)] = {{"ratio_stats", RatioStats::of(ratios).to_json()}, {"homogeneity_rel_diff", homogeneity}};
  }
  rep.summary = {{"per_s", per_s}, {"plot", {{"x", "M"}, {"y", "ratio"}, {"group", "s"}}}};
  rep.runtime_seconds = elapsed(t0);
  return rep;
}

// ------------------------------------------------------------- dispatch

namespace {

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  require(obj.is_object(), ErrorCode::Config, where + " must be a JSON object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    require(allowed.count(it.key()) > 0, ErrorCode::Config, "unknown key '" + it.key() + "' in " + where);
  }
}

template <class T>
T need(const json& c, const char* key) {
  require(c.contains(key), ErrorCode::Config, std::string("experiment config needs '") + key + "'");
  try {
    return c[key].get<T>();
  } catch (const json::exception&) {
    fail(ErrorCode::Config, std::string("experiment config key '") + key + "' has the wrong type");
  }
}

}  // namespace

ExperimentReport run_experiment(const json& c, const ExperimentOptions& o) {
  const std::string id = need<std::string>(c, "experiment");
  if (id == "degree_sharpness") {
    check_keys(c, {"experiment", "n", "s_list", "d_list"}, "degree_sharpness");
    return run_degree_sharpness(need<int>(c, "n"), need<std::vector<double>>(c, "s_list"),
                                need<std::vector<int>>(c, "d_list"), o);
  }
  if (id == "degree_blowup") {
    check_keys(c, {"experiment", "n", "s", "sigma", "k_list"}, "degree_blowup");
    return run_degree_blowup(need<int>(c, "n"), need<double>(c, "s"), need<double>(c, "sigma"),
                             need<std::vector<int>>(c, "k_list"), o);
  }
  if (id == "hopf_sharpness") {
    check_keys(c, {"experiment", "s_list", "k_list"}, "hopf_sharpness");
    return run_hopf_sharpness(need<std::vector<double>>(c, "s_list"), need<std::vector<int>>(c, "k_list"), o);
  }
  if (id == "hopf_blowup") {
    check_keys(c, {"experiment", "s", "sigma", "k_list"}, "hopf_blowup");
    return run_hopf_blowup(need<double>(c, "s"), need<double>(c, "sigma"), need<std::vector<int>>(c, "k_list"), o);
  }
  if (id == "commutator_sweep") {
    check_keys(c, {"experiment", "frequencies", "s_list"}, "commutator_sweep");
    return run_commutator_sweep(need<std::vector<int>>(c, "frequencies"), need<std::vector<double>>(c, "s_list"), o);
  }
  fail(ErrorCode::Config, "unknown experiment '" + id + "'");
}

}  // namespace hopfdeg
