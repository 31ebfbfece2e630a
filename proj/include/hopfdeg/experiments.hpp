#pragma once

#include "hopfdeg/invariants.hpp"
#include "hopfdeg/potentials.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace hopfdeg {

struct LogLogFit {
  int points = 0;
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;
  double ci_low = 0.0;  // 95% Student-t interval for the slope
  double ci_high = 0.0;
  double r2 = 0.0;
  std::vector<double> residuals;

  nlohmann::json to_json() const;
};

// OLS of log y on log x; needs at least 4 points with x, y > 0.
LogLogFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

struct RatioStats {
  double min = 0.0;
  double max = 0.0;
  double spread = 0.0;  // max / min

  static RatioStats of(const std::vector<double>& values);
  nlohmann::json to_json() const;
};

class ExperimentReport {
 public:
  std::string id;
  nlohmann::json config;
  std::vector<std::string> columns;
  std::vector<std::vector<nlohmann::json>> rows;
  nlohmann::json summary = nlohmann::json::object();
  double runtime_seconds = 0.0;  // metadata only; never written to CSV

  void add_row(std::vector<nlohmann::json> row);
  // Values of a numeric column, optionally restricted to rows where `key` == `match`.
  std::vector<double> column(const std::string& name) const;

  // RFC 4180: header row, CRLF line ends, doubles printed with %.17g.
  std::string to_csv() const;
  nlohmann::json to_json() const;
  // Generic matplotlib script reading the CSV named `csv_name`.
  std::string plot_script(const std::string& csv_name) const;
};

struct ExperimentOptions {
  std::uint64_t seed = 1;
  std::size_t mc_samples = 400000;
  HopfGrid grid;
  // Hopf invariants are computed by both pipelines up to this k; beyond it the
  // closed form 2k^2 is used and flagged.
  int hopf_max_computed_k = 3;
  // Amplitude of the trigonometric map in the commutator sweep.
  double commutator_amplitude = 0.01;

  nlohmann::json to_json() const;
};

ExperimentReport run_degree_sharpness(int n, const std::vector<double>& s_list, const std::vector<int>& d_list,
                                      const ExperimentOptions& options = {});
ExperimentReport run_degree_blowup(int n, double s, double sigma, const std::vector<int>& k_list,
                                   const ExperimentOptions& options = {});
ExperimentReport run_hopf_sharpness(const std::vector<double>& s_list, const std::vector<int>& k_list,
                                    const ExperimentOptions& options = {});
ExperimentReport run_hopf_blowup(double s, double sigma, const std::vector<int>& k_list,
                                 const ExperimentOptions& options = {});
ExperimentReport run_commutator_sweep(const std::vector<int>& frequencies, const std::vector<double>& s_list,
                                      const ExperimentOptions& options = {});

// The fixed base map and form of the commutator sweep.
TrigPolynomialMap commutator_base_map(double amplitude);
CompactForm commutator_form();

// Dispatches {"experiment": id, ...parameters}; unknown keys rejected.
ExperimentReport run_experiment(const nlohmann::json& config, const ExperimentOptions& options);

}  // namespace hopfdeg
