#pragma once

#include <string>
#include <vector>

#include "nbreg/fit.hpp"
#include "nbreg/scenario.hpp"

namespace nbreg {

// Everything the fit command emits: estimates with inference plus
// per-observation diagnostics. Round-trips losslessly through JSON.
struct Report {
  std::string method;
  std::string link;
  std::string transform;
  std::vector<std::string> parameter_names;  // beta names then the dispersion
  std::vector<double> estimates;             // beta..., phi
  double kappa = 0.0;
  std::vector<double> ses;
  double level = 0.95;
  std::vector<std::pair<double, double>> wald;  // empty when not converged
  double loglik = 0.0;
  bool converged = false;
  int outer_iterations = 0;
  double final_step_norm = 0.0;
  bool boundary = false;
  std::string failure;
  std::vector<double> hat;  // leverages at the estimate
  std::vector<double> xi;   // working-variate adjustment at the estimate
};

Report make_report(const ModelSpec& spec, const FitResult& result,
                   const std::vector<std::string>& beta_names, double level);

std::string report_to_json(const Report& report);
Report report_from_json(const std::string& text);
std::string report_to_text(const Report& report);
std::string report_to_csv(const Report& report);

// Simulation outputs.
std::string metrics_to_csv(const MetricsTable& table);
std::string diagnostics_to_csv(const DiagnosticsCounts& counts, long replications);
std::string records_to_csv(const ScenarioConfig& config,
                           const std::vector<ReplicationRecord>& records);

}  // namespace nbreg
