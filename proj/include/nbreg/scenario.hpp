#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "nbreg/fit.hpp"
#include "nbreg/metrics.hpp"

namespace nbreg {

enum class DesignKind { InterceptOnly, FixedMatrix };

struct ScenarioConfig {
  DesignKind design = DesignKind::InterceptOnly;
  int n = 0;                  // intercept-only sample size
  double mu = 0.0;            // intercept-only mean
  Eigen::MatrixXd X;          // fixed-matrix design
  Eigen::VectorXd beta_true;  // fixed-matrix coefficients
  double kappa_true = 0.0;
  long replications = 0;
  std::uint64_t seed = 0;
  std::vector<Method> methods;
  double level = 0.95;
  Link link = Link::Log;
  DispersionTransform transform = DispersionTransform::Identity;
  // When set, every method's metrics use its own converged replications.
  // Otherwise the reduced-bias methods share the mean-reduction convergence
  // set, mirroring how the evaluation protocol discards those samples.
  bool complete_case_per_method = false;
  bool keep_records = false;  // retain per-replication records for audit output
  FitOptions fit_options;     // method field is overridden per fit

  void validate() const;
  Eigen::Index parameter_count() const;  // p, excluding the dispersion
};

struct DiagnosticsCounts {
  long a1 = 0;  // samples with empirical variance <= mean (intercept-only gate)
  long a2 = 0;  // ML nonconvergence among gated-in samples
  long a3 = 0;  // mean-reduction nonconvergence
  long a4 = 0;  // median-reduction nonconvergence
};

struct MetricsTable {
  struct Row {
    std::string parameter;
    Method method = Method::Ml;
    MetricRow metrics;
  };
  std::vector<Row> rows;
};

struct ReplicationRecord {
  long index = 0;
  bool variance_le_mean = false;
  struct MethodOutcome {
    bool attempted = false;
    bool converged = false;
    Eigen::VectorXd estimates;  // beta..., phi
    Eigen::VectorXd ses;
  };
  std::vector<MethodOutcome> outcomes;  // parallel to config.methods
};

struct ScenarioResult {
  MetricsTable metrics;
  DiagnosticsCounts diagnostics;
  std::vector<ReplicationRecord> records;  // empty unless keep_records
};

// True when the sample variance does not exceed the sample mean, in which
// case an intercept-only ML fit has no interior solution.
bool diagnostics_variance_test(const std::vector<long>& y);

// Run the Monte Carlo study. jobs <= 0 uses the OpenMP default; results are
// identical for every worker count. run_scenario_serial is the plain-loop
// reference implementation kept for testing and benchmarking.
ScenarioResult run_scenario(const ScenarioConfig& config, int jobs = 0);
ScenarioResult run_scenario_serial(const ScenarioConfig& config);

// Aggregation of per-replication records into metrics and diagnostics; a
// pure fold, re-runnable from persisted records.
ScenarioResult aggregate_records(const ScenarioConfig& config,
                                 std::vector<ReplicationRecord> records);

// Named presets.
ScenarioConfig preset_table1_cell(long replications, std::uint64_t seed);
ScenarioConfig preset_section4(int n, double kappa, long replications, std::uint64_t seed);
ScenarioConfig preset_salmonella_table3(long replications, std::uint64_t seed);

}  // namespace nbreg
