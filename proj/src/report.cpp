#include "nbreg/report.hpp"

#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "nbreg/errors.hpp"

namespace nbreg {

namespace {

// Shortest representation that parses back to the same double.
std::string format_double(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  double parsed = 0.0;
  std::sscanf(buffer, "%lg", &parsed);
  if (parsed == v) {
    for (int precision = 15; precision <= 16; ++precision) {
      char shorter[64];
      std::snprintf(shorter, sizeof(shorter), "%.*g", precision, v);
      std::sscanf(shorter, "%lg", &parsed);
      if (parsed == v) return shorter;
    }
  }
  return buffer;
}

}  // namespace

Report make_report(const ModelSpec& spec, const FitResult& result,
                   const std::vector<std::string>& beta_names, double level) {
  Report report;
  report.method = to_string(result.method);
  report.link = to_string(result.link);
  report.transform = to_string(result.transform);
  report.parameter_names = beta_names;
  report.parameter_names.push_back(
      result.transform == DispersionTransform::Identity ? "kappa" : "phi");
  for (Eigen::Index r = 0; r < result.theta.beta.size(); ++r)
    report.estimates.push_back(result.theta.beta[r]);
  report.estimates.push_back(result.theta.phi);
  report.kappa = result.kappa;
  for (Eigen::Index r = 0; r < result.se.size(); ++r) report.ses.push_back(result.se[r]);
  report.level = level;
  report.loglik = result.loglik_at_estimate;
  report.converged = result.report.converged;
  report.outer_iterations = result.report.outer_iterations;
  report.final_step_norm = result.report.final_step_norm;
  report.boundary = result.report.boundary_flag;
  report.failure = to_string(result.report.failure_kind);
  if (result.report.converged) {
    const auto intervals = wald_intervals(result, level);
    report.wald.assign(intervals.begin(), intervals.end());
    const WorkingQuantities wq = working_quantities(spec, result.theta);
    report.hat.assign(wq.h.data(), wq.h.data() + wq.h.size());
    report.xi.assign(wq.xi.data(), wq.xi.data() + wq.xi.size());
  }
  return report;
}

std::string report_to_json(const Report& report) {
  nlohmann::json j;
  j["method"] = report.method;
  j["link"] = report.link;
  j["transform"] = report.transform;
  j["parameters"] = report.parameter_names;
  j["estimates"] = report.estimates;
  j["kappa"] = report.kappa;
  j["se"] = report.ses;
  j["level"] = report.level;
  nlohmann::json wald = nlohmann::json::array();
  for (const auto& [lo, hi] : report.wald) wald.push_back({lo, hi});
  j["wald"] = wald;
  j["loglik"] = report.loglik;
  j["convergence"] = {{"converged", report.converged},
                      {"outer_iterations", report.outer_iterations},
                      {"final_step_norm", report.final_step_norm},
                      {"boundary", report.boundary},
                      {"failure", report.failure}};
  j["diagnostics"] = {{"hat", report.hat}, {"xi", report.xi}};
  return j.dump(2) + "\n";
}

Report report_from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  Report report;
  report.method = j.at("method").get<std::string>();
  report.link = j.at("link").get<std::string>();
  report.transform = j.at("transform").get<std::string>();
  report.parameter_names = j.at("parameters").get<std::vector<std::string>>();
  report.estimates = j.at("estimates").get<std::vector<double>>();
  report.kappa = j.at("kappa").get<double>();
  report.ses = j.at("se").get<std::vector<double>>();
  report.level = j.at("level").get<double>();
  for (const auto& pair : j.at("wald"))
    report.wald.emplace_back(pair.at(0).get<double>(), pair.at(1).get<double>());
  report.loglik = j.at("loglik").get<double>();
  const auto& conv = j.at("convergence");
  report.converged = conv.at("converged").get<bool>();
  report.outer_iterations = conv.at("outer_iterations").get<int>();
  report.final_step_norm = conv.at("final_step_norm").get<double>();
  report.boundary = conv.at("boundary").get<bool>();
  report.failure = conv.at("failure").get<std::string>();
  report.hat = j.at("diagnostics").at("hat").get<std::vector<double>>();
  report.xi = j.at("diagnostics").at("xi").get<std::vector<double>>();
  return report;
}

std::string report_to_text(const Report& report) {
  std::ostringstream out;
  out << "method: " << report.method << "   link: " << report.link
      << "   dispersion transform: " << report.transform << "\n";
  out << "converged: " << (report.converged ? "yes" : "no")
      << "   iterations: " << report.outer_iterations;
  if (!report.converged) out << "   failure: " << report.failure;
  if (report.boundary) out << "   (dispersion at boundary)";
  out << "\n\n";

  char line[256];
  std::snprintf(line, sizeof(line), "%-14s %12s %12s", "parameter", "estimate", "std.err");
  out << line;
  if (!report.wald.empty()) {
    const int pct = static_cast<int>(report.level * 100 + 0.5);
    std::snprintf(line, sizeof(line), " %9s%2d%% %9s%2d%%", "lower", pct, "upper", pct);
    out << line;
  }
  out << "\n";
  for (std::size_t r = 0; r < report.parameter_names.size(); ++r) {
    std::snprintf(line, sizeof(line), "%-14s %12.5f %12.5f", report.parameter_names[r].c_str(),
                  report.estimates[r], report.ses[r]);
    out << line;
    if (!report.wald.empty()) {
      std::snprintf(line, sizeof(line), " %12.5f %12.5f", report.wald[r].first,
                    report.wald[r].second);
      out << line;
    }
    out << "\n";
  }
  if (report.transform != "identity") {
    std::snprintf(line, sizeof(line), "%-14s %12.5f   (mapped from %s scale)\n", "kappa",
                  report.kappa, report.transform.c_str());
    out << line;
  }
  std::snprintf(line, sizeof(line), "\nlog-likelihood: %.6f\n", report.loglik);
  out << line;
  return out.str();
}

std::string report_to_csv(const Report& report) {
  std::ostringstream out;
  out << "parameter,estimate,se,lower,upper\n";
  for (std::size_t r = 0; r < report.parameter_names.size(); ++r) {
    out << report.parameter_names[r] << "," << format_double(report.estimates[r]) << ","
        << format_double(report.ses[r]);
    if (!report.wald.empty())
      out << "," << format_double(report.wald[r].first) << ","
          << format_double(report.wald[r].second);
    else
      out << ",,";
    out << "\n";
  }
  return out.str();
}

std::string metrics_to_csv(const MetricsTable& table) {
  std::ostringstream out;
  out << "parameter,method,pu,rbias,wald,ibmse,effective_replications\n";
  for (const auto& row : table.rows) {
    out << row.parameter << "," << to_string(row.method) << "," << format_double(row.metrics.pu)
        << "," << format_double(row.metrics.rbias) << "," << format_double(row.metrics.wald)
        << "," << format_double(row.metrics.ibmse) << "," << row.metrics.effective_replications
        << "\n";
  }
  return out.str();
}

std::string diagnostics_to_csv(const DiagnosticsCounts& counts, long replications) {
  std::ostringstream out;
  out << "replications,a1_variance_le_mean,a2_ml_noconv,a3_mean_br_noconv,a4_median_br_noconv\n";
  out << replications << "," << counts.a1 << "," << counts.a2 << "," << counts.a3 << ","
      << counts.a4 << "\n";
  return out.str();
}

std::string records_to_csv(const ScenarioConfig& config,
                           const std::vector<ReplicationRecord>& records) {
  std::ostringstream out;
  out << "replication,variance_le_mean";
  const Eigen::Index p = config.parameter_count();
  for (Method method : config.methods) {
    const std::string tag = to_string(method);
    out << "," << tag << "_converged";
    for (Eigen::Index r = 0; r < p; ++r)
      out << "," << tag << "_beta" << r << "," << tag << "_beta" << r << "_se";
    out << "," << tag << "_phi," << tag << "_phi_se";
  }
  out << "\n";
  for (const auto& rec : records) {
    out << rec.index << "," << (rec.variance_le_mean ? 1 : 0);
    for (const auto& outcome : rec.outcomes) {
      out << "," << (outcome.attempted ? (outcome.converged ? "1" : "0") : "");
      for (Eigen::Index r = 0; r <= p; ++r) {
        if (outcome.converged) {
          out << "," << format_double(outcome.estimates[r]) << ","
              << format_double(outcome.ses[r]);
        } else {
          out << ",,";
        }
      }
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace nbreg
