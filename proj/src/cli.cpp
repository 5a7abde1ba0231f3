#include "nbreg/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "nbreg/dataset.hpp"
#include "nbreg/errors.hpp"
#include "nbreg/report.hpp"
#include "nbreg/scenario.hpp"

namespace nbreg {

namespace {

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::stringstream stream(text);
  while (std::getline(stream, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

struct FitArgs {
  std::string data_path;
  std::string response;
  std::string covariates;
  std::string weight;
  std::string link = "log";
  std::string transform = "identity";
  std::string method = "ml";
  double level = 0.95;
  std::string out_format = "text";
  std::string start;
};

int cmd_fit(const FitArgs& args, std::ostream& out) {
  const Dataset data = read_csv(args.data_path);
  std::vector<ColumnSpec> covariates;
  std::vector<std::string> beta_names{"(intercept)"};
  for (const std::string& token : split_list(args.covariates)) {
    covariates.push_back(ColumnSpec::parse(token));
    beta_names.push_back(covariates.back().label());
  }
  const ModelSpec spec =
      build_model(data, args.response, covariates, args.weight,
                  link_from_string(args.link), transform_from_string(args.transform));

  FitOptions options;
  options.method = method_from_string(args.method);
  if (!args.start.empty()) {
    std::vector<std::string> values = split_list(args.start);
    if (values.size() != static_cast<std::size_t>(spec.p()) + 1)
      throw InputError("--start needs p+1 comma-separated values");
    ParameterPoint start;
    start.beta.resize(spec.p());
    for (Eigen::Index r = 0; r < spec.p(); ++r) start.beta[r] = std::stod(values[r]);
    start.phi = std::stod(values.back());
    options.start = start;
  }
  if (!(args.level > 0.0 && args.level < 1.0)) throw InputError("--level must be in (0, 1)");

  const FitResult result = fit(spec, options);
  const Report report = make_report(spec, result, beta_names, args.level);
  if (args.out_format == "json")
    out << report_to_json(report);
  else if (args.out_format == "csv")
    out << report_to_csv(report);
  else if (args.out_format == "text")
    out << report_to_text(report);
  else
    throw InputError("--out must be text, json or csv");
  return result.report.converged ? 0 : 2;
}

struct SimulateArgs {
  std::string scenario_path;
  std::string preset;
  std::uint64_t seed = 20240811;
  long reps = -1;
  std::string out_dir = ".";
  int jobs = 0;
  bool audit = false;
};

std::map<std::string, std::string> read_key_values(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw InputError("cannot open '" + path + "'");
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(file, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!key.empty()) kv[key] = value;
  }
  return kv;
}

ScenarioConfig scenario_from_file(const std::string& path) {
  const auto kv = read_key_values(path);
  auto get = [&](const std::string& key) -> const std::string& {
    auto it = kv.find(key);
    if (it == kv.end()) throw InputError("scenario config is missing '" + key + "'");
    return it->second;
  };
  auto get_or = [&](const std::string& key, const std::string& fallback) {
    auto it = kv.find(key);
    return it == kv.end() ? fallback : it->second;
  };

  ScenarioConfig config;
  const std::string design = get("design");
  if (design == "intercept_only") {
    config.design = DesignKind::InterceptOnly;
    config.n = std::stoi(get("n"));
    config.mu = std::stod(get("mu"));
  } else if (design == "fixed_matrix") {
    config.design = DesignKind::FixedMatrix;
    const std::string csv = get("design_csv");
    const std::filesystem::path base = std::filesystem::path(path).parent_path();
    const Dataset table = read_csv((base / csv).string());
    const Eigen::Index n = table.rows();
    const Eigen::Index p = static_cast<Eigen::Index>(table.names.size());
    config.X.resize(n, p);
    for (Eigen::Index j = 0; j < p; ++j)
      for (Eigen::Index i = 0; i < n; ++i) config.X(i, j) = table.columns[j][i];
    const std::vector<std::string> beta = split_list(get("beta"));
    if (static_cast<Eigen::Index>(beta.size()) != p)
      throw InputError("beta length does not match design_csv columns");
    config.beta_true.resize(p);
    for (Eigen::Index j = 0; j < p; ++j) config.beta_true[j] = std::stod(beta[j]);
  } else {
    throw InputError("design must be intercept_only or fixed_matrix");
  }
  config.kappa_true = std::stod(get("kappa"));
  config.replications = std::stol(get_or("replications", "0"));
  config.seed = std::stoull(get_or("seed", "0"));
  config.level = std::stod(get_or("level", "0.95"));
  config.link = link_from_string(get_or("link", "log"));
  config.transform = transform_from_string(get_or("transform", "identity"));
  config.complete_case_per_method = get_or("complete_case", "false") == "true";
  config.keep_records = get_or("audit", "false") == "true";
  for (const std::string& name : split_list(get_or("methods", "ml,mean_br,median_br")))
    config.methods.push_back(method_from_string(name));
  return config;
}

int cmd_simulate(const SimulateArgs& args, std::ostream& out) {
  if (!args.scenario_path.empty() && !args.preset.empty())
    throw InputError("give either --scenario or --preset, not both");
  if (args.scenario_path.empty() && args.preset.empty())
    throw InputError("one of --scenario or --preset is required");

  ScenarioConfig config;
  if (!args.preset.empty()) {
    const long reps = args.reps > 0 ? args.reps : 10000;
    if (args.preset == "table1-cell")
      config = preset_table1_cell(reps, args.seed);
    else if (args.preset == "section4")
      config = preset_section4(40, 0.75, reps, args.seed);
    else if (args.preset == "salmonella-table3")
      config = preset_salmonella_table3(reps, args.seed);
    else
      throw InputError("unknown preset '" + args.preset +
                       "' (expected table1-cell, section4 or salmonella-table3)");
  } else {
    config = scenario_from_file(args.scenario_path);
    if (args.reps > 0) config.replications = args.reps;
    if (args.seed != 0) config.seed = args.seed;
  }
  if (args.reps == 0) throw InputError("--reps must be positive");
  if (args.audit) config.keep_records = true;

  config.validate();
  const ScenarioResult result = run_scenario(config, args.jobs);

  const std::filesystem::path dir(args.out_dir);
  std::filesystem::create_directories(dir);
  auto write_file = [&](const std::string& name, const std::string& content) {
    std::ofstream file(dir / name, std::ios::binary);
    if (!file) throw InputError("cannot write '" + (dir / name).string() + "'");
    file << content;
  };
  write_file("metrics.csv", metrics_to_csv(result.metrics));
  write_file("diagnostics.csv", diagnostics_to_csv(result.diagnostics, config.replications));
  if (config.keep_records) write_file("replications.csv", records_to_csv(config, result.records));

  out << "wrote " << (dir / "metrics.csv").string() << " and "
      << (dir / "diagnostics.csv").string();
  if (config.keep_records) out << " and " << (dir / "replications.csv").string();
  out << "\n";
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Negative binomial regression with bias-reduced estimation"};
  app.require_subcommand(1);

  FitArgs fit_args;
  CLI::App* fit_cmd = app.add_subcommand("fit", "Fit a model to a CSV dataset");
  fit_cmd->add_option("--data", fit_args.data_path, "CSV file with a header row")->required();
  fit_cmd->add_option("--response", fit_args.response, "response column (counts)")->required();
  fit_cmd->add_option("--covariates", fit_args.covariates,
                      "comma list of columns; log(col+c) derives a shifted log column");
  fit_cmd->add_option("--weight", fit_args.weight, "optional prior-weight column");
  fit_cmd->add_option("--link", fit_args.link, "log | identity | sqrt");
  fit_cmd->add_option("--transform", fit_args.transform, "identity | log | inverse | sqrt");
  fit_cmd->add_option("--method", fit_args.method, "ml | mean-bc | mean-br | median-br");
  fit_cmd->add_option("--level", fit_args.level, "Wald confidence level");
  fit_cmd->add_option("--out", fit_args.out_format, "text | json | csv");
  fit_cmd->add_option("--start", fit_args.start, "comma list of p+1 starting values");

  SimulateArgs sim_args;
  CLI::App* sim_cmd = app.add_subcommand("simulate", "Run a Monte Carlo scenario");
  sim_cmd->add_option("--scenario", sim_args.scenario_path, "key=value scenario file");
  sim_cmd->add_option("--preset", sim_args.preset, "table1-cell | section4 | salmonella-table3");
  sim_cmd->add_option("--seed", sim_args.seed, "master seed");
  sim_cmd->add_option("--reps", sim_args.reps, "replication count");
  sim_cmd->add_option("--out-dir", sim_args.out_dir, "output directory");
  sim_cmd->add_option("--jobs", sim_args.jobs, "worker threads (0 = default)");
  sim_cmd->add_flag("--audit", sim_args.audit, "also write per-replication records");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      // --help and friends
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (fit_cmd->parsed()) return cmd_fit(fit_args, out);
    if (sim_cmd->parsed()) return cmd_simulate(sim_args, out);
    err << "error: no subcommand\n";
    return 1;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace nbreg
