// Compares the serial reference engine with the OpenMP one on the same
// scenario and checks that their outputs agree bit for bit.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "nbreg/report.hpp"
#include "nbreg/scenario.hpp"

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

int main(int argc, char** argv) {
  long reps = 500;
  std::uint64_t seed = 20240811;
  int max_jobs = 4;
  if (argc > 1) reps = std::atol(argv[1]);
  if (argc > 2) seed = std::strtoull(argv[2], nullptr, 10);
  if (argc > 3) max_jobs = std::atoi(argv[3]);

  nbreg::ScenarioConfig config = nbreg::preset_table1_cell(reps, seed);

  auto start = std::chrono::steady_clock::now();
  const nbreg::ScenarioResult reference = nbreg::run_scenario_serial(config);
  const double serial_time = seconds_since(start);
  const std::string reference_csv = nbreg::metrics_to_csv(reference.metrics);
  std::printf("%-12s %8ld reps  %8.3f s\n", "serial", reps, serial_time);

  for (int jobs = 1; jobs <= max_jobs; jobs *= 2) {
    start = std::chrono::steady_clock::now();
    const nbreg::ScenarioResult parallel = nbreg::run_scenario(config, jobs);
    const double elapsed = seconds_since(start);
    const bool identical = nbreg::metrics_to_csv(parallel.metrics) == reference_csv &&
                           parallel.diagnostics.a1 == reference.diagnostics.a1 &&
                           parallel.diagnostics.a2 == reference.diagnostics.a2 &&
                           parallel.diagnostics.a3 == reference.diagnostics.a3 &&
                           parallel.diagnostics.a4 == reference.diagnostics.a4;
    std::printf("omp x%-7d %8ld reps  %8.3f s  speedup %5.2f  %s\n", jobs, reps, elapsed,
                serial_time / elapsed, identical ? "outputs identical" : "OUTPUTS DIFFER");
    if (!identical) return 1;
  }
  return 0;
}
