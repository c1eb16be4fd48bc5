#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mimobf/driver.hpp"

// Monte Carlo experiment runner: seeded trial generation, method sweeps
// over a power-budget or SINR-target axis, deterministic aggregation and
// CSV emission.

namespace mimobf {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class FilterPolicy { AllConverged, PerMethod };
enum class SweepVariable { PMaxDb, GammaDb };

struct ExperimentSpec {
  Problem problem = Problem::Pr;
  std::vector<Method> methods;
  SystemConfig base_config;
  SweepVariable sweep_variable = SweepVariable::PMaxDb;
  std::vector<double> sweep_values;  // dB
  std::size_t trials = 200;
  std::uint64_t base_seed = 0;
  FilterPolicy filter_policy = FilterPolicy::AllConverged;
};

struct ExperimentRow {
  double sweep_value = 0.0;
  Method method = Method::GroupGsinr;
  double mean_balanced_level = 0.0;
  double mean_power_db = 0.0;
  double mean_sum_rate = 0.0;
  double feasibility_rate = 0.0;  // exact count over all trials
  double convergence_rate = 0.0;  // converged / feasible (Pr: / trials)
  double mean_iters = 0.0;
  std::size_t filtered_trials = 0;  // trials entering the means
};

struct TrialRecord {
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  double sweep_value = 0.0;
  Method method = Method::GroupGsinr;
  SolveStatus status = SolveStatus::MaxIters;
  bool feasible = false;
  bool converged = false;
  std::size_t iters = 0;
  double balanced_level = 0.0;
  double total_power = 0.0;
  double sum_rate = 0.0;
};

struct ExperimentResult {
  std::vector<ExperimentRow> rows;
  std::vector<TrialRecord> trials;
};

/// Runs every (trial, sweep value, method) combination; trial i draws its
/// channel from seed base_seed + i and feeds the same realization to every
/// method at every sweep value. Trials run in parallel; aggregation is
/// ordered by trial index, so reruns are byte-identical.
ExperimentResult run_experiment(const ExperimentSpec& spec,
                                const SolveOptions& opt = {});

/// Flat key = value spec file, '#' comments. Throws ConfigError with the
/// offending line on unknown keys or malformed values. The MIMO_SEED
/// environment variable overrides the seed when set.
ExperimentSpec parse_spec_file(const std::string& path);
ExperimentSpec parse_spec_text(const std::string& text,
                               const std::string& origin);

std::string rows_to_csv(const std::vector<ExperimentRow>& rows);
std::string trials_to_csv(const std::vector<TrialRecord>& trials);

std::string method_name(Method m);
std::optional<Method> method_from_name(const std::string& name);
std::string status_name(SolveStatus s);

double db_to_linear(double db);
double linear_to_db(double v);

}  // namespace mimobf
