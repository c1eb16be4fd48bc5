// Command-line front end: single solves, spec-file experiments with CSV
// output, and feasibility rate tables.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "mimobf/harness.hpp"

namespace {

using namespace mimobf;

std::vector<std::size_t> parse_counts(const std::string& csv) {
  std::vector<std::size_t> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stoul(item));
  }
  return out;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

int run_solve(std::size_t k, std::size_t m, const std::string& n_csv,
              const std::string& l_csv, double gamma_db, double pmax_db,
              std::uint64_t seed, const std::string& method_str,
              const std::string& problem_str, double epsilon,
              std::size_t max_iters, bool have_fixed, double fixed_channel) {
  SystemConfig cfg;
  cfg.num_users = k;
  cfg.tx_antennas = m;
  std::vector<std::size_t> n = parse_counts(n_csv);
  if (n.size() == 1) n.assign(k, n[0]);
  cfg.rx_antennas = n;
  if (l_csv.empty()) {
    cfg.streams = cfg.rx_antennas;
  } else {
    std::vector<std::size_t> l = parse_counts(l_csv);
    if (l.size() == 1) l.assign(k, l[0]);
    cfg.streams = l;
  }
  cfg.sinr_targets.assign(k, db_to_linear(gamma_db));
  cfg.p_max = db_to_linear(pmax_db) * cfg.noise_power;
  cfg.epsilon = epsilon;
  cfg.max_iters = max_iters;

  const auto method = method_from_name(method_str);
  if (!method) {
    std::cerr << "unknown method '" << method_str << "'\n";
    return 2;
  }
  if (const char* env = std::getenv("MIMO_SEED")) seed = std::stoull(env);

  try {
    cfg.validate();
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  ChannelSet ch;
  if (have_fixed) {
    for (std::size_t u = 0; u < k; ++u) {
      ComplexMatrix h(m, cfg.rx_antennas[u]);
      for (std::size_t r = 0; r < h.rows(); ++r)
        for (std::size_t c = 0; c < h.cols(); ++c) h(r, c) = fixed_channel;
      ch.user_channels.push_back(std::move(h));
    }
  } else {
    ch = generate_channel(cfg, seed);
  }

  IterationResult res;
  try {
    res = problem_str == "pr" ? solve_pr(cfg, ch, *method)
                              : solve_pp(cfg, ch, *method);
  } catch (const std::exception& e) {
    std::cerr << "solve failed: " << e.what() << "\n";
    return 1;
  }

  std::cout << "problem: " << problem_str << "\n";
  std::cout << "method: " << method_name(*method) << "\n";
  std::cout << "status: " << status_name(res.status) << "\n";
  std::cout << "iterations: " << res.iters_used << "\n";
  if (problem_str == "pp")
    std::cout << "feasibility_iterations: " << res.feasibility_iters << "\n";
  std::cout << "balanced_level: " << fmt(res.balanced_level) << "\n";
  std::cout << "total_power_w: " << fmt(res.total_power) << "\n";
  std::cout << "sum_rate_bits: " << fmt(res.sum_rate) << "\n";
  std::cout << "per_user_ratio:";
  for (double r : res.final_solution.per_user_ratio) std::cout << " " << fmt(r);
  std::cout << "\n";
  std::cout << "oscillation: "
            << (res.oscillation_detected ? "true" : "false") << "\n";
  std::cout << "level_trace:";
  for (double c : res.balanced_level_trace) std::cout << " " << fmt(c);
  std::cout << "\n";
  return res.status == SolveStatus::Converged ? 0 : 1;
}

int run_experiment_cmd(const std::string& spec_path, const std::string& out,
                       const std::string& trials_out, bool full_scale) {
  ExperimentSpec spec;
  try {
    spec = parse_spec_file(spec_path);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  if (full_scale) spec.trials = 1000;

  const ExperimentResult result = run_experiment(spec);
  std::ofstream os(out, std::ios::binary);
  if (!os) {
    std::cerr << "cannot write '" << out << "'\n";
    return 2;
  }
  os << rows_to_csv(result.rows);
  if (!trials_out.empty()) {
    std::ofstream ts(trials_out, std::ios::binary);
    if (!ts) {
      std::cerr << "cannot write '" << trials_out << "'\n";
      return 2;
    }
    ts << trials_to_csv(result.trials);
  }
  std::cout << "wrote " << result.rows.size() << " rows to " << out << "\n";
  return 0;
}

int run_feasibility(const std::string& spec_path) {
  ExperimentSpec spec;
  try {
    spec = parse_spec_file(spec_path);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  if (spec.problem != Problem::Pp) {
    std::cerr << "feasibility rates need a power-minimization spec "
                 "(problem = pp)\n";
    return 2;
  }

  const ExperimentResult result = run_experiment(spec);
  std::printf("%-10s %-14s %-18s %-18s\n", "gamma_db", "method",
              "feasibility_rate", "convergence_rate");
  for (const ExperimentRow& row : result.rows) {
    std::printf("%-10s %-14s %-18s %-18s\n", fmt(row.sweep_value).c_str(),
                method_name(row.method).c_str(),
                fmt(row.feasibility_rate).c_str(),
                fmt(row.convergence_rate).c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multiuser MIMO downlink beamforming and power allocation"};
  app.require_subcommand(1);

  // solve
  auto* solve = app.add_subcommand("solve", "solve one channel realization");
  std::size_t k = 1, m = 1, max_iters = 50;
  std::string n_csv = "1", l_csv, method_str = "group", problem_str = "pr";
  double gamma_db = 0.0, pmax_db = 10.0, epsilon = 1e-3, fixed_channel = 0.0;
  std::uint64_t seed = 0;
  bool have_fixed = false;
  solve->add_option("--k", k, "user count");
  solve->add_option("--m", m, "transmit antenna count");
  solve->add_option("--n", n_csv, "receive antennas per user (comma list)");
  solve->add_option("--l", l_csv, "streams per user (default: equal to --n)");
  solve->add_option("--gamma-db", gamma_db, "SINR target [dB]");
  solve->add_option("--pmax-db", pmax_db, "power budget over noise [dB]");
  solve->add_option("--seed", seed, "channel seed");
  solve->add_option("--method", method_str,
                    "group|per_stream|khachan|bd_group|bd_per_stream");
  solve->add_option("--problem", problem_str, "pr|pp")
      ->check(CLI::IsMember({"pr", "pp"}));
  solve->add_option("--epsilon", epsilon, "convergence tolerance");
  solve->add_option("--max-iters", max_iters, "iteration cap");
  auto* fixed_opt = solve->add_option("--fixed-channel", fixed_channel,
                                      "constant channel entry (debug)");
  solve->callback([&]() { have_fixed = fixed_opt->count() > 0; });

  // experiment
  auto* experiment =
      app.add_subcommand("experiment", "run a spec file, write CSV");
  std::string spec_path, out_path = "experiment.csv", trials_path;
  bool full_scale = false;
  experiment->add_option("--spec", spec_path, "spec file")->required();
  experiment->add_option("--out", out_path, "aggregate CSV path");
  experiment->add_option("--out-trials", trials_path, "per-trial CSV path");
  experiment->add_flag("--full-scale", full_scale, "run 1000 trials");

  // feasibility
  auto* feas = app.add_subcommand("feasibility", "feasibility rates table");
  std::string feas_spec;
  feas->add_option("--spec", feas_spec, "spec file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (solve->parsed())
    return run_solve(k, m, n_csv, l_csv, gamma_db, pmax_db, seed, method_str,
                     problem_str, epsilon, max_iters, have_fixed,
                     fixed_channel);
  if (experiment->parsed())
    return run_experiment_cmd(spec_path, out_path, trials_path, full_scale);
  if (feas->parsed()) return run_feasibility(feas_spec);
  return 2;
}
