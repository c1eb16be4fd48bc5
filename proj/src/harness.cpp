#include "mimobf/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

namespace mimobf {

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double v) { return 10.0 * std::log10(v); }

std::string method_name(Method m) {
  switch (m) {
    case Method::GroupGsinr: return "group";
    case Method::PerStreamGsinr: return "per_stream";
    case Method::Khachan: return "khachan";
    case Method::BdGroup: return "bd_group";
    case Method::BdPerStream: return "bd_per_stream";
  }
  return "unknown";
}

std::optional<Method> method_from_name(const std::string& name) {
  if (name == "group") return Method::GroupGsinr;
  if (name == "per_stream") return Method::PerStreamGsinr;
  if (name == "khachan") return Method::Khachan;
  if (name == "bd_group") return Method::BdGroup;
  if (name == "bd_per_stream") return Method::BdPerStream;
  return std::nullopt;
}

std::string status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::MaxIters: return "max_iters";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::BudgetExceeded: return "budget_exceeded";
  }
  return "unknown";
}

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

[[noreturn]] void fail(const std::string& origin, int line,
                       const std::string& what) {
  throw ConfigError(origin + ":" + std::to_string(line) + ": " + what);
}

double parse_double(const std::string& origin, int line, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size() || !std::isfinite(d)) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    fail(origin, line, "expected a number, got '" + v + "'");
  }
}

std::size_t parse_count(const std::string& origin, int line,
                        const std::string& v) {
  const double d = parse_double(origin, line, v);
  if (d < 0 || d != std::floor(d))
    fail(origin, line, "expected a nonnegative integer, got '" + v + "'");
  return static_cast<std::size_t>(d);
}

}  // namespace

ExperimentSpec parse_spec_text(const std::string& text,
                               const std::string& origin) {
  ExperimentSpec spec;
  SystemConfig& cfg = spec.base_config;
  cfg.epsilon = 1e-3;
  cfg.max_iters = 50;
  cfg.noise_power = 1.0;

  bool have_problem = false, have_methods = false, have_k = false,
       have_m = false, have_n = false;
  std::vector<double> gamma_db, pmax_db;
  std::string lequal = "N";
  std::optional<std::vector<std::size_t>> n_list;

  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw = raw.substr(0, hash);
    raw = trim(raw);
    if (raw.empty()) continue;
    const auto eq = raw.find('=');
    if (eq == std::string::npos) fail(origin, lineno, "expected key = value");
    const std::string key = trim(raw.substr(0, eq));
    const std::string val = trim(raw.substr(eq + 1));
    if (val.empty()) fail(origin, lineno, "empty value for key '" + key + "'");

    if (key == "problem") {
      if (val == "pr") spec.problem = Problem::Pr;
      else if (val == "pp") spec.problem = Problem::Pp;
      else fail(origin, lineno, "problem must be 'pr' or 'pp'");
      have_problem = true;
    } else if (key == "methods") {
      for (const std::string& name : split_list(val)) {
        const auto m = method_from_name(name);
        if (!m) fail(origin, lineno, "unknown method '" + name + "'");
        spec.methods.push_back(*m);
      }
      have_methods = !spec.methods.empty();
    } else if (key == "K") {
      cfg.num_users = parse_count(origin, lineno, val);
      have_k = true;
    } else if (key == "M") {
      cfg.tx_antennas = parse_count(origin, lineno, val);
      have_m = true;
    } else if (key == "N") {
      std::vector<std::size_t> n;
      for (const std::string& item : split_list(val))
        n.push_back(parse_count(origin, lineno, item));
      if (n.empty()) fail(origin, lineno, "empty antenna list");
      n_list = n;
      have_n = true;
    } else if (key == "Lequal") {
      lequal = val;
    } else if (key == "gamma_db") {
      for (const std::string& item : split_list(val))
        gamma_db.push_back(parse_double(origin, lineno, item));
    } else if (key == "pmax_db") {
      for (const std::string& item : split_list(val))
        pmax_db.push_back(parse_double(origin, lineno, item));
    } else if (key == "trials") {
      spec.trials = parse_count(origin, lineno, val);
    } else if (key == "seed") {
      spec.base_seed = parse_count(origin, lineno, val);
    } else if (key == "filter_policy") {
      if (val == "all_converged") spec.filter_policy = FilterPolicy::AllConverged;
      else if (val == "per_method") spec.filter_policy = FilterPolicy::PerMethod;
      else fail(origin, lineno, "filter_policy must be all_converged or per_method");
    } else if (key == "epsilon") {
      cfg.epsilon = parse_double(origin, lineno, val);
    } else if (key == "max_iters") {
      cfg.max_iters = parse_count(origin, lineno, val);
    } else {
      fail(origin, lineno, "unknown key '" + key + "'");
    }
  }

  if (!have_problem) throw ConfigError(origin + ": missing key 'problem'");
  if (!have_methods) throw ConfigError(origin + ": missing key 'methods'");
  if (!have_k) throw ConfigError(origin + ": missing key 'K'");
  if (!have_m) throw ConfigError(origin + ": missing key 'M'");
  if (!have_n) throw ConfigError(origin + ": missing key 'N'");
  if (spec.trials < 1) throw ConfigError(origin + ": trials must be >= 1");

  if (n_list->size() == 1)
    cfg.rx_antennas.assign(cfg.num_users, (*n_list)[0]);
  else
    cfg.rx_antennas = *n_list;
  if (cfg.rx_antennas.size() != cfg.num_users)
    throw ConfigError(origin + ": antenna list length must be 1 or K");

  if (lequal == "N") {
    cfg.streams = cfg.rx_antennas;
  } else {
    std::size_t l = 0;
    try {
      l = static_cast<std::size_t>(std::stoul(lequal));
    } catch (const std::exception&) {
      throw ConfigError(origin + ": Lequal must be 'N' or an integer");
    }
    cfg.streams.assign(cfg.num_users, l);
  }

  // the sweep axis follows the problem; the other key must be a scalar
  if (spec.problem == Problem::Pr) {
    if (pmax_db.empty())
      throw ConfigError(origin + ": problem pr needs pmax_db values");
    if (gamma_db.size() > 1)
      throw ConfigError(origin + ": gamma_db must be scalar for problem pr");
    spec.sweep_variable = SweepVariable::PMaxDb;
    spec.sweep_values = pmax_db;
    const double g = gamma_db.empty() ? 0.0 : gamma_db[0];
    cfg.sinr_targets.assign(cfg.num_users, db_to_linear(g));
  } else {
    if (gamma_db.empty())
      throw ConfigError(origin + ": problem pp needs gamma_db values");
    if (pmax_db.size() > 1)
      throw ConfigError(origin + ": pmax_db must be scalar for problem pp");
    spec.sweep_variable = SweepVariable::GammaDb;
    spec.sweep_values = gamma_db;
    const double p = pmax_db.empty() ? 43.0 : pmax_db[0];
    cfg.p_max = db_to_linear(p) * cfg.noise_power;
    cfg.sinr_targets.assign(cfg.num_users, 1.0);
  }

  if (const char* env = std::getenv("MIMO_SEED")) {
    try {
      spec.base_seed = std::stoull(env);
    } catch (const std::exception&) {
      throw ConfigError("MIMO_SEED must be an integer, got '" +
                        std::string(env) + "'");
    }
  }

  // validate shapes early with a representative sweep point
  SystemConfig check = cfg;
  if (spec.problem == Problem::Pr)
    check.p_max = db_to_linear(spec.sweep_values[0]) * cfg.noise_power;
  check.validate();
  return spec;
}

ExperimentSpec parse_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open spec file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_spec_text(ss.str(), path);
}

namespace {

SystemConfig config_at(const ExperimentSpec& spec, double sweep_value) {
  SystemConfig cfg = spec.base_config;
  if (spec.sweep_variable == SweepVariable::PMaxDb)
    cfg.p_max = db_to_linear(sweep_value) * cfg.noise_power;
  else
    cfg.sinr_targets.assign(cfg.num_users, db_to_linear(sweep_value));
  return cfg;
}

TrialRecord run_one(const ExperimentSpec& spec, const SolveOptions& opt,
                    std::size_t trial, double sweep_value, Method method,
                    const ChannelSet& ch) {
  TrialRecord rec;
  rec.trial = trial;
  rec.seed = spec.base_seed + trial;
  rec.sweep_value = sweep_value;
  rec.method = method;
  const SystemConfig cfg = config_at(spec, sweep_value);
  IterationResult r;
  try {
    r = spec.problem == Problem::Pr ? solve_pr(cfg, ch, method, opt)
                                    : solve_pp(cfg, ch, method, opt);
  } catch (const DimensionInfeasible&) {
    rec.status = SolveStatus::Infeasible;
    return rec;
  }
  rec.status = r.status;
  rec.feasible = r.passed_feasibility;
  rec.converged = r.status == SolveStatus::Converged;
  rec.iters = r.iters_used;
  rec.balanced_level = r.balanced_level;
  rec.total_power = r.total_power;
  rec.sum_rate = r.sum_rate;
  return rec;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentSpec& spec,
                                const SolveOptions& opt) {
  if (spec.trials < 1) throw ConfigError("trials must be >= 1");
  if (spec.methods.empty()) throw ConfigError("no methods selected");
  for (double v : spec.sweep_values)
    if (!std::isfinite(v)) throw ConfigError("non-finite sweep value");

  const std::size_t n_sweep = spec.sweep_values.size();
  const std::size_t n_meth = spec.methods.size();
  const std::size_t per_trial = n_sweep * n_meth;
  std::vector<TrialRecord> records(spec.trials * per_trial);

  std::atomic<std::size_t> next{0};
  const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = std::min<std::size_t>(hw, spec.trials);
  auto work = [&]() {
    for (;;) {
      const std::size_t trial = next.fetch_add(1);
      if (trial >= spec.trials) return;
      const ChannelSet ch =
          generate_channel(spec.base_config, spec.base_seed + trial);
      for (std::size_t s = 0; s < n_sweep; ++s)
        for (std::size_t m = 0; m < n_meth; ++m)
          records[trial * per_trial + s * n_meth + m] =
              run_one(spec, opt, trial, spec.sweep_values[s], spec.methods[m],
                      ch);
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (std::thread& t : pool) t.join();

  ExperimentResult out;
  out.trials = std::move(records);

  auto rec_at = [&](std::size_t trial, std::size_t s, std::size_t m)
      -> const TrialRecord& {
    return out.trials[trial * per_trial + s * n_meth + m];
  };

  for (std::size_t s = 0; s < n_sweep; ++s) {
    // AllConverged keeps a trial only when every method succeeded there
    std::vector<bool> keep(spec.trials, true);
    if (spec.filter_policy == FilterPolicy::AllConverged) {
      for (std::size_t trial = 0; trial < spec.trials; ++trial)
        for (std::size_t m = 0; m < n_meth && keep[trial]; ++m)
          keep[trial] = rec_at(trial, s, m).converged;
    }
    for (std::size_t m = 0; m < n_meth; ++m) {
      ExperimentRow row;
      row.sweep_value = spec.sweep_values[s];
      row.method = spec.methods[m];
      std::size_t feasible = 0, converged = 0, used = 0;
      double sum_c = 0.0, sum_p = 0.0, sum_rate = 0.0, sum_iters = 0.0;
      for (std::size_t trial = 0; trial < spec.trials; ++trial) {
        const TrialRecord& rec = rec_at(trial, s, m);
        feasible += rec.feasible ? 1 : 0;
        converged += rec.converged ? 1 : 0;
        const bool in_mean = spec.filter_policy == FilterPolicy::AllConverged
                                 ? keep[trial]
                                 : rec.converged;
        if (!in_mean) continue;
        ++used;
        sum_c += rec.balanced_level;
        sum_p += rec.total_power;
        sum_rate += rec.sum_rate;
        sum_iters += static_cast<double>(rec.iters);
      }
      row.feasibility_rate =
          spec.problem == Problem::Pp
              ? static_cast<double>(feasible) / static_cast<double>(spec.trials)
              : 1.0;
      row.convergence_rate =
          spec.problem == Problem::Pp
              ? (feasible ? static_cast<double>(converged) /
                                static_cast<double>(feasible)
                          : 0.0)
              : static_cast<double>(converged) /
                    static_cast<double>(spec.trials);
      row.filtered_trials = used;
      if (used > 0) {
        const double n = static_cast<double>(used);
        row.mean_balanced_level = sum_c / n;
        row.mean_power_db = linear_to_db(sum_p / n);
        row.mean_sum_rate = sum_rate / n;
        row.mean_iters = sum_iters / n;
      }
      out.rows.push_back(row);
    }
  }
  return out;
}

std::string rows_to_csv(const std::vector<ExperimentRow>& rows) {
  std::string csv =
      "sweep_value,method,mean_C,mean_power_db,mean_sum_rate,"
      "feasibility_rate,convergence_rate,mean_iters\n";
  for (const ExperimentRow& r : rows) {
    csv += fmt(r.sweep_value);
    csv += ',';
    csv += method_name(r.method);
    csv += ',';
    csv += fmt(r.mean_balanced_level);
    csv += ',';
    csv += fmt(r.mean_power_db);
    csv += ',';
    csv += fmt(r.mean_sum_rate);
    csv += ',';
    csv += fmt(r.feasibility_rate);
    csv += ',';
    csv += fmt(r.convergence_rate);
    csv += ',';
    csv += fmt(r.mean_iters);
    csv += '\n';
  }
  return csv;
}

std::string trials_to_csv(const std::vector<TrialRecord>& trials) {
  std::string csv =
      "trial,seed,sweep_value,method,status,feasible,converged,iters,"
      "balanced_level,total_power_w,sum_rate\n";
  for (const TrialRecord& t : trials) {
    csv += std::to_string(t.trial);
    csv += ',';
    csv += std::to_string(t.seed);
    csv += ',';
    csv += fmt(t.sweep_value);
    csv += ',';
    csv += method_name(t.method);
    csv += ',';
    csv += status_name(t.status);
    csv += ',';
    csv += t.feasible ? "1" : "0";
    csv += ',';
    csv += t.converged ? "1" : "0";
    csv += ',';
    csv += std::to_string(t.iters);
    csv += ',';
    csv += fmt(t.balanced_level);
    csv += ',';
    csv += fmt(t.total_power);
    csv += ',';
    csv += fmt(t.sum_rate);
    csv += '\n';
  }
  return csv;
}

}  // namespace mimobf
