#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mimobf/harness.hpp"

using namespace mimobf;

namespace {

const char* kSmallSpec = R"(# tiny balancing sweep
problem = pr
methods = group, khachan
K = 2
M = 4
N = 2,2
Lequal = N
gamma_db = 0
pmax_db = 10,14
trials = 4
seed = 7
filter_policy = all_converged
epsilon = 1e-3
max_iters = 50
)";

}  // namespace

TEST_CASE("dB conversions") {
  CHECK(db_to_linear(0.0) == doctest::Approx(1.0));
  CHECK(db_to_linear(10.0) == doctest::Approx(10.0));
  CHECK(db_to_linear(43.0) == doctest::Approx(std::pow(10.0, 4.3)));
  CHECK(linear_to_db(100.0) == doctest::Approx(20.0));
}

TEST_CASE("method names round-trip") {
  for (Method m : {Method::GroupGsinr, Method::PerStreamGsinr, Method::Khachan,
                   Method::BdGroup, Method::BdPerStream}) {
    const auto back = method_from_name(method_name(m));
    REQUIRE(back.has_value());
    CHECK(*back == m);
  }
  CHECK(!method_from_name("gradient_descent").has_value());
}

TEST_CASE("spec parsing fills the configuration") {
  const ExperimentSpec spec = parse_spec_text(kSmallSpec, "small");
  CHECK(spec.problem == Problem::Pr);
  REQUIRE(spec.methods.size() == 2);
  CHECK(spec.methods[0] == Method::GroupGsinr);
  CHECK(spec.methods[1] == Method::Khachan);
  CHECK(spec.base_config.num_users == 2);
  CHECK(spec.base_config.tx_antennas == 4);
  CHECK(spec.base_config.streams == std::vector<std::size_t>{2, 2});
  CHECK(spec.base_config.sinr_targets[0] == doctest::Approx(1.0));
  CHECK(spec.sweep_variable == SweepVariable::PMaxDb);
  REQUIRE(spec.sweep_values.size() == 2);
  CHECK(spec.trials == 4);
  CHECK(spec.base_seed == 7);
}

TEST_CASE("spec parsing diagnostics") {
  CHECK_THROWS_WITH_AS(parse_spec_text("problem = pr\nbogus_key = 1\n", "f"),
                       doctest::Contains("f:2"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_spec_text("problem = maybe\n", "f"),
                       doctest::Contains("pr"), ConfigError);
  CHECK_THROWS_AS(parse_spec_text("methods = group\nK = 1\nM = 1\nN = 1\n"
                                  "pmax_db = 10\n",
                                  "f"),
                  ConfigError);  // missing problem
  // a gamma sweep is not allowed for the balancing problem
  CHECK_THROWS_AS(parse_spec_text("problem = pr\nmethods = group\nK = 1\n"
                                  "M = 1\nN = 1\ngamma_db = 1,2\n"
                                  "pmax_db = 10\n",
                                  "f"),
                  ConfigError);
  CHECK_THROWS_AS(parse_spec_file("/nonexistent/path.spec"), ConfigError);
}

TEST_CASE("spec parsing broadcasts scalar antenna counts") {
  const ExperimentSpec spec = parse_spec_text(
      "problem = pp\nmethods = group\nK = 3\nM = 8\nN = 4\ngamma_db = 3\n",
      "b");
  CHECK(spec.base_config.rx_antennas == std::vector<std::size_t>{4, 4, 4});
  CHECK(spec.base_config.streams == std::vector<std::size_t>{4, 4, 4});
  // power-minimization default budget is the 43 dB probe level
  CHECK(spec.base_config.p_max == doctest::Approx(std::pow(10.0, 4.3)));
  CHECK(spec.sweep_variable == SweepVariable::GammaDb);
}

TEST_CASE("experiment on a deterministic scalar link") {
  ExperimentSpec spec;
  spec.problem = Problem::Pr;
  spec.methods = {Method::GroupGsinr};
  spec.base_config.num_users = 1;
  spec.base_config.tx_antennas = 1;
  spec.base_config.rx_antennas = {1};
  spec.base_config.streams = {1};
  spec.base_config.sinr_targets = {1.0};
  spec.sweep_variable = SweepVariable::PMaxDb;
  spec.sweep_values = {10.0};
  spec.trials = 1;
  spec.base_seed = 42;

  const ExperimentResult res = run_experiment(spec);
  REQUIRE(res.rows.size() == 1);
  REQUIRE(res.trials.size() == 1);
  // closed form: C = P |h|^2 / (gamma sigma^2) for the seeded channel draw
  const ChannelSet ch = generate_channel(spec.base_config, 42);
  const double h2 = std::norm(ch.user_channels[0](0, 0));
  CHECK(res.rows[0].mean_balanced_level ==
        doctest::Approx(10.0 * h2).epsilon(1e-9));
  CHECK(res.rows[0].convergence_rate == 1.0);
  CHECK(res.rows[0].feasibility_rate == 1.0);
}

TEST_CASE("experiment reruns are byte-identical") {
  const ExperimentSpec spec = parse_spec_text(kSmallSpec, "small");
  const ExperimentResult a = run_experiment(spec);
  const ExperimentResult b = run_experiment(spec);
  CHECK(rows_to_csv(a.rows) == rows_to_csv(b.rows));
  CHECK(trials_to_csv(a.trials) == trials_to_csv(b.trials));
}

TEST_CASE("csv schema is pinned") {
  const ExperimentSpec spec = parse_spec_text(kSmallSpec, "small");
  ExperimentSpec one = spec;
  one.trials = 2;
  const ExperimentResult res = run_experiment(one);
  const std::string csv = rows_to_csv(res.rows);
  CHECK(csv.rfind("sweep_value,method,mean_C,mean_power_db,mean_sum_rate,"
                  "feasibility_rate,convergence_rate,mean_iters\n",
                  0) == 0);
  // one row per (sweep value, method), ordered as given
  std::size_t lines = 0;
  for (char c : csv)
    if (c == '\n') ++lines;
  CHECK(lines == 1 + 2 * 2);
  CHECK(csv.find("10,group,") != std::string::npos);
  CHECK(csv.find("14,khachan,") != std::string::npos);
}

TEST_CASE("aggregation policies differ on partially converged sets") {
  ExperimentSpec spec;
  spec.problem = Problem::Pr;
  spec.methods = {Method::GroupGsinr, Method::PerStreamGsinr};
  spec.base_config.num_users = 2;
  spec.base_config.tx_antennas = 4;
  spec.base_config.rx_antennas = {2, 2};
  spec.base_config.streams = {2, 2};
  spec.base_config.sinr_targets = {1.0, 1.0};
  spec.base_config.max_iters = 3;  // force some non-convergence
  spec.sweep_variable = SweepVariable::PMaxDb;
  spec.sweep_values = {12.0};
  spec.trials = 30;
  spec.base_seed = 0;

  spec.filter_policy = FilterPolicy::AllConverged;
  const ExperimentResult all = run_experiment(spec);
  spec.filter_policy = FilterPolicy::PerMethod;
  const ExperimentResult per = run_experiment(spec);

  // per-method means can only draw from at least as many trials
  for (std::size_t i = 0; i < all.rows.size(); ++i)
    CHECK(per.rows[i].filtered_trials >= all.rows[i].filtered_trials);
  // the all-converged count is shared across methods
  CHECK(all.rows[0].filtered_trials == all.rows[1].filtered_trials);
}
