// Acceptance suite. Each criterion prints one pass/fail line; the process
// exit code is the number of failures. "properties" runs the exact checks,
// "stats" the 200-trial Monte Carlo reproductions, "all" (default) both.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "mimobf/harness.hpp"
#include "support.hpp"

using namespace mimobf;

namespace {

struct Checker {
  int failures = 0;
  void report(int criterion, const char* name, bool pass,
              const std::string& detail) {
    std::printf("[%s] criterion %d: %s - %s\n", pass ? "PASS" : "FAIL",
                criterion, name, detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
  }
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

double total(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

// ------------------------------------------------------------------ C1
void criterion_balancing(Checker& ck) {
  std::mt19937_64 rng(1001);
  std::uniform_int_distribution<std::size_t> kpick(2, 4);
  double worst = 0.0;
  int pp_checked = 0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t k = kpick(rng);
    const std::size_t m = t % 2 == 0 ? 4 : 8;
    testsup::Instance inst = testsup::random_instance(rng, k, m, 3, 0.3, 1.5);
    const CouplingData cp = build_coupling(inst.cfg, inst.ch, inst.bf);

    const BalancedSolution pr =
        group_pr_allocate(cp, inst.cfg, LinkSide::Downlink);
    for (std::size_t u = 0; u < k; ++u) {
      const double ratio = avg_sinr_dl(inst.cfg, u, inst.ch, inst.bf,
                                       pr.stream_powers, 1.0) /
                           inst.cfg.sinr_targets[u];
      worst = std::max(worst,
                       std::abs(ratio - pr.balanced_level) / pr.balanced_level);
    }
    const auto pp = group_pp_allocate(cp, inst.cfg, LinkSide::Downlink);
    if (pp) {
      ++pp_checked;
      for (std::size_t u = 0; u < k; ++u) {
        const double ratio = avg_sinr_dl(inst.cfg, u, inst.ch, inst.bf,
                                         pp->stream_powers, 1.0) /
                             inst.cfg.sinr_targets[u];
        worst = std::max(worst, std::abs(ratio - 1.0));
      }
    }
  }
  ck.report(1, "SINR balancing", worst <= 1e-6 && pp_checked >= 50,
            "max ratio spread " + fmt(worst) + " (limit 1e-06), " +
                std::to_string(pp_checked) + " feasible minimizations");
}

// ------------------------------------------------------------------ C2
void criterion_duality(Checker& ck) {
  std::mt19937_64 rng(1002);
  std::uniform_int_distribution<std::size_t> kpick(2, 4);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t k = kpick(rng);
    const std::size_t m = t % 2 == 0 ? 4 : 8;
    testsup::Instance inst = testsup::random_instance(rng, k, m, 3, 0.5, 2.0,
                                                      /*beamform_pass=*/false);
    const CouplingData cp = build_coupling(inst.cfg, inst.ch, inst.bf);
    const double cdl =
        group_pr_allocate(cp, inst.cfg, LinkSide::Downlink).balanced_level;
    const double cul =
        group_pr_allocate(cp, inst.cfg, LinkSide::Uplink).balanced_level;
    worst = std::max(worst, std::abs(cdl - cul) / cdl);
  }
  ck.report(2, "uplink-downlink duality", worst <= 1e-8,
            "max level mismatch " + fmt(worst) + " (limit 1e-08)");
}

// ------------------------------------------------------------------ C3
void criterion_eigen(Checker& ck) {
  std::mt19937_64 rng(1003);
  double worst_resid = 0.0, worst_gram = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 2 + t % 7;
    std::uniform_int_distribution<std::size_t> mpick(1, n);
    const ComplexMatrix a = testsup::random_psd(rng, n);
    const ComplexMatrix b = testsup::random_pd(rng, n);
    const std::size_t m = mpick(rng);
    const EigResult r = hermitian_generalized_eig(a, b, m);
    for (std::size_t j = 0; j < m; ++j) {
      const std::vector<cxd> v = r.vectors.col(j);
      double resid = 0.0;
      for (std::size_t row = 0; row < n; ++row) {
        cxd acc = 0.0;
        for (std::size_t c = 0; c < n; ++c)
          acc += (a(row, c) - r.values[j] * b(row, c)) * v[c];
        resid += std::norm(acc);
      }
      resid = std::sqrt(resid) /
              (a.frobenius_norm() + r.values[j] * b.frobenius_norm());
      worst_resid = std::max(worst_resid, resid);
    }
    const ComplexMatrix gram = r.vectors.adjoint() * (b * r.vectors);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j)
        worst_gram = std::max(
            worst_gram, std::abs(gram(i, j) - (i == j ? cxd(1, 0) : cxd(0, 0))));
  }
  ck.report(3, "generalized eigensolver", worst_resid <= 1e-10 && worst_gram <= 1e-10,
            "max scaled residual " + fmt(worst_resid) + ", max gram error " +
                fmt(worst_gram) + " (limits 1e-10)");
}

// ------------------------------------------------------------------ C4
void criterion_lp(Checker& ck) {
  std::mt19937_64 rng(1004);
  double worst_gap = 0.0;
  int dominated = 0, group_feasible = 0, oracle_checked = 0;
  bool agree = true;
  for (int t = 0; t < 100; ++t) {
    SystemConfig cfg;
    cfg.num_users = 2;
    cfg.tx_antennas = 4;
    cfg.rx_antennas = {2, 2};
    cfg.streams = {2, 2};
    std::uniform_real_distribution<double> g(0.3, 1.5);
    cfg.sinr_targets = {g(rng), g(rng)};
    cfg.p_max = 20.0;
    const ChannelSet ch = generate_channel(cfg, rng());
    BeamformerSet bf = BeamformerSet::identity_slices(cfg);
    std::vector<double> p0(4, cfg.p_max / 4.0);
    for (std::size_t k = 0; k < 2; ++k)
      bf.rx[k] = gsinr_receive_dl(cfg, k, ch, bf, p0, 1.0).filter;
    const CouplingData cp = build_coupling(cfg, ch, bf);

    const auto stream = stream_pp_allocate(cp, cfg, LinkSide::Downlink);
    RealMatrix aeq(2, 4);
    std::vector<double> beq(2);
    for (std::size_t k = 0; k < 2; ++k) {
      for (std::size_t j = 0; j < 2; ++j)
        for (std::size_t l = 0; l < 2; ++l)
          aeq(k, j * 2 + l) = j == k ? cp.a_diag(j, k, l) / cfg.sinr_targets[k]
                                     : -cp.a_diag(j, k, l);
      beq[k] = 2.0;
    }
    const auto oracle = testsup::lp_vertex_oracle(aeq, beq);
    if (stream.has_value() != oracle.has_value()) {
      agree = false;
      continue;
    }
    if (stream) {
      ++oracle_checked;
      worst_gap = std::max(worst_gap,
                           std::abs(total(stream->stream_powers) - *oracle) /
                               std::max(1.0, *oracle));
    }
    const auto group = group_pp_allocate(cp, cfg, LinkSide::Downlink);
    if (group && stream) {
      ++group_feasible;
      if (total(stream->stream_powers) <=
          total(group->stream_powers) * (1.0 + 1e-9))
        ++dominated;
    }
  }
  ck.report(4, "per-stream LP optimality",
            agree && worst_gap <= 1e-8 && dominated == group_feasible &&
                group_feasible >= 50,
            "max oracle gap " + fmt(worst_gap) + " over " +
                std::to_string(oracle_checked) + " instances; " +
                std::to_string(dominated) + "/" +
                std::to_string(group_feasible) +
                " group-feasible instances dominated");
}

// ------------------------------------------------------------------ C5
void criterion_normalization(Checker& ck) {
  std::mt19937_64 rng(1005);
  double worst_trace = 0.0, worst_off = 0.0;
  std::size_t events = 0;
  SolveOptions opt;
  opt.observer = [&](const BeamformEvent& ev) {
    if (ev.side != LinkSide::Downlink) return;
    ++events;
    const ComplexMatrix& v = *ev.filter;
    double tr = 0.0;
    for (const cxd& z : v.data()) tr += std::norm(z);
    worst_trace =
        std::max(worst_trace, std::abs(tr - static_cast<double>(v.cols())));
    const ComplexMatrix g = v.adjoint() * (*ev.noise_cov) * v;
    double mean_diag = 0.0, off = 0.0;
    for (std::size_t i = 0; i < g.rows(); ++i) {
      mean_diag += g(i, i).real();
      for (std::size_t j = 0; j < g.cols(); ++j)
        if (i != j) off = std::max(off, std::abs(g(i, j)));
    }
    mean_diag /= static_cast<double>(g.rows());
    worst_off = std::max(worst_off, off / mean_diag);
  };

  for (int t = 0; t < 6; ++t) {
    testsup::Instance inst = testsup::random_instance(rng, 3, 8, 3, 0.5, 1.5,
                                                      /*beamform_pass=*/false);
    solve_pr(inst.cfg, inst.ch, Method::GroupGsinr, opt);
    solve_pr(inst.cfg, inst.ch, Method::PerStreamGsinr, opt);
    solve_pp(inst.cfg, inst.ch, Method::GroupGsinr, opt);
  }
  ck.report(5, "filter-bank normalization in full solves",
            worst_trace <= 1e-9 && worst_off <= 1e-8 && events > 200,
            "trace error " + fmt(worst_trace) + " (limit 1e-09), whitening " +
                fmt(worst_off) + " (limit 1e-08) over " +
                std::to_string(events) + " filter updates");
}

// ------------------------------------------------------------------ C6
void criterion_bd(Checker& ck) {
  std::mt19937_64 rng(1006);
  double worst_leak = 0.0, worst_orth = 0.0;
  bool exact = true;
  int feasible_built = 0, infeasible_raised = 0;
  for (int t = 0; t < 60; ++t) {
    SystemConfig cfg;
    cfg.num_users = 2 + t % 2;
    cfg.tx_antennas = 8;
    cfg.rx_antennas.clear();
    cfg.streams.clear();
    const bool force_overload = t % 3 == 0;
    std::uniform_int_distribution<std::size_t> npick(force_overload ? 4 : 1,
                                                     force_overload ? 9 : 3);
    for (std::size_t k = 0; k < cfg.num_users; ++k)
      cfg.rx_antennas.push_back(npick(rng));
    bool expect_raise = false;
    for (std::size_t k = 0; k < cfg.num_users; ++k) {
      std::size_t other = 0;
      for (std::size_t i = 0; i < cfg.num_users; ++i)
        if (i != k) other += cfg.rx_antennas[i];
      if (cfg.tx_antennas <= other) expect_raise = true;
    }
    for (std::size_t k = 0; k < cfg.num_users; ++k) {
      std::size_t other = 0;
      for (std::size_t i = 0; i < cfg.num_users; ++i)
        if (i != k) other += cfg.rx_antennas[i];
      const std::size_t room =
          cfg.tx_antennas > other ? cfg.tx_antennas - other : 1;
      cfg.streams.push_back(std::min(cfg.rx_antennas[k], room));
    }
    cfg.sinr_targets.assign(cfg.num_users, 1.0);
    const ChannelSet ch = generate_channel(cfg, rng());
    bool raised = false;
    std::vector<ComplexMatrix> u;
    try {
      u = bd_transmit(cfg, ch);
    } catch (const DimensionInfeasible&) {
      raised = true;
    }
    if (raised != expect_raise) exact = false;
    if (raised) {
      ++infeasible_raised;
      continue;
    }
    ++feasible_built;
    for (std::size_t k = 0; k < cfg.num_users; ++k) {
      for (std::size_t i = 0; i < cfg.num_users; ++i) {
        if (i == k) continue;
        const double leak =
            (ch.user_channels[i].adjoint() * u[k]).frobenius_norm() /
            std::max(1.0, ch.user_channels[i].frobenius_norm());
        worst_leak = std::max(worst_leak, leak);
      }
      const ComplexMatrix gram = u[k].adjoint() * u[k];
      worst_orth = std::max(
          worst_orth,
          (gram - ComplexMatrix::identity(gram.rows())).frobenius_norm());
    }
  }
  ck.report(6, "zero-forcing null spaces",
            exact && worst_leak <= 1e-10 && worst_orth <= 1e-10 &&
                feasible_built >= 20 && infeasible_raised >= 10,
            "max leak " + fmt(worst_leak) + ", max orthonormality error " +
                fmt(worst_orth) + " (limits 1e-10); " +
                std::to_string(feasible_built) + " built, " +
                std::to_string(infeasible_raised) + " raised");
}

// ------------------------------------------------------------------ C7
void criterion_dominance(Checker& ck) {
  std::mt19937_64 rng(1007);
  std::uniform_int_distribution<std::size_t> kpick(2, 4);
  bool ok = true;
  double tightest = 1e300;
  for (int t = 0; t < 100; ++t) {
    const std::size_t k = kpick(rng);
    testsup::Instance inst = testsup::random_instance(rng, k, 8, 3, 0.5, 2.0,
                                                      /*beamform_pass=*/false);
    std::uniform_real_distribution<double> u(0.5, 2.0);
    std::vector<double> p(inst.cfg.total_streams());
    for (double& v : p) v = u(rng);
    for (std::size_t user = 0; user < k; ++user) {
      GsinrFilter bank =
          gsinr_receive_dl(inst.cfg, user, inst.ch, inst.bf, p, 1.0);
      double bank_sum = 0.0;
      for (double v : bank.stream_sinrs) bank_sum += v;
      double stream_sum = 0.0;
      for (std::size_t j = 0; j < inst.cfg.streams[user]; ++j)
        stream_sum += khachan_stream_beamformer(inst.cfg, user, j, inst.ch,
                                                inst.bf, p, 1.0)
                          .sinr;
      if (bank_sum < stream_sum * (1.0 - 1e-9)) ok = false;
      tightest = std::min(tightest, bank_sum - stream_sum);
    }
  }
  ck.report(7, "filter-bank dominance over independent streams", ok,
            "min eigenvalue-sum margin " + fmt(tightest) + " (must be >= 0)");
}

// ------------------------------------------------------------------ C8
struct PairedGap {
  double mean = 0.0;
  double se = 0.0;
  std::size_t n = 0;
};

// Per-trial differences over the trials where every method converged at
// the given sweep value; records are trial-major, then sweep, then method.
PairedGap paired_gap(const ExperimentResult& res, const ExperimentSpec& spec,
                     double sweep, Method hi, Method lo) {
  const std::size_t n_meth = spec.methods.size();
  const std::size_t n_sweep = spec.sweep_values.size();
  std::size_t sweep_idx = 0;
  for (std::size_t s = 0; s < n_sweep; ++s)
    if (spec.sweep_values[s] == sweep) sweep_idx = s;

  std::vector<double> gaps;
  for (std::size_t t = 0; t < spec.trials; ++t) {
    bool all_ok = true;
    double vhi = 0.0, vlo = 0.0;
    for (std::size_t m = 0; m < n_meth; ++m) {
      const TrialRecord& rec =
          res.trials[t * n_sweep * n_meth + sweep_idx * n_meth + m];
      if (!rec.converged) all_ok = false;
      if (spec.methods[m] == hi) vhi = rec.balanced_level;
      if (spec.methods[m] == lo) vlo = rec.balanced_level;
    }
    if (all_ok) gaps.push_back(vhi - vlo);
  }
  PairedGap out;
  out.n = gaps.size();
  if (gaps.empty()) return out;
  for (double g : gaps) out.mean += g;
  out.mean /= static_cast<double>(gaps.size());
  double var = 0.0;
  for (double g : gaps) var += (g - out.mean) * (g - out.mean);
  if (gaps.size() > 1) var /= static_cast<double>(gaps.size() - 1);
  out.se = std::sqrt(var / static_cast<double>(gaps.size()));
  return out;
}

ExperimentSpec fig2_spec() {
  ExperimentSpec spec;
  spec.problem = Problem::Pr;
  spec.methods = {Method::GroupGsinr, Method::PerStreamGsinr, Method::Khachan};
  spec.base_config.num_users = 4;
  spec.base_config.tx_antennas = 8;
  spec.base_config.rx_antennas = {2, 2, 2, 2};
  spec.base_config.streams = {2, 2, 2, 2};
  spec.base_config.sinr_targets.assign(4, 1.0);
  spec.sweep_variable = SweepVariable::PMaxDb;
  spec.sweep_values = {10.0, 14.0, 18.0};
  spec.trials = 200;
  spec.base_seed = 0;
  return spec;
}

ExperimentSpec fig3_spec(std::vector<double> gammas,
                         std::vector<Method> methods) {
  ExperimentSpec spec;
  spec.problem = Problem::Pp;
  spec.methods = std::move(methods);
  spec.base_config.num_users = 2;
  spec.base_config.tx_antennas = 8;
  spec.base_config.rx_antennas = {4, 4};
  spec.base_config.streams = {4, 4};
  spec.base_config.sinr_targets.assign(2, 1.0);
  spec.base_config.p_max = std::pow(10.0, 4.3);
  spec.sweep_variable = SweepVariable::GammaDb;
  spec.sweep_values = std::move(gammas);
  spec.trials = 200;
  spec.base_seed = 0;
  return spec;
}

void criterion_fig2(Checker& ck) {
  const ExperimentSpec spec = fig2_spec();
  const ExperimentResult res = run_experiment(spec);
  bool ok = true;
  std::string detail;
  for (double p : spec.sweep_values) {
    const PairedGap ps_grp =
        paired_gap(res, spec, p, Method::PerStreamGsinr, Method::GroupGsinr);
    const PairedGap grp_kha =
        paired_gap(res, spec, p, Method::GroupGsinr, Method::Khachan);
    if (!(ps_grp.mean > ps_grp.se) || !(grp_kha.mean > grp_kha.se)) ok = false;
    detail += "P=" + fmt(p) + "dB: ps-grp " + fmt(ps_grp.mean) + "+/-" +
              fmt(ps_grp.se) + ", grp-kha " + fmt(grp_kha.mean) + "+/-" +
              fmt(grp_kha.se) + "; ";
  }
  ck.report(8, "balanced-level ordering", ok, detail);
}

// ------------------------------------------------------------------ C9
void criterion_fig3(Checker& ck, const ExperimentResult& res) {
  bool ok = true;
  std::string detail;
  for (double g : {2.0, 6.0}) {
    double p_grp = 0.0, p_ps = 0.0, p_kha = 0.0;
    for (const ExperimentRow& row : res.rows) {
      if (row.sweep_value != g) continue;
      const double lin = db_to_linear(row.mean_power_db);
      if (row.method == Method::GroupGsinr) p_grp = lin;
      if (row.method == Method::PerStreamGsinr) p_ps = lin;
      if (row.method == Method::Khachan) p_kha = lin;
    }
    if (!(p_ps <= p_grp && p_ps <= p_kha)) ok = false;
    detail += "g=" + fmt(g) + "dB: ps " + fmt(p_ps) + "W, grp " + fmt(p_grp) +
              "W, kha " + fmt(p_kha) + "W; ";
  }
  ck.report(9, "minimum-power ordering", ok, detail);
}

// ----------------------------------------------------------------- C10
void criterion_feasibility(Checker& ck) {
  const ExperimentSpec case1 =
      fig3_spec({12.0}, {Method::GroupGsinr, Method::PerStreamGsinr,
                         Method::Khachan, Method::BdGroup,
                         Method::BdPerStream});
  const ExperimentResult res1 = run_experiment(case1);
  const double want1[] = {0.99, 1.00, 0.67, 1.00, 1.00};
  bool ok = true;
  std::string detail = "case1(12dB): ";
  for (std::size_t m = 0; m < case1.methods.size(); ++m) {
    const double rate = res1.rows[m].feasibility_rate;
    if (std::abs(rate - want1[m]) > 0.10) ok = false;
    detail += method_name(case1.methods[m]) + " " + fmt(rate) + " (want " +
              fmt(want1[m]) + "); ";
  }

  ExperimentSpec case2;
  case2.problem = Problem::Pp;
  case2.methods = {Method::GroupGsinr, Method::PerStreamGsinr,
                   Method::Khachan};
  case2.base_config.num_users = 3;
  case2.base_config.tx_antennas = 8;
  case2.base_config.rx_antennas = {4, 4, 4};
  case2.base_config.streams = {4, 4, 4};
  case2.base_config.sinr_targets.assign(3, 1.0);
  case2.base_config.p_max = std::pow(10.0, 4.3);
  case2.sweep_variable = SweepVariable::GammaDb;
  case2.sweep_values = {3.0};
  case2.trials = 200;
  case2.base_seed = 0;
  const ExperimentResult res2 = run_experiment(case2);
  const double want2[] = {1.00, 1.00, 0.00};
  detail += "case2(3dB): ";
  for (std::size_t m = 0; m < case2.methods.size(); ++m) {
    const double rate = res2.rows[m].feasibility_rate;
    if (std::abs(rate - want2[m]) > 0.05) ok = false;
    detail += method_name(case2.methods[m]) + " " + fmt(rate) + " (want " +
              fmt(want2[m]) + "); ";
  }
  ck.report(10, "feasibility rates", ok, detail);
}

// ----------------------------------------------------------------- C11
void criterion_iterations(Checker& ck, const ExperimentResult& res) {
  double it_grp = 0.0, it_ps = 0.0, it_kha = 0.0;
  for (const ExperimentRow& row : res.rows) {
    if (row.sweep_value != 4.0) continue;
    if (row.method == Method::GroupGsinr) it_grp = row.mean_iters;
    if (row.method == Method::PerStreamGsinr) it_ps = row.mean_iters;
    if (row.method == Method::Khachan) it_kha = row.mean_iters;
  }
  auto within2 = [](double got, double want) {
    return got >= want / 2.0 && got <= want * 2.0;
  };
  const bool ok = within2(it_grp, 10.72) && within2(it_kha, 17.76) &&
                  within2(it_ps, 26.11) && it_grp < it_kha && it_kha < it_ps;
  ck.report(11, "mean iteration counts", ok,
            "group " + fmt(it_grp) + " (want ~10.72), khachan " + fmt(it_kha) +
                " (want ~17.76), per-stream " + fmt(it_ps) +
                " (want ~26.11), ordering group < khachan < per-stream");
}

// ----------------------------------------------------------------- C12
void criterion_convergence_shape(Checker& ck, const ExperimentResult& res) {
  double ps2 = -1.0, ps10 = -1.0;
  bool group_ok = true;
  std::string detail;
  for (const ExperimentRow& row : res.rows) {
    if (row.method == Method::PerStreamGsinr) {
      if (row.sweep_value == 2.0) ps2 = row.convergence_rate;
      if (row.sweep_value == 10.0) ps10 = row.convergence_rate;
    }
    if (row.method == Method::GroupGsinr) {
      if (row.convergence_rate < 0.95) group_ok = false;
      detail += "grp@" + fmt(row.sweep_value) + "dB " +
                fmt(row.convergence_rate) + "; ";
    }
  }
  const bool ok = ps2 >= ps10 && group_ok;
  ck.report(12, "convergence probability shape", ok,
            "per-stream rate " + fmt(ps2) + " @2dB vs " + fmt(ps10) +
                " @10dB (need >=); " + detail);
}

}  // namespace

int main(int argc, char** argv) {
  const std::string mode = argc > 1 ? argv[1] : "all";
  const bool properties = mode == "all" || mode == "properties";
  const bool stats = mode == "all" || mode == "stats";
  Checker ck;

  if (properties) {
    criterion_balancing(ck);
    criterion_duality(ck);
    criterion_eigen(ck);
    criterion_lp(ck);
    criterion_normalization(ck);
    criterion_bd(ck);
    criterion_dominance(ck);
  }
  if (stats) {
    criterion_fig2(ck);
    // one shared sweep covers the minimum-power ordering, the iteration
    // counts and the convergence-shape criteria
    const ExperimentResult fig3 = run_experiment(fig3_spec(
        {2.0, 4.0, 6.0, 10.0},
        {Method::GroupGsinr, Method::PerStreamGsinr, Method::Khachan}));
    criterion_fig3(ck, fig3);
    criterion_feasibility(ck);
    criterion_iterations(ck, fig3);
    criterion_convergence_shape(ck, fig3);
  }

  std::printf("%d criterion failure%s\n", ck.failures,
              ck.failures == 1 ? "" : "s");
  return ck.failures;
}
