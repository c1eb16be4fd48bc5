#include "mimobf/driver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mimobf {

namespace {

enum class Family { Group, PerStream };

Family family_of(Method m) {
  switch (m) {
    case Method::PerStreamGsinr:
    case Method::BdPerStream:
      return Family::PerStream;
    default:
      return Family::Group;
  }
}

bool is_bd(Method m) {
  return m == Method::BdGroup || m == Method::BdPerStream;
}

double total(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

double feasibility_budget(const SystemConfig& cfg) {
  return std::pow(10.0, 4.3) * cfg.noise_power;
}

struct PrRun {
  SolveStatus status = SolveStatus::MaxIters;
  bool reached_level = false;
  std::size_t iters = 0;
  BeamformerSet bf;
  BalancedSolution dl;
  BalancedSolution ul;
  std::vector<double> step_levels;
  std::vector<double> iter_levels;
};

// Steps 1-6 of the balancing iteration: two downlink power updates around
// the downlink receive-filter update, then the mirrored virtual-uplink
// half. Convergence compares the post-step-3 downlink level of consecutive
// iterations, evaluated once the full cycle has finished.
PrRun run_pr_loop(const SystemConfig& cfg, const ChannelSet& ch, Family fam,
                  const SolveOptions& opt, std::optional<double> stop_level) {
  PrRun run;
  run.bf = BeamformerSet::identity_slices(cfg);
  std::vector<double> t_dl = uniform_group_powers(cfg, cfg.p_max);
  std::vector<double> t_ul = t_dl;

  auto allocate = [&](const CouplingData& cp, LinkSide side,
                      std::vector<double>& t_state) {
    BalancedSolution s;
    if (fam == Family::Group) {
      s = group_pr_allocate(cp, cfg, side);
    } else if (opt.refine_stream_pr) {
      s = stream_pr_fixed_point(cp, cfg, side, t_state);
    } else {
      s = stream_pr_allocate(cp, cfg, side, t_state);
    }
    t_state = s.group_powers;
    run.step_levels.push_back(s.balanced_level);
    return s;
  };

  CouplingData cp = build_coupling(cfg, ch, run.bf);
  double c_prev = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t n = 1; n <= cfg.max_iters; ++n) {
    run.iters = n;
    run.dl = allocate(cp, LinkSide::Downlink, t_dl);

    for (std::size_t k = 0; k < cfg.num_users; ++k) {
      GsinrFilter gs = gsinr_receive_dl(cfg, k, ch, run.bf,
                                        run.dl.stream_powers, cfg.noise_power);
      run.bf.rx[k] = std::move(gs.filter);
      if (opt.observer) {
        auto [rs, rn] = dl_covariances(cfg, k, ch, run.bf,
                                       run.dl.stream_powers, cfg.noise_power);
        opt.observer(
            {LinkSide::Downlink, n, k, &run.bf.rx[k], &rn});
      }
    }
    cp = build_coupling(cfg, ch, run.bf);

    run.dl = allocate(cp, LinkSide::Downlink, t_dl);
    const double c_n = run.dl.balanced_level;

    run.ul = allocate(cp, LinkSide::Uplink, t_ul);

    for (std::size_t k = 0; k < cfg.num_users; ++k) {
      GsinrFilter gs = gsinr_receive_ul(cfg, k, ch, run.bf,
                                        run.ul.stream_powers, cfg.noise_power);
      run.bf.tx[k] = std::move(gs.filter);
      if (opt.observer) {
        auto [rs, rn] = ul_covariances(cfg, k, ch, run.bf,
                                       run.ul.stream_powers, cfg.noise_power);
        opt.observer({LinkSide::Uplink, n, k, &run.bf.tx[k], &rn});
      }
    }
    cp = build_coupling(cfg, ch, run.bf);

    run.ul = allocate(cp, LinkSide::Uplink, t_ul);

    run.iter_levels.push_back(c_n);
    // the crossing verdict reads the levels once the cycle has completed,
    // so a switch to power minimization inherits the updated transmit side
    if (stop_level) {
      for (std::size_t i = run.step_levels.size() - 4;
           i < run.step_levels.size(); ++i) {
        if (run.step_levels[i] >= *stop_level) {
          run.reached_level = true;
          return run;
        }
      }
    }
    if (n >= 2 && std::abs(c_n - c_prev) < cfg.epsilon) {
      run.status = SolveStatus::Converged;
      return run;
    }
    c_prev = c_n;
  }
  return run;
}

// Zero-forcing path: the transmit side is fixed by the null-space design,
// so one receive-filter pass and one power solve settle the problem.
IterationResult solve_bd(const SystemConfig& cfg, const ChannelSet& ch,
                         Method method, Problem prob, const SolveOptions& opt) {
  const Family fam = family_of(method);
  IterationResult res;
  res.solved_config = cfg;
  res.beamformers.tx = bd_transmit(cfg, ch);
  res.beamformers.rx = BeamformerSet::identity_slices(cfg).rx;

  // any scaled-identity per-user power gives the same receive filters here;
  // interference-free covariances make their directions power-invariant
  std::vector<double> p0(cfg.total_streams(),
                         prob == Problem::Pr
                             ? cfg.p_max / static_cast<double>(cfg.total_streams())
                             : 1.0);
  for (std::size_t k = 0; k < cfg.num_users; ++k) {
    GsinrFilter gs =
        gsinr_receive_dl(cfg, k, ch, res.beamformers, p0, cfg.noise_power);
    res.beamformers.rx[k] = std::move(gs.filter);
    if (opt.observer) {
      auto [rs, rn] =
          dl_covariances(cfg, k, ch, res.beamformers, p0, cfg.noise_power);
      opt.observer({LinkSide::Downlink, 1, k, &res.beamformers.rx[k], &rn});
    }
  }
  const CouplingData cp = build_coupling(cfg, ch, res.beamformers);

  res.powers = PowerAllocation::zeros(cfg);
  if (prob == Problem::Pr) {
    res.final_solution =
        fam == Family::Group
            ? group_pr_allocate(cp, cfg, LinkSide::Downlink)
            : stream_pr_allocate(cp, cfg, LinkSide::Downlink,
                                 uniform_group_powers(cfg, cfg.p_max));
    res.passed_feasibility = true;
  } else {
    // feasibility: the balancing level at the large probe budget
    SystemConfig probe = cfg;
    probe.p_max = feasibility_budget(cfg);
    const BalancedSolution feas =
        fam == Family::Group
            ? group_pr_allocate(cp, probe, LinkSide::Downlink)
            : stream_pr_allocate(cp, probe, LinkSide::Downlink,
                                 uniform_group_powers(probe, probe.p_max));
    res.feasibility_iters = 1;
    if (feas.balanced_level < 1.0) {
      res.status = SolveStatus::Infeasible;
      return res;
    }
    res.passed_feasibility = true;
    std::optional<BalancedSolution> sol =
        fam == Family::Group ? group_pp_allocate(cp, cfg, LinkSide::Downlink)
                             : stream_pp_allocate(cp, cfg, LinkSide::Downlink);
    if (!sol) {
      res.status = SolveStatus::Infeasible;
      return res;
    }
    res.final_solution = std::move(*sol);
  }

  res.status = SolveStatus::Converged;
  res.iters_used = 1;
  res.powers.downlink = res.final_solution.stream_powers;
  res.balanced_level = res.final_solution.balanced_level;
  res.step_levels = {res.balanced_level};
  res.balanced_level_trace = {res.balanced_level};
  res.total_power = total(res.powers.downlink);
  if (prob == Problem::Pp) {
    res.objective_trace = {res.total_power};
    if (res.total_power > cfg.p_max * (1.0 + 1e-9)) {
      res.status = SolveStatus::BudgetExceeded;
      return res;
    }
  }
  res.sum_rate = sum_rate(cfg, ch, res.beamformers, res.powers.downlink,
                          cfg.noise_power);
  return res;
}

}  // namespace

ExplodedSystem explode_per_stream(const SystemConfig& cfg,
                                  const ChannelSet& ch) {
  ExplodedSystem ex;
  ex.cfg.num_users = cfg.total_streams();
  ex.cfg.tx_antennas = cfg.tx_antennas;
  ex.cfg.noise_power = cfg.noise_power;
  ex.cfg.p_max = cfg.p_max;
  ex.cfg.epsilon = cfg.epsilon;
  ex.cfg.max_iters = cfg.max_iters;
  for (std::size_t k = 0; k < cfg.num_users; ++k) {
    for (std::size_t j = 0; j < cfg.streams[k]; ++j) {
      ex.cfg.rx_antennas.push_back(cfg.rx_antennas[k]);
      ex.cfg.streams.push_back(1);
      ex.cfg.sinr_targets.push_back(cfg.sinr_targets[k]);
      ex.ch.user_channels.push_back(ch.user_channels[k]);
    }
  }
  return ex;
}

bool objective_oscillating(std::span<const double> objective,
                           std::size_t window, double eps_rel) {
  if (objective.size() < window + 1) return false;
  double best_before = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + window < objective.size(); ++i)
    best_before = std::min(best_before, objective[i]);
  double best_window = std::numeric_limits<double>::infinity();
  for (std::size_t i = objective.size() - window; i < objective.size(); ++i)
    best_window = std::min(best_window, objective[i]);
  return best_window > best_before - eps_rel * std::abs(best_before);
}

IterationResult solve_pr(const SystemConfig& cfg, const ChannelSet& ch,
                         Method method, const SolveOptions& opt) {
  cfg.validate();
  if (is_bd(method)) return solve_bd(cfg, ch, method, Problem::Pr, opt);

  const bool exploded = method == Method::Khachan;
  ExplodedSystem ex;
  if (exploded) ex = explode_per_stream(cfg, ch);
  const SystemConfig& ecfg = exploded ? ex.cfg : cfg;
  const ChannelSet& ech = exploded ? ex.ch : ch;

  PrRun run = run_pr_loop(ecfg, ech, family_of(method), opt, std::nullopt);

  IterationResult res;
  res.solved_config = ecfg;
  res.status = run.status;
  res.passed_feasibility = true;
  res.iters_used = run.iters;
  res.balanced_level_trace = std::move(run.iter_levels);
  res.step_levels = std::move(run.step_levels);
  res.final_solution = run.dl;
  res.beamformers = std::move(run.bf);
  res.powers = PowerAllocation::zeros(ecfg);
  res.powers.downlink = res.final_solution.stream_powers;
  res.powers.uplink = run.ul.stream_powers.empty()
                          ? res.powers.uplink
                          : run.ul.stream_powers;
  res.balanced_level = res.final_solution.balanced_level;
  res.total_power = total(res.powers.downlink);
  res.sum_rate = sum_rate(ecfg, ech, res.beamformers, res.powers.downlink,
                          ecfg.noise_power);
  return res;
}

IterationResult solve_pp(const SystemConfig& cfg, const ChannelSet& ch,
                         Method method, const SolveOptions& opt) {
  cfg.validate();
  if (is_bd(method)) {
    try {
      return solve_bd(cfg, ch, method, Problem::Pp, opt);
    } catch (const DimensionInfeasible&) {
      IterationResult res;
      res.solved_config = cfg;
      res.status = SolveStatus::Infeasible;
      return res;
    }
  }

  const bool exploded = method == Method::Khachan;
  ExplodedSystem ex;
  if (exploded) ex = explode_per_stream(cfg, ch);
  const SystemConfig& ecfg = exploded ? ex.cfg : cfg;
  const ChannelSet& ech = exploded ? ex.ch : ch;
  Family fam = family_of(method);

  IterationResult res;
  res.solved_config = ecfg;
  res.powers = PowerAllocation::zeros(ecfg);

  // feasibility gate: balancing at the probe budget until the level hits 1;
  // the probe judges the method's achievable level, so the per-stream
  // updates run to their inner fixed point here
  SystemConfig probe = ecfg;
  probe.p_max = feasibility_budget(ecfg);
  probe.max_iters = std::min(opt.feasibility_stage_iters, ecfg.max_iters);
  SolveOptions probe_opt = opt;
  probe_opt.refine_stream_pr = true;
  PrRun feas = run_pr_loop(probe, ech, fam, probe_opt, 1.0);
  res.feasibility_iters = feas.iters;
  res.iters_used = feas.iters;
  if (!feas.reached_level) {
    res.status = SolveStatus::Infeasible;
    return res;
  }
  res.passed_feasibility = true;

  // minimization stage, continuing from the feasibility-stage beamformers
  BeamformerSet bf = std::move(feas.bf);
  CouplingData cp = build_coupling(ecfg, ech, bf);
  bool switched_to_group = false;
  auto allocate = [&](LinkSide side) -> std::optional<BalancedSolution> {
    if (fam == Family::PerStream) return stream_pp_allocate(cp, ecfg, side);
    std::optional<BalancedSolution> sol = group_pp_allocate(cp, ecfg, side);
    if (!sol && switched_to_group) {
      // the equal-split targets are unreachable at beamformers shaped by
      // the per-stream run; rebalance this step so the filters can migrate
      // toward a group-feasible operating point
      return group_pr_allocate(cp, ecfg, side);
    }
    return sol;
  };

  std::optional<BalancedSolution> dl, ul;
  std::vector<double> ratios;
  for (std::size_t n = 1; n <= ecfg.max_iters; ++n) {
    res.iters_used = res.feasibility_iters + n;

    dl = allocate(LinkSide::Downlink);
    if (!dl) break;
    res.step_levels.push_back(
        *std::min_element(dl->per_user_ratio.begin(), dl->per_user_ratio.end()));

    for (std::size_t k = 0; k < ecfg.num_users; ++k) {
      GsinrFilter gs = gsinr_receive_dl(ecfg, k, ech, bf, dl->stream_powers,
                                        ecfg.noise_power);
      bf.rx[k] = std::move(gs.filter);
      if (opt.observer) {
        auto [rs, rn] = dl_covariances(ecfg, k, ech, bf, dl->stream_powers,
                                       ecfg.noise_power);
        opt.observer({LinkSide::Downlink, n, k, &bf.rx[k], &rn});
      }
    }
    cp = build_coupling(ecfg, ech, bf);

    // the refreshed receive filters can only lift each user off its exact
    // target; how far the worst user sits above 1 measures how much the
    // beamformers still move, and is the level the convergence test watches
    ratios = per_user_ratios(cp, ecfg, LinkSide::Downlink, dl->stream_powers);
    const double c_n = *std::min_element(ratios.begin(), ratios.end());

    dl = allocate(LinkSide::Downlink);
    if (!dl) break;
    res.step_levels.push_back(
        *std::min_element(dl->per_user_ratio.begin(), dl->per_user_ratio.end()));

    ul = allocate(LinkSide::Uplink);
    if (!ul) break;
    res.step_levels.push_back(
        *std::min_element(ul->per_user_ratio.begin(), ul->per_user_ratio.end()));

    for (std::size_t k = 0; k < ecfg.num_users; ++k) {
      GsinrFilter gs = gsinr_receive_ul(ecfg, k, ech, bf, ul->stream_powers,
                                        ecfg.noise_power);
      bf.tx[k] = std::move(gs.filter);
      if (opt.observer) {
        auto [rs, rn] = ul_covariances(ecfg, k, ech, bf, ul->stream_powers,
                                       ecfg.noise_power);
        opt.observer({LinkSide::Uplink, n, k, &bf.tx[k], &rn});
      }
    }
    cp = build_coupling(ecfg, ech, bf);

    // mirrored uplink measurement at the refreshed transmit side
    const std::vector<double> ul_ratios =
        per_user_ratios(cp, ecfg, LinkSide::Uplink, ul->stream_powers);
    const double c_ul =
        *std::min_element(ul_ratios.begin(), ul_ratios.end());

    ul = allocate(LinkSide::Uplink);
    if (!ul) break;
    res.step_levels.push_back(
        *std::min_element(ul->per_user_ratio.begin(), ul->per_user_ratio.end()));

    res.balanced_level_trace.push_back(c_n);
    res.objective_trace.push_back(total(dl->stream_powers));

    // converged once neither beamforming half lifts its side off the
    // exact targets by more than epsilon
    if (std::abs(c_n - 1.0) < ecfg.epsilon &&
        std::abs(c_ul - 1.0) < ecfg.epsilon) {
      res.status = SolveStatus::Converged;
      break;
    }
    if (fam == Family::PerStream && !res.oscillation_detected &&
        objective_oscillating(res.objective_trace, opt.oscillation_window,
                              opt.oscillation_eps)) {
      res.oscillation_detected = true;
      if (opt.oscillation_policy == OscillationPolicy::SwitchToGroup) {
        fam = Family::Group;
        switched_to_group = true;
      }
    }
  }

  if (!dl || !ul) {
    res.status = SolveStatus::Infeasible;
    return res;
  }
  res.final_solution = *dl;
  if (!res.balanced_level_trace.empty())
    res.final_solution.balanced_level = res.balanced_level_trace.back();
  res.beamformers = std::move(bf);
  res.powers.downlink = dl->stream_powers;
  res.powers.uplink = ul->stream_powers;
  res.balanced_level = res.final_solution.balanced_level;
  res.total_power = total(res.powers.downlink);
  if (res.total_power > ecfg.p_max * (1.0 + 1e-9)) {
    res.status = SolveStatus::BudgetExceeded;
    return res;
  }
  res.sum_rate = sum_rate(ecfg, ech, res.beamformers, res.powers.downlink,
                          ecfg.noise_power);
  return res;
}

Feasibility feasibility_test(const SystemConfig& cfg, const ChannelSet& ch,
                             Method method, std::size_t* iters_out,
                             const SolveOptions& opt) {
  cfg.validate();
  if (iters_out) *iters_out = 0;
  if (is_bd(method)) {
    try {
      SystemConfig probe = cfg;
      probe.p_max = feasibility_budget(cfg);
      IterationResult r = solve_bd(probe, ch, method, Problem::Pr, opt);
      if (iters_out) *iters_out = 1;
      return r.balanced_level >= 1.0 ? Feasibility::Feasible
                                     : Feasibility::Infeasible;
    } catch (const DimensionInfeasible&) {
      return Feasibility::Infeasible;
    }
  }

  const bool exploded = method == Method::Khachan;
  ExplodedSystem ex;
  if (exploded) ex = explode_per_stream(cfg, ch);
  SystemConfig probe = exploded ? ex.cfg : cfg;
  probe.p_max = feasibility_budget(cfg);
  probe.max_iters = std::min(opt.feasibility_stage_iters, cfg.max_iters);
  const ChannelSet& ech = exploded ? ex.ch : ch;

  PrRun run = run_pr_loop(probe, ech, family_of(method), opt, 1.0);
  if (iters_out) *iters_out = run.iters;
  return run.reached_level ? Feasibility::Feasible : Feasibility::Infeasible;
}

}  // namespace mimobf
