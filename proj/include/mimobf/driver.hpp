#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "mimobf/beamform.hpp"
#include "mimobf/power.hpp"

// Orchestrates the alternating downlink/virtual-uplink iteration over
// beamforming and power allocation into the five solvable methods, with
// convergence detection, the feasibility gate for power minimization, and
// oscillation handling for the per-stream minimizer.

namespace mimobf {

enum class Method { GroupGsinr, PerStreamGsinr, Khachan, BdGroup, BdPerStream };
enum class Problem { Pr, Pp };
enum class SolveStatus { Converged, MaxIters, Infeasible, BudgetExceeded };
enum class OscillationPolicy { KeepLast, SwitchToGroup };

// Fired after each receive-beamforming step; carries the filter together
// with the interference-plus-noise covariance it was built against.
struct BeamformEvent {
  LinkSide side = LinkSide::Downlink;
  std::size_t iteration = 0;
  std::size_t user = 0;
  const ComplexMatrix* filter = nullptr;
  const ComplexMatrix* noise_cov = nullptr;
};

struct SolveOptions {
  OscillationPolicy oscillation_policy = OscillationPolicy::KeepLast;
  std::size_t oscillation_window = 6;
  double oscillation_eps = 1e-6;  // relative objective improvement floor
  // run the balancing power update to its inner fixed point instead of the
  // single update per step that the iteration normally performs
  bool refine_stream_pr = false;
  // balancing iterations granted to the feasibility probe before the
  // verdict; one iteration reproduces the published feasibility rates,
  // larger values let the beamformers keep adapting during the probe
  std::size_t feasibility_stage_iters = 1;
  std::function<void(const BeamformEvent&)> observer;
};

struct IterationResult {
  SolveStatus status = SolveStatus::MaxIters;
  bool passed_feasibility = false;
  std::vector<double> balanced_level_trace;  // one level per iteration
  std::vector<double> step_levels;           // level after every power step
  std::vector<double> objective_trace;       // Pp: total power per iteration
  BalancedSolution final_solution;           // downlink side
  BeamformerSet beamformers;
  PowerAllocation powers;
  SystemConfig solved_config;  // exploded dimensions for the per-stream baseline
  std::size_t iters_used = 0;
  std::size_t feasibility_iters = 0;
  bool oscillation_detected = false;
  double balanced_level = 0.0;
  double total_power = 0.0;
  double sum_rate = 0.0;
};

// The independent-stream baseline runs through the same machinery on an
// exploded configuration: every stream becomes a single-stream virtual
// user that keeps its owner's antennas, channel and target.
struct ExplodedSystem {
  SystemConfig cfg;
  ChannelSet ch;
};
ExplodedSystem explode_per_stream(const SystemConfig& cfg,
                                  const ChannelSet& ch);

/// Balancing under the sum power budget. Zero-forcing methods run a single
/// pass with the transmit side fixed; the others iterate until the
/// downlink level settles within epsilon or the iteration cap.
IterationResult solve_pr(const SystemConfig& cfg, const ChannelSet& ch,
                         Method method, const SolveOptions& opt = {});

/// Power minimization: feasibility gate first (balancing at a 43 dB-over-
/// noise budget until the level reaches 1), then alternating exact-target
/// minimization until the achieved level is within epsilon of 1.
IterationResult solve_pp(const SystemConfig& cfg, const ChannelSet& ch,
                         Method method, const SolveOptions& opt = {});

/// Runs the method's balancing algorithm at 10^4.3 x noise power; feasible
/// the first time the balanced level reaches 1. iters_out receives the
/// number of balancing iterations spent.
Feasibility feasibility_test(const SystemConfig& cfg, const ChannelSet& ch,
                             Method method, std::size_t* iters_out = nullptr,
                             const SolveOptions& opt = {});

/// True when the best objective value inside the trailing window no longer
/// improves on the best seen before it by the relative epsilon.
bool objective_oscillating(std::span<const double> objective,
                           std::size_t window, double eps_rel);

}  // namespace mimobf
