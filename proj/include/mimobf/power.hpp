#pragma once

#include <optional>
#include <vector>

#include "mimobf/model.hpp"

// Power allocation solvers for the balancing problem (maximize the worst
// SINR-to-target ratio under a sum power budget) and the power
// minimization problem (hit every target exactly), each in a grouped
// (equal power within a user) and a per-stream variant, for either link
// direction of the fixed-beamformer subproblem.

namespace mimobf {

struct ZeroGain : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Feasibility { Feasible, Infeasible };

struct BalancedSolution {
  std::vector<double> stream_powers;  // length total_streams, solved side
  std::vector<double> group_powers;   // per-user sums, length K
  double balanced_level = 0.0;        // common ratio C (Pr) or 1 (Pp)
  std::vector<double> per_user_ratio; // achieved SINR/target per user
};

/// Achieved SINR-to-target ratios at the given per-stream powers, from the
/// diagonal coupling form of the chosen side.
std::vector<double> per_user_ratios(const CouplingData& cp,
                                    const SystemConfig& cfg, LinkSide side,
                                    const std::vector<double>& stream_powers);

/// Balancing under the sum power budget with equal within-user split:
/// dominant eigenpair of the extended coupling matrix; C = 1/lambda_max.
BalancedSolution group_pr_allocate(const CouplingData& cp,
                                   const SystemConfig& cfg, LinkSide side);

/// Exact-target group powers (I - D Psi)^-1 D sigma. nullopt when the
/// system is singular or demands a negative power.
std::optional<BalancedSolution> group_pp_allocate(const CouplingData& cp,
                                                  const SystemConfig& cfg,
                                                  LinkSide side);

/// Exact-target per-stream powers of minimum total power, by LP on the
/// per-user equality rows. nullopt when no nonnegative solution exists.
std::optional<BalancedSolution> stream_pp_allocate(const CouplingData& cp,
                                                   const SystemConfig& cfg,
                                                   LinkSide side);

/// One balancing update of the per-user powers with the waterfilling-style
/// within-user split: powers proportional to the own-gain diagonal, user
/// levels re-balanced against the interference of the previous iterate.
BalancedSolution stream_pr_allocate(const CouplingData& cp,
                                    const SystemConfig& cfg, LinkSide side,
                                    const std::vector<double>& prev_group);

/// Iterates stream_pr_allocate to a fixed point (sup-norm change below tol)
/// or the iteration cap, returning the last iterate.
BalancedSolution stream_pr_fixed_point(const CouplingData& cp,
                                       const SystemConfig& cfg, LinkSide side,
                                       std::vector<double> group_powers,
                                       double tol = 1e-10,
                                       std::size_t cap = 500);

/// Even per-stream start for the balancing iterations: t_k = P L_k / L.
std::vector<double> uniform_group_powers(const SystemConfig& cfg,
                                         double total_power);

}  // namespace mimobf
