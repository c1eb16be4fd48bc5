#include "mimobf/power.hpp"

#include <algorithm>
#include <cmath>

namespace mimobf {

namespace {

double coupling_diag(const CouplingData& cp, LinkSide side, std::size_t j,
                     std::size_t k, std::size_t l) {
  return side == LinkSide::Downlink ? cp.a_diag(j, k, l) : cp.b_diag(j, k, l);
}

// per-stream powers from per-user group powers with equal within-user split
std::vector<double> even_split(const SystemConfig& cfg,
                               const std::vector<double>& group) {
  std::vector<double> p(cfg.total_streams(), 0.0);
  for (std::size_t k = 0; k < cfg.num_users; ++k) {
    const double share = group[k] / static_cast<double>(cfg.streams[k]);
    const std::size_t off = cfg.stream_offset(k);
    for (std::size_t l = 0; l < cfg.streams[k]; ++l) p[off + l] = share;
  }
  return p;
}

std::vector<double> group_sums(const SystemConfig& cfg,
                               const std::vector<double>& stream_powers) {
  std::vector<double> t(cfg.num_users, 0.0);
  for (std::size_t k = 0; k < cfg.num_users; ++k) {
    const std::size_t off = cfg.stream_offset(k);
    for (std::size_t l = 0; l < cfg.streams[k]; ++l)
      t[k] += stream_powers[off + l];
  }
  return t;
}

double psi_entry(const CouplingData& cp, LinkSide side, std::size_t i,
                 std::size_t j) {
  // the uplink coupling is the transpose of the downlink coupling
  return side == LinkSide::Downlink ? cp.psi(i, j) : cp.psi(j, i);
}

struct ExtendedEig {
  double lambda = 0.0;
  std::vector<double> group_powers;
};

// Dominant eigenpair of the extended coupling matrix through its secular
// form: with T = D Psi and w = D sigma, the eigenvalue is the unique root
// of f(lambda) = 1^T (lambda I - T)^-1 w = P right of the spectral radius
// of T, and the power block is the resolvent image. The resolvent balance
// (T y + w = lambda y) holds exactly along the whole curve, so only the
// budget equation needs the root; a safeguarded bisection finds it at
// machine precision even when a large probe budget pushes the root onto
// the interference-limited spectral radius, where power iteration on the
// extended matrix stalls.
ExtendedEig extended_coupling_eigpair(const RealMatrix& t,
                                      const std::vector<double>& w,
                                      double budget) {
  const std::size_t n = w.size();
  double colsum = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += t(i, j);
    colsum = std::max(colsum, s);
  }
  double wsum = 0.0;
  for (double v : w) wsum += v;

  // valid right of the spectral radius: nonnegative resolvent image and
  // its budget sum; left of it the solve fails or turns negative
  std::vector<double> y(n, 0.0);
  auto eval = [&](double lambda, double& f) {
    RealMatrix sys(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        sys(i, j) = (i == j ? lambda : 0.0) - t(i, j);
    std::vector<double> cand;
    try {
      cand = solve_linear(sys, w);
    } catch (const SingularMatrix&) {
      return false;
    }
    f = 0.0;
    for (double v : cand) {
      if (v < -1e-12 * budget) return false;
      f += v;
    }
    y = std::move(cand);
    return true;
  };

  // hi has f <= P/2 by the column-sum resolvent bound
  double hi = colsum + 2.0 * wsum / budget;
  double f = 0.0;
  if (!eval(hi, f))
    throw NonConvergence("extended coupling bracket failed on the right");
  double lo = hi;
  for (int it = 0; it < 1100; ++it) {
    const double cand = lo * 0.5;
    if (!eval(cand, f) || f >= budget) {
      lo = cand;
      break;
    }
    hi = cand;  // still right of the root, tighten from above
    lo = cand;
    if (it == 1099)
      throw NonConvergence("extended coupling bracket failed on the left");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (eval(mid, f) && f < budget)
      hi = mid;
    else
      lo = mid;
  }
  if (!eval(hi, f))
    throw NonConvergence("extended coupling root evaluation failed");

  ExtendedEig out;
  out.lambda = hi;
  out.group_powers = y;
  for (double& v : out.group_powers) v = std::max(v, 0.0);
  return out;
}

}  // namespace

std::vector<double> per_user_ratios(const CouplingData& cp,
                                    const SystemConfig& cfg, LinkSide side,
                                    const std::vector<double>& p) {
  std::vector<double> out(cfg.num_users, 0.0);
  for (std::size_t k = 0; k < cfg.num_users; ++k) {
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < cfg.num_users; ++j) {
      const std::size_t off = cfg.stream_offset(j);
      double c = 0.0;
      for (std::size_t l = 0; l < cfg.streams[j]; ++l)
        c += p[off + l] * coupling_diag(cp, side, j, k, l);
      if (j == k)
        num = c;
      else
        den += c;
    }
    den += static_cast<double>(cfg.streams[k]) * cfg.noise_power;
    out[k] = num / den / cfg.sinr_targets[k];
  }
  return out;
}

BalancedSolution group_pr_allocate(const CouplingData& cp,
                                   const SystemConfig& cfg, LinkSide side) {
  const std::size_t K = cfg.num_users;
  RealMatrix t(K, K);
  std::vector<double> w(K);
  for (std::size_t i = 0; i < K; ++i) {
    for (std::size_t j = 0; j < K; ++j)
      t(i, j) = cp.d[i] * psi_entry(cp, side, i, j);
    w[i] = cp.d[i] * cp.sigma_vec[i];
  }
  const ExtendedEig eig = extended_coupling_eigpair(t, w, cfg.p_max);

  BalancedSolution sol;
  sol.balanced_level = 1.0 / eig.lambda;
  sol.group_powers = eig.group_powers;
  // the resolvent image sums to the budget at the root; pin it exactly
  double total = 0.0;
  for (double p : sol.group_powers) total += p;
  const double fix = cfg.p_max / total;
  for (double& p : sol.group_powers) p *= fix;
  sol.stream_powers = even_split(cfg, sol.group_powers);
  sol.per_user_ratio = per_user_ratios(cp, cfg, side, sol.stream_powers);
  return sol;
}

std::optional<BalancedSolution> group_pp_allocate(const CouplingData& cp,
                                                  const SystemConfig& cfg,
                                                  LinkSide side) {
  const std::size_t K = cfg.num_users;
  RealMatrix sys(K, K);
  std::vector<double> rhs(K);
  for (std::size_t i = 0; i < K; ++i) {
    for (std::size_t j = 0; j < K; ++j)
      sys(i, j) = (i == j ? 1.0 : 0.0) - cp.d[i] * psi_entry(cp, side, i, j);
    rhs[i] = cp.d[i] * cp.sigma_vec[i];
  }
  std::vector<double> t;
  try {
    t = solve_linear(sys, rhs);
  } catch (const SingularMatrix&) {
    return std::nullopt;
  }
  for (double& v : t) {
    if (v < 0.0) {
      if (v <= -1e-12) return std::nullopt;
      v = 0.0;  // numerical dust at the feasibility boundary
    }
  }
  BalancedSolution sol;
  sol.balanced_level = 1.0;
  sol.group_powers = std::move(t);
  sol.stream_powers = even_split(cfg, sol.group_powers);
  sol.per_user_ratio = per_user_ratios(cp, cfg, side, sol.stream_powers);
  return sol;
}

std::optional<BalancedSolution> stream_pp_allocate(const CouplingData& cp,
                                                   const SystemConfig& cfg,
                                                   LinkSide side) {
  const std::size_t K = cfg.num_users;
  const std::size_t L = cfg.total_streams();
  RealMatrix aeq(K, L);
  std::vector<double> beq(K);
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t j = 0; j < K; ++j) {
      const std::size_t off = cfg.stream_offset(j);
      for (std::size_t l = 0; l < cfg.streams[j]; ++l) {
        const double gain = coupling_diag(cp, side, j, k, l);
        aeq(k, off + l) = j == k ? gain / cfg.sinr_targets[k] : -gain;
      }
    }
    beq[k] = static_cast<double>(cfg.streams[k]) * cfg.noise_power;
  }
  std::optional<LpSolution> lp = lp_min_sum(aeq, beq);
  if (!lp) return std::nullopt;

  BalancedSolution sol;
  sol.balanced_level = 1.0;
  sol.stream_powers = std::move(lp->x);
  sol.group_powers = group_sums(cfg, sol.stream_powers);
  sol.per_user_ratio = per_user_ratios(cp, cfg, side, sol.stream_powers);
  return sol;
}

BalancedSolution stream_pr_allocate(const CouplingData& cp,
                                    const SystemConfig& cfg, LinkSide side,
                                    const std::vector<double>& prev_group) {
  const std::size_t K = cfg.num_users;

  // own-gain diagonals and their sums drive the within-user split
  std::vector<std::vector<double>> own(K);
  std::vector<double> own_sum(K, 0.0);
  for (std::size_t k = 0; k < K; ++k) {
    own[k].resize(cfg.streams[k]);
    for (std::size_t l = 0; l < cfg.streams[k]; ++l) {
      own[k][l] = coupling_diag(cp, side, k, k, l);
      own_sum[k] += own[k][l];
    }
    if (!(own_sum[k] > 0.0))
      throw ZeroGain("own-gain diagonal sum vanished for a user");
  }

  // aggregated level gains of the proportional split
  auto gain = [&](std::size_t j, std::size_t k) {
    // j == k: sum_l d_l^2 / sum_l d_l ; j != k: sum_l d_l [cross]_l / sum d_l
    double s = 0.0;
    for (std::size_t l = 0; l < cfg.streams[j]; ++l)
      s += own[j][l] * (j == k ? own[j][l] : coupling_diag(cp, side, j, k, l));
    return s / own_sum[j];
  };

  std::vector<double> level(K, 0.0);
  for (std::size_t k = 0; k < K; ++k) {
    double interf = static_cast<double>(cfg.streams[k]) * cfg.noise_power;
    for (std::size_t j = 0; j < K; ++j)
      if (j != k) interf += prev_group[j] * gain(j, k);
    level[k] = gain(k, k) / cfg.sinr_targets[k] / interf;
    if (!(level[k] > 0.0) || !std::isfinite(level[k]))
      throw ZeroGain("level gain vanished for a user");
  }

  double inv_sum = 0.0;
  for (std::size_t k = 0; k < K; ++k) inv_sum += 1.0 / level[k];

  BalancedSolution sol;
  sol.group_powers.resize(K);
  sol.stream_powers.assign(cfg.total_streams(), 0.0);
  for (std::size_t k = 0; k < K; ++k) {
    sol.group_powers[k] = cfg.p_max / (level[k] * inv_sum);
    const std::size_t off = cfg.stream_offset(k);
    for (std::size_t l = 0; l < cfg.streams[k]; ++l)
      sol.stream_powers[off + l] = sol.group_powers[k] * own[k][l] / own_sum[k];
  }
  sol.per_user_ratio = per_user_ratios(cp, cfg, side, sol.stream_powers);
  sol.balanced_level =
      *std::min_element(sol.per_user_ratio.begin(), sol.per_user_ratio.end());
  return sol;
}

BalancedSolution stream_pr_fixed_point(const CouplingData& cp,
                                       const SystemConfig& cfg, LinkSide side,
                                       std::vector<double> group_powers,
                                       double tol, std::size_t cap) {
  BalancedSolution sol;
  for (std::size_t it = 0; it < cap; ++it) {
    sol = stream_pr_allocate(cp, cfg, side, group_powers);
    double delta = 0.0;
    for (std::size_t k = 0; k < cfg.num_users; ++k)
      delta = std::max(delta, std::abs(sol.group_powers[k] - group_powers[k]));
    group_powers = sol.group_powers;
    if (delta < tol) break;
  }
  return sol;
}

std::vector<double> uniform_group_powers(const SystemConfig& cfg,
                                         double total_power) {
  const double per_stream =
      total_power / static_cast<double>(cfg.total_streams());
  std::vector<double> t(cfg.num_users, 0.0);
  for (std::size_t k = 0; k < cfg.num_users; ++k)
    t[k] = per_stream * static_cast<double>(cfg.streams[k]);
  return t;
}

}  // namespace mimobf
