#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "mimobf/numerics.hpp"

// System configuration, Rayleigh channel generation and the SINR /
// covariance / coupling quantities shared by the beamformers and the
// power allocation solvers.

namespace mimobf {

struct ZeroSignalGain : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class LinkSide { Downlink, Uplink };

struct SystemConfig {
  std::size_t num_users = 0;              // K
  std::size_t tx_antennas = 0;            // M at the base station
  std::vector<std::size_t> rx_antennas;   // N_k per user
  std::vector<std::size_t> streams;       // L_k per user, L_k <= min(M, N_k)
  std::vector<double> sinr_targets;       // gamma_k, linear scale
  double noise_power = 1.0;               // sigma^2 [W]
  double p_max = 10.0;                    // sum power budget [W]
  double epsilon = 1e-3;                  // convergence tolerance
  std::size_t max_iters = 50;

  std::size_t total_streams() const;
  std::size_t total_rx_antennas() const;
  // index of user k's first stream in the flat per-stream power vector
  std::size_t stream_offset(std::size_t k) const;
  void validate() const;  // throws std::invalid_argument on broken invariants
};

// Per-user channel matrices stored as M x N_k; the downlink channel seen by
// user k is the adjoint (N_k x M).
struct ChannelSet {
  std::vector<ComplexMatrix> user_channels;
};

struct BeamformerSet {
  std::vector<ComplexMatrix> tx;  // M x L_k transmit blocks
  std::vector<ComplexMatrix> rx;  // N_k x L_k receive blocks

  // Transmit blocks take consecutive columns of I_M (wrapping modulo M for
  // overloaded systems); receive blocks take the first L_k columns of I_Nk.
  static BeamformerSet identity_slices(const SystemConfig& cfg);
};

// Flat per-stream powers for both link directions, user k's streams at
// stream_offset(k). Group power of a user is the sum over its streams.
struct PowerAllocation {
  std::vector<double> downlink;  // p, length total_streams
  std::vector<double> uplink;    // q, length total_streams

  static PowerAllocation zeros(const SystemConfig& cfg);
  double group_power(const SystemConfig& cfg, std::size_t user,
                     LinkSide side) const;
};

// Coupling data for one (channel, beamformer) pair: the per-pair quadratic
// forms A_jk (downlink) / B_jk (uplink), the normalized coupling matrix and
// target-scaled diagonal used by the group solvers, and the per-user noise
// constant of the group-form SINR.
struct CouplingData {
  std::size_t num_users = 0;
  std::vector<ComplexMatrix> a;    // a[j*K + k], L_j x L_j
  std::vector<ComplexMatrix> b;    // b[j*K + k], L_j x L_j
  std::vector<double> d;           // diagonal of D, length K
  RealMatrix psi;                  // K x K, zero diagonal
  std::vector<double> sigma_vec;   // group-form noise constants (sigma^2)

  const ComplexMatrix& a_mat(std::size_t j, std::size_t k) const {
    return a[j * num_users + k];
  }
  const ComplexMatrix& b_mat(std::size_t j, std::size_t k) const {
    return b[j * num_users + k];
  }
  double a_diag(std::size_t j, std::size_t k, std::size_t l) const {
    return a_mat(j, k)(l, l).real();
  }
  double b_diag(std::size_t j, std::size_t k, std::size_t l) const {
    return b_mat(j, k)(l, l).real();
  }
};

/// i.i.d. circularly-symmetric complex Gaussian channel, unit entry
/// variance (1/2 per real component). Deterministic for a fixed seed.
ChannelSet generate_channel(const SystemConfig& cfg, std::uint64_t seed);

/// Downlink signal and interference-plus-noise covariances of user k,
/// N_k x N_k: (H_k^H U_k P_k U_k^H H_k, sum_{i != k} H_k^H U_i P_i U_i^H H_k
/// + sigma^2 I).
std::pair<ComplexMatrix, ComplexMatrix> dl_covariances(
    const SystemConfig& cfg, std::size_t user, const ChannelSet& ch,
    const BeamformerSet& bf, const std::vector<double>& dl_powers,
    double noise_power);

/// Virtual-uplink counterparts at the base station, M x M, with noise
/// covariance sigma^2 I_M.
std::pair<ComplexMatrix, ComplexMatrix> ul_covariances(
    const SystemConfig& cfg, std::size_t user, const ChannelSet& ch,
    const BeamformerSet& bf, const std::vector<double>& ul_powers,
    double noise_power);

/// Per-user average SINR from the diagonal coupling form:
/// sum_l p_kl [A_kk]_ll / (sum_{j != k} sum_l p_jl [A_jk]_ll + L_k sigma^2).
double avg_sinr_dl(const SystemConfig& cfg, std::size_t user,
                   const ChannelSet& ch, const BeamformerSet& bf,
                   const std::vector<double>& dl_powers, double noise_power);

/// Detection SINR of each stream of user k, counting every other stream
/// (including the user's own) as interference.
std::vector<double> stream_sinrs_dl(const SystemConfig& cfg, std::size_t user,
                                    const ChannelSet& ch,
                                    const BeamformerSet& bf,
                                    const std::vector<double>& dl_powers,
                                    double noise_power);

/// Throws ZeroSignalGain when some user's own-signal Frobenius gain
/// vanishes (below 1e-14).
CouplingData build_coupling(const SystemConfig& cfg, const ChannelSet& ch,
                            const BeamformerSet& bf);

/// sum_k sum_j log2(1 + SINR_kj) over the stream detection SINRs.
double sum_rate(const SystemConfig& cfg, const ChannelSet& ch,
                const BeamformerSet& bf, const std::vector<double>& dl_powers,
                double noise_power);

}  // namespace mimobf
