#pragma once

#include <vector>

#include "mimobf/model.hpp"

// The three beamformer families: the group maximum-SINR filter bank for
// both link directions, the per-stream maximum-SINR baseline where a
// user's own streams interfere, and the block-diagonalization transmit
// beamformer.

namespace mimobf {

struct DimensionInfeasible : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GsinrFilter {
  ComplexMatrix filter;              // N_k x L_k (downlink) or M x L_k (uplink)
  std::vector<double> stream_sinrs;  // generalized eigenvalues, non-increasing
};

/// Receive filter bank of user k: the top-L_k generalized eigenvectors of
/// the downlink (signal, interference+noise) pencil, rescaled by one global
/// factor so trace(V^H V) = L_k while V^H R_n V stays a scaled identity.
GsinrFilter gsinr_receive_dl(const SystemConfig& cfg, std::size_t user,
                             const ChannelSet& ch, const BeamformerSet& bf,
                             const std::vector<double>& dl_powers,
                             double noise_power);

/// Virtual-uplink receive filter bank (the next transmit beamformer),
/// same construction on the uplink covariances.
GsinrFilter gsinr_receive_ul(const SystemConfig& cfg, std::size_t user,
                             const ChannelSet& ch, const BeamformerSet& bf,
                             const std::vector<double>& ul_powers,
                             double noise_power);

struct StreamFilter {
  std::vector<cxd> filter;  // unit Euclidean norm, length N_k
  double sinr = 0.0;        // maximum generalized eigenvalue
};

/// Independent per-stream receive filter: the top generalized eigenvector
/// of stream (k, j)'s own pencil, whose noise side also carries the
/// intra-user interference from the user's other streams.
StreamFilter khachan_stream_beamformer(const SystemConfig& cfg,
                                       std::size_t user, std::size_t stream,
                                       const ChannelSet& ch,
                                       const BeamformerSet& bf,
                                       const std::vector<double>& dl_powers,
                                       double noise_power);

/// Zero-forcing transmit blocks: U_k spans the null space of the stacked
/// interfering channels, taking the L_k directions of largest equivalent
/// channel gain. Throws DimensionInfeasible when M <= sum_{i != k} N_i or
/// the null space is smaller than L_k.
std::vector<ComplexMatrix> bd_transmit(const SystemConfig& cfg,
                                       const ChannelSet& ch);

}  // namespace mimobf
