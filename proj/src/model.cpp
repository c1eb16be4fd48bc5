#include "mimobf/model.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace mimobf {

std::size_t SystemConfig::total_streams() const {
  std::size_t s = 0;
  for (std::size_t l : streams) s += l;
  return s;
}

std::size_t SystemConfig::total_rx_antennas() const {
  std::size_t s = 0;
  for (std::size_t n : rx_antennas) s += n;
  return s;
}

std::size_t SystemConfig::stream_offset(std::size_t k) const {
  std::size_t s = 0;
  for (std::size_t i = 0; i < k; ++i) s += streams[i];
  return s;
}

void SystemConfig::validate() const {
  std::ostringstream err;
  if (num_users == 0) err << "user count must be positive; ";
  if (tx_antennas == 0) err << "transmit antenna count must be positive; ";
  if (rx_antennas.size() != num_users) err << "rx antenna list length != K; ";
  if (streams.size() != num_users) err << "stream list length != K; ";
  if (sinr_targets.size() != num_users) err << "SINR target list length != K; ";
  for (std::size_t k = 0; k < std::min(streams.size(), rx_antennas.size()); ++k) {
    if (streams[k] == 0 || rx_antennas[k] == 0)
      err << "user " << k << " has zero streams or antennas; ";
    else if (streams[k] > std::min(tx_antennas, rx_antennas[k]))
      err << "user " << k << " stream count exceeds min(M, N_k); ";
  }
  for (std::size_t k = 0; k < sinr_targets.size(); ++k)
    if (!(sinr_targets[k] > 0.0)) err << "gamma_" << k << " must be > 0; ";
  if (!(noise_power > 0.0)) err << "noise power must be > 0; ";
  if (!(p_max > 0.0)) err << "power budget must be > 0; ";
  if (!(epsilon > 0.0)) err << "epsilon must be > 0; ";
  if (max_iters == 0) err << "iteration cap must be positive; ";
  const std::string msg = err.str();
  if (!msg.empty()) throw std::invalid_argument("invalid SystemConfig: " + msg);
}

BeamformerSet BeamformerSet::identity_slices(const SystemConfig& cfg) {
  BeamformerSet bf;
  std::size_t offset = 0;
  for (std::size_t k = 0; k < cfg.num_users; ++k) {
    const std::size_t lk = cfg.streams[k];
    ComplexMatrix u(cfg.tx_antennas, lk);
    for (std::size_t j = 0; j < lk; ++j)
      u((offset + j) % cfg.tx_antennas, j) = 1.0;
    bf.tx.push_back(std::move(u));
    offset += lk;

    ComplexMatrix v(cfg.rx_antennas[k], lk);
    for (std::size_t j = 0; j < lk; ++j) v(j, j) = 1.0;
    bf.rx.push_back(std::move(v));
  }
  return bf;
}

PowerAllocation PowerAllocation::zeros(const SystemConfig& cfg) {
  PowerAllocation pa;
  pa.downlink.assign(cfg.total_streams(), 0.0);
  pa.uplink.assign(cfg.total_streams(), 0.0);
  return pa;
}

double PowerAllocation::group_power(const SystemConfig& cfg, std::size_t user,
                                    LinkSide side) const {
  const std::vector<double>& v =
      side == LinkSide::Downlink ? downlink : uplink;
  double s = 0.0;
  const std::size_t off = cfg.stream_offset(user);
  for (std::size_t l = 0; l < cfg.streams[user]; ++l) s += v[off + l];
  return s;
}

ChannelSet generate_channel(const SystemConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
  ChannelSet ch;
  ch.user_channels.reserve(cfg.num_users);
  for (std::size_t k = 0; k < cfg.num_users; ++k) {
    ComplexMatrix h(cfg.tx_antennas, cfg.rx_antennas[k]);
    for (std::size_t r = 0; r < h.rows(); ++r)
      for (std::size_t c = 0; c < h.cols(); ++c) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        h(r, c) = cxd(re, im);
      }
    ch.user_channels.push_back(std::move(h));
  }
  return ch;
}

namespace {

// sum_l p_l e_l e_l^H for the columns e_l of eff, i.e. eff diag(p) eff^H
ComplexMatrix weighted_outer(const ComplexMatrix& eff,
                             const double* powers) {
  ComplexMatrix out(eff.rows(), eff.rows());
  for (std::size_t l = 0; l < eff.cols(); ++l) {
    const double p = powers[l];
    if (p == 0.0) continue;
    for (std::size_t r = 0; r < eff.rows(); ++r) {
      const cxd er = eff(r, l) * p;
      for (std::size_t c = 0; c < eff.rows(); ++c)
        out(r, c) += er * std::conj(eff(c, l));
    }
  }
  return out;
}

}  // namespace

std::pair<ComplexMatrix, ComplexMatrix> dl_covariances(
    const SystemConfig& cfg, std::size_t user, const ChannelSet& ch,
    const BeamformerSet& bf, const std::vector<double>& dl_powers,
    double noise_power) {
  const ComplexMatrix hk_adj = ch.user_channels[user].adjoint();  // N_k x M
  ComplexMatrix rs(cfg.rx_antennas[user], cfg.rx_antennas[user]);
  ComplexMatrix rn(cfg.rx_antennas[user], cfg.rx_antennas[user]);
  for (std::size_t i = 0; i < cfg.num_users; ++i) {
    const ComplexMatrix eff = hk_adj * bf.tx[i];  // N_k x L_i
    const ComplexMatrix cov =
        weighted_outer(eff, dl_powers.data() + cfg.stream_offset(i));
    if (i == user)
      rs = rs + cov;
    else
      rn = rn + cov;
  }
  for (std::size_t r = 0; r < rn.rows(); ++r) rn(r, r) += noise_power;
  return {std::move(rs), std::move(rn)};
}

std::pair<ComplexMatrix, ComplexMatrix> ul_covariances(
    const SystemConfig& cfg, std::size_t user, const ChannelSet& ch,
    const BeamformerSet& bf, const std::vector<double>& ul_powers,
    double noise_power) {
  ComplexMatrix rs(cfg.tx_antennas, cfg.tx_antennas);
  ComplexMatrix rn(cfg.tx_antennas, cfg.tx_antennas);
  for (std::size_t i = 0; i < cfg.num_users; ++i) {
    const ComplexMatrix eff = ch.user_channels[i] * bf.rx[i];  // M x L_i
    const ComplexMatrix cov =
        weighted_outer(eff, ul_powers.data() + cfg.stream_offset(i));
    if (i == user)
      rs = rs + cov;
    else
      rn = rn + cov;
  }
  for (std::size_t r = 0; r < rn.rows(); ++r) rn(r, r) += noise_power;
  return {std::move(rs), std::move(rn)};
}

double avg_sinr_dl(const SystemConfig& cfg, std::size_t user,
                   const ChannelSet& ch, const BeamformerSet& bf,
                   const std::vector<double>& dl_powers, double noise_power) {
  // [A_jk]_ll is the squared row norm of U_j^H H_k V_k
  const ComplexMatrix hv = ch.user_channels[user] * bf.rx[user];  // M x L_k
  double num = 0.0, den = 0.0;
  for (std::size_t j = 0; j < cfg.num_users; ++j) {
    const ComplexMatrix g = bf.tx[j].adjoint() * hv;  // L_j x L_k
    const std::size_t off = cfg.stream_offset(j);
    double contrib = 0.0;
    for (std::size_t l = 0; l < g.rows(); ++l) {
      double row = 0.0;
      for (std::size_t c = 0; c < g.cols(); ++c) row += std::norm(g(l, c));
      contrib += dl_powers[off + l] * row;
    }
    if (j == user)
      num = contrib;
    else
      den += contrib;
  }
  den += static_cast<double>(cfg.streams[user]) * noise_power;
  return num / den;
}

std::vector<double> stream_sinrs_dl(const SystemConfig& cfg, std::size_t user,
                                    const ChannelSet& ch,
                                    const BeamformerSet& bf,
                                    const std::vector<double>& dl_powers,
                                    double noise_power) {
  const std::size_t lk = cfg.streams[user];
  const ComplexMatrix w = bf.rx[user].adjoint() * ch.user_channels[user].adjoint();
  // cross gains of user k's filters against every transmit column
  std::vector<ComplexMatrix> gains(cfg.num_users);
  for (std::size_t i = 0; i < cfg.num_users; ++i) gains[i] = w * bf.tx[i];

  std::vector<double> vnorm2(lk, 0.0);
  for (std::size_t j = 0; j < lk; ++j)
    for (std::size_t r = 0; r < bf.rx[user].rows(); ++r)
      vnorm2[j] += std::norm(bf.rx[user](r, j));

  std::vector<double> out(lk, 0.0);
  for (std::size_t j = 0; j < lk; ++j) {
    double own = 0.0, interf = 0.0;
    for (std::size_t i = 0; i < cfg.num_users; ++i) {
      const std::size_t off = cfg.stream_offset(i);
      for (std::size_t l = 0; l < cfg.streams[i]; ++l) {
        const double term = dl_powers[off + l] * std::norm(gains[i](j, l));
        if (i == user && l == j)
          own = term;
        else
          interf += term;
      }
    }
    out[j] = own / (interf + noise_power * vnorm2[j]);
  }
  return out;
}

CouplingData build_coupling(const SystemConfig& cfg, const ChannelSet& ch,
                            const BeamformerSet& bf) {
  const std::size_t K = cfg.num_users;
  CouplingData cp;
  cp.num_users = K;
  cp.a.resize(K * K);
  cp.b.resize(K * K);
  cp.d.assign(K, 0.0);
  cp.psi = RealMatrix(K, K);
  cp.sigma_vec.assign(K, cfg.noise_power);

  // f[j*K + k] = V_j^H H_j^H U_k, the L_j x L_k effective gains
  std::vector<ComplexMatrix> f(K * K);
  for (std::size_t j = 0; j < K; ++j) {
    const ComplexMatrix wj = bf.rx[j].adjoint() * ch.user_channels[j].adjoint();
    for (std::size_t k = 0; k < K; ++k) f[j * K + k] = wj * bf.tx[k];
  }
  for (std::size_t j = 0; j < K; ++j) {
    for (std::size_t k = 0; k < K; ++k) {
      const ComplexMatrix& fjk = f[j * K + k];
      const ComplexMatrix& fkj = f[k * K + j];
      cp.a[j * K + k] = fkj.adjoint() * fkj;  // U_j^H H_k V_k V_k^H H_k^H U_j
      cp.b[j * K + k] = fjk * fjk.adjoint();  // V_j^H H_j^H U_k U_k^H H_j V_j
    }
  }
  for (std::size_t k = 0; k < K; ++k) {
    const double own = f[k * K + k].frobenius_norm();
    if (own <= 1e-14)
      throw ZeroSignalGain("own-signal gain vanished for a user");
    const double lk = static_cast<double>(cfg.streams[k]);
    cp.d[k] = lk * lk * cfg.sinr_targets[k] / (own * own);
  }
  for (std::size_t i = 0; i < K; ++i) {
    for (std::size_t j = 0; j < K; ++j) {
      if (i == j) continue;
      const double nrm = f[i * K + j].frobenius_norm();
      cp.psi(i, j) = nrm * nrm /
                     static_cast<double>(cfg.streams[i] * cfg.streams[j]);
    }
  }
  return cp;
}

double sum_rate(const SystemConfig& cfg, const ChannelSet& ch,
                const BeamformerSet& bf, const std::vector<double>& dl_powers,
                double noise_power) {
  double rate = 0.0;
  for (std::size_t k = 0; k < cfg.num_users; ++k) {
    for (double s : stream_sinrs_dl(cfg, k, ch, bf, dl_powers, noise_power))
      rate += std::log2(1.0 + s);
  }
  return rate;
}

}  // namespace mimobf
