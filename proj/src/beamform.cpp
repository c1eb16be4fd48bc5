#include "mimobf/beamform.hpp"

#include <algorithm>
#include <cmath>

namespace mimobf {

namespace {

GsinrFilter top_eig_filter(const ComplexMatrix& rs, const ComplexMatrix& rn,
                           std::size_t lk) {
  EigResult eig = hermitian_generalized_eig(rs, rn, lk);
  // eigenvectors are R_n-orthonormal; one global rescale puts the squared
  // column norms at L_k total without disturbing the scaled-identity shape
  double tr = 0.0;
  for (std::size_t j = 0; j < lk; ++j)
    for (std::size_t r = 0; r < eig.vectors.rows(); ++r)
      tr += std::norm(eig.vectors(r, j));
  const double alpha = std::sqrt(static_cast<double>(lk) / tr);
  GsinrFilter out;
  out.filter = eig.vectors.scaled(alpha);
  out.stream_sinrs = std::move(eig.values);
  return out;
}

}  // namespace

GsinrFilter gsinr_receive_dl(const SystemConfig& cfg, std::size_t user,
                             const ChannelSet& ch, const BeamformerSet& bf,
                             const std::vector<double>& dl_powers,
                             double noise_power) {
  auto [rs, rn] = dl_covariances(cfg, user, ch, bf, dl_powers, noise_power);
  return top_eig_filter(rs, rn, cfg.streams[user]);
}

GsinrFilter gsinr_receive_ul(const SystemConfig& cfg, std::size_t user,
                             const ChannelSet& ch, const BeamformerSet& bf,
                             const std::vector<double>& ul_powers,
                             double noise_power) {
  auto [rs, rn] = ul_covariances(cfg, user, ch, bf, ul_powers, noise_power);
  return top_eig_filter(rs, rn, cfg.streams[user]);
}

StreamFilter khachan_stream_beamformer(const SystemConfig& cfg,
                                       std::size_t user, std::size_t stream,
                                       const ChannelSet& ch,
                                       const BeamformerSet& bf,
                                       const std::vector<double>& dl_powers,
                                       double noise_power) {
  const std::size_t nk = cfg.rx_antennas[user];
  const ComplexMatrix hk_adj = ch.user_channels[user].adjoint();  // N_k x M
  ComplexMatrix rs(nk, nk);
  ComplexMatrix rn(nk, nk);
  for (std::size_t i = 0; i < cfg.num_users; ++i) {
    const ComplexMatrix eff = hk_adj * bf.tx[i];  // N_k x L_i
    const std::size_t off = cfg.stream_offset(i);
    for (std::size_t l = 0; l < cfg.streams[i]; ++l) {
      const double p = dl_powers[off + l];
      if (p == 0.0) continue;
      ComplexMatrix& target = (i == user && l == stream) ? rs : rn;
      for (std::size_t r = 0; r < nk; ++r) {
        const cxd er = eff(r, l) * p;
        for (std::size_t c = 0; c < nk; ++c)
          target(r, c) += er * std::conj(eff(c, l));
      }
    }
  }
  for (std::size_t r = 0; r < nk; ++r) rn(r, r) += noise_power;

  EigResult eig = hermitian_generalized_eig(rs, rn, 1);
  StreamFilter out;
  out.sinr = eig.values[0];
  out.filter = eig.vectors.col(0);
  double norm2 = 0.0;
  for (const cxd& z : out.filter) norm2 += std::norm(z);
  const double inv = 1.0 / std::sqrt(norm2);
  for (cxd& z : out.filter) z *= inv;
  return out;
}

namespace {

// One-sided Jacobi orthogonalization: rotates column pairs of a working
// copy until all are mutually orthogonal. Column norms are the singular
// values; the accumulated rotations are the right singular vectors, so
// ||a v_j|| = sigma_j holds to machine precision.
struct RightSingular {
  std::vector<double> sigma;  // per column of v, unordered
  ComplexMatrix v;
};

RightSingular one_sided_jacobi(const ComplexMatrix& a) {
  const std::size_t m = a.cols();
  ComplexMatrix b = a;
  ComplexMatrix v = ComplexMatrix::identity(m);
  for (int sweep = 0; sweep < 60; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < m; ++p) {
      for (std::size_t q = p + 1; q < m; ++q) {
        double app = 0.0, aqq = 0.0;
        cxd apq = 0.0;
        for (std::size_t r = 0; r < b.rows(); ++r) {
          app += std::norm(b(r, p));
          aqq += std::norm(b(r, q));
          apq += std::conj(b(r, p)) * b(r, q);
        }
        const double mag = std::abs(apq);
        if (mag <= 1e-15 * std::sqrt(app * aqq) + 1e-300) continue;
        rotated = true;
        const cxd phase = apq / mag;
        const double tau = (aqq - app) / (2.0 * mag);
        const double sg = tau >= 0.0 ? 1.0 : -1.0;
        const double t = -sg / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (std::size_t r = 0; r < b.rows(); ++r) {
          const cxd bp = b(r, p), bq = b(r, q);
          b(r, p) = c * bp + s * std::conj(phase) * bq;
          b(r, q) = -s * phase * bp + c * bq;
        }
        for (std::size_t r = 0; r < m; ++r) {
          const cxd vp = v(r, p), vq = v(r, q);
          v(r, p) = c * vp + s * std::conj(phase) * vq;
          v(r, q) = -s * phase * vp + c * vq;
        }
      }
    }
    if (!rotated) break;
  }
  RightSingular out;
  out.v = std::move(v);
  out.sigma.assign(m, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    double s = 0.0;
    for (std::size_t r = 0; r < b.rows(); ++r) s += std::norm(b(r, j));
    out.sigma[j] = std::sqrt(s);
  }
  return out;
}

}  // namespace

std::vector<ComplexMatrix> bd_transmit(const SystemConfig& cfg,
                                       const ChannelSet& ch) {
  const std::size_t m = cfg.tx_antennas;
  std::vector<ComplexMatrix> out;
  out.reserve(cfg.num_users);
  for (std::size_t k = 0; k < cfg.num_users; ++k) {
    std::size_t other_rx = 0;
    for (std::size_t i = 0; i < cfg.num_users; ++i)
      if (i != k) other_rx += cfg.rx_antennas[i];
    if (m <= other_rx)
      throw DimensionInfeasible(
          "zero-forcing needs more transmit antennas than interfering "
          "receive antennas");
    const std::size_t lk = cfg.streams[k];

    ComplexMatrix basis;
    if (other_rx == 0) {
      basis = ComplexMatrix::identity(m);  // single user, no interferers
    } else {
      ComplexMatrix stacked(other_rx, m);
      std::size_t row = 0;
      for (std::size_t i = 0; i < cfg.num_users; ++i) {
        if (i == k) continue;
        const ComplexMatrix hi_adj = ch.user_channels[i].adjoint();  // N_i x M
        for (std::size_t r = 0; r < hi_adj.rows(); ++r, ++row)
          for (std::size_t c = 0; c < m; ++c) stacked(row, c) = hi_adj(r, c);
      }
      const RightSingular sv = one_sided_jacobi(stacked);
      const double lead = *std::max_element(sv.sigma.begin(), sv.sigma.end());
      const double floor = 1e-10 * lead;  // rank threshold
      std::vector<std::size_t> null_cols;
      for (std::size_t j = 0; j < m; ++j)
        if (sv.sigma[j] <= floor) null_cols.push_back(j);
      if (null_cols.size() < lk)
        throw DimensionInfeasible(
            "null space of the interfering channels has fewer dimensions "
            "than the user's stream count");
      basis = ComplexMatrix(m, null_cols.size());
      for (std::size_t j = 0; j < null_cols.size(); ++j)
        for (std::size_t r = 0; r < m; ++r)
          basis(r, j) = sv.v(r, null_cols[j]);
    }

    // pick the null directions with the largest equivalent channel gain
    const ComplexMatrix eq = ch.user_channels[k].adjoint() * basis;  // N_k x d
    EigResult pick = hermitian_eig(eq.adjoint() * eq);
    ComplexMatrix w(basis.cols(), lk);
    for (std::size_t j = 0; j < lk; ++j)
      for (std::size_t r = 0; r < basis.cols(); ++r) w(r, j) = pick.vectors(r, j);
    out.push_back(basis * w);
  }
  return out;
}

}  // namespace mimobf
