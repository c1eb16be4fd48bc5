#pragma once

// Shared test utilities: seeded random problem generators and the
// independent oracles (characteristic-polynomial root finding, LP vertex
// enumeration) used to freeze expected values.

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <random>
#include <vector>

#include "mimobf/beamform.hpp"
#include "mimobf/driver.hpp"
#include "mimobf/model.hpp"
#include "mimobf/numerics.hpp"

namespace testsup {

using mimobf::ComplexMatrix;
using mimobf::cxd;
using mimobf::RealMatrix;

inline ComplexMatrix random_complex(std::mt19937_64& rng, std::size_t r,
                                    std::size_t c) {
  std::normal_distribution<double> g(0.0, std::sqrt(0.5));
  ComplexMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = cxd(g(rng), g(rng));
  return m;
}

// Hermitian PSD as X X^H
inline ComplexMatrix random_psd(std::mt19937_64& rng, std::size_t n) {
  const ComplexMatrix x = random_complex(rng, n, n);
  return x * x.adjoint();
}

// Hermitian PD as Y Y^H + delta I
inline ComplexMatrix random_pd(std::mt19937_64& rng, std::size_t n,
                               double delta = 0.1) {
  ComplexMatrix m = random_psd(rng, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) += delta;
  return m;
}

// ---------------------------------------------------------------------
// Characteristic polynomial oracle for the dominant-eigenpair kernel:
// Faddeev-LeVerrier coefficients plus Durand-Kerner root finding, fully
// independent of any eigensolver in the library.

inline std::vector<double> char_poly(const RealMatrix& a) {
  const std::size_t n = a.rows();
  // p(x) = x^n + c[0] x^(n-1) + ... + c[n-1]
  std::vector<double> c(n, 0.0);
  RealMatrix m = a;
  for (std::size_t k = 1; k <= n; ++k) {
    double tr = 0.0;
    for (std::size_t i = 0; i < n; ++i) tr += m(i, i);
    c[k - 1] = -tr / static_cast<double>(k);
    if (k == n) break;
    RealMatrix shifted = m;
    for (std::size_t i = 0; i < n; ++i) shifted(i, i) += c[k - 1];
    RealMatrix next(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t l = 0; l < n; ++l) s += a(i, l) * shifted(l, j);
        next(i, j) = s;
      }
    m = next;
  }
  return c;
}

inline std::vector<cxd> durand_kerner(const std::vector<double>& coeffs) {
  const std::size_t n = coeffs.size();
  auto eval = [&](cxd z) {
    cxd p(1.0, 0.0);
    for (double c : coeffs) p = p * z + c;
    return p;
  };
  std::vector<cxd> z(n);
  const cxd seedpt(0.4, 0.9);
  cxd acc(1.0, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    acc *= seedpt;
    z[i] = acc;
  }
  for (int it = 0; it < 2000; ++it) {
    double step = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      cxd denom(1.0, 0.0);
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) denom *= z[i] - z[j];
      const cxd dz = eval(z[i]) / denom;
      z[i] -= dz;
      step = std::max(step, std::abs(dz));
    }
    if (step < 1e-14) break;
  }
  return z;
}

inline double spectral_radius_oracle(const RealMatrix& a) {
  double best = 0.0;
  for (const cxd& r : durand_kerner(char_poly(a)))
    best = std::max(best, std::abs(r));
  return best;
}

// ---------------------------------------------------------------------
// Vertex-enumeration oracle for min 1^T p s.t. aeq p = b, p >= 0: every
// vertex is a basic solution on some column subset of size K.

inline std::optional<double> lp_vertex_oracle(const RealMatrix& aeq,
                                              const std::vector<double>& beq) {
  const std::size_t m = aeq.rows(), n = aeq.cols();
  std::optional<double> best;
  std::vector<char> mask(n, 0);
  std::fill(mask.begin(), mask.begin() + m, 1);
  do {
    std::vector<std::size_t> comb;
    for (std::size_t i = 0; i < n; ++i)
      if (mask[i]) comb.push_back(i);
    RealMatrix sub(m, m);
    for (std::size_t r = 0; r < m; ++r)
      for (std::size_t c = 0; c < m; ++c) sub(r, c) = aeq(r, comb[c]);
    bool ok = true;
    std::vector<double> x;
    try {
      x = mimobf::solve_linear(sub, beq);
    } catch (const mimobf::SingularMatrix&) {
      ok = false;
    }
    if (ok) {
      for (double v : x)
        if (v < -1e-9) ok = false;
    }
    if (ok) {
      double obj = 0.0;
      for (double v : x) obj += std::max(v, 0.0);
      if (!best || obj < *best) best = obj;
    }
  } while (std::prev_permutation(mask.begin(), mask.end()));
  return best;
}

// ---------------------------------------------------------------------
// Random system instances.

struct Instance {
  mimobf::SystemConfig cfg;
  mimobf::ChannelSet ch;
  mimobf::BeamformerSet bf;
};

inline Instance random_instance(std::mt19937_64& rng, std::size_t k_users,
                                std::size_t m_antennas, std::size_t max_n,
                                double gamma_lo = 0.5, double gamma_hi = 2.0,
                                bool beamform_pass = true) {
  Instance inst;
  auto& cfg = inst.cfg;
  cfg.num_users = k_users;
  cfg.tx_antennas = m_antennas;
  std::uniform_int_distribution<std::size_t> nk(1, std::min(max_n, m_antennas));
  std::uniform_real_distribution<double> gam(gamma_lo, gamma_hi);
  for (std::size_t k = 0; k < k_users; ++k) {
    const std::size_t n = nk(rng);
    std::uniform_int_distribution<std::size_t> lk(1, n);
    cfg.rx_antennas.push_back(n);
    cfg.streams.push_back(lk(rng));
    cfg.sinr_targets.push_back(gam(rng));
  }
  cfg.noise_power = 1.0;
  std::uniform_real_distribution<double> pw(5.0, 50.0);
  cfg.p_max = pw(rng);
  inst.ch = mimobf::generate_channel(cfg, rng());
  inst.bf = mimobf::BeamformerSet::identity_slices(cfg);
  if (beamform_pass) {
    // one receive-filter refinement at uniform powers for realistic V blocks
    std::vector<double> p(cfg.total_streams(),
                          cfg.p_max / static_cast<double>(cfg.total_streams()));
    for (std::size_t k = 0; k < k_users; ++k)
      inst.bf.rx[k] =
          mimobf::gsinr_receive_dl(cfg, k, inst.ch, inst.bf, p, 1.0).filter;
  }
  return inst;
}

inline std::vector<double> uniform_stream_powers(const mimobf::SystemConfig& cfg,
                                                 double total) {
  return std::vector<double>(cfg.total_streams(),
                             total / static_cast<double>(cfg.total_streams()));
}

}  // namespace testsup
