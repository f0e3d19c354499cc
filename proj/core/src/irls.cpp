// SPDX-License-Identifier: Apache-2.0
#include "sfmap/irls.hpp"

#include <cmath>
#include <stdexcept>

namespace sfmap {

void IrlsConfig::validate() const {
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("IrlsConfig: p must be in (0, 1]");
  if (max_iters < l1_warmup_iters)
    throw std::invalid_argument("IrlsConfig: max_iters must be >= l1_warmup_iters");
  if (!(epsilon_init > 0.0)) throw std::invalid_argument("IrlsConfig: epsilon_init must be positive");
  if (!(epsilon_decay > 0.0 && epsilon_decay <= 1.0))
    throw std::invalid_argument("IrlsConfig: epsilon_decay must be in (0, 1]");
}

IrlsResult irls_solve(const Eigen::MatrixXcd& B, const Dictionary& D, const IrlsConfig& cfg,
                      double lambda_rel, std::vector<IrlsTraceRow>* trace) {
  cfg.validate();
  if (B.rows() != D.matrix.rows())
    throw std::invalid_argument("irls_solve: observation/dictionary channel mismatch");
  if (!B.allFinite()) throw std::invalid_argument("irls_solve: non-finite observations");
  if (cfg.lambda_override) lambda_rel = *cfg.lambda_override;
  if (!(lambda_rel >= 0.0)) throw std::invalid_argument("irls_solve: lambda must be >= 0");

  const int K = static_cast<int>(B.rows());
  const int T = static_cast<int>(B.cols());
  const int N = D.directions();
  IrlsResult res;
  res.coeffs.grid = D.grid;
  res.coeffs.data = Eigen::MatrixXcd::Zero(N, T);

  const double b_norm2 = B.squaredNorm();
  if (b_norm2 == 0.0) {
    res.converged = true;
    return res;
  }

  const double eps_floor = 1e-12 * b_norm2 / (static_cast<double>(K) * T);
  double eps = cfg.epsilon_init * b_norm2 / K;
  Eigen::VectorXd gamma2 = Eigen::VectorXd::Zero(N);
  Eigen::MatrixXcd& X = res.coeffs.data;

  double lambda_abs = 0.0;
  double j_prev = 0.0;
  bool have_prev = false;
  bool in_warmup_prev = true, first_iter = true;

  Eigen::MatrixXcd DW(K, N), M(K, K), Z;
  Eigen::VectorXd w(N);

  for (int it = 0; it < cfg.max_iters; ++it) {
    res.iterations = it + 1;
    const bool warm = it < cfg.l1_warmup_iters;
    const double p_cur = warm ? 1.0 : cfg.p;
    const double expo = (2.0 - p_cur) / 2.0;
    for (int i = 0; i < N; ++i) w(i) = std::pow(gamma2(i) + eps, expo);
    DW.noalias() = D.matrix * w.asDiagonal();
    M.noalias() = DW * D.matrix.adjoint();

    if (first_iter || warm != in_warmup_prev) {
      lambda_abs = lambda_rel * M.real().trace() / K;
      have_prev = false;
      first_iter = false;
      in_warmup_prev = warm;
    }

    Eigen::MatrixXcd Msolve = M + lambda_abs * Eigen::MatrixXcd::Identity(K, K);
    Eigen::LLT<Eigen::MatrixXcd> llt(Msolve);
    if (llt.info() != Eigen::Success) {
      Msolve = M + 10.0 * lambda_abs * Eigen::MatrixXcd::Identity(K, K);
      llt.compute(Msolve);
      if (llt.info() != Eigen::Success)
        throw std::runtime_error("irls_solve: normal-equations factorization failed");
    }
    Z = llt.solve(B);
    X.noalias() = DW.adjoint() * Z;
    gamma2 = X.rowwise().squaredNorm();

    const double resid2 = (B - D.matrix * X).squaredNorm();
    double penalty = 0.0;
    for (int i = 0; i < N; ++i) penalty += std::pow(gamma2(i) + eps, p_cur / 2.0);
    const double objective = resid2 + (2.0 * lambda_abs / p_cur) * penalty;

    if (trace) {
      const double gmax = gamma2.maxCoeff();
      int active = 0;
      for (int i = 0; i < N; ++i)
        if (gamma2(i) > 1e-6 * gmax) ++active;
      trace->push_back({it, objective, std::sqrt(resid2 / b_norm2), active});
    }

    if (have_prev && std::abs(j_prev - objective) <= cfg.convergence_tol * std::max(j_prev, 1e-300)) {
      const bool sharpened = !warm && (it + 1 >= cfg.l1_warmup_iters + cfg.min_p_iters);
      if (sharpened && eps <= eps_floor) {
        res.converged = true;
        return res;
      }
      eps = std::max(eps * cfg.epsilon_decay, eps_floor);
    }
    j_prev = objective;
    have_prev = true;
  }
  return res;
}

DiffusenessResult diffuseness(const TFTensor& b_hoa, int frame_begin, int frame_end, int bin_begin,
                              int bin_end) {
  if (b_hoa.channels() < 4)
    throw std::invalid_argument("diffuseness: needs at least order-1 encoding (4 channels)");
  if (frame_end < 0) frame_end = b_hoa.frames();
  if (bin_end < 0) bin_end = b_hoa.bins();
  if (frame_begin < 0 || frame_begin >= frame_end || frame_end > b_hoa.frames() || bin_begin < 0 ||
      bin_begin >= bin_end || bin_end > b_hoa.bins())
    throw std::invalid_argument("diffuseness: bad frame or bin range");

  const double sw = std::sqrt(kFourPi);
  const double sv = std::sqrt(kTwoPi / 3.0);
  const double sz = std::sqrt(kFourPi / 3.0);
  double ix = 0, iy = 0, iz = 0, e = 0;
  std::size_t count = 0;
  for (int t = frame_begin; t < frame_end; ++t) {
    for (int f = bin_begin; f < bin_end; ++f) {
      const cplx w = sw * b_hoa.at(0, t, f);
      const cplx vx = sv * (b_hoa.at(1, t, f) - b_hoa.at(3, t, f));
      const cplx vy = cplx(0, -1) * sv * (b_hoa.at(1, t, f) + b_hoa.at(3, t, f));
      const cplx vz = sz * b_hoa.at(2, t, f);
      ix += (w * std::conj(vx)).real();
      iy += (w * std::conj(vy)).real();
      iz += (w * std::conj(vz)).real();
      e += 0.5 * (std::norm(w) + std::norm(vx) + std::norm(vy) + std::norm(vz));
      ++count;
    }
  }
  const double e_mean = e / static_cast<double>(count);
  if (!(e_mean > 1e-300)) return {1.0, true};
  const double i_norm =
      std::sqrt(ix * ix + iy * iy + iz * iz) / static_cast<double>(count);
  double psi = 1.0 - i_norm / e_mean;
  psi = std::clamp(psi, 0.0, 1.0);
  return {psi, false};
}

double lambda_from_diffuseness(double psi, double b_power, double lambda_min, double lambda_max) {
  if (!(psi >= 0.0 && psi <= 1.0)) throw std::invalid_argument("lambda_from_diffuseness: psi outside [0,1]");
  return lambda_min * std::pow(lambda_max / lambda_min, psi) * b_power;
}

}  // namespace sfmap
