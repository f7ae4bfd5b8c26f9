#include "pnlab/corrector.hpp"

#include <Eigen/QR>

#include <cmath>
#include <numbers>
#include <sstream>

#include "pnlab/fractional.hpp"

namespace pnlab {

namespace {

constexpr Real kPi = std::numbers::pi_v<Real>;

struct PsiTail {
  Real K2, e_plus, e_minus;
  Real value(Real z) const {
    const Real e = (z > 0) ? e_plus : e_minus;
    return K2 / z + e / (z * z);
  }
  Real d1(Real z) const {
    const Real e = (z > 0) ? e_plus : e_minus;
    return -K2 / (z * z) - 2.0 * e / (z * z * z);
  }
  Real d2(Real z) const {
    const Real e = (z > 0) ? e_plus : e_minus;
    return 2.0 * K2 / (z * z * z) + 6.0 * e / (z * z * z * z);
  }
};

// Trapezoid over the stored grid plus quadrature of the far-field models on
// both sides; this is the inner product the Fredholm condition and c0 share.
Real integral_with_model_tails(const ArrayXr& samples, Real h, Real x_left, Real x_right,
                               const std::function<Real(Real)>& model_right,
                               const std::function<Real(Real)>& model_left) {
  const auto n = samples.size();
  Real acc = h * samples.sum() - 0.5 * h * (samples[0] + samples[n - 1]);
  acc += integrate_log_graded(model_right, x_right, 1e9, 24);
  acc += integrate_log_graded([&](Real z) { return model_left(-z); }, -x_left, 1e9, 24);
  return acc;
}

}  // namespace

Real corrector_eval(const CorrectorSolution& sol, Real z, int order) {
  if (z >= sol.xs[0] && z <= sol.xs[sol.xs.size() - 1]) {
    switch (order) {
      case 0: return sol.s_psi(z);
      case 1: return sol.s_psi1(z);
      case 2: return sol.s_psi2(z);
      default: throw ConfigError("corrector_eval: order must be 0..2");
    }
  }
  const PsiTail tail{sol.K2, sol.tail_e_plus, sol.tail_e_minus};
  switch (order) {
    case 0: return tail.value(z);
    case 1: return tail.d1(z);
    case 2: return tail.d2(z);
    default: throw ConfigError("corrector_eval: order must be 0..2");
  }
}

CorrectorSolution solve_corrector(const LayerSolution& layer,
                                  const PotentialSpec& potential, Real L, Real tol) {
  if (!(tol > 0.0)) throw ConfigError("solve_corrector: tol must be positive");
  const int n = static_cast<int>(layer.xs.size());
  const Real h = layer.spacing();
  const Real alpha = potential.alpha;
  const Real c = L * layer.c0;

  ArrayXr wpp(n);  // W''(phi)
  for (int j = 0; j < n; ++j) wpp[j] = potential.eval(layer.phi[j], 2);

  // g = (L/alpha) (W''(phi) - alpha) + c phi'
  ArrayXr g = (L / alpha) * (wpp - alpha) + c * layer.phi1;

  // Collocation of I1 - W''(phi) with psi extended by zero; phi' spans the
  // near-kernel, removed by the appended gauge row <psi, phi'> = 0.
  MatrixXr A(n + 1, n);
  A.topRows(n) = half_laplacian_dense_matrix(n, h, 2);
  A.topRows(n).diagonal() -= wpp.matrix();
  const Real gauge_scale = 1.0 / std::sqrt(layer.phi1.matrix().squaredNorm());
  A.row(n) = (gauge_scale * layer.phi1).matrix().transpose();

  VectorXr rhs(n + 1);
  rhs.head(n) = g.matrix();
  rhs[n] = 0.0;

  Eigen::ColPivHouseholderQR<MatrixXr> qr(A);
  if (qr.rank() < n) {
    std::ostringstream msg;
    msg << "solve_corrector: collocation system rank-deficient (rank " << qr.rank() << " of "
        << n << ")";
    throw ComputeError(msg.str());
  }
  VectorXr psi_v = qr.solve(rhs);
  const ArrayXr psi = psi_v.array();

  CorrectorSolution sol;
  sol.xs = layer.xs;
  sol.psi = psi;
  sol.c = c;
  sol.L = L;
  sol.condition_estimate =
      std::abs(qr.matrixR()(0, 0) / qr.matrixR()(n - 1, n - 1));

  sol.residual_sup = (A.topRows(n) * psi_v - g.matrix()).array().abs().maxCoeff();
  if (sol.residual_sup > tol) {
    std::ostringstream msg;
    msg << "solve_corrector: residual " << sol.residual_sup << " exceeds tol " << tol
        << " (condition estimate " << sol.condition_estimate << ")";
    throw ComputeError(msg.str());
  }

  sol.psi1 = spectral_derivative_bridged(psi, h, 1);
  sol.psi2 = spectral_derivative_bridged(psi, h, 2);

  const auto decay = verify_corrector_decay(sol);
  sol.K2 = decay.K2;
  sol.K3 = decay.K3;
  const Real xr = sol.xs[n - 1], xl = sol.xs[0];
  sol.tail_e_plus = (psi[n - 1] - sol.K2 / xr) * xr * xr;
  sol.tail_e_minus = (psi[0] - sol.K2 / xl) * xl * xl;

  sol.s_psi = CubicSpline(xl, h, sol.psi, sol.psi1[0], sol.psi1[n - 1]);
  sol.s_psi1 = CubicSpline(xl, h, sol.psi1, sol.psi2[0], sol.psi2[n - 1]);
  sol.s_psi2 = CubicSpline(xl, h, sol.psi2, 0.0, 0.0);

  // Fredholm orthogonality <g, phi'> = 0 is what c = L c0 enforces; check it
  // with the same tail-corrected integrals that define c0.
  const auto layer_tail_phi1 = [&](Real z) { return layer_eval(layer, z, 1); };
  const auto wg_model = [&](Real z) {
    const Real phi_t = layer_eval(layer, z, 0);
    return ((L / alpha) * (potential.eval(phi_t, 2) - alpha) + c * layer_tail_phi1(z)) *
           layer_tail_phi1(z);
  };
  const Real inner = integral_with_model_tails(g * layer.phi1, h, xl, xr, wg_model, wg_model);
  // Normalize against the sizes of the two contributions before their
  // cancellation; for the standard potential g itself vanishes identically
  // (the stress term and c phi' cancel pointwise), so |g| is no scale.
  const Real scale = h * (((L / alpha) * (wpp - alpha) * layer.phi1).abs().sum() +
                          (c * layer.phi1 * layer.phi1).abs().sum());
  sol.fredholm_defect = (scale > 0) ? std::abs(inner) / scale : 0.0;

  return sol;
}

CorrectorDecayReport verify_corrector_decay(const CorrectorSolution& sol) {
  CorrectorDecayReport report;
  const int n = static_cast<int>(sol.xs.size());
  const Real X = std::abs(sol.xs[0]);

  // K2 from least squares of psi against (1/x, 1/x^2) on a mid-range window,
  // clear of both the core and the Dirichlet-closure region near the ends.
  Real a11 = 0, a12 = 0, a22 = 0, b1 = 0, b2 = 0;
  for (int j = 0; j < n; ++j) {
    const Real x = sol.xs[j];
    if (std::abs(x) < 2.0 || std::abs(x) > 0.5 * X) continue;
    const Real f1 = 1.0 / x, f2 = 1.0 / (x * x);
    a11 += f1 * f1;
    a12 += f1 * f2;
    a22 += f2 * f2;
    b1 += f1 * sol.psi[j];
    b2 += f2 * sol.psi[j];
  }
  const Real det = a11 * a22 - a12 * a12;
  report.K2 = (std::abs(det) > 1e-300) ? (b1 * a22 - b2 * a12) / det : 0.0;

  for (int j = 0; j < n; ++j) {
    const Real x = sol.xs[j];
    const Real env = 1.0 + x * x;
    if (sol.psi1.size() == n) report.K3_d1 = std::max(report.K3_d1, std::abs(sol.psi1[j]) * env);
    if (sol.psi2.size() == n) report.K3_d2 = std::max(report.K3_d2, std::abs(sol.psi2[j]) * env);
    if (std::abs(x) >= 1.0)
      report.K3_tail = std::max(report.K3_tail, std::abs(sol.psi[j] - report.K2 / x) * x * x);
  }
  report.K3 = std::max({report.K3_tail, report.K3_d1, report.K3_d2});
  report.ok = std::isfinite(report.K2) && std::isfinite(report.K3);
  return report;
}

}  // namespace pnlab
