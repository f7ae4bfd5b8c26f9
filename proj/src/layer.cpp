#include "pnlab/layer.hpp"

#include <Eigen/LU>
#include <unsupported/Eigen/FFT>

#include <cmath>
#include <numbers>
#include <sstream>

#include "pnlab/fractional.hpp"

namespace pnlab {

namespace {

constexpr Real kPi = std::numbers::pi_v<Real>;

// Base profile carrying the transition and the exact leading tail:
// B(x) = 1/2 + atan(alpha x)/pi = H(x) - 1/(alpha pi x) + O(x^-3), with
// I1[B](x) = -alpha^2 x / (pi (1 + alpha^2 x^2)) in closed form.
struct BaseProfile {
  Real alpha;
  Real value(Real x) const { return 0.5 + std::atan(alpha * x) / kPi; }
  Real d1(Real x) const { return alpha / (kPi * (1.0 + alpha * alpha * x * x)); }
  Real d2(Real x) const {
    const Real s = 1.0 + alpha * alpha * x * x;
    return -2.0 * alpha * alpha * alpha * x / (kPi * s * s);
  }
  Real d3(Real x) const {
    const Real a2 = alpha * alpha, s = 1.0 + a2 * x * x;
    return -2.0 * alpha * a2 * (1.0 - 3.0 * a2 * x * x) / (kPi * s * s * s);
  }
  Real i1(Real x) const {
    return -alpha * alpha * x / (kPi * (1.0 + alpha * alpha * x * x));
  }
};

// I1 of the zero-extended correction u via the spectral circulant on a
// grid padded to twice the length (image copies then sit >= 2X away).
struct PaddedOperator {
  int n, n_pad;
  Eigen::FFT<Real> fft;
  Eigen::VectorXcd symbol;

  PaddedOperator(int count, Real spacing) : n(count), n_pad(2 * count), symbol(n_pad) {
    const Real period = n_pad * spacing;
    for (int m = 0; m < n_pad; ++m) {
      const int abs_m = (m <= n_pad / 2) ? m : n_pad - m;
      symbol[m] = -2.0 * kPi * abs_m / period;
    }
  }

  ArrayXr apply(const ArrayXr& u) {
    Eigen::VectorXcd in = Eigen::VectorXcd::Zero(n_pad), freq(n_pad), out(n_pad);
    in.head(n) = u.matrix().cast<std::complex<Real>>();
    fft.fwd(freq, in);
    freq.array() *= symbol.array();
    fft.inv(out, freq);
    return out.real().array().head(n);
  }
};

struct TailModel {
  Real alpha, d_plus, d_minus;
  Real value(Real z) const {
    const Real d = (z > 0) ? d_plus : d_minus;
    const Real heav = (z >= 0) ? 1.0 : 0.0;
    return heav - 1.0 / (alpha * kPi * z) + d / (z * z);
  }
  Real d1(Real z) const {
    const Real d = (z > 0) ? d_plus : d_minus;
    return 1.0 / (alpha * kPi * z * z) - 2.0 * d / (z * z * z);
  }
  Real d2(Real z) const {
    const Real d = (z > 0) ? d_plus : d_minus;
    return -2.0 / (alpha * kPi * z * z * z) + 6.0 * d / (z * z * z * z);
  }
  Real d3(Real z) const {
    const Real d = (z > 0) ? d_plus : d_minus;
    const Real z4 = z * z * z * z;
    return 6.0 / (alpha * kPi * z4) - 24.0 * d / (z4 * z);
  }
};

// int_E^inf (a/z^2 + b/z^3)^2 dz, the model tail of int phi'^2.
Real phi1_squared_tail(Real a, Real b, Real E) {
  return a * a / (3.0 * E * E * E) + a * b / (2.0 * E * E * E * E) +
         b * b / (5.0 * E * E * E * E * E);
}

}  // namespace

Real layer_eval(const LayerSolution& layer, Real z, int order) {
  if (z >= layer.xs[0] && z <= layer.xs[layer.xs.size() - 1]) {
    switch (order) {
      case 0: return layer.s_phi(z);
      case 1: return layer.s_phi1(z);
      case 2: return layer.s_phi2(z);
      case 3: return layer.s_phi3(z);
      default: throw ConfigError("layer_eval: order must be 0..3");
    }
  }
  const TailModel tail{layer.alpha, layer.tail_d_plus, layer.tail_d_minus};
  switch (order) {
    case 0: return tail.value(z);
    case 1: return tail.d1(z);
    case 2: return tail.d2(z);
    case 3: return tail.d3(z);
    default: throw ConfigError("layer_eval: order must be 0..3");
  }
}

LayerSolution solve_layer(const PotentialSpec& potential, Real half_width, int count,
                          Real tol) {
  if (!(half_width >= 20.0)) throw ConfigError("solve_layer: half width X must be >= 20");
  if (count < 512) throw ConfigError("solve_layer: count must be >= 512");
  if (count % 2 != 0) throw ConfigError("solve_layer: count must be even");
  if (!(tol > 0.0)) throw ConfigError("solve_layer: tol must be positive");

  const Real X = half_width;
  const int n = count;
  const Real h = 2.0 * X / n;
  const int pin = n / 2;  // node at x = 0
  const Real alpha = potential.alpha;
  const BaseProfile base{alpha};

  ArrayXr xs(n), i1_base(n), w1(n);
  for (int j = 0; j < n; ++j) {
    xs[j] = -X + h * j;
    i1_base[j] = base.i1(xs[j]);
  }

  PaddedOperator op(n, h);

  ArrayXr u = ArrayXr::Zero(n);
  const auto residual = [&](const ArrayXr& uu) -> ArrayXr {
    ArrayXr F = i1_base + op.apply(uu);
    for (int j = 0; j < n; ++j) F[j] -= potential.eval(base.value(xs[j]) + uu[j], 1);
    F[pin] = uu[pin];  // pin phi(0) = 1/2
    return F;
  };
  const auto monotone = [&](const ArrayXr& uu) -> int {
    for (int j = 0; j + 1 < n; ++j) {
      const Real pj = base.value(xs[j]) + uu[j];
      const Real pj1 = base.value(xs[j + 1]) + uu[j + 1];
      if (!(pj1 > pj)) return j;
    }
    return -1;
  };

  std::vector<Real> history;
  ArrayXr F = residual(u);
  Real fnorm = F.abs().maxCoeff();
  history.push_back(fnorm);

  const Real inner_tol = std::min(1e-10, 0.01 * tol);
  MatrixXr Tmat;  // built lazily; standard potential needs zero iterations
  int iterations = 0;
  constexpr int kMaxIter = 50;
  while (fnorm > inner_tol && iterations < kMaxIter) {
    if (Tmat.size() == 0) Tmat = half_laplacian_dense_matrix(n, h, 2);
    MatrixXr J = Tmat;
    for (int j = 0; j < n; ++j) J(j, j) -= potential.eval(base.value(xs[j]) + u[j], 2);
    J.row(pin).setZero();
    J(pin, pin) = 1.0;
    VectorXr step = Eigen::PartialPivLU<MatrixXr>(J).solve(-F.matrix());

    Real damping = 1.0;
    bool accepted = false;
    while (damping >= 1.0 / 64.0) {
      ArrayXr u_try = u + damping * step.array();
      if (monotone(u_try) < 0) {
        ArrayXr F_try = residual(u_try);
        const Real fn_try = F_try.abs().maxCoeff();
        if (fn_try < fnorm) {
          u = std::move(u_try);
          F = std::move(F_try);
          fnorm = fn_try;
          accepted = true;
          break;
        }
      }
      damping *= 0.5;
    }
    ++iterations;
    if (!accepted) {
      const int bad = monotone(u + step.array());
      std::ostringstream msg;
      if (bad >= 0)
        msg << "solve_layer: monotonicity lost near x = " << xs[bad] << " at iteration "
            << iterations;
      else
        msg << "solve_layer: Newton stalled at residual " << fnorm << " after " << iterations
            << " iterations";
      throw ComputeError(msg.str());
    }
    history.push_back(fnorm);
  }
  if (fnorm > inner_tol) {
    std::ostringstream msg;
    msg << "solve_layer: no convergence after " << iterations << " iterations; residuals:";
    for (Real r : history) msg << " " << r;
    throw ComputeError(msg.str());
  }

  LayerSolution layer;
  layer.xs = xs;
  layer.alpha = alpha;
  layer.half_width = X;
  layer.potential = potential;
  layer.newton_iterations = iterations;
  layer.residual_history = std::move(history);

  layer.phi = u;
  for (int j = 0; j < n; ++j) layer.phi[j] += base.value(xs[j]);

  ArrayXr u1 = spectral_derivative_bridged(u, h, 1);
  ArrayXr u2 = spectral_derivative_bridged(u, h, 2);
  ArrayXr u3 = spectral_derivative_bridged(u, h, 3);
  layer.phi1.resize(n);
  layer.phi2.resize(n);
  layer.phi3.resize(n);
  for (int j = 0; j < n; ++j) {
    layer.phi1[j] = base.d1(xs[j]) + u1[j];
    layer.phi2[j] = base.d2(xs[j]) + u2[j];
    layer.phi3[j] = base.d3(xs[j]) + u3[j];
  }

  // Tail anchors: match the model to the end nodes.
  const Real xr = xs[n - 1], xl = xs[0];
  layer.tail_d_plus = (layer.phi[n - 1] - 1.0 + 1.0 / (alpha * kPi * xr)) * xr * xr;
  layer.tail_d_minus = (layer.phi[0] + 1.0 / (alpha * kPi * xl)) * xl * xl;

  layer.s_phi = CubicSpline(xl, h, layer.phi, layer.phi1[0], layer.phi1[n - 1]);
  layer.s_phi1 = CubicSpline(xl, h, layer.phi1, layer.phi2[0], layer.phi2[n - 1]);
  layer.s_phi2 = CubicSpline(xl, h, layer.phi2, layer.phi3[0], layer.phi3[n - 1]);
  layer.s_phi3 = CubicSpline(xl, h, layer.phi3, 0.0, 0.0);

  layer.c0 = c0_constant(layer);

  // Independent residual check: quadrature-route I1 on the spline+tail
  // evaluator against W'(phi), sampled over the interior |x| <= 0.75 X.
  LevyQuadratureConfig qcfg;
  qcfg.r = 0.5;
  qcfg.R = 1e6;
  qcfg.nodes_per_decade = 32;
  const auto phi_eval = [&layer](Real z) { return layer_eval(layer, z, 0); };
  const int stride = std::max(1, n / 1024);
  Real sup = 0.0;
  for (int j = 0; j < n; j += stride) {
    if (std::abs(xs[j]) > 0.75 * X) continue;
    const Real i1 = half_laplacian_quadrature(phi_eval, layer.phi1[j], xs[j], qcfg);
    sup = std::max(sup, std::abs(i1 - potential.eval(layer.phi[j], 1)));
  }
  layer.residual_sup = sup;
  if (sup > tol) {
    std::ostringstream msg;
    msg << "solve_layer: verified equation residual " << sup << " exceeds tol " << tol;
    throw ComputeError(msg.str());
  }

  const auto decay = verify_layer_decay(layer);
  layer.K0 = decay.K0;
  layer.K1 = decay.K1;
  return layer;
}

Real c0_constant(const LayerSolution& layer) {
  const int n = static_cast<int>(layer.xs.size());
  const Real h = layer.spacing();
  const ArrayXr f = layer.phi1 * layer.phi1;
  Real integral = h * f.sum() - 0.5 * h * (f[0] + f[n - 1]);
  const Real a = 1.0 / (layer.alpha * kPi);
  integral += phi1_squared_tail(a, -2.0 * layer.tail_d_plus, layer.xs[n - 1]);
  integral += phi1_squared_tail(a, 2.0 * layer.tail_d_minus, -layer.xs[0]);
  if (!(integral > 1e-300)) throw ComputeError("c0_constant: integral of phi'^2 underflows");
  return 1.0 / integral;
}

LayerDecayReport verify_layer_decay(const LayerSolution& layer) {
  LayerDecayReport report;
  const int n = static_cast<int>(layer.xs.size());
  report.K0 = std::numeric_limits<Real>::infinity();
  for (int j = 0; j < n; ++j) {
    const Real x = layer.xs[j];
    const Real env = 1.0 + x * x;
    report.K0 = std::min(report.K0, layer.phi1[j] * env);
    report.K1_d1 = std::max(report.K1_d1, layer.phi1[j] * env);
    report.K1_d2 = std::max(report.K1_d2, std::abs(layer.phi2[j]) * env);
    report.K1_d3 = std::max(report.K1_d3, std::abs(layer.phi3[j]) * env);
    if (std::abs(x) >= 1.0) {
      const Real heav = (x >= 0) ? 1.0 : 0.0;
      const Real defect = layer.phi[j] - heav + 1.0 / (layer.alpha * kPi * x);
      report.K1_tail = std::max(report.K1_tail, std::abs(defect) * x * x);
    }
    if (!(layer.phi1[j] > 0.0)) report.violations.push_back(x);
  }
  report.K1 = std::max({report.K1_tail, report.K1_d1, report.K1_d2, report.K1_d3});
  report.ok = report.violations.empty() && report.K0 > 0.0 && std::isfinite(report.K1);
  return report;
}

}  // namespace pnlab
