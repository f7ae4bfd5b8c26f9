#include "pnlab/hull.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "pnlab/special.hpp"

namespace pnlab {

namespace {

constexpr Real kPi = std::numbers::pi_v<Real>;

// Per-side far-field coefficients of one lattice term, combining the layer
// and corrector tail models:
//   phi(z) + delta psi(z) = H(z) + a1/z + a2_side/z^2  (exactly, per model)
// with a1 = -1/(alpha pi) + delta K2 and a2 = d_side + delta e_side.
struct ModelCoeffs {
  Real a1, a2_plus, a2_minus;
};

ModelCoeffs model_coeffs(const HullParams& p) {
  const auto& lay = *p.layer;
  const auto& cor = *p.corrector;
  return ModelCoeffs{-1.0 / (lay.alpha * kPi) + p.delta * cor.K2,
                     lay.tail_d_plus + p.delta * cor.tail_e_plus,
                     lay.tail_d_minus + p.delta * cor.tail_e_minus};
}

// One term of the series through the solved profiles: phi + delta psi (or the
// requested derivative) at the rescaled argument.
Real term_eval(const HullParams& p, Real z_i, int order) {
  return layer_eval(*p.layer, z_i, order) +
         p.delta * corrector_eval(*p.corrector, z_i, order);
}

// Sum over i in [a, b] of 1/(x - i), all arguments of one sign (the range
// must not straddle x).  Via digamma differences.
Real sum_recip_range(Real x, long a, long b) {
  if (a > b) return 0.0;
  const Real ra = x - static_cast<Real>(b), rb = x - static_cast<Real>(a);
  if (ra > 0.0) return digamma(rb + 1.0) - digamma(ra);
  return -(digamma(-ra + 1.0) - digamma(-rb));
}

// Sum over i in [a, b] of 1/(x - i)^2, same sign restriction.
Real sum_recip2_range(Real x, long a, long b) {
  if (a > b) return 0.0;
  Real ra = x - static_cast<Real>(b), rb = x - static_cast<Real>(a);
  if (ra <= 0.0) {
    const Real t = -rb;
    rb = -ra;
    ra = t;
  }
  return trigamma(ra) - trigamma(rb + 1.0);
}

struct Windows {
  long expl_lo, expl_hi;  // contiguous range evaluated through the profiles
  long i0;
  Real gamma;
};

Windows make_windows(const HullParams& p, Real x, long pad) {
  Windows w;
  lattice_decompose(x, w.i0, w.gamma);
  const Real lam = p.lattice_scale();
  const auto& xs = p.layer->xs;
  // Terms whose rescaled argument lies inside the stored profile domain.
  long spl_lo = static_cast<long>(std::ceil(x - lam * xs[xs.size() - 1]));
  long spl_hi = static_cast<long>(std::floor(x - lam * xs[0]));
  pad = std::clamp<long>(pad, 1, 256);
  w.expl_lo = std::min(spl_lo, w.i0 - pad);
  w.expl_hi = std::max(spl_hi, w.i0 + pad);
  return w;
}

}  // namespace

void lattice_decompose(Real x, long& i0, Real& gamma) {
  i0 = static_cast<long>(std::ceil(x - 0.5));
  gamma = x - static_cast<Real>(i0);
}

HullParams make_hull_params(Real delta, Real p0, Real L, long n,
                            std::shared_ptr<const LayerSolution> layer,
                            std::shared_ptr<const CorrectorSolution> corrector) {
  if (!(delta > 0.0)) throw ConfigError("hull: delta must be positive");
  if (p0 == 0.0) throw ConfigError("hull: p0 must be nonzero");
  if (n < 1) throw ConfigError("hull: truncation n must be >= 1");
  if (!layer || !corrector) throw ConfigError("hull: layer and corrector required");
  if (1.0 / (delta * std::abs(p0)) < 2.0)
    throw ConfigError("hull: requires 1/(delta |p0|) >= 2");
  if (std::abs(corrector->L - L) > 1e-12 * std::max(1.0, std::abs(L)))
    throw ConfigError("hull: corrector was solved at a different L");
  if (corrector->xs.size() != layer->xs.size())
    throw ConfigError("hull: layer and corrector live on different grids");
  return HullParams{delta, p0, L, n, std::move(layer), std::move(corrector)};
}

Real ansatz_partial_sum(const HullParams& params, Real x, int order) {
  if (!std::isfinite(x)) throw ConfigError("ansatz_partial_sum: x must be finite");
  if (order < 0 || order > 2) throw ConfigError("ansatz_partial_sum: order must be 0..2");
  const Real lam = params.lattice_scale();
  Real acc = 0.0;
  for (long i = -params.n; i <= params.n; ++i)
    acc += term_eval(params, (x - static_cast<Real>(i)) / lam, order);
  acc /= std::pow(lam, order);
  if (order == 0)
    acc += params.delta * params.L / params.layer->alpha - static_cast<Real>(params.n);
  return acc;
}

Real hull_series_value(const HullParams& params, Real x, int order, long n) {
  if (!std::isfinite(x)) throw ConfigError("hull_series_value: x must be finite");
  const Real lam = params.lattice_scale();
  const Real delta = params.delta;
  const auto w = make_windows(params, x, n);
  const auto mc = model_coeffs(params);

  Real acc = 0.0;
  for (long i = w.expl_lo; i <= w.expl_hi; ++i)
    acc += term_eval(params, (x - static_cast<Real>(i)) / lam, order);
  acc /= std::pow(lam, order);

  // Closed-form capture of everything beyond the explicit window, using the
  // exact tail models.  kL / kR index the first omitted term on each side.
  const long kL = w.i0 - w.expl_lo;  // left side: i = i0 - k, k > kL, x - i = k + gamma
  const long kR = w.expl_hi - w.i0;  // right side: i = i0 + k, x - i = gamma - k
  const Real g = w.gamma;

  switch (order) {
    case 0: {
      acc += delta * params.L / params.layer->alpha;
      acc += static_cast<Real>(w.expl_lo);  // Heaviside bookkeeping of the model zone
      // a1 * sum_{i not in window, i != i0} 1/(x-i), via the centered limit.
      Real s1_window = 0.0;
      for (long i = w.expl_lo; i <= w.expl_hi; ++i)
        if (i != w.i0) s1_window += 1.0 / (x - static_cast<Real>(i));
      acc += lam * mc.a1 * (lattice_sum_s1(g) - s1_window);
      const Real lam2 = lam * lam;
      acc += lam2 * mc.a2_plus * power_tail(kL, g, 2);
      acc += lam2 * mc.a2_minus * power_tail(kR, -g, 2);
      break;
    }
    case 1: {
      // phi' + delta psi' ~ -a1/z^2 - 2 a2/z^3 per the models; each term
      // contributes (1/lam) f'(x_i), i.e. lam^(p-1) per 1/(x-i)^p.
      acc += -lam * mc.a1 * (power_tail(kL, g, 2) + power_tail(kR, -g, 2));
      acc += -2.0 * lam * lam * (mc.a2_plus * power_tail(kL, g, 3) -
                                 mc.a2_minus * power_tail(kR, -g, 3));
      break;
    }
    case 2: {
      // phi'' + delta psi'' ~ 2 a1/z^3 + 6 a2/z^4.
      acc += 2.0 * lam * mc.a1 * (power_tail(kL, g, 3) - power_tail(kR, -g, 3));
      acc += 6.0 * lam * lam *
             (mc.a2_plus * power_tail(kL, g, 4) + mc.a2_minus * power_tail(kR, -g, 4));
      break;
    }
    default:
      throw ConfigError("hull_series_value: order must be 0..2");
  }
  return acc;
}

namespace {

// Converged series value with geometric growth of the truncation.
Real series_limit(const HullParams& params, Real x, int order, Real tol, long& n_used) {
  long n = std::max<long>(params.n, 2);
  Real prev = hull_series_value(params, x, order, n);
  constexpr long kMaxN = 1 << 24;
  while (n <= kMaxN) {
    const long n2 = 2 * n;
    const Real next = hull_series_value(params, x, order, n2);
    if (std::abs(next - prev) < tol) {
      n_used = std::max(n_used, n2);
      return next;
    }
    prev = next;
    n = n2;
  }
  std::ostringstream msg;
  msg << "hull series did not converge at x = " << x << " (last increment "
      << std::abs(hull_series_value(params, x, order, kMaxN) -
                  hull_series_value(params, x, order, kMaxN / 2))
      << " above tol " << tol << ")";
  throw ComputeError(msg.str());
}

LevyQuadratureConfig hull_levy_config(Real lam) {
  LevyQuadratureConfig cfg;
  cfg.r = 0.5;
  cfg.R = 1e4;
  cfg.nodes_per_decade = 48;
  cfg.uniform_from = std::min(4.0 * lam, 1.0);
  cfg.uniform_to = 64.0;
  cfg.uniform_step = 0.5 * lam;
  cfg.osc_period = 1.0;
  return cfg;
}

}  // namespace

HullEvaluation hull_value(const HullParams& params, Real x, Real tol) {
  if (!(tol > 0.0)) throw ConfigError("hull_value: tol must be positive");
  HullEvaluation ev;
  ev.x = x;
  lattice_decompose(x, ev.i0, ev.gamma);
  const auto& lay = *params.layer;
  ev.lambda_bar = params.delta * params.delta * lay.c0 * std::abs(params.p0) * params.L;

  ev.n_used = 0;
  ev.h = series_limit(params, x, 0, tol, ev.n_used);
  ev.h1 = series_limit(params, x, 1, tol, ev.n_used);
  ev.h2 = series_limit(params, x, 2, tol, ev.n_used);

  const long n_fixed = ev.n_used;
  const Real lam = params.lattice_scale();
  const auto f = [&](Real y) { return hull_series_value(params, y, 0, n_fixed); };
  ev.i1 = half_laplacian_linear_growth(f, 1.0, x, ev.h2, 1e-3 * lam, hull_levy_config(lam));

  ev.nl = ev.lambda_bar * ev.h1 - params.delta * params.L -
          params.delta * std::abs(params.p0) * ev.i1 + lay.potential.eval(ev.h, 1);
  return ev;
}

Real nl_residual(const HullParams& params, Real x) {
  return hull_value(params, x, 1e-9).nl;
}

Real hull_mean_offset(const HullParams& params) {
  long n_used = 0;
  const auto g = [&](Real t) {
    return series_limit(params, t, 0, 1e-10, n_used) - t;
  };
  return integrate_uniform_gl8(g, 0.0, 1.0, 0.25 * params.lattice_scale());
}

LatticeReferenceSums lattice_reference_sums(Real gamma, long n) {
  if (!(gamma > -0.5) || !(gamma <= 0.5))
    throw ConfigError("lattice_reference_sums: gamma must lie in (-1/2, 1/2]");
  if (n < 1) throw ConfigError("lattice_reference_sums: n must be >= 1");

  LatticeReferenceSums out;
  for (long i = 1; i <= n; ++i) {
    const Real di = static_cast<Real>(i);
    out.s1_partial += -2.0 * gamma / (di * di - gamma * gamma);
    out.s2_partial += 1.0 / ((di + gamma) * (di + gamma));
    out.s3_partial += 1.0 / ((di - gamma) * (di - gamma));
  }

  // Limits by brute force over a large window plus integral tail bounds
  // (midpoint rule with its first Euler-Maclaurin correction).
  const long N = std::max<long>(n, 1000000);
  Real s1 = out.s1_partial, s2 = out.s2_partial, s3 = out.s3_partial;
  for (long i = n + 1; i <= N; ++i) {
    const Real di = static_cast<Real>(i);
    s1 += -2.0 * gamma / (di * di - gamma * gamma);
    s2 += 1.0 / ((di + gamma) * (di + gamma));
    s3 += 1.0 / ((di - gamma) * (di - gamma));
  }
  const Real M = static_cast<Real>(N) + 0.5;
  const Real fprime = -4.0 * gamma * M / ((M * M - gamma * gamma) * (M * M - gamma * gamma));
  s1 -= std::log((M + gamma) / (M - gamma));  // integral of 2g/(z^2-g^2)
  s1 -= fprime / 24.0;
  out.s1_limit = s1;
  out.s2_limit = s2 + power_tail(N, gamma, 2);
  out.s3_limit = s3 + power_tail(N, -gamma, 2);
  return out;
}

Real far_field_contribution(const HullParams& params, Real x, Real a, long n) {
  if (!(a >= 1.0)) throw ConfigError("far_field_contribution: a must be >= 1");
  long i0;
  Real gamma;
  lattice_decompose(x, i0, gamma);
  if (n <= std::labs(i0) + 1 + static_cast<long>(std::ceil(a)))
    throw ConfigError("far_field_contribution: n too small for the requested a");

  // s_n with the model zone summed in closed form over the finite window.
  // The explicit window around z always contains i0(z) when that index lies
  // inside [-n, n], so the model ranges never straddle z.
  const Real lam = params.lattice_scale();
  const auto mc = model_coeffs(params);
  const Real lam2 = lam * lam;
  const auto s_n = [&](Real z) -> Real {
    const auto w = make_windows(params, z, 8);
    const long eL = std::max(w.expl_lo, -n), eH = std::min(w.expl_hi, n);
    Real acc = params.delta * params.L / params.layer->alpha - static_cast<Real>(n);
    for (long i = eL; i <= eH; ++i)
      acc += term_eval(params, (z - static_cast<Real>(i)) / lam, 0);

    const long zf = static_cast<long>(std::floor(z));
    const auto count_le = [zf](long a, long b) {
      return std::max<long>(0, std::min(zf, b) - a + 1);
    };
    acc += count_le(-n, n) - ((eL <= eH) ? count_le(eL, eH) : 0);

    const auto model_range = [&](long ra, long rb) {
      if (ra > rb) return;
      acc += lam * mc.a1 * sum_recip_range(z, ra, rb);
      const Real a2 = (z > static_cast<Real>(rb)) ? mc.a2_plus : mc.a2_minus;
      acc += lam2 * a2 * sum_recip2_range(z, ra, rb);
    };
    if (eL <= eH) {
      model_range(-n, eL - 1);
      model_range(eH + 1, n);
    } else {
      model_range(-n, n);
    }
    return acc;
  };

  const Real sx = s_n(x);
  const auto pairval = [&](Real y) {
    return (s_n(x + y) + s_n(x - y) - 2.0 * sx) / (kPi * y * y);
  };

  // Split at the radii where the partial sum turns from hull-like into its
  // flat far tails.
  const Real b1 = static_cast<Real>(n - 1 - std::labs(i0));
  const Real b2 = static_cast<Real>(n + 1 + std::labs(i0));
  const Real y_far = 1e4 * b2;
  Real acc = integrate_uniform_gl8(pairval, a, b1, 0.5 * lam);
  acc += integrate_uniform_gl8(pairval, b1, b2, 0.5 * lam);
  acc += integrate_log_graded(pairval, b2, y_far, 32);
  const Real s_plus = params.delta * params.L / params.layer->alpha + static_cast<Real>(n) + 1.0;
  const Real s_minus = params.delta * params.L / params.layer->alpha - static_cast<Real>(n);
  acc += (s_plus + s_minus - 2.0 * sx) / (kPi * y_far);
  return acc;
}

}  // namespace pnlab
