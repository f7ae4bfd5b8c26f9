#include "pnlab/fractional.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <numbers>

namespace pnlab {

namespace {

constexpr Real kPi = std::numbers::pi_v<Real>;

// 8-point Gauss-Legendre on [-1, 1].
constexpr Real kGlNode[] = {0.1834346424956498, 0.5255324099163290,
                            0.7966664774136267, 0.9602898564975363};
constexpr Real kGlWeight[] = {0.3626837833783620, 0.3137066458778873,
                              0.2223810344533745, 0.1012285362903763};

// Composite GL8 of g over [a, b] in the log variable, ~nodes_per_decade
// nodes per decade.
template <typename F>
Real integrate_log_impl(F&& g, Real a, Real b, int nodes_per_decade) {
  if (!(b > a) || a <= 0.0) return 0.0;
  const Real ta = std::log(a), tb = std::log(b);
  const Real decades = (tb - ta) / std::numbers::ln10_v<Real>;
  const int segments = std::max(1, static_cast<int>(std::ceil(decades * nodes_per_decade / 8.0)));
  const Real dt = (tb - ta) / segments;
  Real acc = 0.0;
  for (int s = 0; s < segments; ++s) {
    const Real mid = ta + dt * (s + 0.5);
    const Real half = 0.5 * dt;
    for (int q = 0; q < 4; ++q) {
      const Real zp = std::exp(mid + half * kGlNode[q]);
      const Real zm = std::exp(mid - half * kGlNode[q]);
      acc += half * kGlWeight[q] * (zp * g(zp) + zm * g(zm));
    }
  }
  return acc;
}

// Composite GL8 on uniform segments of length at most max_step.
template <typename F>
Real integrate_uniform_impl(F&& g, Real a, Real b, Real max_step) {
  if (!(b > a)) return 0.0;
  const long segments = std::max<long>(1, static_cast<long>(std::ceil((b - a) / max_step)));
  const Real len = (b - a) / segments;
  Real acc = 0.0;
  for (long s = 0; s < segments; ++s) {
    const Real mid = a + len * (s + 0.5);
    const Real half = 0.5 * len;
    for (int q = 0; q < 4; ++q)
      acc += half * kGlWeight[q] * (g(mid + half * kGlNode[q]) + g(mid - half * kGlNode[q]));
  }
  return acc;
}

Real symmetric_quadrature(const std::function<Real(Real)>& f, Real x, Real fprime,
                          bool has_taylor_core, Real fsecond, Real z_taylor,
                          const LevyQuadratureConfig& cfg) {
  validate_levy_config(cfg);
  const Real fx = f(x);
  if (!std::isfinite(fx)) throw ComputeError("half_laplacian_quadrature: evaluator returned non-finite value at x");

  // Symmetric node pair: the f'(x) z compensation and any linear part of f
  // cancel between +z and -z, making the value r-independent by construction.
  const auto pairval = [&](Real z) -> Real {
    Real p;
    if (z <= cfg.r) {
      p = (f(x + z) - fx - fprime * z) + (f(x - z) - fx + fprime * z);
    } else {
      p = (f(x + z) - fx) + (f(x - z) - fx);
    }
    return p / (kPi * z * z);
  };

  Real acc = 0.0;
  Real z_lo;
  if (has_taylor_core) {
    // int_0^zt pair/(pi z^2) = zt f''(x)/pi + O(zt^3 f'''').
    z_lo = std::min(z_taylor, cfg.r);
    acc += fsecond * z_lo / kPi;
  } else {
    z_lo = cfg.r * 1e-6;
    acc += pairval(z_lo) * z_lo;  // flat remainder of the compensated integrand
  }

  const bool uniform_active = cfg.uniform_step > 0.0 && cfg.uniform_to > cfg.uniform_from &&
                              cfg.uniform_from < cfg.R;
  const Real log_hi = uniform_active ? std::clamp(cfg.uniform_from, z_lo, cfg.R) : cfg.R;

  if (log_hi > z_lo) {
    const Real split = std::clamp(cfg.r, z_lo, log_hi);
    acc += integrate_log_impl(pairval, z_lo, split, cfg.nodes_per_decade);
    acc += integrate_log_impl(pairval, split, log_hi, cfg.nodes_per_decade);
  }

  if (uniform_active && log_hi < cfg.R) {
    const Real u_hi = std::min(cfg.uniform_to, cfg.R);
    if (u_hi > log_hi) acc += integrate_uniform_impl(pairval, log_hi, u_hi, cfg.uniform_step);
    const Real period = cfg.osc_period;
    if (u_hi < cfg.R && period > 0.0 && u_hi > 1.5 * period) {
      // Beyond the window the integrand keeps oscillating with the given
      // period around a slowly varying mean; close with that mean, estimated
      // from the last full period of the window.
      const int m_samples = 64;
      Real pmean = 0.0;
      for (int j = 0; j <= m_samples; ++j) {
        const Real z = u_hi - period + period * static_cast<Real>(j) / m_samples;
        pmean += pairval(z) * kPi * z * z * ((j == 0 || j == m_samples) ? 0.5 : 1.0);
      }
      pmean /= m_samples;
      acc += pmean / kPi * (1.0 / u_hi - 1.0 / cfg.R);
    }
  }

  if (!std::isfinite(acc)) throw ComputeError("half_laplacian_quadrature: non-finite quadrature result");
  return acc;
}

}  // namespace

void validate_levy_config(const LevyQuadratureConfig& cfg) {
  if (!(cfg.r > 0.0) || !(cfg.r < 1.0))
    throw ConfigError("levy.r: inner radius must satisfy 0 < r < 1");
  if (!(cfg.R > cfg.r) || !(cfg.R >= 1.0))
    throw ConfigError("levy.R: outer cutoff must satisfy r < R and R >= 1");
  if (cfg.nodes_per_decade < 8)
    throw ConfigError("levy.nodes_per_decade: must be >= 8");
}

ArrayXr half_laplacian_spectral(const ArrayXr& values, Real period) {
  const int n = static_cast<int>(values.size());
  if (n < 4) throw ConfigError("half_laplacian_spectral: count must be >= 4");
  if (!values.isFinite().all())
    throw ComputeError("half_laplacian_spectral: non-finite values");

  Eigen::FFT<Real> fft;
  Eigen::VectorXcd in = values.matrix().cast<std::complex<Real>>(), freq(n), out(n);
  fft.fwd(freq, in);
  for (int m = 0; m < n; ++m) {
    const int abs_m = (m <= n / 2) ? m : n - m;
    freq[m] *= -2.0 * kPi * abs_m / period;
  }
  fft.inv(out, freq);
  return out.real().array();
}

GridField half_laplacian_spectral(const GridField& field) {
  // The linear part contributes zero by the antisymmetry of z mu(dz).
  return GridField{field.grid, half_laplacian_spectral(field.values, field.grid.period), 0.0};
}

Real half_laplacian_quadrature(const std::function<Real(Real)>& f, Real fprime_at_x,
                               Real x, const LevyQuadratureConfig& cfg) {
  return symmetric_quadrature(f, x, fprime_at_x, false, 0.0, 0.0, cfg);
}

Real half_laplacian_linear_growth(const std::function<Real(Real)>& f, Real slope,
                                  Real x, const LevyQuadratureConfig& cfg) {
  // Pairing cancels the linear part exactly, so the bounded-function path
  // applies unchanged; slope enters only through the compensation term,
  // where it also cancels.
  return symmetric_quadrature(f, x, slope, false, 0.0, 0.0, cfg);
}

Real half_laplacian_linear_growth(const std::function<Real(Real)>& f, Real slope,
                                  Real x, Real fsecond_at_x, Real z_taylor,
                                  const LevyQuadratureConfig& cfg) {
  return symmetric_quadrature(f, x, slope, true, fsecond_at_x, z_taylor, cfg);
}

ArrayXr spectral_kernel_column(int count, Real period) {
  Eigen::FFT<Real> fft;
  Eigen::VectorXcd symbol(count), col(count);
  for (int m = 0; m < count; ++m) {
    const int abs_m = (m <= count / 2) ? m : count - m;
    symbol[m] = -2.0 * kPi * abs_m / period;
  }
  fft.inv(col, symbol);
  return col.real().array();
}

Real integrate_log_graded(const std::function<Real(Real)>& g, Real a, Real b,
                          int nodes_per_decade) {
  return integrate_log_impl(g, a, b, nodes_per_decade);
}

Real integrate_uniform_gl8(const std::function<Real(Real)>& g, Real a, Real b,
                           Real segment_length) {
  return integrate_uniform_impl(g, a, b, segment_length);
}

ArrayXr spectral_derivative_bridged(const ArrayXr& u, Real h, int order) {
  const int n = static_cast<int>(u.size());
  if (n < 8) throw ConfigError("spectral_derivative_bridged: too few samples");
  const Real span = n * h;

  const auto fd_slope = [&](bool left) {
    if (left)
      return (-25.0 * u[0] + 48.0 * u[1] - 36.0 * u[2] + 16.0 * u[3] - 3.0 * u[4]) / (12.0 * h);
    return (25.0 * u[n - 1] - 48.0 * u[n - 2] + 36.0 * u[n - 3] - 16.0 * u[n - 4] +
            3.0 * u[n - 5]) / (12.0 * h);
  };
  const Real d0 = fd_slope(true), d1 = fd_slope(false);
  const Real len = (n - 1) * h;
  const Real y0 = u[0], y1 = u[n - 1];

  // Hermite cubic q matching value and slope at both ends; u - q periodizes
  // with a C^1 seam.
  ArrayXr q(n), qd(n);
  for (int j = 0; j < n; ++j) {
    const Real t = (j * h) / len;
    const Real t2 = t * t, t3 = t2 * t;
    q[j] = (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * len * d0 +
           (-2 * t3 + 3 * t2) * y1 + (t3 - t2) * len * d1;
    switch (order) {
      case 1:
        qd[j] = ((6 * t2 - 6 * t) * y0 + (3 * t2 - 4 * t + 1) * len * d0 +
                 (-6 * t2 + 6 * t) * y1 + (3 * t2 - 2 * t) * len * d1) / len;
        break;
      case 2:
        qd[j] = ((12 * t - 6) * y0 + (6 * t - 4) * len * d0 + (-12 * t + 6) * y1 +
                 (6 * t - 2) * len * d1) / (len * len);
        break;
      case 3:
        qd[j] = (12 * y0 + 6 * len * d0 - 12 * y1 + 6 * len * d1) / (len * len * len);
        break;
      default:
        throw ConfigError("spectral_derivative_bridged: order must be 1..3");
    }
  }

  Eigen::FFT<Real> fft;
  Eigen::VectorXcd in = (u - q).matrix().cast<std::complex<Real>>(), freq(n), out(n);
  fft.fwd(freq, in);
  for (int m = 0; m < n; ++m) {
    const int sm = (m <= n / 2) ? m : m - n;
    std::complex<Real> ik(0.0, 2.0 * kPi * sm / span);
    if ((order % 2) == 1 && m == n / 2) ik = 0.0;  // odd-order Nyquist mode
    std::complex<Real> mult = ik;
    for (int p = 1; p < order; ++p) mult *= ik;
    freq[m] *= mult;
  }
  fft.inv(out, freq);
  return out.real().array() + qd;
}

MatrixXr half_laplacian_dense_matrix(int n, Real h, int pad_factor) {
  if (n < 2 || pad_factor < 1) throw ConfigError("half_laplacian_dense_matrix: bad arguments");
  const int n_pad = n * pad_factor;
  const ArrayXr col = spectral_kernel_column(n_pad, n_pad * h);
  MatrixXr T(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) T(j, k) = col[((j - k) % n_pad + n_pad) % n_pad];
  return T;
}

}  // namespace pnlab
