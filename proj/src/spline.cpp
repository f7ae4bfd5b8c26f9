#include "pnlab/spline.hpp"

namespace pnlab {

CubicSpline::CubicSpline(Real x0, Real h, const ArrayXr& y, Real d_left, Real d_right)
    : x0_(x0), h_(h), n_(y.size()), y_(y) {
  if (n_ < 3) throw ConfigError("CubicSpline: need at least 3 samples");

  // Tridiagonal system for the node second derivatives, clamped ends.
  ArrayXr diag = ArrayXr::Constant(n_, 2.0 * h / 3.0);
  ArrayXr off = ArrayXr::Constant(n_ - 1, h / 6.0);
  ArrayXr rhs(n_);
  diag[0] = h / 3.0;
  diag[n_ - 1] = h / 3.0;
  rhs[0] = (y[1] - y[0]) / h - d_left;
  rhs[n_ - 1] = d_right - (y[n_ - 1] - y[n_ - 2]) / h;
  for (Eigen::Index i = 1; i + 1 < n_; ++i)
    rhs[i] = (y[i + 1] - 2.0 * y[i] + y[i - 1]) / h;

  // Thomas algorithm.
  ArrayXr c(n_ - 1), d(n_);
  c[0] = off[0] / diag[0];
  d[0] = rhs[0] / diag[0];
  for (Eigen::Index i = 1; i < n_; ++i) {
    const Real denom = diag[i] - off[i - 1] * c[i - 1];
    if (i < n_ - 1) c[i] = off[i] / denom;
    d[i] = (rhs[i] - off[i - 1] * d[i - 1]) / denom;
  }
  m_.resize(n_);
  m_[n_ - 1] = d[n_ - 1];
  for (Eigen::Index i = n_ - 2; i >= 0; --i) m_[i] = d[i] - c[i] * m_[i + 1];
}

Real CubicSpline::operator()(Real x) const {
  Eigen::Index i = static_cast<Eigen::Index>(std::floor((x - x0_) / h_));
  i = std::clamp<Eigen::Index>(i, 0, n_ - 2);
  const Real t = x - (x0_ + h_ * i);
  const Real u = h_ - t;
  return (m_[i] * u * u * u + m_[i + 1] * t * t * t) / (6.0 * h_) +
         (y_[i] / h_ - m_[i] * h_ / 6.0) * u + (y_[i + 1] / h_ - m_[i + 1] * h_ / 6.0) * t;
}

}  // namespace pnlab
