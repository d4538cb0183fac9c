#include "graphscat/wavelets.hpp"

#include <algorithm>
#include <cmath>

#include "graphscat/errors.hpp"

namespace graphscat {

double dyadic_power(double t, int k) {
  for (int i = 0; i < k; ++i) t *= t;
  return t;
}

FilterBank::FilterBank(int J, FrameKind kind) : J_(J), kind_(kind) {
  if (J < 0) throw Error(ErrorCode::DomainError, "J must be nonnegative");
  if (J > 30) throw Error(ErrorCode::DomainError, "J too large");
}

double FilterBank::poly(int j, double t) const {
  if (j < 0 || j > J_ + 1) throw Error(ErrorCode::InvalidPathEntry, "filter index out of range");
  if (j == 0) return 1.0 - t;
  if (j == J_ + 1) return dyadic_power(t, J_);
  const double a = dyadic_power(t, j - 1);
  return a - a * a;
}

double FilterBank::operator()(int j, double t) const {
  const double p = poly(j, t);
  return kind_ == FrameKind::Poly ? p : std::sqrt(std::max(p, 0.0));
}

double FilterBank::energy(double t) const {
  double total = 0.0;
  for (int j = 0; j < count(); ++j) {
    const double f = (*this)(j, t);
    total += f * f;
  }
  return total;
}

double FilterBank::lowpass_exponent() const {
  if (kind_ == FrameKind::Poly) return std::ldexp(1.0, J_);
  return std::ldexp(1.0, J_ - 1);
}

std::vector<double> poly_filter_coefficients(int j, int J) {
  if (j < 0 || j > J + 1) throw Error(ErrorCode::InvalidPathEntry, "filter index out of range");
  if (j == 0) return {1.0, -1.0};
  const std::size_t top = std::size_t{1} << (j == J + 1 ? J : j);
  std::vector<double> c(top + 1, 0.0);
  if (j == J + 1) {
    c[top] = 1.0;
  } else {
    c[top / 2] = 1.0;
    c[top] = -1.0;
  }
  return c;
}

Matrix horner(const Matrix& k, const std::vector<double>& coeffs) {
  const Index n = k.rows();
  Matrix acc = Matrix::Zero(n, n);
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
    acc = acc * k;
    acc.diagonal().array() += *it;
  }
  return acc;
}

WaveletFrame build_frame(std::shared_ptr<const DiffusionSystem> sys, int J, FrameKind kind) {
  if (!sys) throw Error(ErrorCode::DomainError, "null diffusion system");
  FilterBank bank(J, kind);
  const RootMode root = kind == FrameKind::Tight ? RootMode::Sqrt : RootMode::None;
  std::vector<Matrix> psi;
  psi.reserve(static_cast<std::size_t>(J + 1));
  for (int j = 0; j <= J; ++j) {
    psi.push_back(matrix_function(*sys, [&](double t) { return bank.poly(j, t); },
                                  OperatorTarget::K, root));
  }
  Matrix phi = matrix_function(*sys, [&](double t) { return bank.poly(J + 1, t); },
                               OperatorTarget::K, root);
  return WaveletFrame{bank, std::move(sys), std::move(psi), std::move(phi)};
}

WaveletFrame build_frame(const DiffusionSystem& sys, int J, FrameKind kind) {
  return build_frame(std::make_shared<const DiffusionSystem>(sys), J, kind);
}

std::vector<Vector> apply_frame(const WaveletFrame& frame, const Vector& x) {
  if (x.size() != frame.size()) {
    throw Error(ErrorCode::DimensionMismatch, "signal length does not match frame");
  }
  std::vector<Vector> out;
  out.reserve(frame.psi.size() + 1);
  for (const Matrix& p : frame.psi) out.push_back(p * x);
  out.push_back(frame.phi * x);
  return out;
}

FrameBounds frame_bounds(const WaveletFrame& frame) {
  FrameBounds b{INFINITY, -INFINITY};
  for (Index i = 0; i < frame.sys->lambdas.size(); ++i) {
    const double e = frame.bank.energy(frame.sys->lambdas(i));
    b.lower = std::min(b.lower, e);
    b.upper = std::max(b.upper, e);
  }
  return b;
}

double lower_bound_constant(int J) {
  if (J < 0) throw Error(ErrorCode::DomainError, "J must be nonnegative");
  auto f = [J](double t) {
    const double a = 1.0 - t;
    return a * a + dyadic_power(t, J + 1);
  };
  constexpr int grid = 100000;
  int best = 0;
  double best_val = f(0.0);
  for (int k = 1; k <= grid; ++k) {
    const double v = f(static_cast<double>(k) / grid);
    if (v < best_val) {
      best_val = v;
      best = k;
    }
  }
  double lo = std::max(0, best - 1) / static_cast<double>(grid);
  double hi = std::min(grid, best + 1) / static_cast<double>(grid);
  const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = hi - ratio * (hi - lo);
  double b = lo + ratio * (hi - lo);
  double fa = f(a);
  double fb = f(b);
  while (hi - lo > 1e-12) {
    if (fa < fb) {
      hi = b;
      b = a;
      fb = fa;
      a = hi - ratio * (hi - lo);
      fa = f(a);
    } else {
      lo = a;
      a = b;
      fa = fb;
      b = lo + ratio * (hi - lo);
      fb = f(b);
    }
  }
  return std::min({best_val, fa, fb, f(0.5 * (lo + hi))});
}

}  // namespace graphscat
