#include "graphscat/spectral.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "graphscat/errors.hpp"

namespace graphscat {

SpectralFunction SpectralFunction::gstar() {
  return SpectralFunction(SpectralFunctionKind::GStar, "gstar",
                          [](double t) { return 1.0 - 0.5 * t; });
}

SpectralFunction SpectralFunction::table(std::vector<std::pair<double, double>> knots) {
  if (knots.size() < 2) throw Error(ErrorCode::DomainError, "table needs at least two knots");
  std::sort(knots.begin(), knots.end());
  for (std::size_t i = 1; i < knots.size(); ++i) {
    if (knots[i].first == knots[i - 1].first) {
      throw Error(ErrorCode::DomainError, "table has repeated abscissa");
    }
  }
  if (knots.front().first > 0.0 || knots.back().first < 2.0) {
    throw Error(ErrorCode::DomainError, "table knots must cover [0,2]");
  }
  auto fn = [knots = std::move(knots)](double t) {
    auto hi = std::lower_bound(knots.begin(), knots.end(), t,
                               [](const auto& k, double x) { return k.first < x; });
    if (hi == knots.begin()) return hi->second;
    if (hi == knots.end()) return knots.back().second;
    auto lo = std::prev(hi);
    const double s = (t - lo->first) / (hi->first - lo->first);
    return lo->second + s * (hi->second - lo->second);
  };
  return SpectralFunction(SpectralFunctionKind::Table, "table", std::move(fn));
}

SpectralFunction SpectralFunction::expression(std::string name, std::function<double(double)> fn) {
  return SpectralFunction(SpectralFunctionKind::Expression, std::move(name), std::move(fn));
}

void SpectralFunction::validate(int samples) const {
  if (std::abs(fn_(0.0) - 1.0) > 1e-12) throw Error(ErrorCode::DomainError, name_ + ": g(0) != 1");
  if (std::abs(fn_(2.0)) > 1e-12) throw Error(ErrorCode::DomainError, name_ + ": g(2) != 0");
  double prev = fn_(0.0);
  for (int k = 1; k < samples; ++k) {
    const double t = 2.0 * k / (samples - 1);
    const double v = fn_(t);
    if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
      throw Error(ErrorCode::DomainError, name_ + ": value outside [0,1] at " + std::to_string(t));
    }
    if (!(v < prev)) {
      throw Error(ErrorCode::DomainError, name_ + ": not strictly decreasing near " +
                                              std::to_string(t));
    }
    prev = v;
  }
}

namespace {

void fix_sign(Eigen::Ref<Vector> column) {
  Index best = 0;
  for (Index i = 1; i < column.size(); ++i) {
    if (std::abs(column(i)) > std::abs(column(best)) + 1e-12) best = i;
  }
  if (column(best) < 0.0) column = -column;
}

}  // namespace

SpectralDecomposition spectral_decompose(const Matrix& laplacian, const Vector& degrees,
                                         const SpectralTolerances& tol) {
  const Index n = laplacian.rows();
  if (n == 0 || laplacian.cols() != n || degrees.size() != n) {
    throw Error(ErrorCode::DimensionMismatch, "laplacian/degree shapes disagree");
  }
  if ((laplacian - laplacian.transpose()).cwiseAbs().maxCoeff() > tol.clamp_tol) {
    throw Error(ErrorCode::DomainError, "laplacian is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (laplacian + laplacian.transpose()));
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::EigensolverFailure, "symmetric eigensolver did not converge");
  }

  SpectralDecomposition out;
  out.omegas = solver.eigenvalues();
  out.V = solver.eigenvectors();

  for (Index i = 0; i < n; ++i) {
    double& w = out.omegas(i);
    if (w < -tol.clamp_tol || w > 2.0 + tol.clamp_tol) {
      throw Error(ErrorCode::EigensolverFailure,
                  "eigenvalue " + std::to_string(w) + " outside [0,2]");
    }
    w = std::clamp(w, 0.0, 2.0);
    if (2.0 - w <= tol.top_snap) w = 2.0;
  }
  if (n > 1 && out.omegas(1) <= tol.gap_tol) {
    throw Error(ErrorCode::SpectralGapViolation,
                "second eigenvalue " + std::to_string(out.omegas(1)) + " is not above gap tolerance");
  }
  out.omegas(0) = 0.0;

  const Vector root = degrees.cwiseSqrt();
  out.V.col(0) = root / root.norm();
  // Two passes of modified Gram-Schmidt keep the basis orthonormal to rounding.
  for (int pass = 0; pass < 2; ++pass) {
    for (Index i = 1; i < n; ++i) {
      for (Index k = 0; k < i; ++k) {
        out.V.col(i) -= out.V.col(k).dot(out.V.col(i)) * out.V.col(k);
      }
      out.V.col(i).normalize();
    }
  }
  for (Index i = 1; i < n; ++i) fix_sign(out.V.col(i));
  return out;
}

}  // namespace graphscat
