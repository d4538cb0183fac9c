#include "graphscat/diffusion.hpp"

#include <cmath>

#include <Eigen/SVD>

#include "graphscat/errors.hpp"

namespace graphscat {

WeightMatrix WeightMatrix::identity(Index n) {
  return WeightMatrix(WeightKind::Identity, Matrix::Identity(n, n), Matrix::Identity(n, n), true);
}

WeightMatrix WeightMatrix::d_sqrt(const Vector& degrees) {
  const Vector s = degrees.cwiseSqrt();
  return WeightMatrix(WeightKind::DSqrt, s.asDiagonal(), s.cwiseInverse().asDiagonal(), true);
}

WeightMatrix WeightMatrix::d_inv_sqrt(const Vector& degrees) {
  const Vector s = degrees.cwiseSqrt();
  return WeightMatrix(WeightKind::DInvSqrt, s.cwiseInverse().asDiagonal(), s.asDiagonal(), true);
}

WeightMatrix WeightMatrix::diagonal(const Vector& entries) {
  if ((entries.array() <= 0.0).any() || !entries.allFinite()) {
    throw Error(ErrorCode::SingularWeightMatrix, "diagonal weight must be positive");
  }
  const double cond = entries.maxCoeff() / entries.minCoeff();
  if (cond > kMaxCondition) {
    throw Error(ErrorCode::SingularWeightMatrix, "condition number " + std::to_string(cond));
  }
  return WeightMatrix(WeightKind::Custom, entries.asDiagonal(), entries.cwiseInverse().asDiagonal(),
                      true);
}

WeightMatrix WeightMatrix::custom(const Matrix& m) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "weight matrix must be square");
  }
  if (!m.allFinite()) throw Error(ErrorCode::SingularWeightMatrix, "weight matrix not finite");
  Eigen::JacobiSVD<Matrix> svd(m);
  const Vector& s = svd.singularValues();
  const double smin = s(s.size() - 1);
  if (!(smin > 0.0) || s(0) / smin > kMaxCondition) {
    throw Error(ErrorCode::SingularWeightMatrix,
                "condition number " + std::to_string(smin > 0.0 ? s(0) / smin : INFINITY));
  }
  const bool diag = m.isDiagonal(0.0);
  if (diag && (m.diagonal().array() > 0.0).all()) return diagonal(m.diagonal());
  return WeightMatrix(WeightKind::Custom, m, m.inverse(), diag);
}

WeightMatrix make_weight(WeightKind kind, const Graph& graph) {
  switch (kind) {
    case WeightKind::Identity: return WeightMatrix::identity(graph.size());
    case WeightKind::DSqrt: return WeightMatrix::d_sqrt(graph.degrees());
    case WeightKind::DInvSqrt: return WeightMatrix::d_inv_sqrt(graph.degrees());
    case WeightKind::Custom: break;
  }
  throw Error(ErrorCode::DomainError, "custom weight needs an explicit matrix");
}

Matrix conjugate_by_weight(const Matrix& b, const WeightMatrix& M) {
  if (M.kind() == WeightKind::Identity) return b;
  if (M.is_diagonal()) {
    const Vector m = M.matrix().diagonal();
    return m.cwiseInverse().asDiagonal() * b * m.asDiagonal();
  }
  return M.inverse() * b * M.matrix();
}

DiffusionSystem build_diffusion(const Graph& graph, const SpectralDecomposition& spectral,
                                const SpectralFunction& g, const WeightMatrix& M) {
  const Index n = graph.size();
  if (spectral.omegas.size() != n || M.size() != n) {
    throw Error(ErrorCode::DimensionMismatch, "graph, spectrum and weight sizes disagree");
  }
  Vector lambdas(n);
  for (Index i = 0; i < n; ++i) lambdas(i) = g(spectral.omegas(i));
  lambdas(0) = 1.0;
  if (!lambdas.allFinite() || (lambdas.array() < 0.0).any() || (lambdas.array() > 1.0).any()) {
    throw Error(ErrorCode::DomainError, "g maps the spectrum outside [0,1]");
  }
  const Matrix& V = spectral.V;
  Matrix T = V * lambdas.asDiagonal() * V.transpose();
  T = 0.5 * (T + T.transpose());
  Matrix K = conjugate_by_weight(T, M);
  Matrix U = M.inverse() * V;
  Matrix W = M.matrix().transpose() * V;
  return DiffusionSystem{graph, spectral, g, std::move(lambdas), std::move(T), M,
                         std::move(K), std::move(U), std::move(W)};
}

DiffusionSystem build_diffusion(const Graph& graph, const SpectralFunction& g,
                                const WeightMatrix& M) {
  return build_diffusion(graph, spectral_decompose(normalized_laplacian(graph), graph.degrees()),
                         g, M);
}

DiffusionSystem build_diffusion(const Graph& graph, const SpectralFunction& g, WeightKind kind) {
  return build_diffusion(graph, g, make_weight(kind, graph));
}

DiffusionSystem reweight(const DiffusionSystem& sys, const WeightMatrix& M) {
  if (M.size() != sys.size()) throw Error(ErrorCode::DimensionMismatch, "weight size");
  DiffusionSystem out = sys;
  out.M = M;
  out.K = conjugate_by_weight(sys.T, M);
  out.U_basis = M.inverse() * sys.spectral.V;
  out.W_basis = M.matrix().transpose() * sys.spectral.V;
  return out;
}

double weighted_inner(const Vector& x, const Vector& y, const WeightMatrix& M) {
  if (x.size() != M.size() || y.size() != M.size()) {
    throw Error(ErrorCode::DimensionMismatch, "vector length does not match weight size");
  }
  if (M.is_diagonal()) {
    const Vector m2 = M.matrix().diagonal().cwiseAbs2();
    return (x.array() * m2.array() * y.array()).sum();
  }
  return (M.matrix() * x).dot(M.matrix() * y);
}

double weighted_norm(const Vector& x, const WeightMatrix& M) {
  if (x.size() != M.size()) {
    throw Error(ErrorCode::DimensionMismatch, "vector length does not match weight size");
  }
  if (M.is_diagonal()) return x.cwiseProduct(M.matrix().diagonal()).norm();
  return (M.matrix() * x).norm();
}

double spectral_norm(const Matrix& b) {
  if (b.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(b);
  return svd.singularValues()(0);
}

double operator_norm_weighted(const Matrix& b, const WeightMatrix& M) {
  if (b.rows() != M.size() || b.cols() != M.size()) {
    throw Error(ErrorCode::DimensionMismatch, "operator size does not match weight size");
  }
  if (M.is_diagonal()) {
    const Vector m = M.matrix().diagonal();
    return spectral_norm(m.asDiagonal() * b * m.cwiseInverse().asDiagonal());
  }
  return spectral_norm(M.matrix() * b * M.inverse());
}

Matrix matrix_function(const DiffusionSystem& sys, const std::function<double(double)>& f,
                       OperatorTarget target, RootMode root, double clamp_tol) {
  const Index n = sys.size();
  Vector values(n);
  for (Index i = 0; i < n; ++i) {
    double v = f(sys.lambdas(i));
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::DomainError, "filter not finite at lambda " +
                                              std::to_string(sys.lambdas(i)));
    }
    if (root == RootMode::Sqrt) {
      if (v < -clamp_tol) {
        throw Error(ErrorCode::DomainError, "square root of " + std::to_string(v));
      }
      v = std::sqrt(std::max(v, 0.0));
    }
    values(i) = v;
  }
  const Matrix& V = sys.spectral.V;
  Matrix out = V * values.asDiagonal() * V.transpose();
  out = 0.5 * (out + out.transpose());
  if (target == OperatorTarget::K) out = conjugate_by_weight(out, sys.M);
  return out;
}

}  // namespace graphscat
