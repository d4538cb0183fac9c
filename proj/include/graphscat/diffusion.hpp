#pragma once

#include <functional>

#include "graphscat/graph.hpp"
#include "graphscat/spectral.hpp"
#include "graphscat/types.hpp"

namespace graphscat {

enum class WeightKind { Identity, DSqrt, DInvSqrt, Custom };

// Invertible M defining <x,y>_M = <Mx, My>.
class WeightMatrix {
 public:
  static constexpr double kMaxCondition = 1e12;

  static WeightMatrix identity(Index n);
  static WeightMatrix d_sqrt(const Vector& degrees);
  static WeightMatrix d_inv_sqrt(const Vector& degrees);
  // Throws SingularWeightMatrix when cond_2(M) exceeds kMaxCondition.
  static WeightMatrix custom(const Matrix& m);
  // Positive diagonal given by its entries; tagged custom.
  static WeightMatrix diagonal(const Vector& entries);

  WeightKind kind() const { return kind_; }
  Index size() const { return m_.rows(); }
  const Matrix& matrix() const { return m_; }
  const Matrix& inverse() const { return m_inv_; }
  bool is_diagonal() const { return diagonal_; }

 private:
  WeightMatrix(WeightKind kind, Matrix m, Matrix m_inv, bool diagonal)
      : kind_(kind), m_(std::move(m)), m_inv_(std::move(m_inv)), diagonal_(diagonal) {}

  WeightKind kind_;
  Matrix m_;
  Matrix m_inv_;
  bool diagonal_;
};

WeightMatrix make_weight(WeightKind kind, const Graph& graph);

// Everything derived from (G, g, M): T = V g(Omega) V^T and K = M^{-1} T M.
struct DiffusionSystem {
  Graph graph;
  SpectralDecomposition spectral;
  SpectralFunction g;
  Vector lambdas;  // g(omega_i), lambdas(0) == 1
  Matrix T;
  WeightMatrix M;
  Matrix K;
  Matrix U_basis;  // u_i = M^{-1} v_i, right eigenvectors of K
  Matrix W_basis;  // w_i = M^T v_i, left eigenvectors of K

  Index size() const { return graph.size(); }
};

DiffusionSystem build_diffusion(const Graph& graph, const SpectralDecomposition& spectral,
                                const SpectralFunction& g, const WeightMatrix& M);
// Convenience: Laplacian, eigensolve and build in one go.
DiffusionSystem build_diffusion(const Graph& graph, const SpectralFunction& g,
                                const WeightMatrix& M);
DiffusionSystem build_diffusion(const Graph& graph, const SpectralFunction& g, WeightKind kind);
// Same graph and spectrum, different M.
DiffusionSystem reweight(const DiffusionSystem& sys, const WeightMatrix& M);

double weighted_inner(const Vector& x, const Vector& y, const WeightMatrix& M);
double weighted_norm(const Vector& x, const WeightMatrix& M);
double spectral_norm(const Matrix& b);
// sigma_max(M B M^{-1}).
double operator_norm_weighted(const Matrix& b, const WeightMatrix& M);

enum class OperatorTarget { T, K };
enum class RootMode { None, Sqrt };

// V f(Lambda) V^T, conjugated into M^{-1}(.)M for target K. With RootMode::Sqrt
// the values f(lambda_i) go through a square root; values down to -clamp_tol
// are treated as zero, anything lower is a DomainError.
Matrix matrix_function(const DiffusionSystem& sys, const std::function<double(double)>& f,
                       OperatorTarget target, RootMode root = RootMode::None,
                       double clamp_tol = 1e-9);

// M^{-1} B M, done by scaling when M is diagonal.
Matrix conjugate_by_weight(const Matrix& b, const WeightMatrix& M);

}  // namespace graphscat
