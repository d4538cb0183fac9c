#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "graphscat/types.hpp"

namespace graphscat {

enum class SpectralFunctionKind { GStar, Table, Expression };

// Strictly decreasing map g: [0,2] -> [0,1] with g(0) = 1 and g(2) = 0.
class SpectralFunction {
 public:
  // g(t) = 1 - t/2, which turns T into the lazy random walk.
  static SpectralFunction gstar();
  // Piecewise-linear through (omega, value) knots; knots must span [0,2].
  static SpectralFunction table(std::vector<std::pair<double, double>> knots);
  static SpectralFunction expression(std::string name, std::function<double(double)> fn);

  double operator()(double omega) const { return fn_(omega); }
  SpectralFunctionKind kind() const { return kind_; }
  const std::string& name() const { return name_; }

  // Sample-grid check of the defining properties; throws DomainError.
  void validate(int samples = 2001) const;

 private:
  SpectralFunction(SpectralFunctionKind kind, std::string name, std::function<double(double)> fn)
      : kind_(kind), name_(std::move(name)), fn_(std::move(fn)) {}

  SpectralFunctionKind kind_;
  std::string name_;
  std::function<double(double)> fn_;
};

struct SpectralTolerances {
  double gap_tol = 1e-10;
  double clamp_tol = 1e-9;
  // Eigenvalues this close to 2 are snapped onto it. Bipartite graphs have
  // omega = 2 exactly, and the tight filters take square roots at g(2) = 0.
  double top_snap = 1e-11;
};

struct SpectralDecomposition {
  Vector omegas;  // ascending, omegas(0) == 0
  Matrix V;       // orthonormal columns, V.col(0) = d^{1/2} / |d^{1/2}|
};

// Dense symmetric eigensolve of N with the conventions used everywhere else:
// omega_0 pinned to 0 with the analytic lead vector, the remaining columns
// re-orthogonalized against it, and each of them signed so that its largest
// entry in magnitude (lowest index on ties) is positive.
SpectralDecomposition spectral_decompose(const Matrix& laplacian, const Vector& degrees,
                                         const SpectralTolerances& tol = {});

}  // namespace graphscat
