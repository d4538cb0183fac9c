#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "graphscat/diffusion.hpp"
#include "graphscat/scattering.hpp"
#include "graphscat/wavelets.hpp"

namespace graphscat {

struct HarnessTolerances {
  double partition = 1e-12;
  double isometry = 1e-9;  // relative
  double frame_bounds = 1e-9;
  double operators = 1e-9;
  double special = 1e-10;
  double slack = 1e-9;  // every inequality check
  double equivariance = 1e-10;
  double oracle = 1e-10;

  static HarnessTolerances zero() { return {0, 0, 0, 0, 0, 0, 0, 0}; }
};

struct TrialSpec {
  std::uint64_t seed = 1;
  int trials = 100;
  Index n_min = 3;
  Index n_max = 30;
  int J_min = 0;
  int J_max = 4;
  int L_min = 1;
  int L_max = 3;
  double edge_probability_floor = 0.4;
  double weight_min = 0.5;
  double weight_max = 1.5;
  std::vector<double> epsilons{1e-1, 1e-2, 1e-3};
  Index exhaustive_limit = 6;
  HarnessTolerances tol;
};

struct CheckResult {
  std::string id;
  std::string name;
  std::string anchor;
  int trials = 0;
  double max_violation = 0.0;
  double tolerance = 0.0;
  bool pass = true;
  std::string note;
};

struct Certificate {
  std::uint64_t seed = 0;
  int trials = 0;
  std::vector<CheckResult> checks;

  bool pass() const;
  const CheckResult* find(const std::string& id) const;
};

// Runs T1..T15. Exceptions inside a check become failures of that check.
Certificate run_suite(const TrialSpec& spec);

// Erdos-Renyi G(n, max(floor, 2 ln n / n)) with uniform weights, redrawn until connected.
Graph random_graph(std::mt19937_64& rng, Index n, double p_floor = 0.4, double w_min = 0.5,
                   double w_max = 1.5);
// w' = w (1 + eps u_e) with one u_e ~ U[-1,1] per edge taken from `jitter`.
Graph jitter_graph(const Graph& g, const Matrix& jitter, double eps);
Matrix random_jitter(std::mt19937_64& rng, Index n);
// Q diag(s) R with orthogonal Q, R and s in [0.5, 2].
Matrix random_well_conditioned(std::mt19937_64& rng, Index n);
Vector random_signal(std::mt19937_64& rng, Index n);

// Independent evaluation for tiny graphs: filters from plain matrix powers of K
// (poly) or a general eigendecomposition of K (tight), then every path recomputed
// from scratch.
ScatteringOutput oracle_small_scatter(const Graph& graph, const SpectralFunction& g,
                                      const WeightMatrix& M, int J, FrameKind kind, int max_layer,
                                      const Vector& x, const MuSpec& mu = {});

}  // namespace graphscat
