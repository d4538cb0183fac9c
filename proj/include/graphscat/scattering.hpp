#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "graphscat/types.hpp"
#include "graphscat/wavelets.hpp"

namespace graphscat {

// Scattering path (j_1, ..., j_m); the empty path is layer 0.
struct PathIndex {
  std::vector<int> entries;

  std::size_t length() const { return entries.size(); }
  std::string to_string() const;  // "[1,0,2]", "[]"
  static PathIndex parse(const std::string& text);

  friend bool operator==(const PathIndex&, const PathIndex&) = default;
  // Shorter paths first, then lexicographic.
  friend bool operator<(const PathIndex& a, const PathIndex& b) {
    if (a.entries.size() != b.entries.size()) return a.entries.size() < b.entries.size();
    return a.entries < b.entries;
  }
};

// Every path with entries in [0,J] of length exactly m, canonical order.
std::vector<PathIndex> paths_of_length(int J, int m);

enum class MuChoice { U0, OnesDual, Custom };

struct MuSpec {
  MuChoice choice = MuChoice::U0;
  Vector custom;  // used for MuChoice::Custom
};

std::string to_string(MuChoice choice);

// u_0 = M^{-1} v_0, or (M^T M)^{-1} 1 which makes <mu, y>_M the plain sum of y.
Vector resolve_mu(const DiffusionSystem& sys, const MuSpec& mu);

struct ScatteringConfig {
  int min_layer = 0;
  int max_layer = 2;
  MuSpec mu;
  std::size_t path_budget = 2'000'000;
  int threads = 0;  // 0: SCATTER_THREADS or 1
};

struct ScatteringOutput {
  std::map<PathIndex, Vector> windowed;
  std::map<PathIndex, double> nonwindowed;
  // layer_energy[m] = sum over |j| = m of |U[j]x|_M^2, for m = 0..L+1.
  std::vector<double> layer_energy;
  // windowed_energy[m] = sum over |j| = m of |S[j]x|_M^2, for m = 0..L.
  std::vector<double> windowed_energy;
  // |x|_M^2 minus the windowed energy of layers 0..L.
  double residual = 0.0;
  int J = 0;
  FrameKind kind = FrameKind::Tight;
  int min_layer = 0;
  int max_layer = 0;
  MuChoice mu = MuChoice::U0;
  Index n = 0;
};

Vector modulus(const Vector& x);
// U[j]x: Psi_{j_1} first, modulus after each filter.
Vector propagate(const WaveletFrame& frame, const PathIndex& path, const Vector& x);
Vector windowed_coefficient(const WaveletFrame& frame, const PathIndex& path, const Vector& x);
double nonwindowed_coefficient(const WaveletFrame& frame, const PathIndex& path, const Vector& x,
                               const Vector& mu);

// Number of U vectors scatter() evaluates for the given depth.
std::size_t scatter_path_count(int J, int max_layer);

// Layer-by-layer evaluation reusing each parent's U. Throws PathBudgetExceeded.
ScatteringOutput scatter(const WaveletFrame& frame, const ScatteringConfig& config, const Vector& x);

int resolve_thread_count(int requested);

}  // namespace graphscat
