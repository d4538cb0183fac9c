#pragma once

#include <optional>
#include <span>
#include <vector>

#include "graphscat/types.hpp"

namespace graphscat {

struct Edge {
  Index u = 0;
  Index v = 0;
  double weight = 1.0;
};

// Weighted undirected connected graph stored as a dense symmetric adjacency.
// Self-loops are allowed; a loop of weight w adds w to A(i,i) and to d(i).
class Graph {
 public:
  // Throws EmptyGraph, NonpositiveWeight (negative or non-finite entries),
  // DimensionMismatch (non-square / asymmetric) or DisconnectedGraph.
  explicit Graph(Matrix adjacency);

  Index size() const { return adjacency_.rows(); }
  const Matrix& adjacency() const { return adjacency_; }
  const Vector& degrees() const { return degrees_; }
  double min_degree() const { return degrees_.minCoeff(); }
  double max_degree() const { return degrees_.maxCoeff(); }
  double total_degree() const { return degrees_.sum(); }
  bool has_self_loops() const;

 private:
  Matrix adjacency_;
  Vector degrees_;
};

struct EdgeListOptions {
  int index_base = 0;                 // 0- or 1-based vertex ids
  std::optional<Index> vertex_count;  // pads with vertices that no edge mentions
};

// Builds the symmetric adjacency from (u, v, w) records. Repeated edges add up.
Graph load_graph(std::span<const Edge> edges, const EdgeListOptions& options = {});

// BFS over the nonzero pattern.
bool is_connected(const Matrix& adjacency);

// N = I - D^{-1/2} A D^{-1/2}.
Matrix normalized_laplacian(const Graph& graph);

}  // namespace graphscat
