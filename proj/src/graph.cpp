#include "graphscat/graph.hpp"

#include <cmath>
#include <queue>
#include <string>

#include "graphscat/errors.hpp"

namespace graphscat {

Graph::Graph(Matrix adjacency) : adjacency_(std::move(adjacency)) {
  if (adjacency_.rows() == 0) throw Error(ErrorCode::EmptyGraph, "graph has no vertices");
  if (adjacency_.rows() != adjacency_.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "adjacency must be square");
  }
  const Index n = adjacency_.rows();
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      const double a = adjacency_(i, j);
      if (!std::isfinite(a) || a < 0.0) {
        throw Error(ErrorCode::NonpositiveWeight,
                    "adjacency entry (" + std::to_string(i) + "," + std::to_string(j) +
                        ") is negative or not finite");
      }
      if (a != adjacency_(j, i)) {
        throw Error(ErrorCode::DimensionMismatch, "adjacency is not symmetric");
      }
    }
  }
  degrees_ = adjacency_.rowwise().sum();
  if (!is_connected(adjacency_)) {
    throw Error(ErrorCode::DisconnectedGraph, "graph is not connected");
  }
  // Connected with n >= 2 already forces positive degrees; a lone vertex needs a loop.
  if (degrees_.minCoeff() <= 0.0) {
    throw Error(ErrorCode::DisconnectedGraph, "vertex with zero degree");
  }
}

bool Graph::has_self_loops() const { return (adjacency_.diagonal().array() != 0.0).any(); }

bool is_connected(const Matrix& adjacency) {
  const Index n = adjacency.rows();
  if (n == 0) return false;
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::queue<Index> frontier;
  frontier.push(0);
  seen[0] = 1;
  Index reached = 1;
  while (!frontier.empty()) {
    const Index i = frontier.front();
    frontier.pop();
    for (Index j = 0; j < n; ++j) {
      if (!seen[static_cast<std::size_t>(j)] && adjacency(i, j) != 0.0) {
        seen[static_cast<std::size_t>(j)] = 1;
        ++reached;
        frontier.push(j);
      }
    }
  }
  return reached == n;
}

Graph load_graph(std::span<const Edge> edges, const EdgeListOptions& options) {
  Index n = options.vertex_count.value_or(0);
  for (const Edge& e : edges) {
    const Index u = e.u - options.index_base;
    const Index v = e.v - options.index_base;
    if (u < 0 || v < 0) {
      throw Error(ErrorCode::ParseError, "vertex id below index base " +
                                             std::to_string(options.index_base));
    }
    n = std::max({n, u + 1, v + 1});
  }
  if (n == 0) throw Error(ErrorCode::EmptyGraph, "edge list is empty");

  Matrix adjacency = Matrix::Zero(n, n);
  for (const Edge& e : edges) {
    if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
      throw Error(ErrorCode::NonpositiveWeight,
                  "edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                      ") has weight " + std::to_string(e.weight));
    }
    const Index u = e.u - options.index_base;
    const Index v = e.v - options.index_base;
    adjacency(u, v) += e.weight;
    if (u != v) adjacency(v, u) += e.weight;
  }
  return Graph(std::move(adjacency));
}

Matrix normalized_laplacian(const Graph& graph) {
  const Vector inv_sqrt = graph.degrees().array().rsqrt();
  Matrix n = -(inv_sqrt.asDiagonal() * graph.adjacency() * inv_sqrt.asDiagonal());
  n.diagonal().array() += 1.0;
  return 0.5 * (n + n.transpose());
}

}  // namespace graphscat
