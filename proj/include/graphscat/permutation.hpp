#pragma once

#include <functional>
#include <vector>

#include "graphscat/graph.hpp"
#include "graphscat/types.hpp"

namespace graphscat {

// Vertex relabelling i -> image[i]. As a matrix, Pi(image[i], i) = 1, so
// (Pi x)[image[i]] = x[i] and Pi B Pi^T moves entry (i,k) to (image[i], image[k]).
class Permutation {
 public:
  explicit Permutation(std::vector<Index> image);
  static Permutation identity(Index n);

  Index size() const { return static_cast<Index>(image_.size()); }
  Index operator()(Index i) const { return image_[static_cast<std::size_t>(i)]; }
  const std::vector<Index>& image() const { return image_; }
  bool is_identity() const;

  Permutation inverse() const;
  Matrix matrix() const;
  Vector apply(const Vector& x) const;
  Matrix conjugate(const Matrix& b) const;  // Pi B Pi^T

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  std::vector<Index> image_;
};

// The graph Pi(G) with adjacency Pi A Pi^T.
Graph permute_graph(const Graph& graph, const Permutation& perm);

// Visits all n! permutations in lexicographic order of the image vector.
void for_each_permutation(Index n, const std::function<void(const Permutation&)>& visit);

}  // namespace graphscat
