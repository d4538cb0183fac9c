#include "graphscat/permutation.hpp"

#include <algorithm>
#include <numeric>

#include "graphscat/errors.hpp"

namespace graphscat {

Permutation::Permutation(std::vector<Index> image) : image_(std::move(image)) {
  std::vector<char> hit(image_.size(), 0);
  for (Index target : image_) {
    if (target < 0 || target >= size() || hit[static_cast<std::size_t>(target)]) {
      throw Error(ErrorCode::ShapeMismatch, "permutation image is not a bijection");
    }
    hit[static_cast<std::size_t>(target)] = 1;
  }
}

Permutation Permutation::identity(Index n) {
  std::vector<Index> image(static_cast<std::size_t>(n));
  std::iota(image.begin(), image.end(), Index{0});
  return Permutation(std::move(image));
}

bool Permutation::is_identity() const {
  for (Index i = 0; i < size(); ++i) {
    if ((*this)(i) != i) return false;
  }
  return true;
}

Permutation Permutation::inverse() const {
  std::vector<Index> inv(image_.size());
  for (Index i = 0; i < size(); ++i) inv[static_cast<std::size_t>((*this)(i))] = i;
  return Permutation(std::move(inv));
}

Matrix Permutation::matrix() const {
  Matrix p = Matrix::Zero(size(), size());
  for (Index i = 0; i < size(); ++i) p((*this)(i), i) = 1.0;
  return p;
}

Vector Permutation::apply(const Vector& x) const {
  if (x.size() != size()) throw Error(ErrorCode::DimensionMismatch, "permutation/vector size");
  Vector y(x.size());
  for (Index i = 0; i < size(); ++i) y((*this)(i)) = x(i);
  return y;
}

Matrix Permutation::conjugate(const Matrix& b) const {
  if (b.rows() != size() || b.cols() != size()) {
    throw Error(ErrorCode::DimensionMismatch, "permutation/matrix size");
  }
  Matrix out(b.rows(), b.cols());
  for (Index i = 0; i < size(); ++i) {
    for (Index k = 0; k < size(); ++k) out((*this)(i), (*this)(k)) = b(i, k);
  }
  return out;
}

Graph permute_graph(const Graph& graph, const Permutation& perm) {
  return Graph(perm.conjugate(graph.adjacency()));
}

void for_each_permutation(Index n, const std::function<void(const Permutation&)>& visit) {
  std::vector<Index> image(static_cast<std::size_t>(n));
  std::iota(image.begin(), image.end(), Index{0});
  do {
    visit(Permutation(image));
  } while (std::next_permutation(image.begin(), image.end()));
}

}  // namespace graphscat
