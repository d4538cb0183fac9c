#pragma once

#include <doctest.h>

#include <cmath>
#include <vector>

#include "graphscat/errors.hpp"
#include "graphscat/graph.hpp"
#include "graphscat/types.hpp"

#define CHECK_CODE(expr, expected)                            \
  do {                                                        \
    bool thrown_ = false;                                     \
    try {                                                     \
      (void)(expr);                                           \
    } catch (const graphscat::Error& e_) {                    \
      thrown_ = true;                                         \
      CHECK_MESSAGE(e_.code() == (expected), e_.what());      \
    }                                                         \
    CHECK_MESSAGE(thrown_, "expected an exception: " #expr);  \
  } while (0)

namespace testing {

using graphscat::Edge;
using graphscat::Graph;
using graphscat::Index;
using graphscat::Matrix;
using graphscat::Vector;

inline Graph k2() {
  const Edge e[] = {{0, 1, 1.0}};
  return graphscat::load_graph(e);
}

inline Graph p3() {
  const Edge e[] = {{0, 1, 1.0}, {1, 2, 1.0}};
  return graphscat::load_graph(e);
}

inline Graph k3() {
  const Edge e[] = {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}};
  return graphscat::load_graph(e);
}

inline Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

inline double max_abs(const Matrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

}  // namespace testing
