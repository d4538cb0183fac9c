#include "support.hpp"

#include <random>

#include "graphscat/diffusion.hpp"
#include "graphscat/harness.hpp"
#include "graphscat/io.hpp"

using namespace graphscat;
using namespace testing;

TEST_CASE("empty trial set passes vacuously") {
  TrialSpec spec;
  spec.trials = 0;
  const Certificate c = run_suite(spec);
  CHECK(c.checks.empty());
  CHECK(c.pass());
}

TEST_CASE("default suite passes and is reproducible") {
  TrialSpec spec;
  const Certificate a = run_suite(spec);
  const Certificate b = run_suite(spec);
  REQUIRE(a.checks.size() == 15);
  for (const auto& k : a.checks) {
    CHECK_MESSAGE(k.pass, k.id, " ", k.max_violation);
    CHECK(k.pass == (k.max_violation <= k.tolerance));
    CHECK(k.trials > 0);
  }
  CHECK(serialize(a, Format::Json) == serialize(b, Format::Json));
  CHECK(a.find("T7") != nullptr);
  CHECK(a.find("T99") == nullptr);
}

TEST_CASE("different seeds give different draws") {
  TrialSpec spec;
  spec.trials = 10;
  spec.seed = 5;
  const Certificate a = run_suite(spec);
  spec.seed = 6;
  const Certificate b = run_suite(spec);
  CHECK(a.pass());
  CHECK(b.pass());
  CHECK(serialize(a, Format::Json) != serialize(b, Format::Json));
}

TEST_CASE("zero tolerance makes the checks fail on rounding noise") {
  TrialSpec spec;
  spec.trials = 10;
  spec.tol = HarnessTolerances::zero();
  const Certificate c = run_suite(spec);
  CHECK_FALSE(c.pass());
  int failing = 0;
  for (const auto& k : c.checks) failing += k.pass ? 0 : 1;
  CHECK(failing >= 5);
  for (const char* id : {"T2", "T4", "T9", "T15"}) CHECK_FALSE(c.find(id)->pass);
}

TEST_CASE("generators") {
  std::mt19937_64 rng(1);
  for (Index n = 3; n <= 30; ++n) {
    const Graph g = random_graph(rng, n, 0.0);
    CHECK(g.size() == n);
    CHECK(is_connected(g.adjacency()));
    CHECK(g.adjacency().minCoeff() >= 0.0);
    CHECK(g.adjacency().maxCoeff() <= 1.5);
    const Graph h = jitter_graph(g, random_jitter(rng, n), 0.5);
    CHECK((h.adjacency().array() > 0) .cast<int>().sum() == (g.adjacency().array() > 0).cast<int>().sum());
    const Matrix m = random_well_conditioned(rng, n);
    Eigen::JacobiSVD<Matrix> svd(m);
    CHECK(svd.singularValues().maxCoeff() <= 2.0 + 1e-12);
    CHECK(svd.singularValues().minCoeff() >= 0.5 - 1e-12);
  }
  std::mt19937_64 r1(9);
  std::mt19937_64 r2(9);
  CHECK(random_signal(r1, 5) == random_signal(r2, 5));
}

TEST_CASE("oracle on trivial inputs") {
  const auto zero = oracle_small_scatter(k2(), SpectralFunction::gstar(), WeightMatrix::identity(2), 1,
                                         FrameKind::Tight, 2, Vector::Zero(2));
  for (const auto& [p, v] : zero.windowed) CHECK(v.isZero());
  const auto g = oracle_small_scatter(k2(), SpectralFunction::gstar(), WeightMatrix::identity(2), 0,
                                      FrameKind::Poly, 2, vec({1, 0}));
  CHECK(max_abs(g.windowed.at(PathIndex{{}}) - vec({0.5, 0.5})) < 1e-15);
  CHECK(max_abs(g.windowed.at(PathIndex{{0}}) - vec({0.5, 0.5})) < 1e-15);
  CHECK(max_abs(g.windowed.at(PathIndex{{0, 0}})) < 1e-15);

  // On a regular graph D is a multiple of I, so every M below gives the same K.
  const Graph t = k3();
  const Vector x = vec({0.3, -1.0, 0.6});
  const auto a = oracle_small_scatter(t, SpectralFunction::gstar(), WeightMatrix::identity(3), 1, FrameKind::Tight, 2, x);
  for (const WeightMatrix& M : {WeightMatrix::d_sqrt(t.degrees()), WeightMatrix::d_inv_sqrt(t.degrees())}) {
    const auto b = oracle_small_scatter(t, SpectralFunction::gstar(), M, 1, FrameKind::Tight, 2, x);
    for (const auto& [p, v] : a.windowed) CHECK(max_abs(b.windowed.at(p) - v) < 1e-14);
  }
}
