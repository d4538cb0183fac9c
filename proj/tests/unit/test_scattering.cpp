#include "support.hpp"

#include <cstdlib>
#include <numeric>
#include <random>

#include "graphscat/diffusion.hpp"
#include "graphscat/harness.hpp"
#include "graphscat/permutation.hpp"
#include "graphscat/scattering.hpp"
#include "graphscat/wavelets.hpp"

using namespace graphscat;
using namespace testing;

namespace {

WaveletFrame k2_poly() {
  return build_frame(build_diffusion(k2(), SpectralFunction::gstar(), WeightKind::Identity), 0, FrameKind::Poly);
}

PathIndex path(std::vector<int> e) { return PathIndex{std::move(e)}; }

}  // namespace

TEST_CASE("modulus") {
  CHECK(modulus(vec({-1, 2, 0})) == vec({1, 2, 0}));
  CHECK(modulus(vec({0.5, 3})) == vec({0.5, 3}));
}

TEST_CASE("path strings and ordering") {
  CHECK(path({}).to_string() == "[]");
  CHECK(path({1, 0, 2}).to_string() == "[1,0,2]");
  CHECK(PathIndex::parse("[1,0,2]") == path({1, 0, 2}));
  CHECK(PathIndex::parse(" [ 3 ] ") == path({3}));
  CHECK(PathIndex::parse("[]") == path({}));
  CHECK_CODE(PathIndex::parse("[1,"), ErrorCode::ParseError);
  CHECK_CODE(PathIndex::parse("1,2"), ErrorCode::ParseError);
  CHECK_CODE(PathIndex::parse("[-1]"), ErrorCode::ParseError);
  CHECK(path({9}) < path({0, 0}));
  CHECK(path({0, 1}) < path({1, 0}));
  const auto ps = paths_of_length(2, 2);
  CHECK(ps.size() == 9);
  CHECK(std::is_sorted(ps.begin(), ps.end()));
  CHECK(paths_of_length(3, 0).size() == 1);
  CHECK(scatter_path_count(3, 2) == 1 + 4 + 16 + 64);
}

TEST_CASE("K2 golden values") {
  const WaveletFrame w = k2_poly();
  const Vector x = vec({1, 0});
  CHECK(propagate(w, path({}), x) == x);
  CHECK(max_abs(propagate(w, path({0}), x) - vec({0.5, 0.5})) < 1e-15);
  CHECK(max_abs(propagate(w, path({0, 0}), x)) < 1e-15);
  CHECK(max_abs(windowed_coefficient(w, path({}), x) - vec({0.5, 0.5})) < 1e-15);
  CHECK(max_abs(windowed_coefficient(w, path({0}), x) - vec({0.5, 0.5})) < 1e-15);
  CHECK(max_abs(windowed_coefficient(w, path({0, 0}), x)) < 1e-15);
  CHECK_CODE(propagate(w, path({1}), x), ErrorCode::InvalidPathEntry);
  CHECK_CODE(propagate(w, path({0}), vec({1, 0, 0})), ErrorCode::DimensionMismatch);

  const DiffusionSystem& s = *w.sys;
  const Vector ones = resolve_mu(s, {MuChoice::OnesDual, {}});
  CHECK(nonwindowed_coefficient(w, path({0}), x, ones) == doctest::Approx(1.0));
  const Vector u0 = resolve_mu(s, {});
  CHECK(nonwindowed_coefficient(w, path({}), x, u0) == doctest::Approx(1 / std::sqrt(2.0)));
  CHECK(nonwindowed_coefficient(w, path({0, 0}), x, Vector::Zero(2)) == 0.0);
  CHECK_CODE(nonwindowed_coefficient(w, path({}), x, Vector::Zero(3)), ErrorCode::DimensionMismatch);

  ScatteringConfig cfg;
  cfg.max_layer = 2;
  const ScatteringOutput out = scatter(w, cfg, x);
  CHECK(out.windowed.size() == 3);
  CHECK(max_abs(out.windowed.at(path({})) - vec({0.5, 0.5})) < 1e-15);
  CHECK(max_abs(out.windowed.at(path({0, 0}))) < 1e-15);
  const ScatteringOutput zero = scatter(w, cfg, Vector::Zero(2));
  for (const auto& [p, v] : zero.windowed) CHECK(v.isZero());
}

TEST_CASE("ones_dual weighting gives the l1 norm") {
  std::mt19937_64 rng(3);
  const Graph g = random_graph(rng, 6);
  const WeightMatrix M = WeightMatrix::custom(random_well_conditioned(rng, 6));
  const DiffusionSystem s = build_diffusion(g, SpectralFunction::gstar(), M);
  const Vector mu = resolve_mu(s, {MuChoice::OnesDual, {}});
  const Vector y = random_signal(rng, 6).cwiseAbs();
  CHECK(weighted_inner(mu, y, M) == doctest::Approx(y.sum()).epsilon(1e-12));
  CHECK(max_abs(resolve_mu(s, {}) - s.U_basis.col(0)) == 0.0);
  CHECK_CODE(resolve_mu(s, {MuChoice::Custom, Vector::Zero(2)}), ErrorCode::DimensionMismatch);
}

TEST_CASE("modulus is not nonexpansive under a dense weight") {
  Matrix m(2, 2);
  m << 1, 1, 0, 1;
  const WeightMatrix M = WeightMatrix::custom(m);
  const Vector x = vec({1, -1});
  CHECK(weighted_norm(modulus(x), M) == doctest::Approx(std::sqrt(5.0)));
  CHECK(weighted_norm(x, M) == doctest::Approx(1.0));
}

TEST_CASE("layer window and budget") {
  const WaveletFrame w = k2_poly();
  ScatteringConfig cfg;
  cfg.min_layer = 1;
  cfg.max_layer = 2;
  const ScatteringOutput out = scatter(w, cfg, vec({1, 0}));
  CHECK(out.windowed.count(path({})) == 0);
  CHECK(out.windowed.count(path({0})) == 1);
  CHECK(out.layer_energy.size() == 4);
  CHECK(out.windowed_energy.size() == 3);
  cfg.min_layer = 3;
  CHECK_CODE(scatter(w, cfg, vec({1, 0})), ErrorCode::DomainError);

  std::mt19937_64 rng(9);
  const Graph g = random_graph(rng, 5);
  const WaveletFrame big = build_frame(build_diffusion(g, SpectralFunction::gstar(), WeightKind::Identity), 4,
                                       FrameKind::Poly);
  ScatteringConfig deep;
  deep.max_layer = 6;
  deep.path_budget = 10000;
  CHECK_CODE(scatter(big, deep, random_signal(rng, 5)), ErrorCode::PathBudgetExceeded);
}

TEST_CASE("thread count does not change the output") {
  std::mt19937_64 rng(19);
  const Graph g = random_graph(rng, 12);
  const WaveletFrame w = build_frame(build_diffusion(g, SpectralFunction::gstar(), WeightKind::DSqrt), 3,
                                     FrameKind::Tight);
  const Vector x = random_signal(rng, 12);
  ScatteringConfig cfg;
  cfg.max_layer = 3;
  cfg.threads = 1;
  const ScatteringOutput a = scatter(w, cfg, x);
  cfg.threads = 4;
  const ScatteringOutput b = scatter(w, cfg, x);
  CHECK(a.windowed == b.windowed);
  CHECK(a.nonwindowed == b.nonwindowed);
  CHECK(a.layer_energy == b.layer_energy);
  CHECK(resolve_thread_count(3) == 3);
}

TEST_CASE("memoized evaluation matches the naive oracle") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 40; ++trial) {
    Matrix a = Matrix::Zero(3, 3);
    a(0, 1) = a(1, 0) = 0.5 + (trial % 7) * 0.2;
    a(1, 2) = a(2, 1) = 1.0;
    if (trial % 2) a(0, 2) = a(2, 0) = 0.8;
    const Graph g(a);
    const WeightMatrix M = trial % 3 == 0 ? WeightMatrix::d_inv_sqrt(g.degrees())
                                          : WeightMatrix::custom(random_well_conditioned(rng, 3));
    const int J = trial % 2;
    const int L = trial % 3;
    const FrameKind kind = trial % 4 < 2 ? FrameKind::Tight : FrameKind::Poly;
    const MuSpec mu{trial % 5 == 0 ? MuChoice::OnesDual : MuChoice::U0, {}};
    const Vector x = random_signal(rng, 3);
    const WaveletFrame w = build_frame(build_diffusion(g, SpectralFunction::gstar(), M), J, kind);
    ScatteringConfig cfg;
    cfg.max_layer = L;
    cfg.mu = mu;
    const ScatteringOutput fast = scatter(w, cfg, x);
    const ScatteringOutput slow = oracle_small_scatter(g, SpectralFunction::gstar(), M, J, kind, L, x, mu);
    REQUIRE(fast.windowed.size() == slow.windowed.size());
    for (const auto& [p, v] : fast.windowed) {
      CHECK(max_abs(v - slow.windowed.at(p)) <= 1e-10);
      CHECK(std::abs(fast.nonwindowed.at(p) - slow.nonwindowed.at(p)) <= 1e-10);
    }
  }
}

TEST_CASE("scattering properties with positive diagonal weights") {
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> ud(0.5, 2.0);
  for (int trial = 0; trial < 30; ++trial) {
    const Graph g = random_graph(rng, 3 + trial % 12);
    const Index n = g.size();
    Vector m(n);
    for (Index i = 0; i < n; ++i) m(i) = ud(rng);
    const WeightMatrix M = WeightMatrix::diagonal(m);
    const auto s = std::make_shared<const DiffusionSystem>(build_diffusion(g, SpectralFunction::gstar(), M));
    const int J = trial % 4;
    const int L = 1 + trial % 3;
    const FrameKind kind = trial % 2 ? FrameKind::Tight : FrameKind::Poly;
    const WaveletFrame w = build_frame(s, J, kind);
    ScatteringConfig cfg;
    cfg.max_layer = L;
    const Vector x = random_signal(rng, n);
    const Vector y = random_signal(rng, n);
    const ScatteringOutput sx = scatter(w, cfg, x);
    const ScatteringOutput sy = scatter(w, cfg, y);

    double dist = 0.0;
    for (const auto& [p, v] : sx.windowed) dist += std::pow(weighted_norm(v - sy.windowed.at(p), M), 2);
    CHECK(std::sqrt(dist) <= (1 + 1e-9) * weighted_norm(x - y, M));

    const double r = g.min_degree() / g.total_degree();
    const auto& E = sx.layer_energy;
    const double nx = std::pow(weighted_norm(x, M), 2);
    CHECK(E[0] == doctest::Approx(nx));
    for (std::size_t k = 1; k + 1 < E.size(); ++k) {
      CHECK(E[k + 1] <= (1 - r) * E[k] + 1e-9);
      CHECK(E[k + 1] <= std::pow(1 - r, static_cast<double>(k)) * nx + 1e-9);
      CHECK(E[k] <= nx + 1e-9);
    }
    for (int k = 0; k <= L; ++k) {
      const auto uk = static_cast<std::size_t>(k);
      if (kind == FrameKind::Tight) {
        CHECK(std::abs(E[uk] - E[uk + 1] - sx.windowed_energy[uk]) <= 1e-9 * (1 + nx));
      } else {
        CHECK(E[uk] >= E[uk + 1] + sx.windowed_energy[uk] - 1e-9);
      }
    }
    if (kind == FrameKind::Tight) {
      CHECK(sx.residual <= std::pow(1 - r, L) * nx + 1e-9);
      CHECK(sx.residual >= -1e-9);
    }
  }
}

TEST_CASE("permutation equivariance and invariance") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 15; ++trial) {
    const Graph g = random_graph(rng, 4 + trial);
    const Index n = g.size();
    std::vector<Index> img(static_cast<std::size_t>(n));
    std::iota(img.begin(), img.end(), 0);
    std::shuffle(img.begin(), img.end(), rng);
    const Permutation p(img);
    const Matrix m = random_well_conditioned(rng, n);
    const auto s = std::make_shared<const DiffusionSystem>(
        build_diffusion(g, SpectralFunction::gstar(), WeightMatrix::custom(m)));
    const auto t = std::make_shared<const DiffusionSystem>(
        build_diffusion(permute_graph(g, p), SpectralFunction::gstar(), WeightMatrix::custom(p.conjugate(m))));
    const FrameKind kind = trial % 2 ? FrameKind::Tight : FrameKind::Poly;
    const WaveletFrame a = build_frame(s, 2, kind);
    const WaveletFrame b = build_frame(t, 2, kind);
    ScatteringConfig cfg;
    cfg.max_layer = 2;
    cfg.mu = {MuChoice::Custom, random_signal(rng, n)};
    const Vector x = random_signal(rng, n);
    const ScatteringOutput sa = scatter(a, cfg, x);
    ScatteringConfig cfg_b = cfg;
    cfg_b.mu.custom = p.apply(cfg.mu.custom);
    const ScatteringOutput sb = scatter(b, cfg_b, p.apply(x));
    for (const auto& [path, v] : sa.windowed) {
      CHECK(max_abs(sb.windowed.at(path) - p.apply(v)) <= 1e-10);
      CHECK(std::abs(sb.nonwindowed.at(path) - sa.nonwindowed.at(path)) <= 1e-10);
      CHECK(max_abs(propagate(b, path, p.apply(x)) - p.apply(propagate(a, path, x))) <= 1e-10);
    }
  }
}
