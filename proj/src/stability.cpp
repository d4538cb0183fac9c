#include "graphscat/stability.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "graphscat/errors.hpp"

namespace graphscat {

GraphPair make_pair(std::shared_ptr<const DiffusionSystem> a, std::shared_ptr<const DiffusionSystem> b) {
  if (!a || !b) throw Error(ErrorCode::DomainError, "null diffusion system");
  if (a->size() != b->size()) {
    throw Error(ErrorCode::ShapeMismatch, "graphs have different vertex counts");
  }
  GraphPair p{a, b, {}, {}, {}, {}};
  const Matrix& Ma = a->M.matrix();
  const Matrix& Mb = b->M.matrix();
  p.R1 = a->M.inverse() * Mb;
  p.R1_inv = b->M.inverse() * Ma;
  p.R2 = Mb * a->M.inverse();
  p.R2_inv = Ma * b->M.inverse();
  if (!p.R1.allFinite() || !p.R1_inv.allFinite() || !p.R2.allFinite() || !p.R2_inv.allFinite()) {
    throw Error(ErrorCode::SingularAlignment, "alignment matrices are not finite");
  }
  return p;
}

GraphPair make_pair(const DiffusionSystem& a, const DiffusionSystem& b) {
  return make_pair(std::make_shared<const DiffusionSystem>(a), std::make_shared<const DiffusionSystem>(b));
}

Alignment alignment_metrics(const GraphPair& pair) {
  const Index n = pair.R1.rows();
  const Matrix I = Matrix::Identity(n, n);
  Alignment out{0.0, 0.0};
  for (const Matrix* r : {&pair.R1, &pair.R1_inv, &pair.R2, &pair.R2_inv}) {
    out.kappa = std::max(out.kappa, spectral_norm(I - *r));
    out.bigR = std::max(out.bigR, spectral_norm(*r));
  }
  return out;
}

DiffusionDistances diffusion_distances(const GraphPair& pair) {
  return {spectral_norm(pair.a->T - pair.b->T),
          operator_norm_weighted(pair.a->K - pair.b->K, pair.a->M)};
}

namespace {

Matrix weigh(const Matrix& b, const WeightMatrix& M) {
  if (M.kind() == WeightKind::Identity) return b;
  if (M.is_diagonal()) {
    const Vector m = M.matrix().diagonal();
    return m.asDiagonal() * b * m.cwiseInverse().asDiagonal();
  }
  return M.matrix() * b * M.inverse();
}

// Largest eigenvalue of sum_i B_i^T B_i, i.e. sigma_max of the stacked B_i, squared.
double stacked_gain(const std::vector<Matrix>& blocks) {
  if (blocks.empty()) return 0.0;
  Matrix gram = Matrix::Zero(blocks.front().cols(), blocks.front().cols());
  for (const Matrix& b : blocks) gram.noalias() += b.transpose() * b;
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (gram + gram.transpose()), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw Error(ErrorCode::EigensolverFailure, "gram eigensolve");
  return std::max(0.0, es.eigenvalues()(es.eigenvalues().size() - 1));
}

Matrix relabel(const Matrix& f, const std::optional<Permutation>& perm) {
  return perm ? perm->conjugate(f) : f;
}

void check_perm(const std::optional<Permutation>& perm, Index n) {
  if (perm && perm->size() != n) throw Error(ErrorCode::ShapeMismatch, "permutation size");
}

double lambda1(const DiffusionSystem& s) { return s.size() > 1 ? s.lambdas(1) : 0.0; }

bool is_identity_weight(const WeightMatrix& M) {
  return M.kind() == WeightKind::Identity ||
         (M.matrix() - Matrix::Identity(M.size(), M.size())).cwiseAbs().maxCoeff() == 0.0;
}

TheoremRecord ratio_record(std::string name, double lhs, double rhs, double envelope, double tol,
                           std::string note) {
  TheoremRecord r;
  r.name = std::move(name);
  r.lhs = lhs;
  r.rhs = rhs;
  r.slack = rhs - lhs;
  r.note = std::move(note);
  if (rhs > 0.0) {
    r.ratio = lhs / rhs;
    r.pass = *r.ratio <= envelope;
  } else {
    r.ratio = 0.0;
    r.pass = lhs <= tol;
  }
  return r;
}

// U vectors of layers 0..L in canonical path order.
std::vector<std::vector<Vector>> u_layers(const std::vector<Matrix>& psi, const Vector& x, int L) {
  std::vector<std::vector<Vector>> layers{{x}};
  for (int m = 1; m <= L; ++m) {
    const auto& prev = layers.back();
    std::vector<Vector> next;
    next.reserve(prev.size() * psi.size());
    for (const Vector& u : prev) {
      for (const Matrix& p : psi) next.push_back(modulus(p * u));
    }
    layers.push_back(std::move(next));
  }
  return layers;
}

// sum_{m=lo}^{hi} sum_{k=0}^{m + shift} c^{k/2}
double layered_sum(int lo, int hi, int shift, double c) {
  double total = 0.0;
  for (int m = lo; m <= hi; ++m) {
    for (int k = 0; k <= m + shift; ++k) total += std::pow(c, 0.5 * k);
  }
  return total;
}

}  // namespace

double frame_distance(const WaveletFrame& a, const WaveletFrame& b, const WeightMatrix& M,
                      const std::optional<Permutation>& perm) {
  if (a.size() != b.size() || a.J() != b.J() || a.bank.kind() != b.bank.kind() || M.size() != a.size()) {
    throw Error(ErrorCode::ShapeMismatch, "frames are not comparable");
  }
  check_perm(perm, a.size());
  std::vector<Matrix> blocks;
  blocks.reserve(static_cast<std::size_t>(a.bank.count()));
  for (int j = 0; j < a.bank.count(); ++j) {
    blocks.push_back(weigh(a.filter(j) - relabel(b.filter(j), perm), M));
  }
  return stacked_gain(blocks);
}

double frame_gain(const WaveletFrame& b, const WeightMatrix& M, const std::optional<Permutation>& perm) {
  if (M.size() != b.size()) throw Error(ErrorCode::ShapeMismatch, "frame/weight size");
  check_perm(perm, b.size());
  std::vector<Matrix> blocks;
  for (int j = 0; j < b.bank.count(); ++j) blocks.push_back(weigh(relabel(b.filter(j), perm), M));
  return stacked_gain(blocks);
}

TheoremRecord make_record(std::string name, double lhs, double rhs, double tol, std::string note) {
  TheoremRecord r;
  r.name = std::move(name);
  r.lhs = lhs;
  r.rhs = rhs;
  r.slack = rhs - lhs;
  r.pass = r.slack >= -tol;
  r.note = std::move(note);
  return r;
}

TheoremRecord check_wavelet_stability_tight(const GraphPair& pair, int J, double envelope, double tol) {
  if (!is_identity_weight(pair.a->M) || !is_identity_weight(pair.b->M)) {
    throw Error(ErrorCode::HypothesisViolated, "tight wavelet stability needs M = I on both graphs");
  }
  const WaveletFrame wa = build_frame(pair.a, J, FrameKind::Tight);
  const WaveletFrame wb = build_frame(pair.b, J, FrameKind::Tight);
  const double lhs = frame_distance(wa, wb, pair.a->M);
  double sup = 0.0;
  for (Index i = 1; i < pair.a->size(); ++i) {
    sup = std::max(sup, std::abs(pair.a->lambdas(i) - pair.b->lambdas(i)));
  }
  const double dv = spectral_norm(pair.a->spectral.V - pair.b->spectral.V);
  const double rhs = std::ldexp(1.0, J) * sup * sup + dv * dv;
  return ratio_record("wavelet_stability_tight", lhs, rhs, envelope, tol,
                      "rhs omits the unknown constant; ratio is the empirical constant");
}

std::vector<TheoremRecord> check_wavelet_stability_poly(const GraphPair& pair, int J, double envelope,
                                                        double tol) {
  if (!is_identity_weight(pair.a->M) || !is_identity_weight(pair.b->M)) {
    throw Error(ErrorCode::HypothesisViolated, "poly wavelet stability needs M = I on both graphs");
  }
  const DiffusionSystem& a = *pair.a;
  const DiffusionSystem& b = *pair.b;
  const WaveletFrame wa = build_frame(pair.a, J, FrameKind::Poly);
  const WaveletFrame wb = build_frame(pair.b, J, FrameKind::Poly);
  const double dT = spectral_norm(a.T - b.T);
  std::vector<TheoremRecord> out;
  out.push_back(ratio_record("wavelet_stability_poly", frame_distance(wa, wb, a.M), dT * dT + dT,
                             envelope, tol,
                             "rhs omits the unknown constant; ratio is the empirical constant"));

  const double star = std::max(lambda1(a), lambda1(b));
  const Vector& v = a.spectral.V.col(0);
  const Vector& vb = b.spectral.V.col(0);
  Matrix ta = a.T - v * v.transpose();
  Matrix tb = b.T - vb * vb.transpose();
  const double base = spectral_norm(ta - tb);
  double lhs = 0.0;
  double c = 0.0;
  for (int j = 0; j <= J; ++j) {
    const double d = spectral_norm(ta - tb);
    lhs += d * d;
    c += std::ldexp(1.0, 2 * j) * std::pow(star, std::ldexp(1.0, j + 1) - 2.0);
    ta = ta * ta;
    tb = tb * tb;
  }
  out.push_back(make_record("deflated_power_sum", lhs, c * base * base, tol,
                            "C = sum_j 4^j (lambda1*)^(2^(j+1)-2)"));

  const double dv = (v - vb).norm();
  const double gap = 1.0 - star;
  out.push_back(make_record("lead_eigenvector", dv * dv, gap > 0.0 ? 2.0 * dT / gap : INFINITY, tol));
  return out;
}

TheoremRecord check_diffusion_distance(const GraphPair& pair, double tol) {
  const Alignment al = alignment_metrics(pair);
  const DiffusionDistances dd = diffusion_distances(pair);
  return make_record("diffusion_distance", dd.dT,
                     al.kappa * (1.0 + std::pow(al.bigR, 3)) + al.bigR * dd.dK, tol);
}

std::vector<TheoremRecord> check_transfer(const GraphPair& pair, int J, FrameKind kind, double tol) {
  const Alignment al = alignment_metrics(pair);
  const WaveletFrame ka = build_frame(pair.a, J, kind);
  const WaveletFrame kb = build_frame(pair.b, J, kind);
  const Index n = pair.a->size();
  const WeightMatrix I = WeightMatrix::identity(n);
  const WaveletFrame ta = build_frame(reweight(*pair.a, I), J, kind);
  const WaveletFrame tb = build_frame(reweight(*pair.b, I), J, kind);
  const double lhs = frame_distance(ka, kb, pair.a->M);
  const double lhs_t = frame_distance(ta, tb, I);
  const double k2 = al.kappa * al.kappa * (al.kappa + 1.0) * (al.kappa + 1.0);
  std::vector<TheoremRecord> out;
  out.push_back(make_record("transfer", lhs, 6.0 * (lhs_t + k2), tol));
  out.push_back(make_record("cross_frame_gain", frame_gain(kb, pair.a->M), std::pow(al.bigR, 4), tol));
  return out;
}

Permutation degree_matching(const Graph& a, const Graph& b) {
  const Index n = a.size();
  if (b.size() != n) throw Error(ErrorCode::ShapeMismatch, "graphs have different vertex counts");
  auto order = [n](const Vector& d) {
    std::vector<Index> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), Index{0});
    std::stable_sort(idx.begin(), idx.end(), [&](Index i, Index k) { return d(i) < d(k); });
    return idx;
  };
  const auto oa = order(a.degrees());
  const auto ob = order(b.degrees());
  std::vector<Index> image(static_cast<std::size_t>(n));
  for (std::size_t k = 0; k < oa.size(); ++k) image[static_cast<std::size_t>(ob[k])] = oa[k];
  return Permutation(std::move(image));
}

std::vector<TheoremRecord> check_scattering_stability(const GraphPair& pair, int J, FrameKind kind,
                                                      const ScatteringConfig& config, const Vector& x,
                                                      const PermutationOptions& perm, double tol) {
  const DiffusionSystem& a = *pair.a;
  const DiffusionSystem& b = *pair.b;
  const Index n = a.size();
  if (!a.M.is_diagonal()) {
    throw Error(ErrorCode::HypothesisViolated,
                "scattering stability is measured on L^2(G, M) with M diagonal");
  }
  if (x.size() != n) throw Error(ErrorCode::DimensionMismatch, "signal length");
  const int lo = config.min_layer;
  const int L = config.max_layer;
  if (lo < 0 || L < lo) throw Error(ErrorCode::DomainError, "need 0 <= min_layer <= max_layer");
  if (scatter_path_count(J, L) > config.path_budget) {
    throw Error(ErrorCode::PathBudgetExceeded, "scattering depth exceeds path budget");
  }

  const WaveletFrame wa = build_frame(pair.a, J, kind);
  const WaveletFrame wb = build_frame(pair.b, J, kind);
  const Vector mu = resolve_mu(a, config.mu);
  const Vector mu_b = resolve_mu(b, config.mu);
  const double xnorm = weighted_norm(x, a.M);

  std::vector<Permutation> candidates;
  std::string label;
  switch (perm.mode) {
    case PermMode::Identity:
      candidates.push_back(Permutation::identity(n));
      label = "identity";
      break;
    case PermMode::Given:
      if (!perm.given) throw Error(ErrorCode::DomainError, "no permutation given");
      if (perm.given->size() != n) throw Error(ErrorCode::ShapeMismatch, "permutation size");
      candidates.push_back(*perm.given);
      label = "given";
      break;
    case PermMode::Exhaustive:
    case PermMode::Search:
      if (n <= perm.exhaustive_limit) {
        for_each_permutation(n, [&](const Permutation& p) { candidates.push_back(p); });
        label = "exhaustive";
      } else if (perm.mode == PermMode::Exhaustive) {
        throw Error(ErrorCode::BudgetExceeded, "exhaustive permutation search limited to n <= " +
                                                   std::to_string(perm.exhaustive_limit));
      } else {
        candidates.push_back(Permutation::identity(n));
        candidates.push_back(degree_matching(a.graph, b.graph));
        label = "heuristic (identity, degree matching); not the infimum";
      }
      break;
  }

  const Matrix gram_inv = a.M.inverse() * a.M.inverse().transpose();
  struct Bound {
    double window = INFINITY;
    double nonwindow = INFINITY;
    Vector mu_rep;
  };
  auto bounds_for = [&](const Permutation& p) {
    const std::optional<Permutation> op = p;
    const double A = frame_distance(wa, wb, a.M, op);
    const double C = frame_gain(wb, a.M, op);
    const Matrix Mp = p.conjugate(b.M.matrix());
    Bound out;
    out.mu_rep = gram_inv * (Mp.transpose() * (Mp * p.apply(mu_b)));
    out.window = std::sqrt(2.0 * A) * layered_sum(lo, L, 0, C) * xnorm;
    out.nonwindow = std::sqrt(2.0) *
                    ((L - lo + 1) * weighted_norm(mu - out.mu_rep, a.M) +
                     weighted_norm(out.mu_rep, a.M) * std::sqrt(A) * layered_sum(lo, L, -1, C)) *
                    xnorm;
    return out;
  };

  std::size_t best_w = 0;
  std::size_t best_nw = 0;
  Bound bw;
  Bound bnw;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    Bound b_i = bounds_for(candidates[i]);
    if (i == 0 || b_i.window < bw.window) {
      best_w = i;
      bw = b_i;
    }
    if (i == 0 || b_i.nonwindow < bnw.nonwindow) {
      best_nw = i;
      bnw = b_i;
    }
  }

  const auto ua = u_layers(wa.psi, x, L);
  auto relabelled = [&](const Permutation& p) {
    std::vector<Matrix> psi;
    for (const Matrix& f : wb.psi) psi.push_back(p.conjugate(f));
    return psi;
  };

  double lhs_w = 0.0;
  {
    const Permutation& p = candidates[best_w];
    const auto ub = u_layers(relabelled(p), x, L);
    const Matrix phi_b = p.conjugate(wb.phi);
    for (int m = lo; m <= L; ++m) {
      for (std::size_t i = 0; i < ua[static_cast<std::size_t>(m)].size(); ++i) {
        const double d = weighted_norm(wa.phi * ua[static_cast<std::size_t>(m)][i] -
                                           phi_b * ub[static_cast<std::size_t>(m)][i],
                                       a.M);
        lhs_w += d * d;
      }
    }
  }
  double lhs_nw = 0.0;
  {
    const Permutation& p = candidates[best_nw];
    const auto ub = u_layers(relabelled(p), x, L);
    for (int m = lo; m <= L; ++m) {
      for (std::size_t i = 0; i < ua[static_cast<std::size_t>(m)].size(); ++i) {
        const double d = weighted_inner(mu, ua[static_cast<std::size_t>(m)][i], a.M) -
                         weighted_inner(bnw.mu_rep, ub[static_cast<std::size_t>(m)][i], a.M);
        lhs_nw += d * d;
      }
    }
  }

  auto perm_note = [&](std::size_t idx) {
    std::string s = "permutation " + label;
    if (perm.mode != PermMode::Identity) {
      s += ", chosen image [";
      const auto& im = candidates[idx].image();
      for (std::size_t k = 0; k < im.size(); ++k) s += (k ? "," : "") + std::to_string(im[k]);
      s += "]";
    }
    return s;
  };
  std::vector<TheoremRecord> out;
  out.push_back(make_record("scattering_stability_windowed", std::sqrt(lhs_w), bw.window, tol,
                            perm_note(best_w)));
  out.push_back(make_record("scattering_stability_nonwindowed", std::sqrt(lhs_nw), bnw.nonwindow, tol,
                            perm_note(best_nw) + "; mu term counts L-l+1 layers"));
  return out;
}

std::vector<TheoremRecord> check_partial_invariance(const DiffusionSystem& sys, int J, FrameKind kind,
                                                    const Permutation& perm, const Vector& x,
                                                    int max_layer, double tol) {
  if (sys.M.kind() != WeightKind::DSqrt) {
    throw Error(ErrorCode::HypothesisViolated, "partial invariance needs M = D^{1/2}");
  }
  const Index n = sys.size();
  if (perm.size() != n || x.size() != n) throw Error(ErrorCode::DimensionMismatch, "sizes");
  const DiffusionSystem moved = build_diffusion(permute_graph(sys.graph, perm), sys.g, WeightKind::DSqrt);
  const WaveletFrame w = build_frame(sys, J, kind);
  const WaveletFrame wp = build_frame(moved, J, kind);

  ScatteringConfig cfg;
  cfg.min_layer = 0;
  cfg.max_layer = max_layer;
  cfg.threads = 1;
  const ScatteringOutput s = scatter(w, cfg, x);
  const ScatteringOutput sp = scatter(wp, cfg, perm.apply(x));
  double lhs = 0.0;
  for (const auto& [path, v] : s.windowed) {
    const double d = weighted_norm(sp.windowed.at(path) - v, sys.M);
    lhs += d * d;
  }
  const Graph& g = sys.graph;
  const double t = w.bank.lowpass_exponent();
  const double rhs = std::pow(lambda1(sys), t) *
                     operator_norm_weighted(perm.matrix() - Matrix::Identity(n, n), sys.M) *
                     std::sqrt(1.0 + n * g.max_degree() / g.min_degree()) * weighted_norm(x, sys.M);

  std::vector<TheoremRecord> out;
  out.push_back(make_record("partial_invariance", std::sqrt(lhs), rhs, tol,
                            "layers 0.." + std::to_string(max_layer)));
  const Vector u0 = sys.U_basis.col(0);
  out.push_back(make_record("lead_vector_fixed", (perm.apply(u0) - u0).cwiseAbs().maxCoeff(), 0.0, tol));
  return out;
}

bool StabilityReport::pass() const {
  return std::all_of(records.begin(), records.end(), [](const TheoremRecord& r) { return r.pass; });
}

StabilityReport build_stability_report(const GraphPair& pair, const Vector& x,
                                       const StabilityOptions& options) {
  const DiffusionSystem& a = *pair.a;
  const DiffusionSystem& b = *pair.b;
  StabilityReport r;
  r.J = options.J;
  r.kind = options.kind;
  r.alignment = alignment_metrics(pair);
  r.lambda1_a = lambda1(a);
  r.lambda1_b = lambda1(b);
  r.lambda1_star = std::max(r.lambda1_a, r.lambda1_b);
  r.eigenvalue_distance = (a.lambdas - b.lambdas).cwiseAbs().maxCoeff();
  r.eigenvector_distance = spectral_norm(a.spectral.V - b.spectral.V);
  r.distances = diffusion_distances(pair);

  r.records.push_back(check_diffusion_distance(pair, options.tol));
  for (auto& rec : check_transfer(pair, options.J, options.kind, options.tol)) r.records.push_back(rec);

  const WeightMatrix I = WeightMatrix::identity(a.size());
  const GraphPair on_t = make_pair(reweight(a, I), reweight(b, I));
  r.records.push_back(check_wavelet_stability_tight(on_t, options.J, INFINITY, options.tol));
  for (auto& rec : check_wavelet_stability_poly(on_t, options.J, INFINITY, options.tol)) {
    r.records.push_back(rec);
  }
  try {
    for (auto& rec : check_scattering_stability(pair, options.J, options.kind, options.scattering, x,
                                                options.perm, options.tol)) {
      r.records.push_back(rec);
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::HypothesisViolated) throw;
    r.skipped.push_back(std::string("scattering_stability: ") + e.what());
  }
  return r;
}

}  // namespace graphscat
