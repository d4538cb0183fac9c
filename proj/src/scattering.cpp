#include "graphscat/scattering.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <thread>

#include "graphscat/errors.hpp"

namespace graphscat {

std::string PathIndex::to_string() const {
  std::string s = "[";
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(entries[i]);
  }
  return s + "]";
}

PathIndex PathIndex::parse(const std::string& text) {
  auto fail = [&] { return Error(ErrorCode::ParseError, "bad path key '" + text + "'"); };
  std::size_t pos = 0;
  auto skip = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  skip();
  if (pos >= text.size() || text[pos] != '[') throw fail();
  ++pos;
  PathIndex out;
  skip();
  if (pos < text.size() && text[pos] == ']') {
    ++pos;
  } else {
    while (true) {
      skip();
      std::size_t start = pos;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
      if (start == pos) throw fail();
      out.entries.push_back(std::stoi(text.substr(start, pos - start)));
      skip();
      if (pos >= text.size()) throw fail();
      if (text[pos] == ']') {
        ++pos;
        break;
      }
      if (text[pos] != ',') throw fail();
      ++pos;
    }
  }
  skip();
  if (pos != text.size()) throw fail();
  return out;
}

std::vector<PathIndex> paths_of_length(int J, int m) {
  std::vector<PathIndex> layer{PathIndex{}};
  for (int k = 0; k < m; ++k) {
    std::vector<PathIndex> next;
    next.reserve(layer.size() * static_cast<std::size_t>(J + 1));
    for (const PathIndex& p : layer) {
      for (int j = 0; j <= J; ++j) {
        PathIndex child = p;
        child.entries.push_back(j);
        next.push_back(std::move(child));
      }
    }
    layer = std::move(next);
  }
  return layer;
}

std::string to_string(MuChoice choice) {
  switch (choice) {
    case MuChoice::U0: return "u0";
    case MuChoice::OnesDual: return "ones";
    case MuChoice::Custom: return "custom";
  }
  return "?";
}

Vector resolve_mu(const DiffusionSystem& sys, const MuSpec& mu) {
  const Index n = sys.size();
  switch (mu.choice) {
    case MuChoice::U0: return sys.U_basis.col(0);
    case MuChoice::OnesDual: {
      const Matrix& inv = sys.M.inverse();
      return inv * (inv.transpose() * Vector::Ones(n));
    }
    case MuChoice::Custom:
      if (mu.custom.size() != n) {
        throw Error(ErrorCode::DimensionMismatch, "custom mu has wrong length");
      }
      return mu.custom;
  }
  throw Error(ErrorCode::DomainError, "unknown mu choice");
}

Vector modulus(const Vector& x) { return x.cwiseAbs(); }

namespace {

void check_path(const WaveletFrame& frame, const PathIndex& path) {
  for (int j : path.entries) {
    if (j < 0 || j > frame.J()) {
      throw Error(ErrorCode::InvalidPathEntry,
                  "path " + path.to_string() + " has entry outside [0," + std::to_string(frame.J()) + "]");
    }
  }
}

void check_signal(const WaveletFrame& frame, const Vector& x) {
  if (x.size() != frame.size()) {
    throw Error(ErrorCode::DimensionMismatch, "signal length does not match frame");
  }
}

template <class Fn>
void parallel_for(std::size_t count, int threads, Fn&& fn) {
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < count; i += workers) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace

Vector propagate(const WaveletFrame& frame, const PathIndex& path, const Vector& x) {
  check_signal(frame, x);
  check_path(frame, path);
  Vector u = x;
  for (int j : path.entries) u = modulus(frame.psi[static_cast<std::size_t>(j)] * u);
  return u;
}

Vector windowed_coefficient(const WaveletFrame& frame, const PathIndex& path, const Vector& x) {
  return frame.phi * propagate(frame, path, x);
}

double nonwindowed_coefficient(const WaveletFrame& frame, const PathIndex& path, const Vector& x,
                               const Vector& mu) {
  if (mu.size() != frame.size()) throw Error(ErrorCode::DimensionMismatch, "mu length");
  return weighted_inner(mu, propagate(frame, path, x), frame.M());
}

std::size_t scatter_path_count(int J, int max_layer) {
  std::size_t total = 0;
  std::size_t layer = 1;
  for (int m = 0; m <= max_layer + 1; ++m) {
    total += layer;
    if (total > (std::size_t{1} << 60)) return total;
    layer *= static_cast<std::size_t>(J + 1);
  }
  return total;
}

int resolve_thread_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("SCATTER_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 1;
}

ScatteringOutput scatter(const WaveletFrame& frame, const ScatteringConfig& config, const Vector& x) {
  check_signal(frame, x);
  if (config.min_layer < 0 || config.max_layer < config.min_layer) {
    throw Error(ErrorCode::DomainError, "need 0 <= min_layer <= max_layer");
  }
  const int J = frame.J();
  const int L = config.max_layer;
  const std::size_t needed = scatter_path_count(J, L);
  if (needed > config.path_budget) {
    throw Error(ErrorCode::PathBudgetExceeded,
                std::to_string(needed) + " paths exceed budget " + std::to_string(config.path_budget));
  }
  const int threads = resolve_thread_count(config.threads);
  const WeightMatrix& M = frame.M();
  const Vector mu = resolve_mu(*frame.sys, config.mu);

  ScatteringOutput out;
  out.J = J;
  out.kind = frame.bank.kind();
  out.min_layer = config.min_layer;
  out.max_layer = L;
  out.mu = config.mu.choice;
  out.n = frame.size();

  const double input = weighted_norm(x, M);
  std::vector<Vector> layer{x};
  std::vector<PathIndex> names{PathIndex{}};
  double windowed_total = 0.0;
  const std::size_t branch = static_cast<std::size_t>(J + 1);

  for (int m = 0; m <= L + 1; ++m) {
    std::vector<double> u_energy(layer.size());
    std::vector<double> s_energy(layer.size(), 0.0);
    std::vector<Vector> s_vec(m <= L ? layer.size() : 0);
    std::vector<double> s_bar(m <= L ? layer.size() : 0);
    parallel_for(layer.size(), threads, [&](std::size_t i) {
      const double nu = weighted_norm(layer[i], M);
      u_energy[i] = nu * nu;
      if (m <= L) {
        s_vec[i] = frame.phi * layer[i];
        const double ns = weighted_norm(s_vec[i], M);
        s_energy[i] = ns * ns;
        s_bar[i] = weighted_inner(mu, layer[i], M);
      }
    });
    double eu = 0.0;
    for (double e : u_energy) eu += e;
    out.layer_energy.push_back(eu);
    if (m > L) break;

    double es = 0.0;
    for (double e : s_energy) es += e;
    out.windowed_energy.push_back(es);
    windowed_total += es;
    if (m >= config.min_layer) {
      for (std::size_t i = 0; i < layer.size(); ++i) {
        out.windowed.emplace(names[i], std::move(s_vec[i]));
        out.nonwindowed.emplace(names[i], s_bar[i]);
      }
    }

    std::vector<Vector> next(layer.size() * branch);
    parallel_for(layer.size(), threads, [&](std::size_t i) {
      for (std::size_t j = 0; j < branch; ++j) next[i * branch + j] = modulus(frame.psi[j] * layer[i]);
    });
    if (m + 1 <= L) {
      std::vector<PathIndex> next_names;
      next_names.reserve(next.size());
      for (const PathIndex& p : names) {
        for (std::size_t j = 0; j < branch; ++j) {
          PathIndex c = p;
          c.entries.push_back(static_cast<int>(j));
          next_names.push_back(std::move(c));
        }
      }
      names = std::move(next_names);
    }
    layer = std::move(next);
  }
  out.residual = input * input - windowed_total;
  return out;
}

}  // namespace graphscat
