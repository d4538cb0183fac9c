#include "graphscat/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>

#include <CLI11.hpp>

#include "graphscat/diffusion.hpp"
#include "graphscat/errors.hpp"
#include "graphscat/harness.hpp"
#include "graphscat/scattering.hpp"
#include "graphscat/spectral.hpp"
#include "graphscat/stability.hpp"

namespace graphscat {

std::string to_string(Subcommand s) {
  switch (s) {
    case Subcommand::Features: return "features";
    case Subcommand::FrameCheck: return "frame-check";
    case Subcommand::Stability: return "stability";
    case Subcommand::Verify: return "verify";
    case Subcommand::Spectra: return "spectra";
  }
  return "?";
}

namespace {

Error usage(const std::string& msg) { return Error(ErrorCode::UsageError, msg); }

struct Raw {
  CliConfig cfg;
  std::string layers = "0:2";
  std::string kind;
  std::string format;
  bool one_based = false;
};

struct App {
  CLI::App app{"Asymmetric graph wavelets, scattering transforms and their numerical certificates", "graphscat"};
  Raw raw;
  CLI::App* features = nullptr;
  CLI::App* frame_check = nullptr;
  CLI::App* stability = nullptr;
  CLI::App* verify = nullptr;
  CLI::App* spectra = nullptr;

  App() {
    app.require_subcommand(1);
    CliConfig& c = raw.cfg;

    features = app.add_subcommand("features", "Windowed and non-windowed scattering coefficients");
    features->add_option("--graph", c.graph, "Edge list file")->required();
    features->add_option("--signal", c.signal, "Signal file (CSV or JSON)")->required();
    add_model(features);
    features->add_option("--layers", raw.layers, "Layer window l:L");
    features->add_option("--mu", c.mu, "u0|ones|file:PATH");
    features->add_option("--threads", c.threads, "Worker threads (0: SCATTER_THREADS or 1)");
    add_output(features);

    frame_check = app.add_subcommand("frame-check", "Frame bounds and partition of unity");
    frame_check->add_option("--graph", c.graph, "Edge list file")->required();
    add_model(frame_check);
    frame_check->add_option("--dump", c.dump, "Write the filters as JSON");
    frame_check->add_option("--tol", c.tol, "Tolerance on the bounds");

    stability = app.add_subcommand("stability", "Stability bounds between two graphs");
    stability->add_option("--graph-a", c.graph, "First edge list")->required();
    stability->add_option("--graph-b", c.graph_b, "Second edge list")->required();
    stability->add_option("--signal", c.signal, "Signal on graph a (default: delta at vertex 0)");
    add_model(stability);
    stability->add_option("--layers", raw.layers, "Layer window l:L");
    stability->add_option("--mu", c.mu, "u0|ones|file:PATH");
    stability->add_option("--perm", c.perm, "identity|search|exhaustive|file:PATH");
    stability->add_option("--tol", c.tol, "Slack tolerance");
    add_output(stability);

    verify = app.add_subcommand("verify", "Run the randomized theorem suite");
    verify->add_option("--seed", c.seed, "RNG seed");
    verify->add_option("--trials", c.trials, "Number of random trials")->check(CLI::PositiveNumber);
    add_output(verify);

    spectra = app.add_subcommand("spectra", "Laplacian and diffusion spectra");
    spectra->add_option("--graph", c.graph, "Edge list file")->required();
    spectra->add_option("--g", c.g, "gstar|table:PATH");
    spectra->add_flag("--one-based", raw.one_based, "Vertex ids start at 1");
  }

  void add_model(CLI::App* sub) {
    CliConfig& c = raw.cfg;
    sub->add_option("--J", c.J, "Finest dyadic scale")->check(CLI::Range(0, 30));
    sub->add_option("--kind", raw.kind, "tight|poly");
    sub->add_option("--M", c.M, "identity|dsqrt|dinvsqrt|file:PATH");
    sub->add_option("--g", c.g, "gstar|table:PATH");
    sub->add_flag("--one-based", raw.one_based, "Vertex ids start at 1");
  }

  void add_output(CLI::App* sub) {
    sub->add_option("--out", raw.cfg.out, "Output file (.json or .csv)");
    sub->add_option("--format", raw.format, "json|csv (default from extension)");
  }
};

std::string after_prefix(const std::string& value, const std::string& prefix) {
  return value.rfind(prefix, 0) == 0 ? value.substr(prefix.size()) : std::string();
}

void require_file(const std::filesystem::path& p, const std::string& what) {
  std::ifstream in(p);
  if (!in) throw usage(what + ": cannot read '" + p.string() + "'");
}

void require_choice(const std::string& value, std::initializer_list<const char*> choices,
                    const std::string& file_prefix, const std::string& option) {
  for (const char* c : choices) {
    if (value == c) return;
  }
  if (!file_prefix.empty() && value.rfind(file_prefix, 0) == 0) {
    const std::string p = value.substr(file_prefix.size());
    if (p.empty()) throw usage(option + ": empty path in '" + value + "'");
    require_file(p, option);
    return;
  }
  throw usage(option + ": unrecognized value '" + value + "'");
}

void parse_layers(const std::string& text, CliConfig& c) {
  const auto colon = text.find(':');
  auto to_int = [&](const std::string& s) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || v < 0) {
      throw usage("--layers: expected l:L with 0 <= l <= L, got '" + text + "'");
    }
    return v;
  };
  if (colon == std::string::npos) {
    c.min_layer = 0;
    c.max_layer = to_int(text);
  } else {
    c.min_layer = to_int(text.substr(0, colon));
    c.max_layer = to_int(text.substr(colon + 1));
  }
  if (c.min_layer > c.max_layer) {
    throw usage("--layers: l must not exceed L, got '" + text + "'");
  }
}

CliConfig finish(App& a) {
  Raw& r = a.raw;
  CliConfig c = r.cfg;
  if (a.features->parsed()) c.subcommand = Subcommand::Features;
  else if (a.frame_check->parsed()) c.subcommand = Subcommand::FrameCheck;
  else if (a.stability->parsed()) c.subcommand = Subcommand::Stability;
  else if (a.verify->parsed()) c.subcommand = Subcommand::Verify;
  else c.subcommand = Subcommand::Spectra;

  parse_layers(r.layers, c);
  if (!r.kind.empty()) {
    if (r.kind == "tight") c.kind = FrameKind::Tight;
    else if (r.kind == "poly") c.kind = FrameKind::Poly;
    else throw usage("--kind: expected tight or poly, got '" + r.kind + "'");
  }
  if (!r.format.empty()) {
    if (r.format == "json") c.format = Format::Json;
    else if (r.format == "csv") c.format = Format::Csv;
    else throw usage("--format: expected json or csv, got '" + r.format + "'");
  }
  c.index_base = r.one_based ? 1 : 0;
  if (c.threads < 0) throw usage("--threads must be non-negative");
  if (!(c.tol >= 0.0)) throw usage("--tol must be non-negative");

  if (c.subcommand != Subcommand::Verify) {
    require_file(c.graph, c.subcommand == Subcommand::Stability ? "--graph-a" : "--graph");
    require_choice(c.g, {"gstar"}, "table:", "--g");
  }
  if (c.subcommand == Subcommand::Stability) require_file(c.graph_b, "--graph-b");
  if (!c.signal.empty()) require_file(c.signal, "--signal");
  if (c.subcommand == Subcommand::Features || c.subcommand == Subcommand::FrameCheck ||
      c.subcommand == Subcommand::Stability) {
    require_choice(c.M, {"identity", "dsqrt", "dinvsqrt"}, "file:", "--M");
  }
  if (c.subcommand == Subcommand::Features || c.subcommand == Subcommand::Stability) {
    require_choice(c.mu, {"u0", "ones"}, "file:", "--mu");
  }
  if (c.subcommand == Subcommand::Stability) {
    require_choice(c.perm, {"identity", "search", "exhaustive"}, "file:", "--perm");
  }
  return c;
}

CliConfig parse_with(App& a, std::vector<std::string> args) {
  std::reverse(args.begin(), args.end());
  try {
    a.app.parse(args);
  } catch (const CLI::CallForHelp&) {
    throw;
  } catch (const CLI::ParseError& e) {
    throw usage(e.what());
  }
  return finish(a);
}

// --- runtime helpers ---

SpectralFunction load_g(const std::string& spec) {
  if (spec == "gstar") return SpectralFunction::gstar();
  return read_spectral_table(after_prefix(spec, "table:"));
}

WeightMatrix load_weight(const std::string& spec, const Graph& graph) {
  if (spec == "identity") return make_weight(WeightKind::Identity, graph);
  if (spec == "dsqrt") return make_weight(WeightKind::DSqrt, graph);
  if (spec == "dinvsqrt") return make_weight(WeightKind::DInvSqrt, graph);
  const Matrix m = read_matrix(after_prefix(spec, "file:"));
  if (m.rows() != graph.size() || m.cols() != graph.size()) {
    throw Error(ErrorCode::DimensionMismatch, "--M: matrix is " + std::to_string(m.rows()) + "x" +
                                                  std::to_string(m.cols()) + ", graph has " +
                                                  std::to_string(graph.size()) + " vertices");
  }
  return WeightMatrix::custom(m);
}

MuSpec load_mu(const std::string& spec, Index n) {
  MuSpec mu;
  if (spec == "u0") mu.choice = MuChoice::U0;
  else if (spec == "ones") mu.choice = MuChoice::OnesDual;
  else {
    mu.choice = MuChoice::Custom;
    mu.custom = read_signal(after_prefix(spec, "file:"), n);
  }
  return mu;
}

Graph load(const std::filesystem::path& p, const CliConfig& c) {
  EdgeListOptions opts;
  opts.index_base = c.index_base;
  return read_graph(p, opts);
}

std::shared_ptr<const DiffusionSystem> load_system(const Graph& graph, const CliConfig& c) {
  const SpectralFunction g = load_g(c.g);
  return std::make_shared<const DiffusionSystem>(build_diffusion(graph, g, load_weight(c.M, graph)));
}

void emit(const std::string& text, const CliConfig& c, std::ostream& out) {
  if (c.out.empty()) {
    out << text;
  } else {
    write_text(c.out, text);
  }
}

Format output_format(const CliConfig& c) {
  if (c.format) return *c.format;
  return c.out.empty() ? Format::Json : format_for(c.out);
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

int run_features(const CliConfig& c, std::ostream& out) {
  const Graph graph = load(c.graph, c);
  auto sys = load_system(graph, c);
  const Vector x = read_signal(c.signal, graph.size());
  const WaveletFrame frame = build_frame(sys, c.J, c.kind.value_or(FrameKind::Tight));
  ScatteringConfig sc;
  sc.min_layer = c.min_layer;
  sc.max_layer = c.max_layer;
  sc.mu = load_mu(c.mu, graph.size());
  sc.threads = c.threads;
  emit(serialize(scatter(frame, sc, x), output_format(c)), c, out);
  return kExitOk;
}

int run_frame_check(const CliConfig& c, std::ostream& out) {
  const Graph graph = load(c.graph, c);
  auto sys = load_system(graph, c);
  const FrameKind kind = c.kind.value_or(FrameKind::Tight);
  const WaveletFrame frame = build_frame(sys, c.J, kind);
  const FrameBounds b = frame_bounds(frame);

  double partition = 0.0;
  for (int i = 0; i <= 10000; ++i) {
    const double t = i / 10000.0;
    double sum = 0.0;
    for (int j = 0; j <= c.J + 1; ++j) sum += frame.bank.poly(j, t);
    partition = std::max(partition, std::abs(sum - 1.0));
    if (kind == FrameKind::Tight) partition = std::max(partition, std::abs(frame.bank.energy(t) - 1.0));
  }
  const double lower = kind == FrameKind::Tight ? 1.0 : lower_bound_constant(c.J);
  const bool pass = b.lower >= lower - c.tol && b.upper <= 1.0 + c.tol && partition <= 1e-12;

  out << "kind " << (kind == FrameKind::Tight ? "tight" : "poly") << "  J " << c.J << "  n " << graph.size() << "\n";
  out << "frame bounds  A " << format_double(b.lower) << "  B " << format_double(b.upper) << "\n";
  out << (kind == FrameKind::Tight ? "expected      A = B = 1\n" : "lower constant C_J " + format_double(lower) + "\n");
  out << "partition of unity error " << num(partition) << "\n";
  out << (pass ? "PASS" : "FAIL") << "\n";
  if (!c.dump.empty()) write_text(c.dump, serialize_frame(frame, b));
  return pass ? kExitOk : kExitCheckFailed;
}

int run_stability(const CliConfig& c, std::ostream& out) {
  const Graph ga = load(c.graph, c);
  const Graph gb = load(c.graph_b, c);
  if (ga.size() != gb.size()) {
    throw Error(ErrorCode::ShapeMismatch, "graphs have " + std::to_string(ga.size()) + " and " +
                                              std::to_string(gb.size()) + " vertices");
  }
  const GraphPair pair = make_pair(load_system(ga, c), load_system(gb, c));
  Vector x;
  if (c.signal.empty()) {
    x = Vector::Zero(ga.size());
    x(0) = 1.0;
  } else {
    x = read_signal(c.signal, ga.size());
  }
  StabilityOptions opts;
  opts.J = c.J;
  opts.kind = c.kind.value_or(FrameKind::Poly);
  opts.tol = c.tol;
  opts.scattering.min_layer = c.min_layer;
  opts.scattering.max_layer = c.max_layer;
  opts.scattering.mu = load_mu(c.mu, ga.size());
  opts.scattering.threads = c.threads;
  if (c.perm == "identity") {
    opts.perm.mode = PermMode::Identity;
  } else if (c.perm == "search") {
    opts.perm.mode = PermMode::Search;
  } else if (c.perm == "exhaustive") {
    opts.perm.mode = PermMode::Exhaustive;
  } else {
    opts.perm.mode = PermMode::Given;
    opts.perm.given = read_permutation(after_prefix(c.perm, "file:"), c.index_base);
  }
  const StabilityReport report = build_stability_report(pair, x, opts);
  if (!c.out.empty()) write_text(c.out, serialize(report, output_format(c)));
  out << "kappa " << num(report.alignment.kappa) << "  R " << num(report.alignment.bigR) << "  lambda1* "
      << num(report.lambda1_star) << "\n";
  for (const auto& r : report.records) {
    out << (r.pass ? "PASS " : "FAIL ") << r.name << "  lhs " << num(r.lhs) << "  rhs " << num(r.rhs) << "  slack "
        << num(r.slack) << "\n";
  }
  for (const auto& s : report.skipped) out << "SKIP " << s << "\n";
  if (c.out.empty()) out << serialize(report, output_format(c));
  return report.pass() ? kExitOk : kExitCheckFailed;
}

int run_verify(const CliConfig& c, std::ostream& out) {
  TrialSpec spec;
  spec.seed = c.seed;
  spec.trials = c.trials;
  const Certificate cert = run_suite(spec);
  for (const auto& k : cert.checks) {
    out << (k.pass ? "PASS " : "FAIL ") << k.id << " " << k.name << "  max violation " << num(k.max_violation)
        << "  tol " << num(k.tolerance) << "\n";
  }
  if (!c.out.empty()) write_text(c.out, serialize(cert, output_format(c)));
  out << (cert.pass() ? "all checks passed" : "some checks failed") << "\n";
  return cert.pass() ? kExitOk : kExitCheckFailed;
}

int run_spectra(const CliConfig& c, std::ostream& out) {
  const Graph graph = load(c.graph, c);
  const SpectralDecomposition spec = spectral_decompose(normalized_laplacian(graph), graph.degrees());
  const SpectralFunction g = load_g(c.g);
  out << "i,omega,lambda\n";
  for (Index i = 0; i < spec.omegas.size(); ++i) {
    out << i << "," << format_double(spec.omegas(i)) << "," << format_double(i == 0 ? 1.0 : g(spec.omegas(i)))
        << "\n";
  }
  const double gap = spec.omegas.size() > 1 ? spec.omegas(1) : 0.0;
  out << "spectral gap " << format_double(gap) << "\n";
  return kExitOk;
}

}  // namespace

CliConfig parse_cli(const std::vector<std::string>& args) {
  App a;
  try {
    return parse_with(a, args);
  } catch (const CLI::CallForHelp&) {
    throw usage(a.app.help());
  }
}

CliConfig parse_cli(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return parse_cli(args);
}

int run(const CliConfig& c, std::ostream& out, std::ostream& err) {
  (void)err;
  switch (c.subcommand) {
    case Subcommand::Features: return run_features(c, out);
    case Subcommand::FrameCheck: return run_frame_check(c, out);
    case Subcommand::Stability: return run_stability(c, out);
    case Subcommand::Verify: return run_verify(c, out);
    case Subcommand::Spectra: return run_spectra(c, out);
  }
  return kExitUsage;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  App a;
  CliConfig config;
  try {
    config = parse_with(a, args);
  } catch (const CLI::CallForHelp&) {
    out << a.app.help();
    return kExitOk;
  } catch (const Error& e) {
    err << "graphscat: " << e.what() << "\n";
    if (!args.empty()) err << "run 'graphscat --help' for usage\n";
    return kExitUsage;
  }
  try {
    return run(config, out, err);
  } catch (const Error& e) {
    err << "graphscat: " << e.what() << "\n";
    return e.code() == ErrorCode::UsageError ? kExitUsage : kExitRuntime;
  } catch (const std::exception& e) {
    err << "graphscat: " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace graphscat
