#include "support.hpp"

#include <filesystem>
#include <random>
#include <sstream>

#include <json.hpp>

#include "graphscat/diffusion.hpp"
#include "graphscat/harness.hpp"
#include "graphscat/io.hpp"
#include "graphscat/scattering.hpp"

using namespace graphscat;
using namespace testing;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "graphscat_io_test";
  fs::create_directories(dir);
  return dir / name;
}

ScatteringOutput k2_output() {
  const auto s = std::make_shared<const DiffusionSystem>(
      build_diffusion(k2(), SpectralFunction::gstar(), WeightKind::Identity));
  ScatteringConfig cfg;
  cfg.max_layer = 2;
  return scatter(build_frame(s, 0, FrameKind::Poly), cfg, vec({1, 0}));
}

}  // namespace

TEST_CASE("signal parsing") {
  CHECK(parse_vector("1,0", 2) == vec({1, 0}));
  CHECK(parse_vector("[0.5,0.5,0.5]", 3) == vec({0.5, 0.5, 0.5}));
  CHECK(parse_vector("1\n2\n# note\n3e-1\n", 3) == vec({1, 2, 0.3}));
  CHECK(parse_vector("  1 2\t3") == vec({1, 2, 3}));
  CHECK(parse_vector("[1, \"inf\"]")(1) == INFINITY);
  CHECK_CODE(parse_vector("1,0", 3), ErrorCode::LengthMismatch);
  CHECK_CODE(parse_vector("[1,2,", 2), ErrorCode::ParseError);
  CHECK_CODE(parse_vector("[1,true]"), ErrorCode::ParseError);
  try {
    parse_vector("1,x", 2, "sig.csv");
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ParseError);
    CHECK(std::string(e.what()).find("sig.csv:1:3") != std::string::npos);
  }
  try {
    parse_vector("1\n2\n  zz\n", -1, "s");
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("s:3:3") != std::string::npos);
  }
}

TEST_CASE("edge lists") {
  std::istringstream in("# header\n0 1\n1 2 2.5  # trailing\n\n2 0 0.5\n");
  const auto edges = parse_edge_list(in);
  REQUIRE(edges.size() == 3);
  CHECK(edges[0].weight == 1.0);
  CHECK(edges[1].weight == 2.5);
  CHECK(edges[2].u == 2);
  std::istringstream bad("0 1\n0 q\n");
  CHECK_CODE(parse_edge_list(bad), ErrorCode::ParseError);
  std::istringstream too_many("0 1 2 3\n");
  CHECK_CODE(parse_edge_list(too_many), ErrorCode::ParseError);
  std::istringstream frac("0 1.5\n");
  CHECK_CODE(parse_edge_list(frac), ErrorCode::ParseError);

  const fs::path p = scratch("g.txt");
  write_text(p, "1 2\n2 3 2\n");
  EdgeListOptions opts;
  opts.index_base = 1;
  const Graph g = read_graph(p, opts);
  CHECK(g.size() == 3);
  CHECK(g.degrees()(1) == 3.0);
  CHECK_CODE(read_graph(scratch("absent.txt")), ErrorCode::IoError);
}

TEST_CASE("vector and matrix round trips are bit exact") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  Matrix m(5, 4);
  for (Index i = 0; i < m.size(); ++i) m(i) = u(rng) / 7.0;
  m(0, 0) = 1e-300;
  m(1, 1) = -0.1;
  m(2, 2) = 5e-324;
  for (Format f : {Format::Json, Format::Csv}) {
    CHECK(parse_matrix(serialize(m, f)) == m);
    const Vector v = m.col(1);
    CHECK(parse_vector(serialize(v, f)) == v);
  }
  const fs::path p = scratch("m.csv");
  write_text(p, serialize(m, Format::Csv));
  CHECK(read_matrix(p) == m);
  CHECK_CODE(parse_matrix("1,2\n3\n"), ErrorCode::LengthMismatch);
  CHECK(format_double(0.1) == "0.10000000000000001");
}

TEST_CASE("formats follow the extension") {
  CHECK(format_for("a/b.csv") == Format::Csv);
  CHECK(format_for("a/b.CSV") == Format::Csv);
  CHECK(format_for("out.json") == Format::Json);
  CHECK(format_for("out") == Format::Json);
}

TEST_CASE("features JSON for the two-vertex example") {
  const std::string text = serialize(k2_output(), Format::Json);
  const auto j = nlohmann::json::parse(text);
  CHECK(j["metadata"]["J"] == 0);
  CHECK(j["metadata"]["kind"] == "poly");
  CHECK(j["metadata"]["mu"] == "u0");
  const auto& c = j["coefficients"];
  REQUIRE(c.size() == 3);
  CHECK(c[0]["path"] == "[]");
  CHECK(c[1]["path"] == "[0]");
  CHECK(c[1]["windowed"][0].get<double>() == 0.5);
  CHECK(c[1]["windowed"][1].get<double>() == 0.5);
  CHECK(c[2]["path"] == "[0,0]");
  // Keys come out sorted.
  CHECK(text.find("\"coefficients\"") < text.find("\"metadata\""));
  CHECK(text == serialize(k2_output(), Format::Json));
}

TEST_CASE("features CSV") {
  const std::string text = serialize(k2_output(), Format::Csv);
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  CHECK(line == "path,value");
  std::getline(in, line);
  CHECK(line.rfind("[],", 0) == 0);
  std::getline(in, line);
  CHECK(line.rfind("[0],", 0) == 0);
  std::getline(in, line);
  CHECK(line.rfind("\"[0,0]\",", 0) == 0);
}

TEST_CASE("reports and certificates") {
  const StabilityReport empty;
  const auto j = nlohmann::json::parse(serialize(empty, Format::Json));
  CHECK(j.contains("metadata"));
  CHECK(j["records"].empty());
  CHECK(j["pass"] == true);
  CHECK(serialize(empty, Format::Csv) == "name,lhs,rhs,slack,pass\n");

  StabilityReport r;
  r.records.push_back(make_record("x", 1.0, INFINITY, 1e-9));
  const auto jr = nlohmann::json::parse(serialize(r, Format::Json));
  CHECK(jr["records"][0]["rhs"] == "inf");
  CHECK(jr["records"][0]["pass"] == true);

  TrialSpec spec;
  spec.trials = 2;
  const Certificate c = run_suite(spec);
  const auto jc = nlohmann::json::parse(serialize(c, Format::Json));
  CHECK(jc["checks"].size() == 15);
  CHECK(jc["metadata"]["seed"] == 1);
  const std::string csv = serialize(c, Format::Csv);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 16);

  const fs::path p = scratch("cert.json");
  write_output(c, p, Format::Json);
  CHECK(read_text(p) == serialize(c, Format::Json));
  CHECK_CODE(write_text(scratch("no/such/dir/x.json"), "x"), ErrorCode::IoError);
}

TEST_CASE("tables and permutations from files") {
  const fs::path t = scratch("g.csv");
  write_text(t, "0,1\n1,0.3\n2,0\n");
  const SpectralFunction g = read_spectral_table(t);
  CHECK(g(0.5) == doctest::Approx(0.65));
  write_text(t, "0,1\n1,0.3\n2,0.5\n");
  CHECK_CODE(read_spectral_table(t), ErrorCode::DomainError);
  const fs::path p = scratch("perm.json");
  write_text(p, "[2,3,1]");
  CHECK(read_permutation(p, 1).image() == std::vector<Index>{1, 2, 0});
  write_text(p, "[0,0,1]");
  CHECK_CODE(read_permutation(p), ErrorCode::ShapeMismatch);
}
