#include "support.hpp"

#include <filesystem>
#include <sstream>

#include <json.hpp>

#include "graphscat/cli.hpp"
#include "graphscat/io.hpp"

using namespace graphscat;
using namespace testing;
namespace fs = std::filesystem;

namespace {

struct Files {
  fs::path dir = fs::temp_directory_path() / "graphscat_cli_test";
  fs::path graph = dir / "g.txt";
  fs::path graph_b = dir / "h.txt";
  fs::path signal = dir / "x.csv";
  Files() {
    fs::create_directories(dir);
    write_text(graph, "# path\n0 1\n1 2\n2 3 2\n");
    write_text(graph_b, "0 1 1.1\n1 2\n2 3 1.9\n");
    write_text(signal, "1,0,0.5,-1\n");
  }
};

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "graphscat");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("features config") {
  const Files f;
  const CliConfig c = parse_cli({"features", "--graph", f.graph.string(), "--signal", f.signal.string(), "--J", "3",
                                 "--layers", "0:2"});
  CHECK(c.subcommand == Subcommand::Features);
  CHECK(c.J == 3);
  CHECK(c.min_layer == 0);
  CHECK(c.max_layer == 2);
  CHECK(c.M == "identity");
  CHECK(c.g == "gstar");
  CHECK(c.mu == "u0");
  CHECK_FALSE(c.kind.has_value());

  const CliConfig d = parse_cli({"features", "--graph", f.graph.string(), "--signal", f.signal.string(), "--layers",
                                 "1:3", "--kind", "poly", "--M", "dsqrt", "--mu", "ones", "--one-based"});
  CHECK(d.min_layer == 1);
  CHECK(d.max_layer == 3);
  CHECK(*d.kind == FrameKind::Poly);
  CHECK(d.index_base == 1);
}

TEST_CASE("usage errors") {
  const Files f;
  const std::string g = f.graph.string();
  const std::string s = f.signal.string();
  CHECK_CODE(parse_cli({"features", "--graph", g, "--signal", s, "--layers", "3:1"}), ErrorCode::UsageError);
  CHECK_CODE(parse_cli({"features", "--graph", g, "--signal", s, "--layers", "a:b"}), ErrorCode::UsageError);
  CHECK_CODE(parse_cli({"features", "--graph", g, "--signal", s, "--kind", "fancy"}), ErrorCode::UsageError);
  CHECK_CODE(parse_cli({"features", "--graph", g, "--signal", s, "--M", "diag"}), ErrorCode::UsageError);
  CHECK_CODE(parse_cli({"features", "--graph", g}), ErrorCode::UsageError);
  CHECK_CODE(parse_cli({"nonsense"}), ErrorCode::UsageError);
  CHECK_CODE(parse_cli(std::vector<std::string>{}), ErrorCode::UsageError);
  CHECK_CODE(parse_cli({"verify", "--trials", "0"}), ErrorCode::UsageError);

  const std::string missing = (f.dir / "nope.csv").string();
  try {
    parse_cli({"features", "--graph", g, "--signal", missing});
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UsageError);
    CHECK(std::string(e.what()).find(missing) != std::string::npos);
  }
  CHECK_CODE(parse_cli({"features", "--graph", g, "--signal", s, "--M", "file:" + missing}), ErrorCode::UsageError);
  CHECK_CODE(parse_cli({"features", "--graph", g, "--signal", s, "--g", "table:" + missing}), ErrorCode::UsageError);

  const Run r = invoke({"features", "--graph", g, "--signal", s, "--layers", "3:1"});
  CHECK(r.code == kExitUsage);
  CHECK(r.err.find("--layers") != std::string::npos);
  CHECK(invoke({"--help"}).code == kExitOk);
}

TEST_CASE("features end to end") {
  const Files f;
  const fs::path out = f.dir / "features.json";
  const Run r = invoke({"features", "--graph", f.graph.string(), "--signal", f.signal.string(), "--J", "1",
                        "--layers", "0:2", "--out", out.string()});
  REQUIRE(r.code == kExitOk);
  const auto j = nlohmann::json::parse(read_text(out));
  CHECK(j["coefficients"].size() == 1 + 2 + 4);
  CHECK(j["metadata"]["kind"] == "tight");

  const Run csv = invoke({"features", "--graph", f.graph.string(), "--signal", f.signal.string(), "--J", "1",
                          "--format", "csv"});
  CHECK(csv.code == kExitOk);
  CHECK(csv.out.rfind("path,value\n", 0) == 0);

  const fs::path bad = f.dir / "short.csv";
  write_text(bad, "1,2\n");
  const Run mismatch = invoke({"features", "--graph", f.graph.string(), "--signal", bad.string()});
  CHECK(mismatch.code == kExitRuntime);
  CHECK(mismatch.err.find("LengthMismatch") != std::string::npos);
}

TEST_CASE("frame check, spectra and stability") {
  const Files f;
  const fs::path dump = f.dir / "frame.json";
  const Run fc = invoke({"frame-check", "--graph", f.graph.string(), "--J", "2", "--kind", "poly", "--M", "dinvsqrt",
                         "--dump", dump.string()});
  CHECK(fc.code == kExitOk);
  CHECK(fc.out.find("PASS") != std::string::npos);
  const auto j = nlohmann::json::parse(read_text(dump));
  CHECK(j["psi"].size() == 3);
  CHECK(j["phi"].size() == 4);

  const Run sp = invoke({"spectra", "--graph", f.graph.string()});
  CHECK(sp.code == kExitOk);
  CHECK(sp.out.find("spectral gap") != std::string::npos);
  CHECK(sp.out.find("0,0,1\n") != std::string::npos);

  const fs::path rep = f.dir / "report.json";
  const Run st = invoke({"stability", "--graph-a", f.graph.string(), "--graph-b", f.graph_b.string(), "--M", "dsqrt",
                         "--J", "2", "--perm", "search", "--out", rep.string()});
  CHECK(st.code == kExitOk);
  const auto jr = nlohmann::json::parse(read_text(rep));
  CHECK(jr["pass"] == true);
  for (const auto& rec : jr["records"]) {
    CHECK(rec.contains("lhs"));
    CHECK(rec.contains("rhs"));
    CHECK(rec.contains("slack"));
    CHECK(rec.contains("pass"));
  }

  const fs::path tri = f.dir / "tri.txt";
  write_text(tri, "0 1\n1 2\n");
  const Run sz = invoke({"stability", "--graph-a", f.graph.string(), "--graph-b", tri.string()});
  CHECK(sz.code == kExitRuntime);
}

TEST_CASE("verify writes a certificate") {
  const Files f;
  const fs::path cert = f.dir / "cert.csv";
  const Run r = invoke({"verify", "--seed", "4", "--trials", "5", "--out", cert.string()});
  CHECK(r.code == kExitOk);
  CHECK(read_text(cert).rfind("id,name,trials,max_violation,tolerance,pass\n", 0) == 0);
}
