#include "graphscat/io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "graphscat/errors.hpp"

namespace graphscat {

using nlohmann::json;

Format format_for(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  for (char& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return ext == ".csv" ? Format::Csv : Format::Json;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

namespace {

Error parse_error(const std::string& source, std::size_t line, std::size_t column, const std::string& what) {
  return Error(ErrorCode::ParseError,
               source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + what);
}

bool parse_number(std::string_view token, double& value) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  const char* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, value);
  return ec == std::errc() && ptr == end;
}

struct Token {
  std::string_view text;
  std::size_t line;
  std::size_t column;
};

// Splits one line on commas and whitespace; column is 1-based.
std::vector<Token> split_line(std::string_view line, std::size_t line_no) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    const char c = line[i];
    if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < line.size() && line[j] != ',' && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    out.push_back({line.substr(i, j - i), line_no, i + 1});
    i = j;
  }
  return out;
}

std::vector<std::vector<Token>> split_rows(const std::string& text) {
  std::vector<std::vector<Token>> rows;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    ++line_no;
    std::string_view line(text.data() + start, end - start);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    auto toks = split_line(line, line_no);
    if (!toks.empty()) rows.push_back(std::move(toks));
    start = end + 1;
  }
  return rows;
}

bool looks_like_json(const std::string& text) {
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    return c == '[' || c == '{';
  }
  return false;
}

json parse_json(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    std::size_t col = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw parse_error(source, line, col, "invalid JSON");
  }
}

double json_number(const json& v, const std::string& source) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    if (s == "nan") return NAN;
  }
  throw Error(ErrorCode::ParseError, source + ": expected a number, got " + v.dump());
}

json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

json vector_json(const Vector& v) {
  json a = json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(number(v(i)));
  return a;
}

json matrix_json(const Matrix& m) {
  json a = json::array();
  for (Index i = 0; i < m.rows(); ++i) a.push_back(vector_json(m.row(i).transpose()));
  return a;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

std::string kind_name(FrameKind k) { return k == FrameKind::Tight ? "tight" : "poly"; }

json record_json(const TheoremRecord& r) {
  json j{{"name", r.name}, {"lhs", number(r.lhs)}, {"rhs", number(r.rhs)},
         {"slack", number(r.slack)}, {"pass", r.pass}};
  if (r.ratio) j["ratio"] = number(*r.ratio);
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<Edge> parse_edge_list(std::istream& in, const std::string& source) {
  std::vector<Edge> edges;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    if (auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    const auto toks = split_line(view, line_no);
    if (toks.empty()) continue;
    if (toks.size() < 2 || toks.size() > 3) {
      throw parse_error(source, line_no, toks.front().column, "expected 'u v [w]'");
    }
    Edge e;
    double ids[2];
    for (int k = 0; k < 2; ++k) {
      if (!parse_number(toks[static_cast<std::size_t>(k)].text, ids[k]) || ids[k] != std::floor(ids[k])) {
        throw parse_error(source, line_no, toks[static_cast<std::size_t>(k)].column, "bad vertex id");
      }
    }
    e.u = static_cast<Index>(ids[0]);
    e.v = static_cast<Index>(ids[1]);
    if (toks.size() == 3 && !parse_number(toks[2].text, e.weight)) {
      throw parse_error(source, line_no, toks[2].column, "bad weight");
    }
    edges.push_back(e);
  }
  return edges;
}

Graph read_graph(const std::filesystem::path& path, const EdgeListOptions& options) {
  std::istringstream in(read_text(path));
  const auto edges = parse_edge_list(in, path.string());
  return load_graph(edges, options);
}

Vector parse_vector(const std::string& text, Index n, const std::string& source) {
  std::vector<double> values;
  if (looks_like_json(text)) {
    const json j = parse_json(text, source);
    if (!j.is_array()) throw Error(ErrorCode::ParseError, source + ": expected a JSON array");
    for (const json& v : j) values.push_back(json_number(v, source));
  } else {
    for (const auto& row : split_rows(text)) {
      for (const Token& t : row) {
        double v;
        if (!parse_number(t.text, v)) {
          throw parse_error(source, t.line, t.column, "not a number: '" + std::string(t.text) + "'");
        }
        values.push_back(v);
      }
    }
  }
  if (n >= 0 && static_cast<Index>(values.size()) != n) {
    throw Error(ErrorCode::LengthMismatch, source + ": expected " + std::to_string(n) + " values, found " +
                                               std::to_string(values.size()));
  }
  return Eigen::Map<const Vector>(values.data(), static_cast<Index>(values.size()));
}

Vector read_signal(const std::filesystem::path& path, Index n) {
  return parse_vector(read_text(path), n, path.string());
}

Matrix parse_matrix(const std::string& text, const std::string& source) {
  std::vector<std::vector<double>> rows;
  if (looks_like_json(text)) {
    const json j = parse_json(text, source);
    if (!j.is_array()) throw Error(ErrorCode::ParseError, source + ": expected an array of rows");
    for (const json& r : j) {
      if (!r.is_array()) throw Error(ErrorCode::ParseError, source + ": expected an array of rows");
      std::vector<double> row;
      for (const json& v : r) row.push_back(json_number(v, source));
      rows.push_back(std::move(row));
    }
  } else {
    for (const auto& toks : split_rows(text)) {
      std::vector<double> row;
      for (const Token& t : toks) {
        double v;
        if (!parse_number(t.text, v)) {
          throw parse_error(source, t.line, t.column, "not a number: '" + std::string(t.text) + "'");
        }
        row.push_back(v);
      }
      rows.push_back(std::move(row));
    }
  }
  if (rows.empty()) return Matrix(0, 0);
  Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.front().size()) {
      throw Error(ErrorCode::LengthMismatch, source + ": ragged rows");
    }
    for (std::size_t k = 0; k < rows[i].size(); ++k) {
      m(static_cast<Index>(i), static_cast<Index>(k)) = rows[i][k];
    }
  }
  return m;
}

Matrix read_matrix(const std::filesystem::path& path) { return parse_matrix(read_text(path), path.string()); }

SpectralFunction read_spectral_table(const std::filesystem::path& path) {
  const Matrix m = read_matrix(path);
  if (m.cols() != 2) throw Error(ErrorCode::ParseError, path.string() + ": table needs two columns");
  std::vector<std::pair<double, double>> knots;
  for (Index i = 0; i < m.rows(); ++i) knots.emplace_back(m(i, 0), m(i, 1));
  SpectralFunction f = SpectralFunction::table(std::move(knots));
  f.validate();
  return f;
}

Permutation read_permutation(const std::filesystem::path& path, int index_base) {
  const Vector v = read_signal(path);
  std::vector<Index> image;
  for (Index i = 0; i < v.size(); ++i) {
    if (v(i) != std::floor(v(i))) throw Error(ErrorCode::ParseError, path.string() + ": non-integer entry");
    image.push_back(static_cast<Index>(v(i)) - index_base);
  }
  return Permutation(std::move(image));
}

std::string serialize(const Vector& v, Format format) {
  if (format == Format::Json) return vector_json(v).dump() + "\n";
  std::string s;
  for (Index i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_double(v(i));
  return s + "\n";
}

std::string serialize(const Matrix& m, Format format) {
  if (format == Format::Json) return matrix_json(m).dump() + "\n";
  std::string s;
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index k = 0; k < m.cols(); ++k) s += (k ? "," : "") + format_double(m(i, k));
    s += "\n";
  }
  return s;
}

std::string serialize(const ScatteringOutput& out, Format format) {
  if (format == Format::Csv) {
    std::string s = "path,value\n";
    for (const auto& [path, v] : out.nonwindowed) s += csv_field(path.to_string()) + "," + format_double(v) + "\n";
    return s;
  }
  json coeffs = json::array();
  for (const auto& [path, v] : out.windowed) {
    coeffs.push_back({{"path", path.to_string()}, {"windowed", vector_json(v)},
                      {"nonwindowed", number(out.nonwindowed.at(path))}});
  }
  json energy = json::array();
  for (double e : out.layer_energy) energy.push_back(number(e));
  json wenergy = json::array();
  for (double e : out.windowed_energy) wenergy.push_back(number(e));
  json meta{{"J", out.J},
            {"kind", kind_name(out.kind)},
            {"min_layer", out.min_layer},
            {"max_layer", out.max_layer},
            {"mu", to_string(out.mu)},
            {"n", out.n},
            {"u_layer_energy", energy},
            {"windowed_layer_energy", wenergy},
            {"residual", number(out.residual)}};
  return dump(json{{"metadata", meta}, {"coefficients", coeffs}});
}

std::string serialize(const StabilityReport& r, Format format) {
  if (format == Format::Csv) {
    std::string s = "name,lhs,rhs,slack,pass\n";
    for (const auto& rec : r.records) {
      s += csv_field(rec.name) + "," + format_double(rec.lhs) + "," + format_double(rec.rhs) + "," +
           format_double(rec.slack) + "," + (rec.pass ? "true" : "false") + "\n";
    }
    return s;
  }
  json recs = json::array();
  for (const auto& rec : r.records) recs.push_back(record_json(rec));
  json meta{{"J", r.J},
            {"kind", kind_name(r.kind)},
            {"kappa", number(r.alignment.kappa)},
            {"R", number(r.alignment.bigR)},
            {"lambda1_a", number(r.lambda1_a)},
            {"lambda1_b", number(r.lambda1_b)},
            {"lambda1_star", number(r.lambda1_star)},
            {"eigenvalue_distance", number(r.eigenvalue_distance)},
            {"eigenvector_distance", number(r.eigenvector_distance)},
            {"dT", number(r.distances.dT)},
            {"dK", number(r.distances.dK)},
            {"skipped", r.skipped}};
  return dump(json{{"metadata", meta}, {"records", recs}, {"pass", r.pass()}});
}

std::string serialize(const Certificate& c, Format format) {
  if (format == Format::Csv) {
    std::string s = "id,name,trials,max_violation,tolerance,pass\n";
    for (const auto& k : c.checks) {
      s += k.id + "," + csv_field(k.name) + "," + std::to_string(k.trials) + "," + format_double(k.max_violation) +
           "," + format_double(k.tolerance) + "," + (k.pass ? "true" : "false") + "\n";
    }
    return s;
  }
  json checks = json::array();
  for (const auto& k : c.checks) {
    json j{{"id", k.id},           {"name", k.name},
           {"anchor", k.anchor},   {"trials", k.trials},
           {"max_violation", number(k.max_violation)},
           {"tolerance", number(k.tolerance)},
           {"pass", k.pass}};
    if (!k.note.empty()) j["note"] = k.note;
    checks.push_back(j);
  }
  json meta{{"seed", c.seed}, {"trials", c.trials}, {"eigen_version", std::to_string(EIGEN_WORLD_VERSION) + "." +
                                                                          std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                                                          std::to_string(EIGEN_MINOR_VERSION)}};
  return dump(json{{"metadata", meta}, {"checks", checks}, {"pass", c.pass()}});
}

std::string serialize_frame(const WaveletFrame& frame, const FrameBounds& bounds) {
  json psi = json::array();
  for (const Matrix& p : frame.psi) psi.push_back(matrix_json(p));
  json meta{{"J", frame.J()}, {"kind", kind_name(frame.bank.kind())}, {"n", frame.size()}};
  return dump(json{{"metadata", meta},
                   {"psi", psi},
                   {"phi", matrix_json(frame.phi)},
                   {"bounds", {{"lower", number(bounds.lower)}, {"upper", number(bounds.upper)}}}});
}

}  // namespace graphscat
