#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <utility>
#include <vector>

#include "graphscat/graph.hpp"
#include "graphscat/harness.hpp"
#include "graphscat/permutation.hpp"
#include "graphscat/scattering.hpp"
#include "graphscat/spectral.hpp"
#include "graphscat/stability.hpp"
#include "graphscat/types.hpp"

namespace graphscat {

enum class Format { Json, Csv };

// Picks Csv for a ".csv" extension, Json otherwise.
Format format_for(const std::filesystem::path& path);

// "u v [w]" per line, '#' starts a comment, missing weight means 1.
std::vector<Edge> parse_edge_list(std::istream& in, const std::string& source = "<input>");
Graph read_graph(const std::filesystem::path& path, const EdgeListOptions& options = {});

// Numeric list as JSON array or comma/whitespace separated text. Throws
// ParseError (with line and column) or LengthMismatch when n >= 0 and differs.
Vector parse_vector(const std::string& text, Index n = -1, const std::string& source = "<input>");
Vector read_signal(const std::filesystem::path& path, Index n = -1);
// JSON array of rows or CSV with one row per line.
Matrix parse_matrix(const std::string& text, const std::string& source = "<input>");
Matrix read_matrix(const std::filesystem::path& path);
// Two columns (omega, g(omega)).
SpectralFunction read_spectral_table(const std::filesystem::path& path);
// Vertex images, 0-based unless index_base says otherwise.
Permutation read_permutation(const std::filesystem::path& path, int index_base = 0);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

// Canonical serialisations: JSON objects with sorted keys and shortest
// round-trip doubles, CSV with 17 significant digits.
std::string format_double(double v);
std::string serialize(const Vector& v, Format format);
std::string serialize(const Matrix& m, Format format);
std::string serialize(const ScatteringOutput& out, Format format);
std::string serialize(const StabilityReport& report, Format format);
std::string serialize(const Certificate& cert, Format format);
std::string serialize_frame(const WaveletFrame& frame, const FrameBounds& bounds);

template <class T>
void write_output(const T& value, const std::filesystem::path& path, Format format) {
  write_text(path, serialize(value, format));
}

}  // namespace graphscat
