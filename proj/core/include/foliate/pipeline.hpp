#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "foliate/chernweil.hpp"
#include "foliate/document.hpp"
#include "foliate/geometry.hpp"
#include "foliate/report.hpp"

namespace foliate {

struct RunOptions {
  std::uint64_t seed = 0;
  int samples = 8;
  int grid = 0;  // density grid points per axis, 0 for the default
};

// Geometry on the first chart of a document in its chart-induced normal frame.
struct ResolvedGeometry {
  ChartPtr chart;
  std::vector<Expr> chart_map;
  Metric metric;
  Splitting splitting;
  Connection connection;
  EuclideanStructure eps;
  std::string source;  // "direct", "pullback" or "graph"
};

ResolvedGeometry resolve_geometry(const Document& doc, const RunOptions& options = {});

// Grid points of the first chart where every minor of df vanishes.
std::vector<Point> singular_points(const Document& doc, const RunOptions& options = {});

// Commands: check-cocycle, singular-set, involutivity, adapted-check,
// chern-weil, gv (need a document); wo-cohomology, gf-verify (need q=<k>
// in `args` or a document for its codimension).
Report run_command(const std::string& command, const Document* doc, const std::map<std::string, std::string>& args,
                   const RunOptions& options = {});

bool is_command(const std::string& command);
bool command_needs_document(const std::string& command);

enum class Format { Text, Lines };

std::string emit(const Report& r, Format format);

// 0 when the report has no failure, else 1.
int exit_status(const Report& r);

}  // namespace foliate
