#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "foliate/exterior.hpp"
#include "foliate/report.hpp"
#include "foliate/sampling.hpp"

namespace foliate {

struct AtlasChart {
  std::string name;
  ChartPtr chart;
  std::vector<Expr> domain;  // strict inequalities e > 0
  std::vector<Expr> map;     // f_alpha, q components
};

// h_{ab}: values of f_b to values of f_a.
struct Transition {
  std::string a;
  std::string b;
  std::vector<std::string> vars;
  std::vector<Expr> map;
  std::vector<Expr> domain;  // in the coordinates of chart b
};

struct Atlas {
  std::string name;
  int n = 0;
  int q = 0;
  std::vector<AtlasChart> charts;
  std::vector<Transition> transitions;
  // Coordinates of chart a written in the coordinates of chart b, keyed by
  // (a, b). Charts with equal coordinate names and no entry share coordinates.
  std::map<std::pair<std::string, std::string>, std::vector<Expr>> coordinate_changes;

  const AtlasChart& chart(const std::string& name) const;
  const AtlasChart* find_chart(const std::string& name) const;
  const Transition* find_transition(const std::string& a, const std::string& b) const;
  // The a-coordinates as expressions in the b-coordinates; throws when unrelated.
  std::vector<Expr> coordinate_change(const std::string& a, const std::string& b) const;
};

// Checks dimensions, names and expression variables; throws "semantic".
void validate_atlas(const Atlas& a);

ExprMatrix jacobian(const std::vector<Expr>& f, const std::vector<std::string>& coords);

struct CocycleOptions {
  int samples = 8;
  std::uint64_t seed = 0;
};

Report verify_cocycle(const Atlas& a, const CocycleOptions& options = {});

struct ChartLocus {
  std::string chart;
  std::vector<std::pair<std::vector<int>, Expr>> minors;
};

struct SingularLocus {
  std::vector<ChartLocus> charts;
  const ChartLocus* find(const std::string& chart) const;
  // True when every minor of the chart vanishes at p (decided exactly when possible).
  bool contains(const std::string& chart, const Point& p) const;
};

SingularLocus singular_locus(const Atlas& a);

struct DensityOptions {
  int resolution = 0;  // points per axis; 0 picks max(11, ceil(10000^(1/n))), forced odd
  Rational half_width = 2;
  double threshold = 0.99;
};

struct DensityResult {
  Report report;
  bool haefliger_singular = false;
  std::map<std::string, std::vector<Point>> singular_points;  // grid points per chart
};

int default_resolution(int n);
DensityResult density_check(const Atlas& a, const SingularLocus& locus, const DensityOptions& options = {});

// Charts phi^{-1}(U_a) with maps f_a o phi; transitions unchanged.
Atlas pullback_foliation(const Atlas& target, const std::vector<Expr>& phi, const std::vector<std::string>& coords,
                         const std::string& name = "");

enum class Regularity { Regular, Singular };

Regularity map_regularity(const Atlas& target, const std::vector<Expr>& phi, const std::vector<std::string>& coords,
                          const Point& point);

struct GraphFoliation {
  Atlas graph;
  // Embedding x -> (x, f_a(x)) per chart of the source atlas.
  std::map<std::string, std::vector<Expr>> embedding;
  std::vector<std::string> fibre_coordinates;
};

GraphFoliation graph_foliation(const Atlas& a);

// Fraction-free basis of ker(J) (q x n) built from a q x q minor that is
// nonzero at p; columns are vector fields.
std::vector<VectorField> kernel_fields(const ExprMatrix& j, const Point& p);

Report involutivity_check(const Atlas& a, const std::vector<Point>& points);
// Same check for a coframe of 1-forms given directly on a chart.
Report involutivity_check_forms(const std::vector<DiffForm>& omegas, const std::vector<Point>& points,
                                const std::string& label = "forms");

}  // namespace foliate
