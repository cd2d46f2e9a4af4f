#pragma once

#include <optional>
#include <string>
#include <vector>

#include "foliate/exterior.hpp"
#include "foliate/foliation.hpp"
#include "foliate/jets.hpp"
#include "foliate/report.hpp"

namespace foliate {

struct Metric {
  ChartPtr chart;
  ExprMatrix g;  // n x n, symmetric
};

Metric euclidean_metric(const ChartPtr& chart);
// Symmetry (exact) and leading principal minors > 0 at the given points.
Report check_metric(const Metric& m, const std::vector<Point>& points);

// Columns of `leaf` span ker df; columns of `normal` lift a frame of the
// normal bundle. Normal-bundle coordinates of a vector Z are (df N)^{-1} df Z.
struct Splitting {
  ChartPtr chart;
  ExprMatrix df;      // q x n
  ExprMatrix leaf;    // n x (n - q)
  ExprMatrix normal;  // n x q
  ExprMatrix normal_df_inverse;  // (df N)^{-1}

  int n() const { return df.cols(); }
  int q() const { return df.rows(); }
  VectorField leaf_field(int m) const { return leaf.column(m); }
  VectorField normal_field(int j) const { return normal.column(j); }
  std::vector<Expr> project(const VectorField& z) const;
};

// Leaf fields from the minor construction at `reference` (a regular point);
// normal frame E = g^{-1} df^T (df g^{-1} df^T)^{-1}, so df E = 1.
Splitting metric_splitting(const Metric& g, const std::vector<Expr>& chart_map, const Point& reference);

// Connection on the normal bundle: nabla N_j = theta^i_j N_i.
struct Connection {
  ChartPtr chart;
  MatrixForm theta;  // q x q, degree 1
};

struct EuclideanStructure {
  ChartPtr chart;
  ExprMatrix eps;  // q x q in the normal frame
};

// eps(E_i, E_j) = g(E_i, E_j) = (df g^{-1} df^T)^{-1} for the chart frame.
EuclideanStructure induced_euclidean(const Metric& g, const Splitting& s);

ExprMatrix christoffel(const Metric& g, int upper);  // Gamma^upper_{BC} as an n x n matrix
Connection bott_levi_civita(const Metric& g, const Splitting& s);
Connection zero_connection(const ChartPtr& chart, int q);

MatrixForm curvature(const Connection& c);
Report torsion(const Connection& c, const Splitting& s, const ZeroOptions& options = {});
Report is_bott(const Connection& c, const Splitting& s, const ZeroOptions& options = {});

struct MetricConnection {
  ExprMatrix frame_change;  // A: the eps-orthonormal frame is N A
  Connection onb;           // theta' = A^{-1} theta A + A^{-1} dA
  Connection metric;        // (theta' - theta'^T) / 2
};

MetricConnection metric_connection(const Connection& c, const EuclideanStructure& eps,
                                   const ZeroOptions& options = {});

// Gauge transformation to the frame N A.
MatrixForm change_frame(const MatrixForm& theta, const ExprMatrix& a);

// Transverse 2-jet of s -> f(exp_x(U s)) where U = N A and the ambient
// connection is theta on the normal block and `tangential` (default flat in
// the leaf frame) on the leafwise block. Symbolic in the base point unless
// `at` binds coordinates.
JetMap exp_section_2jet(const Connection& c, const Splitting& s, const std::vector<Expr>& chart_map,
                        const ExprMatrix& a, const std::optional<MatrixForm>& tangential = std::nullopt,
                        const std::map<std::string, Expr>& at = {});

struct AdaptedOptions {
  int rays = 5;
  double tolerance = 1e-6;
  std::uint64_t seed = 0;
};

Report adapted_check(const std::vector<Expr>& chart_map, const Splitting& s, const EuclideanStructure& eps,
                     const Connection& c, const std::vector<Point>& singular_points,
                     const AdaptedOptions& options = {}, const std::string& label = "");

struct PulledGeometry {
  EuclideanStructure eps;
  Connection connection;
};

// Pullback of (eps, theta) given in the chart frame of the target along
// phi; valid in the chart frame of the composite foliation.
PulledGeometry pullback_geometry(const std::vector<Expr>& phi, const ChartPtr& source,
                                 const EuclideanStructure& eps, const Connection& c,
                                 const std::vector<Expr>& target_map);

}  // namespace foliate
