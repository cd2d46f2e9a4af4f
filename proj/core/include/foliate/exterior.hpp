#pragma once

#include <map>
#include <ostream>
#include <memory>
#include <string>
#include <vector>

#include "foliate/expr.hpp"
#include "foliate/linalg.hpp"
#include "foliate/parser.hpp"

namespace foliate {

struct Chart {
  std::string name;
  std::vector<std::string> coordinates;

  int dimension() const { return static_cast<int>(coordinates.size()); }
  int index_of(const std::string& coordinate) const;  // -1 when absent
};

using ChartPtr = std::shared_ptr<const Chart>;

ChartPtr make_chart(const std::string& name, const std::vector<std::string>& coordinates);
bool same_chart(const ChartPtr& a, const ChartPtr& b);

// Components on the coordinate frame of a chart.
using VectorField = std::vector<Expr>;

Expr apply_vector(const VectorField& x, const Expr& f, const Chart& chart);
VectorField lie_bracket(const VectorField& x, const VectorField& y, const Chart& chart);

class DiffForm {
 public:
  using Index = std::vector<int>;

  DiffForm() = default;
  DiffForm(ChartPtr chart, int degree);
  static DiffForm scalar(ChartPtr chart, const Expr& f);
  static DiffForm coordinate(ChartPtr chart, int index);
  static DiffForm coordinate(ChartPtr chart, const std::string& name);

  const ChartPtr& chart() const { return chart_; }
  int degree() const { return degree_; }
  const std::map<Index, Expr>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  Expr coefficient(const Index& increasing) const;

  // Accepts indices in any order; sorts with sign, drops repeated indices
  // and coefficients that normalize to zero.
  void add_term(Index indices, const Expr& coefficient);

  DiffForm operator-() const;
  friend DiffForm operator+(const DiffForm& a, const DiffForm& b);
  friend DiffForm operator-(const DiffForm& a, const DiffForm& b);
  friend DiffForm operator*(const Expr& f, const DiffForm& a);
  friend bool operator==(const DiffForm& a, const DiffForm& b);
  friend bool operator!=(const DiffForm& a, const DiffForm& b) { return !(a == b); }

 private:
  ChartPtr chart_;
  int degree_ = 0;
  std::map<Index, Expr> terms_;
};

DiffForm wedge(const DiffForm& a, const DiffForm& b);
DiffForm exterior_derivative(const DiffForm& a);
DiffForm pullback(const DiffForm& a, const std::vector<Expr>& phi, const ChartPtr& source);
// Substitutes into coefficients only (no Jacobian); used for pointwise values.
DiffForm substitute_coefficients(const DiffForm& a, const std::map<std::string, Expr>& bindings);
// Evaluation on vector fields with the determinant convention.
Expr evaluate_form(const DiffForm& a, const std::vector<VectorField>& fields);
DiffForm interior(const VectorField& x, const DiffForm& a);

std::string to_string(const DiffForm& a);
inline void PrintTo(const DiffForm& a, std::ostream* os) { *os << to_string(a); }
// A bare "0" parses as a zero form of degree `zero_degree`.
DiffForm parse_form(const std::string& text, const ChartPtr& chart, SourceLocation start = {}, int zero_degree = 0);

class MatrixForm {
 public:
  MatrixForm() = default;
  MatrixForm(ChartPtr chart, int rows, int cols, int degree);
  static MatrixForm from_matrix(ChartPtr chart, const ExprMatrix& m);
  // Entry-wise differential of a 0-form matrix.
  static MatrixForm differential(ChartPtr chart, const ExprMatrix& m);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int degree() const { return degree_; }
  const ChartPtr& chart() const { return chart_; }
  DiffForm& operator()(int i, int j) { return entries_[static_cast<std::size_t>(i * cols_ + j)]; }
  const DiffForm& operator()(int i, int j) const { return entries_[static_cast<std::size_t>(i * cols_ + j)]; }

  MatrixForm transpose() const;
  bool is_zero() const;

  friend MatrixForm operator+(const MatrixForm& a, const MatrixForm& b);
  friend MatrixForm operator-(const MatrixForm& a, const MatrixForm& b);
  friend MatrixForm operator*(const Expr& f, const MatrixForm& a);
  friend MatrixForm operator*(const ExprMatrix& m, const MatrixForm& a);
  friend MatrixForm operator*(const MatrixForm& a, const ExprMatrix& m);
  friend bool operator==(const MatrixForm& a, const MatrixForm& b);

 private:
  ChartPtr chart_;
  int rows_ = 0;
  int cols_ = 0;
  int degree_ = 0;
  std::vector<DiffForm> entries_;
};

MatrixForm matrix_wedge(const MatrixForm& a, const MatrixForm& b);
DiffForm trace(const MatrixForm& a);
MatrixForm matrix_power_wedge(const MatrixForm& a, int i);
MatrixForm exterior_derivative(const MatrixForm& a);
MatrixForm pullback(const MatrixForm& a, const std::vector<Expr>& phi, const ChartPtr& source);

// Polynomial in the auxiliary parameter t with form coefficients.
struct TPolyForm {
  std::vector<DiffForm> coefficients;
  void trim();
};

DiffForm integrate_t01(const TPolyForm& p);

struct TPolyMatrix {
  std::vector<MatrixForm> coefficients;
};

TPolyMatrix tpoly_wedge(const TPolyMatrix& a, const TPolyMatrix& b);
TPolyMatrix tpoly_power_wedge(const TPolyMatrix& a, int i);
TPolyForm tpoly_trace(const TPolyMatrix& a);

}  // namespace foliate
