#pragma once

#include <vector>

#include "foliate/expr.hpp"

namespace foliate {

// Dense matrix of symbolic entries, row-major.
class ExprMatrix {
 public:
  ExprMatrix() = default;
  ExprMatrix(int rows, int cols);
  static ExprMatrix identity(int n);
  static ExprMatrix diagonal(const std::vector<Expr>& d);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Expr& operator()(int i, int j) { return data_[static_cast<std::size_t>(i * cols_ + j)]; }
  const Expr& operator()(int i, int j) const { return data_[static_cast<std::size_t>(i * cols_ + j)]; }

  ExprMatrix transpose() const;
  ExprMatrix normalized() const;
  bool is_zero() const;  // every entry normalizes to 0
  std::vector<Expr> column(int j) const;

  friend ExprMatrix operator*(const ExprMatrix& a, const ExprMatrix& b);
  friend ExprMatrix operator+(const ExprMatrix& a, const ExprMatrix& b);
  friend ExprMatrix operator-(const ExprMatrix& a, const ExprMatrix& b);
  friend ExprMatrix operator*(const Expr& s, const ExprMatrix& a);
  friend bool operator==(const ExprMatrix& a, const ExprMatrix& b);

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Expr> data_;
};

Expr determinant(const ExprMatrix& m);
ExprMatrix minor_matrix(const ExprMatrix& m, int skip_row, int skip_col);
// Inverse by adjugate; throws "singular-matrix" when det normalizes to 0.
ExprMatrix inverse(const ExprMatrix& m);
ExprMatrix substitute(const ExprMatrix& m, const std::map<std::string, Expr>& bindings);
// All q x q minors of a q x n matrix, columns in lexicographic order.
std::vector<std::pair<std::vector<int>, Expr>> maximal_minors(const ExprMatrix& m);

// Exact rational linear algebra.
using RationalMatrix = std::vector<std::vector<Rational>>;
int rank(RationalMatrix m);
// Basis of the null space {x : m x = 0}.
std::vector<std::vector<Rational>> null_space(const RationalMatrix& m, int cols);

std::vector<std::vector<int>> combinations(int n, int k);

}  // namespace foliate
