#include "foliate/linalg.hpp"

#include "foliate/error.hpp"

namespace foliate {

ExprMatrix::ExprMatrix(int rows, int cols)
    : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows * cols), Expr(0)) {}

ExprMatrix ExprMatrix::identity(int n) {
  ExprMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = Expr(1);
  return m;
}

ExprMatrix ExprMatrix::diagonal(const std::vector<Expr>& d) {
  int n = static_cast<int>(d.size());
  ExprMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = d[static_cast<std::size_t>(i)];
  return m;
}

ExprMatrix ExprMatrix::transpose() const {
  ExprMatrix t(cols_, rows_);
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  }
  return t;
}

ExprMatrix ExprMatrix::normalized() const {
  ExprMatrix t = *this;
  for (auto& e : t.data_) e = normalize(e);
  return t;
}

bool ExprMatrix::is_zero() const {
  for (const auto& e : data_) {
    if (!is_identically_zero(e)) return false;
  }
  return true;
}

std::vector<Expr> ExprMatrix::column(int j) const {
  std::vector<Expr> c;
  for (int i = 0; i < rows_; ++i) c.push_back((*this)(i, j));
  return c;
}

ExprMatrix operator*(const ExprMatrix& a, const ExprMatrix& b) {
  if (a.cols_ != b.rows_) throw Error("size-mismatch", "matrix product");
  ExprMatrix c(a.rows_, b.cols_);
  for (int i = 0; i < a.rows_; ++i) {
    for (int j = 0; j < b.cols_; ++j) {
      Expr s(0);
      for (int k = 0; k < a.cols_; ++k) {
        if (a(i, k).is_zero() || b(k, j).is_zero()) continue;
        s = s + a(i, k) * b(k, j);
      }
      c(i, j) = normalize(s);
    }
  }
  return c;
}

ExprMatrix operator+(const ExprMatrix& a, const ExprMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw Error("size-mismatch", "matrix sum");
  ExprMatrix c(a.rows_, a.cols_);
  for (std::size_t k = 0; k < a.data_.size(); ++k) c.data_[k] = normalize(a.data_[k] + b.data_[k]);
  return c;
}

ExprMatrix operator-(const ExprMatrix& a, const ExprMatrix& b) { return a + Expr(-1) * b; }

ExprMatrix operator*(const Expr& s, const ExprMatrix& a) {
  ExprMatrix c = a;
  for (auto& e : c.data_) e = normalize(s * e);
  return c;
}

bool operator==(const ExprMatrix& a, const ExprMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) return false;
  for (std::size_t k = 0; k < a.data_.size(); ++k) {
    if (!is_identically_zero(a.data_[k] - b.data_[k])) return false;
  }
  return true;
}

ExprMatrix minor_matrix(const ExprMatrix& m, int skip_row, int skip_col) {
  ExprMatrix r(m.rows() - 1, m.cols() - 1);
  for (int i = 0, ri = 0; i < m.rows(); ++i) {
    if (i == skip_row) continue;
    for (int j = 0, rj = 0; j < m.cols(); ++j) {
      if (j == skip_col) continue;
      r(ri, rj++) = m(i, j);
    }
    ++ri;
  }
  return r;
}

Expr determinant(const ExprMatrix& m) {
  if (m.rows() != m.cols()) throw Error("size-mismatch", "determinant of non-square matrix");
  int n = m.rows();
  if (n == 0) return Expr(1);
  if (n == 1) return m(0, 0);
  if (n == 2) return normalize(m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0));
  Expr s(0);
  for (int j = 0; j < n; ++j) {
    if (m(0, j).is_zero()) continue;
    Expr c = m(0, j) * determinant(minor_matrix(m, 0, j));
    s = (j % 2 == 0) ? s + c : s - c;
  }
  return normalize(s);
}

ExprMatrix inverse(const ExprMatrix& m) {
  Expr det = determinant(m);
  if (normalize(det).is_zero()) throw Error("singular-matrix", "matrix is not invertible");
  int n = m.rows();
  Expr inv_det = pow(det, -1);
  ExprMatrix r(n, n);
  if (n == 1) {
    r(0, 0) = normalize(inv_det);
    return r;
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Expr cof = determinant(minor_matrix(m, j, i));
      if ((i + j) % 2 == 1) cof = -cof;
      r(i, j) = normalize(cof * inv_det);
    }
  }
  return r;
}

ExprMatrix substitute(const ExprMatrix& m, const std::map<std::string, Expr>& bindings) {
  ExprMatrix r(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) r(i, j) = substitute(m(i, j), bindings);
  }
  return r;
}

std::vector<std::vector<int>> combinations(int n, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  auto rec = [&](auto&& self, int start) -> void {
    if (static_cast<int>(cur.size()) == k) {
      out.push_back(cur);
      return;
    }
    for (int i = start; i < n; ++i) {
      cur.push_back(i);
      self(self, i + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

std::vector<std::pair<std::vector<int>, Expr>> maximal_minors(const ExprMatrix& m) {
  std::vector<std::pair<std::vector<int>, Expr>> out;
  for (const auto& cols : combinations(m.cols(), m.rows())) {
    ExprMatrix sub(m.rows(), m.rows());
    for (int i = 0; i < m.rows(); ++i) {
      for (int j = 0; j < m.rows(); ++j) sub(i, j) = m(i, cols[static_cast<std::size_t>(j)]);
    }
    out.emplace_back(cols, determinant(sub));
  }
  return out;
}

namespace {

// Reduced row echelon form in place; returns pivot columns.
std::vector<int> rref(RationalMatrix& m) {
  std::vector<int> pivots;
  if (m.empty()) return pivots;
  std::size_t rows = m.size();
  std::size_t cols = m[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && m[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(m[p], m[r]);
    Rational inv = Rational(1) / m[r][c];
    for (auto& v : m[r]) v *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      Rational f = m[i][c];
      for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    pivots.push_back(static_cast<int>(c));
    ++r;
  }
  return pivots;
}

}  // namespace

int rank(RationalMatrix m) { return static_cast<int>(rref(m).size()); }

std::vector<std::vector<Rational>> null_space(const RationalMatrix& m, int cols) {
  RationalMatrix a = m;
  std::vector<int> pivots = rref(a);
  std::vector<bool> is_pivot(static_cast<std::size_t>(cols), false);
  for (int p : pivots) is_pivot[static_cast<std::size_t>(p)] = true;
  std::vector<std::vector<Rational>> basis;
  for (int f = 0; f < cols; ++f) {
    if (is_pivot[static_cast<std::size_t>(f)]) continue;
    std::vector<Rational> v(static_cast<std::size_t>(cols), Rational(0));
    v[static_cast<std::size_t>(f)] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) {
      v[static_cast<std::size_t>(pivots[r])] = -a[r][static_cast<std::size_t>(f)];
    }
    basis.push_back(v);
  }
  return basis;
}

}  // namespace foliate
