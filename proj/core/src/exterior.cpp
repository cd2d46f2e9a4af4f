#include "foliate/exterior.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "foliate/error.hpp"

namespace foliate {

int Chart::index_of(const std::string& coordinate) const {
  for (std::size_t i = 0; i < coordinates.size(); ++i) {
    if (coordinates[i] == coordinate) return static_cast<int>(i);
  }
  return -1;
}

ChartPtr make_chart(const std::string& name, const std::vector<std::string>& coordinates) {
  std::set<std::string> seen(coordinates.begin(), coordinates.end());
  if (seen.size() != coordinates.size()) throw Error("chart", "duplicate coordinate names in chart " + name);
  if (coordinates.empty()) throw Error("chart", "chart " + name + " has no coordinates");
  return std::make_shared<const Chart>(Chart{name, coordinates});
}

bool same_chart(const ChartPtr& a, const ChartPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return a->name == b->name && a->coordinates == b->coordinates;
}

namespace {

void check_chart(const ChartPtr& a, const ChartPtr& b) {
  if (!same_chart(a, b)) throw Error("chart-mismatch", "forms live on different charts");
}

// Sorts indices in place; returns the permutation sign, 0 on a repeat.
int sort_with_sign(std::vector<int>& idx) {
  int sign = 1;
  for (std::size_t i = 1; i < idx.size(); ++i) {
    for (std::size_t j = i; j > 0 && idx[j - 1] > idx[j]; --j) {
      std::swap(idx[j - 1], idx[j]);
      sign = -sign;
    }
  }
  for (std::size_t i = 1; i < idx.size(); ++i) {
    if (idx[i] == idx[i - 1]) return 0;
  }
  return sign;
}

}  // namespace

Expr apply_vector(const VectorField& x, const Expr& f, const Chart& chart) {
  Expr s(0);
  for (int i = 0; i < chart.dimension(); ++i) {
    const Expr& xi = x[static_cast<std::size_t>(i)];
    if (xi.is_zero()) continue;
    s = s + xi * differentiate(f, chart.coordinates[static_cast<std::size_t>(i)]);
  }
  return normalize(s);
}

VectorField lie_bracket(const VectorField& x, const VectorField& y, const Chart& chart) {
  VectorField out;
  for (int a = 0; a < chart.dimension(); ++a) {
    out.push_back(normalize(apply_vector(x, y[static_cast<std::size_t>(a)], chart) -
                            apply_vector(y, x[static_cast<std::size_t>(a)], chart)));
  }
  return out;
}

// ---------------------------------------------------------------- DiffForm

DiffForm::DiffForm(ChartPtr chart, int degree) : chart_(std::move(chart)), degree_(degree) {
  if (degree < 0) throw Error("degree", "negative form degree");
}

DiffForm DiffForm::scalar(ChartPtr chart, const Expr& f) {
  DiffForm a(std::move(chart), 0);
  a.add_term({}, f);
  return a;
}

DiffForm DiffForm::coordinate(ChartPtr chart, int index) {
  DiffForm a(std::move(chart), 1);
  a.add_term({index}, Expr(1));
  return a;
}

DiffForm DiffForm::coordinate(ChartPtr chart, const std::string& name) {
  int i = chart->index_of(name);
  if (i < 0) throw Error("unknown-variable", "'" + name + "' is not a coordinate of chart " + chart->name);
  return coordinate(std::move(chart), i);
}

Expr DiffForm::coefficient(const Index& increasing) const {
  auto it = terms_.find(increasing);
  return it == terms_.end() ? Expr(0) : it->second;
}

void DiffForm::add_term(Index indices, const Expr& coefficient) {
  if (static_cast<int>(indices.size()) != degree_) throw Error("degree-mismatch", "term degree differs from form");
  if (coefficient.is_zero()) return;
  int sign = sort_with_sign(indices);
  if (sign == 0) return;
  auto it = terms_.find(indices);
  Expr c = sign > 0 ? coefficient : -coefficient;
  if (it == terms_.end()) {
    Expr n = normalize(c);
    if (!n.is_zero()) terms_.emplace(std::move(indices), n);
  } else {
    Expr n = normalize(it->second + c);
    if (n.is_zero()) {
      terms_.erase(it);
    } else {
      it->second = n;
    }
  }
}

DiffForm DiffForm::operator-() const {
  DiffForm r = *this;
  for (auto& [k, v] : r.terms_) v = -v;
  return r;
}

DiffForm operator+(const DiffForm& a, const DiffForm& b) {
  check_chart(a.chart_, b.chart_);
  if (a.degree_ != b.degree_) throw Error("degree-mismatch", "sum of forms of different degree");
  DiffForm r = a;
  for (const auto& [k, v] : b.terms_) r.add_term(k, v);
  return r;
}

DiffForm operator-(const DiffForm& a, const DiffForm& b) { return a + (-b); }

DiffForm operator*(const Expr& f, const DiffForm& a) {
  DiffForm r(a.chart_, a.degree_);
  if (f.is_zero()) return r;
  for (const auto& [k, v] : a.terms_) r.add_term(k, f * v);
  return r;
}

bool operator==(const DiffForm& a, const DiffForm& b) {
  if (!same_chart(a.chart_, b.chart_) || a.degree_ != b.degree_) return false;
  return (a - b).is_zero();
}

DiffForm wedge(const DiffForm& a, const DiffForm& b) {
  check_chart(a.chart(), b.chart());
  int deg = a.degree() + b.degree();
  DiffForm r(a.chart(), deg);
  if (deg > a.chart()->dimension()) return r;
  for (const auto& [ia, ca] : a.terms()) {
    for (const auto& [ib, cb] : b.terms()) {
      DiffForm::Index idx = ia;
      idx.insert(idx.end(), ib.begin(), ib.end());
      r.add_term(std::move(idx), ca * cb);
    }
  }
  return r;
}

DiffForm exterior_derivative(const DiffForm& a) {
  const Chart& ch = *a.chart();
  DiffForm r(a.chart(), a.degree() + 1);
  for (const auto& [idx, c] : a.terms()) {
    for (int j = 0; j < ch.dimension(); ++j) {
      Expr dc = differentiate(c, ch.coordinates[static_cast<std::size_t>(j)]);
      if (dc.is_zero()) continue;
      DiffForm::Index k = {j};
      k.insert(k.end(), idx.begin(), idx.end());
      r.add_term(std::move(k), dc);
    }
  }
  return r;
}

DiffForm pullback(const DiffForm& a, const std::vector<Expr>& phi, const ChartPtr& source) {
  const Chart& target = *a.chart();
  if (static_cast<int>(phi.size()) != target.dimension()) {
    throw Error("dimension-mismatch", "pullback map has wrong number of components");
  }
  std::map<std::string, Expr> bind;
  for (int i = 0; i < target.dimension(); ++i) {
    bind[target.coordinates[static_cast<std::size_t>(i)]] = phi[static_cast<std::size_t>(i)];
  }
  std::vector<DiffForm> dphi;
  for (const auto& p : phi) dphi.push_back(exterior_derivative(DiffForm::scalar(source, p)));
  DiffForm r(source, a.degree());
  for (const auto& [idx, c] : a.terms()) {
    DiffForm term = DiffForm::scalar(source, substitute(c, bind));
    for (int i : idx) term = wedge(term, dphi[static_cast<std::size_t>(i)]);
    r = r + term;
  }
  return r;
}

DiffForm substitute_coefficients(const DiffForm& a, const std::map<std::string, Expr>& bindings) {
  DiffForm r(a.chart(), a.degree());
  for (const auto& [idx, c] : a.terms()) r.add_term(idx, substitute(c, bindings));
  return r;
}

Expr evaluate_form(const DiffForm& a, const std::vector<VectorField>& fields) {
  if (static_cast<int>(fields.size()) != a.degree()) throw Error("degree-mismatch", "wrong number of vectors");
  Expr total(0);
  int k = a.degree();
  for (const auto& [idx, c] : a.terms()) {
    ExprMatrix m(k, k);
    for (int r = 0; r < k; ++r) {
      for (int s = 0; s < k; ++s) {
        m(r, s) = fields[static_cast<std::size_t>(s)][static_cast<std::size_t>(idx[static_cast<std::size_t>(r)])];
      }
    }
    total = total + c * determinant(m);
  }
  return normalize(total);
}

DiffForm interior(const VectorField& x, const DiffForm& a) {
  if (a.degree() == 0) return DiffForm(a.chart(), 0);
  DiffForm r(a.chart(), a.degree() - 1);
  for (const auto& [idx, c] : a.terms()) {
    for (std::size_t p = 0; p < idx.size(); ++p) {
      const Expr& xi = x[static_cast<std::size_t>(idx[p])];
      if (xi.is_zero()) continue;
      DiffForm::Index rest = idx;
      rest.erase(rest.begin() + static_cast<long>(p));
      r.add_term(std::move(rest), (p % 2 == 0 ? Expr(1) : Expr(-1)) * xi * c);
    }
  }
  return r;
}

std::string to_string(const DiffForm& a) {
  if (a.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [idx, c] : a.terms()) {
    std::string mono;
    for (std::size_t i = 0; i < idx.size(); ++i) {
      if (i) mono += '^';
      mono += "d" + a.chart()->coordinates[static_cast<std::size_t>(idx[i])];
    }
    std::string coef = to_string(c);
    std::string term;
    if (idx.empty()) {
      term = c.kind() == Expr::Kind::Sum ? "(" + coef + ")" : coef;
    } else if (c.is_one()) {
      term = mono;
    } else if (c == Expr(-1)) {
      term = "-" + mono;
    } else if (c.kind() == Expr::Kind::Sum) {
      term = "(" + coef + ")*" + mono;
    } else {
      term = coef + "*" + mono;
    }
    if (first) {
      os << term;
    } else if (term[0] == '-') {
      os << " - " << term.substr(1);
    } else {
      os << " + " << term;
    }
    first = false;
  }
  return os.str();
}

namespace {

int differential_index(const Token& t, const Chart& chart) {
  if (t.kind != Token::Kind::Ident || t.text.size() < 2 || t.text[0] != 'd') return -1;
  return chart.index_of(t.text.substr(1));
}

}  // namespace

DiffForm parse_form(const std::string& text, const ChartPtr& chart, SourceLocation start, int zero_degree) {
  ExprParser p(tokenize(text, start), &chart->coordinates);
  struct Term {
    Expr coef;
    DiffForm::Index idx;
  };
  std::vector<Term> terms;
  auto parse_dmono = [&]() {
    DiffForm::Index idx;
    idx.push_back(differential_index(p.next(), *chart));
    while (p.peek().kind == Token::Kind::Symbol && p.peek().text == "^") {
      p.next();
      int k = differential_index(p.peek(), *chart);
      if (k < 0) p.fail("expected a coordinate differential after '^'");
      p.next();
      idx.push_back(k);
    }
    return idx;
  };
  auto parse_term = [&](bool negate) {
    Term t{Expr(1), {}};
    if (differential_index(p.peek(), *chart) >= 0) {
      t.idx = parse_dmono();
    } else {
      t.coef = p.parse_unary();
      for (;;) {
        if (p.peek().kind == Token::Kind::Symbol && p.peek().text == "*") {
          if (differential_index(p.peek(1), *chart) >= 0) {
            p.next();
            t.idx = parse_dmono();
            break;
          }
          p.next();
          t.coef = t.coef * p.parse_unary();
        } else if (p.peek().kind == Token::Kind::Symbol && p.peek().text == "/") {
          p.next();
          Expr d = p.parse_unary();
          if (d.is_zero()) p.fail("division by zero");
          t.coef = t.coef / d;
        } else {
          break;
        }
      }
    }
    if (negate) t.coef = -t.coef;
    terms.push_back(t);
  };
  parse_term(p.accept("-"));
  while (!p.at_end()) {
    if (p.accept("+")) {
      parse_term(false);
    } else if (p.accept("-")) {
      parse_term(true);
    } else {
      p.fail("unexpected '" + p.peek().text + "' in form");
    }
  }
  int degree = static_cast<int>(terms.front().idx.size());
  if (terms.size() == 1 && degree == 0 && terms.front().coef.is_zero()) return DiffForm(chart, zero_degree);
  for (const auto& t : terms) {
    if (static_cast<int>(t.idx.size()) != degree) {
      throw ParseError(start, "form mixes degrees " + std::to_string(degree) + " and " +
                                  std::to_string(t.idx.size()));
    }
  }
  if (degree > chart->dimension()) throw ParseError(start, "form degree exceeds chart dimension");
  DiffForm r(chart, degree);
  for (const auto& t : terms) r.add_term(t.idx, t.coef);
  return r;
}

// -------------------------------------------------------------- MatrixForm

MatrixForm::MatrixForm(ChartPtr chart, int rows, int cols, int degree)
    : chart_(std::move(chart)), rows_(rows), cols_(cols), degree_(degree) {
  entries_.assign(static_cast<std::size_t>(rows * cols), DiffForm(chart_, degree));
}

MatrixForm MatrixForm::from_matrix(ChartPtr chart, const ExprMatrix& m) {
  MatrixForm r(chart, m.rows(), m.cols(), 0);
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) r(i, j) = DiffForm::scalar(chart, m(i, j));
  }
  return r;
}

MatrixForm MatrixForm::differential(ChartPtr chart, const ExprMatrix& m) {
  return exterior_derivative(from_matrix(std::move(chart), m));
}

MatrixForm MatrixForm::transpose() const {
  MatrixForm r(chart_, cols_, rows_, degree_);
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
  }
  return r;
}

bool MatrixForm::is_zero() const {
  return std::all_of(entries_.begin(), entries_.end(), [](const DiffForm& f) { return f.is_zero(); });
}

MatrixForm operator+(const MatrixForm& a, const MatrixForm& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw Error("size-mismatch", "matrix form sum");
  MatrixForm r = a;
  for (std::size_t k = 0; k < r.entries_.size(); ++k) r.entries_[k] = a.entries_[k] + b.entries_[k];
  return r;
}

MatrixForm operator-(const MatrixForm& a, const MatrixForm& b) { return a + Expr(-1) * b; }

MatrixForm operator*(const Expr& f, const MatrixForm& a) {
  MatrixForm r = a;
  for (auto& e : r.entries_) e = f * e;
  return r;
}

MatrixForm operator*(const ExprMatrix& m, const MatrixForm& a) {
  if (m.cols() != a.rows_) throw Error("size-mismatch", "matrix times matrix form");
  MatrixForm r(a.chart_, m.rows(), a.cols_, a.degree_);
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < a.cols_; ++j) {
      for (int k = 0; k < m.cols(); ++k) {
        if (!m(i, k).is_zero()) r(i, j) = r(i, j) + m(i, k) * a(k, j);
      }
    }
  }
  return r;
}

MatrixForm operator*(const MatrixForm& a, const ExprMatrix& m) {
  if (a.cols_ != m.rows()) throw Error("size-mismatch", "matrix form times matrix");
  MatrixForm r(a.chart_, a.rows_, m.cols(), a.degree_);
  for (int i = 0; i < a.rows_; ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      for (int k = 0; k < a.cols_; ++k) {
        if (!m(k, j).is_zero()) r(i, j) = r(i, j) + m(k, j) * a(i, k);
      }
    }
  }
  return r;
}

bool operator==(const MatrixForm& a, const MatrixForm& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) return false;
  for (std::size_t k = 0; k < a.entries_.size(); ++k) {
    if (a.entries_[k] != b.entries_[k]) return false;
  }
  return true;
}

MatrixForm matrix_wedge(const MatrixForm& a, const MatrixForm& b) {
  if (a.cols() != b.rows()) throw Error("size-mismatch", "matrix wedge");
  check_chart(a.chart(), b.chart());
  MatrixForm r(a.chart(), a.rows(), b.cols(), a.degree() + b.degree());
  for (int i = 0; i < a.rows(); ++i) {
    for (int k = 0; k < b.cols(); ++k) {
      for (int j = 0; j < a.cols(); ++j) {
        if (a(i, j).is_zero() || b(j, k).is_zero()) continue;
        r(i, k) = r(i, k) + wedge(a(i, j), b(j, k));
      }
    }
  }
  return r;
}

DiffForm trace(const MatrixForm& a) {
  if (a.rows() != a.cols()) throw Error("size-mismatch", "trace of non-square matrix form");
  DiffForm r = a(0, 0);
  for (int i = 1; i < a.rows(); ++i) r = r + a(i, i);
  return r;
}

MatrixForm matrix_power_wedge(const MatrixForm& a, int i) {
  if (i < 1) throw Error("size-mismatch", "wedge power must be positive");
  MatrixForm r = a;
  for (int k = 1; k < i; ++k) r = matrix_wedge(r, a);
  return r;
}

MatrixForm exterior_derivative(const MatrixForm& a) {
  MatrixForm r(a.chart(), a.rows(), a.cols(), a.degree() + 1);
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) r(i, j) = exterior_derivative(a(i, j));
  }
  return r;
}

MatrixForm pullback(const MatrixForm& a, const std::vector<Expr>& phi, const ChartPtr& source) {
  MatrixForm r(source, a.rows(), a.cols(), a.degree());
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) r(i, j) = pullback(a(i, j), phi, source);
  }
  return r;
}

// ------------------------------------------------------------ t-polynomials

void TPolyForm::trim() {
  while (coefficients.size() > 1 && coefficients.back().is_zero()) coefficients.pop_back();
}

DiffForm integrate_t01(const TPolyForm& p) {
  if (p.coefficients.empty()) throw Error("empty", "empty t-polynomial");
  DiffForm r(p.coefficients[0].chart(), p.coefficients[0].degree());
  for (std::size_t k = 0; k < p.coefficients.size(); ++k) {
    r = r + Expr(make_rational(1, static_cast<long>(k + 1))) * p.coefficients[k];
  }
  return r;
}

TPolyMatrix tpoly_wedge(const TPolyMatrix& a, const TPolyMatrix& b) {
  TPolyMatrix r;
  if (a.coefficients.empty() || b.coefficients.empty()) return r;
  const MatrixForm& a0 = a.coefficients[0];
  const MatrixForm& b0 = b.coefficients[0];
  MatrixForm zero(a0.chart(), a0.rows(), b0.cols(), a0.degree() + b0.degree());
  r.coefficients.assign(a.coefficients.size() + b.coefficients.size() - 1, zero);
  for (std::size_t i = 0; i < a.coefficients.size(); ++i) {
    if (a.coefficients[i].is_zero()) continue;
    for (std::size_t j = 0; j < b.coefficients.size(); ++j) {
      if (b.coefficients[j].is_zero()) continue;
      r.coefficients[i + j] = r.coefficients[i + j] + matrix_wedge(a.coefficients[i], b.coefficients[j]);
    }
  }
  while (r.coefficients.size() > 1 && r.coefficients.back().is_zero()) r.coefficients.pop_back();
  return r;
}

TPolyMatrix tpoly_power_wedge(const TPolyMatrix& a, int i) {
  TPolyMatrix r = a;
  for (int k = 1; k < i; ++k) r = tpoly_wedge(r, a);
  return r;
}

TPolyForm tpoly_trace(const TPolyMatrix& a) {
  TPolyForm r;
  for (const auto& m : a.coefficients) r.coefficients.push_back(trace(m));
  r.trim();
  return r;
}

}  // namespace foliate
