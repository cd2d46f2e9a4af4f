#include "foliate/jets.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "foliate/error.hpp"

namespace foliate {

int order_of(const MultiIndex& alpha) { return std::accumulate(alpha.begin(), alpha.end(), 0); }

Rational multi_factorial(const MultiIndex& alpha) {
  Rational r(1);
  for (int a : alpha) r *= factorial(a);
  return r;
}

std::vector<MultiIndex> multi_indices(int q, int degree) {
  std::vector<MultiIndex> out;
  MultiIndex cur(static_cast<std::size_t>(q), 0);
  auto rec = [&](auto&& self, int pos, int left) -> void {
    if (pos == q - 1) {
      cur[static_cast<std::size_t>(pos)] = left;
      out.push_back(cur);
      return;
    }
    for (int a = left; a >= 0; --a) {
      cur[static_cast<std::size_t>(pos)] = a;
      self(self, pos + 1, left - a);
    }
  };
  if (q > 0) rec(rec, 0, degree);
  return out;
}

std::vector<MultiIndex> multi_indices_upto(int q, int max_degree, int min_degree) {
  std::vector<MultiIndex> out;
  for (int d = min_degree; d <= max_degree; ++d) {
    auto level = multi_indices(q, d);
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

MultiIndex unit_index(int q, int i) {
  MultiIndex a(static_cast<std::size_t>(q), 0);
  a[static_cast<std::size_t>(i)] = 1;
  return a;
}

// ------------------------------------------------------ TruncatedPolynomial

TruncatedPolynomial::TruncatedPolynomial(int vars, int order) : vars_(vars), order_(order) {}

TruncatedPolynomial TruncatedPolynomial::variable(int vars, int order, int i) {
  TruncatedPolynomial p(vars, order);
  p.add(unit_index(vars, i), Expr(1));
  return p;
}

TruncatedPolynomial TruncatedPolynomial::constant(int vars, int order, const Expr& c) {
  TruncatedPolynomial p(vars, order);
  p.add(MultiIndex(static_cast<std::size_t>(vars), 0), c);
  return p;
}

Expr TruncatedPolynomial::coefficient(const MultiIndex& alpha) const {
  auto it = terms_.find(alpha);
  return it == terms_.end() ? Expr(0) : it->second;
}

void TruncatedPolynomial::add(const MultiIndex& alpha, const Expr& c) {
  if (order_of(alpha) > order_ || c.is_zero()) return;
  auto it = terms_.find(alpha);
  Expr v = normalize(it == terms_.end() ? c : it->second + c);
  if (v.is_zero()) {
    if (it != terms_.end()) terms_.erase(it);
  } else if (it == terms_.end()) {
    terms_.emplace(alpha, v);
  } else {
    it->second = v;
  }
}

TruncatedPolynomial TruncatedPolynomial::without_constant() const {
  TruncatedPolynomial r = *this;
  r.terms_.erase(MultiIndex(static_cast<std::size_t>(vars_), 0));
  return r;
}

TruncatedPolynomial TruncatedPolynomial::truncated(int order) const {
  TruncatedPolynomial r(vars_, order);
  for (const auto& [a, c] : terms_) r.add(a, c);
  return r;
}

TruncatedPolynomial operator+(const TruncatedPolynomial& a, const TruncatedPolynomial& b) {
  TruncatedPolynomial r = a;
  for (const auto& [al, c] : b.terms_) r.add(al, c);
  return r;
}

TruncatedPolynomial operator-(const TruncatedPolynomial& a, const TruncatedPolynomial& b) {
  return a + Expr(-1) * b;
}

TruncatedPolynomial operator*(const TruncatedPolynomial& a, const TruncatedPolynomial& b) {
  TruncatedPolynomial r(a.vars_, std::min(a.order_, b.order_));
  for (const auto& [aa, ca] : a.terms_) {
    for (const auto& [ab, cb] : b.terms_) {
      if (order_of(aa) + order_of(ab) > r.order_) continue;
      MultiIndex s = aa;
      for (std::size_t i = 0; i < s.size(); ++i) s[i] += ab[i];
      r.add(s, ca * cb);
    }
  }
  return r;
}

TruncatedPolynomial operator*(const Expr& c, const TruncatedPolynomial& a) {
  TruncatedPolynomial r(a.vars_, a.order_);
  for (const auto& [al, v] : a.terms_) r.add(al, c * v);
  return r;
}

TruncatedPolynomial compose_polynomial(const TruncatedPolynomial& p, const std::vector<TruncatedPolynomial>& s) {
  int vars = s.empty() ? 0 : s[0].vars();
  int order = p.order();
  TruncatedPolynomial r(vars, order);
  // powers[m][e] = s_m^e, built lazily
  std::vector<std::vector<TruncatedPolynomial>> powers(s.size());
  for (std::size_t m = 0; m < s.size(); ++m) {
    powers[m].push_back(TruncatedPolynomial::constant(vars, order, Expr(1)));
  }
  for (const auto& [alpha, c] : p.terms()) {
    TruncatedPolynomial term = TruncatedPolynomial::constant(vars, order, c);
    for (std::size_t m = 0; m < alpha.size(); ++m) {
      while (static_cast<int>(powers[m].size()) <= alpha[m]) powers[m].push_back(powers[m].back() * s[m]);
      if (alpha[m] > 0) term = term * powers[m][static_cast<std::size_t>(alpha[m])];
    }
    r = r + term;
  }
  return r;
}

// ------------------------------------------------------------------ JetMap

JetMap::JetMap(int source_dim, int target_dim, int order, std::vector<Expr> base,
               std::vector<TruncatedPolynomial> components)
    : source_dim_(source_dim), target_dim_(target_dim), order_(order), base_(std::move(base)),
      components_(std::move(components)) {
  if (order < 1 || order > 3) throw Error("order-mismatch", "jet order must be between 1 and 3");
  if (static_cast<int>(base_.size()) != source_dim || static_cast<int>(components_.size()) != target_dim) {
    throw Error("dimension-mismatch", "jet base or component count");
  }
}

JetMap JetMap::identity(int q, int order) {
  std::vector<TruncatedPolynomial> comps;
  for (int i = 0; i < q; ++i) comps.push_back(TruncatedPolynomial::variable(q, order, i));
  return JetMap(q, q, order, std::vector<Expr>(static_cast<std::size_t>(q), Expr(0)), comps);
}

std::vector<Expr> JetMap::value() const {
  std::vector<Expr> v;
  for (const auto& c : components_) v.push_back(c.constant_term());
  return v;
}

Expr JetMap::coefficient(int i, const MultiIndex& alpha) const {
  return components_[static_cast<std::size_t>(i)].coefficient(alpha);
}

ExprMatrix JetMap::linear_part() const {
  ExprMatrix m(target_dim_, source_dim_);
  for (int i = 0; i < target_dim_; ++i) {
    for (int j = 0; j < source_dim_; ++j) m(i, j) = coefficient(i, unit_index(source_dim_, j));
  }
  return m;
}

JetMap JetMap::truncated(int order) const {
  std::vector<TruncatedPolynomial> comps;
  for (const auto& c : components_) comps.push_back(c.truncated(order));
  return JetMap(source_dim_, target_dim_, order, base_, comps);
}

JetMap JetMap::recentred() const {
  std::vector<TruncatedPolynomial> comps;
  for (const auto& c : components_) comps.push_back(c.without_constant());
  return JetMap(source_dim_, target_dim_, order_, std::vector<Expr>(static_cast<std::size_t>(source_dim_), Expr(0)),
                comps);
}

bool operator==(const JetMap& a, const JetMap& b) {
  if (a.source_dim_ != b.source_dim_ || a.target_dim_ != b.target_dim_ || a.order_ != b.order_) return false;
  for (int i = 0; i < a.source_dim_; ++i) {
    if (!is_identically_zero(a.base_[static_cast<std::size_t>(i)] - b.base_[static_cast<std::size_t>(i)])) {
      return false;
    }
  }
  for (int i = 0; i < a.target_dim_; ++i) {
    auto d = a.components_[static_cast<std::size_t>(i)] - b.components_[static_cast<std::size_t>(i)];
    if (!d.terms().empty()) return false;
  }
  return true;
}

JetMap compose_jets(const JetMap& g, const JetMap& f) {
  if (g.order() != f.order()) throw Error("order-mismatch", "composing jets of different order");
  if (f.target_dim() != g.source_dim()) throw Error("dimension-mismatch", "jet composition dimensions");
  auto fv = f.value();
  for (int i = 0; i < g.source_dim(); ++i) {
    if (!is_identically_zero(g.base()[static_cast<std::size_t>(i)] - fv[static_cast<std::size_t>(i)])) {
      throw Error("base-mismatch", "base of outer jet differs from value of inner jet");
    }
  }
  std::vector<TruncatedPolynomial> shifts;
  for (const auto& c : f.components()) shifts.push_back(c.without_constant());
  std::vector<TruncatedPolynomial> comps;
  for (const auto& gc : g.components()) comps.push_back(compose_polynomial(gc, shifts));
  return JetMap(f.source_dim(), g.target_dim(), f.order(), f.base(), comps);
}

JetMap invert_jet(const JetMap& f) {
  if (f.source_dim() != f.target_dim()) throw Error("singular-jet", "non-square jet");
  int q = f.source_dim();
  int k = f.order();
  ExprMatrix lin = f.linear_part();
  if (is_zero(determinant(lin)).status != ZeroStatus::ProvenNonzero) {
    throw Error("singular-jet", "linear part is not invertible");
  }
  ExprMatrix inv = inverse(lin);
  // higher-order part N(s) = f(b + s) - f(b) - L s
  std::vector<TruncatedPolynomial> high;
  for (int i = 0; i < q; ++i) {
    TruncatedPolynomial h(q, k);
    for (const auto& [alpha, c] : f.components()[static_cast<std::size_t>(i)].terms()) {
      if (order_of(alpha) >= 2) h.add(alpha, c);
    }
    high.push_back(h);
  }
  std::vector<TruncatedPolynomial> t;
  for (int i = 0; i < q; ++i) t.push_back(TruncatedPolynomial::variable(q, k, i));
  auto apply_inv = [&](const std::vector<TruncatedPolynomial>& v) {
    std::vector<TruncatedPolynomial> r;
    for (int i = 0; i < q; ++i) {
      TruncatedPolynomial acc(q, k);
      for (int j = 0; j < q; ++j) acc = acc + inv(i, j) * v[static_cast<std::size_t>(j)];
      r.push_back(acc);
    }
    return r;
  };
  std::vector<TruncatedPolynomial> s = apply_inv(t);
  for (int it = 1; it < k; ++it) {
    std::vector<TruncatedPolynomial> rhs;
    for (int i = 0; i < q; ++i) {
      rhs.push_back(t[static_cast<std::size_t>(i)] - compose_polynomial(high[static_cast<std::size_t>(i)], s));
    }
    s = apply_inv(rhs);
  }
  auto value = f.value();
  std::vector<TruncatedPolynomial> comps;
  for (int i = 0; i < q; ++i) {
    comps.push_back(s[static_cast<std::size_t>(i)] +
                    TruncatedPolynomial::constant(q, k, f.base()[static_cast<std::size_t>(i)]));
  }
  return JetMap(q, q, k, value, comps);
}

JetMap prolong_map(const std::vector<Expr>& phi, const std::vector<std::string>& coords,
                   const std::map<std::string, Expr>& at, int order) {
  int n = static_cast<int>(coords.size());
  std::vector<Expr> base;
  for (const auto& c : coords) {
    auto it = at.find(c);
    base.push_back(it == at.end() ? var(c) : it->second);
  }
  std::vector<TruncatedPolynomial> comps;
  for (const auto& f : phi) {
    std::map<MultiIndex, Expr> deriv;
    deriv[MultiIndex(static_cast<std::size_t>(n), 0)] = f;
    TruncatedPolynomial p(n, order);
    for (const auto& alpha : multi_indices_upto(n, order)) {
      if (order_of(alpha) > 0) {
        int j = 0;
        while (alpha[static_cast<std::size_t>(j)] == 0) ++j;
        MultiIndex prev = alpha;
        --prev[static_cast<std::size_t>(j)];
        deriv[alpha] = differentiate(deriv.at(prev), coords[static_cast<std::size_t>(j)]);
      }
      Expr v = substitute(deriv[alpha], at);
      p.add(alpha, v * Expr(Rational(1) / multi_factorial(alpha)));
    }
    comps.push_back(p);
  }
  return JetMap(n, static_cast<int>(phi.size()), order, base, comps);
}

JetMap transition_2jet(const std::vector<std::string>& vars, const std::vector<Expr>& h,
                       const std::vector<Expr>& value) {
  std::map<std::string, Expr> at;
  for (std::size_t i = 0; i < vars.size(); ++i) at[vars[i]] = value[i];
  return prolong_map(h, vars, at, 2).recentred();
}

std::string to_string(const JetMap& j) {
  std::ostringstream os;
  for (int i = 0; i < j.target_dim(); ++i) {
    if (i) os << "; ";
    bool first = true;
    for (const auto& [alpha, c] : j.components()[static_cast<std::size_t>(i)].terms()) {
      if (!first) os << " + ";
      first = false;
      os << "(" << to_string(c) << ")";
      for (std::size_t m = 0; m < alpha.size(); ++m) {
        if (alpha[m] == 1) os << "*s" << m + 1;
        if (alpha[m] > 1) os << "*s" << m + 1 << "^" << alpha[m];
      }
    }
    if (first) os << "0";
  }
  return os.str();
}

}  // namespace foliate
