#include "foliate/gelfand_fuks.hpp"

#include <algorithm>
#include <sstream>

#include "foliate/error.hpp"

namespace foliate {

namespace {

long binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Number of alpha in N^parts with |alpha| == n.
long compositions(int n, int parts) {
  if (parts == 0) return n == 0 ? 1 : 0;
  return binomial(n + parts - 1, parts - 1);
}

int order_offset(int q, int order) {
  long total = 0;
  for (int o = 0; o < order; ++o) total += q * compositions(o, q);
  return static_cast<int>(total);
}

// Position of alpha among multi_indices(q, |alpha|).
int alpha_rank(const MultiIndex& alpha) {
  int q = static_cast<int>(alpha.size());
  int rem = order_of(alpha);
  long rank = 0;
  for (int p = 0; p < q; ++p) {
    for (int v = rem; v > alpha[p]; --v) rank += compositions(rem - v, q - p - 1);
    rem -= alpha[p];
  }
  return static_cast<int>(rank);
}

int sort_with_sign(std::vector<int>& t) {
  int sign = 1;
  for (std::size_t i = 1; i < t.size(); ++i)
    for (std::size_t j = i; j > 0 && t[j - 1] > t[j]; --j) {
      std::swap(t[j - 1], t[j]);
      sign = -sign;
    }
  for (std::size_t i = 1; i < t.size(); ++i)
    if (t[i] == t[i - 1]) return 0;
  return sign;
}

Rational determinant(std::vector<std::vector<Rational>> m) {
  int n = static_cast<int>(m.size());
  Rational det = 1;
  for (int c = 0; c < n; ++c) {
    int pivot = -1;
    for (int r = c; r < n; ++r)
      if (m[r][c] != 0) { pivot = r; break; }
    if (pivot < 0) return 0;
    if (pivot != c) { std::swap(m[pivot], m[c]); det = -det; }
    det *= m[c][c];
    for (int r = c + 1; r < n; ++r) {
      if (m[r][c] == 0) continue;
      Rational f = m[r][c] / m[c][c];
      for (int k = c; k < n; ++k) m[r][k] -= f * m[c][k];
    }
  }
  return det;
}

void check_range(int q, int i) {
  if (q < 1) throw Error("index-out-of-range", "codimension must be positive");
  if (i < 0 || i >= q) throw Error("index-out-of-range", "direction " + std::to_string(i + 1) + " outside 1.." + std::to_string(q));
}

}  // namespace

int label_count(int q, int max_order) { return order_offset(q, max_order + 1); }

int label_id(int q, const GFLabel& label) {
  check_range(q, label.i);
  if (static_cast<int>(label.alpha.size()) != q) throw Error("dimension-mismatch", "multi-index length differs from q");
  int o = label.order();
  return order_offset(q, o) + label.i * static_cast<int>(compositions(o, q)) + alpha_rank(label.alpha);
}

GFLabel label_of(int q, int id) {
  int o = 0;
  while (order_offset(q, o + 1) <= id) ++o;
  int rest = id - order_offset(q, o);
  int block = static_cast<int>(compositions(o, q));
  GFLabel l;
  l.i = rest / block;
  l.alpha = multi_indices(q, o)[static_cast<std::size_t>(rest % block)];
  return l;
}

Rational label_sign(int q, int id) {
  GFLabel l = label_of(q, id);
  Rational f = multi_factorial(l.alpha);
  return l.order() % 2 == 0 ? f : Rational(-f);
}

std::string label_name(int q, int id) {
  GFLabel l = label_of(q, id);
  std::string s = "d" + std::to_string(l.i + 1);
  if (l.order() > 0) {
    s += "_";
    for (int k = 0; k < q; ++k)
      for (int r = 0; r < l.alpha[k]; ++r) s += std::to_string(k + 1);
  }
  return s;
}

VFElement bracket_monomials(int q, int x, int y, int max_order) {
  GFLabel a = label_of(q, x), b = label_of(q, y);
  VFElement out;
  auto add = [&](int dir, MultiIndex alpha, int coeff) {
    if (coeff == 0 || order_of(alpha) > max_order) return;
    out[label_id(q, GFLabel{dir, std::move(alpha)})] += coeff;
  };
  // s^a d_i (s^b) d_j
  if (b.alpha[static_cast<std::size_t>(a.i)] > 0) {
    MultiIndex m(static_cast<std::size_t>(q));
    for (int k = 0; k < q; ++k) m[k] = a.alpha[k] + b.alpha[k];
    m[a.i] -= 1;
    add(b.i, m, b.alpha[a.i]);
  }
  if (a.alpha[static_cast<std::size_t>(b.i)] > 0) {
    MultiIndex m(static_cast<std::size_t>(q));
    for (int k = 0; k < q; ++k) m[k] = a.alpha[k] + b.alpha[k];
    m[b.i] -= 1;
    add(a.i, m, -a.alpha[b.i]);
  }
  for (auto it = out.begin(); it != out.end();)
    it = it->second == 0 ? out.erase(it) : std::next(it);
  return out;
}

VFElement bracket(int q, const VFElement& x, const VFElement& y, int max_order) {
  VFElement out;
  for (const auto& [i, a] : x)
    for (const auto& [j, b] : y)
      for (const auto& [k, c] : bracket_monomials(q, i, j, max_order)) out[k] += a * b * c;
  for (auto it = out.begin(); it != out.end();)
    it = it->second == 0 ? out.erase(it) : std::next(it);
  return out;
}

GFCochain::GFCochain(int q, int order, int degree) : q_(q), order_(order), degree_(degree) {
  if (q < 1) throw Error("index-out-of-range", "codimension must be positive");
}

int GFCochain::max_label_order() const {
  int m = 0;
  for (const auto& [t, c] : terms_)
    for (int l : t) m = std::max(m, label_of(q_, l).order());
  return m;
}

void GFCochain::add_term(Tuple labels, const Rational& c) {
  if (static_cast<int>(labels.size()) != degree_) throw Error("degree-mismatch", "tuple length differs from cochain degree");
  if (c == 0) return;
  int sign = sort_with_sign(labels);
  if (sign == 0) return;
  Rational& slot = terms_[labels];
  slot += sign * c;
  if (slot == 0) terms_.erase(labels);
}

Rational GFCochain::coefficient(const Tuple& increasing) const {
  auto it = terms_.find(increasing);
  return it == terms_.end() ? Rational(0) : it->second;
}

GFCochain GFCochain::operator-() const { return Rational(-1) * *this; }

namespace {
void require_compatible(const GFCochain& a, const GFCochain& b) {
  if (a.q() != b.q()) throw Error("dimension-mismatch", "cochains over different q");
  if (a.degree() != b.degree()) throw Error("degree-mismatch", "cochains of different degree");
}
}  // namespace

GFCochain operator+(const GFCochain& a, const GFCochain& b) {
  require_compatible(a, b);
  GFCochain r = a;
  r.order_ = std::max(a.order_, b.order_);
  for (const auto& [t, c] : b.terms_) r.add_term(t, c);
  return r;
}

GFCochain operator-(const GFCochain& a, const GFCochain& b) { return a + (-b); }

GFCochain operator*(const Rational& s, const GFCochain& a) {
  GFCochain r(a.q_, a.order_, a.degree_);
  if (s == 0) return r;
  for (const auto& [t, c] : a.terms_) r.terms_[t] = s * c;
  return r;
}

bool operator==(const GFCochain& a, const GFCochain& b) {
  return a.q_ == b.q_ && a.degree_ == b.degree_ && a.terms_ == b.terms_;
}

GFCochain gf_wedge(const GFCochain& a, const GFCochain& b) {
  if (a.q() != b.q()) throw Error("dimension-mismatch", "cochains over different q");
  GFCochain r(a.q(), std::max(a.order(), b.order()), a.degree() + b.degree());
  for (const auto& [s, x] : a.terms()) {
    for (const auto& [t, y] : b.terms()) {
      GFCochain::Tuple u = s;
      u.insert(u.end(), t.begin(), t.end());
      r.add_term(std::move(u), x * y);
    }
  }
  return r;
}

Rational evaluate_labels(const GFCochain& c, const std::vector<int>& labels) {
  if (static_cast<int>(labels.size()) != c.degree()) throw Error("degree-mismatch", "wrong number of arguments");
  std::vector<int> t = labels;
  int sign = sort_with_sign(t);
  if (sign == 0) return 0;
  Rational v = c.coefficient(t);
  if (v == 0) return 0;
  for (int l : t) v *= label_sign(c.q(), l);
  return sign * v;
}

Rational evaluate(const GFCochain& c, const std::vector<VFElement>& args) {
  if (static_cast<int>(args.size()) != c.degree()) throw Error("degree-mismatch", "wrong number of arguments");
  std::size_t p = args.size();
  Rational total = 0;
  for (const auto& [t, coeff] : c.terms()) {
    std::vector<std::vector<Rational>> m(p, std::vector<Rational>(p));
    for (std::size_t r = 0; r < p; ++r) {
      Rational sigma = label_sign(c.q(), t[r]);
      for (std::size_t k = 0; k < p; ++k) {
        auto it = args[k].find(t[r]);
        if (it != args[k].end()) m[r][k] = sigma * it->second;
      }
    }
    total += coeff * determinant(std::move(m));
  }
  return total;
}

namespace {

// d delta^l in the delta basis, using every pair of labels up to `order`
// whose bracket has an l-component.
GFCochain d_generator(int q, int l, int order) {
  GFCochain r(q, order, 2);
  int n = label_count(q, order);
  GFLabel target = label_of(q, l);
  Rational sl = label_sign(q, l);
  for (int m = 0; m < n; ++m) {
    GFLabel a = label_of(q, m);
    // The bracket of orders o1, o2 has order o1 + o2 - 1.
    if (a.order() > target.order() + 1) break;
    for (int k = m + 1; k < n; ++k) {
      GFLabel b = label_of(q, k);
      if (a.order() + b.order() - 1 != target.order()) continue;
      VFElement br = bracket_monomials(q, m, k, target.order());
      auto it = br.find(l);
      if (it == br.end()) continue;
      r.add_term({m, k}, -it->second * sl / (label_sign(q, m) * label_sign(q, k)));
    }
  }
  return r;
}

}  // namespace

GFCochain ce_differential(const GFCochain& c, int max_order) {
  int order = c.order() + 1;
  if (order > max_order)
    throw Error("order-overflow", "differential needs jet order " + std::to_string(order) + " above maximum " + std::to_string(max_order));
  int q = c.q();
  GFCochain r(q, order, c.degree() + 1);
  std::map<int, GFCochain> table;
  for (const auto& [t, coeff] : c.terms()) {
    for (std::size_t k = 0; k < t.size(); ++k) {
      auto it = table.find(t[k]);
      if (it == table.end()) it = table.emplace(t[k], d_generator(q, t[k], order)).first;
      Rational s = k % 2 == 0 ? coeff : Rational(-coeff);
      for (const auto& [pair, v] : it->second.terms()) {
        GFCochain::Tuple u;
        u.insert(u.end(), t.begin(), t.begin() + static_cast<long>(k));
        u.insert(u.end(), pair.begin(), pair.end());
        u.insert(u.end(), t.begin() + static_cast<long>(k) + 1, t.end());
        r.add_term(std::move(u), s * v);
      }
    }
  }
  return r;
}

GFCochain delta_cochain(int q, const GFLabel& label) {
  if (label.order() > kDefaultMaxJetOrder)
    throw Error("order-overflow", "label order " + std::to_string(label.order()) + " above maximum");
  GFCochain r(q, label.order(), 1);
  r.add_term({label_id(q, label)}, 1);
  return r;
}

std::string to_string(const GFCochain& c) {
  if (c.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [t, coeff] : c.terms()) {
    Rational a = coeff;
    if (!first) os << (a < 0 ? " - " : " + ");
    else if (a < 0) os << "-";
    first = false;
    Rational m = abs(a);
    bool unit = m == 1 && !t.empty();
    if (!unit) os << m.get_str();
    for (std::size_t k = 0; k < t.size(); ++k) {
      if (k > 0) os << "^";
      else if (!unit) os << "*";
      os << label_name(c.q(), t[k]);
    }
  }
  return os.str();
}

namespace {

GFLabel make_label(int q, int i, std::initializer_list<int> lower) {
  MultiIndex a(static_cast<std::size_t>(q), 0);
  for (int k : lower) a[static_cast<std::size_t>(k)] += 1;
  return GFLabel{i, a};
}

GFMatrix zero_matrix(int q, int order, int degree) {
  return GFMatrix(static_cast<std::size_t>(q), std::vector<GFCochain>(static_cast<std::size_t>(q), GFCochain(q, order, degree)));
}

GFCochain zero_like(int q, int degree) { return GFCochain(q, 0, degree); }

GFMatrix scaled(const Rational& s, const GFMatrix& a) {
  GFMatrix r = a;
  for (auto& row : r)
    for (auto& e : row) e = s * e;
  return r;
}

GFMatrix added(const GFMatrix& a, const GFMatrix& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  GFMatrix r = a;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) r[i][j] = a[i][j] + b[i][j];
  return r;
}

}  // namespace

GFMatrix delta_matrix(int q) {
  GFMatrix m = zero_matrix(q, 1, 1);
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j) m[i][j] = delta_cochain(q, make_label(q, i, {j}));
  return m;
}

GFMatrix curvature_matrix(int q) {
  GFMatrix m = zero_matrix(q, 2, 2);
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j)
      for (int k = 0; k < q; ++k)
        m[i][j] = m[i][j] - gf_wedge(delta_cochain(q, make_label(q, i, {j, k})), delta_cochain(q, make_label(q, k, {})));
  return m;
}

GFMatrix gf_matrix_wedge(const GFMatrix& a, const GFMatrix& b) {
  std::size_t n = a.size();
  if (n == 0 || b.size() != n) throw Error("dimension-mismatch", "matrix sizes differ");
  int q = a[0][0].q();
  GFMatrix r = zero_matrix(q, 0, a[0][0].degree() + b[0][0].degree());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) r[i][j] = r[i][j] + gf_wedge(a[i][k], b[k][j]);
  return r;
}

GFMatrix gf_transpose(const GFMatrix& a) {
  GFMatrix r = a;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) r[i][j] = a[j][i];
  return r;
}

GFMatrix gf_symmetric_part(const GFMatrix& a) { return scaled(Rational(1, 2), added(a, gf_transpose(a))); }

GFMatrix gf_antisymmetric_part(const GFMatrix& a) {
  return scaled(Rational(1, 2), added(a, scaled(-1, gf_transpose(a))));
}

GFCochain gf_trace(const GFMatrix& a) {
  if (a.empty()) throw Error("dimension-mismatch", "empty matrix");
  GFCochain r = zero_like(a[0][0].q(), a[0][0].degree());
  for (std::size_t i = 0; i < a.size(); ++i) r = r + a[i][i];
  return r;
}

GFCochain universal_c(int i, int q) {
  if (q < 1 || i < 1 || i > q) throw Error("index-out-of-range", "c_" + std::to_string(i) + " needs 1 <= i <= q");
  GFMatrix delta = curvature_matrix(q);
  GFMatrix power = delta;
  for (int k = 1; k < i; ++k) power = gf_matrix_wedge(power, delta);
  return gf_trace(power);
}

GFCochain universal_h(int j, int q) {
  if (q < 1 || j < 1 || j > q || j % 2 == 0)
    throw Error("index-out-of-range", "h_" + std::to_string(j) + " needs odd j with 1 <= j <= q");
  GFMatrix ds = gf_symmetric_part(delta_matrix(q));
  GFMatrix curv = curvature_matrix(q);
  GFMatrix cs = gf_symmetric_part(curv), co = gf_antisymmetric_part(curv);
  GFMatrix ds2 = gf_matrix_wedge(ds, ds);
  // Polynomial in t with matrix coefficients: Delta_o - ds^2 + t Delta_s + t^2 ds^2.
  using TPoly = std::vector<GFMatrix>;
  TPoly base{added(co, scaled(-1, ds2)), cs, ds2};
  TPoly acc{ds};
  for (int k = 1; k < j; ++k) {
    TPoly next(acc.size() + base.size() - 1);
    for (std::size_t a = 0; a < acc.size(); ++a)
      for (std::size_t b = 0; b < base.size(); ++b) next[a + b] = added(next[a + b], gf_matrix_wedge(acc[a], base[b]));
    acc = std::move(next);
  }
  GFCochain r = zero_like(q, 2 * j - 1);
  for (std::size_t k = 0; k < acc.size(); ++k) r = r + Rational(1, static_cast<long>(k + 1)) * gf_trace(acc[k]);
  return Rational(j) * r;
}

GFCochain contract_so(const GFCochain& c, const std::vector<std::vector<Rational>>& xi) {
  int q = c.q();
  if (static_cast<int>(xi.size()) != q) throw Error("dimension-mismatch", "xi must be q x q");
  for (int i = 0; i < q; ++i) {
    if (static_cast<int>(xi[i].size()) != q) throw Error("dimension-mismatch", "xi must be q x q");
    for (int j = 0; j < q; ++j)
      if (xi[i][j] != -xi[j][i]) throw Error("not-antisymmetric", "xi must satisfy xi^T = -xi");
  }
  if (c.degree() == 0) throw Error("degree-mismatch", "cannot contract a 0-cochain");
  VFElement x;
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j)
      if (xi[i][j] != 0) x[label_id(q, make_label(q, i, {j}))] = xi[i][j];
  GFCochain r(q, c.order(), c.degree() - 1);
  for (const auto& [t, coeff] : c.terms()) {
    for (std::size_t k = 0; k < t.size(); ++k) {
      auto it = x.find(t[k]);
      if (it == x.end()) continue;
      GFCochain::Tuple u(t.begin(), t.begin() + static_cast<long>(k));
      u.insert(u.end(), t.begin() + static_cast<long>(k) + 1, t.end());
      Rational v = coeff * it->second * label_sign(q, t[k]);
      r.add_term(std::move(u), k % 2 == 0 ? v : Rational(-v));
    }
  }
  return r;
}

Report check_oq_basic(const GFCochain& c) {
  Report report;
  int q = c.q();
  if (q == 1) {
    report.check("so(1)", Status::PassExact, "so(1) = 0");
    return report;
  }
  GFCochain dc = ce_differential(c, std::max(kDefaultMaxJetOrder, c.order() + 1));
  for (int i = 0; i < q; ++i) {
    for (int j = i + 1; j < q; ++j) {
      std::vector<std::vector<Rational>> xi(static_cast<std::size_t>(q), std::vector<Rational>(static_cast<std::size_t>(q)));
      xi[i][j] = 1;
      xi[j][i] = -1;
      std::string tag = "E" + std::to_string(i + 1) + std::to_string(j + 1);
      GFCochain ic = contract_so(c, xi);
      report.check("contraction " + tag, ic.is_zero(), ic.is_zero() ? "" : to_string(ic));
      GFCochain lie = contract_so(dc, xi);
      if (c.degree() > 1) lie = lie + ce_differential(ic, std::max(kDefaultMaxJetOrder, ic.order() + 1));
      report.check("lie derivative " + tag, lie.is_zero(), lie.is_zero() ? "" : to_string(lie));
    }
  }
  return report;
}

Report gf_verify(int q) {
  Report r;
  auto delta = [q](int i, MultiIndex alpha) { return delta_cochain(q, GFLabel{i, std::move(alpha)}); };
  auto partial = [q](std::initializer_list<int> dirs) {
    MultiIndex a(static_cast<std::size_t>(q), 0);
    for (int d : dirs) ++a[static_cast<std::size_t>(d)];
    return a;
  };
  bool first = true, second = true;
  for (int i = 0; i < q; ++i) {
    GFCochain e = ce_differential(delta(i, partial({})));
    for (int j = 0; j < q; ++j) e = e + gf_wedge(delta(i, partial({j})), delta(j, partial({})));
    first = first && e.is_zero();
    for (int j = 0; j < q; ++j) {
      GFCochain f = ce_differential(delta(i, partial({j})));
      for (int k = 0; k < q; ++k) {
        f = f + gf_wedge(delta(i, partial({j, k})), delta(k, partial({})));
        f = f + gf_wedge(delta(i, partial({k})), delta(k, partial({j})));
      }
      second = second && f.is_zero();
    }
  }
  r.check("structure d delta^i", first);
  r.check("structure d delta^i_j", second);
  for (int i = 1; i <= q; ++i) {
    GFCochain c = universal_c(i, q);
    std::string name = "c" + std::to_string(i);
    r.check("d " + name + " = 0", ce_differential(c).is_zero());
    r.check(name + " 2-jet support", c.max_label_order() <= 2, "max label order " + std::to_string(c.max_label_order()));
    r.append(check_oq_basic(c), name + " ");
  }
  for (int j = 1; j <= q; j += 2) {
    GFCochain h = universal_h(j, q);
    std::string name = "h" + std::to_string(j);
    r.check("d " + name + " = c" + std::to_string(j), (ce_differential(h) - universal_c(j, q)).is_zero());
    if (j == 1) {
      r.check("h1 2-jet support", h.max_label_order() <= 2, "max label order " + std::to_string(h.max_label_order()));
      r.append(check_oq_basic(h), "h1 ");
    }
  }
  return r;
}

}  // namespace foliate
