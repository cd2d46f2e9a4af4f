#include "foliate/woq.hpp"

#include <algorithm>
#include <tuple>

#include "foliate/error.hpp"
#include "foliate/linalg.hpp"

namespace foliate {

namespace {

void check_q(int q) {
  if (q < 1 || q > 3) throw Error("unsupported-codimension", "WO_q is supported for 1 <= q <= 3, got " + std::to_string(q));
}

std::vector<int> odd_indices(int q) {
  std::vector<int> v;
  for (int j = 1; j <= q; j += 2) v.push_back(j);
  return v;
}

}  // namespace

int WOMonomial::c_degree() const {
  int d = 0;
  for (std::size_t i = 0; i < c.size(); ++i) d += 2 * static_cast<int>(i + 1) * c[i];
  return d;
}

int WOMonomial::degree() const {
  int d = c_degree();
  for (int j : h) d += 2 * j - 1;
  return d;
}

bool WOMonomialLess::operator()(const WOMonomial& a, const WOMonomial& b) const {
  int da = a.degree(), db = b.degree();
  if (da != db) return da < db;
  if (a.h != b.h) return a.h < b.h;
  return a.c > b.c;
}

WOElement::WOElement(int q) : q_(q) { check_q(q); }

WOElement WOElement::one(int q) { return monomial(WOMonomial{std::vector<int>(static_cast<std::size_t>(q), 0), {}}, q); }

WOElement WOElement::c(int i, int q) {
  if (i < 1 || i > q) throw Error("index-out-of-range", "c_" + std::to_string(i) + " needs 1 <= i <= q");
  WOMonomial m{std::vector<int>(static_cast<std::size_t>(q), 0), {}};
  m.c[static_cast<std::size_t>(i - 1)] = 1;
  return monomial(m, q);
}

WOElement WOElement::h(int j, int q) {
  if (j < 1 || j > q || j % 2 == 0) throw Error("index-out-of-range", "h_" + std::to_string(j) + " needs odd j with 1 <= j <= q");
  return monomial(WOMonomial{std::vector<int>(static_cast<std::size_t>(q), 0), {j}}, q);
}

WOElement WOElement::monomial(const WOMonomial& m, int q) {
  WOElement e(q);
  e.add(m, 1);
  return e;
}

void WOElement::add(const WOMonomial& m, const Rational& c) {
  if (static_cast<int>(m.c.size()) != q_) throw Error("dimension-mismatch", "c-exponent vector length differs from q");
  if (c == 0 || m.c_degree() > 2 * q_) return;
  Rational& slot = terms_[m];
  slot += c;
  if (slot == 0) terms_.erase(m);
}

WOElement operator+(const WOElement& a, const WOElement& b) {
  if (a.q_ != b.q_) throw Error("dimension-mismatch", "elements of different WO_q");
  WOElement r = a;
  for (const auto& [m, c] : b.terms_) r.add(m, c);
  return r;
}

WOElement operator-(const WOElement& a, const WOElement& b) { return a + Rational(-1) * b; }

WOElement operator*(const Rational& s, const WOElement& a) {
  WOElement r(a.q_);
  for (const auto& [m, c] : a.terms_) r.add(m, s * c);
  return r;
}

namespace {

// h_I h_J as a sorted subset with sign, or sign 0 when they overlap.
int merge_h(const std::vector<int>& a, const std::vector<int>& b, std::vector<int>& out) {
  out = a;
  out.insert(out.end(), b.begin(), b.end());
  int sign = 1;
  for (std::size_t i = 1; i < out.size(); ++i)
    for (std::size_t j = i; j > 0 && out[j - 1] > out[j]; --j) {
      std::swap(out[j - 1], out[j]);
      sign = -sign;
    }
  for (std::size_t i = 1; i < out.size(); ++i)
    if (out[i] == out[i - 1]) return 0;
  return sign;
}

}  // namespace

WOElement wo_multiply(const WOElement& x, const WOElement& y) {
  if (x.q() != y.q()) throw Error("dimension-mismatch", "elements of different WO_q");
  WOElement r(x.q());
  for (const auto& [m, a] : x.terms()) {
    for (const auto& [n, b] : y.terms()) {
      WOMonomial p;
      int sign = merge_h(m.h, n.h, p.h);
      if (sign == 0) continue;
      p.c = m.c;
      for (std::size_t i = 0; i < p.c.size(); ++i) p.c[i] += n.c[i];
      r.add(p, sign * a * b);
    }
  }
  return r;
}

WOElement wo_differential(const WOElement& x) {
  WOElement r(x.q());
  for (const auto& [m, a] : x.terms()) {
    for (std::size_t k = 0; k < m.h.size(); ++k) {
      WOMonomial p;
      p.c = m.c;
      p.c[static_cast<std::size_t>(m.h[k] - 1)] += 1;
      p.h = m.h;
      p.h.erase(p.h.begin() + static_cast<long>(k));
      r.add(p, k % 2 == 0 ? a : Rational(-a));
    }
  }
  return r;
}

std::string to_string(const WOMonomial& m) {
  std::string s;
  auto append = [&](const std::string& f) { s += (s.empty() ? "" : "*") + f; };
  for (int j : m.h) append("h" + std::to_string(j));
  for (std::size_t i = 0; i < m.c.size(); ++i) {
    if (m.c[i] == 0) continue;
    std::string f = "c" + std::to_string(i + 1);
    if (m.c[i] > 1) f += "^" + std::to_string(m.c[i]);
    append(f);
  }
  return s.empty() ? "1" : s;
}

std::string to_string(const WOElement& x) {
  if (x.is_zero()) return "0";
  std::string s;
  for (const auto& [m, c] : x.terms()) {
    Rational a = c;
    if (!s.empty()) s += a < 0 ? " - " : " + ";
    else if (a < 0) s += "-";
    Rational mag = abs(a);
    std::string mono = to_string(m);
    if (mag == 1) s += mono;
    else s += mag.get_str() + (mono == "1" ? "" : "*" + mono);
  }
  return s;
}

int wo_top_degree(int q) {
  check_q(q);
  int d = 2 * q;
  for (int j : odd_indices(q)) d += 2 * j - 1;
  return d;
}

std::vector<WOMonomial> wo_basis(int q, int degree, bool reversed) {
  check_q(q);
  std::vector<WOMonomial> out;
  auto odd = odd_indices(q);
  for (const auto& hmask : [&] {
         std::vector<std::vector<int>> subsets;
         for (unsigned bits = 0; bits < (1u << odd.size()); ++bits) {
           std::vector<int> s;
           for (std::size_t k = 0; k < odd.size(); ++k)
             if (bits & (1u << k)) s.push_back(odd[k]);
           subsets.push_back(s);
         }
         return subsets;
       }()) {
    int hdeg = 0;
    for (int j : hmask) hdeg += 2 * j - 1;
    int rest = degree - hdeg;
    if (rest < 0 || rest % 2 != 0 || rest > 2 * q) continue;
    // c-exponents with sum i * a_i == rest / 2
    std::vector<int> a(static_cast<std::size_t>(q), 0);
    auto rec = [&](auto&& self, int i, int left) -> void {
      if (i == q) {
        if (left == 0) out.push_back(WOMonomial{a, hmask});
        return;
      }
      for (int e = 0; e * (i + 1) <= left; ++e) {
        a[static_cast<std::size_t>(i)] = e;
        self(self, i + 1, left - e * (i + 1));
      }
      a[static_cast<std::size_t>(i)] = 0;
    };
    rec(rec, 0, rest / 2);
  }
  std::sort(out.begin(), out.end(), WOMonomialLess());
  if (reversed) std::reverse(out.begin(), out.end());
  return out;
}

namespace {

// Matrix of d from degree p to p + 1, columns indexed by `from`.
RationalMatrix differential_matrix(int q, const std::vector<WOMonomial>& from, const std::vector<WOMonomial>& to) {
  RationalMatrix m(to.size(), std::vector<Rational>(from.size()));
  std::map<WOMonomial, std::size_t, WOMonomialLess> index;
  for (std::size_t r = 0; r < to.size(); ++r) index[to[r]] = r;
  for (std::size_t c = 0; c < from.size(); ++c) {
    WOElement d = wo_differential(WOElement::monomial(from[c], q));
    for (const auto& [mono, v] : d.terms()) m[index.at(mono)][c] = v;
  }
  return m;
}

WOElement element_of(int q, const std::vector<WOMonomial>& basis, const std::vector<Rational>& v) {
  WOElement e(q);
  for (std::size_t k = 0; k < v.size(); ++k) e.add(basis[k], v[k]);
  if (!e.is_zero()) e = (1 / e.terms().begin()->second) * e;
  return e;
}

}  // namespace

std::vector<WOCohomologyGroup> wo_cohomology(int q, int min_degree, int max_degree, bool reversed_basis) {
  check_q(q);
  std::vector<WOCohomologyGroup> out;
  for (int p = std::max(0, min_degree); p <= max_degree; ++p) {
    auto prev = p > 0 ? wo_basis(q, p - 1, reversed_basis) : std::vector<WOMonomial>{};
    auto here = wo_basis(q, p, reversed_basis);
    auto next = wo_basis(q, p + 1, reversed_basis);
    WOCohomologyGroup g;
    g.degree = p;
    if (here.empty()) {
      out.push_back(g);
      continue;
    }
    RationalMatrix dp = differential_matrix(q, here, next);
    RationalMatrix dprev = differential_matrix(q, prev, here);
    auto kernel = next.empty() ? [&] {
      std::vector<std::vector<Rational>> id;
      for (std::size_t k = 0; k < here.size(); ++k) {
        std::vector<Rational> e(here.size());
        e[k] = 1;
        id.push_back(e);
      }
      return id;
    }()
                               : null_space(dp, static_cast<int>(here.size()));
    // Rows of `span` are image vectors followed by chosen representatives.
    RationalMatrix span;
    for (std::size_t c = 0; c < prev.size(); ++c) {
      std::vector<Rational> col(here.size());
      for (std::size_t r = 0; r < here.size(); ++r) col[r] = dprev[r][c];
      span.push_back(col);
    }
    int r0 = span.empty() ? 0 : rank(span);
    for (const auto& v : kernel) {
      span.push_back(v);
      int r1 = rank(span);
      if (r1 > r0) {
        r0 = r1;
        g.representatives.push_back(element_of(q, here, v));
      } else {
        span.pop_back();
      }
    }
    g.betti = static_cast<int>(g.representatives.size());
    out.push_back(g);
  }
  return out;
}

GFCochain embed_gf(const WOElement& x, int q) {
  if (x.q() != q) throw Error("dimension-mismatch", "element of a different WO_q");
  std::map<int, GFCochain> cs, hs;
  GFCochain total;
  bool first = true;
  for (const auto& [m, coeff] : x.terms()) {
    GFCochain t(q, 0, 0);
    t.add_term({}, 1);
    for (int i = 1; i <= q; ++i) {
      for (int e = 0; e < m.c[static_cast<std::size_t>(i - 1)]; ++e) {
        auto it = cs.find(i);
        if (it == cs.end()) it = cs.emplace(i, universal_c(i, q)).first;
        t = gf_wedge(t, it->second);
      }
    }
    for (int j : m.h) {
      auto it = hs.find(j);
      if (it == hs.end()) it = hs.emplace(j, universal_h(j, q)).first;
      t = gf_wedge(t, it->second);
    }
    t = coeff * t;
    total = first ? t : total + t;
    first = false;
  }
  if (first) return GFCochain(q, 0, 0);
  return total;
}

}  // namespace foliate
