#pragma once

#include <map>
#include <string>
#include <vector>

#include "foliate/jets.hpp"
#include "foliate/rational.hpp"
#include "foliate/report.hpp"

namespace foliate {

constexpr int kDefaultMaxJetOrder = 3;

// The monomial s^alpha d/ds^i of the jet algebra, and dually delta^i_alpha.
struct GFLabel {
  int i = 0;
  MultiIndex alpha;
  int order() const { return order_of(alpha); }
  friend bool operator==(const GFLabel& a, const GFLabel& b) { return a.i == b.i && a.alpha == b.alpha; }
};

// Labels are numbered by (order, direction, alpha); the numbering of the
// labels of order <= K does not depend on any larger bound.
int label_count(int q, int max_order);
int label_id(int q, const GFLabel& label);
GFLabel label_of(int q, int id);
// (-1)^{|alpha|} alpha!: the value of delta^i_alpha on s^alpha d_i.
Rational label_sign(int q, int id);
std::string label_name(int q, int id);

// Linear combination of basis monomials, keyed by label id.
using VFElement = std::map<int, Rational>;

// [s^a d_i, s^b d_j], dropping monomials above order `max_order`.
VFElement bracket_monomials(int q, int x, int y, int max_order);
VFElement bracket(int q, const VFElement& x, const VFElement& y, int max_order);

class GFCochain {
 public:
  using Tuple = std::vector<int>;

  GFCochain() = default;
  GFCochain(int q, int order, int degree);

  int q() const { return q_; }
  int order() const { return order_; }
  int degree() const { return degree_; }
  const std::map<Tuple, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int max_label_order() const;

  // Any label order; sorted with sign, repeated labels dropped.
  void add_term(Tuple labels, const Rational& c);
  Rational coefficient(const Tuple& increasing) const;

  GFCochain operator-() const;
  friend GFCochain operator+(const GFCochain& a, const GFCochain& b);
  friend GFCochain operator-(const GFCochain& a, const GFCochain& b);
  friend GFCochain operator*(const Rational& s, const GFCochain& a);
  friend bool operator==(const GFCochain& a, const GFCochain& b);
  friend bool operator!=(const GFCochain& a, const GFCochain& b) { return !(a == b); }

 private:
  int q_ = 1;
  int order_ = 0;
  int degree_ = 0;
  std::map<Tuple, Rational> terms_;
};

GFCochain gf_wedge(const GFCochain& a, const GFCochain& b);
// c(X_1, ..., X_p) on basis monomials given by label id.
Rational evaluate_labels(const GFCochain& c, const std::vector<int>& labels);
Rational evaluate(const GFCochain& c, const std::vector<VFElement>& args);
GFCochain ce_differential(const GFCochain& c, int max_order = kDefaultMaxJetOrder);
GFCochain delta_cochain(int q, const GFLabel& label);
std::string to_string(const GFCochain& c);

using GFMatrix = std::vector<std::vector<GFCochain>>;

GFMatrix delta_matrix(int q);  // delta^i_j
GFMatrix curvature_matrix(int q);  // -delta^i_{jk} ^ delta^k
GFMatrix gf_matrix_wedge(const GFMatrix& a, const GFMatrix& b);
GFMatrix gf_transpose(const GFMatrix& a);
GFMatrix gf_symmetric_part(const GFMatrix& a);
GFMatrix gf_antisymmetric_part(const GFMatrix& a);
GFCochain gf_trace(const GFMatrix& a);

GFCochain universal_c(int i, int q);
GFCochain universal_h(int j, int q);

GFCochain contract_so(const GFCochain& c, const std::vector<std::vector<Rational>>& xi);
Report check_oq_basic(const GFCochain& c);

// Structure equations, d c_i = 0, d h_j = c_j, O(q)-basicness of c_i and h_1,
// and the 2-jet support of c_i and h_1.
Report gf_verify(int q);

}  // namespace foliate
