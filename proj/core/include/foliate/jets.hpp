#pragma once

#include <map>
#include <string>
#include <vector>

#include "foliate/expr.hpp"
#include "foliate/linalg.hpp"

namespace foliate {

using MultiIndex = std::vector<int>;

int order_of(const MultiIndex& alpha);
Rational multi_factorial(const MultiIndex& alpha);
// Every alpha of length q with |alpha| == degree, in descending lexicographic order.
std::vector<MultiIndex> multi_indices(int q, int degree);
std::vector<MultiIndex> multi_indices_upto(int q, int max_degree, int min_degree = 0);
MultiIndex unit_index(int q, int i);

// Polynomial in positional variables s_1..s_vars with Expr coefficients,
// truncated above total degree `order`.
class TruncatedPolynomial {
 public:
  TruncatedPolynomial() = default;
  TruncatedPolynomial(int vars, int order);
  static TruncatedPolynomial variable(int vars, int order, int i);
  static TruncatedPolynomial constant(int vars, int order, const Expr& c);

  int vars() const { return vars_; }
  int order() const { return order_; }
  const std::map<MultiIndex, Expr>& terms() const { return terms_; }
  Expr coefficient(const MultiIndex& alpha) const;
  void add(const MultiIndex& alpha, const Expr& c);
  Expr constant_term() const { return coefficient(MultiIndex(static_cast<std::size_t>(vars_), 0)); }
  TruncatedPolynomial without_constant() const;
  TruncatedPolynomial truncated(int order) const;

  friend TruncatedPolynomial operator+(const TruncatedPolynomial& a, const TruncatedPolynomial& b);
  friend TruncatedPolynomial operator-(const TruncatedPolynomial& a, const TruncatedPolynomial& b);
  friend TruncatedPolynomial operator*(const TruncatedPolynomial& a, const TruncatedPolynomial& b);
  friend TruncatedPolynomial operator*(const Expr& c, const TruncatedPolynomial& a);

 private:
  int vars_ = 0;
  int order_ = 0;
  std::map<MultiIndex, Expr> terms_;
};

// Substitutes polynomials without constant term for the variables of p.
TruncatedPolynomial compose_polynomial(const TruncatedPolynomial& p, const std::vector<TruncatedPolynomial>& s);

// k-jet of a map germ R^source -> R^target at `base`, stored as Taylor
// polynomials in the displacement with coefficients divided by alpha!.
class JetMap {
 public:
  JetMap() = default;
  JetMap(int source_dim, int target_dim, int order, std::vector<Expr> base,
         std::vector<TruncatedPolynomial> components);
  static JetMap identity(int q, int order);

  int source_dim() const { return source_dim_; }
  int target_dim() const { return target_dim_; }
  int order() const { return order_; }
  const std::vector<Expr>& base() const { return base_; }
  std::vector<Expr> value() const;
  const std::vector<TruncatedPolynomial>& components() const { return components_; }
  Expr coefficient(int i, const MultiIndex& alpha) const;
  ExprMatrix linear_part() const;
  JetMap truncated(int order) const;
  // Drops constant terms and moves the base to the origin.
  JetMap recentred() const;

  friend bool operator==(const JetMap& a, const JetMap& b);
  friend bool operator!=(const JetMap& a, const JetMap& b) { return !(a == b); }

 private:
  int source_dim_ = 0;
  int target_dim_ = 0;
  int order_ = 0;
  std::vector<Expr> base_;
  std::vector<TruncatedPolynomial> components_;
};

JetMap compose_jets(const JetMap& g, const JetMap& f);
JetMap invert_jet(const JetMap& f);
JetMap prolong_map(const std::vector<Expr>& phi, const std::vector<std::string>& coords,
                   const std::map<std::string, Expr>& at, int order);
// 2-jet of h at f_beta(point) = `value`, recentred into G^2_q.
JetMap transition_2jet(const std::vector<std::string>& vars, const std::vector<Expr>& h,
                       const std::vector<Expr>& value);

std::string to_string(const JetMap& j);

}  // namespace foliate
