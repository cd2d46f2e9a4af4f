#pragma once

#include <map>
#include <string>
#include <vector>

#include "foliate/gelfand_fuks.hpp"
#include "foliate/rational.hpp"

namespace foliate {

// c_1^{a_1} ... c_q^{a_q} h_{j_1} ... h_{j_r} with j_1 < ... < j_r odd.
struct WOMonomial {
  std::vector<int> c;
  std::vector<int> h;

  int c_degree() const;
  int degree() const;
  friend bool operator==(const WOMonomial& a, const WOMonomial& b) { return a.c == b.c && a.h == b.h; }
};

// Fixed monomial order: by degree, then h-part, then c-exponents.
struct WOMonomialLess {
  bool operator()(const WOMonomial& a, const WOMonomial& b) const;
};

class WOElement {
 public:
  explicit WOElement(int q = 1);
  static WOElement one(int q);
  static WOElement c(int i, int q);
  static WOElement h(int j, int q);
  static WOElement monomial(const WOMonomial& m, int q);

  int q() const { return q_; }
  const std::map<WOMonomial, Rational, WOMonomialLess>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  // Adds c * m, dropping m when its c-part has degree above 2q.
  void add(const WOMonomial& m, const Rational& c);

  friend WOElement operator+(const WOElement& a, const WOElement& b);
  friend WOElement operator-(const WOElement& a, const WOElement& b);
  friend WOElement operator*(const Rational& s, const WOElement& a);
  friend bool operator==(const WOElement& a, const WOElement& b) { return a.q_ == b.q_ && a.terms_ == b.terms_; }
  friend bool operator!=(const WOElement& a, const WOElement& b) { return !(a == b); }

 private:
  int q_;
  std::map<WOMonomial, Rational, WOMonomialLess> terms_;
};

WOElement wo_multiply(const WOElement& x, const WOElement& y);
WOElement wo_differential(const WOElement& x);
std::string to_string(const WOMonomial& m);
std::string to_string(const WOElement& x);

// Every monomial of the given degree, in the fixed order (or reversed).
std::vector<WOMonomial> wo_basis(int q, int degree, bool reversed = false);
int wo_top_degree(int q);

struct WOCohomologyGroup {
  int degree = 0;
  int betti = 0;
  std::vector<WOElement> representatives;
};

std::vector<WOCohomologyGroup> wo_cohomology(int q, int min_degree, int max_degree, bool reversed_basis = false);

GFCochain embed_gf(const WOElement& x, int q);

}  // namespace foliate
