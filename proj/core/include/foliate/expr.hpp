#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "foliate/rational.hpp"

namespace foliate {

enum class Func : std::uint8_t { Sqrt, Exp, Log, Sin, Cos };

const char* func_name(Func f);

// Immutable symbolic scalar in canonical form. Every constructor and
// operator returns a canonical tree, so structural equality is value
// equality on the polynomial fragment.
class Expr {
 public:
  enum class Kind : std::uint8_t { Constant, Variable, Function, Power, Product, Sum };

  Expr();
  Expr(int value);              // NOLINT(google-explicit-constructor)
  Expr(long value);             // NOLINT(google-explicit-constructor)
  Expr(const Rational& value);  // NOLINT(google-explicit-constructor)

  static Expr variable(const std::string& name);

  Kind kind() const;
  bool is_constant() const { return kind() == Kind::Constant; }
  bool is_zero() const;
  bool is_one() const;

  // Constant value, Product coefficient or Sum constant term.
  const Rational& value() const;
  const std::string& name() const;
  Func func() const;
  int exponent() const;
  // Function: {argument}; Power: {base}; Product: factors; Sum: terms.
  const std::vector<Expr>& operands() const;
  std::size_t hash() const;

  Expr operator-() const;
  Expr& operator+=(const Expr& o);
  Expr& operator-=(const Expr& o);
  Expr& operator*=(const Expr& o);
  Expr& operator/=(const Expr& o);

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  friend bool operator==(const Expr& a, const Expr& b);
  friend bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }

  struct Node;

 private:
  explicit Expr(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
  friend struct ExprFactory;
  friend int compare(const Expr& a, const Expr& b);
};

// Total order used for canonical sorting.
int compare(const Expr& a, const Expr& b);

struct ExprLess {
  bool operator()(const Expr& a, const Expr& b) const { return compare(a, b) < 0; }
};

Expr pow(const Expr& base, int exponent);
Expr sqrt(const Expr& e);
Expr exp(const Expr& e);
Expr log(const Expr& e);
Expr sin(const Expr& e);
Expr cos(const Expr& e);
Expr apply(Func f, const Expr& e);

Expr var(const std::string& name);

Expr differentiate(const Expr& e, const std::string& v);
// Checked variant: v must be one of `coordinates`, else "unknown-variable".
Expr differentiate(const Expr& e, const std::string& v, const std::vector<std::string>& coordinates);

Expr substitute(const Expr& e, const std::map<std::string, Expr>& bindings);

// Brings everything over a common denominator and cancels denominator
// factors that divide the numerator. Identically-zero rational functions
// normalize to 0.
Expr normalize(const Expr& e);

using Point = std::map<std::string, Rational>;
using NumericPoint = std::map<std::string, double>;

double evaluate(const Expr& e, const Point& point);
double evaluate(const Expr& e, const NumericPoint& point);

std::set<std::string> free_variables(const Expr& e);
// Total degree when e is a polynomial in its variables.
std::optional<int> polynomial_degree(const Expr& e);

enum class ZeroStatus { ProvenZero, ProvenNonzero, Undecided };

struct ZeroCheck {
  ZeroStatus status = ZeroStatus::Undecided;
  bool exact = false;  // decided by normal form rather than by sampling
  std::optional<Point> witness;
  double witness_value = 0.0;
};

struct ZeroOptions {
  int samples = 25;
  std::uint64_t seed = 0;
  int retry_factor = 8;
};

ZeroCheck is_zero(const Expr& e, const ZeroOptions& options = {});
bool is_identically_zero(const Expr& e);

std::string to_string(const Expr& e);
inline void PrintTo(const Expr& e, std::ostream* os) { *os << to_string(e); }

}  // namespace foliate
