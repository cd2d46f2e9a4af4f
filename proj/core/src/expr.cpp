#include "foliate/expr.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <utility>

#include "foliate/error.hpp"
#include "foliate/random.hpp"

namespace foliate {

const char* func_name(Func f) {
  switch (f) {
    case Func::Sqrt: return "sqrt";
    case Func::Exp: return "exp";
    case Func::Log: return "log";
    case Func::Sin: return "sin";
    case Func::Cos: return "cos";
  }
  return "?";
}

struct Expr::Node {
  Kind kind = Kind::Constant;
  Rational value;
  std::string name;
  Func func = Func::Sqrt;
  int exponent = 0;
  std::vector<Expr> ops;
  std::size_t hash = 0;
};

using FactorMap = std::map<Expr, int, ExprLess>;
using FactorList = std::vector<std::pair<Expr, int>>;

struct ExprFactory {
  static std::size_t combine(std::size_t seed, std::size_t v) {
    return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
  }

  static Expr finish(std::shared_ptr<Expr::Node> n) {
    std::size_t h = static_cast<std::size_t>(n->kind) * 7919u;
    h = combine(h, hash_rational(n->value));
    h = combine(h, std::hash<std::string>{}(n->name));
    h = combine(h, static_cast<std::size_t>(n->func));
    h = combine(h, static_cast<std::size_t>(n->exponent + 1000));
    for (const auto& o : n->ops) h = combine(h, o.hash());
    n->hash = h;
    return Expr(std::shared_ptr<const Expr::Node>(std::move(n)));
  }

  static Expr constant(const Rational& v) {
    auto n = std::make_shared<Expr::Node>();
    n->kind = Expr::Kind::Constant;
    n->value = v;
    return finish(std::move(n));
  }

  static Expr variable(const std::string& name) {
    auto n = std::make_shared<Expr::Node>();
    n->kind = Expr::Kind::Variable;
    n->name = name;
    return finish(std::move(n));
  }

  static Expr function(Func f, const Expr& arg) {
    auto n = std::make_shared<Expr::Node>();
    n->kind = Expr::Kind::Function;
    n->func = f;
    n->ops = {arg};
    return finish(std::move(n));
  }

  static Expr power(const Expr& base, int k) {
    auto n = std::make_shared<Expr::Node>();
    n->kind = Expr::Kind::Power;
    n->exponent = k;
    n->ops = {base};
    return finish(std::move(n));
  }

  static Expr product(const Rational& c, std::vector<Expr> factors) {
    auto n = std::make_shared<Expr::Node>();
    n->kind = Expr::Kind::Product;
    n->value = c;
    n->ops = std::move(factors);
    return finish(std::move(n));
  }

  static Expr sum(const Rational& c, std::vector<Expr> terms) {
    auto n = std::make_shared<Expr::Node>();
    n->kind = Expr::Kind::Sum;
    n->value = c;
    n->ops = std::move(terms);
    return finish(std::move(n));
  }
};

namespace {

const Expr& zero_expr() {
  static const Expr z = ExprFactory::constant(Rational(0));
  return z;
}

const Expr& one_expr() {
  static const Expr o = ExprFactory::constant(Rational(1));
  return o;
}

Expr mul(const Expr& a, const Expr& b);

// Coefficient and coefficient-free monomial; the monomial of a constant is 1.
std::pair<Rational, Expr> split_term(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::Constant: return {e.value(), one_expr()};
    case Expr::Kind::Product: {
      if (e.operands().size() == 1) return {e.value(), e.operands()[0]};
      return {e.value(), ExprFactory::product(Rational(1), e.operands())};
    }
    default: return {Rational(1), e};
  }
}

void append_factors(const Expr& m, int mult, FactorMap& out) {
  switch (m.kind()) {
    case Expr::Kind::Constant: return;
    case Expr::Kind::Power: out[m.operands()[0]] += m.exponent() * mult; return;
    case Expr::Kind::Product:
      for (const auto& f : m.operands()) append_factors(f, mult, out);
      return;
    default: out[m] += mult; return;
  }
}

Expr build_monomial(const Rational& coeff, const FactorList& factors) {
  if (coeff == 0) return zero_expr();
  std::vector<Expr> parts;
  parts.reserve(factors.size());
  for (const auto& [b, k] : factors) {
    if (k == 0) continue;
    parts.push_back(k == 1 ? b : ExprFactory::power(b, k));
  }
  if (parts.empty()) return ExprFactory::constant(coeff);
  if (parts.size() == 1 && coeff == 1) return parts[0];
  return ExprFactory::product(coeff, std::move(parts));
}

Expr scale(const Expr& e, const Rational& c) {
  if (c == 0) return zero_expr();
  if (c == 1) return e;
  switch (e.kind()) {
    case Expr::Kind::Constant: return ExprFactory::constant(e.value() * c);
    case Expr::Kind::Product: {
      Rational nc = e.value() * c;
      if (nc == 1 && e.operands().size() == 1) return e.operands()[0];
      return ExprFactory::product(nc, e.operands());
    }
    case Expr::Kind::Sum: {
      std::vector<Expr> terms;
      terms.reserve(e.operands().size());
      for (const auto& t : e.operands()) terms.push_back(scale(t, c));
      return ExprFactory::sum(e.value() * c, std::move(terms));
    }
    default: return ExprFactory::product(c, {e});
  }
}

struct SumAcc {
  Rational constant;
  std::map<Expr, Rational, ExprLess> terms;

  void add_term(const Expr& t, const Rational& s) {
    auto [c, m] = split_term(t);
    if (m.is_one()) {
      constant += c * s;
    } else {
      terms[m] += c * s;
    }
  }

  void add(const Expr& e, const Rational& s = Rational(1)) {
    if (e.kind() == Expr::Kind::Constant) {
      constant += e.value() * s;
    } else if (e.kind() == Expr::Kind::Sum) {
      constant += e.value() * s;
      for (const auto& t : e.operands()) add_term(t, s);
    } else {
      add_term(e, s);
    }
  }

  Expr build() const {
    std::vector<Expr> out;
    for (const auto& [m, c] : terms) {
      if (c != 0) out.push_back(scale(m, c));
    }
    if (out.empty()) return ExprFactory::constant(constant);
    if (out.size() == 1 && constant == 0) return out[0];
    return ExprFactory::sum(constant, std::move(out));
  }
};

std::vector<Expr> sum_terms(const Expr& e) {
  if (e.kind() != Expr::Kind::Sum) return {e};
  std::vector<Expr> out;
  if (e.value() != 0) out.push_back(ExprFactory::constant(e.value()));
  out.insert(out.end(), e.operands().begin(), e.operands().end());
  return out;
}

Expr mul_factors(const Rational& coeff, const FactorMap& fmap) {
  if (coeff == 0) return zero_expr();
  Expr extra = one_expr();
  SumAcc exp_arg;
  bool has_exp = false;
  FactorList simple;
  for (const auto& [b, k] : fmap) {
    if (k == 0) continue;
    if (b.kind() == Expr::Kind::Function && b.func() == Func::Exp) {
      exp_arg.add(b.operands()[0], Rational(k));
      has_exp = true;
    } else if (b.kind() == Expr::Kind::Function && b.func() == Func::Sqrt && std::abs(k) >= 2) {
      int q = k / 2;
      int r = k - 2 * q;
      extra = mul(extra, pow(b.operands()[0], q));
      if (r != 0) simple.emplace_back(b, r);
    } else if (b.kind() == Expr::Kind::Sum && k > 0) {
      extra = mul(extra, pow(b, k));
    } else {
      simple.emplace_back(b, k);
    }
  }
  if (has_exp) {
    Expr e = exp(exp_arg.build());
    if (e.kind() == Expr::Kind::Function && e.func() == Func::Exp) {
      simple.emplace_back(e, 1);
      std::sort(simple.begin(), simple.end(),
                [](const auto& x, const auto& y) { return compare(x.first, y.first) < 0; });
    } else {
      extra = mul(extra, e);
    }
  }
  Expr mono = build_monomial(coeff, simple);
  if (extra.is_one()) return mono;
  return mul(mono, extra);
}

Expr mul(const Expr& a, const Expr& b) {
  if (a.is_constant()) return scale(b, a.value());
  if (b.is_constant()) return scale(a, b.value());
  if (a.kind() == Expr::Kind::Sum || b.kind() == Expr::Kind::Sum) {
    SumAcc acc;
    for (const auto& ta : sum_terms(a)) {
      for (const auto& tb : sum_terms(b)) acc.add(mul(ta, tb));
    }
    return acc.build();
  }
  auto [ca, ma] = split_term(a);
  auto [cb, mb] = split_term(b);
  FactorMap f;
  append_factors(ma, 1, f);
  append_factors(mb, 1, f);
  return mul_factors(ca * cb, f);
}

Expr add(const Expr& a, const Expr& b, const Rational& sb) {
  SumAcc acc;
  acc.add(a);
  acc.add(b, sb);
  return acc.build();
}

bool is_exp(const Expr& e) { return e.kind() == Expr::Kind::Function && e.func() == Func::Exp; }
bool is_log(const Expr& e) { return e.kind() == Expr::Kind::Function && e.func() == Func::Log; }

}  // namespace

// ---------------------------------------------------------------- Expr API

Expr::Expr() : Expr(zero_expr()) {}
Expr::Expr(int value) : Expr(Rational(value)) {}
Expr::Expr(long value) : Expr(Rational(value)) {}
Expr::Expr(const Rational& value)
    : node_(value == 0 ? zero_expr().node_ : ExprFactory::constant(value).node_) {}
Expr::Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Expr Expr::variable(const std::string& name) { return ExprFactory::variable(name); }
Expr var(const std::string& name) { return Expr::variable(name); }

Expr::Kind Expr::kind() const { return node_->kind; }
bool Expr::is_zero() const { return node_->kind == Kind::Constant && node_->value == 0; }
bool Expr::is_one() const { return node_->kind == Kind::Constant && node_->value == 1; }
const Rational& Expr::value() const { return node_->value; }
const std::string& Expr::name() const { return node_->name; }
Func Expr::func() const { return node_->func; }
int Expr::exponent() const { return node_->exponent; }
const std::vector<Expr>& Expr::operands() const { return node_->ops; }
std::size_t Expr::hash() const { return node_->hash; }

Expr Expr::operator-() const { return scale(*this, Rational(-1)); }
Expr& Expr::operator+=(const Expr& o) { return *this = *this + o; }
Expr& Expr::operator-=(const Expr& o) { return *this = *this - o; }
Expr& Expr::operator*=(const Expr& o) { return *this = *this * o; }
Expr& Expr::operator/=(const Expr& o) { return *this = *this / o; }

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.is_constant() && b.is_constant()) return Expr(a.value() + b.value());
  return add(a, b, Rational(1));
}

Expr operator-(const Expr& a, const Expr& b) {
  if (b.is_zero()) return a;
  if (a.is_constant() && b.is_constant()) return Expr(a.value() - b.value());
  return add(a, b, Rational(-1));
}

Expr operator*(const Expr& a, const Expr& b) { return mul(a, b); }

Expr operator/(const Expr& a, const Expr& b) {
  if (b.is_zero()) throw Error("evaluation-domain", "division by zero");
  return mul(a, pow(b, -1));
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  return a.hash() == b.hash() && compare(a, b) == 0;
}

int compare(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return 0;
  int ra = static_cast<int>(a.kind());
  int rb = static_cast<int>(b.kind());
  if (ra != rb) return ra < rb ? -1 : 1;
  auto cmpq = [](const Rational& x, const Rational& y) { return x < y ? -1 : (y < x ? 1 : 0); };
  auto cmp_ops = [](const std::vector<Expr>& x, const std::vector<Expr>& y) {
    std::size_t n = std::min(x.size(), y.size());
    for (std::size_t i = 0; i < n; ++i) {
      int c = compare(x[i], y[i]);
      if (c != 0) return c;
    }
    if (x.size() != y.size()) return x.size() < y.size() ? -1 : 1;
    return 0;
  };
  switch (a.kind()) {
    case Expr::Kind::Constant: return cmpq(a.value(), b.value());
    case Expr::Kind::Variable: {
      int c = a.name().compare(b.name());
      return c < 0 ? -1 : (c > 0 ? 1 : 0);
    }
    case Expr::Kind::Function: {
      if (a.func() != b.func()) return a.func() < b.func() ? -1 : 1;
      return compare(a.operands()[0], b.operands()[0]);
    }
    case Expr::Kind::Power: {
      int c = compare(a.operands()[0], b.operands()[0]);
      if (c != 0) return c;
      if (a.exponent() != b.exponent()) return a.exponent() < b.exponent() ? -1 : 1;
      return 0;
    }
    case Expr::Kind::Product:
    case Expr::Kind::Sum: {
      int c = cmp_ops(a.operands(), b.operands());
      if (c != 0) return c;
      return cmpq(a.value(), b.value());
    }
  }
  return 0;
}

Expr pow(const Expr& base, int n) {
  if (n == 0) return Expr(1);
  if (n == 1) return base;
  switch (base.kind()) {
    case Expr::Kind::Constant: return Expr(rational_pow(base.value(), n));
    case Expr::Kind::Variable:
    case Expr::Kind::Function: {
      FactorMap f;
      f[base] = n;
      return mul_factors(Rational(1), f);
    }
    case Expr::Kind::Power: {
      FactorMap f;
      f[base.operands()[0]] = base.exponent() * n;
      return mul_factors(Rational(1), f);
    }
    case Expr::Kind::Product: {
      FactorMap f;
      append_factors(split_term(base).second, n, f);
      return mul_factors(rational_pow(base.value(), n), f);
    }
    case Expr::Kind::Sum: {
      if (n > 0) {
        Expr result(1);
        Expr sq = base;
        int k = n;
        while (k > 0) {
          if (k & 1) result = mul(result, sq);
          k >>= 1;
          if (k > 0) sq = mul(sq, sq);
        }
        return result;
      }
      Rational lead = split_term(base.operands()[0]).first;
      Expr monic = scale(base, Rational(1) / lead);
      FactorMap f;
      f[monic] = n;
      return mul_factors(rational_pow(lead, n), f);
    }
  }
  return base;
}

Expr sqrt(const Expr& e) {
  if (e.is_constant()) {
    if (e.value() < 0) throw Error("evaluation-domain", "sqrt of negative constant");
    Rational r;
    if (exact_sqrt(e.value(), r)) return Expr(r);
    return ExprFactory::function(Func::Sqrt, e);
  }
  if (e.kind() == Expr::Kind::Product || e.kind() == Expr::Kind::Power) {
    Rational c = e.kind() == Expr::Kind::Product ? e.value() : Rational(1);
    FactorMap f;
    append_factors(split_term(e).second, 1, f);
    if (c > 0) {
      Rational r;
      if (c != 1 && exact_sqrt(c, r)) return mul(Expr(r), sqrt(mul_factors(Rational(1), f)));
      FactorList pos;
      FactorList neg;
      for (const auto& [b, k] : f) (k > 0 ? pos : neg).emplace_back(b, k > 0 ? k : -k);
      if (!neg.empty()) {
        Expr p = build_monomial(c, pos);
        Expr q = build_monomial(Rational(1), neg);
        return mul(sqrt(p), pow(sqrt(q), -1));
      }
    }
  }
  return ExprFactory::function(Func::Sqrt, e);
}

Expr exp(const Expr& e) {
  if (e.is_zero()) return Expr(1);
  if (is_log(e)) return e.operands()[0];
  return ExprFactory::function(Func::Exp, e);
}

Expr log(const Expr& e) {
  if (e.is_constant()) {
    if (e.value() <= 0) throw Error("evaluation-domain", "log of non-positive constant");
    if (e.value() == 1) return Expr(0);
  }
  if (is_exp(e)) return e.operands()[0];
  return ExprFactory::function(Func::Log, e);
}

Expr sin(const Expr& e) {
  if (e.is_zero()) return Expr(0);
  return ExprFactory::function(Func::Sin, e);
}

Expr cos(const Expr& e) {
  if (e.is_zero()) return Expr(1);
  return ExprFactory::function(Func::Cos, e);
}

Expr apply(Func f, const Expr& e) {
  switch (f) {
    case Func::Sqrt: return sqrt(e);
    case Func::Exp: return exp(e);
    case Func::Log: return log(e);
    case Func::Sin: return sin(e);
    case Func::Cos: return cos(e);
  }
  return e;
}

// ------------------------------------------------------------ calculus

Expr differentiate(const Expr& e, const std::string& v) {
  switch (e.kind()) {
    case Expr::Kind::Constant: return Expr(0);
    case Expr::Kind::Variable: return e.name() == v ? Expr(1) : Expr(0);
    case Expr::Kind::Function: {
      const Expr& u = e.operands()[0];
      Expr du = differentiate(u, v);
      if (du.is_zero()) return du;
      switch (e.func()) {
        case Func::Sqrt: return du * Expr(make_rational(1, 2)) * pow(e, -1);
        case Func::Exp: return e * du;
        case Func::Log: return du * pow(u, -1);
        case Func::Sin: return cos(u) * du;
        case Func::Cos: return -(sin(u) * du);
      }
      return Expr(0);
    }
    case Expr::Kind::Power: {
      const Expr& b = e.operands()[0];
      Expr db = differentiate(b, v);
      if (db.is_zero()) return db;
      return Expr(e.exponent()) * pow(b, e.exponent() - 1) * db;
    }
    case Expr::Kind::Product: {
      const auto& fs = e.operands();
      Expr total(0);
      for (std::size_t i = 0; i < fs.size(); ++i) {
        Expr d = differentiate(fs[i], v);
        if (d.is_zero()) continue;
        Expr term = Expr(e.value()) * d;
        for (std::size_t j = 0; j < fs.size(); ++j) {
          if (j != i) term = term * fs[j];
        }
        total = total + term;
      }
      return total;
    }
    case Expr::Kind::Sum: {
      SumAcc acc;
      for (const auto& t : e.operands()) acc.add(differentiate(t, v));
      return acc.build();
    }
  }
  return Expr(0);
}

Expr differentiate(const Expr& e, const std::string& v, const std::vector<std::string>& coordinates) {
  if (std::find(coordinates.begin(), coordinates.end(), v) == coordinates.end()) {
    throw Error("unknown-variable", "'" + v + "' is not a coordinate of the chart");
  }
  return differentiate(e, v);
}

namespace {

Expr substitute_raw(const Expr& e, const std::map<std::string, Expr>& b) {
  switch (e.kind()) {
    case Expr::Kind::Constant: return e;
    case Expr::Kind::Variable: {
      auto it = b.find(e.name());
      return it == b.end() ? e : it->second;
    }
    case Expr::Kind::Function: return apply(e.func(), substitute_raw(e.operands()[0], b));
    case Expr::Kind::Power: return pow(substitute_raw(e.operands()[0], b), e.exponent());
    case Expr::Kind::Product: {
      Expr r(e.value());
      for (const auto& f : e.operands()) r = r * substitute_raw(f, b);
      return r;
    }
    case Expr::Kind::Sum: {
      SumAcc acc;
      acc.constant = e.value();
      for (const auto& t : e.operands()) acc.add(substitute_raw(t, b));
      return acc.build();
    }
  }
  return e;
}

}  // namespace

Expr substitute(const Expr& e, const std::map<std::string, Expr>& bindings) {
  if (bindings.empty()) return e;
  return normalize(substitute_raw(e, bindings));
}

// ------------------------------------------------- rational normalization

namespace {

// Monomial over atoms with non-negative exponents, sorted by atom.
using Mono = FactorList;

struct MonoLess {
  bool operator()(const Mono& a, const Mono& b) const {
    std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
      int c = compare(a[i].first, b[i].first);
      if (c != 0) return c < 0;
      if (a[i].second != b[i].second) return a[i].second < b[i].second;
    }
    return a.size() < b.size();
  }
};

// Lexicographic term order: true when a is a larger monomial than b.
bool lex_greater(const Mono& a, const Mono& b) {
  std::size_t i = 0;
  for (; i < a.size() && i < b.size(); ++i) {
    int c = compare(a[i].first, b[i].first);
    if (c != 0) return c < 0;  // a has a smaller (higher-priority) atom b lacks
    if (a[i].second != b[i].second) return a[i].second > b[i].second;
  }
  return i < a.size();
}

using Poly = std::map<Mono, Rational, MonoLess>;

std::optional<Poly> to_poly(const Expr& e) {
  Poly p;
  for (const auto& t : sum_terms(e)) {
    auto [c, m] = split_term(t);
    FactorMap f;
    append_factors(m, 1, f);
    Mono mono;
    for (const auto& [b, k] : f) {
      if (k < 0 || b.kind() == Expr::Kind::Sum) return std::nullopt;
      mono.emplace_back(b, k);
    }
    p[mono] += c;
  }
  for (auto it = p.begin(); it != p.end();) it = it->second == 0 ? p.erase(it) : std::next(it);
  return p;
}

Expr from_poly(const Poly& p) {
  SumAcc acc;
  for (const auto& [m, c] : p) {
    if (c != 0) acc.add(build_monomial(c, m));
  }
  return acc.build();
}

const Poly::value_type* leading(const Poly& p) {
  const Poly::value_type* best = nullptr;
  for (const auto& kv : p) {
    if (best == nullptr || lex_greater(kv.first, best->first)) best = &kv;
  }
  return best;
}

// q with a == q*b, when b divides a as polynomials in independent atoms.
std::optional<Expr> exact_divide(const Expr& a, const Expr& b) {
  auto pa = to_poly(a);
  auto pb = to_poly(b);
  if (!pa || !pb || pb->empty()) return std::nullopt;
  const auto* lb = leading(*pb);
  Mono lbm = lb->first;
  Rational lbc = lb->second;
  Poly p = *pa;
  Poly quotient;
  int guard = 0;
  while (!p.empty()) {
    if (++guard > 100000) return std::nullopt;
    const auto* lt = leading(p);
    // quotient monomial lt / lbm
    FactorMap qm;
    for (const auto& [atom, k] : lt->first) qm[atom] += k;
    for (const auto& [atom, k] : lbm) qm[atom] -= k;
    Mono qmono;
    for (const auto& [atom, k] : qm) {
      if (k < 0) return std::nullopt;
      if (k > 0) qmono.emplace_back(atom, k);
    }
    Rational qc = lt->second / lbc;
    quotient[qmono] += qc;
    for (const auto& [bm, bc] : *pb) {
      FactorMap prod;
      for (const auto& [atom, k] : qmono) prod[atom] += k;
      for (const auto& [atom, k] : bm) prod[atom] += k;
      Mono pm(prod.begin(), prod.end());
      auto& slot = p[pm];
      slot -= qc * bc;
      if (slot == 0) p.erase(pm);
    }
  }
  return from_poly(quotient);
}

bool has_denominator(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::Constant:
    case Expr::Kind::Variable: return false;
    case Expr::Kind::Power:
      return e.exponent() < 0 || has_denominator(e.operands()[0]);
    default:
      for (const auto& o : e.operands()) {
        if (has_denominator(o)) return true;
      }
      return false;
  }
}

struct Fraction {
  Expr num;
  FactorMap den;
};

Fraction to_fraction(const Expr& e);

Fraction invert_numerator(const Fraction& fb, int k) {
  // (N/D)^(-k) = D^k / N^k
  Fraction out{Expr(1), {}};
  for (const auto& [d, m] : fb.den) out.num = out.num * pow(d, m * k);
  const Expr& n = fb.num;
  if (n.is_zero()) throw Error("evaluation-domain", "division by zero");
  if (n.is_constant()) {
    out.num = out.num * Expr(rational_pow(n.value(), -k));
  } else if (n.kind() == Expr::Kind::Sum) {
    Rational lead = split_term(n.operands()[0]).first;
    out.num = out.num * Expr(rational_pow(lead, -k));
    out.den[scale(n, Rational(1) / lead)] += k;
  } else {
    auto [c, m] = split_term(n);
    out.num = out.num * Expr(rational_pow(c, -k));
    FactorMap f;
    append_factors(m, 1, f);
    for (const auto& [atom, j] : f) {
      if (j > 0) {
        out.den[atom] += j * k;
      } else {
        out.num = out.num * pow(atom, -j * k);
      }
    }
  }
  return out;
}

Fraction to_fraction(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::Constant:
    case Expr::Kind::Variable: return {e, {}};
    case Expr::Kind::Function: return {apply(e.func(), normalize(e.operands()[0])), {}};
    case Expr::Kind::Power: {
      const Expr& b = e.operands()[0];
      int k = e.exponent();
      if (k > 0) {
        Fraction fb = to_fraction(b);
        Fraction out{pow(fb.num, k), {}};
        for (const auto& [d, m] : fb.den) out.den[d] += m * k;
        return out;
      }
      return invert_numerator(to_fraction(b), -k);
    }
    case Expr::Kind::Product: {
      Fraction out{Expr(e.value()), {}};
      for (const auto& f : e.operands()) {
        Fraction ff = to_fraction(f);
        out.num = out.num * ff.num;
        for (const auto& [d, m] : ff.den) out.den[d] += m;
      }
      return out;
    }
    case Expr::Kind::Sum: {
      std::vector<Fraction> parts;
      parts.push_back({Expr(e.value()), {}});
      for (const auto& t : e.operands()) parts.push_back(to_fraction(t));
      FactorMap lcm;
      for (const auto& p : parts) {
        for (const auto& [d, m] : p.den) lcm[d] = std::max(lcm[d], m);
      }
      SumAcc acc;
      for (const auto& p : parts) {
        Expr n = p.num;
        for (const auto& [d, m] : lcm) {
          auto it = p.den.find(d);
          int have = it == p.den.end() ? 0 : it->second;
          if (m > have) n = n * pow(d, m - have);
        }
        acc.add(n);
      }
      return {acc.build(), lcm};
    }
  }
  return {e, {}};
}

}  // namespace

Expr normalize(const Expr& e) {
  if (!has_denominator(e)) {
    if (e.kind() == Expr::Kind::Constant || e.kind() == Expr::Kind::Variable) return e;
    bool has_func = false;
    std::function<void(const Expr&)> scan = [&](const Expr& x) {
      if (x.kind() == Expr::Kind::Function) has_func = true;
      for (const auto& o : x.operands()) scan(o);
    };
    scan(e);
    if (!has_func) return e;
  }
  Fraction fr = to_fraction(e);
  if (fr.num.is_zero()) return Expr(0);
  Expr num = fr.num;
  for (auto& [d, m] : fr.den) {
    while (m > 0) {
      auto q = exact_divide(num, d);
      if (!q) break;
      num = *q;
      --m;
    }
  }
  Expr result = num;
  for (const auto& [d, m] : fr.den) {
    if (m > 0) result = result * pow(d, -m);
  }
  return result;
}

// ------------------------------------------------------------ numerics

namespace {

double eval_impl(const Expr& e, const std::function<double(const std::string&)>& lookup) {
  switch (e.kind()) {
    case Expr::Kind::Constant: return e.value().get_d();
    case Expr::Kind::Variable: return lookup(e.name());
    case Expr::Kind::Function: {
      double u = eval_impl(e.operands()[0], lookup);
      switch (e.func()) {
        case Func::Sqrt:
          if (u < 0) throw Error("evaluation-domain", "sqrt of negative value");
          return std::sqrt(u);
        case Func::Exp: return std::exp(u);
        case Func::Log:
          if (u <= 0) throw Error("evaluation-domain", "log of non-positive value");
          return std::log(u);
        case Func::Sin: return std::sin(u);
        case Func::Cos: return std::cos(u);
      }
      return 0.0;
    }
    case Expr::Kind::Power: {
      double b = eval_impl(e.operands()[0], lookup);
      if (b == 0.0 && e.exponent() < 0) throw Error("evaluation-domain", "division by zero");
      return std::pow(b, e.exponent());
    }
    case Expr::Kind::Product: {
      double r = e.value().get_d();
      for (const auto& f : e.operands()) r *= eval_impl(f, lookup);
      return r;
    }
    case Expr::Kind::Sum: {
      double r = e.value().get_d();
      for (const auto& t : e.operands()) r += eval_impl(t, lookup);
      return r;
    }
  }
  return 0.0;
}

template <typename Map>
double evaluate_map(const Expr& e, const Map& point) {
  double v = eval_impl(e, [&](const std::string& n) {
    auto it = point.find(n);
    if (it == point.end()) throw Error("unbound-variable", "no value for '" + n + "'");
    if constexpr (std::is_same_v<typename Map::mapped_type, double>) {
      return it->second;
    } else {
      return it->second.get_d();
    }
  });
  if (!std::isfinite(v)) throw Error("evaluation-domain", "non-finite value");
  return v;
}

}  // namespace

double evaluate(const Expr& e, const Point& point) { return evaluate_map(e, point); }
double evaluate(const Expr& e, const NumericPoint& point) { return evaluate_map(e, point); }

std::set<std::string> free_variables(const Expr& e) {
  std::set<std::string> out;
  std::function<void(const Expr&)> walk = [&](const Expr& x) {
    if (x.kind() == Expr::Kind::Variable) out.insert(x.name());
    for (const auto& o : x.operands()) walk(o);
  };
  walk(e);
  return out;
}

std::optional<int> polynomial_degree(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::Constant: return 0;
    case Expr::Kind::Variable: return 1;
    case Expr::Kind::Function: return std::nullopt;
    case Expr::Kind::Power: {
      if (e.exponent() < 0) return std::nullopt;
      auto d = polynomial_degree(e.operands()[0]);
      if (!d) return std::nullopt;
      return *d * e.exponent();
    }
    case Expr::Kind::Product: {
      int total = 0;
      for (const auto& f : e.operands()) {
        auto d = polynomial_degree(f);
        if (!d) return std::nullopt;
        total += *d;
      }
      return total;
    }
    case Expr::Kind::Sum: {
      int best = 0;
      for (const auto& t : e.operands()) {
        auto d = polynomial_degree(t);
        if (!d) return std::nullopt;
        best = std::max(best, *d);
      }
      return best;
    }
  }
  return std::nullopt;
}

ZeroCheck is_zero(const Expr& e, const ZeroOptions& options) {
  ZeroCheck out;
  Expr n = normalize(e);
  if (n.is_zero()) {
    out.status = ZeroStatus::ProvenZero;
    out.exact = true;
    return out;
  }
  if (n.is_constant()) {
    out.status = ZeroStatus::ProvenNonzero;
    out.exact = true;
    out.witness = Point{};
    out.witness_value = n.value().get_d();
    return out;
  }
  auto vars = free_variables(n);
  Rng rng(options.seed);
  int good = 0;
  double worst = 0.0;
  int attempts = options.samples * options.retry_factor;
  for (int a = 0; a < attempts && good < options.samples; ++a) {
    Point p;
    for (const auto& v : vars) p[v] = rng.rational();
    double val = 0.0;
    try {
      val = evaluate(n, p);
    } catch (const Error&) {
      continue;
    }
    ++good;
    worst = std::max(worst, std::abs(val));
    if (std::abs(val) > 1e-6) {
      out.status = ZeroStatus::ProvenNonzero;
      out.witness = p;
      out.witness_value = val;
      return out;
    }
  }
  if (good < options.samples) return out;
  auto deg = polynomial_degree(n);
  if (worst < 1e-10 && deg && *deg < options.samples) out.status = ZeroStatus::ProvenZero;
  return out;
}

bool is_identically_zero(const Expr& e) { return normalize(e).is_zero(); }

// ------------------------------------------------------------ printing

namespace {

void print(const Expr& e, std::ostringstream& os);

void print_base(const Expr& b, std::ostringstream& os) {
  if (b.kind() == Expr::Kind::Variable || b.kind() == Expr::Kind::Function) {
    print(b, os);
  } else {
    os << '(';
    print(b, os);
    os << ')';
  }
}

void print_unsigned_term(const Expr& t, std::ostringstream& os) {
  if (t.kind() == Expr::Kind::Product) {
    Rational c = abs(t.value());
    bool first = true;
    if (c != 1) {
      os << c.get_str();
      first = false;
    }
    for (const auto& f : t.operands()) {
      if (!first) os << '*';
      first = false;
      if (f.kind() == Expr::Kind::Sum) {
        os << '(';
        print(f, os);
        os << ')';
      } else {
        print(f, os);
      }
    }
  } else if (t.kind() == Expr::Kind::Constant) {
    os << Rational(abs(t.value())).get_str();
  } else {
    print(t, os);
  }
}

bool negative_term(const Expr& t) {
  return (t.kind() == Expr::Kind::Product || t.kind() == Expr::Kind::Constant) && t.value() < 0;
}

void print(const Expr& e, std::ostringstream& os) {
  switch (e.kind()) {
    case Expr::Kind::Constant: os << e.value().get_str(); return;
    case Expr::Kind::Variable: os << e.name(); return;
    case Expr::Kind::Function:
      os << func_name(e.func()) << '(';
      print(e.operands()[0], os);
      os << ')';
      return;
    case Expr::Kind::Power:
      print_base(e.operands()[0], os);
      if (e.exponent() < 0) {
        os << "^(" << e.exponent() << ')';
      } else {
        os << '^' << e.exponent();
      }
      return;
    case Expr::Kind::Product:
      if (e.value() < 0) os << '-';
      print_unsigned_term(e, os);
      return;
    case Expr::Kind::Sum: {
      bool first = true;
      for (const auto& t : e.operands()) {
        bool neg = negative_term(t);
        if (first) {
          if (neg) os << '-';
        } else {
          os << (neg ? " - " : " + ");
        }
        print_unsigned_term(t, os);
        first = false;
      }
      if (e.value() != 0) os << (e.value() < 0 ? " - " : " + ") << Rational(abs(e.value())).get_str();
      return;
    }
  }
}

}  // namespace

std::string to_string(const Expr& e) {
  std::ostringstream os;
  print(e, os);
  return os.str();
}

}  // namespace foliate
