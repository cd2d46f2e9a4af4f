#include "foliate/sampling.hpp"

#include <cmath>

#include "foliate/error.hpp"

namespace foliate {

namespace {

std::map<std::string, Expr> as_bindings(const Point& p) {
  std::map<std::string, Expr> b;
  for (const auto& [k, v] : p) b[k] = Expr(v);
  return b;
}

}  // namespace

std::optional<Rational> exact_value(const Expr& e, const Point& p) {
  try {
    Expr v = normalize(substitute(e, as_bindings(p)));
    if (v.is_constant()) return v.value();
  } catch (const Error&) {
  }
  return std::nullopt;
}

double numeric_value(const Expr& e, const Point& p) {
  try {
    return evaluate(e, p);
  } catch (const Error&) {
    return std::nan("");
  }
}

PointDecision decide_at(const Expr& e, const Point& p, double tol) {
  PointDecision d;
  if (auto v = exact_value(e, p)) {
    d.exact = true;
    d.value = v->get_d();
    d.status = *v == 0 ? ZeroStatus::ProvenZero : ZeroStatus::ProvenNonzero;
    return d;
  }
  d.value = numeric_value(e, p);
  if (std::isfinite(d.value) && std::fabs(d.value) > tol) d.status = ZeroStatus::ProvenNonzero;
  return d;
}

bool in_domain(const std::vector<Expr>& domain, const Point& p) {
  for (const auto& c : domain) {
    if (auto v = exact_value(c, p)) {
      if (*v <= 0) return false;
      continue;
    }
    double x = numeric_value(c, p);
    if (!std::isfinite(x) || x <= 0) return false;
  }
  return true;
}

std::vector<Point> sample_domain(const std::vector<std::string>& coords, const std::vector<Expr>& domain,
                                 int count, Rng& rng) {
  std::vector<Point> out;
  if (count <= 0) return out;
  Point ones;
  for (const auto& c : coords) ones[c] = 1;
  if (in_domain(domain, ones)) out.push_back(ones);
  for (int attempt = 0; static_cast<int>(out.size()) < count && attempt < 200 * count; ++attempt) {
    Point p;
    for (const auto& c : coords) {
      long den = rng.uniform_int(1, 7);
      Rational r(rng.uniform_int(-3 * den, 3 * den), den);
      r.canonicalize();
      p[c] = r;
    }
    if (in_domain(domain, p)) out.push_back(p);
  }
  return out;
}

Point bind_point(const std::vector<std::string>& coords, const std::vector<Rational>& values) {
  Point p;
  for (std::size_t i = 0; i < coords.size() && i < values.size(); ++i) p[coords[i]] = values[i];
  return p;
}

std::string point_to_string(const Point& p, const std::vector<std::string>& coords) {
  std::string s;
  if (coords.empty()) {
    for (const auto& [k, v] : p) s += (s.empty() ? "" : ", ") + k + "=" + v.get_str();
    return s;
  }
  for (const auto& c : coords) {
    auto it = p.find(c);
    if (it == p.end()) continue;
    if (!s.empty()) s += ", ";
    s += c + "=" + it->second.get_str();
  }
  return s;
}

namespace {

void singular_factors(const Expr& e, std::vector<std::pair<Expr, bool>>& out) {
  switch (e.kind()) {
    case Expr::Kind::Power:
      if (e.exponent() < 0) out.emplace_back(e.operands()[0], false);
      break;
    case Expr::Kind::Function:
      if (e.func() == Func::Sqrt || e.func() == Func::Log) out.emplace_back(e.operands()[0], true);
      break;
    default:
      break;
  }
  if (e.kind() != Expr::Kind::Constant && e.kind() != Expr::Kind::Variable)
    for (const auto& o : e.operands()) singular_factors(o, out);
}

bool finite(const std::vector<double>& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

}  // namespace

bool regular_at(const Expr& e, const Point& p) {
  std::vector<std::pair<Expr, bool>> factors;
  singular_factors(normalize(e), factors);
  for (const auto& [f, positive] : factors) {
    auto v = exact_value(f, p);
    if (!v) return false;
    if (positive ? *v <= 0 : *v == 0) return false;
  }
  return true;
}

std::vector<std::vector<double>> unit_rays(int n, int count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::vector<double>> rays;
  while (static_cast<int>(rays.size()) < count) {
    std::vector<double> d;
    double norm = 0;
    for (int i = 0; i < n; ++i) {
      d.push_back(2 * rng.uniform_real() - 1);
      norm += d.back() * d.back();
    }
    if (norm < 1e-6) continue;
    for (auto& x : d) x /= std::sqrt(norm);
    rays.push_back(d);
  }
  return rays;
}

double max_abs_difference(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
  return m;
}

RayLimit ray_limit(const std::function<std::vector<double>(const NumericPoint&)>& f, const Point& p,
                   const std::vector<std::string>& coords, const std::vector<double>& direction, double tolerance) {
  RayLimit out;
  std::vector<double> prev;
  for (int e = 2; e <= 8; ++e) {
    double t = std::pow(10.0, -e);
    NumericPoint np;
    for (std::size_t i = 0; i < coords.size(); ++i) np[coords[i]] = p.at(coords[i]).get_d() + t * direction[i];
    std::vector<double> cur;
    try {
      cur = f(np);
    } catch (const std::exception&) {
      return out;
    }
    if (!finite(cur)) return out;
    prev = std::move(out.value);
    out.value = std::move(cur);
  }
  out.converged = max_abs_difference(prev, out.value) < tolerance;
  return out;
}

}  // namespace foliate
