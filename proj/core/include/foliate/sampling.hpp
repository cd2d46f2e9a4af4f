#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "foliate/expr.hpp"
#include "foliate/random.hpp"

namespace foliate {

// Exact value of e at a rational point when it normalizes to a constant.
std::optional<Rational> exact_value(const Expr& e, const Point& p);
double numeric_value(const Expr& e, const Point& p);

struct PointDecision {
  ZeroStatus status = ZeroStatus::Undecided;
  bool exact = false;
  double value = 0.0;
};

// Zero test of e at one point; numeric values within `tol` of zero stay undecided.
PointDecision decide_at(const Expr& e, const Point& p, double tol = 1e-9);

// Strict inequalities e > 0; a constraint that cannot be evaluated counts as violated.
bool in_domain(const std::vector<Expr>& domain, const Point& p);

// Up to `count` points of the domain: the all-ones point first when it
// qualifies, then random rationals in [-3, 3].
std::vector<Point> sample_domain(const std::vector<std::string>& coords, const std::vector<Expr>& domain,
                                 int count, Rng& rng);

Point bind_point(const std::vector<std::string>& coords, const std::vector<Rational>& values);
std::string point_to_string(const Point& p, const std::vector<std::string>& coords);

// True when every factor of e that can break smoothness (bases of negative
// powers, sqrt and log arguments) is exactly nonzero, resp. positive, at p.
bool regular_at(const Expr& e, const Point& p);

// Seeded unit directions in R^n.
std::vector<std::vector<double>> unit_rays(int n, int count, std::uint64_t seed);

struct RayLimit {
  bool converged = false;
  std::vector<double> value;
};

// Limit of f(p + t d) as t runs over 1e-2 .. 1e-8; converged when the last
// two values agree within `tolerance` and every value is finite.
RayLimit ray_limit(const std::function<std::vector<double>(const NumericPoint&)>& f, const Point& p,
                   const std::vector<std::string>& coords, const std::vector<double>& direction, double tolerance);

double max_abs_difference(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace foliate
