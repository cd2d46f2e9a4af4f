#pragma once

#include <string>
#include <utility>
#include <vector>

#include "foliate/geometry.hpp"
#include "foliate/woq.hpp"

namespace foliate {

// Characteristic forms, all computed in the eps-orthonormal frame of mc.
DiffForm lambda_c(int i, const MetricConnection& mc);
// i * int_0^1 Tr(beta ^ R_t^(i-1)) dt with beta = theta' - theta_eps and
// theta_t = theta_eps + t beta.
DiffForm lambda_h(int i, const MetricConnection& mc);
DiffForm lambda_element(const WOElement& x, const MetricConnection& mc);

// Zero test of every coefficient: exact by normal form, else sampled.
Status form_zero_status(const DiffForm& f, const ZeroOptions& options = {});

// d lambda(c_i) = 0 and d lambda(h_j) = lambda(c_j).
Report chain_map_check(const MetricConnection& mc, const ZeroOptions& options = {});

// Tr-curvature products for every c-monomial of degree in (2q, n], named
// like "lambda(c1^2)".
std::vector<std::pair<std::string, DiffForm>> high_c_monomials(const Connection& c, int n);

// lambda of every c-monomial of degree in (2q, n]; refuses a connection
// that is not Bott. A contrast connection, when given, is expected to
// produce a nonzero form.
Report bott_vanishing_check(const Connection& c, const Splitting& s, const Connection* contrast = nullptr,
                            const ZeroOptions& options = {});

struct GVResult {
  DiffForm omega;
  DiffForm eta;
  DiffForm gv;
  Report report;
};

// omega = det(A^-1) df^1 ^ ... ^ df^q, eta = -Tr(theta'), gv = (-1)^(q+1) eta ^ (d eta)^q.
GVResult gv_algorithm(const std::vector<Expr>& chart_map, const MetricConnection& mc,
                      const ZeroOptions& options = {});

struct ExtensionOptions {
  int rays = 5;
  double tolerance = 1e-6;
  std::uint64_t seed = 0;
};

// Each form extends smoothly across the singular points: exact when every
// coefficient is regular there, else by convergence of ray limits.
Report extension_report(const std::vector<std::pair<std::string, DiffForm>>& forms,
                        const std::vector<Point>& singular_points, const ExtensionOptions& options = {});

}  // namespace foliate
