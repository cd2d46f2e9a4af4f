#include "foliate/chernweil.hpp"

#include <sstream>

#include "foliate/error.hpp"

namespace foliate {

namespace {

void require_index(int i, int q, bool odd) {
  if (i < 1 || i > q || (odd && i % 2 == 0))
    throw Error("index-out-of-range", "generator index " + std::to_string(i) + " outside 1.." + std::to_string(q));
}

DiffForm one_form(const ChartPtr& chart) { return DiffForm::scalar(chart, Expr(1)); }

DiffForm trace_power(const MatrixForm& r, int i) { return trace(matrix_power_wedge(r, i)); }

DiffForm wedge_power(const DiffForm& f, int k) {
  DiffForm out = one_form(f.chart());
  for (int j = 0; j < k; ++j) out = wedge(out, f);
  return out;
}

std::string index_name(const DiffForm::Index& idx, const Chart& chart) {
  if (idx.empty()) return "1";
  std::string s;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (k) s += "^";
    s += "d" + chart.coordinates[static_cast<std::size_t>(idx[k])];
  }
  return s;
}

}  // namespace

DiffForm lambda_c(int i, const MetricConnection& mc) {
  require_index(i, mc.onb.theta.rows(), false);
  return trace_power(curvature(mc.onb), i);
}

DiffForm lambda_h(int i, const MetricConnection& mc) {
  require_index(i, mc.onb.theta.rows(), true);
  const MatrixForm& theta_eps = mc.metric.theta;
  MatrixForm beta = mc.onb.theta - theta_eps;
  if (i == 1) return trace(beta);
  TPolyMatrix theta_t{{theta_eps, beta}};
  TPolyMatrix r_t = tpoly_wedge(theta_t, theta_t);
  int q = beta.rows();
  r_t.coefficients.resize(3, MatrixForm(beta.chart(), q, q, 2));
  r_t.coefficients[0] = r_t.coefficients[0] + exterior_derivative(theta_eps);
  r_t.coefficients[1] = r_t.coefficients[1] + exterior_derivative(beta);
  TPolyMatrix integrand = tpoly_wedge(TPolyMatrix{{beta}}, tpoly_power_wedge(r_t, i - 1));
  return Expr(i) * integrate_t01(tpoly_trace(integrand));
}

DiffForm lambda_element(const WOElement& x, const MetricConnection& mc) {
  const ChartPtr& chart = mc.onb.chart;
  if (x.is_zero()) return DiffForm(chart, 0);
  DiffForm out;
  bool first = true;
  for (const auto& [m, coef] : x.terms()) {
    DiffForm term = one_form(chart);
    for (std::size_t i = 0; i < m.c.size(); ++i)
      if (m.c[i] > 0) term = wedge(term, wedge_power(lambda_c(static_cast<int>(i) + 1, mc), m.c[i]));
    for (int j : m.h) term = wedge(term, lambda_h(j, mc));
    term = Expr(coef) * term;
    out = first ? term : out + term;
    first = false;
  }
  return out;
}

Status form_zero_status(const DiffForm& f, const ZeroOptions& options) {
  Status s = Status::PassExact;
  for (const auto& [idx, c] : f.terms()) {
    ZeroCheck z = is_zero(c, options);
    Status t = Status::Undecided;
    if (z.status == ZeroStatus::ProvenZero) t = z.exact ? Status::PassExact : Status::PassNumeric;
    if (z.status == ZeroStatus::ProvenNonzero) t = Status::Fail;
    s = worst(s, t);
  }
  return s;
}

Report chain_map_check(const MetricConnection& mc, const ZeroOptions& options) {
  Report r;
  int q = mc.onb.theta.rows();
  for (int i = 1; i <= q; ++i) {
    DiffForm c = lambda_c(i, mc);
    r.check("d lambda(c" + std::to_string(i) + ") = 0", form_zero_status(exterior_derivative(c), options));
  }
  for (int j = 1; j <= q; j += 2) {
    DiffForm h = lambda_h(j, mc);
    DiffForm diff = exterior_derivative(h) - lambda_c(j, mc);
    r.check("d lambda(h" + std::to_string(j) + ") = lambda(c" + std::to_string(j) + ")", form_zero_status(diff, options));
  }
  return r;
}

namespace {

// Exponent vectors of c-monomials with degree in (lo, hi].
void c_monomials(int q, int i, int lo, int hi, std::vector<int>& cur, int degree, std::vector<std::vector<int>>& out) {
  if (i > q) {
    if (degree > lo && degree <= hi) out.push_back(cur);
    return;
  }
  for (int a = 0; degree + 2 * i * a <= hi; ++a) {
    cur[static_cast<std::size_t>(i - 1)] = a;
    c_monomials(q, i + 1, lo, hi, cur, degree + 2 * i * a, out);
  }
  cur[static_cast<std::size_t>(i - 1)] = 0;
}

DiffForm c_monomial_form(const Connection& c, const std::vector<int>& exps) {
  MatrixForm r = curvature(c);
  DiffForm out = one_form(c.chart);
  for (std::size_t i = 0; i < exps.size(); ++i)
    if (exps[i] > 0) out = wedge(out, wedge_power(trace_power(r, static_cast<int>(i) + 1), exps[i]));
  return out;
}

}  // namespace

std::vector<std::pair<std::string, DiffForm>> high_c_monomials(const Connection& c, int n) {
  int q = c.theta.rows();
  std::vector<std::vector<int>> monomials;
  std::vector<int> cur(static_cast<std::size_t>(q), 0);
  c_monomials(q, 1, 2 * q, n, cur, 0, monomials);
  std::vector<std::pair<std::string, DiffForm>> out;
  for (const auto& m : monomials) out.emplace_back("lambda(" + to_string(WOMonomial{m, {}}) + ")", c_monomial_form(c, m));
  return out;
}

Report bott_vanishing_check(const Connection& c, const Splitting& s, const Connection* contrast,
                            const ZeroOptions& options) {
  Report r;
  int q = s.q(), n = s.n();
  if (!is_bott(c, s, options).all_passed()) {
    r.check("bott vanishing", Status::Fail, "refused: the connection is not Bott");
    return r;
  }
  auto monomials = high_c_monomials(c, n);
  std::vector<std::pair<std::string, DiffForm>> contrast_forms;
  if (contrast) contrast_forms = high_c_monomials(*contrast, n);
  if (monomials.empty()) {
    r.check("bott vanishing", Status::PassExact, "no c-monomial of degree above " + std::to_string(2 * q) + " fits in dimension " + std::to_string(n));
    return r;
  }
  for (std::size_t k = 0; k < monomials.size(); ++k) {
    const auto& [name, form] = monomials[k];
    r.check("bott vanishing " + name, form_zero_status(form, options));
    if (!contrast) continue;
    const DiffForm& f = contrast_forms[k].second;
    Status z = form_zero_status(f, options);
    Status st = z == Status::Fail ? Status::PassExact : z == Status::Undecided ? Status::Undecided : Status::Fail;
    r.check("contrast " + name, st, st == Status::PassExact ? "nonzero for the non-Bott connection" : "contrast form vanishes");
    r.form("contrast " + name, to_string(f));
  }
  return r;
}

GVResult gv_algorithm(const std::vector<Expr>& chart_map, const MetricConnection& mc, const ZeroOptions& options) {
  const ChartPtr& chart = mc.onb.chart;
  int q = static_cast<int>(chart_map.size());
  GVResult g;
  DiffForm df = one_form(chart);
  for (const auto& f : chart_map) df = wedge(df, exterior_derivative(DiffForm::scalar(chart, f)));
  g.omega = normalize(Expr(1) / determinant(mc.frame_change)) * df;
  g.eta = -trace(mc.onb.theta);
  DiffForm gv = wedge(g.eta, wedge_power(exterior_derivative(g.eta), q));
  g.gv = q % 2 == 0 ? -gv : gv;
  g.report.check("domega=eta^omega", form_zero_status(exterior_derivative(g.omega) - wedge(g.eta, g.omega), options));
  g.report.check("d(gv)=0", form_zero_status(exterior_derivative(g.gv), options));
  DiffForm lam = wedge(lambda_h(1, mc), wedge_power(lambda_c(1, mc), q));
  std::string cname = q == 1 ? "c1" : "c1^" + std::to_string(q);
  g.report.check("gv=lambda(h1*" + cname + ")", form_zero_status(g.gv - lam, options));
  g.report.form("omega", to_string(g.omega));
  g.report.form("eta", to_string(g.eta));
  g.report.form("gv", to_string(g.gv));
  return g;
}

Report extension_report(const std::vector<std::pair<std::string, DiffForm>>& forms,
                        const std::vector<Point>& singular_points, const ExtensionOptions& options) {
  Report r;
  for (const auto& [name, form] : forms) {
    std::string entry = "extends " + name;
    if (singular_points.empty()) {
      r.check(entry, Status::PassExact, "no singular points");
      continue;
    }
    const Chart& chart = *form.chart();
    std::vector<std::pair<DiffForm::Index, Expr>> hard;
    for (const auto& [idx, c] : form.terms()) {
      bool ok = true;
      for (const auto& p : singular_points) ok = ok && regular_at(c, p);
      if (!ok) hard.emplace_back(idx, c);
    }
    if (hard.empty()) {
      r.check(entry, Status::PassExact, "coefficients regular on the singular set");
      continue;
    }
    auto rays = unit_rays(chart.dimension(), options.rays, options.seed);
    std::string witness;
    for (const auto& p : singular_points) {
      for (const auto& [idx, c] : hard) {
        std::vector<double> first;
        for (std::size_t k = 0; k < rays.size() && witness.empty(); ++k) {
          const Expr& coef = c;
          RayLimit lim = ray_limit([&](const NumericPoint& np) { return std::vector<double>{evaluate(coef, np)}; }, p,
                                   chart.coordinates, rays[k], options.tolerance);
          std::ostringstream os;
          os << "coefficient of " << index_name(idx, chart) << " at " << point_to_string(p, chart.coordinates);
          if (!lim.converged) {
            witness = os.str() + ": no limit along ray " + std::to_string(k + 1);
          } else if (first.empty()) {
            first = lim.value;
          } else if (max_abs_difference(first, lim.value) > 100 * options.tolerance) {
            witness = os.str() + ": limits along rays 1 and " + std::to_string(k + 1) + " differ";
          }
        }
        if (!witness.empty()) break;
      }
      if (!witness.empty()) break;
    }
    if (witness.empty())
      r.check(entry, Status::PassNumeric, "ray limits converge within " + [&] {
        std::ostringstream os;
        os << options.tolerance;
        return os.str();
      }());
    else
      r.check(entry, Status::Fail, witness);
  }
  return r;
}

}  // namespace foliate
