#include "foliate/geometry.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <sstream>

#include "foliate/error.hpp"

namespace foliate {

namespace {

ExprMatrix from_columns(int rows, const std::vector<VectorField>& cols) {
  ExprMatrix m(rows, static_cast<int>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (int i = 0; i < rows; ++i) m(i, static_cast<int>(j)) = cols[j][static_cast<std::size_t>(i)];
  return m;
}

ExprMatrix derivative(const ExprMatrix& m, const std::string& v) {
  ExprMatrix r(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) r(i, j) = normalize(differentiate(m(i, j), v));
  return r;
}

// theta(X) as a q x q matrix of functions.
ExprMatrix evaluate_matrix(const MatrixForm& theta, const VectorField& x) {
  ExprMatrix r(theta.rows(), theta.cols());
  for (int i = 0; i < theta.rows(); ++i)
    for (int j = 0; j < theta.cols(); ++j) r(i, j) = evaluate_form(theta(i, j), {x});
  return r;
}

struct ZeroResult {
  Status status = Status::PassExact;
  std::string witness;
};

Status zero_status(const Expr& e, const ZeroOptions& options) {
  Expr n = normalize(e);
  if (n.is_zero()) return Status::PassExact;
  ZeroCheck z = is_zero(n, options);
  switch (z.status) {
    case ZeroStatus::ProvenZero: return z.exact ? Status::PassExact : Status::PassNumeric;
    case ZeroStatus::ProvenNonzero: return Status::Fail;
    case ZeroStatus::Undecided: return Status::Undecided;
  }
  return Status::Undecided;
}

void accumulate(ZeroResult& r, const Expr& e, const ZeroOptions& options, const std::string& where) {
  Status s = zero_status(e, options);
  if (worst(r.status, s) != r.status) {
    r.status = worst(r.status, s);
    r.witness = where;
  }
}

std::vector<Expr> apply_matrix(const ExprMatrix& m, const std::vector<Expr>& v) {
  std::vector<Expr> out(static_cast<std::size_t>(m.rows()), Expr(0));
  for (int i = 0; i < m.rows(); ++i) {
    Expr s(0);
    for (int k = 0; k < m.cols(); ++k) s = s + m(i, k) * v[static_cast<std::size_t>(k)];
    out[static_cast<std::size_t>(i)] = normalize(s);
  }
  return out;
}

}  // namespace

Metric euclidean_metric(const ChartPtr& chart) { return Metric{chart, ExprMatrix::identity(chart->dimension())}; }

Report check_metric(const Metric& m, const std::vector<Point>& points) {
  Report r;
  int n = m.g.rows();
  bool sym = m.g.cols() == n;
  for (int i = 0; i < n && sym; ++i)
    for (int j = i + 1; j < n && sym; ++j) sym = normalize(m.g(i, j) - m.g(j, i)).is_zero();
  r.check("metric symmetric", sym ? Status::PassExact : Status::Fail);
  if (!sym) return r;
  Status pd = Status::PassExact;
  std::string detail;
  for (const auto& p : points) {
    for (int k = 1; k <= n; ++k) {
      ExprMatrix lead(k, k);
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) lead(i, j) = m.g(i, j);
      Expr det = determinant(lead);
      if (auto v = exact_value(det, p)) {
        if (*v <= 0) {
          pd = Status::Fail;
          detail = "leading minor " + std::to_string(k) + " not positive at " + point_to_string(p, m.chart->coordinates);
        }
      } else {
        double x = numeric_value(det, p);
        if (!(x > 0)) {
          pd = Status::Fail;
          detail = "leading minor " + std::to_string(k) + " not positive at " + point_to_string(p, m.chart->coordinates);
        } else if (pd == Status::PassExact) {
          pd = Status::PassNumeric;
        }
      }
    }
  }
  r.check("metric positive definite", pd, detail.empty() ? std::to_string(points.size()) + " points" : detail);
  return r;
}

std::vector<Expr> Splitting::project(const VectorField& z) const {
  return apply_matrix(normal_df_inverse, apply_matrix(df, z));
}

Splitting metric_splitting(const Metric& g, const std::vector<Expr>& chart_map, const Point& reference) {
  Splitting s;
  s.chart = g.chart;
  const auto& coords = g.chart->coordinates;
  int n = static_cast<int>(coords.size());
  s.df = jacobian(chart_map, coords);
  ExprMatrix ginv = inverse(g.g);
  ExprMatrix gram = (s.df * ginv * s.df.transpose()).normalized();
  s.normal = (ginv * s.df.transpose() * inverse(gram)).normalized();
  s.leaf = from_columns(n, s.df.rows() < n ? kernel_fields(s.df, reference) : std::vector<VectorField>{});
  s.normal_df_inverse = inverse((s.df * s.normal).normalized());
  return s;
}

EuclideanStructure induced_euclidean(const Metric& g, const Splitting& s) {
  return EuclideanStructure{g.chart, (s.normal.transpose() * g.g * s.normal).normalized()};
}

ExprMatrix christoffel(const Metric& g, int upper) {
  const auto& coords = g.chart->coordinates;
  int n = static_cast<int>(coords.size());
  ExprMatrix ginv = inverse(g.g);
  std::vector<ExprMatrix> dg;
  for (const auto& c : coords) dg.push_back(derivative(g.g, c));
  ExprMatrix out(n, n);
  for (int b = 0; b < n; ++b)
    for (int c = 0; c < n; ++c) {
      Expr sum(0);
      for (int d = 0; d < n; ++d) {
        if (ginv(upper, d).is_zero()) continue;
        sum = sum + ginv(upper, d) * (dg[b](d, c) + dg[c](d, b) - dg[d](b, c));
      }
      out(b, c) = normalize(Expr(make_rational(1, 2)) * sum);
    }
  return out;
}

Connection bott_levi_civita(const Metric& g, const Splitting& s) {
  const Chart& chart = *g.chart;
  int n = s.n(), q = s.q(), leaves = s.leaf.cols();
  std::vector<ExprMatrix> gamma;
  for (int a = 0; a < n; ++a) gamma.push_back(christoffel(g, a));
  // Normal part: p(nabla^LC_{N_k} N_j).
  std::vector<std::vector<std::vector<Expr>>> normal_part(static_cast<std::size_t>(q));
  for (int j = 0; j < q; ++j) {
    VectorField nj = s.normal_field(j);
    for (int k = 0; k < q; ++k) {
      VectorField nk = s.normal_field(k);
      VectorField cov(static_cast<std::size_t>(n), Expr(0));
      for (int a = 0; a < n; ++a) {
        Expr v = apply_vector(nk, nj[static_cast<std::size_t>(a)], chart);
        for (int b = 0; b < n; ++b)
          for (int c = 0; c < n; ++c)
            if (!gamma[a](b, c).is_zero()) v = v + gamma[a](b, c) * nk[static_cast<std::size_t>(b)] * nj[static_cast<std::size_t>(c)];
        cov[static_cast<std::size_t>(a)] = normalize(v);
      }
      normal_part[j].push_back(s.project(cov));
    }
  }
  // Leaf part: p([L_m, N_j]).
  std::vector<std::vector<std::vector<Expr>>> leaf_part(static_cast<std::size_t>(q));
  bool any_leaf = false;
  for (int j = 0; j < q; ++j)
    for (int m = 0; m < leaves; ++m) {
      auto p = s.project(lie_bracket(s.leaf_field(m), s.normal_field(j), chart));
      for (const auto& e : p) any_leaf = any_leaf || !e.is_zero();
      leaf_part[j].push_back(p);
    }
  ExprMatrix coeffs = (s.normal_df_inverse * s.df).normalized();  // normal components of d/dx^B
  ExprMatrix leaf_coeffs;
  if (any_leaf) {
    ExprMatrix frame(n, n);
    for (int r = 0; r < n; ++r) {
      for (int j = 0; j < q; ++j) frame(r, j) = s.normal(r, j);
      for (int m = 0; m < leaves; ++m) frame(r, q + m) = s.leaf(r, m);
    }
    leaf_coeffs = inverse(frame);
  }
  Connection c{g.chart, MatrixForm(g.chart, q, q, 1)};
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j) {
      DiffForm f(g.chart, 1);
      for (int b = 0; b < n; ++b) {
        Expr v(0);
        for (int k = 0; k < q; ++k) v = v + coeffs(k, b) * normal_part[j][k][static_cast<std::size_t>(i)];
        if (any_leaf)
          for (int m = 0; m < leaves; ++m) v = v + leaf_coeffs(q + m, b) * leaf_part[j][m][static_cast<std::size_t>(i)];
        f.add_term({b}, normalize(v));
      }
      c.theta(i, j) = f;
    }
  return c;
}

Connection zero_connection(const ChartPtr& chart, int q) { return Connection{chart, MatrixForm(chart, q, q, 1)}; }

MatrixForm curvature(const Connection& c) { return exterior_derivative(c.theta) + matrix_wedge(c.theta, c.theta); }

namespace {

// nabla_X of a section with normal-frame coordinates sigma.
std::vector<Expr> covariant(const Connection& c, const VectorField& x, const std::vector<Expr>& sigma) {
  ExprMatrix th = evaluate_matrix(c.theta, x);
  std::vector<Expr> out = apply_matrix(th, sigma);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = normalize(out[i] + apply_vector(x, sigma[i], *c.chart));
  return out;
}

std::vector<std::pair<std::string, VectorField>> frame_fields(const Splitting& s) {
  std::vector<std::pair<std::string, VectorField>> out;
  for (int j = 0; j < s.q(); ++j) out.emplace_back("N" + std::to_string(j + 1), s.normal_field(j));
  for (int m = 0; m < s.leaf.cols(); ++m) out.emplace_back("L" + std::to_string(m + 1), s.leaf_field(m));
  return out;
}

}  // namespace

Report torsion(const Connection& c, const Splitting& s, const ZeroOptions& options) {
  Report r;
  auto fields = frame_fields(s);
  ZeroResult res;
  for (std::size_t a = 0; a < fields.size(); ++a)
    for (std::size_t b = a + 1; b < fields.size(); ++b) {
      const auto& [xn, x] = fields[a];
      const auto& [yn, y] = fields[b];
      auto t1 = covariant(c, x, s.project(y));
      auto t2 = covariant(c, y, s.project(x));
      auto t3 = s.project(lie_bracket(x, y, *c.chart));
      for (std::size_t i = 0; i < t1.size(); ++i) accumulate(res, t1[i] - t2[i] - t3[i], options, "T(" + xn + "," + yn + ")");
    }
  r.check("torsion", res.status, res.status == Status::Fail ? res.witness + " != 0" : res.witness);
  return r;
}

Report is_bott(const Connection& c, const Splitting& s, const ZeroOptions& options) {
  Report r;
  int q = s.q(), leaves = s.leaf.cols();
  if (leaves == 0) {
    r.check("bott defining property", Status::PassExact, "no leafwise directions");
    r.check("bott leafwise curvature", Status::PassExact, "no leafwise directions");
    return r;
  }
  ZeroResult def;
  for (int m = 0; m < leaves; ++m) {
    VectorField x = s.leaf_field(m);
    ExprMatrix th = evaluate_matrix(c.theta, x);
    for (int j = 0; j < q; ++j) {
      auto br = s.project(lie_bracket(x, s.normal_field(j), *c.chart));
      for (int i = 0; i < q; ++i)
        accumulate(def, th(i, j) - br[static_cast<std::size_t>(i)], options,
                   "nabla_L" + std::to_string(m + 1) + " N" + std::to_string(j + 1));
    }
  }
  r.check("bott defining property", def.status, def.status == Status::Fail ? def.witness + " differs from [L,N]_nu" : def.witness);
  MatrixForm rc = curvature(c);
  ZeroResult curv;
  for (int a = 0; a < leaves; ++a)
    for (int b = a + 1; b < leaves; ++b)
      for (int i = 0; i < q; ++i)
        for (int j = 0; j < q; ++j)
          accumulate(curv, evaluate_form(rc(i, j), {s.leaf_field(a), s.leaf_field(b)}), options,
                     "R(L" + std::to_string(a + 1) + ",L" + std::to_string(b + 1) + ")");
  r.check("bott leafwise curvature", curv.status, curv.status == Status::Fail ? curv.witness + " != 0" : curv.witness);
  return r;
}

MatrixForm change_frame(const MatrixForm& theta, const ExprMatrix& a) {
  ExprMatrix ainv = inverse(a);
  return ainv * theta * a + ainv * MatrixForm::differential(theta.chart(), a);
}

MetricConnection metric_connection(const Connection& c, const EuclideanStructure& eps, const ZeroOptions& options) {
  int q = eps.eps.rows();
  ExprMatrix a(q, q);
  for (int k = 0; k < q; ++k) {
    std::vector<Expr> v(static_cast<std::size_t>(q), Expr(0));
    v[static_cast<std::size_t>(k)] = Expr(1);
    for (int l = 0; l < k; ++l) {
      Expr proj(0);
      for (int r = 0; r < q; ++r) proj = proj + a(r, l) * eps.eps(r, k);
      for (int r = 0; r < q; ++r) v[static_cast<std::size_t>(r)] = v[static_cast<std::size_t>(r)] - proj * a(r, l);
    }
    Expr norm2(0);
    for (int r = 0; r < q; ++r)
      for (int t = 0; t < q; ++t) norm2 = norm2 + v[static_cast<std::size_t>(r)] * eps.eps(r, t) * v[static_cast<std::size_t>(t)];
    norm2 = normalize(norm2);
    ZeroCheck z = is_zero(norm2, options);
    if (z.status == ZeroStatus::Undecided)
      throw Error("orthonormalization-ambiguous", "Gram-Schmidt pivot " + to_string(norm2) + " could not be decided");
    if (z.status == ZeroStatus::ProvenZero)
      throw Error("orthonormalization-ambiguous", "Gram-Schmidt pivot vanishes identically");
    Expr inv_norm = norm2.is_constant() ? Expr(Rational(1)) / sqrt(norm2) : pow(sqrt(norm2), -1);
    for (int r = 0; r < q; ++r) a(r, k) = normalize(v[static_cast<std::size_t>(r)] * inv_norm);
  }
  MetricConnection mc;
  mc.frame_change = a;
  mc.onb = Connection{c.chart, change_frame(c.theta, a)};
  mc.metric = Connection{c.chart, Expr(make_rational(1, 2)) * (mc.onb.theta - mc.onb.theta.transpose())};
  return mc;
}

JetMap exp_section_2jet(const Connection& c, const Splitting& s, const std::vector<Expr>& chart_map,
                        const ExprMatrix& a, const std::optional<MatrixForm>& tangential,
                        const std::map<std::string, Expr>& at) {
  const auto& coords = c.chart->coordinates;
  int n = s.n(), q = s.q(), leaves = s.leaf.cols();
  if (torsion(c, s).has_failure()) throw Error("not-torsion-free", "the exponential section needs a torsion-free connection");
  ExprMatrix frame(n, n);
  for (int r = 0; r < n; ++r) {
    for (int j = 0; j < q; ++j) frame(r, j) = s.normal(r, j);
    for (int m = 0; m < leaves; ++m) frame(r, q + m) = s.leaf(r, m);
  }
  ExprMatrix finv = inverse(frame);
  ExprMatrix u = (s.normal * a).normalized();
  // W^A_{jk} = Gamma^A_{BC} U^B_j U^C_k
  std::vector<ExprMatrix> w(static_cast<std::size_t>(n), ExprMatrix(q, q));
  for (int b = 0; b < n; ++b) {
    ExprMatrix omega(n, n);
    for (int i = 0; i < q; ++i)
      for (int j = 0; j < q; ++j) omega(i, j) = c.theta(i, j).coefficient({b});
    if (tangential)
      for (int i = 0; i < leaves; ++i)
        for (int j = 0; j < leaves; ++j) omega(q + i, q + j) = (*tangential)(i, j).coefficient({b});
    ExprMatrix gamma_b = (frame * omega * finv - derivative(frame, coords[static_cast<std::size_t>(b)]) * finv).normalized();
    ExprMatrix gu = (gamma_b * u).normalized();  // column k: Gamma_B U_k
    for (int aa = 0; aa < n; ++aa)
      for (int j = 0; j < q; ++j)
        for (int k = 0; k < q; ++k) w[aa](j, k) = w[aa](j, k) + u(b, j) * gu(aa, k);
  }
  std::vector<TruncatedPolynomial> comps;
  for (int aa = 0; aa < n; ++aa) {
    TruncatedPolynomial p(q, 2);
    auto it = at.find(coords[static_cast<std::size_t>(aa)]);
    p.add(MultiIndex(static_cast<std::size_t>(q), 0), it == at.end() ? var(coords[static_cast<std::size_t>(aa)]) : it->second);
    for (int j = 0; j < q; ++j) p.add(unit_index(q, j), normalize(substitute(u(aa, j), at)));
    for (int j = 0; j < q; ++j)
      for (int k = j; k < q; ++k) {
        MultiIndex alpha(static_cast<std::size_t>(q), 0);
        alpha[static_cast<std::size_t>(j)] += 1;
        alpha[static_cast<std::size_t>(k)] += 1;
        Expr coef = j == k ? w[aa](j, j) : w[aa](j, k) + w[aa](k, j);
        p.add(alpha, normalize(substitute(Expr(make_rational(-1, 2)) * coef, at)));
      }
    comps.push_back(p);
  }
  std::vector<Expr> zero(static_cast<std::size_t>(q), Expr(0));
  JetMap ujet(q, n, 2, zero, comps);
  JetMap fjet = prolong_map(chart_map, coords, at, 2);
  return compose_jets(fjet, ujet).recentred();
}

namespace {

struct JetCoordinates {
  std::vector<Expr> linear;                   // q x q row-major
  std::vector<std::vector<Expr>> quadratic;   // per component: symmetric q x q row-major
};

JetCoordinates jet_coordinates(const JetMap& j) {
  int q = j.target_dim();
  JetCoordinates c;
  for (int i = 0; i < q; ++i)
    for (int k = 0; k < q; ++k) c.linear.push_back(j.coefficient(i, unit_index(q, k)));
  for (int i = 0; i < q; ++i) {
    std::vector<Expr> s(static_cast<std::size_t>(q * q), Expr(0));
    for (int a = 0; a < q; ++a)
      for (int b = a; b < q; ++b) {
        MultiIndex alpha(static_cast<std::size_t>(q), 0);
        alpha[static_cast<std::size_t>(a)] += 1;
        alpha[static_cast<std::size_t>(b)] += 1;
        Expr v = j.coefficient(i, alpha);
        if (a != b) v = normalize(Expr(make_rational(1, 2)) * v);
        s[static_cast<std::size_t>(a * q + b)] = v;
        s[static_cast<std::size_t>(b * q + a)] = v;
      }
    c.quadratic.push_back(s);
  }
  return c;
}

// Polar slice: linear part P = sqrt(L L^T) and quadratic parts O S O^T.
std::vector<double> reduced_numeric(const JetCoordinates& c, int q, const NumericPoint& p, double& det) {
  Eigen::MatrixXd l(q, q);
  for (int i = 0; i < q; ++i)
    for (int k = 0; k < q; ++k) l(i, k) = evaluate(c.linear[static_cast<std::size_t>(i * q + k)], p);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(l, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::MatrixXd pol = svd.matrixU() * svd.singularValues().asDiagonal() * svd.matrixU().transpose();
  Eigen::MatrixXd o = svd.matrixU() * svd.matrixV().transpose();
  det = pol.determinant();
  std::vector<double> out;
  for (int i = 0; i < q; ++i)
    for (int k = 0; k < q; ++k) out.push_back(pol(i, k));
  for (int i = 0; i < q; ++i) {
    Eigen::MatrixXd s(q, q);
    for (int a = 0; a < q; ++a)
      for (int b = 0; b < q; ++b) s(a, b) = evaluate(c.quadratic[static_cast<std::size_t>(i)][static_cast<std::size_t>(a * q + b)], p);
    Eigen::MatrixXd r = o * s * o.transpose();
    for (int a = 0; a < q; ++a)
      for (int b = a; b < q; ++b) out.push_back(r(a, b));
  }
  return out;
}

}  // namespace

Report adapted_check(const std::vector<Expr>& chart_map, const Splitting& s, const EuclideanStructure& eps,
                     const Connection& c, const std::vector<Point>& singular_points, const AdaptedOptions& options,
                     const std::string& label) {
  Report r;
  std::string name = label.empty() ? "adapted" : "adapted " + label;
  const auto& coords = c.chart->coordinates;
  int q = s.q(), n = s.n();
  MetricConnection mc = metric_connection(c, eps);
  JetMap jet = exp_section_2jet(c, s, chart_map, mc.frame_change);
  JetCoordinates jc = jet_coordinates(jet);
  if (singular_points.empty()) {
    r.check(name, Status::PassExact, "no singular points");
    return r;
  }
  ExprMatrix lin(q, q);
  for (int i = 0; i < q; ++i)
    for (int k = 0; k < q; ++k) lin(i, k) = jc.linear[static_cast<std::size_t>(i * q + k)];
  Expr det = determinant(lin);
  std::vector<Expr> all = jc.linear;
  for (const auto& quad : jc.quadratic)
    for (const auto& e : quad) all.push_back(e);
  auto rays = unit_rays(n, options.rays, options.seed);
  Status status = Status::PassExact;
  for (const auto& p : singular_points) {
    std::string where = point_to_string(p, coords);
    bool exact = regular_at(det, p);
    if (exact) {
      auto dv = exact_value(det, p);
      exact = dv && *dv != 0;
    }
    for (std::size_t i = 0; i < all.size() && exact; ++i) exact = regular_at(all[i], p);
    if (exact) continue;
    status = Status::PassNumeric;
    std::vector<double> first_limit;
    for (std::size_t k = 0; k < rays.size(); ++k) {
      double d = 0;
      RayLimit lim = ray_limit([&](const NumericPoint& np) { return reduced_numeric(jc, q, np, d); }, p, coords,
                               rays[k], options.tolerance);
      std::ostringstream os;
      if (!lim.converged) {
        os << "at " << where << ": no limit along ray " << k + 1;
        r.check(name, Status::Fail, os.str());
        return r;
      }
      if (std::fabs(d) <= std::sqrt(options.tolerance)) {
        os << "at " << where << ": linear part degenerates along ray " << k + 1 << " (det " << d << ")";
        r.check(name, Status::Fail, os.str());
        return r;
      }
      if (first_limit.empty()) {
        first_limit = lim.value;
      } else if (max_abs_difference(first_limit, lim.value) > 100 * options.tolerance) {
        os << "at " << where << ": limits along rays 1 and " << k + 1 << " differ";
        r.check(name, Status::Fail, os.str());
        return r;
      }
    }
  }
  r.check(name, status, std::to_string(singular_points.size()) + " singular points");
  return r;
}

PulledGeometry pullback_geometry(const std::vector<Expr>& phi, const ChartPtr& source, const EuclideanStructure& eps,
                                 const Connection& c, const std::vector<Expr>& target_map) {
  const auto& tcoords = c.chart->coordinates;
  std::map<std::string, Expr> b;
  for (std::size_t i = 0; i < tcoords.size() && i < phi.size(); ++i) b[tcoords[i]] = phi[i];
  std::vector<Expr> composite;
  for (const auto& f : target_map) composite.push_back(normalize(substitute(f, b)));
  bool regular = false;
  Rng rng(0);
  auto minors = maximal_minors(jacobian(composite, source->coordinates));
  for (const auto& p : sample_domain(source->coordinates, {}, 8, rng)) {
    for (const auto& [cols, m] : minors)
      if (decide_at(m, p).status == ZeroStatus::ProvenNonzero) regular = true;
    if (regular) break;
  }
  if (!regular) throw Error("nowhere-regular", "the pulled-back chart map is singular at every sample point");
  PulledGeometry out;
  out.eps = EuclideanStructure{source, substitute(eps.eps, b).normalized()};
  out.connection = Connection{source, pullback(c.theta, phi, source)};
  return out;
}

}  // namespace foliate
