#include <gtest/gtest.h>

#include "foliate/error.hpp"
#include "foliate/geometry.hpp"
#include "foliate/parser.hpp"
#include "generators.hpp"

using namespace foliate;

namespace {

Expr P(const std::string& s) { return parse_expr(s); }

Point at(std::initializer_list<std::pair<const std::string, int>> v) {
  Point p;
  for (const auto& [k, x] : v) p[k] = Rational(x);
  return p;
}

void expect_zero(const Expr& e) { EXPECT_EQ(normalize(e), Expr(0)) << to_string(e); }

void expect_forms_equal(const MatrixForm& a, const MatrixForm& b) {
  ASSERT_EQ(a.rows(), b.rows());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) EXPECT_TRUE((a(i, j) - b(i, j)).is_zero()) << i << j << " " << to_string(a(i, j) - b(i, j));
}

struct Fixture {
  ChartPtr chart;
  Metric g;
  std::vector<Expr> f;
  Splitting s;
  Connection c;
};

Fixture setup(const std::vector<std::string>& coords, const ExprMatrix& g, const std::vector<Expr>& f, const Point& ref) {
  Fixture out;
  out.chart = make_chart("U", coords);
  out.g = Metric{out.chart, g};
  out.f = f;
  out.s = metric_splitting(out.g, f, ref);
  out.c = bott_levi_civita(out.g, out.s);
  return out;
}

Fixture plane_metric() {
  ExprMatrix g = ExprMatrix::diagonal({Expr(1), P("1 + x^2")});
  return setup({"x", "y"}, g, {P("x"), P("y")}, at({{"x", 1}, {"y", 1}}));
}

// Metric compatibility along normal directions: N_k(eps) = theta(N_k)^T eps + eps theta(N_k).
void expect_normal_compatibility(const Fixture& st) {
  EuclideanStructure eps = induced_euclidean(st.g, st.s);
  int q = st.s.q();
  for (int k = 0; k < q; ++k) {
    VectorField nk = st.s.normal_field(k);
    for (int i = 0; i < q; ++i)
      for (int j = 0; j < q; ++j) {
        Expr lhs = apply_vector(nk, eps.eps(i, j), *st.chart);
        Expr rhs(0);
        for (int l = 0; l < q; ++l)
          rhs = rhs + evaluate_form(st.c.theta(l, i), {nk}) * eps.eps(l, j) + eps.eps(i, l) * evaluate_form(st.c.theta(l, j), {nk});
        expect_zero(lhs - rhs);
      }
  }
}

JetMap linear_jet(const ExprMatrix& a) {
  int q = a.rows();
  std::vector<TruncatedPolynomial> comps;
  for (int i = 0; i < q; ++i) {
    TruncatedPolynomial p(q, 2);
    for (int j = 0; j < q; ++j) p.add(unit_index(q, j), a(i, j));
    comps.push_back(p);
  }
  return JetMap(q, q, 2, std::vector<Expr>(static_cast<std::size_t>(q), Expr(0)), comps);
}

}  // namespace

TEST(Geometry, FlatProductHasZeroConnection) {
  auto st = setup({"x", "y", "z"}, ExprMatrix::identity(3), {P("z")}, at({{"x", 1}, {"y", 1}, {"z", 1}}));
  EXPECT_TRUE(st.c.theta.is_zero());
  EXPECT_TRUE(st.s.normal == (ExprMatrix(3, 1) + [] {
                ExprMatrix m(3, 1);
                m(2, 0) = Expr(1);
                return m;
              }()));
  EXPECT_TRUE(torsion(st.c, st.s).all_passed());
  EXPECT_TRUE(is_bott(st.c, st.s).all_passed());
  EXPECT_EQ(induced_euclidean(st.g, st.s).eps, ExprMatrix::identity(1));
}

TEST(Geometry, ChristoffelSymbols) {
  Fixture st = plane_metric();
  // Hand-computed for dx^2 + (1 + x^2) dy^2.
  ExprMatrix g1 = christoffel(st.g, 0), g2 = christoffel(st.g, 1);
  EXPECT_EQ(g1(1, 1), P("-x"));
  EXPECT_EQ(g1(0, 0), Expr(0));
  EXPECT_EQ(g1(0, 1), Expr(0));
  EXPECT_EQ(g2(0, 1), P("x/(1+x^2)"));
  EXPECT_EQ(g2(1, 0), P("x/(1+x^2)"));
  EXPECT_EQ(g2(1, 1), Expr(0));
  // q = n: the Bott connection is Levi-Civita in the chart frame.
  EXPECT_TRUE(st.c.theta(0, 0).is_zero());
  EXPECT_EQ(st.c.theta(0, 1), parse_form("-x*dy", st.chart));
  EXPECT_EQ(st.c.theta(1, 0), parse_form("x/(1+x^2)*dy", st.chart));
  EXPECT_EQ(st.c.theta(1, 1), parse_form("x/(1+x^2)*dx", st.chart));
  EXPECT_TRUE(torsion(st.c, st.s).all_passed());
  EXPECT_TRUE(is_bott(st.c, st.s).all_passed());
  expect_normal_compatibility(st);
}

TEST(Geometry, CurvatureMatchesGaussCurvature) {
  Fixture st = plane_metric();
  MatrixForm r = curvature(st.c);
  // K = -(sqrt G)'' / sqrt G with G = 1 + x^2, and R^1_2(d_x, d_y) = K G.
  Expr k = P("-1/(1+x^2)^2");
  DiffForm area = parse_form("dx^dy", st.chart);
  EXPECT_EQ(r(0, 1), normalize(k * P("1+x^2")) * area);
  EXPECT_EQ(r(1, 0), normalize(-k) * area);
  EXPECT_TRUE(r(0, 0).is_zero());
  EXPECT_TRUE(r(1, 1).is_zero());
}

TEST(Geometry, CurvatureOfAbelianForm) {
  auto chart = make_chart("U", {"x", "y"});
  Connection c{chart, MatrixForm(chart, 1, 1, 1)};
  c.theta(0, 0) = parse_form("y*dx", chart);
  EXPECT_EQ(curvature(c)(0, 0), parse_form("-dx^dy", chart));
}

TEST(Geometry, TiltedFoliationIsBott) {
  auto st = setup({"x", "y", "z"}, ExprMatrix::identity(3), {P("z*exp(-x)")}, at({{"x", 0}, {"y", 0}, {"z", 1}}));
  EXPECT_FALSE(st.c.theta.is_zero());
  EXPECT_TRUE(torsion(st.c, st.s).all_passed());
  EXPECT_TRUE(is_bott(st.c, st.s).all_passed());
  expect_normal_compatibility(st);
}

TEST(Geometry, NonBottConnectionFails) {
  auto st = setup({"x", "y", "z"}, ExprMatrix::identity(3), {P("z")}, at({{"x", 1}, {"y", 1}, {"z", 1}}));
  Connection bad{st.chart, MatrixForm(st.chart, 1, 1, 1)};
  bad.theta(0, 0) = parse_form("y*dx", st.chart);
  Report b = is_bott(bad, st.s);
  EXPECT_EQ(b.find("bott defining property")->status, Status::Fail);
  EXPECT_EQ(b.find("bott leafwise curvature")->status, Status::Fail);
  EXPECT_EQ(torsion(bad, st.s).find("torsion")->status, Status::Fail);
  EXPECT_THROW(exp_section_2jet(bad, st.s, st.f, ExprMatrix::identity(1)), Error);
}

TEST(Geometry, MetricConnection) {
  Fixture st = plane_metric();
  EuclideanStructure eps = induced_euclidean(st.g, st.s);
  EXPECT_EQ(eps.eps, st.g.g);
  MetricConnection mc = metric_connection(st.c, eps);
  const ExprMatrix& a = mc.frame_change;
  EXPECT_TRUE((a.transpose() * eps.eps * a - ExprMatrix::identity(2)).is_zero());
  // Levi-Civita is already metric, so the orthonormal-frame form is skew.
  expect_forms_equal(mc.metric.theta, mc.onb.theta);
  // A non-metric connection gets projected onto a skew form.
  Connection other{st.chart, st.c.theta};
  other.theta(0, 0) = parse_form("y*dx + dy", st.chart);
  MetricConnection mo = metric_connection(other, eps);
  expect_forms_equal(mo.metric.theta, Expr(-1) * mo.metric.theta.transpose());
  EXPECT_FALSE(mo.metric.theta == mo.onb.theta);
  try {
    metric_connection(st.c, EuclideanStructure{st.chart, ExprMatrix(2, 2)});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "orthonormalization-ambiguous");
  }
}

TEST(Geometry, ChangeFrameIsGauge) {
  Fixture st = plane_metric();
  ExprMatrix a(2, 2);
  a(0, 0) = P("1 + y^2");
  a(0, 1) = P("x");
  a(1, 1) = Expr(2);
  MatrixForm t = change_frame(st.c.theta, a);
  // Curvature transforms by conjugation.
  ExprMatrix ainv = inverse(a);
  expect_forms_equal(curvature(Connection{st.chart, t}), ainv * curvature(st.c) * a);
  expect_forms_equal(change_frame(t, ainv), st.c.theta);
}

TEST(Geometry, ExpJetFlatIsIdentity) {
  auto chart = make_chart("U", {"x", "y"});
  Metric g = euclidean_metric(chart);
  Splitting s = metric_splitting(g, {P("x"), P("y")}, at({{"x", 0}, {"y", 0}}));
  Connection c = bott_levi_civita(g, s);
  EXPECT_EQ(exp_section_2jet(c, s, {P("x"), P("y")}, ExprMatrix::identity(2)), JetMap::identity(2, 2));
}

TEST(Geometry, ExpJetQuadraticTermIsChristoffel) {
  Fixture st = plane_metric();
  JetMap j = exp_section_2jet(st.c, st.s, st.f, ExprMatrix::identity(2));
  // u(s) = U s - Gamma(U s, U s) / 2
  EXPECT_EQ(j.linear_part(), ExprMatrix::identity(2));
  EXPECT_EQ(j.coefficient(0, {0, 2}), P("x/2"));
  EXPECT_EQ(j.coefficient(0, {2, 0}), Expr(0));
  EXPECT_EQ(j.coefficient(0, {1, 1}), Expr(0));
  EXPECT_EQ(j.coefficient(1, {1, 1}), P("-x/(1+x^2)"));
  EXPECT_EQ(j.coefficient(1, {2, 0}), Expr(0));
  JetMap j1 = exp_section_2jet(st.c, st.s, st.f, ExprMatrix::identity(2), std::nullopt, {{"x", Expr(1)}, {"y", Expr(0)}});
  EXPECT_EQ(j1.coefficient(1, {1, 1}), Expr(make_rational(-1, 2)));
}

TEST(Geometry, ExpJetIgnoresLeafwiseConnection) {
  auto st = setup({"x", "y", "z"}, ExprMatrix::identity(3), {P("z*exp(-x)")}, at({{"x", 0}, {"y", 0}, {"z", 1}}));
  Rng rng(41);
  JetMap plain = exp_section_2jet(st.c, st.s, st.f, ExprMatrix::identity(1));
  for (int trial = 0; trial < 3; ++trial) {
    MatrixForm aux = foliate::testing::random_matrix_form(rng, st.chart, 2, 1);
    EXPECT_EQ(exp_section_2jet(st.c, st.s, st.f, ExprMatrix::identity(1), aux), plain);
  }
}

TEST(Geometry, ExpJetEquivariance) {
  Fixture st = plane_metric();
  std::map<std::string, Expr> base = {{"x", Expr(make_rational(1, 2))}, {"y", Expr(-1)}};
  JetMap j = exp_section_2jet(st.c, st.s, st.f, ExprMatrix::identity(2), std::nullopt, base);
  Rng rng(42);
  for (int trial = 0; trial < 10; ++trial) {
    ExprMatrix a = foliate::testing::random_group_jet(rng, 2, 1).linear_part();
    EXPECT_EQ(exp_section_2jet(st.c, st.s, st.f, a, std::nullopt, base), compose_jets(j, linear_jet(a)));
  }
}

TEST(Geometry, ConnectionRecoveredFromExpJet) {
  // theta = u1^{-1}(d u1 - u2 . omega) with omega = u1^{-1} dx, where u1, u2
  // are the first and second derivatives of the section in the fibre variable.
  Fixture st = plane_metric();
  MetricConnection mc = metric_connection(st.c, induced_euclidean(st.g, st.s));
  JetMap j = exp_section_2jet(st.c, st.s, st.f, mc.frame_change);
  ExprMatrix u1 = j.linear_part();
  ExprMatrix u1inv = inverse(u1);
  MatrixForm dx = MatrixForm::from_matrix(st.chart, ExprMatrix(2, 1));
  MatrixForm omega(st.chart, 2, 1, 1);
  for (int k = 0; k < 2; ++k) {
    DiffForm w(st.chart, 1);
    for (int b = 0; b < 2; ++b) w.add_term({b}, u1inv(k, b));
    omega(k, 0) = w;
  }
  MatrixForm rhs = MatrixForm::differential(st.chart, u1);
  for (int a = 0; a < 2; ++a)
    for (int jj = 0; jj < 2; ++jj)
      for (int k = 0; k < 2; ++k) {
        MultiIndex alpha = {0, 0};
        alpha[static_cast<std::size_t>(jj)] += 1;
        alpha[static_cast<std::size_t>(k)] += 1;
        Expr u2 = j.coefficient(a, alpha) * (jj == k ? Expr(2) : Expr(1));
        rhs(a, jj) = rhs(a, jj) - u2 * omega(k, 0);
      }
  (void)dx;
  expect_forms_equal(u1inv * rhs, mc.onb.theta);
}

TEST(Geometry, AdaptedCheckPullbackPasses) {
  auto chart = make_chart("U", {"x", "y"});
  auto line = make_chart("T", {"s"});
  std::vector<Expr> f = {P("x^2 + y^2")};
  Metric g = euclidean_metric(chart);
  Splitting s = metric_splitting(g, f, at({{"x", 1}, {"y", 1}}));
  PulledGeometry pg = pullback_geometry(f, chart, EuclideanStructure{line, ExprMatrix::identity(1)},
                                        zero_connection(line, 1), {P("s")});
  EXPECT_EQ(pg.eps.eps, ExprMatrix::identity(1));
  EXPECT_TRUE(pg.connection.theta.is_zero());
  EXPECT_TRUE(torsion(pg.connection, s).all_passed());
  Report r = adapted_check(f, s, pg.eps, pg.connection, {at({{"x", 0}, {"y", 0}})});
  EXPECT_EQ(r.find("adapted")->status, Status::PassExact) << r.find("adapted")->text;
}

TEST(Geometry, AdaptedCheckNaiveMetricFails) {
  auto chart = make_chart("U", {"x", "y"});
  std::vector<Expr> f = {P("x^2 + y^2")};
  Metric g = euclidean_metric(chart);
  Splitting s = metric_splitting(g, f, at({{"x", 1}, {"y", 1}}));
  Connection c = bott_levi_civita(g, s);
  EuclideanStructure eps = induced_euclidean(g, s);
  EXPECT_EQ(eps.eps(0, 0), P("1/(4*x^2 + 4*y^2)"));
  Report r = adapted_check(f, s, eps, c, {at({{"x", 0}, {"y", 0}})}, {}, "naive");
  const ReportLine* line = r.find("adapted naive");
  ASSERT_NE(line, nullptr);
  EXPECT_EQ(line->status, Status::Fail);
  EXPECT_NE(line->text.find("x=0, y=0"), std::string::npos) << line->text;
}

TEST(Geometry, AdaptedCheckRegular) {
  auto st = setup({"x", "y", "z"}, ExprMatrix::identity(3), {P("z*exp(-x)")}, at({{"x", 0}, {"y", 0}, {"z", 1}}));
  EXPECT_EQ(adapted_check(st.f, st.s, induced_euclidean(st.g, st.s), st.c, {}).overall(), Status::PassExact);
}

TEST(Geometry, PullbackGeometry) {
  auto chart = make_chart("U", {"x", "y"});
  auto line = make_chart("T", {"s"});
  Connection c{line, MatrixForm(line, 1, 1, 1)};
  c.theta(0, 0) = parse_form("s*ds", line);
  EuclideanStructure eps{line, ExprMatrix::diagonal({P("1 + s^2")})};
  PulledGeometry pg = pullback_geometry({P("x^2 + y^2")}, chart, eps, c, {P("s")});
  EXPECT_EQ(pg.eps.eps(0, 0), P("1 + (x^2 + y^2)^2"));
  EXPECT_EQ(pg.connection.theta(0, 0), P("x^2+y^2") * parse_form("2*x*dx + 2*y*dy", chart));
  try {
    pullback_geometry({P("3")}, chart, eps, c, {P("s")});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "nowhere-regular");
  }
}

TEST(Geometry, CheckMetric) {
  Fixture st = plane_metric();
  EXPECT_TRUE(check_metric(st.g, {at({{"x", 0}, {"y", 0}}), at({{"x", 2}, {"y", 1}})}).all_passed());
  Metric bad{st.chart, ExprMatrix::diagonal({Expr(1), P("x")})};
  EXPECT_TRUE(check_metric(bad, {at({{"x", -1}, {"y", 0}})}).has_failure());
}

// ---------------------------------------------------------------- properties

TEST(GeometryProperty, BottLeviCivitaOnGraphs) {
  Rng rng(43);
  for (int trial = 0; trial < 3; ++trial) {
    Expr f = var("z") + foliate::testing::random_polynomial(rng, {"x", "y"}, 3, 2);
    auto st = setup({"x", "y", "z"}, ExprMatrix::identity(3), {f}, at({{"x", 1}, {"y", 1}, {"z", 1}}));
    EXPECT_TRUE(torsion(st.c, st.s).all_passed()) << to_string(f);
    EXPECT_TRUE(is_bott(st.c, st.s).all_passed()) << to_string(f);
    expect_normal_compatibility(st);
  }
}
