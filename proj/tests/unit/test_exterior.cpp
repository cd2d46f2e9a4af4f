#include <gtest/gtest.h>

#include "foliate/error.hpp"
#include "foliate/exterior.hpp"
#include "generators.hpp"

using namespace foliate;
using foliate::testing::random_form;
using foliate::testing::random_matrix_form;
using foliate::testing::random_polynomial;

namespace {

ChartPtr xyz() { return make_chart("U", {"x", "y", "z"}); }
ChartPtr xy() { return make_chart("V", {"x", "y"}); }
ChartPtr uv() { return make_chart("S", {"u", "v"}); }
Expr P(const std::string& s) { return parse_expr(s); }

}  // namespace

TEST(Exterior, WedgeSigns) {
  auto c = xy();
  DiffForm dx = DiffForm::coordinate(c, "x");
  DiffForm dy = DiffForm::coordinate(c, "y");
  EXPECT_TRUE(wedge(dx, dx).is_zero());
  EXPECT_EQ(wedge(dx, dy).coefficient({0, 1}), Expr(1));
  EXPECT_EQ(wedge(dy, dx).coefficient({0, 1}), Expr(-1));
  // bilinear expansion: (x dy)^(y dx) = x*y dy^dx = -x*y dx^dy
  DiffForm a = P("x") * dy;
  DiffForm b = P("y") * dx;
  EXPECT_EQ(wedge(a, b), P("-x*y") * wedge(dx, dy));
  EXPECT_THROW(wedge(dx, DiffForm::coordinate(uv(), "u")), Error);
}

TEST(Exterior, ExteriorDerivativeExamples) {
  auto c = xyz();
  DiffForm dx = DiffForm::coordinate(c, "x");
  DiffForm dy = DiffForm::coordinate(c, "y");
  DiffForm dz = DiffForm::coordinate(c, "z");
  EXPECT_EQ(exterior_derivative(P("x") * dy), wedge(dx, dy));
  EXPECT_TRUE(exterior_derivative(dz).is_zero());
  EXPECT_EQ(exterior_derivative(P("z") * dx), wedge(dz, dx));
  // 0-form coordinate formula
  DiffForm f = DiffForm::scalar(c, P("x^2*z"));
  EXPECT_EQ(exterior_derivative(f), P("2*x*z") * dx + P("x^2") * dz);
}

TEST(Exterior, PullbackExamples) {
  auto s = uv();
  DiffForm du = DiffForm::coordinate(s, "u");
  DiffForm dv = DiffForm::coordinate(s, "v");
  DiffForm dz = DiffForm::coordinate(xyz(), "z");
  EXPECT_EQ(pullback(dz, {P("u"), P("v"), P("u^2+v^2")}, s), P("2*u") * du + P("2*v") * dv);
  DiffForm f = DiffForm::scalar(xy(), P("x*y + 1"));
  EXPECT_EQ(pullback(f, {P("u^2"), P("v")}, s), DiffForm::scalar(s, P("u^2*v + 1")));
  auto c = xy();
  DiffForm area = wedge(DiffForm::coordinate(c, "x"), DiffForm::coordinate(c, "y"));
  EXPECT_EQ(pullback(area, {P("v"), P("u")}, s), -wedge(du, dv));
  EXPECT_THROW(pullback(area, {P("u")}, s), Error);
}

TEST(Exterior, MatrixOps) {
  auto c = xy();
  DiffForm dx = DiffForm::coordinate(c, "x");
  DiffForm dy = DiffForm::coordinate(c, "y");
  MatrixForm r(c, 1, 1, 2);
  r(0, 0) = wedge(dy, dx);
  EXPECT_EQ(trace(matrix_power_wedge(r, 1)), wedge(dy, dx));
  EXPECT_TRUE(matrix_power_wedge(r, 2).is_zero());
  MatrixForm a(c, 2, 2, 1);
  a(0, 0) = dx;
  a(1, 1) = dy;
  EXPECT_EQ(trace(a), dx + dy);
}

TEST(Exterior, IntegrateT01) {
  auto c = xy();
  DiffForm a = P("x") * DiffForm::coordinate(c, "y");
  DiffForm zero(c, 1);
  EXPECT_EQ(integrate_t01({{a}}), a);
  EXPECT_EQ(integrate_t01({{zero, a}}), Expr(make_rational(1, 2)) * a);
  EXPECT_EQ(integrate_t01({{-a, zero, a}}), Expr(make_rational(-2, 3)) * a);
}

TEST(Exterior, EvaluateAndInterior) {
  auto c = xy();
  DiffForm area = wedge(DiffForm::coordinate(c, "x"), DiffForm::coordinate(c, "y"));
  VectorField ex = {Expr(1), Expr(0)};
  VectorField ey = {Expr(0), Expr(1)};
  EXPECT_EQ(evaluate_form(area, {ex, ey}), Expr(1));
  EXPECT_EQ(evaluate_form(-area, {ex, ey}), Expr(-1));
  EXPECT_EQ(interior(ex, area), DiffForm::coordinate(c, "y"));
}

TEST(Exterior, FormParseErrors) {
  auto c = xy();
  EXPECT_THROW(parse_form("x*dx + dy^dx", c), ParseError);
  EXPECT_THROW(parse_form("q*dx", c), ParseError);
  EXPECT_EQ(parse_form("dy^dx", c), -wedge(DiffForm::coordinate(c, "x"), DiffForm::coordinate(c, "y")));
}

// ---------------------------------------------------------------- properties

TEST(ExteriorProperty, DSquaredVanishes) {
  Rng rng(21);
  for (int i = 0; i < 100; ++i) {
    int n = static_cast<int>(rng.uniform_int(1, 4));
    std::vector<std::string> coords = {"a", "b", "c", "e"};
    coords.resize(static_cast<std::size_t>(n));
    auto ch = make_chart("R", coords);
    int deg = static_cast<int>(rng.uniform_int(0, std::min(3, n)));
    DiffForm f = random_form(rng, ch, deg);
    EXPECT_TRUE(exterior_derivative(exterior_derivative(f)).is_zero());
  }
}

TEST(ExteriorProperty, Leibniz) {
  Rng rng(22);
  auto ch = make_chart("R", {"a", "b", "c", "e"});
  for (int i = 0; i < 30; ++i) {
    int da = static_cast<int>(rng.uniform_int(0, 2));
    int db = static_cast<int>(rng.uniform_int(0, 1));
    DiffForm a = random_form(rng, ch, da);
    DiffForm b = random_form(rng, ch, db);
    DiffForm lhs = exterior_derivative(wedge(a, b));
    DiffForm rhs = wedge(exterior_derivative(a), b) + Expr(da % 2 ? -1 : 1) * wedge(a, exterior_derivative(b));
    EXPECT_EQ(lhs, rhs);
    EXPECT_EQ(wedge(a, b), Expr((da * db) % 2 ? -1 : 1) * wedge(b, a));
  }
}

TEST(ExteriorProperty, PullbackFunctorialAndCommutesWithD) {
  Rng rng(23);
  auto target = xyz();
  auto mid = make_chart("M", {"p", "r"});
  auto src = uv();
  for (int i = 0; i < 20; ++i) {
    DiffForm a = random_form(rng, target, static_cast<int>(rng.uniform_int(0, 2)));
    std::vector<Expr> phi;
    for (int k = 0; k < 3; ++k) phi.push_back(random_polynomial(rng, {"p", "r"}, 2, 2));
    std::vector<Expr> psi;
    for (int k = 0; k < 2; ++k) psi.push_back(random_polynomial(rng, {"u", "v"}, 2, 2));
    std::vector<Expr> composite;
    for (const auto& p : phi) composite.push_back(substitute(p, {{"p", psi[0]}, {"r", psi[1]}}));
    EXPECT_EQ(pullback(a, composite, src), pullback(pullback(a, phi, mid), psi, src));
    EXPECT_EQ(pullback(exterior_derivative(a), phi, mid), exterior_derivative(pullback(a, phi, mid)));
  }
}

TEST(ExteriorProperty, TraceGradedCommutative) {
  Rng rng(24);
  auto ch = make_chart("R", {"a", "b", "c", "e"});
  for (int i = 0; i < 10; ++i) {
    int da = static_cast<int>(rng.uniform_int(1, 2));
    int db = static_cast<int>(rng.uniform_int(1, 2));
    MatrixForm a = random_matrix_form(rng, ch, 2, da);
    MatrixForm b = random_matrix_form(rng, ch, 2, db);
    EXPECT_EQ(trace(matrix_wedge(a, b)), Expr((da * db) % 2 ? -1 : 1) * trace(matrix_wedge(b, a)));
  }
}

TEST(ExteriorProperty, FormRoundTrip) {
  Rng rng(25);
  auto ch = make_chart("R", {"a", "b", "c"});
  for (int i = 0; i < 50; ++i) {
    DiffForm f = random_form(rng, ch, static_cast<int>(rng.uniform_int(0, 3)));
    f = f + (Expr(make_rational(1, 3)) / (var("a") * var("a") + Expr(1))) * f;
    EXPECT_EQ(parse_form(to_string(f), ch, {}, f.degree()), f);
  }
}
