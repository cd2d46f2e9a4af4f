#include <gtest/gtest.h>

#include "foliate/error.hpp"
#include "foliate/jets.hpp"
#include "foliate/parser.hpp"
#include "generators.hpp"

using namespace foliate;
using foliate::testing::jet_as_polynomials;
using foliate::testing::random_group_jet;
using foliate::testing::truncate_degree;

namespace {

Expr P(const std::string& s) { return parse_expr(s); }

JetMap jet1(int k, const std::vector<Expr>& coeffs) {
  TruncatedPolynomial p(1, k);
  for (std::size_t d = 0; d < coeffs.size(); ++d) p.add({static_cast<int>(d + 1)}, coeffs[d]);
  return JetMap(1, 1, k, {Expr(0)}, {p});
}

// Oracle: substitute polynomial expressions and truncate.
std::vector<Expr> compose_oracle(const JetMap& g, const JetMap& f) {
  auto gp = jet_as_polynomials(g, "t");
  auto fp = jet_as_polynomials(f, "s");
  std::map<std::string, Expr> bind;
  for (std::size_t i = 0; i < fp.size(); ++i) bind["t" + std::to_string(i + 1)] = fp[i];
  std::vector<Expr> out;
  for (const auto& c : gp) out.push_back(truncate_degree(substitute(c, bind), f.order()));
  return out;
}

void expect_same(const std::vector<Expr>& a, const std::vector<Expr>& b) {
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(normalize(a[i] - b[i]), Expr(0));
}

}  // namespace

TEST(Jets, ComposeSymbolicQ1) {
  JetMap g = jet1(2, {P("a"), P("b")});
  JetMap f = jet1(2, {P("c"), P("d")});
  JetMap gf = compose_jets(g, f);
  EXPECT_EQ(gf.coefficient(0, {1}), P("a*c"));
  EXPECT_EQ(gf.coefficient(0, {2}), P("a*d + b*c^2"));
  EXPECT_EQ(compose_jets(g, JetMap::identity(1, 2)), g);
  EXPECT_EQ(compose_jets(JetMap::identity(1, 2), g), g);
}

TEST(Jets, ComposeMatchesSubstitutionOracle) {
  Rng rng(31);
  for (int q = 1; q <= 3; ++q) {
    for (int k = 1; k <= 3; ++k) {
      JetMap g = random_group_jet(rng, q, k);
      JetMap f = random_group_jet(rng, q, k);
      expect_same(jet_as_polynomials(compose_jets(g, f)), compose_oracle(g, f));
    }
  }
}

TEST(Jets, ComposeErrors) {
  JetMap g = jet1(2, {P("1")});
  JetMap f3 = jet1(3, {P("1")});
  EXPECT_THROW(compose_jets(g, f3), Error);
  TruncatedPolynomial p(1, 2);
  p.add({0}, Expr(5));
  p.add({1}, Expr(1));
  JetMap shifted(1, 1, 2, {Expr(0)}, {p});
  try {
    compose_jets(g, shifted);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "base-mismatch");
  }
}

TEST(Jets, InvertExamples) {
  JetMap f = jet1(2, {Expr(1), P("b")});
  JetMap inv = invert_jet(f);
  EXPECT_EQ(inv.coefficient(0, {1}), Expr(1));
  EXPECT_EQ(inv.coefficient(0, {2}), P("-b"));
  EXPECT_EQ(compose_jets(f, inv), JetMap::identity(1, 2));
  EXPECT_EQ(invert_jet(JetMap::identity(2, 3)), JetMap::identity(2, 3));
  EXPECT_EQ(invert_jet(jet1(2, {Expr(2)})).coefficient(0, {1}), Expr(make_rational(1, 2)));
  try {
    invert_jet(jet1(2, {Expr(0), Expr(1)}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "singular-jet");
  }
}

TEST(Jets, ProlongExamples) {
  JetMap j = prolong_map({P("x^2+y^2")}, {"x", "y"}, {{"x", Expr(1)}, {"y", Expr(0)}}, 2);
  EXPECT_EQ(j.value()[0], Expr(1));
  EXPECT_EQ(j.coefficient(0, {1, 0}), Expr(2));
  EXPECT_EQ(j.coefficient(0, {0, 1}), Expr(0));
  EXPECT_EQ(j.coefficient(0, {2, 0}), Expr(1));
  EXPECT_EQ(j.coefficient(0, {1, 1}), Expr(0));
  EXPECT_EQ(j.coefficient(0, {0, 2}), Expr(1));
  JetMap id = prolong_map({P("x"), P("y")}, {"x", "y"}, {{"x", Expr(0)}, {"y", Expr(0)}}, 3);
  EXPECT_EQ(id, JetMap::identity(2, 3));
  JetMap lin = prolong_map({P("2*x - y"), P("3*y")}, {"x", "y"}, {{"x", Expr(0)}, {"y", Expr(0)}}, 2);
  EXPECT_EQ(lin.linear_part(), (ExprMatrix::diagonal({Expr(2), Expr(3)}) + [] {
              ExprMatrix m(2, 2);
              m(0, 1) = Expr(-1);
              return m;
            }()));
  EXPECT_EQ(lin.coefficient(0, {2, 0}), Expr(0));
  EXPECT_THROW(prolong_map({P("log(x)")}, {"x"}, {{"x", Expr(0)}}, 1), Error);
}

TEST(Jets, TransitionExamples) {
  EXPECT_EQ(transition_2jet({"s"}, {P("s")}, {P("7")}), JetMap::identity(1, 2));
  JetMap two = transition_2jet({"s"}, {P("2*s")}, {P("3")});
  EXPECT_EQ(two.coefficient(0, {1}), Expr(2));
  EXPECT_EQ(two.coefficient(0, {2}), Expr(0));
  JetMap quad = transition_2jet({"s"}, {P("s + s^2")}, {Expr(0)});
  EXPECT_EQ(quad.coefficient(0, {1}), Expr(1));
  EXPECT_EQ(quad.coefficient(0, {2}), Expr(1));
}

// ---------------------------------------------------------------- properties

TEST(JetsProperty, GroupAxioms) {
  Rng rng(32);
  for (int q = 1; q <= 3; ++q) {
    for (int trial = 0; trial < 3; ++trial) {
      JetMap a = random_group_jet(rng, q, 2);
      JetMap b = random_group_jet(rng, q, 2);
      JetMap c = random_group_jet(rng, q, 2);
      JetMap e = JetMap::identity(q, 2);
      EXPECT_EQ(compose_jets(compose_jets(a, b), c), compose_jets(a, compose_jets(b, c)));
      EXPECT_EQ(compose_jets(a, e), a);
      EXPECT_EQ(compose_jets(e, a), a);
      JetMap ai = invert_jet(a);
      EXPECT_EQ(compose_jets(a, ai), e);
      EXPECT_EQ(compose_jets(ai, a), e);
    }
  }
}

TEST(JetsProperty, TruncationCoherence) {
  Rng rng(33);
  for (int q = 1; q <= 3; ++q) {
    JetMap a = random_group_jet(rng, q, 3);
    JetMap b = random_group_jet(rng, q, 3);
    EXPECT_EQ(compose_jets(a, b).truncated(2), compose_jets(a.truncated(2), b.truncated(2)));
  }
}

TEST(JetsProperty, ChainRule) {
  Rng rng(34);
  std::vector<std::string> xs = {"x", "y"};
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<Expr> f, g;
    for (int i = 0; i < 2; ++i) f.push_back(foliate::testing::random_polynomial(rng, xs, 3, 3));
    for (int i = 0; i < 2; ++i) g.push_back(foliate::testing::random_polynomial(rng, xs, 3, 3));
    std::map<std::string, Expr> at = {{"x", Expr(rng.rational(2, 2))}, {"y", Expr(rng.rational(2, 2))}};
    JetMap jf = prolong_map(f, xs, at, 3);
    std::map<std::string, Expr> at2;
    for (int i = 0; i < 2; ++i) at2[xs[static_cast<std::size_t>(i)]] = jf.value()[static_cast<std::size_t>(i)];
    JetMap jg = prolong_map(g, xs, at2, 3);
    std::vector<Expr> gf;
    for (const auto& gi : g) gf.push_back(substitute(gi, {{"x", f[0]}, {"y", f[1]}}));
    EXPECT_EQ(prolong_map(gf, xs, at, 3), compose_jets(jg, jf));
  }
}

TEST(JetsProperty, TransitionCocycle) {
  // h_ab o h_bc = h_ac on R^1 with h_ab(s) = s + s^2/4 style maps
  Expr hab = P("s + s^2");
  Expr hbc = P("2*s - s^3");
  Expr hac = substitute(hab, {{"s", hbc}});
  Rng rng(35);
  for (int trial = 0; trial < 5; ++trial) {
    Expr y = Expr(rng.rational(2, 3));
    Expr mid = substitute(hbc, {{"s", y}});
    JetMap left = compose_jets(transition_2jet({"s"}, {hab}, {mid}), transition_2jet({"s"}, {hbc}, {y}));
    EXPECT_EQ(left, transition_2jet({"s"}, {hac}, {y}));
  }
}
