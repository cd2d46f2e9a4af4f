#include <gtest/gtest.h>

#include "foliate/error.hpp"
#include "foliate/linalg.hpp"
#include "foliate/woq.hpp"

using namespace foliate;

namespace {

WOElement C(int i, int q) { return WOElement::c(i, q); }
WOElement H(int j, int q) { return WOElement::h(j, q); }
bool same(const GFCochain& a, const GFCochain& b) { return (a.is_zero() && b.is_zero()) || a == b; }

WOElement mul(const WOElement& a, const WOElement& b) { return wo_multiply(a, b); }

std::vector<int> bettis(int q, bool reversed) {
  std::vector<int> out;
  for (const auto& g : wo_cohomology(q, 0, wo_top_degree(q), reversed)) out.push_back(g.betti);
  return out;
}

// Oracle: Betti numbers from dim C^p - rank d_p - rank d_{p-1}, with the
// differential matrices assembled from generator images only.
std::vector<int> oracle_bettis(int q) {
  std::vector<int> out;
  int top = wo_top_degree(q);
  std::vector<int> ranks(static_cast<std::size_t>(top + 2), 0);
  for (int p = 0; p <= top; ++p) {
    auto from = wo_basis(q, p);
    auto to = wo_basis(q, p + 1);
    if (from.empty() || to.empty()) continue;
    RationalMatrix m(to.size(), std::vector<Rational>(from.size()));
    for (std::size_t c = 0; c < from.size(); ++c) {
      const WOMonomial& mono = from[c];
      // d(c^a h_{j1}..h_{jr}) = sum_k (-1)^k c^a c_{jk} h_{..without jk..}
      for (std::size_t k = 0; k < mono.h.size(); ++k) {
        WOMonomial img = mono;
        img.c[static_cast<std::size_t>(mono.h[k] - 1)] += 1;
        img.h.erase(img.h.begin() + static_cast<long>(k));
        if (img.c_degree() > 2 * q) continue;
        for (std::size_t r = 0; r < to.size(); ++r)
          if (to[r] == img) m[r][c] += k % 2 == 0 ? 1 : -1;
      }
    }
    ranks[static_cast<std::size_t>(p)] = rank(m);
  }
  for (int p = 0; p <= top; ++p) {
    int dim = static_cast<int>(wo_basis(q, p).size());
    out.push_back(dim - ranks[static_cast<std::size_t>(p)] - (p > 0 ? ranks[static_cast<std::size_t>(p - 1)] : 0));
  }
  return out;
}

std::vector<WOMonomial> full_basis(int q) {
  std::vector<WOMonomial> all;
  for (int p = 0; p <= wo_top_degree(q); ++p)
    for (const auto& m : wo_basis(q, p)) all.push_back(m);
  return all;
}

}  // namespace

TEST(WOq, MultiplyExamples) {
  EXPECT_TRUE(mul(C(1, 1), C(1, 1)).is_zero());
  EXPECT_TRUE(mul(H(1, 2), H(1, 2)).is_zero());
  EXPECT_EQ(mul(H(1, 1), C(1, 1)), mul(C(1, 1), H(1, 1)));
  EXPECT_EQ(to_string(mul(H(1, 1), C(1, 1))), "h1*c1");
  EXPECT_FALSE(mul(C(1, 2), C(1, 2)).is_zero());
  EXPECT_TRUE(mul(C(1, 2), C(2, 2)).is_zero());
  EXPECT_EQ(mul(H(1, 3), H(3, 3)), Rational(-1) * mul(H(3, 3), H(1, 3)));
  EXPECT_EQ(to_string(mul(H(3, 3), H(1, 3))), "-h1*h3");
  EXPECT_EQ(mul(WOElement::one(2), C(2, 2)), C(2, 2));
}

TEST(WOq, DifferentialExamples) {
  EXPECT_EQ(wo_differential(H(1, 1)), C(1, 1));
  EXPECT_TRUE(wo_differential(C(2, 2)).is_zero());
  EXPECT_TRUE(wo_differential(mul(H(1, 1), C(1, 1))).is_zero());
  EXPECT_EQ(wo_differential(H(3, 3)), C(3, 3));
  EXPECT_EQ(wo_differential(mul(H(1, 3), H(3, 3))), mul(C(1, 3), H(3, 3)) - mul(H(1, 3), C(3, 3)));
}

TEST(WOq, GradedCommutativityAndLeibniz) {
  for (int q = 1; q <= 3; ++q) {
    auto all = full_basis(q);
    for (const auto& a : all)
      for (const auto& b : all) {
        WOElement x = WOElement::monomial(a, q), y = WOElement::monomial(b, q);
        Rational sign = (a.degree() * b.degree()) % 2 == 0 ? 1 : -1;
        ASSERT_EQ(mul(x, y), sign * mul(y, x));
        Rational s2 = a.degree() % 2 == 0 ? 1 : -1;
        ASSERT_EQ(wo_differential(mul(x, y)), mul(wo_differential(x), y) + s2 * mul(x, wo_differential(y)));
      }
  }
}

TEST(WOq, DSquaredVanishes) {
  for (int q = 1; q <= 3; ++q)
    for (const auto& m : full_basis(q))
      EXPECT_TRUE(wo_differential(wo_differential(WOElement::monomial(m, q))).is_zero()) << to_string(m);
}

TEST(WOq, BasisDegrees) {
  EXPECT_EQ(full_basis(1).size(), 4u);
  for (int q = 1; q <= 3; ++q)
    for (int p = 0; p <= wo_top_degree(q); ++p)
      for (const auto& m : wo_basis(q, p)) {
        EXPECT_EQ(m.degree(), p);
        EXPECT_LE(m.c_degree(), 2 * q);
      }
  EXPECT_THROW(wo_basis(4, 0), Error);
}

TEST(WOq, CohomologyQ1) {
  auto groups = wo_cohomology(1, 0, 3);
  ASSERT_EQ(groups.size(), 4u);
  EXPECT_EQ(bettis(1, false), (std::vector<int>{1, 0, 0, 1}));
  ASSERT_EQ(groups[3].representatives.size(), 1u);
  EXPECT_EQ(to_string(groups[3].representatives[0]), "h1*c1");
  EXPECT_EQ(to_string(groups[0].representatives[0]), "1");
}

TEST(WOq, CohomologyMatchesRankOracle) {
  for (int q = 1; q <= 3; ++q) {
    EXPECT_EQ(bettis(q, false), oracle_bettis(q));
    EXPECT_EQ(bettis(q, true), bettis(q, false));
    EXPECT_EQ(bettis(q, false)[0], 1);
  }
}

TEST(WOq, GodbillonVeyClassQ2) {
  auto groups = wo_cohomology(2, 5, 5);
  ASSERT_EQ(groups.size(), 1u);
  // h1 c1^2 is closed and not exact.
  WOElement gv = mul(H(1, 2), mul(C(1, 2), C(1, 2)));
  EXPECT_TRUE(wo_differential(gv).is_zero());
  bool found = false;
  for (const auto& r : groups[0].representatives) found = found || r == gv;
  EXPECT_TRUE(found);
  for (const auto& m : wo_basis(2, 4)) {
    auto d = wo_differential(WOElement::monomial(m, 2));
    EXPECT_NE(d, gv);
  }
}

TEST(WOq, RepresentativesAreClosedAndNormalized) {
  for (int q = 1; q <= 3; ++q)
    for (const auto& g : wo_cohomology(q, 0, wo_top_degree(q)))
      for (const auto& r : g.representatives) {
        EXPECT_TRUE(wo_differential(r).is_zero());
        EXPECT_EQ(r.terms().begin()->second, 1);
      }
}

TEST(WOq, EmbeddingExamples) {
  EXPECT_EQ(embed_gf(H(1, 2), 2), universal_h(1, 2));
  EXPECT_TRUE(embed_gf(WOElement(1), 1).is_zero());
  EXPECT_TRUE(embed_gf(mul(C(1, 1), C(1, 1)), 1).is_zero());
  GFCochain tr = universal_c(1, 1);
  GFCochain sq = gf_wedge(tr, tr);
  for (const auto& t : combinations(label_count(1, 3), 4)) EXPECT_EQ(evaluate_labels(sq, t), 0);
}

TEST(WOq, EmbeddingIsChainMap) {
  for (int q = 1; q <= 2; ++q)
    for (int p = 0; p <= 5; ++p)
      for (const auto& m : wo_basis(q, p)) {
        WOElement x = WOElement::monomial(m, q);
        GFCochain lhs = embed_gf(wo_differential(x), q);
        GFCochain rhs = ce_differential(embed_gf(x, q));
        EXPECT_TRUE(same(lhs, rhs)) << q << " " << to_string(m);
      }
}

TEST(WOq, EmbeddingIsMultiplicative) {
  for (int q = 1; q <= 2; ++q) {
    auto all = full_basis(q);
    for (const auto& a : all)
      for (const auto& b : all) {
        if (a.degree() + b.degree() > 5) continue;
        WOElement x = WOElement::monomial(a, q), y = WOElement::monomial(b, q);
        WOElement xy = mul(x, y);
        GFCochain lhs = embed_gf(xy, q);
        GFCochain rhs = gf_wedge(embed_gf(x, q), embed_gf(y, q));
        // Truncated products are not expected to vanish in the cochain complex.
        if (a.c_degree() + b.c_degree() > 2 * q) continue;
        EXPECT_TRUE(same(lhs, rhs)) << to_string(a) << " " << to_string(b);
      }
  }
}
