#include <gtest/gtest.h>

#include <random>

#include "mires/multiideal.hpp"
#include "test_util.hpp"

using namespace mires;

namespace {

const std::vector<std::string> XY = {"x", "y"};
const std::vector<std::string> XZ = {"x", "z"};

Poly P(const std::string& s, const std::vector<std::string>& n = XY, CoefRing r = {}) { return parse_poly(s, n, r); }

MultiIdeal on_plane(std::vector<MarkedPair> pairs, std::vector<std::string> names = XY, CoefRing ring = {}) {
  auto a = std::make_shared<Atlas>();
  int root = a->add_root(names, ring);
  return make_multiideal(a, root, {}, {}, std::move(pairs));
}

MultiIdeal monomial_pairs() { return on_plane({{{P("x^2*y^4")}, 2}, {{P("x^4*y")}, 3}}); }

MultiIdeal eps_two_pairs() {
  CoefRing r = CoefRing::truncated(2);
  std::vector<std::string> X = {"x"};
  return on_plane({{{P("x^3", X, r)}, 3}, {{P("eps*x + x^3", X, r)}, 2}}, X, r);
}

}  // namespace

TEST(MultiIdeal, SingOfMonomialPairs) {
  auto M = monomial_pairs();
  for (int t : {0, 1, 2, -1, 7}) EXPECT_TRUE(sing_member_multi(M, 0, {0, t}));
  EXPECT_FALSE(sing_member_multi(M, 0, {1, 0}));
  auto U = on_plane({{{P("1")}, 1}});
  EXPECT_TRUE(sing_empty(U));
  EXPECT_FALSE(sing_empty(M));
}

TEST(MultiIdeal, PermissibleCenters) {
  auto M = monomial_pairs();
  EXPECT_TRUE(permissible_center_check(M, 0, {0}));
  EXPECT_FALSE(permissible_center_check(M, 0, {1}));
  auto C = on_plane({{{P("y^2 - x^3")}, 2}});
  EXPECT_TRUE(permissible_center_check(C, 0, {0, 1}));
  EXPECT_FALSE(permissible_center_check(C, 0, {0}));
}

TEST(MultiIdeal, TransformAlongLine) {
  auto M = monomial_pairs();
  int e = M.atlas->add_hypersurface("E1", true, 1);
  auto T = transform_multiideal(M, {{0, {0}}}, e);
  ASSERT_EQ(T.patches.size(), 1u);
  EXPECT_EQ(T.patches[0].ideals[0][0], P("y^4"));
  EXPECT_EQ(T.patches[0].ideals[1][0], P("x*y"));
  EXPECT_EQ(T.E, std::vector<int>{e});
  EXPECT_THROW(transform_multiideal(M, {{0, {1}}}, M.atlas->add_hypersurface("E2", true, 1)), NotPermissible);
}

TEST(MultiIdeal, TransformCusp) {
  auto M = on_plane({{{P("y^2 - x^3")}, 2}});
  int e = M.atlas->add_hypersurface("E1", true, 1);
  std::vector<int> origin;
  auto T = transform_multiideal(M, {{0, {0, 1}}}, e, &origin);
  ASSERT_EQ(T.patches.size(), 2u);
  EXPECT_EQ(origin, (std::vector<int>{0, 0}));
  EXPECT_EQ(T.patches[0].ideals[0][0], P("y^2 - x"));
  EXPECT_EQ(T.chart(0).coord_of(e), 0);
  EXPECT_TRUE(sing_empty(T));
}

TEST(MultiIdeal, TransformWithEmptySingFails) {
  auto U = on_plane({{{P("x")}, 1}, {{P("1")}, 1}});
  EXPECT_THROW(transform_multiideal(U, {{0, {0, 1}}}, U.atlas->add_hypersurface("E1", true, 1)), NotPermissible);
}

TEST(MultiIdeal, CoefficientMultiIdeal) {
  auto M = on_plane({{{P("y^2 - x^3")}, 2}});
  auto C = coefficient_multiideal(M);
  ASSERT_EQ(C.marks, (std::vector<int>{2, 1}));
  EXPECT_TRUE(same_ideal(C.patches[0].ideals[1], {P("y"), P("x^2")}));
  auto B1 = on_plane({{{P("x*y")}, 1}});
  EXPECT_EQ(coefficient_multiideal(B1).marks, std::vector<int>{1});
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> c(-3, 3);
  for (int k = 0; k < 50; ++k) {
    Point p = {Rat(c(rng)), Rat(c(rng))};
    if (k % 5 == 0) p = {Rat(0), Rat(0)};
    EXPECT_EQ(sing_member_multi(M, 0, p), sing_member_multi(C, 0, p));
  }
}

TEST(MultiIdeal, InductiveCusp) {
  auto M = on_plane({{{P("y^2 - x^3")}, 2}});
  auto Z = inductive_multiideal(M, {1});
  ASSERT_EQ(Z.marks, (std::vector<int>{2, 1}));
  EXPECT_EQ(Z.patches[0].w, std::vector<int>{1});
  EXPECT_TRUE(same_ideal(Z.patches[0].ideals[0], {P("x^3")}));
  EXPECT_TRUE(same_ideal(Z.patches[0].ideals[1], {P("x^2")}));
  EXPECT_EQ(Z.dim(0), 1);
}

TEST(MultiIdeal, ConditionIota) {
  auto M = on_plane({{{P("y^2")}, 2}});
  EXPECT_THROW(inductive_multiideal(M, {1}), ConditionIotaFails);
}

TEST(MultiIdeal, AdaptedHypersurfaces) {
  auto C = on_plane({{{P("y^2 - x^3")}, 2}});
  auto z = adapted_hypersurface(C, 0, {0, 0});
  EXPECT_EQ(z.z, 1);
  EXPECT_EQ(z.chart, C.patches[0].chart);
  auto D = on_plane({{{P("x^2 - y^5")}, 2}});
  EXPECT_EQ(adapted_hypersurface(D, 0, {0, 0}).z, 0);
  auto N = on_plane({{{P("x^3")}, 2}});
  EXPECT_THROW(adapted_hypersurface(N, 0, {0, 0}), NotNice);
}

TEST(MultiIdeal, AdaptedNeedsChange) {
  auto M = on_plane({{{P("(y + x^2)^2 - x^5")}, 2}});
  auto z = adapted_hypersurface(M, 0, {0, 0});
  EXPECT_EQ(z.z, 1);
  EXPECT_NE(z.chart, M.patches[0].chart);
  Patch Q = move_patch(M.patches[0], *M.atlas, z.chart);
  EXPECT_EQ(Q.ideals[0][0], P("y^2 - x^5"));
}

TEST(MultiIdeal, BasicObjectOverEps) {
  auto M = eps_two_pairs();
  auto B = associated_basic_object(M);
  EXPECT_EQ(B.marks, std::vector<int>{6});
  CoefRing r = CoefRing::truncated(2);
  EXPECT_TRUE(same_ideal(B.patches[0].ideals[0], {P("x^6", {"x"}, r)}));
}

TEST(MultiIdeal, BasicObjectOfMonomialPairs) {
  auto B = associated_basic_object(monomial_pairs());
  EXPECT_EQ(B.marks, std::vector<int>{6});
  auto& g = testutil::golden()["basic_object_monomial_pairs"];
  Gens want;
  for (auto& t : g) want.push_back(testutil::from_canon(t, 2));
  EXPECT_TRUE(same_ideal(B.patches[0].ideals[0], want));
  auto S = on_plane({{{P("y^2 - x^3")}, 2}});
  auto BS = associated_basic_object(S);
  EXPECT_EQ(BS.marks, std::vector<int>{2});
  EXPECT_TRUE(same_ideal(BS.patches[0].ideals[0], S.patches[0].ideals[0]));
}

TEST(MultiIdeal, EquivSpotchecks) {
  auto M = on_plane({{{P("y^2 - x^3")}, 2}, {{P("x^3 - y^4")}, 3}});
  EXPECT_EQ(equiv_spotcheck(M, coefficient_multiideal(M), {}), EquivResult::agree);
  auto B = associated_basic_object(M);
  EXPECT_EQ(equiv_spotcheck(M, B, {{ScriptOp::blowup, {0, 1}, 0}}), EquivResult::agree);
  auto A = eps_two_pairs();
  auto AB = associated_basic_object(A);
  EXPECT_EQ(equiv_spotcheck(A, AB, {{ScriptOp::blowup, {0}, 0}}), EquivResult::invalid_left);
}

TEST(MultiIdeal, EquivWithExtension) {
  auto M = monomial_pairs();
  auto B = associated_basic_object(M);
  EXPECT_EQ(equiv_spotcheck(M, B, {{ScriptOp::extend, {}, 0}, {ScriptOp::blowup, {0}, 0}}), EquivResult::agree);
}

// Sing of C(I)|Z equals Sing(I) cut with Z
TEST(MultiIdealProperty, RestrictedCoefficientSing) {
  std::vector<std::pair<std::string, int>> cases = {
      {"y^2 - x^3", 2}, {"y^3 - x^5", 3}, {"y^2 + x^2*y - x^4", 2}, {"x^2 - y^5", 2}, {"y^2*x - x^4", 2}};
  std::mt19937 rng(17);
  std::uniform_int_distribution<int> c(-4, 4);
  for (auto& [f, b] : cases) {
    auto M = on_plane({{{P(f)}, b}});
    for (int z : {0, 1}) {
      MultiIdeal Z;
      try {
        Z = inductive_multiideal(M, {z});
      } catch (const ConditionIotaFails&) {
        continue;
      }
      for (int k = 0; k < 100; ++k) {
        Point p = {Rat(c(rng)), Rat(c(rng))};
        if (k % 4 == 0) p[1 - z] = 0;
        p[z] = 0;
        EXPECT_EQ(sing_member_multi(Z, 0, p), sing_member_multi(M, 0, p)) << f;
      }
    }
  }
}

TEST(MultiIdealProperty, ExtensionCompatible) {
  auto M = monomial_pairs();
  auto X = extension(M);
  std::mt19937 rng(2);
  std::uniform_int_distribution<int> c(-5, 5);
  for (auto& p : sample_points(M, 0, 10, 3))
    for (int k = 0; k < 10; ++k) {
      Point q = p;
      q.push_back(Rat(c(rng)));
      EXPECT_EQ(sing_member_multi(X, 0, q), sing_member_multi(M, 0, p));
    }
}

// the codim-one part of Sing is a permissible center and disappears after blowing up
TEST(MultiIdealProperty, CodimOneComponent) {
  auto M = on_plane({{{P("x^2*(y^2 - x^3)")}, 2}});
  EXPECT_TRUE(permissible_center_check(M, 0, {0}));
  int e = M.atlas->add_hypersurface("E1", true, 1);
  auto T = transform_multiideal(M, {{0, {0}}}, e);
  EXPECT_FALSE(permissible_center_check(T, 0, {0}));
  EXPECT_FALSE(permissible_center_check(T, 0, {1}));
}

TEST(MultiIdealProperty, SampleIsDeterministic) {
  auto M = monomial_pairs();
  EXPECT_EQ(sample_points(M, 0, 20, 7), sample_points(M, 0, 20, 7));
}
