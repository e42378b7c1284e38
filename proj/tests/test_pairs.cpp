#include <gtest/gtest.h>

#include <random>

#include "mires/pairs.hpp"
#include "test_util.hpp"

using namespace mires;

namespace {

const std::vector<std::string> XY = {"x", "y"};
const std::vector<std::string> XYZ = {"x", "y", "z"};

Poly P(const std::string& s, const std::vector<std::string>& n = XY) { return parse_poly(s, n); }

struct Plane {
  Atlas a;
  int root = a.add_root(XY);
  int e1 = a.add_hypersurface("E1", true, 1);
  BlowupResult up = a.blowup(root, {0, 1}, e1);
  const Chart& xchart() const { return a.chart(up.charts[0]); }
  const Chart& ychart() const { return a.chart(up.charts[1]); }
};

Poly random_poly(std::mt19937& rng, int n, int lo, int hi) {
  std::uniform_int_distribution<int> c(-3, 3), d(lo, hi), t(1, 3);
  Poly f(n);
  int terms = t(rng);
  for (int k = 0; k < terms; ++k) {
    Exps e(n);
    int left = d(rng);
    for (int i = 0; i < n; ++i) {
      std::uniform_int_distribution<int> s(0, left);
      e[i] = i + 1 == n ? left : s(rng);
      left -= e[i];
    }
    int v = c(rng);
    f.add_term(e, Coef(1, v == 0 ? 1 : v));
  }
  return f;
}

}  // namespace

TEST(Pairs, SingMember) {
  EXPECT_TRUE(sing_member({{P("x^2*y^4")}, 2}, {0, 5}));
  EXPECT_FALSE(sing_member({{P("x^4*y")}, 3}, {1, 0}));
  EXPECT_FALSE(sing_member({{P("1")}, 1}, {0, 0}));
}

TEST(Pairs, CuspTransforms) {
  Plane pl;
  auto& g = testutil::golden();
  Gens I = {P("y^2 - x^3")};
  EXPECT_EQ(total_transform(I, pl.xchart())[0], testutil::from_canon(g["cusp_total_x"], 2));
  EXPECT_EQ(controlled_transform(I, 2, pl.xchart())[0], testutil::from_canon(g["cusp_controlled_x"], 2));
  EXPECT_EQ(proper_transform(I, pl.xchart(), {})[0], testutil::from_canon(g["cusp_proper_x"], 2));
}

TEST(Pairs, MonomialTransforms) {
  Plane pl;
  auto& g = testutil::golden();
  Gens I = {P("x^2*y^4")};
  EXPECT_EQ(total_transform(I, pl.xchart())[0], testutil::from_canon(g["x2y4_total_x"], 2));
  EXPECT_EQ(controlled_transform(I, 2, pl.xchart())[0], testutil::from_canon(g["x2y4_controlled_x"], 2));
}

TEST(Pairs, ControlledNeedsPermissibleCenter) {
  Atlas a;
  int root = a.add_root(XY);
  auto up = a.blowup(root, {1}, a.add_hypersurface("E1", true, 1));
  EXPECT_THROW(controlled_transform({P("y^2 - x^3")}, 2, a.chart(up.charts[0])), NotPermissible);
  EXPECT_THROW(controlled_transform({P("y - x^3")}, 2, a.chart(up.charts[0])), NotPermissible);
}

TEST(Pairs, LedgerExponents) {
  Plane pl;
  auto& g = testutil::golden();
  const Chart& root = pl.a.chart(pl.root);
  auto cusp = update_ledger(initial_ledger({P("y^2 - x^3")}), 2, root, pl.xchart(), {});
  EXPECT_EQ(cusp.exps.at(pl.e1), g["cusp_ledger_exponent"].get<int>());
  auto mono = update_ledger(initial_ledger({P("x^2*y^4")}), 2, root, pl.xchart(), {});
  EXPECT_EQ(mono.exps.at(pl.e1), g["x2y4_ledger_exponent"].get<int>());
  EXPECT_EQ(mono.proper[0], P("y^4"));
  EXPECT_TRUE(ledger_identity(mono, controlled_transform({P("x^2*y^4")}, 2, pl.xchart()), pl.xchart()));
  EXPECT_TRUE(ledger_identity(cusp, controlled_transform({P("y^2 - x^3")}, 2, pl.xchart()), pl.xchart()));
}

TEST(Pairs, LedgerExponentZeroAtMarkOrder) {
  Atlas a;
  int root = a.add_root(XYZ);
  auto up = a.blowup(root, {0, 2}, a.add_hypersurface("E1", true, 1));
  Gens I = {P("z^2", XYZ)};
  auto L = update_ledger(initial_ledger(I), 2, a.chart(root), a.chart(up.charts[0]), {});
  EXPECT_EQ(L.exps.begin()->second, 0);
  EXPECT_THROW(update_ledger(initial_ledger({P("z^2 + x", XYZ)}), 2, a.chart(root), a.chart(up.charts[0]), {}),
               NotPermissible);
}

TEST(PairsProperty, LedgerIdentityAlongTwoBlowups) {
  Atlas a;
  int root = a.add_root(XY);
  Gens I = {P("x^2 - y^5")};
  int e1 = a.add_hypersurface("E1", true, 1), e2 = a.add_hypersurface("E2", true, 2);
  auto up1 = a.blowup(root, {0, 1}, e1);
  const Chart& yc = a.chart(up1.charts[1]);
  auto L1 = update_ledger(initial_ledger(I), 2, a.chart(root), yc, {});
  Gens C1 = controlled_transform(I, 2, yc);
  ASSERT_TRUE(ledger_identity(L1, C1, yc));
  auto up2 = a.blowup(yc.id, {0, 1}, e2);
  for (int c : up2.charts) {
    const Chart& ch = a.chart(c);
    auto L2 = update_ledger(L1, 2, yc, ch, {});
    EXPECT_TRUE(ledger_identity(L2, controlled_transform(C1, 2, ch), ch));
  }
}

// transformed E^-i * Delta^(c-i)(J) dominates Delta^(c-i)(J[1]) in order at sample points
TEST(PairsProperty, DeltaTransformInclusion) {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> cd(1, 3), pt(-2, 2);
  int checked = 0;
  for (int trial = 0; trial < 30; ++trial) {
    int c = cd(rng);
    Gens J = {random_poly(rng, 2, c, c + 2), random_poly(rng, 2, c, c + 3)};
    if (ideal_order_at(J, {0, 0}) < c) continue;
    Atlas a;
    int root = a.add_root(XY);
    auto up = a.blowup(root, {0, 1}, a.add_hypersurface("E1", true, 1));
    for (int ch_id : up.charts) {
      const Chart& ch = a.chart(ch_id);
      Gens J1 = controlled_transform(J, c, ch);
      for (int i = 0; i <= c; ++i) {
        Gens lhs;
        for (auto& g : delta_iter(J, {}, c - i)) {
          Poly q;
          ASSERT_TRUE(divide_by_var_power(substitute(g, ch.parent_map), ch.exc_coord, i, q));
          lhs.push_back(q);
        }
        Gens rhs = delta_iter(J1, {}, c - i);
        for (int k = 0; k < 20; ++k) {
          Point p = {Rat(pt(rng)), Rat(pt(rng))};
          EXPECT_GE(ideal_order_at(lhs, p), ideal_order_at(rhs, p));
          ++checked;
        }
      }
    }
  }
  EXPECT_GT(checked, 100);
}

// (J|Z)[1] = J[1]|Z1 for Z = {z = 0} containing Sing(J, c)
TEST(PairsProperty, RestrictionCommutesWithTransform) {
  std::mt19937 rng(5);
  int done = 0;
  for (int trial = 0; trial < 20; ++trial) {
    Poly f = random_poly(rng, 3, 2, 4);
    f = restrict_zero(f, {2});
    Gens J = {P("z^2", XYZ), f};
    if (ideal_order_at(J, {0, 0, 0}) < 2) continue;
    Atlas a;
    int root = a.add_root(XYZ);
    auto up = a.blowup(root, {0, 1, 2}, a.add_hypersurface("E1", true, 1));
    for (int ch_id : up.charts) {
      const Chart& ch = a.chart(ch_id);
      if (ch.exc_coord == 2) continue;  // Z1 misses this chart
      Gens lhs = controlled_transform(restrict_to(J, 2), 2, ch);
      Gens rhs = restrict_to(controlled_transform(J, 2, ch), 2);
      EXPECT_TRUE(same_ideal(lhs, rhs));
    }
    ++done;
  }
  EXPECT_GT(done, 5);
}
