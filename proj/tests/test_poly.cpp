#include <gtest/gtest.h>

#include <random>

#include "mires/poly.hpp"
#include "mires/univariate.hpp"
#include "test_util.hpp"

using namespace mires;

namespace {

const std::vector<std::string> XY = {"x", "y"};
const std::vector<std::string> XZ = {"x", "z"};
const CoefRing D2 = CoefRing::truncated(2);

Poly P(const std::string& s, const std::vector<std::string>& names = XY, CoefRing r = {}) { return parse_poly(s, names, r); }

Poly random_poly(std::mt19937& rng, int n, int deg, int terms, CoefRing ring = {}) {
  std::uniform_int_distribution<int> c(-5, 5), d(0, deg);
  Poly f(n, ring);
  for (int t = 0; t < terms; ++t) {
    Exps e(n);
    for (auto& v : e) v = d(rng);
    Coef k(ring.m);
    for (auto& p : k.parts) p = c(rng);
    f.add_term(e, k);
  }
  return f;
}

Point random_point(std::mt19937& rng, int n) {
  std::uniform_int_distribution<int> c(-4, 4);
  Point p;
  for (int i = 0; i < n; ++i) {
    Rat r(c(rng), 1 + (c(rng) + 4) % 3);
    r.canonicalize();
    p.push_back(r);
  }
  return p;
}

}  // namespace

TEST(Poly, ParsePrintRoundTrip) {
  Poly f = P("3/2*x^2*y - y + 7");
  EXPECT_EQ(to_string(f, XY), "3/2*x^2*y - y + 7");
  EXPECT_EQ(P(to_string(f, XY)), f);
  Poly g = P("eps*x + x^3", {"x"}, D2);
  EXPECT_EQ(to_string(g, {"x"}), "x^3 + eps*x");
  EXPECT_EQ(P(to_string(g, {"x"}), {"x"}, D2), g);
  EXPECT_EQ(to_string(Poly(2), XY), "0");
}

TEST(Poly, ParseErrors) {
  EXPECT_THROW(P("x + w"), InputError);
  EXPECT_THROW(P("x +"), InputError);
  EXPECT_THROW(P("eps*x"), InputError);
  EXPECT_THROW(P("x/y"), InputError);
  EXPECT_THROW(P("(x"), InputError);
}

TEST(Poly, NilpotentArithmetic) {
  Poly ex = P("eps*x", {"x"}, D2);
  EXPECT_TRUE((ex * ex).is_zero());
  Poly f = P("eps*x + x^3", {"x"}, D2);
  auto& g = testutil::golden();
  Poly expect = testutil::from_canon(g["cube_eps"], 1, D2, true);
  EXPECT_EQ(pow(f, 3), expect);
  EXPECT_EQ(to_string(pow(f, 3), {"x"}), "x^9 + 3*eps*x^7");
  EXPECT_EQ(f + Poly(1, D2), f);
}

TEST(Poly, Partial) {
  EXPECT_EQ(partial(P("z^2 + eps*x^2", XZ, D2), 1), P("2*z", XZ, D2));
  EXPECT_EQ(partial(P("z^3 + x^3", XZ), 0), P("3*x^2", XZ));
  EXPECT_TRUE(partial(P("7"), 0).is_zero());
  EXPECT_THROW(partial(P("x"), 2), InputError);
}

TEST(Poly, Translate) {
  EXPECT_EQ(translate(P("x^2*y^4"), {0, 1}), P("x^2*(y+1)^4"));
  Poly f = P("y^2 - x^3");
  EXPECT_EQ(translate(f, {0, 0}), f);
  auto& g = testutil::golden();
  EXPECT_EQ(translate(f, {1, 1}), testutil::from_canon(g["translate_cusp_1_1"], 2));
  EXPECT_EQ(translate(f, {1, 1}), P("y^2 + 2*y - x^3 - 3*x^2 - 3*x"));
  EXPECT_THROW(translate(f, {1}), InputError);
}

TEST(Poly, OrderAtPoint) {
  EXPECT_EQ(order_at_point(P("x^2*y^4"), {0, 0}), 6);
  EXPECT_EQ(order_at_point(P("x^2*y^4"), {0, 1}), 2);
  EXPECT_EQ(order_at_point(P("eps*x + x^3", {"x"}, D2), {0}), 1);
  EXPECT_EQ(order_at_point(Poly(2), {0, 0}), kInf);
}

TEST(Poly, OrderAlongCoords) {
  EXPECT_EQ(order_along_coords(P("eps*x + x^3", {"x"}, D2), {0}), 1);
  EXPECT_EQ(order_along_coords(P("z^2 + eps*x^2", XZ, D2), {1}), 0);
  EXPECT_EQ(order_along_coords(Poly(1), {0}), kInf);
}

TEST(Poly, Substitute) {
  auto& g = testutil::golden();
  std::vector<Poly> m = {P("x"), P("x*y")};
  EXPECT_EQ(substitute(P("y^2 - x^3"), m), testutil::from_canon(g["subst_cusp_xchart"], 2));
  EXPECT_EQ(substitute(P("y^2 - x^3"), m), P("x^2*(y^2 - x)"));
  EXPECT_EQ(substitute(P("x^2*y^4"), m), testutil::from_canon(g["subst_x2y4_xchart"], 2));
  Poly f = P("x^3 - 2*x*y + 5");
  EXPECT_EQ(substitute(f, identity_map(2, {})), f);
}

TEST(Poly, SetFiber) {
  EXPECT_EQ(set_fiber(P("eps*x + x^3", {"x"}, D2)), P("x^3", {"x"}, D2));
  EXPECT_EQ(set_fiber(P("z^2 + eps*x^2", XZ, D2)), P("z^2", XZ, D2));
  EXPECT_EQ(set_fiber(P("x^6", {"x"}, D2)), P("x^6", {"x"}, D2));
  EXPECT_THROW(set_fiber(P("x")), InputError);
}

TEST(PolyProperty, OrderIsAdditiveOverField) {
  std::mt19937 rng(11);
  for (int it = 0; it < 100; ++it) {
    Poly f = random_poly(rng, 2, 3, 4), g = random_poly(rng, 2, 3, 4);
    Point p = random_point(rng, 2);
    if (it % 3 == 0) p = {0, 0};
    int of = order_at_point(f, p), og = order_at_point(g, p);
    int ofg = order_at_point(f * g, p);
    if (of == kInf || og == kInf) {
      EXPECT_EQ(ofg, kInf);
    } else {
      EXPECT_EQ(ofg, of + og);
    }
  }
}

TEST(PolyProperty, OrderIsSuperadditiveOverArtinian) {
  std::mt19937 rng(12);
  for (int it = 0; it < 100; ++it) {
    Poly f = random_poly(rng, 2, 3, 3, D2), g = random_poly(rng, 2, 3, 3, D2);
    Point p = it % 2 ? Point{0, 0} : random_point(rng, 2);
    int of = order_at_point(f, p), og = order_at_point(g, p);
    int ofg = order_at_point(f * g, p);
    if (of != kInf && og != kInf) {
      EXPECT_GE(ofg, of + og);
    }
  }
}

TEST(PolyProperty, AlongCoordsBoundsPointOrder) {
  std::mt19937 rng(13);
  for (int it = 0; it < 40; ++it) {
    Poly f = random_poly(rng, 3, 3, 5);
    std::vector<int> S = {0, 2};
    int along = order_along_coords(f, S);
    for (int k = 0; k < 10; ++k) {
      Point p = random_point(rng, 3);
      p[0] = 0;
      p[2] = 0;
      EXPECT_LE(along, order_at_point(f, p));
    }
  }
}

TEST(PolyProperty, TranslateRoundTripAndPartialsCommute) {
  std::mt19937 rng(14);
  for (int it = 0; it < 50; ++it) {
    Poly f = random_poly(rng, 3, 4, 6, it % 2 ? D2 : CoefRing{});
    Point p = random_point(rng, 3);
    Point q;
    for (auto& v : p) q.push_back(-v);
    EXPECT_EQ(translate(translate(f, p), q), f);
    EXPECT_EQ(partial(partial(f, 0), 2), partial(partial(f, 2), 0));
    EXPECT_EQ(partial(partial(f, 1), 1), partial(partial(f, 1), 1));
  }
}

TEST(PolyProperty, FiberIsRingMorphism) {
  std::mt19937 rng(15);
  CoefRing r3 = CoefRing::truncated(3);
  for (int it = 0; it < 50; ++it) {
    Poly f = random_poly(rng, 2, 3, 4, r3), g = random_poly(rng, 2, 3, 4, r3);
    EXPECT_EQ(set_fiber(f * g), set_fiber(f) * set_fiber(g));
    EXPECT_EQ(set_fiber(f + g), set_fiber(f) + set_fiber(g));
  }
}

TEST(PolyProperty, PrintParseRoundTrip) {
  std::mt19937 rng(16);
  for (int it = 0; it < 50; ++it) {
    CoefRing r = it % 2 ? D2 : CoefRing{};
    Poly f = random_poly(rng, 3, 4, 5, r);
    std::vector<std::string> names = {"x", "y", "z"};
    EXPECT_EQ(parse_poly(to_string(f, names), names, r), f);
  }
}

TEST(Univariate, GcdAndRoots) {
  Poly f = P("x^3*(x-1)^2*(x+2/3)*(x^2+1)", {"x"});
  auto u = uni::from_poly(f, 0);
  auto roots = uni::rational_roots(u);
  ASSERT_EQ(roots.size(), 3u);
  EXPECT_EQ(roots[0].first, Rat(-2, 3));
  EXPECT_EQ(roots[0].second, 1);
  EXPECT_EQ(roots[1].first, 0);
  EXPECT_EQ(roots[1].second, 3);
  EXPECT_EQ(roots[2].first, 1);
  EXPECT_EQ(roots[2].second, 2);
  auto g = uni::gcd(u, uni::from_poly(P("x^2*(x-1)^5", {"x"}), 0));
  EXPECT_EQ(uni::to_poly(g, 1, 0), P("x^2*(x-1)^2", {"x"}));
  EXPECT_EQ(uni::deg(uni::strip_rational_roots(u)), 2);
}
