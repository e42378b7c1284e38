#include <gtest/gtest.h>

#include "mires/io.hpp"

using namespace mires;
using io::json;

namespace {

json plane_problem(const std::string& f, int b) {
  return {{"format", "mires-problem"},
          {"version", 1},
          {"ring", "Q"},
          {"variables", {"x", "y"}},
          {"pairs", {{{"ideal", {f}}, {"mark", b}}}}};
}

// every polynomial recorded in a trace parses back to the atlas value
void expect_round_trip(const json& tr, const Trace& t) {
  for (auto& st : tr["steps"])
    for (auto& ch : st["charts_added"]) {
      const Chart& c = t.atlas->chart(ch["id"].get<int>());
      if (!ch.contains("parent_map")) continue;
      ASSERT_EQ(ch["parent_map"].size(), c.parent_map.size());
      for (std::size_t k = 0; k < c.parent_map.size(); ++k)
        EXPECT_EQ(parse_poly(ch["parent_map"][k].get<std::string>(), c.coords, c.ring), c.parent_map[k]);
    }
  auto& fin = tr["final"]["patches"];
  ASSERT_EQ(fin.size(), t.final_object.patches.size());
  for (std::size_t p = 0; p < fin.size(); ++p) {
    const Chart& c = t.atlas->chart(fin[p]["chart"].get<int>());
    for (std::size_t i = 0; i < fin[p]["ideals"].size(); ++i)
      for (std::size_t g = 0; g < fin[p]["ideals"][i].size(); ++g)
        EXPECT_EQ(parse_poly(fin[p]["ideals"][i][g].get<std::string>(), c.coords, c.ring),
                  t.final_object.patches[p].ideals[i][g]);
  }
}

}  // namespace

TEST(Io, Rings) {
  EXPECT_EQ(io::parse_ring("Q"), CoefRing::field());
  EXPECT_EQ(io::parse_ring("Q[eps]/(eps^3)"), CoefRing::truncated(3));
  EXPECT_EQ(io::ring_name(CoefRing::truncated(2)), "Q[eps]/(eps^2)");
  EXPECT_THROW(io::parse_ring("Z"), InputError);
  EXPECT_THROW(io::parse_ring("Q[eps]/(eps^1)"), InputError);
}

TEST(Io, ProblemFields) {
  json j = plane_problem("y^2 - x^3", 2);
  j["E"] = {{{"name", "H"}, {"coordinate", "x"}}};
  j["center"] = {"y", "x"};
  j["point"] = {"1/2", "0"};
  j["pair"] = 1;
  auto P = io::parse_problem(j);
  EXPECT_EQ(P.object.E.size(), 1u);
  EXPECT_EQ(*P.center, (std::vector<int>{0, 1}));
  EXPECT_EQ((*P.point)[0], ratio(1, 2));
  EXPECT_EQ(*P.pair, 0);
  auto Q = io::parse_problem_text(R"({"format":"mires-problem","version":1,"monomial":"pair b=4 exps=[2,3]"})");
  EXPECT_FALSE(Q.atlas);
  EXPECT_TRUE(Q.monomial);
}

TEST(Io, MalformedInputs) {
  EXPECT_THROW(io::parse_problem_text("{"), InputError);
  EXPECT_THROW(io::parse_problem_text(R"({"format":"other","version":1})"), InputError);
  EXPECT_THROW(io::parse_problem_text(R"({"format":"mires-problem","version":2})"), InputError);
  json j = plane_problem("y^2 - x^3", 2);
  j["center"] = {"q"};
  EXPECT_THROW(io::parse_problem(j), InputError);
  json k = plane_problem("y^2 - x^3", 2);
  k["pairs"][0].erase("mark");
  EXPECT_THROW(io::parse_problem(k), InputError);
  EXPECT_THROW(io::parse_problem(plane_problem("y^2 - eps", 2)), InputError);
  EXPECT_THROW(io::parse_problem(plane_problem("y^2", 0)), InputError);
}

TEST(Io, TraceRoundTrip) {
  for (std::string f : {"y^2 - x^3", "x^2 - y^5", "y^3 - x^4"}) {
    SCOPED_TRACE(f);
    auto P = io::parse_problem(plane_problem(f, 2));
    auto t = resolve(P.object);
    json tr = io::trace_json(t);
    EXPECT_EQ(tr["format"], "mires-trace");
    EXPECT_EQ(tr["version"], 1);
    EXPECT_EQ(tr["status"], "resolved");
    expect_round_trip(tr, t);
  }
}

TEST(Io, TraceIsReproducible) {
  std::string first;
  for (int run = 0; run < 3; ++run) {
    auto P = io::parse_problem(plane_problem("x^2 - y^5", 2));
    std::string s = io::trace_json(resolve(P.object)).dump(1);
    if (run == 0) first = s;
    EXPECT_EQ(s, first);
  }
}

TEST(Io, ExactValuesInTrace) {
  auto P = io::parse_problem(plane_problem("y^2 - x^3", 2));
  json tr = io::trace_json(resolve(P.object));
  auto& v = tr["steps"][0]["value_exact"];
  EXPECT_EQ(v[1]["t"][0], "3/2");
  EXPECT_EQ(tr["steps"][0]["value"], "((1, 0), (3/2, 0))");
}
