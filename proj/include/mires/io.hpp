#pragma once

#include <regex>
#include <string>
#include <vector>

#include "json.hpp"
#include "artinian.hpp"

namespace mires::io {

using json = nlohmann::json;

inline constexpr int kFormatVersion = 1;

inline std::string ring_name(CoefRing r) {
  return r.artinian() ? "Q[eps]/(eps^" + std::to_string(r.m) + ")" : "Q";
}

inline CoefRing parse_ring(const std::string& s) {
  if (s == "Q") return CoefRing::field();
  static const std::regex re(R"(Q\[eps\]/\(eps\^(\d+)\))");
  std::smatch m;
  if (!std::regex_match(s, m, re)) throw InputError("unknown ring '" + s + "'");
  return CoefRing::truncated(std::stoi(m[1]));
}

struct Problem {
  CoefRing ring;
  std::vector<std::string> vars;
  std::shared_ptr<Atlas> atlas;
  MultiIdeal object;
  std::optional<std::vector<int>> center;  // coordinate indices
  std::optional<Point> point;
  std::optional<int> hypersurface;         // adapted coordinate
  std::optional<int> pair;                 // 0-based
  std::optional<std::string> monomial;
  std::optional<std::vector<int>> stratum;  // 0-based
  std::optional<MultiIdeal> other;
  std::vector<ScriptOp> script;
  int delta_times = 1;
};

inline int var_index(const std::vector<std::string>& vars, const std::string& name) {
  for (std::size_t i = 0; i < vars.size(); ++i)
    if (vars[i] == name) return static_cast<int>(i);
  throw InputError("unknown variable '" + name + "'");
}

inline std::vector<int> var_indices(const std::vector<std::string>& vars, const json& names) {
  std::vector<int> out;
  for (auto& n : names) out.push_back(var_index(vars, n.get<std::string>()));
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<MarkedPair> parse_pairs(const json& pairs, const std::vector<std::string>& vars, CoefRing ring) {
  if (!pairs.is_array() || pairs.empty()) throw InputError("'pairs' must be a non-empty list");
  std::vector<MarkedPair> out;
  for (auto& p : pairs) {
    Gens g;
    for (auto& s : p.at("ideal")) g.push_back(parse_poly(s.get<std::string>(), vars, ring));
    int b = p.at("mark").get<int>();
    if (b < 1) throw InputError("marks must be positive");
    out.push_back({g, b});
  }
  return out;
}

// hypersurfaces of E are aligned with coordinates of the root chart
inline Problem parse_problem(const json& j) {
  try {
    if (j.value("format", "") != "mires-problem") throw InputError("not a mires-problem file");
    if (j.value("version", 0) != kFormatVersion) throw InputError("unsupported problem version");
    Problem P;
    if (j.contains("monomial")) P.monomial = j["monomial"].get<std::string>();
    if (j.contains("stratum")) {
      std::vector<int> s;
      for (auto& k : j["stratum"]) s.push_back(k.get<int>() - 1);
      std::sort(s.begin(), s.end());
      P.stratum = s;
    }
    if (!j.contains("variables")) {
      if (!P.monomial) throw InputError("problem needs 'variables' and 'pairs' or a 'monomial' form");
      return P;
    }
    P.ring = parse_ring(j.value("ring", "Q"));
    P.vars = j.at("variables").get<std::vector<std::string>>();
    if (P.vars.empty()) throw InputError("no variables");
    std::vector<int> w = j.contains("W") ? var_indices(P.vars, j["W"]) : std::vector<int>{};
    P.atlas = std::make_shared<Atlas>();
    int root = P.atlas->add_root(P.vars, P.ring, w);
    std::vector<int> E;
    for (auto& h : j.value("E", json::array())) {
      int id = P.atlas->add_hypersurface(h.at("name").get<std::string>(), false, 0);
      P.atlas->align(root, id, var_index(P.vars, h.at("coordinate").get<std::string>()));
      E.push_back(id);
    }
    P.object = make_multiideal(P.atlas, root, w, E, parse_pairs(j.at("pairs"), P.vars, P.ring));
    if (j.contains("other")) {
      P.other = make_multiideal(P.atlas, root, w, E, parse_pairs(j["other"].at("pairs"), P.vars, P.ring));
    }
    if (j.contains("center")) P.center = var_indices(P.vars, j["center"]);
    if (j.contains("point")) {
      Point p;
      for (auto& c : j["point"]) p.push_back(parse_rational(c.get<std::string>()));
      if (p.size() != P.vars.size()) throw InputError("point has the wrong length");
      P.point = p;
    }
    if (j.contains("hypersurface")) P.hypersurface = var_index(P.vars, j["hypersurface"].get<std::string>());
    if (j.contains("pair")) P.pair = j["pair"].get<int>() - 1;
    if (j.contains("delta_times")) P.delta_times = j["delta_times"].get<int>();
    for (auto& op : j.value("script", json::array())) {
      ScriptOp s;
      std::string kind = op.at("op").get<std::string>();
      if (kind == "extend") s.kind = ScriptOp::extend;
      else if (kind == "blowup") s.center = var_indices(P.vars, op.at("center"));
      else throw InputError("unknown script op '" + kind + "'");
      P.script.push_back(s);
    }
    return P;
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed problem: ") + e.what());
  }
}

inline Problem parse_problem_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
  return parse_problem(j);
}

// --- output ---

inline json coord_names(const Chart& c, const std::vector<int>& coords) {
  json out = json::array();
  for (int i : coords) out.push_back(c.coords.at(i));
  return out;
}

inline json gens_json(const Gens& gens, const Chart& c) {
  json out = json::array();
  for (auto& g : gens) out.push_back(to_string(g, c.coords));
  return out;
}

inline json lambda_json(const LambdaValue& v) {
  json out = json::array();
  for (auto& it : v.items) {
    switch (it.kind) {
      case LambdaItem::Kind::t:
        out.push_back({{"t", {it.t.omega.get_str(), it.t.n}}});
        break;
      case LambdaItem::Kind::gamma:
        out.push_back({{"gamma", {it.gamma.neg_p, it.gamma.ratio.get_str(), it.gamma.seq}}});
        break;
      case LambdaItem::Kind::infinity:
        out.push_back({{"infinity", it.dim}});
        break;
    }
  }
  return out;
}

inline json chart_json(const Atlas& atlas, int id) {
  const Chart& c = atlas.chart(id);
  json j = {{"id", id}, {"kind", kind_name(c.kind)}, {"parent", c.parent}};
  if (c.parent >= 0) {
    const Chart& p = atlas.chart(c.parent);
    json images = json::array();
    for (auto& g : c.parent_map) images.push_back(to_string(g, c.coords));
    j["parent_map"] = images;
    if (c.kind == ChartKind::blowup) {
      j["center"] = coord_names(p, c.center);
      j["exceptional"] = atlas.hypersurfaces().at(c.exceptional).name;
    }
  }
  if (!c.units.empty()) j["units"] = gens_json(c.units, c);
  return j;
}

inline json object_json(const MultiIdeal& M) {
  json patches = json::array();
  for (std::size_t k = 0; k < M.patches.size(); ++k) {
    const Chart& c = M.chart(static_cast<int>(k));
    json ideals = json::array();
    for (auto& I : M.patches[k].ideals) ideals.push_back(gens_json(I, c));
    patches.push_back({{"chart", M.patches[k].chart}, {"W", coord_names(c, M.patches[k].w)}, {"ideals", ideals}});
  }
  json E = json::array();
  for (int h : M.E) E.push_back(M.atlas->hypersurfaces().at(h).name);
  return {{"ring", ring_name(M.ring)}, {"marks", M.marks}, {"E", E}, {"patches", patches}};
}

inline json centers_json(const Atlas& atlas, const std::map<int, std::vector<int>>& centers) {
  json out = json::array();
  for (auto& [chart, coords] : centers) out.push_back({{"chart", chart}, {"coords", coord_names(atlas.chart(chart), coords)}});
  return out;
}

inline json header(const std::string& kind, const std::string& command) {
  return {{"format", kind}, {"version", kFormatVersion}, {"command", command}};
}

inline json trace_json(const Trace& tr) {
  json j = header("mires-trace", "resolve");
  json steps = json::array();
  for (auto& s : tr.steps) {
    json charts = json::array();
    for (int id = s.charts_before; id < s.charts_after; ++id) charts.push_back(chart_json(*tr.atlas, id));
    json hyps = json::array();
    for (int h : s.center_hyps) hyps.push_back(tr.atlas->hypersurfaces().at(h).name);
    steps.push_back({{"index", s.index},
                     {"phase", s.phase},
                     {"kind", s.kind},
                     {"depth", s.depth},
                     {"value", to_string(s.value)},
                     {"value_exact", lambda_json(s.value)},
                     {"centers", centers_json(*tr.atlas, s.centers)},
                     {"center_hyps", hyps},
                     {"exceptional", tr.atlas->hypersurfaces().at(s.exceptional).name},
                     {"charts_added", charts}});
  }
  j["steps"] = steps;
  j["status"] = tr.resolved ? "resolved" : "unresolved";
  j["final"] = object_json(tr.final_object);
  j["chart_count"] = tr.atlas->chart_count();
  return j;
}

inline json gamma_json(const GammaValue& g) {
  json seq = g.seq;
  return {{"text", to_string(g)}, {"neg_p", g.neg_p}, {"ratio", g.ratio.get_str()}, {"seq", seq}};
}

inline json monomial_trace_json(const MonomialForm& F, const std::vector<MonomialStep>& steps, const MonomialForm& fin) {
  json j = header("mires-trace", "resolve-monomial");
  j["input"] = to_string(F);
  json out = json::array();
  for (std::size_t k = 0; k < steps.size(); ++k)
    out.push_back({{"index", k}, {"center", to_one_based(steps[k].center)}, {"value", gamma_json(steps[k].value)}});
  j["steps"] = out;
  j["status"] = singular_strata(fin).empty() ? "resolved" : "unresolved";
  j["final"] = to_string(fin);
  return j;
}

inline json equiresolve_json(const EquiresolveReport& r) {
  json j = header("mires-trace", "equiresolve");
  json steps = json::array();
  for (auto& s : r.steps) {
    json st = {{"index", s.index}, {"centers", centers_json(*r.atlas, s.centers)}};
    if (s.v >= 0) {
      st["pair"] = s.v + 1;
      st["via"] = s.via;
    }
    steps.push_back(st);
  }
  j["steps"] = steps;
  j["status"] = r.equiresolved ? "equiresolved" : "failed";
  if (r.failed_step >= 0) j["failed_step"] = r.failed_step;
  if (r.failed_pair > 0) j["failed_pair"] = r.failed_pair;
  if (!r.diagnostic.empty()) j["diagnostic"] = r.diagnostic;
  return j;
}

}  // namespace mires::io
