#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "mires/io.hpp"

using namespace mires;
using io::json;

namespace {

struct Outcome {
  json doc;
  std::string report;
};

struct Settings {
  int chart_limit = 20000;
  int step_cap = 64;
  unsigned seed = 7;
};

std::string read_input(const std::string& path) {
  std::stringstream ss;
  if (path == "-") {
    ss << std::cin.rdbuf();
  } else {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    ss << in.rdbuf();
  }
  return ss.str();
}

const MultiIdeal& need_object(const io::Problem& P) {
  if (!P.atlas) throw InputError("this command needs 'variables' and 'pairs'");
  return P.object;
}

const std::vector<int>& need_center(const io::Problem& P) {
  if (!P.center) throw InputError("this command needs a 'center'");
  return *P.center;
}

MonomialForm need_monomial(const io::Problem& P) {
  if (!P.monomial) throw InputError("this command needs a 'monomial' form");
  return parse_monomial_form(*P.monomial);
}

std::string join(const json& names) {
  std::string s;
  for (auto& n : names) s += (s.empty() ? "" : ", ") + (n.is_string() ? n.get<std::string>() : n.dump());
  return "(" + s + ")";
}

Outcome cmd_sing(const io::Problem& P, const Settings& st) {
  const MultiIdeal& M = need_object(P);
  MultiIdeal F = fiber(M);
  const Chart& c = M.chart(0);
  json pairs = json::array();
  std::string rep;
  for (int i = 0; i < M.npairs(); ++i) {
    Gens s = delta_iter(F.patches[0].ideals[i], F.patches[0].w, M.marks[i] - 1);
    pairs.push_back(io::gens_json(s, c));
    rep += "Sing pair " + std::to_string(i + 1) + ": V" + join(pairs.back()) + "\n";
  }
  bool empty = sing_empty(F);
  json j = io::header("mires-report", "sing");
  j["sing_ideals"] = pairs;
  j["sing_empty"] = empty;
  rep += std::string("Sing is ") + (empty ? "empty" : "nonempty") + "\n";
  if (P.point) {
    bool in = sing_member_multi(F, 0, *P.point);
    j["point_in_sing"] = in;
    rep += std::string("point ") + (in ? "is" : "is not") + " in Sing\n";
  }
  std::vector<json> pts;
  for (auto& p : sample_points(F, 0, 10, st.seed))
    if (sing_member_multi(F, 0, p)) {
      json q = json::array();
      for (auto& r : p) q.push_back(r.get_str());
      pts.push_back(q);
    }
  j["sampled_sing_points"] = pts;
  return {j, rep};
}

Outcome cmd_order(const io::Problem& P, const Settings&) {
  const MultiIdeal& M = need_object(P);
  Point p = P.point ? *P.point : Point(P.vars.size(), Rat(0));
  json j = io::header("mires-report", "order");
  json at_point = json::array(), along = json::array(), along_fiber = json::array();
  std::string rep;
  for (int i = 0; i < M.npairs(); ++i) {
    int o = ideal_order_at(M.patches[0].ideals[i], p);
    at_point.push_back(o);
    rep += "pair " + std::to_string(i + 1) + ": order at point " + std::to_string(o);
    if (P.center) {
      auto full = with_w(*P.center, M.patches[0].w);
      int nu = nu_along(M.patches[0].ideals[i], full, M.patches[0].w);
      int nf = nu_along(fiber_gens(M.patches[0].ideals[i]), full, M.patches[0].w);
      along.push_back(nu);
      along_fiber.push_back(nf);
      rep += ", along center " + std::to_string(nu);
      if (M.ring.artinian()) rep += " (fiber " + std::to_string(nf) + ")";
    }
    rep += "\n";
  }
  j["order_at_point"] = at_point;
  if (P.center) {
    j["order_along_center"] = along;
    j["fiber_order_along_center"] = along_fiber;
  }
  return {j, rep};
}

Outcome cmd_delta(const io::Problem& P, const Settings&) {
  const MultiIdeal& M = need_object(P);
  if (P.delta_times < 0) throw InputError("delta_times must be nonnegative");
  json j = io::header("mires-report", "delta");
  json out = json::array();
  std::string rep;
  for (int i = 0; i < M.npairs(); ++i) {
    Gens d = delta_relative_iter(M.patches[0].ideals[i], M.patches[0].w, P.delta_times);
    out.push_back(io::gens_json(d, M.chart(0)));
    rep += "Delta^" + std::to_string(P.delta_times) + " pair " + std::to_string(i + 1) + ": " + join(out.back()) + "\n";
  }
  j["times"] = P.delta_times;
  j["delta"] = out;
  return {j, rep};
}

Outcome cmd_blowup(const io::Problem& P, const Settings&) {
  const MultiIdeal& M = need_object(P);
  const auto& center = need_center(P);
  int v = P.pair.value_or(0);
  int before = M.atlas->chart_count();
  int exc = M.atlas->add_hypersurface("E" + std::to_string(M.atlas->hyp_count() + 1), true, 1);
  MultiIdeal T = M.ring.artinian() ? transform_multiideal_A(M, {{0, center}}, exc, v) : [&] {
    if (!permissible_center_check(M, 0, center)) throw NotPermissible("center is not permissible");
    return transform_multiideal(M, {{0, center}}, exc);
  }();
  json j = io::header("mires-report", "blowup");
  json charts = json::array();
  for (int id = before; id < M.atlas->chart_count(); ++id) charts.push_back(io::chart_json(*M.atlas, id));
  j["charts_added"] = charts;
  j["transform"] = io::object_json(T);
  std::string rep;
  for (std::size_t k = 0; k < T.patches.size(); ++k) {
    rep += "chart " + std::to_string(T.patches[k].chart) + ":";
    for (auto& I : j["transform"]["patches"][k]["ideals"]) rep += " " + join(I);
    rep += "\n";
  }
  return {j, rep};
}

Outcome cmd_gamma(const io::Problem& P, const Settings&) {
  MonomialForm F = need_monomial(P);
  json j = io::header("mires-report", "gamma");
  GammaValue g;
  if (P.stratum) {
    g = gamma(F, *P.stratum);
    j["stratum"] = to_one_based(*P.stratum);
  } else {
    auto c = canonical_monomial_center(F);
    g = c.value;
    j["center"] = to_one_based(c.hyps);
  }
  j["gamma"] = io::gamma_json(g);
  return {j, to_string(g) + "\n"};
}

Outcome cmd_resolve_monomial(const io::Problem& P, const Settings& st) {
  MonomialForm F = need_monomial(P), fin;
  auto steps = resolve_monomial(F, st.step_cap, &fin);
  json j = io::monomial_trace_json(F, steps, fin);
  std::string rep;
  for (std::size_t k = 0; k < steps.size(); ++k)
    rep += "step " + std::to_string(k) + ": center " + json(to_one_based(steps[k].center)).dump() + " Gamma " +
           to_string(steps[k].value) + "\n";
  rep += "resolved, steps: " + std::to_string(steps.size()) + "\n";
  return {j, rep};
}

Outcome equiresolve_outcome(const MultiIdeal& M, const ResolveOptions& opt) {
  auto r = equiresolve_attempt(M, opt);
  json j = io::equiresolve_json(r);
  std::string rep;
  for (auto& s : r.steps) {
    rep += "step " + std::to_string(s.index) + ":";
    for (auto& c : io::centers_json(*r.atlas, s.centers)) rep += " chart " + c["chart"].dump() + " " + join(c["coords"]);
    if (s.v >= 0) rep += " pair " + std::to_string(s.v + 1) + " " + s.via;
    rep += "\n";
  }
  rep += r.equiresolved ? "equiresolved\n" : "not equiresolved: " + r.diagnostic + "\n";
  return {j, rep};
}

Outcome cmd_resolve(const io::Problem& P, const Settings& st) {
  ResolveOptions opt;
  opt.step_cap = st.step_cap;
  opt.chart_limit = st.chart_limit;
  Trace tr;
  if (!P.atlas) {
    tr = resolve_monomial_input(monomial_multiideal(need_monomial(P)), opt);
  } else if (P.object.ring.artinian()) {
    return equiresolve_outcome(P.object, opt);
  } else {
    tr = resolve(P.object, opt);
  }
  json j = io::trace_json(tr);
  std::string rep;
  for (auto& s : tr.steps) {
    rep += "step " + std::to_string(s.index) + " [" + s.phase + "/" + s.kind + "] h = " + to_string(s.value) + ":";
    for (auto& c : io::centers_json(*tr.atlas, s.centers)) rep += " chart " + c["chart"].dump() + " " + join(c["coords"]);
    rep += "\n";
  }
  rep += std::string(tr.resolved ? "resolved" : "unresolved") + ", steps: " + std::to_string(tr.steps.size()) + ", charts: " +
         std::to_string(tr.atlas->chart_count()) + "\n";
  return {j, rep};
}

Outcome cmd_artinian_check(const io::Problem& P, const Settings& st) {
  const MultiIdeal& M = need_object(P);
  if (!P.center) {
    ResolveOptions opt;
    opt.step_cap = st.step_cap;
    opt.chart_limit = st.chart_limit;
    return equiresolve_outcome(M, opt);
  }
  const auto& C = *P.center;
  json j = io::header("mires-report", "artinian-check");
  j["center"] = io::coord_names(M.chart(0), C);
  std::string rep = "center V" + join(j["center"]) + "\n";
  json pairs = json::array();
  auto base = v_permissible_check(M, 0, C, 0);
  for (int i = 0; i < M.npairs(); ++i) {
    auto r = v_permissible_check(M, 0, C, i);
    pairs.push_back({{"pair", i + 1},
                     {"mark", M.marks[i]},
                     {"order", r.nu[i]},
                     {"fiber_order", r.nu_fiber[i]},
                     {"v_permissible", r.ok()}});
    rep += "pair " + std::to_string(i + 1) + ": order " + std::to_string(r.nu[i]) + ", fiber order " +
           std::to_string(r.nu_fiber[i]) + ", mark " + std::to_string(M.marks[i]) + "\n";
  }
  j["pairs"] = pairs;
  int v = permissible_index(M, 0, C);
  j["permissible"] = v >= 0;
  if (v >= 0) {
    j["v"] = v + 1;
    rep += "C is a permissible center (v = " + std::to_string(v + 1) + ")\n";
  } else if (!base.orders) {
    j["failing_pair"] = base.failing_pair + 1;
    rep += "C is not a permissible center: pair " + std::to_string(base.failing_pair + 1) + " has order " +
           std::to_string(base.nu[base.failing_pair]) + " < " + std::to_string(M.marks[base.failing_pair]) + "\n";
  } else {
    rep += "C is not a permissible center: no pair has equal fiber order\n";
  }
  if (M.npairs() > 1) {
    auto B = associated_basic_object(M);
    bool ok = v_permissible_check(B, 0, C, 0).ok();
    j["basic_object"] = {{"mark", B.marks[0]}, {"ideal", io::gens_json(B.patches[0].ideals[0], B.chart(0))}, {"permissible", ok}};
    rep += std::string("associated basic object (mark ") + std::to_string(B.marks[0]) + "): C is " +
           (ok ? "" : "not ") + "a permissible center\n";
  }
  if (P.hypersurface) {
    auto lr = inductive_center_lift(M, 0, *P.hypersurface, C);
    j["lift"] = {{"hypotheses", lr.hypotheses},
                 {"nu_delta", lr.nu_delta},
                 {"power_series", lr.power_series},
                 {"direct", lr.direct},
                 {"ok", lr.ok()}};
    rep += std::string("lift through Z: hypotheses ") + (lr.hypotheses ? "hold" : "fail") + ", direct check " +
           (lr.direct ? "passes" : "fails") + "\n";
  }
  return {j, rep};
}

Outcome cmd_equiv(const io::Problem& P, const Settings& st) {
  const MultiIdeal& M = need_object(P);
  MultiIdeal other = P.other ? *P.other : associated_basic_object(M);
  auto r = equiv_spotcheck(M, other, P.script, 20, st.seed);
  json j = io::header("mires-report", "equiv-spotcheck");
  j["result"] = equiv_name(r);
  j["script_length"] = P.script.size();
  return {j, std::string(equiv_name(r)) + "\n"};
}

void emit(const Outcome& o, const std::string& mode) {
  if (mode == "report" || mode == "both") std::cout << o.report;
  if (mode == "trace" || mode == "both") std::cout << o.doc.dump(1) << "\n";
}

json error_doc(const std::string& command, const std::string& type, const std::string& message) {
  json j = io::header("mires-error", command);
  j["error"] = type;
  j["message"] = message;
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multi-ideal resolution engine"};
  app.require_subcommand(1);
  Settings st;
  std::string emit_mode = "report";
  app.add_option("--chart-limit", st.chart_limit, "maximum number of charts")->check(CLI::PositiveNumber);
  app.add_option("--step-cap", st.step_cap, "maximum number of blow-ups")->check(CLI::PositiveNumber);
  app.add_option("--seed", st.seed, "seed for sampled points");
  app.add_option("--emit", emit_mode, "output: trace, report or both")
      ->check(CLI::IsMember({"trace", "report", "both"}));

  using Handler = Outcome (*)(const io::Problem&, const Settings&);
  const std::vector<std::tuple<std::string, std::string, Handler>> commands = {
      {"sing", "singular locus of the object", cmd_sing},
      {"order", "orders at a point and along a center", cmd_order},
      {"delta", "iterated Delta of each pair", cmd_delta},
      {"blowup", "transform with a permissible center", cmd_blowup},
      {"gamma", "Gamma of a monomial form", cmd_gamma},
      {"resolve-monomial", "resolve a monomial form", cmd_resolve_monomial},
      {"resolve", "run the resolution algorithm", cmd_resolve},
      {"artinian-check", "permissibility over an artinian base", cmd_artinian_check},
      {"equiv-spotcheck", "sampled equivalence check along a script", cmd_equiv},
  };
  std::string file;
  Handler chosen = nullptr;
  std::string chosen_name;
  for (auto& [name, help, fn] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("problem", file, "problem file, - for stdin")->required();
    sub->callback([&, fn = fn, name = name] {
      chosen = fn;
      chosen_name = name;
    });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    auto P = io::parse_problem_text(read_input(file));
    emit(chosen(P, st), emit_mode);
    return 0;
  } catch (const InputError& e) {
    std::cerr << error_doc(chosen_name, "InputError", e.what()).dump(1) << "\n";
    return 1;
  } catch (const UnsupportedLocus& e) {
    std::cout << error_doc(chosen_name, "UnsupportedLocus", e.what()).dump(1) << "\n";
  } catch (const NotNice& e) {
    std::cout << error_doc(chosen_name, "NotNice", e.what()).dump(1) << "\n";
  } catch (const NonTermination& e) {
    std::cout << error_doc(chosen_name, "NonTermination", e.what()).dump(1) << "\n";
  } catch (const NotPermissible& e) {
    json j = error_doc(chosen_name, "NotPermissible", e.what());
    if (e.pair >= 0) j["pair"] = e.pair + 1;
    std::cout << j.dump(1) << "\n";
  } catch (const Error& e) {
    std::cout << error_doc(chosen_name, "Error", e.what()).dump(1) << "\n";
  }
  return 2;
}
