#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "resolution.hpp"

namespace mires {

// multi-ideals over Q[eps]/(eps^m) use MultiIdeal with an artinian ring

inline MultiIdeal fiber(const MultiIdeal& M) { return fiber_multiideal(M); }

inline Gens fiber_gens(const Gens& gens) {
  Gens out;
  for (auto& g : gens) out.push_back(g.ring().artinian() ? to_field(g) : g);
  return out;
}

struct VPermissibility {
  bool normal_crossings = false;
  bool orders = false;       // nu(I_i, C) >= b_i for every i
  bool fiber_equal = false;  // nu(I_v^(0), C^(0)) = nu(I_v, C) >= b_v
  int failing_pair = -1;     // first pair (0-based) with nu(I_i, C) < b_i
  std::vector<int> nu, nu_fiber;
  bool ok() const { return normal_crossings && orders && fiber_equal; }
};

// conditions (a), (b), (c) for the pair index v (0-based) at an aligned center
inline VPermissibility v_permissible_check(const MultiIdeal& M, int patch, const std::vector<int>& center, int v) {
  if (v < 0 || v >= M.npairs()) throw InputError("pair index out of range");
  const Patch& P = M.patches.at(patch);
  const Chart& c = M.chart(patch);
  for (int i : center)
    if (i < 0 || i >= c.nvars()) throw InputError("center coordinate out of range");
  auto full = with_w(center, P.w);
  std::vector<int> hyps;
  for (auto& [h, k] : M.present(patch)) hyps.push_back(h);
  VPermissibility r;
  r.normal_crossings = transversal_check(c, full, hyps);
  r.orders = true;
  for (int i = 0; i < M.npairs(); ++i) {
    r.nu.push_back(nu_along(P.ideals[i], full, P.w));
    r.nu_fiber.push_back(nu_along(fiber_gens(P.ideals[i]), full, P.w));
    if (r.nu.back() < M.marks[i] && r.orders) {
      r.orders = false;
      r.failing_pair = i;
    }
  }
  r.fiber_equal = r.nu_fiber[v] == r.nu[v] && r.nu[v] >= M.marks[v];
  return r;
}

// index of a pair for which the center is v-permissible, or -1
inline int permissible_index(const MultiIdeal& M, int patch, const std::vector<int>& center) {
  for (int v = 0; v < M.npairs(); ++v)
    if (v_permissible_check(M, patch, center, v).ok()) return v;
  return -1;
}

// Delta(I/S): generators and their partials in the chart coordinates, which
// are A-regular parameters; eps is a constant
inline Gens delta_relative(const Gens& gens, const std::vector<int>& w = {}) { return delta(gens, w); }

inline Gens delta_relative_iter(const Gens& gens, const std::vector<int>& w, int j) { return delta_iter(gens, w, j); }

inline MultiIdeal coefficient_multiideal_A(const MultiIdeal& M) { return coefficient_multiideal(M); }

// Z = {x_z = 0} on each patch must lie in Delta^(b_v - 1)(I_v / S) for some pair v
inline bool adapted_over_A(const MultiIdeal& M, int patch, int z) {
  const Patch& P = M.patches.at(patch);
  const Chart& c = M.chart(patch);
  if (in_set(P.w, z)) return false;
  if (auto h = c.hyp_at(z); h && in_set(M.E, *h)) return false;
  for (int i = 0; i < M.npairs(); ++i)
    if (member(c.var(z), delta_relative_iter(P.ideals[i], P.w, M.marks[i] - 1))) return true;
  return false;
}

inline MultiIdeal inductive_multiideal_A(const MultiIdeal& M, const std::vector<int>& z) {
  if (z.size() != M.patches.size()) throw InputError("one hypersurface coordinate per patch expected");
  for (std::size_t k = 0; k < z.size(); ++k)
    if (z[k] >= 0 && !adapted_over_A(M, static_cast<int>(k), z[k]))
      throw NotNice("hypersurface is not adapted over the base on chart " + std::to_string(M.patches[k].chart));
  return inductive_multiideal(M, z);
}

struct LiftReport {
  bool normal_crossings = false;
  std::vector<int> nu_delta;  // nu(Delta^(i)(I/S)|Z, C), i = 0 .. b-1
  bool hypotheses = false;
  bool power_series = false;  // nu(a_q, C) >= b - q for the z-coefficients a_q, q < b
  int nu = 0, nu_fiber = 0;   // nu(I, C) and nu(I^(0), C^(0))
  bool direct = false;        // C is a permissible center of the basic object
  bool ok() const { return hypotheses && direct; }
  bool contradicts() const { return hypotheses && !direct; }
};

// coefficient of z^q in g, as a polynomial not involving z
inline Poly z_coefficient(const Poly& g, int z, int q) {
  Poly r(g.nvars(), g.ring());
  for (auto& [e, c] : g.terms())
    if (e[z] == q) {
      Exps f = e;
      f[z] = 0;
      r.add_term(f, c);
    }
  return r;
}

// the hypotheses of the lifting proposition for C inside Z = {x_z = 0}, and an
// independent check that C is a permissible center of the basic object B
inline LiftReport inductive_center_lift(const MultiIdeal& B, int patch, int z, const std::vector<int>& center) {
  if (B.npairs() != 1) throw InputError("lifting is stated for basic objects");
  const Patch& P = B.patches.at(patch);
  auto full = with_w(center, P.w);
  if (!in_set(full, z)) throw InputError("center is not inside Z");
  if (!adapted_over_A(B, patch, z)) throw NotNice("Z is not adapted over the base");
  int b = B.marks[0];
  std::vector<int> hyps;
  for (auto& [h, k] : B.present(patch)) hyps.push_back(h);
  LiftReport r;
  r.normal_crossings = transversal_check(B.chart(patch), full, hyps);
  r.hypotheses = r.normal_crossings;
  Gens D = P.ideals[0];
  for (int i = 0; i < b; ++i) {
    if (i > 0) D = delta_relative(D, P.w);
    int nu = nu_along(restrict_to(D, z), full, P.w);
    r.nu_delta.push_back(nu);
    if (nu < b - i) r.hypotheses = false;
  }
  std::vector<int> rest;
  for (int c : full)
    if (c != z && !in_set(P.w, c)) rest.push_back(c);
  r.power_series = true;
  for (auto& g : P.ideals[0])
    for (int q = 0; q < b; ++q)
      if (order_along_coords(z_coefficient(g, z, q), rest) < b - q) r.power_series = false;
  auto vp = v_permissible_check(B, patch, center, 0);
  r.nu = vp.nu[0];
  r.nu_fiber = vp.nu_fiber[0];
  r.direct = vp.ok();
  return r;
}

struct DirectionWitness {
  int nu_B = 0, nu_B_fiber = 0;          // nu(I, C), nu(I^(0), C^(0))
  bool B_permissible = false;
  std::vector<int> nu_BZ, nu_BZ_fiber;   // per pair of B_Z
  std::vector<bool> BZ_v_permissible;    // per pair index v
  std::vector<std::string> J;            // generators of the B_Z pairs
};

// C = {x = z = 0} is a center for B = ((z^2 + eps x^2, z^3 + x^3), 2) over
// Q[eps]/(eps^2) but not for its inductive object on Z = {z = 0}
inline DirectionWitness direction_failure_witness(CoefRing ring = CoefRing::truncated(2)) {
  std::vector<std::string> names = {"x", "z"};
  auto atlas = std::make_shared<Atlas>();
  int root = atlas->add_root(names, ring);
  auto P = [&](const std::string& s) { return to_ring(parse_poly(s, names, CoefRing::truncated(2)), ring); };
  MultiIdeal B = make_multiideal(atlas, root, {}, {}, {{{P("z^2 + eps*x^2"), P("z^3 + x^3")}, 2}});
  std::vector<int> C = {0, 1};
  DirectionWitness w;
  auto vp = v_permissible_check(B, 0, C, 0);
  w.nu_B = vp.nu[0];
  w.nu_B_fiber = vp.nu_fiber[0];
  w.B_permissible = vp.ok();
  MultiIdeal BZ = inductive_multiideal_A(B, {1});
  for (int v = 0; v < BZ.npairs(); ++v) {
    auto r = v_permissible_check(BZ, 0, C, v);
    w.nu_BZ.push_back(r.nu[v]);
    w.nu_BZ_fiber.push_back(r.nu_fiber[v]);
    w.BZ_v_permissible.push_back(r.ok());
    std::string s;
    for (auto& g : BZ.patches[0].ideals[v]) s += (s.empty() ? "" : ", ") + to_string(g, names);
    w.J.push_back("(" + s + ")");
  }
  return w;
}

// transform with a v-permissible center on each listed patch
inline MultiIdeal transform_multiideal_A(const MultiIdeal& M, const std::map<int, std::vector<int>>& centers, int exc,
                                         int v) {
  for (auto& [patch, center] : centers) {
    auto r = v_permissible_check(M, patch, center, v);
    if (!r.orders)
      throw NotPermissible("center is not permissible for pair " + std::to_string(r.failing_pair + 1), r.failing_pair);
    if (!r.normal_crossings) throw NotPermissible("center does not have normal crossings with E");
    if (!r.fiber_equal)
      throw NotPermissible("order along the center differs from the fiber order for pair " + std::to_string(v + 1), v);
  }
  return transform_multiideal(M, centers, exc);
}

// chart ids from the root down to the chart
inline std::vector<int> chart_lineage(const Atlas& atlas, int chart) {
  std::vector<int> out;
  for (int c = chart; c >= 0; c = atlas.chart(c).parent) out.push_back(c);
  std::reverse(out.begin(), out.end());
  return out;
}

// move patches along chart changes (coordinate changes, translations,
// localizations) so that they sit on the given charts, in that order
inline void follow_charts(MultiIdeal& M, const std::vector<int>& targets) {
  std::vector<Patch> out;
  for (int t : targets) {
    auto chain = chart_lineage(*M.atlas, t);
    const Patch* src = nullptr;
    std::size_t at = 0;
    for (std::size_t k = chain.size(); k-- > 0 && !src;)
      for (auto& P : M.patches)
        if (P.chart == chain[k]) {
          src = &P;
          at = k;
          break;
        }
    if (!src) throw Error("no patch for chart " + std::to_string(t));
    Patch Q = *src;
    for (std::size_t k = at + 1; k < chain.size(); ++k) {
      const Chart& c = M.atlas->chart(chain[k]);
      if (c.kind == ChartKind::blowup) throw Error("patch would have to cross a blow-up");
      for (auto& I : Q.ideals)
        for (auto& g : I) g = restrict_zero(substitute(g, c.parent_map), Q.w);
    }
    Q.chart = t;
    out.push_back(std::move(Q));
  }
  M.patches = std::move(out);
}

struct EquiStep {
  int index = 0;
  std::map<int, std::vector<int>> centers;  // chart -> coordinates
  int v = -1;                               // pair index used (0-based)
  std::string via;                          // direct | inductive
  int exceptional = -1;
};

struct EquiresolveReport {
  std::vector<EquiStep> steps;
  bool equiresolved = false;
  int failed_step = -1;
  int failed_pair = -1;  // 1-based, when one pair is to blame
  std::string diagnostic;
  std::shared_ptr<Atlas> atlas;
  MultiIdeal final_object;
};

// replay the algorithmic centers of the fiber over A. Centers coming from the
// inductive level of a basic object are also run through the lifting check.
inline EquiresolveReport equiresolve_attempt(const MultiIdeal& input, const ResolveOptions& opt = {}) {
  EquiresolveReport rep;
  MultiIdeal A = input;
  A.atlas = std::make_shared<Atlas>(*input.atlas);
  CoefRing chart_ring = A.chart(0).ring;
  MultiIdeal F = fiber(A);
  F.atlas = std::make_shared<Atlas>(A.atlas->base_changed(CoefRing::field()));
  Resolver R(F, opt);
  rep.atlas = A.atlas;
  while (!R.resolved()) {
    if (R.step() >= opt.step_cap)
      throw NonTermination("equiresolution exceeded the step cap of " + std::to_string(opt.step_cap));
    Plan plan = R.plan();
    A.atlas->extend_from(*R.atlas(), chart_ring);
    std::vector<int> charts;
    for (auto& P : R.levels()[0].S.cur.patches) charts.push_back(P.chart);
    follow_charts(A, charts);
    EquiStep st;
    st.index = R.step();
    st.centers = plan.centers;
    std::map<int, std::vector<int>> by_patch;
    for (auto& [chart, coords] : plan.centers) {
      int k = patch_on(A, chart);
      if (k < 0) throw Error("center on a chart without a patch");
      by_patch[k] = coords;
    }
    // one pair index for the whole step
    int v = -1;
    for (int cand = 0; cand < A.npairs() && v < 0; ++cand) {
      bool all = true;
      for (auto& [k, coords] : by_patch)
        if (!v_permissible_check(A, k, coords, cand).ok()) all = false;
      if (all) v = cand;
    }
    if (v < 0) {
      rep.failed_step = st.index;
      for (auto& [k, coords] : by_patch) {
        auto r = v_permissible_check(A, k, coords, 0);
        if (!r.orders) {
          rep.failed_pair = r.failing_pair + 1;
          rep.diagnostic = "step " + std::to_string(st.index) + ": center on chart " +
                           std::to_string(A.patches[k].chart) + " is not permissible for pair " +
                           std::to_string(rep.failed_pair) + " (order " + std::to_string(r.nu[r.failing_pair]) +
                           " < mark " + std::to_string(A.marks[r.failing_pair]) + ")";
          break;
        }
        if (!r.normal_crossings) {
          rep.diagnostic = "step " + std::to_string(st.index) + ": center does not have normal crossings with E";
          break;
        }
      }
      if (rep.diagnostic.empty())
        rep.diagnostic = "step " + std::to_string(st.index) + ": order along the center differs from the fiber order for every pair";
      rep.steps.push_back(st);
      rep.final_object = A;
      return rep;
    }
    st.v = v;
    st.via = "direct";
    if (plan.depth > 0 && A.npairs() == 1 && R.levels().size() > 1) {
      bool lifted = true;
      for (auto& [k, coords] : by_patch) {
        int cp = patch_on(R.levels()[1].S.cur, A.patches[k].chart);
        if (cp < 0) {
          lifted = false;
          break;
        }
        int z = -1;
        for (int c : R.levels()[1].S.cur.patches[cp].w)
          if (!in_set(A.patches[k].w, c)) z = c;
        auto full = with_w(coords, A.patches[k].w);
        if (z < 0 || !in_set(full, z) || !adapted_over_A(A, k, z)) {
          lifted = false;
          break;
        }
        auto lr = inductive_center_lift(A, k, z, coords);
        if (lr.contradicts()) throw Error("lifting check contradicted at step " + std::to_string(st.index));
        if (!lr.ok()) lifted = false;
      }
      if (lifted) st.via = "inductive";
    }
    R.apply(plan);
    A.atlas->extend_from(*R.atlas(), chart_ring);
    st.exceptional = R.last_exceptional();
    A = transform_multiideal_A(A, by_patch, st.exceptional, v);
    rep.steps.push_back(st);
  }
  MultiIdeal fin = fiber(A);
  rep.equiresolved = sing_empty(fin);
  if (!rep.equiresolved) rep.diagnostic = "fiber of the final object is still singular";
  rep.final_object = A;
  return rep;
}

}  // namespace mires
