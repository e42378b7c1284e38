#pragma once

#include <compare>
#include <optional>

#include "invariants.hpp"
#include "monomial.hpp"

namespace mires {

// one component of a resolution value
struct LambdaItem {
  enum class Kind { gamma, t, infinity } kind = Kind::t;
  TValue t;
  GammaValue gamma;
  int dim = 0;  // for infinity

  static LambdaItem of_t(const TValue& v) { return {Kind::t, v, {}, 0}; }
  static LambdaItem of_gamma(const GammaValue& g) { return {Kind::gamma, {}, g, 0}; }
  static LambdaItem infinity(int d) { return {Kind::infinity, {}, {}, d}; }

  std::strong_ordering operator<=>(const LambdaItem& o) const {
    if (kind != o.kind) return static_cast<int>(kind) <=> static_cast<int>(o.kind);
    switch (kind) {
      case Kind::t: return t <=> o.t;
      case Kind::gamma: return gamma <=> o.gamma;
      case Kind::infinity: return dim <=> o.dim;
    }
    return std::strong_ordering::equal;
  }
  bool operator==(const LambdaItem& o) const { return (*this <=> o) == 0; }
};

// value in the set of dimension d: infinity, a Gamma value, or (t, tail);
// stored flat, outermost component first. Order: infinity > tuples > Gamma.
struct LambdaValue {
  std::vector<LambdaItem> items;

  std::strong_ordering operator<=>(const LambdaValue& o) const {
    std::size_t n = std::min(items.size(), o.items.size());
    for (std::size_t k = 0; k < n; ++k) {
      auto c = items[k] <=> o.items[k];
      if (c != 0) return c;
    }
    return items.size() <=> o.items.size();
  }
  bool operator==(const LambdaValue& o) const { return (*this <=> o) == 0; }
};

inline std::string to_string(const LambdaItem& it) {
  switch (it.kind) {
    case LambdaItem::Kind::t: return to_string(it.t);
    case LambdaItem::Kind::gamma: return to_string(it.gamma);
    case LambdaItem::Kind::infinity: return "inf_" + std::to_string(it.dim);
  }
  return "?";
}

inline std::string to_string(const LambdaValue& v, std::size_t from = 0) {
  if (from >= v.items.size()) return "()";
  if (from + 1 == v.items.size()) return to_string(v.items[from]);
  return "(" + to_string(v.items[from]) + ", " + to_string(v, from + 1) + ")";
}

inline LambdaValue prepend(const TValue& t, const LambdaValue& tail) {
  LambdaValue v;
  v.items.push_back(LambdaItem::of_t(t));
  v.items.insert(v.items.end(), tail.items.begin(), tail.items.end());
  return v;
}

struct TraceStep;

struct ResolveOptions {
  int step_cap = 64;
  int chart_limit = 20000;
  // adapted hypersurface used at the top level: explicit equation, or the
  // index into the candidate list
  std::optional<Poly> adapted_override;
  std::size_t adapted_choice = 0;
  std::function<void(const TraceStep&)> on_step;  // called after each blow-up
};

// one level of the maximal-contact recursion
struct Level {
  ResolutionState S;
  int dim = 0;
  std::optional<TValue> plateau;  // max t when the level below was built
  // filled by planning
  std::optional<TValue> maxt;
  bool monomial = false;
  std::map<int, int> n1_z;  // chart -> coordinate of the codim-1 part of Max t
};

struct Plan {
  LambdaValue value;
  std::map<int, std::vector<int>> centers;  // chart id -> center coordinates
  std::vector<int> center_hyps;             // monomial phase: E indices
  std::string kind;                         // monomial | codim1 | inductive | line
  int depth = 0;                            // level that chose the center
};

struct TraceStep {
  int index = 0;
  std::string phase;  // t-sequence | monomial
  std::string kind;
  int depth = 0;
  LambdaValue value;
  std::map<int, std::vector<int>> centers;
  std::vector<int> center_hyps;
  int exceptional = -1;
  int charts_before = 0;
  int charts_after = 0;
};

struct Trace {
  std::vector<TraceStep> steps;
  bool resolved = false;
  std::shared_ptr<Atlas> atlas;
  MultiIdeal final_object;
};

// monomial form of a state from its ledger: hypersurfaces are indexed by their
// position in E; strata are the hypersurface sets met by W in some chart
inline MonomialForm monomial_form_of(const ResolutionState& S) {
  const MultiIdeal& M = S.cur;
  MonomialForm F;
  F.nhyps = static_cast<int>(M.E.size());
  for (int i = 0; i < M.npairs(); ++i) {
    MonomialPair p;
    p.b = M.marks[i];
    for (int h : M.E) {
      int a = 0;
      for (std::size_t k = 0; k < M.patches.size(); ++k) {
        if (!M.chart(static_cast<int>(k)).coord_of(h)) continue;
        auto it = S.ledger[k][i].exps.find(h);
        if (it != S.ledger[k][i].exps.end()) a = it->second;
        break;
      }
      p.exps.push_back(a);
    }
    F.pairs.push_back(p);
  }
  for (std::size_t k = 0; k < M.patches.size(); ++k) {
    auto pres = M.present(static_cast<int>(k));
    const Chart& c = M.chart(static_cast<int>(k));
    const auto& w = M.patches[k].w;
    if (pres.size() > 16) throw UnsupportedLocus("too many hypersurfaces through one chart");
    for (unsigned mask = 0; mask < (1u << pres.size()); ++mask) {
      Stratum T;
      std::vector<int> zero = w;
      for (std::size_t b = 0; b < pres.size(); ++b)
        if ((mask >> b) & 1) {
          T.push_back(static_cast<int>(std::find(M.E.begin(), M.E.end(), pres[b].first) - M.E.begin()));
          zero.push_back(pres[b].second);
        }
      if (restrict_zero(c.unit_product(), zero).is_zero()) continue;
      std::sort(T.begin(), T.end());
      F.strata.insert(T);
    }
  }
  return F;
}

// E indices of the hypersurfaces through a point of a patch
inline Stratum stratum_at(const MultiIdeal& M, int patch, const Point& p) {
  Stratum T;
  const Chart& c = M.chart(patch);
  for (std::size_t i = 0; i < M.E.size(); ++i) {
    auto k = c.coord_of(M.E[i]);
    if (k && p[*k] == 0) T.push_back(static_cast<int>(i));
  }
  return T;
}

inline int patch_on(const MultiIdeal& M, int chart) {
  for (std::size_t k = 0; k < M.patches.size(); ++k)
    if (M.patches[k].chart == chart) return static_cast<int>(k);
  return -1;
}

// generators of L: products over the n-subsets of E- coordinates of the sums
// of their ideals; n = 0 gives the zero ideal
inline Gens l_gens(const ResolutionState& S, int patch, int n) {
  const Chart& c = S.cur.chart(patch);
  int nv = c.nvars();
  if (n == 0) return {Poly(nv, S.cur.ring)};
  auto coords = e_minus_coords(S, patch);
  std::vector<std::vector<int>> subs;
  subsets_of_size(coords, n, subs, kSubsequenceCap);
  std::set<Exps> prods = {Exps(nv, 0)};
  for (auto& T : subs) {
    std::set<Exps> next;
    for (auto& e : prods)
      for (int v : T) {
        Exps f = e;
        ++f[v];
        next.insert(f);
        if (next.size() > kSubsequenceCap) throw UnsupportedLocus("L exceeds the product cap");
      }
    prods = std::move(next);
  }
  Gens out;
  for (auto& e : prods) out.push_back(Poly::monomial(e, 1, S.cur.ring));
  return out;
}

// generators of Max(t) on a patch
inline Gens max_t_gens(const ResolutionState& S, int patch, const MaxT& mt) {
  Gens g = mt.omega_locus.at(patch);
  Gens l = l_gens(S, patch, mt.value.n);
  g.insert(g.end(), l.begin(), l.end());
  return g;
}

class Resolver {
 public:
  Resolver(const MultiIdeal& input, ResolveOptions opt = {}, bool monomial_input = false) : opt_(opt) {
    atlas_ = input.atlas;
    if (!is_nonzero(input)) throw InputError("resolution of a zero multi-ideal");
    if (input.ring.artinian()) throw InputError("the resolver works over the field; use the fiber");
    Level L;
    if (monomial_input) {
      L.S = make_monomial_state(input);
    } else if (input.npairs() > 1) {
      L.S = make_state(associated_basic_object(input));
    } else {
      L.S = make_state(input);
    }
    L.dim = L.S.cur.dim(0);
    levels_.push_back(std::move(L));
    step_ = 0;
  }

  const std::vector<Level>& levels() const { return levels_; }
  std::vector<Level>& levels_mut() { return levels_; }
  const std::shared_ptr<Atlas>& atlas() const { return atlas_; }
  int step() const { return step_; }
  int last_exceptional() const { return last_exc_; }

  bool resolved() const { return sing_empty(levels_[0].S.cur); }

  Plan plan() { return plan_level(0); }

  void apply(const Plan& plan) {
    int exc = atlas_->add_hypersurface("E" + std::to_string(step_ + 1), true, step_ + 1);
    last_exc_ = exc;
    for (auto& L : levels_) {
      std::map<int, std::vector<int>> centers;
      for (auto& [chart, coords] : plan.centers) {
        int p = patch_on(L.S.cur, chart);
        if (p >= 0) centers[p] = coords;
      }
      L.S = advance(L.S, centers, exc);
    }
    ++step_;
    if (atlas_->chart_count() > opt_.chart_limit) throw NonTermination("chart limit exceeded");
  }

  Trace run() {
    Trace tr;
    tr.atlas = atlas_;
    while (!resolved()) {
      if (step_ >= opt_.step_cap)
        throw NonTermination("resolution exceeded the step cap of " + std::to_string(opt_.step_cap));
      TraceStep ts;
      ts.index = step_;
      ts.charts_before = atlas_->chart_count();
      Plan p = plan();
      ts.phase = levels_[0].monomial ? "monomial" : "t-sequence";
      ts.kind = p.kind;
      ts.depth = p.depth;
      ts.value = p.value;
      ts.centers = p.centers;
      ts.center_hyps = p.center_hyps;
      apply(p);
      ts.exceptional = last_exc_;
      ts.charts_after = atlas_->chart_count();
      if (opt_.on_step) opt_.on_step(ts);
      tr.steps.push_back(std::move(ts));
    }
    tr.resolved = true;
    tr.final_object = levels_[0].S.cur;
    return tr;
  }

  // value of the current resolution function at a point of a level-0 patch;
  // plan() must have run for the current step
  LambdaValue h_at(int patch, const Point& p) const { return h_at_level(0, patch, p); }

  // the same for a point given in root coordinates (no blow-up in between)
  std::optional<LambdaValue> h_at_root(const Point& root_point) const {
    const MultiIdeal& M = levels_[0].S.cur;
    for (int k = 0; k < static_cast<int>(M.patches.size()); ++k) {
      auto chain = atlas_->lineage(M.patches[k].chart);
      std::optional<Point> q = root_point;
      for (std::size_t i = 1; i < chain.size() && q; ++i) q = atlas_->to_child(chain[i], *q);
      if (!q || !on_patch(M, k, *q)) continue;
      if (!sing_member_multi(M, k, *q)) return std::nullopt;
      return h_at_level(0, k, *q);
    }
    return std::nullopt;
  }

 private:
  void drop_below(int k) {
    if (static_cast<int>(levels_.size()) > k + 1) levels_.resize(k + 1);
    levels_[k].plateau.reset();
  }

  static Gens moved(const Gens& gens, const Chart& to, const std::vector<int>& w) {
    Gens out;
    for (auto& g : gens) out.push_back(restrict_zero(substitute(g, to.parent_map), w));
    return out;
  }

  // patches on chart `from` (levels 0..upto) are replaced by patches on charts
  // derived from it; hypersurfaces that leave the chart are folded into the
  // proper transforms
  void replace_chart(int upto, int from, const std::vector<int>& targets) {
    const Chart src = atlas_->chart(from);
    for (int j = 0; j <= upto && j < static_cast<int>(levels_.size()); ++j) {
      ResolutionState& S = levels_[j].S;
      int k = patch_on(S.cur, from);
      if (k < 0) continue;
      Patch P = S.cur.patches[k];
      auto row = S.ledger[k];
      std::vector<Patch> new_patches;
      std::vector<std::vector<ProperLedger>> new_rows;
      for (int t : targets) {
        const Chart& tc = atlas_->chart(t);
        if (restrict_zero(tc.unit_product(), P.w).is_zero()) continue;  // misses W
        Patch Q = P;
        auto r = row;
        for (auto& L : r) {
          for (auto& [h, a] : L.exps) {
            auto kc = src.coord_of(h);
            if (kc && !tc.coord_of(h) && a > 0) {
              Exps e(src.nvars(), 0);
              e[*kc] = a;
              for (auto& g : L.proper) g = g.times_monomial(e);
            }
          }
        }
        auto chain = atlas_->lineage(t);
        auto it = std::find(chain.begin(), chain.end(), from);
        if (it == chain.end()) throw Error("replace_chart: target not derived from the chart");
        for (++it; it != chain.end(); ++it) {
          const Chart& c = atlas_->chart(*it);
          for (auto& I : Q.ideals) I = moved(I, c, P.w);
          for (auto& L : r) L.proper = moved(L.proper, c, P.w);
        }
        Q.chart = t;
        new_patches.push_back(std::move(Q));
        new_rows.push_back(std::move(r));
      }
      S.cur.patches.erase(S.cur.patches.begin() + k);
      S.ledger.erase(S.ledger.begin() + k);
      S.cur.patches.insert(S.cur.patches.begin() + k, new_patches.begin(), new_patches.end());
      S.ledger.insert(S.ledger.begin() + k, new_rows.begin(), new_rows.end());
    }
  }

  Plan plan_level(int k) {
    Level& L = levels_[k];
    fill_history(L.S);
    L.n1_z.clear();
    L.maxt.reset();
    L.monomial = false;
    if (L.dim == 1) {
      drop_below(k);
      return plan_line(k);
    }
    Rat mw = L.S.max_omega_hist.at(L.S.step);
    if (mw == 0) {
      drop_below(k);
      L.monomial = true;
      return plan_monomial(k);
    }
    MaxT mt = max_t(L.S);
    L.maxt = mt.value;
    bool reuse = static_cast<int>(levels_.size()) > k + 1 && L.plateau && *L.plateau == mt.value;
    std::vector<int> z;
    for (int p = 0; p < static_cast<int>(levels_[k].S.cur.patches.size()); ++p) {
      z.resize(levels_[k].S.cur.patches.size(), -1);
      const ResolutionState& S = levels_[k].S;
      const Patch& P = S.cur.patches[p];
      if (locus_empty(max_t_gens(S, p, mt), w_view(S.cur.chart(p), P.w))) continue;
      if (reuse) {
        int cp = patch_on(levels_[k + 1].S.cur, P.chart);
        if (cp < 0) throw Error("plateau level does not cover Max(t)");
        for (int v : levels_[k + 1].S.cur.patches[cp].w)
          if (!in_set(P.w, v)) z[p] = v;
        continue;
      }
      int zc = choose_adapted(k, p, mt);
      z.resize(levels_[k].S.cur.patches.size(), -1);
      z[p] = zc;
    }
    if (!reuse) mt = max_t(levels_[k].S);  // coordinates may have changed
    // codim-1 part of Max(t): Z itself where Max(t) contains it
    const ResolutionState& S = levels_[k].S;
    Plan out;
    for (int p = 0; p < static_cast<int>(z.size()); ++p) {
      if (z[p] < 0) continue;
      Gens g = max_t_gens(S, p, mt);
      auto zw = with_w({z[p]}, S.cur.patches[p].w);
      bool all = true;
      for (auto& f : g)
        if (!restrict_zero(f, zw).is_zero()) all = false;
      if (all) {
        out.centers[S.cur.patches[p].chart] = zw;
        levels_[k].n1_z[S.cur.patches[p].chart] = z[p];
      }
    }
    if (!out.centers.empty()) {
      drop_below(k);
      out.value.items = {LambdaItem::of_t(mt.value), LambdaItem::infinity(levels_[k].dim - 1)};
      out.kind = "codim1";
      out.depth = k;
      return out;
    }
    if (!reuse) build_child(k, mt, z);
    Plan cp = plan_level(k + 1);
    cp.value = prepend(mt.value, cp.value);
    cp.center_hyps.clear();
    return cp;
  }

  // adapted hypersurface on a patch through Max(t); changes coordinates on
  // levels 0..k and returns the coordinate cutting it out. The patch may be
  // split first (p and mt are updated)
  int choose_adapted(int k, int& p, MaxT& mt) {
    ResolutionState& S = levels_[k].S;
    const Patch& P = S.cur.patches[p];
    int c = ceil_div(mt.value.omega * S.cur.marks[0]);
    const Chart& ch = S.cur.chart(p);
    Gens top = strip_unit_coords(delta_iter(S.ledger[p][0].proper, P.w, c - 1), ch);
    auto [minus, plus] = e_minus_split(S);
    AdaptedCandidate pick;
    if (auto it = pending_.find(P.chart); it != pending_.end()) {
      pick = it->second;
      pending_.erase(it);
    } else if (k == 0 && opt_.adapted_override) {
      auto cands = adapted_candidates({*opt_.adapted_override}, ch, P.w, plus);
      if (cands.empty()) throw NotNice("override is not a smooth hypersurface transversal to E");
      if (!member(*opt_.adapted_override, top)) throw NotNice("override is not in the top Delta ideal");
      pick = cands[0];
    } else {
      auto cands = adapted_candidates(top, ch, P.w, plus);
      std::size_t choice = k == 0 ? opt_.adapted_choice : 0;
      if (cands.size() <= choice) {
        // adapted for the pair (L, 1) instead: an E- member through all of Max(t)
        auto em = e_minus_coords(S, p);
        if (mt.value.n > 0 && static_cast<int>(em.size()) == mt.value.n && choice == 0) return em[0];
        if (split_off_hypersurface(k, p, mt, top)) return choose_adapted(k, p, mt);
        throw NotNice("no adapted hypersurface on chart " + std::to_string(P.chart));
      }
      pick = cands[choice];
    }
    int from = P.chart;
    int to = atlas_->triangular_change(from, pick.pivot, pick.eq);
    if (to != from) replace_chart(k, from, {to});
    return pick.pivot;
  }

  // generators divided by powers of coordinates that are units on the chart
  static Gens strip_unit_coords(Gens gens, const Chart& ch) {
    for (auto& u : ch.units) {
      if (u.terms().size() != 1) continue;
      for (int v = 0; v < ch.nvars(); ++v) {
        if (var_power_dividing(u, v) == 0) continue;
        for (auto& g : gens) {
          int e = var_power_dividing(g, v);
          Poly q;
          if (e > 0 && divide_by_var_power(g, v, e, q)) g = q;
        }
      }
    }
    return tidy(gens, ch.nvars(), ch.ring);
  }

  // Max(t) misses a hypersurface coordinate x_v that blocks an adapted
  // candidate: cover the patch by D(x_v) and D(eq), with V(x_v, eq) empty
  bool split_off_hypersurface(int k, int& p, MaxT& mt, const Gens& top) {
    ResolutionState& S = levels_[k].S;
    const Patch& P = S.cur.patches[p];
    const Chart& ch = S.cur.chart(p);
    Chart view = w_view(ch, P.w);
    Gens locus = max_t_gens(S, p, mt);
    auto [minus, plus] = e_minus_split(S);
    for (auto& [h, v] : ch.hyp_coord) {
      if (in_set(P.w, v)) continue;
      Gens with = locus;
      with.push_back(ch.var(v));
      if (!locus_empty(with, view)) continue;
      Chart loose = ch;
      loose.hyp_coord.erase(h);
      for (auto& cand : adapted_candidates(top, loose, P.w, plus)) {
        if (cand.pivot != v) continue;
        if (!locus_empty({ch.var(v), cand.eq}, view)) continue;
        int from = P.chart;
        int main = atlas_->localize(from, ch.var(v));
        int rest = atlas_->localize(from, cand.eq);
        replace_chart(k, from, {main, rest});
        p = patch_on(levels_[k].S.cur, main);
        if (p < 0) throw Error("split lost the Max(t) patch");
        mt = max_t(levels_[k].S);
        return true;
      }
    }
    return split_at_roots(k, p, mt, top) || split_off_cofactor(k, p, mt, top);
  }

  // a generator x_v * u with u a unit along Max(t): pieces D(u), where Z = {x_v = 0},
  // and D(x_v), with V(x_v, u) empty
  bool split_off_cofactor(int k, int& p, MaxT& mt, const Gens& top) {
    ResolutionState& S = levels_[k].S;
    const Patch& P = S.cur.patches[p];
    const Chart& ch = S.cur.chart(p);
    Chart view = w_view(ch, P.w);
    Gens locus = max_t_gens(S, p, mt);
    auto [minus, plus] = e_minus_split(S);
    for (const Poly& g : top)
      for (int v = 0; v < ch.nvars(); ++v) {
        if (in_set(P.w, v) || var_power_dividing(g, v) != 1) continue;
        if (auto h = ch.hyp_at(v); h && in_set(plus, *h)) continue;
        Poly u;
        if (!divide_by_var_power(g, v, 1, u)) continue;
        Gens with = locus;
        with.push_back(u);
        if (!locus_empty(with, view) || !locus_empty({ch.var(v), u}, view)) continue;
        int from = P.chart;
        Poly xv = ch.var(v);  // ch dangles once the atlas grows
        int main = atlas_->localize(from, u);
        int rest = atlas_->localize(from, xv);
        replace_chart(k, from, {main, rest});
        pending_[main] = {xv, v, false};
        p = patch_on(levels_[k].S.cur, main);
        if (p < 0) throw Error("split lost the Max(t) patch");
        mt = max_t(levels_[k].S);
        return true;
      }
    return false;
  }

  // a generator univariate in x_v with simple rational roots through Max(t):
  // one piece per such root r (Z = {x_v = r}), and the complement of those lines
  bool split_at_roots(int k, int& p, MaxT& mt, const Gens& top) {
    ResolutionState& S = levels_[k].S;
    const Patch& P = S.cur.patches[p];
    const Chart& ch = S.cur.chart(p);
    Chart view = w_view(ch, P.w);
    Gens locus = max_t_gens(S, p, mt);
    int n = ch.nvars();
    for (const Poly& g : top) {
      for (int v = 0; v < n; ++v) {
        if (in_set(P.w, v)) continue;
        bool univariate = depends_on(g, v);
        for (int i = 0; i < n && univariate; ++i)
          if (i != v && depends_on(g, i)) univariate = false;
        if (!univariate) continue;
        auto h = ch.hyp_at(v);
        if (h) {
          Gens with = locus;
          with.push_back(ch.var(v));
          if (!locus_empty(with, view)) continue;
        }
        std::vector<Rat> roots;
        bool simple = true;
        for (auto& [r, mult] : uni::rational_roots(uni::from_poly(g, v))) {
          Gens with = locus;
          with.push_back(ch.var(v) - Poly::constant(n, r, ch.ring));
          if (locus_empty(with, view)) continue;
          if (mult > 1) simple = false;
          roots.push_back(r);
        }
        if (!simple || roots.empty()) continue;
        auto line = [&](const Rat& r) { return ch.var(v) - Poly::constant(n, r, ch.ring); };
        int from = P.chart;
        Poly all = Poly::constant(n, 1, ch.ring);
        for (auto& r : roots) all = all * line(r);
        std::vector<Poly> cuts;
        for (std::size_t i = 0; i < roots.size(); ++i) {
          Poly f = h ? ch.var(v) : Poly::constant(n, 1, ch.ring);
          for (std::size_t j = 0; j < roots.size(); ++j)
            if (j != i) f = f * line(roots[j]);
          cuts.push_back(f);
        }
        std::vector<AdaptedCandidate> picks;
        for (auto& r : roots) picks.push_back({line(r), v, true});
        std::vector<int> pieces;
        for (auto& f : cuts) pieces.push_back(atlas_->localize(from, f));
        int rest = atlas_->localize(from, all);
        std::vector<int> targets = pieces;
        targets.push_back(rest);
        replace_chart(k, from, targets);
        for (std::size_t i = 1; i < pieces.size(); ++i) pending_[pieces[i]] = picks[i];
        pending_[pieces[0]] = picks[0];
        p = patch_on(levels_[k].S.cur, pieces[0]);
        if (p < 0) throw Error("split lost the Max(t) patch");
        mt = max_t(levels_[k].S);
        return true;
      }
    }
    return false;
  }

  void build_child(int k, const MaxT& mt, const std::vector<int>& z) {
    const ResolutionState& S = levels_[k].S;
    auto [minus, plus] = e_minus_split(S);
    int c = ceil_div(mt.value.omega * S.cur.marks[0]);
    MultiIdeal D;
    D.atlas = S.cur.atlas;
    D.ring = S.cur.ring;
    D.marks = {S.cur.marks[0], c, 1};
    D.E = plus;
    std::vector<int> zs;
    for (std::size_t p = 0; p < S.cur.patches.size(); ++p) {
      if (z[p] < 0) continue;
      Patch Q;
      Q.chart = S.cur.patches[p].chart;
      Q.w = S.cur.patches[p].w;
      Q.ideals = {S.cur.patches[p].ideals[0], S.ledger[p][0].proper, l_gens(S, static_cast<int>(p), mt.value.n)};
      D.patches.push_back(std::move(Q));
      zs.push_back(z[p]);
    }
    MultiIdeal Dz = inductive_multiideal(D, zs);
    Level child;
    child.S = make_state(associated_basic_object(Dz));
    child.dim = levels_[k].dim - 1;
    levels_[k].plateau = mt.value;
    levels_.resize(k + 1);
    levels_.push_back(std::move(child));
  }

  Plan plan_monomial(int k) {
    const ResolutionState& S = levels_[k].S;
    MonomialForm F = monomial_form_of(S);
    auto mc = canonical_monomial_center(F);
    Plan out;
    out.kind = "monomial";
    out.depth = k;
    out.value.items.push_back(LambdaItem::of_gamma(mc.value));
    out.center_hyps = mc.hyps;
    for (std::size_t p = 0; p < S.cur.patches.size(); ++p) {
      const Chart& c = S.cur.chart(static_cast<int>(p));
      std::vector<int> coords;
      bool all = true;
      for (int i : mc.hyps) {
        auto kc = c.coord_of(S.cur.E[i]);
        if (!kc) all = false;
        else coords.push_back(*kc);
      }
      if (!all) continue;
      auto full = with_w(coords, S.cur.patches[p].w);
      if (restrict_zero(c.unit_product(), full).is_zero()) continue;
      out.centers[c.id] = full;
    }
    return out;
  }

  LambdaItem line_value(const ResolutionState& S, int p, const Point& pt) const {
    Rat w = omega(S, p, pt);
    if (w > 0) return LambdaItem::of_t(t_value(S, p, pt));
    Stratum T = stratum_at(S.cur, p, pt);
    if (T.empty()) throw Error("monomial point off the exceptional divisor");
    return LambdaItem::of_gamma(gamma(monomial_form_of(S), T));
  }

  Plan plan_line(int k) {
    const ResolutionState& S = levels_[k].S;
    struct Hit {
      int chart, u;
      Rat root;
      LambdaItem value;
      Stratum hyps;
    };
    std::vector<Hit> hits;
    for (int p = 0; p < static_cast<int>(S.cur.patches.size()); ++p) {
      int n = S.cur.chart(p).nvars();
      int u = free_coord(S.cur.patches[p], n);
      for (auto& r : line_sing_points(S.cur, p, u)) {
        Point pt(n, Rat(0));
        pt[u] = r;
        hits.push_back({S.cur.patches[p].chart, u, r, line_value(S, p, pt), stratum_at(S.cur, p, pt)});
      }
    }
    if (hits.empty()) throw Error("planning a level with empty singular set");
    LambdaItem best = hits[0].value;
    for (auto& h : hits)
      if (h.value > best) best = h.value;
    std::map<int, std::pair<int, std::vector<Rat>>> winners;
    for (auto& h : hits)
      if (h.value == best) {
        winners[h.chart].first = h.u;
        winners[h.chart].second.push_back(h.root);
      }
    Plan out;
    out.kind = "line";
    out.depth = k;
    out.value.items.push_back(best);
    if (best.kind == LambdaItem::Kind::gamma) {
      levels_[k].monomial = true;
      for (auto& h : hits)
        if (h.value == best) out.center_hyps = h.hyps;
    }
    for (auto& [chart, w] : winners) isolate_points(k, chart, w.first, w.second, out.centers);
    return out;
  }

  // bring each center point to the origin of a chart of its own
  void isolate_points(int k, int chart, int u, const std::vector<Rat>& roots, std::map<int, std::vector<int>>& centers) {
    const Chart src = atlas_->chart(chart);
    int n = src.nvars();
    auto w = levels_[k].S.cur.patches[patch_on(levels_[k].S.cur, chart)].w;
    auto offset = [&](const Rat& r) {
      Point off(n, Rat(0));
      off[u] = r;
      return off;
    };
    bool hyp_on_u = src.hyp_at(u).has_value();
    if (roots.size() == 1 && (roots[0] == 0 || !hyp_on_u)) {
      int to = atlas_->translate(chart, offset(roots[0]));
      if (to != chart) replace_chart(k, chart, {to});
      centers[to] = with_w({u}, w);
      return;
    }
    Poly xu = src.var(u);
    std::vector<int> targets;
    for (std::size_t i = 0; i < roots.size(); ++i) {
      Poly f = src.one();
      for (std::size_t l = 0; l < roots.size(); ++l)
        if (l != i) f *= xu - Poly::constant(n, roots[l]);
      if (roots[i] != 0 && hyp_on_u) f *= xu;
      int c = f.is_constant() ? chart : atlas_->localize(chart, f);
      c = atlas_->translate(c, offset(roots[i]));
      centers[c] = with_w({u}, w);
      targets.push_back(c);
    }
    for (int v : w) targets.push_back(atlas_->localize(chart, src.var(v)));
    Poly rest = src.one();
    for (auto& r : roots) rest *= xu - Poly::constant(n, r);
    targets.push_back(atlas_->localize(chart, rest));
    replace_chart(k, chart, targets);
  }

  LambdaValue h_at_level(int k, int patch, const Point& p) const {
    const Level& L = levels_[k];
    const ResolutionState& S = L.S;
    if (!sing_member_multi(S.cur, patch, p)) throw InputError("point is not in the singular set");
    LambdaValue v;
    if (L.dim == 1) {
      v.items.push_back(line_value(S, patch, p));
      return v;
    }
    if (L.monomial) {
      v.items.push_back(LambdaItem::of_gamma(gamma(monomial_form_of(S), stratum_at(S.cur, patch, p))));
      return v;
    }
    if (!L.maxt) throw Error("level not planned");
    TValue t = t_value(S, patch, p);
    int chart = S.cur.patches[patch].chart;
    auto lower = [&] {
      LambdaValue r;
      r.items = {LambdaItem::of_t(t), LambdaItem::infinity(L.dim - 1)};
      return r;
    };
    if (t < *L.maxt || !L.n1_z.empty()) return lower();  // N1 points included; N1 is the center
    if (static_cast<int>(levels_.size()) <= k + 1) throw Error("level below not built");
    int cp = patch_on(levels_[k + 1].S.cur, chart);
    if (cp < 0) throw Error("point of Max(t) outside the level below");
    return prepend(t, h_at_level(k + 1, cp, p));
  }

  ResolveOptions opt_;
  std::shared_ptr<Atlas> atlas_;
  std::map<int, AdaptedCandidate> pending_;  // chart -> adapted hypersurface fixed by a split
  std::vector<Level> levels_;
  int step_ = 0;
  int last_exc_ = -1;
};

inline Trace resolve(const MultiIdeal& input, const ResolveOptions& opt = {}) { return Resolver(input, opt).run(); }

inline Trace resolve_monomial_input(const MultiIdeal& input, const ResolveOptions& opt = {}) {
  return Resolver(input, opt, true).run();
}

// multi-ideal on a fresh chart with one coordinate per hypersurface carrying
// the monomials of a monomial form
inline MultiIdeal monomial_multiideal(const MonomialForm& F, std::shared_ptr<Atlas> atlas = nullptr) {
  if (!atlas) atlas = std::make_shared<Atlas>();
  std::vector<std::string> coords;
  for (int i = 0; i < F.nhyps; ++i) coords.push_back("x" + std::to_string(i + 1));
  int root = atlas->add_root(coords);
  std::vector<int> E;
  for (int i = 0; i < F.nhyps; ++i) {
    int h = atlas->add_hypersurface("H" + std::to_string(i + 1), false, 0);
    atlas->align(root, h, i);
    E.push_back(h);
  }
  std::vector<MarkedPair> pairs;
  for (auto& p : F.pairs) pairs.push_back({{Poly::monomial(p.exps)}, p.b});
  return make_multiideal(atlas, root, {}, E, pairs);
}

// I' of a basic-object state: (J, b), (Jbar, b * max omega)
inline MultiIdeal build_I_prime(ResolutionState& S) {
  if (S.cur.npairs() != 1) throw InputError("I' is built from a basic object");
  if (sing_empty(S.cur)) throw InputError("I' of a resolved object");
  fill_history(S);
  Rat mw = S.max_omega_hist.at(S.step);
  if (mw == 0) throw UnsupportedLocus("max omega is zero: the object is monomial");
  Rat c = mw * S.cur.marks[0];
  if (c.get_den() != 1) throw UnsupportedLocus("b * max omega is not an integer");
  MultiIdeal out = S.cur;
  out.marks.push_back(static_cast<int>(c.get_num().get_si()));
  for (std::size_t k = 0; k < out.patches.size(); ++k) out.patches[k].ideals.push_back(S.ledger[k][0].proper);
  return out;
}

// I-diamond: I' plus (L, 1), with E replaced by E+
inline MultiIdeal build_I_diamond(ResolutionState& S) {
  MultiIdeal out = build_I_prime(S);
  MaxT mt = max_t(S);
  for (std::size_t k = 0; k < out.patches.size(); ++k)
    out.patches[k].ideals.push_back(l_gens(S, static_cast<int>(k), mt.value.n));
  out.marks.push_back(1);
  out.E = e_minus_split(S).second;
  return out;
}

// codimension-one part of Max(t) among the coordinate hyperplanes of each
// patch (the candidates an adapted hypersurface can become); chart -> coordinate
inline std::map<int, int> n1_components(ResolutionState& S) {
  fill_history(S);
  MaxT mt = max_t(S);
  std::map<int, int> out;
  for (int p = 0; p < static_cast<int>(S.cur.patches.size()); ++p) {
    Gens g = max_t_gens(S, p, mt);
    const Patch& P = S.cur.patches[p];
    for (int v = 0; v < S.cur.chart(p).nvars(); ++v) {
      if (in_set(P.w, v)) continue;
      auto zw = with_w({v}, P.w);
      bool all = true;
      for (auto& f : g)
        if (!restrict_zero(f, zw).is_zero()) all = false;
      if (all) {
        out[P.chart] = v;
        break;
      }
    }
  }
  return out;
}

// recursive values at shared root points agree for two planned resolvers
inline bool descent_consistency(const Resolver& a, const Resolver& b, const std::vector<Point>& points) {
  for (auto& p : points) {
    auto va = a.h_at_root(p), vb = b.h_at_root(p);
    if (va.has_value() != vb.has_value()) return false;
    if (va && *va != *vb) return false;
  }
  return true;
}

// a planned resolver on a private copy of the atlas
inline Resolver planned_copy(const MultiIdeal& input, const ResolveOptions& o) {
  MultiIdeal M = input;
  M.atlas = std::make_shared<Atlas>(*input.atlas);
  Resolver r(M, o);
  r.plan();
  return r;
}

// two adapted hypersurfaces for the same input, compared at the given points
inline bool descent_consistency(const MultiIdeal& input, const Poly& z1, const Poly& z2,
                                const std::vector<Point>& points) {
  ResolveOptions a, b;
  a.adapted_override = z1;
  b.adapted_override = z2;
  return descent_consistency(planned_copy(input, a), planned_copy(input, b), points);
}

// the same with hypersurfaces picked by their index in the candidate list
inline bool descent_consistency(const MultiIdeal& input, std::size_t choice1, std::size_t choice2,
                                const std::vector<Point>& points) {
  ResolveOptions a, b;
  a.adapted_choice = choice1;
  b.adapted_choice = choice2;
  return descent_consistency(planned_copy(input, a), planned_copy(input, b), points);
}

}  // namespace mires
