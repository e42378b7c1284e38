#pragma once

#include <functional>
#include <memory>
#include <numeric>
#include <random>

#include "pairs.hpp"
#include "univariate.hpp"

namespace mires {

// one chart of the cover with the ideals of every pair restricted to W
struct Patch {
  int chart = -1;
  std::vector<int> w;  // sorted coordinates cutting out W
  std::vector<Gens> ideals;
};

struct MultiIdeal {
  std::shared_ptr<Atlas> atlas;
  CoefRing ring;
  std::vector<int> marks;
  std::vector<int> E;  // hypersurface ids in order
  std::vector<Patch> patches;

  int npairs() const { return static_cast<int>(marks.size()); }
  const Chart& chart(int patch) const { return atlas->chart(patches.at(patch).chart); }
  int dim(int patch) const {
    return chart(patch).nvars() - static_cast<int>(patches.at(patch).w.size());
  }
  // E members present in the chart, with their coordinates
  std::vector<std::pair<int, int>> present(int patch) const {
    std::vector<std::pair<int, int>> out;
    const Chart& c = chart(patch);
    for (int h : E) {
      auto k = c.coord_of(h);
      if (k) out.push_back({h, *k});
    }
    return out;
  }
};

inline bool in_set(const std::vector<int>& s, int v) { return std::find(s.begin(), s.end(), v) != s.end(); }

inline Gens restrict_gens(const Gens& gens, const std::vector<int>& w) { return restrict_to_w(gens, w); }

// multi-ideal on a fresh root chart
inline MultiIdeal make_multiideal(std::shared_ptr<Atlas> atlas, int chart, std::vector<int> w, std::vector<int> E,
                                  std::vector<MarkedPair> pairs) {
  MultiIdeal M;
  M.atlas = std::move(atlas);
  M.ring = M.atlas->chart(chart).ring;
  M.E = std::move(E);
  std::sort(w.begin(), w.end());
  Patch P;
  P.chart = chart;
  P.w = w;
  for (auto& pr : pairs) {
    if (pr.b < 1) throw InputError("marks must be positive");
    M.marks.push_back(pr.b);
    P.ideals.push_back(restrict_gens(pr.gens, w));
  }
  for (int h : M.E) {
    auto k = M.atlas->chart(chart).coord_of(h);
    if (k && in_set(w, *k)) throw InputError("W is not transversal to E");
  }
  M.patches.push_back(std::move(P));
  return M;
}

// generators of the ideal whose zero set is Sing on the patch
inline Gens sing_gens(const MultiIdeal& M, int patch) {
  const Patch& P = M.patches.at(patch);
  Gens out;
  for (int i = 0; i < M.npairs(); ++i) {
    Gens d = delta_iter(P.ideals[i], P.w, M.marks[i] - 1);
    out.insert(out.end(), d.begin(), d.end());
  }
  return tidy(out, M.chart(patch).nvars(), M.ring);
}

inline Chart w_view(const Chart& c, const std::vector<int>& w) {
  Chart v = c;
  for (auto& u : v.units) u = restrict_zero(u, w);
  return v;
}

inline bool on_patch(const MultiIdeal& M, int patch, const Point& p) {
  for (int w : M.patches.at(patch).w)
    if (p.at(w) != 0) return false;
  return M.chart(patch).contains(p);
}

inline bool sing_member_multi(const MultiIdeal& M, int patch, const Point& p) {
  if (!on_patch(M, patch, p)) throw InputError("point is not on W");
  const Patch& P = M.patches.at(patch);
  for (int i = 0; i < M.npairs(); ++i)
    if (ideal_order_at(P.ideals[i], p) < M.marks[i]) return false;
  return true;
}

inline bool sing_empty_on(const MultiIdeal& M, int patch) {
  return locus_empty(sing_gens(M, patch), w_view(M.chart(patch), M.patches[patch].w));
}

inline bool sing_empty(const MultiIdeal& M) {
  for (int k = 0; k < static_cast<int>(M.patches.size()); ++k)
    if (!sing_empty_on(M, k)) return false;
  return true;
}

// some pair has a nonzero ideal on every patch
inline bool is_nonzero(const MultiIdeal& M) {
  for (auto& P : M.patches) {
    bool any = false;
    for (auto& I : P.ideals)
      if (!is_zero_ideal(I)) any = true;
    if (!any) return false;
  }
  return true;
}

inline bool permissible_center_check(const MultiIdeal& M, int patch, const std::vector<int>& center) {
  const Patch& P = M.patches.at(patch);
  const Chart& c = M.chart(patch);
  for (int i : center)
    if (i < 0 || i >= c.nvars()) throw InputError("center coordinate out of range");
  std::vector<int> hyps;
  for (auto& [h, k] : M.present(patch)) hyps.push_back(h);
  std::vector<int> full = center;
  for (int w : P.w)
    if (!in_set(full, w)) full.push_back(w);
  if (!transversal_check(c, full, hyps)) return false;
  for (int i = 0; i < M.npairs(); ++i)
    if (nu_along(P.ideals[i], full, P.w) < M.marks[i]) return false;
  return true;
}

// full center coordinates (W added)
inline std::vector<int> with_w(std::vector<int> center, const std::vector<int>& w) {
  for (int v : w)
    if (!in_set(center, v)) center.push_back(v);
  std::sort(center.begin(), center.end());
  return center;
}

// blow up the listed patches; other patches are carried over. The caller
// owns the exceptional hypersurface id so that several objects on one atlas
// can share a step.
inline MultiIdeal transform_multiideal(const MultiIdeal& M, const std::map<int, std::vector<int>>& centers, int exc,
                                       std::vector<int>* origin = nullptr) {
  if (origin) origin->clear();
  MultiIdeal out;
  out.atlas = M.atlas;
  out.ring = M.ring;
  out.marks = M.marks;
  out.E = M.E;
  out.E.push_back(exc);
  for (int k = 0; k < static_cast<int>(M.patches.size()); ++k) {
    auto it = centers.find(k);
    const Patch& P = M.patches[k];
    if (it == centers.end()) {
      out.patches.push_back(P);
      if (origin) origin->push_back(k);
      continue;
    }
    auto full = with_w(it->second, P.w);
    if (!permissible_center_check(M, k, full)) {
      for (int i = 0; i < M.npairs(); ++i)
        if (nu_along(P.ideals[i], full, P.w) < M.marks[i])
          throw NotPermissible("center is not permissible for pair " + std::to_string(i + 1), i);
      throw NotPermissible("center does not have normal crossings with E");
    }
    auto res = M.atlas->blowup(P.chart, full, exc);
    for (int c : res.charts) {
      const Chart& ch = M.atlas->chart(c);
      if (in_set(P.w, ch.exc_coord)) continue;
      Patch Q;
      Q.chart = c;
      Q.w = P.w;
      for (int i = 0; i < M.npairs(); ++i) Q.ideals.push_back(controlled_transform(P.ideals[i], M.marks[i], ch, i));
      out.patches.push_back(std::move(Q));
      if (origin) origin->push_back(k);
    }
  }
  return out;
}

// pairs (Delta^q I_i, b_i - q) for q = 0 .. b_i - 1
inline MultiIdeal coefficient_multiideal(const MultiIdeal& M) {
  MultiIdeal out = M;
  out.marks.clear();
  for (auto& P : out.patches) P.ideals.clear();
  for (int i = 0; i < M.npairs(); ++i)
    for (int q = 0; q < M.marks[i]; ++q) out.marks.push_back(M.marks[i] - q);
  for (std::size_t k = 0; k < M.patches.size(); ++k) {
    const Patch& P = M.patches[k];
    for (int i = 0; i < M.npairs(); ++i) {
      Gens d = P.ideals[i];
      for (int q = 0; q < M.marks[i]; ++q) {
        if (q > 0) d = delta(d, P.w);
        out.patches[k].ideals.push_back(d);
      }
    }
  }
  return out;
}

// restriction of the coefficient multi-ideal to Z = {x_z = 0}, one z per
// patch (-1 drops the patch)
inline MultiIdeal inductive_multiideal(const MultiIdeal& M, const std::vector<int>& z) {
  if (z.size() != M.patches.size()) throw InputError("one hypersurface coordinate per patch expected");
  MultiIdeal C = coefficient_multiideal(M);
  MultiIdeal out;
  out.atlas = M.atlas;
  out.ring = M.ring;
  out.marks = C.marks;
  for (int h : M.E) {
    bool keep = true;
    for (std::size_t k = 0; k < M.patches.size(); ++k) {
      if (z[k] < 0) continue;
      auto c = M.chart(static_cast<int>(k)).coord_of(h);
      if (c && *c == z[k]) keep = false;
    }
    if (keep) out.E.push_back(h);
  }
  for (std::size_t k = 0; k < M.patches.size(); ++k) {
    if (z[k] < 0) continue;
    const Patch& P = M.patches[k];
    if (in_set(P.w, z[k])) throw InputError("hypersurface coordinate already cuts out W");
    const Chart& ch = M.chart(static_cast<int>(k));
    auto h = ch.hyp_at(z[k]);
    if (h && in_set(M.E, *h)) throw InputError("Z is not transversal to E");
    // condition (iota): Delta^(b_i - 1)(I_i)|Z nonzero for some i
    bool iota = false;
    for (int i = 0; i < M.npairs(); ++i) {
      Gens top = delta_iter(P.ideals[i], P.w, M.marks[i] - 1);
      if (!is_zero_ideal(restrict_to(top, z[k]))) iota = true;
    }
    if (!iota) throw ConditionIotaFails("condition (iota) fails on chart " + std::to_string(P.chart));
    Patch Q;
    Q.chart = P.chart;
    Q.w = with_w({z[k]}, P.w);
    for (auto& I : C.patches[k].ideals) Q.ideals.push_back(tidy(restrict_to(I, z[k]), ch.nvars(), M.ring));
    out.patches.push_back(std::move(Q));
  }
  return out;
}

struct AdaptedCandidate {
  Poly eq;
  int pivot = -1;
  bool needs_change = false;
};

// elements a*x_p + h(others) of the given ideal with a rational and nonzero;
// generators first, then g_i + c*g_j
inline std::vector<AdaptedCandidate> adapted_candidates(const Gens& gens, const Chart& ch, const std::vector<int>& w,
                                                        const std::vector<int>& E, const Point* at = nullptr) {
  std::vector<AdaptedCandidate> out;
  int n = ch.nvars();
  auto consider = [&](const Poly& g) {
    if (g.is_zero()) return;
    if (at && order_at_point(g, *at) != 1) return;
    for (int p = 0; p < n; ++p) {
      if (in_set(w, p)) continue;
      Exps lin(n, 0);
      lin[p] = 1;
      Coef a = g.coefficient(lin);
      if (a.is_zero() || !a.is_unit()) continue;
      bool rational = true;
      for (int k = 1; k < a.m(); ++k)
        if (a.parts[k] != 0) rational = false;
      if (!rational) continue;
      Poly rest = g - Poly::monomial(lin, a.parts[0], g.ring());
      if (depends_on(rest, p)) continue;
      Poly eq = g.scaled(1 / a.parts[0]);
      rest = eq - Poly::variable(n, p, g.ring());
      bool change = !rest.is_zero();
      auto h = ch.hyp_at(p);
      if (change && h) continue;  // would break alignment
      if (!change && h && in_set(E, *h)) continue;  // not transversal to E
      for (auto& c : out)
        if (c.pivot == p && c.eq == eq) return;
      out.push_back({eq, p, change});
    }
  };
  for (auto& g : gens) consider(g);
  static const int mult[] = {1, -1, 2, -2};
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = i + 1; j < gens.size(); ++j)
      for (int c : mult) consider(gens[i] + gens[j].scaled(c));
  std::stable_sort(out.begin(), out.end(),
                   [](const AdaptedCandidate& a, const AdaptedCandidate& b) { return !a.needs_change && b.needs_change; });
  return out;
}

// substitute every ideal of a patch into a derived chart (change, translate, localize)
inline Patch move_patch(const Patch& P, const Atlas& atlas, int chart) {
  const Chart& c = atlas.chart(chart);
  if (c.parent != P.chart && chart != P.chart) throw Error("move_patch: chart is not derived from the patch chart");
  Patch Q = P;
  Q.chart = chart;
  if (chart == P.chart) return Q;
  for (auto& I : Q.ideals)
    for (auto& g : I) g = restrict_zero(substitute(g, c.parent_map), P.w);
  return Q;
}

struct AdaptedHypersurface {
  int chart = -1;  // chart in which Z is a coordinate hyperplane
  int z = -1;
  Poly eq;  // equation in the original chart
};

// adapted hypersurface of a basic object (pair `pair`) at a point of its
// singular set; performs the triangular change on the atlas
inline AdaptedHypersurface adapted_hypersurface(const MultiIdeal& M, int patch, const Point& p, int pair = 0,
                                                std::size_t choice = 0) {
  const Patch& P = M.patches.at(patch);
  Gens d = delta_iter(P.ideals.at(pair), P.w, M.marks.at(pair) - 1);
  auto cands = adapted_candidates(d, M.chart(patch), P.w, M.E, &p);
  if (cands.size() <= choice) throw NotNice("no order-one element in the top Delta ideal at the point");
  auto& c = cands[choice];
  AdaptedHypersurface out;
  out.chart = M.atlas->triangular_change(P.chart, c.pivot, c.eq);
  out.z = c.pivot;
  out.eq = c.eq;
  return out;
}

inline Int lcm_marks(const std::vector<int>& marks) {
  Int N = 1;
  for (int b : marks) N = lcm(N, Int(b));
  return N;
}

struct BasicObjectOptions {
  std::size_t max_generators = 4096;
};

// products of q generators (multisets), deduplicated
inline Gens power_gens(const Gens& gens, int q, int nvars, CoefRing ring, std::size_t cap) {
  Gens base = tidy(gens, nvars, ring);
  if (is_zero_ideal(base)) return {Poly(nvars, ring)};
  std::vector<std::vector<Poly>> powers(base.size());
  for (std::size_t k = 0; k < base.size(); ++k) {
    powers[k].push_back(Poly::constant(nvars, 1, ring));
    for (int e = 1; e <= q; ++e) powers[k].push_back(powers[k].back() * base[k]);
  }
  Gens out;
  std::function<void(std::size_t, int, Poly)> rec = [&](std::size_t k, int left, Poly acc) {
    if (k + 1 == base.size()) {
      out.push_back(acc * powers[k][left]);
      if (out.size() > cap) throw UnsupportedLocus("associated basic object exceeds the generator cap");
      return;
    }
    for (int a = left; a >= 0; --a) rec(k + 1, left - a, acc * powers[k][a]);
  };
  rec(0, q, Poly::constant(nvars, 1, ring));
  return tidy(out, nvars, ring);
}

// single generator of an ideal on a line (field mode)
inline Poly line_gcd(const Gens& gens, int var) {
  uni::UPoly g;
  for (auto& f : gens) {
    if (f.is_zero()) continue;
    g = uni::gcd(g, uni::from_poly(f, var));
  }
  int n = gens.empty() ? 0 : gens[0].nvars();
  return uni::to_poly(g, n, var);
}

inline int free_coord(const Patch& P, int nvars) {
  for (int i = 0; i < nvars; ++i)
    if (!in_set(P.w, i)) return i;
  return -1;
}

// (J, N) with N = lcm(b_i) and J = sum of I_i^(N / b_i)
inline MultiIdeal associated_basic_object(const MultiIdeal& M, const BasicObjectOptions& opt = {}) {
  if (!is_nonzero(M)) throw InputError("associated basic object of a zero multi-ideal");
  Int N = lcm_marks(M.marks);
  if (N > 1000000) throw UnsupportedLocus("mark of the associated basic object is too large");
  int n_mark = static_cast<int>(N.get_si());
  MultiIdeal out;
  out.atlas = M.atlas;
  out.ring = M.ring;
  out.E = M.E;
  out.marks = {n_mark};
  for (int k = 0; k < static_cast<int>(M.patches.size()); ++k) {
    const Patch& P = M.patches[k];
    int n = M.chart(k).nvars();
    Patch Q;
    Q.chart = P.chart;
    Q.w = P.w;
    Gens J;
    bool on_line = M.dim(k) == 1 && !M.ring.artinian();
    int u = free_coord(P, n);
    for (int i = 0; i < M.npairs(); ++i) {
      int q = n_mark / M.marks[i];
      if (on_line) {
        Poly g = line_gcd(P.ideals[i], u);
        if (!g.is_zero()) J.push_back(pow(g, q));
      } else {
        Gens pw = power_gens(P.ideals[i], q, n, M.ring, opt.max_generators);
        for (auto& g : pw)
          if (!g.is_zero()) J.push_back(g);
        if (J.size() > opt.max_generators) throw UnsupportedLocus("associated basic object exceeds the generator cap");
      }
    }
    if (on_line) J = {line_gcd(J, u)};
    Q.ideals.push_back(tidy(J, n, M.ring));
    out.patches.push_back(std::move(Q));
  }
  return out;
}

// product with a line: a fresh last coordinate on a new root chart; single patch only
inline MultiIdeal extension(const MultiIdeal& M, const std::string& name = "t") {
  if (M.patches.size() != 1) throw InputError("extension is implemented for single-chart multi-ideals");
  const Chart& c = M.chart(0);
  auto coords = c.coords;
  coords.push_back(name);
  int root = M.atlas->add_root(coords, M.ring, M.patches[0].w);
  for (auto& [h, k] : c.hyp_coord) M.atlas->align(root, h, k);
  MultiIdeal out = M;
  out.patches[0].chart = root;
  for (auto& I : out.patches[0].ideals)
    for (auto& g : I) g = g.extended(1);
  return out;
}

// deterministic sample of points on W in a patch: origins of the E-strata,
// then pseudorandom rational points
inline std::vector<Point> sample_points(const MultiIdeal& M, int patch, int count = 20, unsigned seed = 7) {
  const Patch& P = M.patches.at(patch);
  const Chart& c = M.chart(patch);
  int n = c.nvars();
  std::vector<Point> out;
  auto pres = M.present(patch);
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> num(-6, 6), den(1, 3);
  std::size_t strata = std::size_t(1) << std::min<std::size_t>(pres.size(), 10);
  for (std::size_t mask = 0; mask < strata; ++mask) {
    Point p(n, Rat(0));
    for (int i = 0; i < n; ++i) {
      if (in_set(P.w, i)) continue;
      bool in = false;
      for (std::size_t b = 0; b < pres.size() && b < 10; ++b)
        if ((mask >> b) & 1 && pres[b].second == i) in = true;
      bool hyp = false;
      for (auto& pr : pres)
        if (pr.second == i) hyp = true;
      if (!in && hyp) p[i] = Rat(1 + (i % 3));
    }
    if (c.contains(p)) out.push_back(p);
  }
  if (c.contains(Point(n, Rat(0))) && std::find(out.begin(), out.end(), Point(n, Rat(0))) == out.end())
    out.push_back(Point(n, Rat(0)));
  for (int k = 0; k < count; ++k) {
    Point p(n, Rat(0));
    for (int i = 0; i < n; ++i) {
      if (in_set(P.w, i)) continue;
      Rat r(num(rng), den(rng));
      r.canonicalize();
      p[i] = r;
    }
    if (c.contains(p)) out.push_back(p);
  }
  return out;
}

struct ScriptOp {
  enum Kind { blowup, extend } kind = blowup;
  std::vector<int> center;  // patch-0 coordinates for blowup
  int patch = 0;
};

enum class EquivResult { agree, disagree, invalid_left, invalid_right };

inline const char* equiv_name(EquivResult r) {
  switch (r) {
    case EquivResult::agree: return "agree";
    case EquivResult::disagree: return "disagree";
    case EquivResult::invalid_left: return "invalid-left";
    case EquivResult::invalid_right: return "invalid-right";
  }
  return "?";
}

// field multi-ideal obtained by setting eps = 0; same atlas
inline MultiIdeal fiber_multiideal(const MultiIdeal& M) {
  if (!M.ring.artinian()) return M;
  MultiIdeal out = M;
  out.ring = CoefRing::field();
  for (auto& P : out.patches)
    for (auto& I : P.ideals) {
      Gens f;
      for (auto& g : I) f.push_back(to_field(g));
      I = f;
    }
  return out;
}

// over an artinian base singular sets are compared on the fibers
inline bool sing_agree_sampled(const MultiIdeal& A0, const MultiIdeal& B0, int count, unsigned seed) {
  MultiIdeal A = fiber_multiideal(A0), B = fiber_multiideal(B0);
  if (A.patches.size() != B.patches.size()) return false;
  for (int k = 0; k < static_cast<int>(A.patches.size()); ++k) {
    if (A.patches[k].chart != B.patches[k].chart) return false;
    for (auto& p : sample_points(A, k, count, seed))
      if (sing_member_multi(A, k, p) != sing_member_multi(B, k, p)) return false;
    if (sing_empty_on(A, k) != sing_empty_on(B, k)) return false;
  }
  return true;
}

// finite spot-check of singular-set agreement along a shared script
inline EquivResult equiv_spotcheck(MultiIdeal A, MultiIdeal B, const std::vector<ScriptOp>& script, int count = 20,
                                   unsigned seed = 7) {
  if (!sing_agree_sampled(A, B, count, seed)) return EquivResult::disagree;
  int step = 0;
  for (auto& op : script) {
    ++step;
    if (op.kind == ScriptOp::extend) {
      A = extension(A);
      MultiIdeal Bx = B;
      Bx.patches[0].chart = A.patches[0].chart;
      for (auto& I : Bx.patches[0].ideals)
        for (auto& g : I) g = g.extended(1);
      B = Bx;
    } else {
      bool okA = permissible_center_check(A, op.patch, op.center);
      bool okB = permissible_center_check(B, op.patch, op.center);
      if (!okA) return EquivResult::invalid_left;
      if (!okB) return EquivResult::invalid_right;
      int exc = A.atlas->add_hypersurface("E" + std::to_string(A.atlas->hyp_count()), true, step);
      A = transform_multiideal(A, {{op.patch, op.center}}, exc);
      B = transform_multiideal(B, {{op.patch, op.center}}, exc);
    }
    if (!sing_agree_sampled(A, B, count, seed)) return EquivResult::disagree;
  }
  return EquivResult::agree;
}

}  // namespace mires
