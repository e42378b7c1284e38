#pragma once

#include <compare>
#include <optional>

#include "multiideal.hpp"

namespace mires {

struct TValue {
  Rat omega;
  int n = 0;
  std::strong_ordering operator<=>(const TValue& o) const {
    if (omega != o.omega) return omega < o.omega ? std::strong_ordering::less : std::strong_ordering::greater;
    return n <=> o.n;
  }
  bool operator==(const TValue& o) const { return omega == o.omega && n == o.n; }
};

inline std::string to_string(const TValue& t) { return "(" + to_string(t.omega) + ", " + std::to_string(t.n) + ")"; }

// a multi-ideal along a sequence of transforms, with the proper factorization
// of every pair and the history needed by omega and t
struct ResolutionState {
  MultiIdeal cur;
  std::vector<std::vector<ProperLedger>> ledger;  // [patch][pair]
  std::map<int, int> born;                        // hypersurface id -> step of appearance
  int step = 0;
  std::vector<Rat> max_omega_hist;                // one entry per step, filled on demand
};

inline ResolutionState make_state(const MultiIdeal& M) {
  ResolutionState S;
  S.cur = M;
  for (auto& P : M.patches) {
    std::vector<ProperLedger> row;
    for (auto& I : P.ideals) row.push_back(initial_ledger(I));
    S.ledger.push_back(row);
  }
  for (int h : M.E) S.born[h] = 0;
  return S;
}

// state whose ideals are monomials in the E coordinates, all of it booked in
// the ledger (proper transforms are units)
inline ResolutionState make_monomial_state(const MultiIdeal& M) {
  ResolutionState S = make_state(M);
  for (std::size_t k = 0; k < M.patches.size(); ++k) {
    const Chart& c = M.chart(static_cast<int>(k));
    for (int i = 0; i < M.npairs(); ++i) {
      const Gens& I = M.patches[k].ideals[i];
      if (I.size() != 1 || I[0].size() != 1) throw InputError("monomial input expects one monomial per pair");
      auto& [e, coef] = *I[0].terms().begin();
      ProperLedger L;
      L.proper = {Poly::constant(c.nvars(), 1, M.ring).times_coef(coef)};
      for (int v = 0; v < c.nvars(); ++v) {
        if (e[v] == 0) continue;
        auto h = c.hyp_at(v);
        if (!h || !in_set(M.E, *h)) throw InputError("monomial exponent on a coordinate without hypersurface");
        L.exps[*h] = e[v];
      }
      for (int h : M.E)
        if (!L.exps.count(h)) L.exps[h] = 0;
      S.ledger[k][i] = L;
    }
  }
  return S;
}

// transform of the state; centers are keyed by patch index
inline ResolutionState advance(const ResolutionState& S, const std::map<int, std::vector<int>>& centers, int exc) {
  ResolutionState out;
  std::vector<int> origin;
  out.cur = transform_multiideal(S.cur, centers, exc, &origin);
  out.born = S.born;
  out.born[exc] = S.step + 1;
  out.step = S.step + 1;
  out.max_omega_hist = S.max_omega_hist;
  for (std::size_t k = 0; k < out.cur.patches.size(); ++k) {
    int old = origin[k];
    const Patch& P = S.cur.patches[old];
    auto it = centers.find(old);
    if (it == centers.end()) {
      out.ledger.push_back(S.ledger[old]);
      continue;
    }
    const Chart& parent = S.cur.chart(old);
    const Chart& child = out.cur.chart(static_cast<int>(k));
    std::vector<ProperLedger> row;
    for (int i = 0; i < S.cur.npairs(); ++i) row.push_back(update_ledger(S.ledger[old][i], S.cur.marks[i], parent, child, P.w));
    out.ledger.push_back(row);
  }
  return out;
}

inline bool ledger_consistent(const ResolutionState& S) {
  for (std::size_t k = 0; k < S.cur.patches.size(); ++k)
    for (int i = 0; i < S.cur.npairs(); ++i)
      if (!ledger_identity(S.ledger[k][i], S.cur.patches[k].ideals[i], S.cur.chart(static_cast<int>(k)))) return false;
  return true;
}

inline Rat omega_i(const ResolutionState& S, int patch, int i, const Point& p) {
  if (!sing_member_multi(S.cur, patch, p)) throw InputError("omega is defined on the singular set only");
  int nu = ideal_order_at(S.ledger[patch][i].proper, p);
  if (nu == kInf) throw UnsupportedLocus("proper transform vanishes identically");
  return ratio(nu, S.cur.marks[i]);
}

inline Rat omega(const ResolutionState& S, int patch, const Point& p) {
  Rat best;
  for (int i = 0; i < S.cur.npairs(); ++i) {
    Rat v = omega_i(S, patch, i, p);
    if (i == 0 || v < best) best = v;
  }
  return best;
}

// smallest pair index attaining omega at p
inline int omega_argmin(const ResolutionState& S, int patch, const Point& p) {
  Rat w = omega(S, patch, p);
  for (int i = 0; i < S.cur.npairs(); ++i)
    if (omega_i(S, patch, i, p) == w) return i;
  return -1;
}

inline int ceil_div(const Rat& r) {
  Int q = r.get_num() / r.get_den();
  if (q * r.get_den() < r.get_num()) q += 1;
  return static_cast<int>(q.get_si());
}

// generators of {omega >= r} inside Sing on a patch
inline Gens omega_level_gens(const ResolutionState& S, int patch, const Rat& r) {
  const Patch& P = S.cur.patches[patch];
  Gens out = sing_gens(S.cur, patch);
  for (int i = 0; i < S.cur.npairs(); ++i) {
    int c = ceil_div(r * S.cur.marks[i]);
    if (c < 1) continue;
    Gens d = delta_iter(S.ledger[patch][i].proper, P.w, c - 1);
    out.insert(out.end(), d.begin(), d.end());
  }
  return tidy(out, S.cur.chart(patch).nvars(), S.cur.ring);
}

inline bool level_nonempty(const ResolutionState& S, const Rat& r) {
  for (int k = 0; k < static_cast<int>(S.cur.patches.size()); ++k)
    if (!locus_empty(omega_level_gens(S, k, r), w_view(S.cur.chart(k), S.cur.patches[k].w))) return true;
  return false;
}

// singular points of a one-dimensional patch, as values of the free
// coordinate u; irrational singular points are not supported
inline std::vector<Rat> line_sing_points(const MultiIdeal& M, int p, int u) {
  const Chart& c = M.chart(p);
  int base = -1;
  uni::UPoly g;
  for (int i = 0; i < M.npairs() && base < 0; ++i) {
    g = uni::from_poly(line_gcd(M.patches[p].ideals[i], u), u);
    uni::trim(g);
    if (!g.empty()) base = i;
  }
  if (base < 0) throw UnsupportedLocus("zero ideal on a line");
  uni::UPoly r = uni::strip_rational_roots(g), acc = r;
  for (int k = 1; k < M.marks[base] && uni::deg(acc) > 0; ++k) {
    r = uni::derivative(r);
    acc = uni::gcd(acc, r);
  }
  if (uni::deg(acc) > 0) throw UnsupportedLocus("singular points with irrational coordinates");
  std::vector<Rat> out;
  for (auto& [root, mult] : uni::rational_roots(g)) {
    if (mult < M.marks[base]) continue;
    Point pt(c.nvars(), Rat(0));
    pt[u] = root;
    if (!c.contains(pt)) continue;
    if (sing_member_multi(M, p, pt)) out.push_back(root);
  }
  return out;
}

inline bool all_lines(const MultiIdeal& M) {
  if (M.ring.artinian()) return false;
  for (int k = 0; k < static_cast<int>(M.patches.size()); ++k)
    if (M.dim(k) != 1) return false;
  return true;
}

// exact max of omega over Sing (Sing must be nonempty)
inline Rat max_omega(const ResolutionState& S) {
  if (all_lines(S.cur)) {
    std::optional<Rat> best;
    for (int k = 0; k < static_cast<int>(S.cur.patches.size()); ++k) {
      int n = S.cur.chart(k).nvars();
      int u = free_coord(S.cur.patches[k], n);
      for (auto& r : line_sing_points(S.cur, k, u)) {
        Point pt(n, Rat(0));
        pt[u] = r;
        Rat v = omega(S, k, pt);
        if (!best || v > *best) best = v;
      }
    }
    if (!best) throw Error("max_omega: empty singular set");
    return *best;
  }
  std::set<Rat> cands = {Rat(0)};
  for (int i = 0; i < S.cur.npairs(); ++i) {
    int bound = -1;
    for (auto& row : S.ledger)
      for (auto& g : row[i].proper)
        if (!g.is_zero()) bound = std::max(bound, g.total_degree());
    for (int c = 1; c <= bound; ++c) {
      cands.insert(ratio(c, S.cur.marks[i]));
    }
  }
  std::vector<Rat> v(cands.begin(), cands.end());
  // largest nonempty level; levels shrink as r grows
  std::size_t lo = 0, hi = v.size();
  while (hi - lo > 1) {
    std::size_t mid = (lo + hi) / 2;
    if (level_nonempty(S, v[mid]))
      lo = mid;
    else
      hi = mid;
  }
  return v[lo];
}

inline void fill_history(ResolutionState& S) {
  while (static_cast<int>(S.max_omega_hist.size()) < S.step) S.max_omega_hist.push_back(S.max_omega_hist.empty() ? Rat(0) : S.max_omega_hist.back());
  if (static_cast<int>(S.max_omega_hist.size()) == S.step) S.max_omega_hist.push_back(max_omega(S));
}

// q is the smallest step whose max omega equals the current one
inline int e_minus_marker(const ResolutionState& S) {
  if (static_cast<int>(S.max_omega_hist.size()) <= S.step) throw Error("omega history not filled");
  Rat cur = S.max_omega_hist[S.step];
  for (int q = 0; q <= S.step; ++q)
    if (S.max_omega_hist[q] == cur) return q;
  return S.step;
}

inline std::pair<std::vector<int>, std::vector<int>> e_minus_split(const ResolutionState& S) {
  int q = e_minus_marker(S);
  std::vector<int> minus, plus;
  for (int h : S.cur.E) {
    auto it = S.born.find(h);
    int b = it == S.born.end() ? 0 : it->second;
    (b <= q ? minus : plus).push_back(h);
  }
  return {minus, plus};
}

inline TValue t_value(const ResolutionState& S, int patch, const Point& p) {
  TValue t;
  t.omega = omega(S, patch, p);
  auto [minus, plus] = e_minus_split(S);
  const Chart& c = S.cur.chart(patch);
  for (int h : minus) {
    auto k = c.coord_of(h);
    if (k && p[*k] == 0) ++t.n;
  }
  return t;
}

// coordinates of the E- members present on a patch
inline std::vector<int> e_minus_coords(const ResolutionState& S, int patch) {
  auto [minus, plus] = e_minus_split(S);
  std::vector<int> out;
  const Chart& c = S.cur.chart(patch);
  for (int h : minus) {
    auto k = c.coord_of(h);
    if (k && !in_set(S.cur.patches[patch].w, *k)) out.push_back(*k);
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline void subsets_of_size(const std::vector<int>& set, int k, std::vector<std::vector<int>>& out, std::size_t cap) {
  std::vector<int> cur;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (static_cast<int>(cur.size()) == k) {
      out.push_back(cur);
      if (out.size() > cap) throw UnsupportedLocus("subsequence count exceeds the cap");
      return;
    }
    if (i == set.size()) return;
    if (static_cast<int>(set.size() - i) < k - static_cast<int>(cur.size())) return;
    cur.push_back(set[i]);
    rec(i + 1);
    cur.pop_back();
    rec(i + 1);
  };
  rec(0);
}

struct MaxT {
  TValue value;
  std::vector<Gens> omega_locus;  // per patch: generators of Max(omega)
};

inline constexpr std::size_t kSubsequenceCap = 4096;

// exact max of t over Sing; the history of the state must be filled
inline MaxT max_t(const ResolutionState& S) {
  MaxT out;
  out.value.omega = S.max_omega_hist.at(S.step);
  int top = 0;
  for (int k = 0; k < static_cast<int>(S.cur.patches.size()); ++k) {
    out.omega_locus.push_back(omega_level_gens(S, k, out.value.omega));
    top = std::max(top, static_cast<int>(e_minus_coords(S, k).size()));
  }
  for (int n = top; n >= 0; --n) {
    for (int k = 0; k < static_cast<int>(S.cur.patches.size()); ++k) {
      auto coords = e_minus_coords(S, k);
      if (static_cast<int>(coords.size()) < n) continue;
      std::vector<std::vector<int>> subs;
      subsets_of_size(coords, n, subs, kSubsequenceCap);
      for (auto& T : subs) {
        Gens g = out.omega_locus[k];
        for (int v : T) g.push_back(S.cur.chart(k).var(v));
        if (!locus_empty(g, w_view(S.cur.chart(k), S.cur.patches[k].w))) {
          out.value.n = n;
          return out;
        }
      }
    }
  }
  throw Error("max_t: empty singular set");
}

// a point or the generic point of an aligned stratum
struct Candidate {
  int patch = 0;
  std::optional<Point> point;
  std::vector<int> stratum;  // coordinates set to zero (W added automatically)
  std::string label;
};

inline std::optional<Rat> omega_at_candidate(const ResolutionState& S, const Candidate& c) {
  if (c.point) {
    if (!sing_member_multi(S.cur, c.patch, *c.point)) return std::nullopt;
    return omega(S, c.patch, *c.point);
  }
  const Patch& P = S.cur.patches[c.patch];
  auto full = with_w(c.stratum, P.w);
  std::optional<Rat> best;
  for (int i = 0; i < S.cur.npairs(); ++i) {
    if (nu_along(P.ideals[i], full, P.w) < S.cur.marks[i]) return std::nullopt;
    int nu = nu_along(S.ledger[c.patch][i].proper, full, P.w);
    Rat v = ratio(nu, S.cur.marks[i]);
    if (!best || v < *best) best = v;
  }
  return best;
}

// candidates attaining the exact max of omega; UnsupportedLocus when none does
inline std::vector<Candidate> max_omega_candidates(const ResolutionState& S, const std::vector<Candidate>& cands,
                                                   Rat* max_value = nullptr) {
  Rat m = max_omega(S);
  if (max_value) *max_value = m;
  std::vector<Candidate> out;
  for (auto& c : cands) {
    auto v = omega_at_candidate(S, c);
    if (!v) continue;
    if (*v > m) throw Error("candidate value exceeds the exact maximum");
    if (*v == m) out.push_back(c);
  }
  if (out.empty()) throw UnsupportedLocus("maximum of omega is not attained on the candidate lattice");
  return out;
}

}  // namespace mires
