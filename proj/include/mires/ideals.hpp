#pragma once

#include <set>
#include <vector>

#include "charts.hpp"
#include "groebner.hpp"

namespace mires {

// Generators of an ideal on W inside a chart; W coordinates never appear.
struct IdealRep {
  int chart = -1;
  std::vector<Poly> gens;
};

using Gens = std::vector<Poly>;

inline int ideal_order_at(const Gens& gens, const Point& p) {
  int best = kInf;
  for (auto& g : gens) best = std::min(best, order_at_point(g, p));
  return best;
}

inline bool is_zero_ideal(const Gens& gens) {
  for (auto& g : gens)
    if (!g.is_zero()) return false;
  return true;
}

// constant generator with invertible value
inline bool has_unit_generator(const Gens& gens) {
  for (auto& g : gens)
    if (!g.is_zero() && g.is_constant() && g.terms().begin()->second.is_unit()) return true;
  return false;
}

// drop zeros and scalar duplicates, keep order of first appearance
inline Gens tidy(const Gens& gens, int nvars, CoefRing ring) {
  Gens out;
  std::set<std::string> seen;
  std::vector<std::string> names;
  for (int i = 0; i < nvars; ++i) names.push_back("v" + std::to_string(i));
  for (auto& g : gens) {
    if (g.is_zero()) continue;
    auto key = to_string(normalized(g), names);
    if (seen.insert(key).second) out.push_back(g);
  }
  if (out.empty()) out.push_back(Poly(nvars, ring));
  return out;
}

// generators plus first partials in the coordinates of W
inline Gens delta(const Gens& gens, const std::vector<int>& w) {
  if (gens.empty()) return gens;
  int n = gens[0].nvars();
  Gens out = gens;
  for (auto& g : gens)
    for (int i = 0; i < n; ++i) {
      if (std::find(w.begin(), w.end(), i) != w.end()) continue;
      out.push_back(partial(g, i));
    }
  return tidy(out, n, gens[0].ring());
}

inline Gens delta_iter(Gens gens, const std::vector<int>& w, int j) {
  for (int k = 0; k < j; ++k) {
    if (has_unit_generator(gens)) break;
    gens = delta(gens, w);
  }
  return gens;
}

inline Gens restrict_to(const Gens& gens, int z) {
  Gens out;
  for (auto& g : gens) out.push_back(restrict_zero(g, {z}));
  return out;
}

inline Gens restrict_to_w(const Gens& gens, const std::vector<int>& w) {
  Gens out;
  for (auto& g : gens) out.push_back(restrict_zero(g, w));
  return out;
}

// order along the aligned center V(x_c : c in coords) inside W
inline int nu_along(const Gens& gens, const std::vector<int>& center, const std::vector<int>& w = {}) {
  std::vector<int> free;
  for (int c : center)
    if (std::find(w.begin(), w.end(), c) == w.end()) free.push_back(c);
  int best = kInf;
  for (auto& g : gens) best = std::min(best, order_along_coords(g, free));
  return best;
}

inline std::vector<gb::GPoly> to_gb_input(const Gens& gens) {
  std::vector<gb::GPoly> in;
  if (gens.empty()) return in;
  CoefRing ring = gens[0].ring();
  int n = gens[0].nvars();
  if (!ring.artinian()) {
    for (auto& g : gens) in.push_back(gb::from_poly(g));
  } else {
    for (auto& g : gens) in.push_back(gb::from_poly_eps(g));
    Exps e(n + 1, 0);
    e[n] = ring.m;
    in.push_back({gb::Term{e, Rat(1)}});
  }
  return in;
}

inline bool is_monomial_ideal(const Gens& gens) {
  for (auto& g : gens)
    if (g.size() > 1) return false;
  return true;
}

// exact membership; monomial ideals by divisibility, otherwise a Groebner basis
inline bool member(const Poly& f, const Gens& gens) {
  if (f.is_zero()) return true;
  if (gens.empty() || is_zero_ideal(gens)) return false;
  if (is_monomial_ideal(gens)) {
    // a monomial ideal over a truncated ring: c*eps^k*x^a lies in (u*eps^j*x^b)
    // iff x^b | x^a and j <= k (u a unit)
    for (auto& [e, c] : f.terms()) {
      for (int k = 0; k < c.m(); ++k) {
        if (c.parts[k] == 0) continue;
        bool ok = false;
        for (auto& g : gens) {
          if (g.is_zero()) continue;
          auto& [ge, gc] = *g.terms().begin();
          if (gc.valuation() > k) continue;
          if (gb::divides(ge, e)) ok = true;
        }
        if (!ok) return false;
      }
    }
    return true;
  }
  try {
    auto G = gb::basis(to_gb_input(gens));
    gb::GPoly ff = f.ring().artinian() ? gb::from_poly_eps(f) : gb::from_poly(f);
    return gb::normal_form(ff, G).empty();
  } catch (const gb::BudgetExceeded&) {
    throw UndecidableMembership("membership test exceeded the Groebner budget");
  }
}

inline bool contains_all(const Gens& big, const Gens& small) {
  for (auto& f : small)
    if (!member(f, big)) return false;
  return true;
}

inline bool same_ideal(const Gens& a, const Gens& b) { return contains_all(a, b) && contains_all(b, a); }

// V(gens) inside the chart (units inverted) is empty; field mode
inline bool locus_empty(const Gens& gens, const Chart& chart) {
  if (has_unit_generator(gens)) return true;
  if (is_zero_ideal(gens)) return false;
  int n = chart.nvars();
  std::vector<gb::GPoly> in;
  bool localized = !chart.units.empty();
  for (auto& g : gens) {
    Poly h = g.ring().artinian() ? to_field(g) : g;
    in.push_back(gb::from_poly(localized ? h.extended(1) : h));
  }
  if (localized) {
    Poly u = to_field(chart.unit_product()).extended(1);
    Poly t = Poly::variable(n + 1, n);
    in.push_back(gb::from_poly(Poly::constant(n + 1, 1) - t * u));
  }
  try {
    return gb::unit_in(gb::basis(std::move(in)));
  } catch (const gb::BudgetExceeded&) {
    throw UnsupportedLocus("locus emptiness test exceeded the Groebner budget");
  }
}

// f vanishes on V(gens) inside the chart
inline bool vanishes_on(const Poly& f, const Gens& gens, const Chart& chart) {
  int n = chart.nvars();
  Gens ext;
  for (auto& g : gens) ext.push_back(to_field(g).extended(1));
  Poly u = to_field(chart.unit_product() * f).extended(1);
  ext.push_back(Poly::constant(n + 1, 1) - Poly::variable(n + 1, n) * u);
  Chart plain;
  plain.coords.assign(n + 1, "t");
  return locus_empty(ext, plain);
}

}  // namespace mires
