#pragma once

#include <map>
#include <vector>

#include "ideals.hpp"

namespace mires {

struct MarkedPair {
  Gens gens;
  int b = 1;
};

inline bool sing_member(const MarkedPair& P, const Point& p) { return ideal_order_at(P.gens, p) >= P.b; }

inline Gens total_transform(const Gens& gens, const Chart& child) {
  Gens out;
  for (auto& g : gens) out.push_back(substitute(g, child.parent_map));
  return out;
}

// total transform divided by the b-th power of the exceptional coordinate
inline Gens controlled_transform(const Gens& gens, int b, const Chart& child, int pair_index = -1) {
  Gens out;
  for (auto& g : total_transform(gens, child)) {
    Poly q;
    if (!divide_by_var_power(g, child.exc_coord, b, q))
      throw NotPermissible("center is not permissible: exceptional power " + std::to_string(b) + " does not divide",
                           pair_index);
    out.push_back(std::move(q));
  }
  return out;
}

// order along the blown-up center; w are the coordinates defining W
inline int center_order(const Gens& gens, const Chart& child, const std::vector<int>& w) {
  return nu_along(gens, child.center, w);
}

// total transform divided by the largest possible exceptional power
inline Gens proper_transform(const Gens& gens, const Chart& child, const std::vector<int>& w, int* exponent = nullptr) {
  int a = center_order(gens, child, w);
  if (exponent) *exponent = a;
  if (a == kInf) return total_transform(gens, child);
  Gens out;
  for (auto& g : total_transform(gens, child)) {
    Poly q;
    if (!divide_by_var_power(g, child.exc_coord, a, q)) throw Error("proper transform: inexact division");
    out.push_back(std::move(q));
  }
  return out;
}

// proper factorization I = Ibar * prod E_q^{a_q}, generator by generator
struct ProperLedger {
  Gens proper;
  std::map<int, int> exps;  // hypersurface id -> exponent
};

inline ProperLedger initial_ledger(const Gens& gens) { return ProperLedger{gens, {}}; }

// monomial in the chart coordinates carrying the ledger hypersurfaces
inline Exps ledger_monomial(const ProperLedger& L, const Chart& c) {
  Exps e(c.nvars(), 0);
  for (auto& [h, a] : L.exps) {
    auto k = c.coord_of(h);
    if (k) e[*k] += a;
  }
  return e;
}

inline bool ledger_identity(const ProperLedger& L, const Gens& controlled, const Chart& c) {
  if (L.proper.size() != controlled.size()) return false;
  Exps m = ledger_monomial(L, c);
  for (std::size_t k = 0; k < controlled.size(); ++k)
    if (L.proper[k].times_monomial(m) != controlled[k]) return false;
  return true;
}

// ledger after blowing up the child's center; parent is the chart the center lives in
inline ProperLedger update_ledger(const ProperLedger& L, int b, const Chart& parent, const Chart& child,
                                  const std::vector<int>& w) {
  ProperLedger out;
  int c = 0;
  out.proper = proper_transform(L.proper, child, w, &c);
  out.exps = L.exps;
  if (c == kInf) {
    out.exps[child.exceptional] = 0;
    return out;
  }
  int a = c - b;
  for (auto& [h, e] : L.exps) {
    auto k = parent.coord_of(h);
    if (k && std::find(child.center.begin(), child.center.end(), *k) != child.center.end()) a += e;
  }
  if (a < 0) throw NotPermissible("negative exceptional exponent in the proper factorization");
  out.exps[child.exceptional] = a;
  return out;
}

}  // namespace mires
