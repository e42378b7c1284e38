#pragma once

#include <algorithm>
#include <set>
#include <vector>

#include "poly.hpp"

// Buchberger over Q with graded reverse lexicographic order. Artinian
// coefficients are handled by adjoining eps as an extra variable.
namespace mires::gb {

struct BudgetExceeded : Error {
  using Error::Error;
};

struct Term {
  Exps e;
  Rat c;
};
using GPoly = std::vector<Term>;  // strictly decreasing in grevlex

inline bool grevlex_greater(const Exps& a, const Exps& b) {
  int da = degree(a), db = degree(b);
  if (da != db) return da > db;
  for (int i = static_cast<int>(a.size()) - 1; i >= 0; --i)
    if (a[i] != b[i]) return a[i] < b[i];
  return false;
}

inline bool divides(const Exps& a, const Exps& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

inline Exps lcm(const Exps& a, const Exps& b) {
  Exps r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = std::max(a[i], b[i]);
  return r;
}

inline bool coprime(const Exps& a, const Exps& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] && b[i]) return false;
  return true;
}

// field-mode polynomial to GPoly
inline GPoly from_poly(const Poly& f) {
  GPoly r;
  for (auto& [e, c] : f.terms()) {
    for (int k = 1; k < c.m(); ++k)
      if (c.parts[k] != 0) throw InputError("from_poly expects rational coefficients");
    r.push_back({e, c.parts[0]});
  }
  std::sort(r.begin(), r.end(), [](const Term& a, const Term& b) { return grevlex_greater(a.e, b.e); });
  return r;
}

// artinian polynomial with eps as the trailing variable
inline GPoly from_poly_eps(const Poly& f) {
  GPoly r;
  int n = f.nvars();
  for (auto& [e, c] : f.terms())
    for (int k = 0; k < c.m(); ++k) {
      if (c.parts[k] == 0) continue;
      Exps g = e;
      g.resize(n + 1);
      g[n] = k;
      r.push_back({g, c.parts[k]});
    }
  std::sort(r.begin(), r.end(), [](const Term& a, const Term& b) { return grevlex_greater(a.e, b.e); });
  return r;
}

inline Poly to_poly(const GPoly& g, int nvars) {
  Poly r(nvars);
  for (auto& t : g) r.add_term(t.e, Coef(1, t.c));
  return r;
}

inline void make_monic(GPoly& f) {
  if (f.empty()) return;
  Rat l = f[0].c;
  if (l == 1) return;
  for (auto& t : f) t.c /= l;
}

// f - c * x^m * g
inline GPoly sub_mul(const GPoly& f, const Rat& c, const Exps& m, const GPoly& g) {
  GPoly r;
  r.reserve(f.size() + g.size());
  std::size_t i = 0, j = 0;
  Exps tmp(m.size());
  auto shifted = [&](std::size_t k) {
    for (std::size_t v = 0; v < m.size(); ++v) tmp[v] = g[k].e[v] + m[v];
    return tmp;
  };
  while (i < f.size() || j < g.size()) {
    if (j == g.size()) {
      r.push_back(f[i++]);
      continue;
    }
    Exps s = shifted(j);
    if (i == f.size() || grevlex_greater(s, f[i].e)) {
      r.push_back({s, -c * g[j].c});
      ++j;
    } else if (grevlex_greater(f[i].e, s)) {
      r.push_back(f[i++]);
    } else {
      Rat v = f[i].c - c * g[j].c;
      if (v != 0) r.push_back({s, v});
      ++i;
      ++j;
    }
  }
  return r;
}

inline GPoly normal_form(GPoly f, const std::vector<GPoly>& G) {
  GPoly rem;
  while (!f.empty()) {
    const Term& lt = f[0];
    const GPoly* div = nullptr;
    for (auto& g : G)
      if (!g.empty() && divides(g[0].e, lt.e)) {
        div = &g;
        break;
      }
    if (div) {
      Exps m(lt.e.size());
      for (std::size_t v = 0; v < m.size(); ++v) m[v] = lt.e[v] - (*div)[0].e[v];
      f = sub_mul(f, lt.c / (*div)[0].c, m, *div);
    } else {
      rem.push_back(lt);
      f.erase(f.begin());
    }
  }
  return rem;
}

struct Options {
  std::size_t max_pairs = 200000;
};

// reduced Groebner basis; {1} for the unit ideal, {} for the zero ideal
inline std::vector<GPoly> basis(std::vector<GPoly> input, const Options& opt = {}) {
  std::vector<GPoly> G;
  for (auto& f : input) {
    if (f.empty()) continue;
    make_monic(f);
    G.push_back(std::move(f));
  }
  auto is_unit = [](const GPoly& g) { return g.size() == 1 && degree(g[0].e) == 0; };
  for (auto& g : G)
    if (is_unit(g)) return {g};

  struct Pair {
    std::size_t i, j;
    Exps l;
  };
  std::vector<Pair> pairs;
  auto add_pairs = [&](std::size_t k) {
    for (std::size_t i = 0; i < k; ++i) pairs.push_back({i, k, lcm(G[i][0].e, G[k][0].e)});
  };
  for (std::size_t k = 1; k < G.size(); ++k) add_pairs(k);

  std::size_t processed = 0;
  while (!pairs.empty()) {
    if (++processed > opt.max_pairs) throw BudgetExceeded("Groebner basis budget exceeded");
    // normal selection: smallest lcm in grevlex
    std::size_t best = 0;
    for (std::size_t k = 1; k < pairs.size(); ++k)
      if (grevlex_greater(pairs[best].l, pairs[k].l)) best = k;
    Pair p = pairs[best];
    pairs.erase(pairs.begin() + static_cast<long>(best));
    const GPoly& a = G[p.i];
    const GPoly& b = G[p.j];
    if (coprime(a[0].e, b[0].e)) continue;
    // chain criterion
    bool skip = false;
    for (std::size_t k = 0; k < G.size() && !skip; ++k) {
      if (k == p.i || k == p.j) continue;
      if (!divides(G[k][0].e, p.l)) continue;
      auto pending = [&](std::size_t u, std::size_t v) {
        if (u > v) std::swap(u, v);
        for (auto& q : pairs)
          if (q.i == u && q.j == v) return true;
        return false;
      };
      if (!pending(p.i, k) && !pending(p.j, k)) skip = true;
    }
    if (skip) continue;
    Exps ma(p.l.size()), mb(p.l.size());
    for (std::size_t v = 0; v < p.l.size(); ++v) {
      ma[v] = p.l[v] - a[0].e[v];
      mb[v] = p.l[v] - b[0].e[v];
    }
    GPoly s = sub_mul(GPoly{}, Rat(-1) / a[0].c, ma, a);
    s = sub_mul(s, Rat(1) / b[0].c, mb, b);
    GPoly r = normal_form(std::move(s), G);
    if (r.empty()) continue;
    make_monic(r);
    if (is_unit(r)) return {r};
    G.push_back(std::move(r));
    add_pairs(G.size() - 1);
  }
  // minimal basis, then interreduce
  std::vector<GPoly> min;
  for (std::size_t k = 0; k < G.size(); ++k) {
    bool redundant = false;
    for (std::size_t i = 0; i < G.size() && !redundant; ++i) {
      if (i == k || !divides(G[i][0].e, G[k][0].e)) continue;
      if (G[i][0].e != G[k][0].e || i < k) redundant = true;
    }
    if (!redundant) min.push_back(G[k]);
  }
  std::sort(min.begin(), min.end(), [](const GPoly& a, const GPoly& b) { return grevlex_greater(b[0].e, a[0].e); });
  std::vector<GPoly> red;
  for (std::size_t k = 0; k < min.size(); ++k) {
    std::vector<GPoly> others;
    for (std::size_t i = 0; i < min.size(); ++i)
      if (i != k) others.push_back(min[i]);
    GPoly head{min[k][0]};
    GPoly tail(min[k].begin() + 1, min[k].end());
    GPoly r = normal_form(tail, others);
    head.insert(head.end(), r.begin(), r.end());
    red.push_back(head);
  }
  return red;
}

inline bool unit_in(const std::vector<GPoly>& G) {
  return G.size() == 1 && G[0].size() == 1 && degree(G[0][0].e) == 0;
}

}  // namespace mires::gb
