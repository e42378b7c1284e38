#pragma once

#include <algorithm>
#include <set>
#include <vector>

#include "poly.hpp"

namespace mires::uni {

// dense coefficients over Q, index = degree, no trailing zeros
using UPoly = std::vector<Rat>;

inline void trim(UPoly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

inline int deg(const UPoly& f) { return static_cast<int>(f.size()) - 1; }

// f must only involve coordinate var and have fiber-only coefficients
inline UPoly from_poly(const Poly& f, int var) {
  UPoly r;
  for (auto& [e, c] : f.terms()) {
    for (int i = 0; i < f.nvars(); ++i)
      if (i != var && e[i] != 0) throw InputError("polynomial is not univariate");
    for (int k = 1; k < c.m(); ++k)
      if (c.parts[k] != 0) throw InputError("univariate helpers need rational coefficients");
    if (static_cast<int>(r.size()) <= e[var]) r.resize(e[var] + 1);
    r[e[var]] = c.parts[0];
  }
  trim(r);
  return r;
}

inline Poly to_poly(const UPoly& f, int nvars, int var, CoefRing ring = {}) {
  Poly r(nvars, ring);
  for (int k = 0; k <= deg(f); ++k) {
    if (f[k] == 0) continue;
    Exps e(nvars, 0);
    e[var] = k;
    r.add_term(e, Coef(ring.m, f[k]));
  }
  return r;
}

inline UPoly derivative(const UPoly& f) {
  UPoly r;
  for (int k = 1; k <= deg(f); ++k) r.push_back(f[k] * k);
  trim(r);
  return r;
}

inline void divmod(const UPoly& a, const UPoly& b, UPoly& q, UPoly& r) {
  r = a;
  q.assign(std::max(0, deg(a) - deg(b) + 1), Rat(0));
  while (!r.empty() && deg(r) >= deg(b)) {
    int s = deg(r) - deg(b);
    Rat c = r.back() / b.back();
    q[s] = c;
    for (int k = 0; k <= deg(b); ++k) r[s + k] -= c * b[k];
    trim(r);
  }
  trim(q);
}

inline UPoly monic(UPoly f) {
  if (f.empty()) return f;
  Rat l = f.back();
  for (auto& c : f) c /= l;
  return f;
}

inline UPoly gcd(UPoly a, UPoly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    UPoly q, r;
    divmod(a, b, q, r);
    a = std::move(b);
    b = std::move(r);
  }
  return monic(a);
}

inline Rat eval(const UPoly& f, const Rat& x) {
  Rat v = 0;
  for (int k = deg(f); k >= 0; --k) v = v * x + f[k];
  return v;
}

inline int multiplicity(UPoly f, const Rat& x) {
  if (f.empty()) return kInf;
  int m = 0;
  UPoly lin = {-x, Rat(1)};
  for (;;) {
    UPoly q, r;
    divmod(f, lin, q, r);
    if (!r.empty()) return m;
    ++m;
    f = std::move(q);
  }
}

inline std::vector<Int> divisors(Int n) {
  if (n < 0) n = -n;
  std::vector<Int> d;
  if (n == 0) return d;
  // trial division; inputs here are small
  for (Int k = 1; k * k <= n; ++k) {
    if (n % k == 0) {
      d.push_back(k);
      if (k * k != n) d.push_back(n / k);
    }
  }
  std::sort(d.begin(), d.end());
  return d;
}

// rational roots with multiplicities, ascending
inline std::vector<std::pair<Rat, int>> rational_roots(const UPoly& f0) {
  std::vector<std::pair<Rat, int>> out;
  UPoly f = f0;
  trim(f);
  if (deg(f) <= 0) return out;
  int z = 0;
  while (f[z] == 0) ++z;
  if (z > 0) {
    out.push_back({Rat(0), z});
    f.erase(f.begin(), f.begin() + z);
  }
  UPoly full = f;
  if (deg(f) >= 1) {
    // squarefree part keeps the coefficients small
    UPoly q, r;
    divmod(f, gcd(f, derivative(f)), q, r);
    f = q;
  }
  if (deg(f) >= 1) {
    // integer coefficients
    Int l = 1;
    for (auto& c : f) l = lcm(l, Int(c.get_den()));
    std::vector<Int> a;
    for (auto& c : f) a.push_back(Int(c * l));
    Int g = 0;
    for (auto& v : a) g = gcd(g, v);
    for (auto& v : a) v /= g;
    auto ps = divisors(a.front());
    auto qs = divisors(a.back());
    std::set<Rat> cand;
    for (auto& p : ps)
      for (auto& q : qs) {
        Rat r(p, q);
        r.canonicalize();
        cand.insert(r);
        cand.insert(-r);
      }
    for (auto& r : cand)
      if (eval(f, r) == 0) out.push_back({r, multiplicity(full, r)});
  }
  std::sort(out.begin(), out.end(), [](auto& x, auto& y) { return x.first < y.first; });
  return out;
}

// f divided by all its rational linear factors
inline UPoly strip_rational_roots(UPoly f) {
  for (auto& [r, m] : rational_roots(f)) {
    UPoly lin = {-r, Rat(1)};
    for (int k = 0; k < m; ++k) {
      UPoly q, rem;
      divmod(f, lin, q, rem);
      f = q;
    }
  }
  return f;
}

}  // namespace mires::uni
