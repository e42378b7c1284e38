#pragma once

#include <algorithm>
#include <compare>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "rational.hpp"

namespace mires {

// (-p, ratio, increasing 1-based hypersurface indices), compared lexicographically
// with the index sequence padded by zeros
struct GammaValue {
  int neg_p = 0;
  Rat ratio;
  std::vector<int> seq;

  std::strong_ordering operator<=>(const GammaValue& o) const {
    if (neg_p != o.neg_p) return neg_p <=> o.neg_p;
    if (ratio != o.ratio) return ratio < o.ratio ? std::strong_ordering::less : std::strong_ordering::greater;
    std::size_t n = std::max(seq.size(), o.seq.size());
    for (std::size_t k = 0; k < n; ++k) {
      int a = k < seq.size() ? seq[k] : 0, b = k < o.seq.size() ? o.seq[k] : 0;
      if (a != b) return a <=> b;
    }
    return std::strong_ordering::equal;
  }
  bool operator==(const GammaValue& o) const { return (*this <=> o) == 0; }
};

inline std::string to_string(const GammaValue& g) {
  std::string s = "(" + std::to_string(g.neg_p) + ", " + to_string(g.ratio) + ", [";
  for (std::size_t k = 0; k < g.seq.size(); ++k) s += (k ? "," : "") + std::to_string(g.seq[k]);
  return s + "])";
}

struct MonomialPair {
  int b = 1;
  std::vector<int> exps;  // one per hypersurface
};

using Stratum = std::vector<int>;  // sorted 0-based hypersurface indices

// pairs monomial in the hypersurfaces of E, with the list of nonempty strata
// (a stratum is the set of hypersurfaces through a point)
struct MonomialForm {
  int nhyps = 0;
  std::vector<MonomialPair> pairs;
  std::set<Stratum> strata;
};

inline std::set<Stratum> all_strata(int m) {
  std::set<Stratum> out;
  for (unsigned mask = 0; mask < (1u << m); ++mask) {
    Stratum s;
    for (int i = 0; i < m; ++i)
      if ((mask >> i) & 1) s.push_back(i);
    out.insert(s);
  }
  return out;
}

inline MonomialForm make_monomial_form(std::vector<MonomialPair> pairs) {
  MonomialForm F;
  if (pairs.empty()) throw InputError("monomial form without pairs");
  F.nhyps = static_cast<int>(pairs[0].exps.size());
  if (F.nhyps > 16) throw InputError("too many hypersurfaces for a monomial form");
  for (auto& p : pairs) {
    if (p.b < 1) throw InputError("marks must be positive");
    if (static_cast<int>(p.exps.size()) != F.nhyps) throw InputError("exponent vectors differ in length");
    for (int a : p.exps)
      if (a < 0) throw InputError("negative exponent");
  }
  F.pairs = std::move(pairs);
  F.strata = all_strata(F.nhyps);
  return F;
}

inline int stratum_sum(const MonomialPair& p, const Stratum& T) {
  int s = 0;
  for (int i : T) s += p.exps[i];
  return s;
}

inline bool stratum_singular(const MonomialForm& F, const Stratum& T) {
  for (auto& p : F.pairs)
    if (stratum_sum(p, T) < p.b) return false;
  return true;
}

inline std::vector<Stratum> singular_strata(const MonomialForm& F) {
  std::vector<Stratum> out;
  for (auto& T : F.strata)
    if (stratum_singular(F, T)) out.push_back(T);
  return out;
}

// Gamma at the points of stratum T, which must be singular
inline GammaValue gamma(const MonomialForm& F, const Stratum& T) {
  if (!stratum_singular(F, T)) throw InputError("gamma is defined on the singular set only");
  struct Pick {
    int p;
    int sum;
    int b;
    std::vector<int> seq;
  };
  std::vector<Pick> picks;
  for (auto& pr : F.pairs) {
    std::vector<int> order = T;
    // larger exponent first, larger index first among ties
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      if (pr.exps[a] != pr.exps[b]) return pr.exps[a] > pr.exps[b];
      return a > b;
    });
    int sum = 0;
    std::size_t p = 0;
    while (p < order.size() && sum < pr.b) sum += pr.exps[order[p++]];
    if (sum < pr.b) continue;
    std::vector<int> seq(order.begin(), order.begin() + static_cast<long>(p));
    for (auto& i : seq) ++i;
    std::sort(seq.begin(), seq.end());
    picks.push_back({static_cast<int>(p), sum, pr.b, seq});
  }
  GammaValue best;
  bool any = false;
  for (auto& pk : picks) {
    GammaValue g{-pk.p, ratio(pk.sum, pk.b), pk.seq};
    if (!any || g > best) best = g;
    any = true;
  }
  return best;
}

struct MonomialCenter {
  Stratum hyps;  // the center is the intersection of these hypersurfaces
  GammaValue value;
};

// Max(Gamma) as the intersection of the hypersurfaces of its smallest stratum
inline MonomialCenter canonical_monomial_center(const MonomialForm& F) {
  auto sing = singular_strata(F);
  if (sing.empty()) throw InputError("singular set is empty");
  GammaValue top;
  bool any = false;
  for (auto& T : sing) {
    GammaValue g = gamma(F, T);
    if (!any || g > top) top = g;
    any = true;
  }
  std::vector<Stratum> winners;
  for (auto& T : sing)
    if (gamma(F, T) == top) winners.push_back(T);
  Stratum S = winners[0];
  for (auto& T : winners) {
    Stratum both;
    std::set_intersection(S.begin(), S.end(), T.begin(), T.end(), std::back_inserter(both));
    S = both;
  }
  // the intersection must be a winner itself, and every stratum in it must win
  for (auto& T : F.strata)
    if (std::includes(T.begin(), T.end(), S.begin(), S.end()))
      if (!stratum_singular(F, T) || gamma(F, T) != top) throw UnsupportedLocus("Max(Gamma) is not a stratum closure");
  return {S, top};
}

inline MonomialForm monomial_transform(const MonomialForm& F, const Stratum& center) {
  if (center.empty()) throw InputError("empty monomial center");
  MonomialForm out;
  out.nhyps = F.nhyps + 1;
  int e = F.nhyps;
  for (std::size_t q = 0; q < F.pairs.size(); ++q) {
    auto& pr = F.pairs[q];
    int a = stratum_sum(pr, center) - pr.b;
    if (a < 0) throw NotPermissible("center is not permissible for pair " + std::to_string(q + 1), static_cast<int>(q));
    MonomialPair np = pr;
    np.exps.push_back(a);
    out.pairs.push_back(np);
  }
  auto contains_center = [&](const Stratum& T) { return std::includes(T.begin(), T.end(), center.begin(), center.end()); };
  for (auto& T : F.strata) {
    if (!contains_center(T)) out.strata.insert(T);
  }
  // points over the stratum U >= center lie on E' and on the strict transforms
  // of U \ center plus a proper part of the center
  for (auto& U : F.strata) {
    if (!contains_center(U)) continue;
    Stratum base;
    std::set_difference(U.begin(), U.end(), center.begin(), center.end(), std::back_inserter(base));
    std::size_t k = center.size();
    for (unsigned mask = 0; mask + 1 < (1u << k); ++mask) {
      Stratum T = base;
      for (std::size_t i = 0; i < k; ++i)
        if ((mask >> i) & 1) T.push_back(center[i]);
      T.push_back(e);
      std::sort(T.begin(), T.end());
      out.strata.insert(T);
    }
  }
  return out;
}

inline Stratum to_one_based(Stratum s) {
  for (auto& i : s) ++i;
  return s;
}

struct MonomialStep {
  Stratum center;  // 0-based
  GammaValue value;
};

inline std::vector<MonomialStep> resolve_monomial(MonomialForm F, int step_cap = 64, MonomialForm* final_form = nullptr) {
  std::vector<MonomialStep> trace;
  while (!singular_strata(F).empty()) {
    if (static_cast<int>(trace.size()) >= step_cap) throw NonTermination("monomial resolution exceeded the step cap");
    auto c = canonical_monomial_center(F);
    trace.push_back({c.hyps, c.value});
    F = monomial_transform(F, c.hyps);
  }
  if (final_form) *final_form = F;
  return trace;
}

inline std::string to_string(const MonomialForm& F) {
  std::string s;
  for (auto& p : F.pairs) {
    s += "pair b=" + std::to_string(p.b) + " exps=[";
    for (std::size_t k = 0; k < p.exps.size(); ++k) s += (k ? "," : "") + std::to_string(p.exps[k]);
    s += "]\n";
  }
  return s;
}

// one pair per line: `pair b=4 exps=[2,3]`; ';' also separates pairs
inline MonomialForm parse_monomial_form(const std::string& text) {
  std::vector<MonomialPair> pairs;
  std::string norm = text;
  std::replace(norm.begin(), norm.end(), ';', '\n');
  std::istringstream in(norm);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    auto fail = [&](const std::string& what) {
      throw InputError("monomial form line " + std::to_string(lineno) + ": " + what);
    };
    std::istringstream ls(line.substr(first));
    std::string word;
    ls >> word;
    if (word != "pair") fail("expected 'pair'");
    MonomialPair p;
    bool have_b = false, have_e = false;
    std::string rest;
    std::getline(ls, rest);
    auto bpos = rest.find("b=");
    if (bpos != std::string::npos) {
      try {
        p.b = std::stoi(rest.substr(bpos + 2));
      } catch (...) {
        fail("bad mark");
      }
      have_b = true;
    }
    auto epos = rest.find("exps=[");
    if (epos != std::string::npos) {
      auto close = rest.find(']', epos);
      if (close == std::string::npos) fail("missing ']'");
      std::string body = rest.substr(epos + 6, close - epos - 6);
      std::replace(body.begin(), body.end(), ',', ' ');
      std::istringstream es(body);
      std::string tok;
      while (es >> tok) {
        try {
          std::size_t used = 0;
          p.exps.push_back(std::stoi(tok, &used));
          if (used != tok.size()) fail("bad exponent '" + tok + "'");
        } catch (const InputError&) {
          throw;
        } catch (...) {
          fail("bad exponent '" + tok + "'");
        }
      }
      have_e = true;
    }
    if (!have_b || !have_e) fail("expected b=<mark> and exps=[...]");
    pairs.push_back(p);
  }
  return make_monomial_form(std::move(pairs));
}

}  // namespace mires
