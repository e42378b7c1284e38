#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "poly.hpp"

namespace mires {

struct HypersurfaceRecord {
  int id = -1;
  std::string name;
  bool exceptional = false;
  int born_step = 0;  // step of the transform that created it; 0 for input
};

enum class ChartKind { root, blowup, change, translate, localize };

inline const char* kind_name(ChartKind k) {
  switch (k) {
    case ChartKind::root: return "root";
    case ChartKind::blowup: return "blowup";
    case ChartKind::change: return "change";
    case ChartKind::translate: return "translate";
    case ChartKind::localize: return "localize";
  }
  return "?";
}

struct Chart {
  int id = -1;
  ChartKind kind = ChartKind::root;
  std::vector<std::string> coords;
  CoefRing ring;
  int parent = -1;
  std::vector<Poly> parent_map;  // images of the parent coordinates
  std::vector<Poly> inverse_map;  // own coordinates over the parent (changes only)
  std::map<int, int> hyp_coord;  // hypersurface id -> defining coordinate
  std::vector<int> w_coords;     // W = V(x_w : w in w_coords)
  std::vector<Poly> units;       // chart is the locus where these do not vanish
  // blow-up data
  std::vector<int> center;  // center coordinates in the parent
  int exc_coord = -1;
  int exceptional = -1;

  int nvars() const { return static_cast<int>(coords.size()); }
  bool in_w(int i) const { return std::find(w_coords.begin(), w_coords.end(), i) != w_coords.end(); }
  std::optional<int> coord_of(int hyp) const {
    auto it = hyp_coord.find(hyp);
    if (it == hyp_coord.end()) return std::nullopt;
    return it->second;
  }
  std::optional<int> hyp_at(int coord) const {
    for (auto& [h, c] : hyp_coord)
      if (c == coord) return h;
    return std::nullopt;
  }
  Poly var(int i) const { return Poly::variable(nvars(), i, ring); }
  Poly zero() const { return Poly(nvars(), ring); }
  Poly one() const { return Poly::constant(nvars(), 1, ring); }
  Poly unit_product() const {
    Poly u = one();
    for (auto& f : units) u *= f;
    return u;
  }
  bool contains(const Point& p) const {
    for (auto& u : units)
      if (evaluate(u, p).is_zero()) return false;
    return true;
  }
};

struct BlowupResult {
  std::vector<int> charts;  // one per center coordinate outside W
  int exceptional = -1;
};

// Chart tree. Charts are append-only; blow-ups are memoized so that every
// object sharing a chart gets the same children.
class Atlas {
 public:
  int add_root(std::vector<std::string> coords, CoefRing ring = {}, std::vector<int> w = {}) {
    Chart c;
    c.id = static_cast<int>(charts_.size());
    c.coords = std::move(coords);
    c.ring = ring;
    std::sort(w.begin(), w.end());
    c.w_coords = std::move(w);
    charts_.push_back(std::move(c));
    return charts_.back().id;
  }

  int add_hypersurface(std::string name, bool exceptional, int born_step) {
    HypersurfaceRecord h;
    h.id = static_cast<int>(hyps_.size());
    h.name = std::move(name);
    h.exceptional = exceptional;
    h.born_step = born_step;
    hyps_.push_back(h);
    return h.id;
  }

  void align(int chart, int hyp, int coord) {
    Chart& c = charts_.at(chart);
    if (coord < 0 || coord >= c.nvars()) throw InputError("hypersurface coordinate out of range");
    if (c.in_w(coord)) throw InputError("hypersurface not transversal to W");
    if (c.hyp_at(coord)) throw InputError("two hypersurfaces on one coordinate");
    c.hyp_coord[hyp] = coord;
  }

  const Chart& chart(int id) const { return charts_.at(id); }
  const HypersurfaceRecord& hyp(int id) const { return hyps_.at(id); }
  int chart_count() const { return static_cast<int>(charts_.size()); }
  int hyp_count() const { return static_cast<int>(hyps_.size()); }
  const std::vector<HypersurfaceRecord>& hypersurfaces() const { return hyps_; }

  BlowupResult blowup(int chart_id, std::vector<int> center, int exceptional) {
    std::sort(center.begin(), center.end());
    center.erase(std::unique(center.begin(), center.end()), center.end());
    auto key = std::make_pair(chart_id, center);
    auto it = memo_.find(key);
    if (it != memo_.end()) {
      if (it->second.exceptional != exceptional) throw Error("chart blown up twice along the same center");
      return it->second;
    }
    const Chart parent = charts_.at(chart_id);
    if (center.empty()) throw InputError("empty center");
    for (int i : center)
      if (i < 0 || i >= parent.nvars()) throw InputError("center coordinate out of range");
    for (int w : parent.w_coords)
      if (!std::binary_search(center.begin(), center.end(), w)) throw InputError("center not inside W");
    BlowupResult res;
    res.exceptional = exceptional;
    for (int i : center) {
      if (parent.in_w(i)) continue;
      Chart c;
      c.id = static_cast<int>(charts_.size());
      c.kind = ChartKind::blowup;
      c.coords = parent.coords;
      c.ring = parent.ring;
      c.parent = chart_id;
      c.w_coords = parent.w_coords;
      c.center = center;
      c.exc_coord = i;
      c.exceptional = exceptional;
      int n = parent.nvars();
      c.parent_map = identity_map(n, parent.ring);
      for (int j : center)
        if (j != i && !parent.in_w(j)) c.parent_map[j] = c.var(i) * c.var(j);
      for (auto& [h, k] : parent.hyp_coord)
        if (k != i) c.hyp_coord[h] = k;
      c.hyp_coord[exceptional] = i;
      for (auto& u : parent.units) c.units.push_back(substitute(u, c.parent_map));
      res.charts.push_back(c.id);
      charts_.push_back(std::move(c));
    }
    memo_[key] = res;
    return res;
  }

  // new coordinate x_pivot' = eq; returns the same chart for eq = x_pivot
  int triangular_change(int chart_id, int pivot, const Poly& eq) {
    const Chart parent = charts_.at(chart_id);
    int n = parent.nvars();
    if (pivot < 0 || pivot >= n) throw InputError("pivot out of range");
    if (eq.nvars() != n) throw InputError("equation lives in another chart");
    Exps lin(n, 0);
    lin[pivot] = 1;
    Coef a = eq.coefficient(lin);
    if (a.is_zero() || !a.is_unit()) throw InputError("no invertible linear term on the pivot");
    for (int k = 1; k < a.m(); ++k)
      if (a.parts[k] != 0) throw InputError("pivot coefficient must be rational");
    Poly rest = eq - Poly::monomial(lin, a.parts[0], eq.ring());
    if (depends_on(rest, pivot)) throw InputError("equation is not triangular in the pivot");
    if (rest.is_zero() && a.parts[0] == 1) return chart_id;
    if (parent.in_w(pivot)) throw InputError("pivot is a W coordinate");
    if (!rest.is_zero() && parent.hyp_at(pivot))
      throw UnsupportedLocus("coordinate change would break alignment of a hypersurface");
    Chart c;
    c.id = static_cast<int>(charts_.size());
    c.kind = ChartKind::change;
    c.coords = parent.coords;
    c.ring = parent.ring;
    c.parent = chart_id;
    c.w_coords = parent.w_coords;
    c.hyp_coord = parent.hyp_coord;
    c.parent_map = identity_map(n, parent.ring);
    c.parent_map[pivot] = (c.var(pivot) - rest).scaled(1 / a.parts[0]);
    c.inverse_map = identity_map(n, parent.ring);
    c.inverse_map[pivot] = eq;
    for (auto& u : parent.units) c.units.push_back(substitute(u, c.parent_map));
    charts_.push_back(std::move(c));
    return charts_.back().id;
  }

  // new coordinates x' = x - offset
  int translate(int chart_id, const Point& offset) {
    const Chart parent = charts_.at(chart_id);
    int n = parent.nvars();
    if (static_cast<int>(offset.size()) != n) throw InputError("offset dimension mismatch");
    bool trivial = true;
    for (int i = 0; i < n; ++i) {
      if (offset[i] == 0) continue;
      trivial = false;
      if (parent.in_w(i)) throw InputError("translation along a W coordinate");
      if (parent.hyp_at(i)) throw UnsupportedLocus("translation would break alignment of a hypersurface");
    }
    if (trivial) return chart_id;
    Chart c;
    c.id = static_cast<int>(charts_.size());
    c.kind = ChartKind::translate;
    c.coords = parent.coords;
    c.ring = parent.ring;
    c.parent = chart_id;
    c.w_coords = parent.w_coords;
    c.hyp_coord = parent.hyp_coord;
    c.parent_map = identity_map(n, parent.ring);
    c.inverse_map = identity_map(n, parent.ring);
    for (int i = 0; i < n; ++i)
      if (offset[i] != 0) {
        c.parent_map[i] += Poly::constant(n, offset[i], parent.ring);
        c.inverse_map[i] -= Poly::constant(n, offset[i], parent.ring);
      }
    for (auto& u : parent.units) c.units.push_back(substitute(u, c.parent_map));
    charts_.push_back(std::move(c));
    return charts_.back().id;
  }

  // open subset where f does not vanish
  int localize(int chart_id, const Poly& f) {
    const Chart parent = charts_.at(chart_id);
    Chart c;
    c.id = static_cast<int>(charts_.size());
    c.kind = ChartKind::localize;
    c.coords = parent.coords;
    c.ring = parent.ring;
    c.parent = chart_id;
    c.w_coords = parent.w_coords;
    c.parent_map = identity_map(parent.nvars(), parent.ring);
    c.units = parent.units;
    c.units.push_back(f);
    for (auto& [h, k] : parent.hyp_coord)
      if (var_power_dividing(f, k) == 0) c.hyp_coord[h] = k;
    charts_.push_back(std::move(c));
    return charts_.back().id;
  }

  // parent-chart coordinates of a point given in the child chart
  Point to_parent(int chart_id, const Point& p) const {
    const Chart& c = charts_.at(chart_id);
    Point q;
    for (auto& g : c.parent_map) q.push_back(evaluate(g, p).parts[0]);
    return q;
  }

  Point to_root(int chart_id, Point p) const {
    while (charts_.at(chart_id).parent >= 0) {
      p = to_parent(chart_id, p);
      chart_id = charts_.at(chart_id).parent;
    }
    return p;
  }

  // child-chart coordinates of a parent point, if the point lies in the child
  // and off the exceptional divisor
  std::optional<Point> to_child(int chart_id, const Point& p) const {
    const Chart& c = charts_.at(chart_id);
    Point q = p;
    switch (c.kind) {
      case ChartKind::root:
        break;
      case ChartKind::blowup: {
        Rat xi = p[c.exc_coord];
        if (xi == 0) return std::nullopt;
        for (int j : c.center)
          if (j != c.exc_coord && !c.in_w(j)) q[j] = p[j] / xi;
        break;
      }
      case ChartKind::change:
      case ChartKind::translate:
        for (int i = 0; i < c.nvars(); ++i) q[i] = evaluate(c.inverse_map[i], p).parts[0];
        break;
      case ChartKind::localize:
        break;
    }
    if (!c.contains(q)) return std::nullopt;
    return q;
  }

  // chart ids from the root down to chart_id
  std::vector<int> lineage(int chart_id) const {
    std::vector<int> out;
    for (int c = chart_id; c >= 0; c = charts_.at(c).parent) out.push_back(c);
    std::reverse(out.begin(), out.end());
    return out;
  }

  // the same atlas with every chart over `ring` (chart data is eps-free)
  Atlas base_changed(CoefRing ring) const {
    Atlas out;
    out.extend_from(*this, ring);
    return out;
  }

  // append the charts, hypersurfaces and blow-up records that `other` has
  // beyond this atlas; `other` must extend this one
  void extend_from(const Atlas& other, CoefRing ring) {
    for (std::size_t k = charts_.size(); k < other.charts_.size(); ++k) {
      Chart c = other.charts_[k];
      c.ring = ring;
      for (auto* v : {&c.parent_map, &c.inverse_map, &c.units})
        for (auto& f : *v) f = to_ring(f, ring);
      charts_.push_back(std::move(c));
    }
    for (std::size_t k = hyps_.size(); k < other.hyps_.size(); ++k) hyps_.push_back(other.hyps_[k]);
    for (auto& [key, res] : other.memo_) memo_.emplace(key, res);
  }

 private:
  std::vector<Chart> charts_;
  std::vector<HypersurfaceRecord> hyps_;
  std::map<std::pair<int, std::vector<int>>, BlowupResult> memo_;
};

// pairwise distinct defining coordinates
inline bool normal_crossings_check(const Chart& c, const std::vector<int>& hyps) {
  std::set<int> seen;
  for (int h : hyps) {
    auto k = c.coord_of(h);
    if (!k) continue;
    if (!seen.insert(*k).second) return false;
  }
  return true;
}

inline bool normal_crossings_check(const std::vector<int>& coords) {
  std::set<int> seen(coords.begin(), coords.end());
  return seen.size() == coords.size();
}

// an aligned center always has normal crossings with aligned hypersurfaces;
// the check rejects centers outside W and hypersurfaces that are not aligned
inline bool transversal_check(const Chart& c, const std::vector<int>& center, const std::vector<int>& hyps) {
  for (int w : c.w_coords)
    if (std::find(center.begin(), center.end(), w) == center.end()) return false;
  for (int i : center)
    if (i < 0 || i >= c.nvars()) return false;
  return normal_crossings_check(c, hyps);
}

}  // namespace mires
