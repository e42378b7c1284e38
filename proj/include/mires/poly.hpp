#pragma once

#include <algorithm>
#include <cctype>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "rational.hpp"

namespace mires {

constexpr int kInf = std::numeric_limits<int>::max();

inline std::string order_str(int v) { return v == kInf ? std::string("inf") : std::to_string(v); }

// Q when m == 1, Q[eps]/(eps^m) otherwise.
struct CoefRing {
  int m = 1;
  bool artinian() const { return m > 1; }
  bool operator==(const CoefRing&) const = default;
  static CoefRing field() { return {1}; }
  static CoefRing truncated(int m) {
    if (m < 2) throw InputError("nilpotency index must be at least 2");
    return {m};
  }
};

// c0 + c1 eps + ... + c_{m-1} eps^{m-1}
struct Coef {
  std::vector<Rat> parts;

  Coef() = default;
  explicit Coef(int m) : parts(m) {}
  Coef(int m, const Rat& c0) : parts(m) { parts[0] = c0; }

  int m() const { return static_cast<int>(parts.size()); }
  bool is_zero() const {
    for (auto& p : parts)
      if (p != 0) return false;
    return true;
  }
  bool is_unit() const { return parts[0] != 0; }
  // lowest eps power with a nonzero part
  int valuation() const {
    for (int k = 0; k < m(); ++k)
      if (parts[k] != 0) return k;
    return kInf;
  }
  bool operator==(const Coef&) const = default;

  Coef& operator+=(const Coef& o) {
    for (int k = 0; k < m(); ++k) parts[k] += o.parts[k];
    return *this;
  }
  Coef& operator-=(const Coef& o) {
    for (int k = 0; k < m(); ++k) parts[k] -= o.parts[k];
    return *this;
  }
  Coef operator-() const {
    Coef r(*this);
    for (auto& p : r.parts) p = -p;
    return r;
  }
  Coef operator*(const Coef& o) const {
    Coef r(m());
    for (int i = 0; i < m(); ++i) {
      if (parts[i] == 0) continue;
      for (int j = 0; i + j < m(); ++j)
        if (o.parts[j] != 0) r.parts[i + j] += parts[i] * o.parts[j];
    }
    return r;
  }
  Coef scaled(const Rat& s) const {
    Coef r(*this);
    for (auto& p : r.parts) p *= s;
    return r;
  }
};

using Exps = std::vector<int>;

inline int degree(const Exps& e) { return std::accumulate(e.begin(), e.end(), 0); }

// graded lexicographic with x1 > x2 > ...
struct GrlexLess {
  bool operator()(const Exps& a, const Exps& b) const {
    int da = degree(a), db = degree(b);
    if (da != db) return da < db;
    return a < b;
  }
};

class Poly {
 public:
  using Terms = std::map<Exps, Coef, GrlexLess>;

  Poly() = default;
  explicit Poly(int nvars, CoefRing ring = {}) : n_(nvars), ring_(ring) {}

  static Poly constant(int nvars, const Rat& c, CoefRing ring = {}) {
    Poly f(nvars, ring);
    f.add_term(Exps(nvars, 0), Coef(ring.m, c));
    return f;
  }
  static Poly variable(int nvars, int i, CoefRing ring = {}) {
    Poly f(nvars, ring);
    Exps e(nvars, 0);
    e.at(i) = 1;
    f.add_term(e, Coef(ring.m, 1));
    return f;
  }
  static Poly monomial(const Exps& e, const Rat& c = 1, CoefRing ring = {}) {
    Poly f(static_cast<int>(e.size()), ring);
    f.add_term(e, Coef(ring.m, c));
    return f;
  }
  // eps^k as a constant polynomial
  static Poly eps(int nvars, CoefRing ring, int k = 1) {
    if (!ring.artinian()) throw InputError("eps used in field mode");
    Poly f(nvars, ring);
    Coef c(ring.m);
    if (k < ring.m) c.parts[k] = 1;
    f.add_term(Exps(nvars, 0), c);
    return f;
  }

  int nvars() const { return n_; }
  CoefRing ring() const { return ring_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  void add_term(const Exps& e, const Coef& c) {
    if (static_cast<int>(e.size()) != n_) throw InputError("monomial length mismatch");
    if (c.m() != ring_.m) throw InputError("coefficient ring mismatch");
    if (c.is_zero()) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
      terms_.emplace(e, c);
    } else {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  Coef coefficient(const Exps& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Coef(ring_.m) : it->second;
  }

  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && degree(terms_.begin()->first) == 0); }

  int total_degree() const { return terms_.empty() ? -1 : degree(terms_.rbegin()->first); }

  int degree_in(int i) const {
    int d = -1;
    for (auto& [e, c] : terms_) d = std::max(d, e[i]);
    return d;
  }

  const Exps& leading_exps() const { return terms_.rbegin()->first; }
  const Coef& leading_coef() const { return terms_.rbegin()->second; }

  bool operator==(const Poly& o) const { return n_ == o.n_ && ring_ == o.ring_ && terms_ == o.terms_; }
  bool operator!=(const Poly& o) const { return !(*this == o); }

  Poly& operator+=(const Poly& g) {
    check(g);
    for (auto& [e, c] : g.terms_) add_term(e, c);
    return *this;
  }
  Poly& operator-=(const Poly& g) {
    check(g);
    for (auto& [e, c] : g.terms_) add_term(e, -c);
    return *this;
  }
  Poly operator-() const {
    Poly r(n_, ring_);
    for (auto& [e, c] : terms_) r.terms_.emplace(e, -c);
    return r;
  }
  friend Poly operator+(Poly f, const Poly& g) { return f += g; }
  friend Poly operator-(Poly f, const Poly& g) { return f -= g; }
  friend Poly operator*(const Poly& f, const Poly& g) {
    f.check(g);
    Poly r(f.n_, f.ring_);
    Exps e(f.n_);
    for (auto& [ef, cf] : f.terms_)
      for (auto& [eg, cg] : g.terms_) {
        for (int i = 0; i < f.n_; ++i) e[i] = ef[i] + eg[i];
        r.add_term(e, cf * cg);
      }
    return r;
  }
  Poly& operator*=(const Poly& g) { return *this = *this * g; }

  Poly scaled(const Rat& s) const {
    Poly r(n_, ring_);
    if (s == 0) return r;
    for (auto& [e, c] : terms_) r.terms_.emplace(e, c.scaled(s));
    return r;
  }
  Poly times_coef(const Coef& s) const {
    Poly r(n_, ring_);
    for (auto& [e, c] : terms_) r.add_term(e, c * s);
    return r;
  }
  Poly times_monomial(const Exps& m) const {
    Poly r(n_, ring_);
    for (auto& [e, c] : terms_) {
      Exps f = e;
      for (int i = 0; i < n_; ++i) f[i] += m[i];
      r.terms_.emplace(std::move(f), c);
    }
    return r;
  }

  // embedding into a ring with extra trailing coordinates
  Poly extended(int extra) const {
    Poly r(n_ + extra, ring_);
    for (auto& [e, c] : terms_) {
      Exps f = e;
      f.resize(n_ + extra, 0);
      r.terms_.emplace(std::move(f), c);
    }
    return r;
  }

 private:
  void check(const Poly& g) const {
    if (n_ != g.n_) throw InputError("polynomials live in different charts");
    if (!(ring_ == g.ring_)) throw InputError("polynomials over different rings");
  }

  int n_ = 0;
  CoefRing ring_;
  Terms terms_;
};

inline Poly pow(const Poly& f, int k) {
  Poly r = Poly::constant(f.nvars(), 1, f.ring());
  Poly b = f;
  while (k > 0) {
    if (k & 1) r *= b;
    k >>= 1;
    if (k) b *= b;
  }
  return r;
}

inline Poly partial(const Poly& f, int i) {
  if (i < 0 || i >= f.nvars()) throw InputError("coordinate index out of range");
  Poly r(f.nvars(), f.ring());
  for (auto& [e, c] : f.terms()) {
    if (e[i] == 0) continue;
    Exps g = e;
    g[i] -= 1;
    r.add_term(g, c.scaled(e[i]));
  }
  return r;
}

// exact composition; images[i] replaces coordinate i
inline Poly substitute(const Poly& f, const std::vector<Poly>& images) {
  if (static_cast<int>(images.size()) != f.nvars()) throw InputError("substitution map has wrong length");
  if (images.empty()) return f;
  int n = images[0].nvars();
  for (auto& g : images)
    if (g.nvars() != n || !(g.ring() == f.ring())) throw InputError("substitution images disagree");
  std::vector<std::vector<Poly>> powers(f.nvars());
  auto power = [&](int i, int k) -> const Poly& {
    auto& v = powers[i];
    if (v.empty()) v.push_back(Poly::constant(n, 1, f.ring()));
    while (static_cast<int>(v.size()) <= k) v.push_back(v.back() * images[i]);
    return v[k];
  };
  Poly r(n, f.ring());
  for (auto& [e, c] : f.terms()) {
    Poly t = Poly::constant(n, 1, f.ring()).times_coef(c);
    for (int i = 0; i < f.nvars(); ++i)
      if (e[i]) t *= power(i, e[i]);
    r += t;
  }
  return r;
}

inline std::vector<Poly> identity_map(int n, CoefRing ring) {
  std::vector<Poly> m;
  for (int i = 0; i < n; ++i) m.push_back(Poly::variable(n, i, ring));
  return m;
}

using Point = std::vector<Rat>;

// f(x + p)
inline Poly translate(const Poly& f, const Point& p) {
  if (static_cast<int>(p.size()) != f.nvars()) throw InputError("point dimension mismatch");
  bool zero = std::all_of(p.begin(), p.end(), [](const Rat& v) { return v == 0; });
  if (zero) return f;
  auto m = identity_map(f.nvars(), f.ring());
  for (int i = 0; i < f.nvars(); ++i)
    if (p[i] != 0) m[i] += Poly::constant(f.nvars(), p[i], f.ring());
  return substitute(f, m);
}

// lowest total degree among terms; nilpotent coefficients count as nonzero
inline int order_at_origin(const Poly& f) {
  return f.is_zero() ? kInf : degree(f.terms().begin()->first);
}

inline int order_at_point(const Poly& f, const Point& p) { return order_at_origin(translate(f, p)); }

inline int order_along_coords(const Poly& f, const std::vector<int>& coords) {
  if (f.is_zero()) return kInf;
  int best = kInf;
  for (auto& [e, c] : f.terms()) {
    int d = 0;
    for (int i : coords) d += e.at(i);
    best = std::min(best, d);
  }
  return best;
}

inline Poly set_fiber(const Poly& f) {
  if (!f.ring().artinian()) throw InputError("set_fiber needs an artinian coefficient ring");
  Poly r(f.nvars(), f.ring());
  for (auto& [e, c] : f.terms())
    if (c.parts[0] != 0) r.add_term(e, Coef(f.ring().m, c.parts[0]));
  return r;
}

// same polynomial over Q (fiber parts only)
inline Poly to_field(const Poly& f) {
  Poly r(f.nvars(), CoefRing::field());
  for (auto& [e, c] : f.terms())
    if (c.parts[0] != 0) r.add_term(e, Coef(1, c.parts[0]));
  return r;
}

inline Poly to_ring(const Poly& f, CoefRing ring) {
  if (f.ring() == ring) return f;
  Poly r(f.nvars(), ring);
  for (auto& [e, c] : f.terms()) {
    Coef d(ring.m);
    for (int k = 0; k < std::min(ring.m, c.m()); ++k) d.parts[k] = c.parts[k];
    r.add_term(e, d);
  }
  return r;
}

inline Coef evaluate(const Poly& f, const Point& p) {
  if (static_cast<int>(p.size()) != f.nvars()) throw InputError("point dimension mismatch");
  Coef r(f.ring().m);
  for (auto& [e, c] : f.terms()) {
    Rat v = 1;
    for (int i = 0; i < f.nvars(); ++i)
      for (int k = 0; k < e[i]; ++k) v *= p[i];
    r += c.scaled(v);
  }
  return r;
}

// set the listed coordinates to zero
inline Poly restrict_zero(const Poly& f, const std::vector<int>& coords) {
  Poly r(f.nvars(), f.ring());
  for (auto& [e, c] : f.terms()) {
    bool keep = true;
    for (int i : coords)
      if (e.at(i) != 0) keep = false;
    if (keep) r.add_term(e, c);
  }
  return r;
}

inline bool depends_on(const Poly& f, int i) {
  for (auto& [e, c] : f.terms())
    if (e[i]) return true;
  return false;
}

// largest k with x_i^k dividing f (kInf for zero)
inline int var_power_dividing(const Poly& f, int i) {
  if (f.is_zero()) return kInf;
  int k = kInf;
  for (auto& [e, c] : f.terms()) k = std::min(k, e[i]);
  return k;
}

// exact division by x_i^k; false when it does not divide
inline bool divide_by_var_power(const Poly& f, int i, int k, Poly& out) {
  Poly r(f.nvars(), f.ring());
  for (auto& [e, c] : f.terms()) {
    if (e[i] < k) return false;
    Exps g = e;
    g[i] -= k;
    r.add_term(g, c);
  }
  out = std::move(r);
  return true;
}

// scale so the first nonzero rational of the leading coefficient is 1
inline Poly normalized(const Poly& f) {
  if (f.is_zero()) return f;
  const Coef& lc = f.leading_coef();
  int v = lc.valuation();
  return f.scaled(1 / lc.parts[v]);
}

// --- text form ---

inline std::string to_string(const Poly& f, const std::vector<std::string>& names) {
  if (static_cast<int>(names.size()) != f.nvars()) throw InputError("name list length mismatch");
  if (f.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (auto it = f.terms().rbegin(); it != f.terms().rend(); ++it) {
    const auto& [e, c] = *it;
    for (int k = 0; k < c.m(); ++k) {
      Rat v = c.parts[k];
      if (v == 0) continue;
      std::vector<std::string> factors;
      if (k == 1) factors.push_back("eps");
      if (k > 1) factors.push_back("eps^" + std::to_string(k));
      for (int i = 0; i < f.nvars(); ++i) {
        if (e[i] == 1) factors.push_back(names[i]);
        if (e[i] > 1) factors.push_back(names[i] + "^" + std::to_string(e[i]));
      }
      bool neg = v < 0;
      Rat a = neg ? Rat(-v) : v;
      std::string body;
      if (a != 1 || factors.empty()) body = a.get_str();
      for (auto& s : factors) body += (body.empty() ? "" : "*") + s;
      if (first) out += neg ? "-" + body : body;
      else out += (neg ? " - " : " + ") + body;
      first = false;
    }
  }
  return out;
}

namespace detail {

class PolyParser {
 public:
  PolyParser(const std::string& s, const std::vector<std::string>& names, CoefRing ring)
      : s_(s), names_(names), ring_(ring), n_(static_cast<int>(names.size())) {}

  Poly parse() {
    Poly r = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected character");
    return r;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw InputError("polynomial parse error at column " + std::to_string(pos_ + 1) + ": " + msg + " in '" + s_ + "'");
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  Poly expr() {
    Poly r = term();
    for (;;) {
      if (eat('+')) r += term();
      else if (eat('-')) r -= term();
      else return r;
    }
  }
  Poly term() {
    Poly r = unary();
    for (;;) {
      if (eat('*')) {
        r *= unary();
      } else if (eat('/')) {
        Poly d = unary();
        if (!d.is_constant() || d.is_zero()) fail("division by a non-constant");
        const Coef& c = d.terms().begin()->second;
        if (c.valuation() != 0 || !std::all_of(c.parts.begin() + 1, c.parts.end(), [](const Rat& v) { return v == 0; }))
          fail("division by a non-rational constant");
        r = r.scaled(1 / c.parts[0]);
      } else {
        return r;
      }
    }
  }
  Poly unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return power();
  }
  Poly power() {
    Poly b = atom();
    if (eat('^')) {
      skip();
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("exponent expected");
      b = pow(b, std::stoi(s_.substr(start, pos_ - start)));
    }
    return b;
  }
  Poly atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Poly r = expr();
      if (!eat(')')) fail("')' expected");
      return r;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return Poly::constant(n_, Rat(s_.substr(start, pos_ - start)), ring_);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' || s_[pos_] == '\''))
        ++pos_;
      std::string id = s_.substr(start, pos_ - start);
      for (int i = 0; i < n_; ++i)
        if (names_[i] == id) return Poly::variable(n_, i, ring_);
      if (id == "eps") {
        if (!ring_.artinian()) fail("eps in field mode");
        return Poly::eps(n_, ring_);
      }
      pos_ = start;
      fail("unknown variable '" + id + "'");
    }
    fail("unexpected character");
  }

  std::string s_;
  std::vector<std::string> names_;
  CoefRing ring_;
  int n_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Poly parse_poly(const std::string& text, const std::vector<std::string>& names, CoefRing ring = {}) {
  return detail::PolyParser(text, names, ring).parse();
}

}  // namespace mires
