#include "cozeta/ratfun.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

#include "cozeta/errors.hpp"

namespace cozeta {

namespace {

constexpr std::array<std::string_view, kNumVars> kVarNames = {"X", "Y1", "Y2", "Y3",
                                                              "Y4", "Y5", "T"};

Rational rpow(const Rational& base, int e) {
  if (e < 0) {
    if (base == 0) throw DivisionByZero("zero raised to a negative power");
    return rpow(Rational(1) / base, -e);
  }
  Rational r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

// g = scale * shift * f with f primitive over Z, exponent-minimal and with
// positive lowest coefficient.
struct NormalizedFactor {
  Polynomial f;
  Rational scale;
  Monomial shift;
};

NormalizedFactor normalize_factor(const Polynomial& g) {
  Monomial m = g.min_exponents();
  Polynomial h = g.shift(m.inverse());
  Integer l = 1;
  for (const auto& [mon, c] : h.terms()) l = lcm(l, Integer(c.get_den()));
  Integer gc = 0;
  for (const auto& [mon, c] : h.terms()) gc = gcd(gc, Integer(c.get_num() * (l / c.get_den())));
  Rational s(gc, l);
  s.canonicalize();
  if (h.lowest().second < 0) s = -s;
  h *= Rational(1) / s;
  return {std::move(h), s, m};
}

}  // namespace

Var y_var(int i) {
  if (i < 1 || i > kMaxY) throw DomainError("variable index Y" + std::to_string(i) + " out of range");
  return static_cast<Var>(i);
}

std::string_view var_name(Var v) { return kVarNames[static_cast<int>(v)]; }

std::optional<Var> parse_var(std::string_view name) {
  for (int i = 0; i < kNumVars; ++i)
    if (kVarNames[i] == name) return static_cast<Var>(i);
  return std::nullopt;
}

// ---------------------------------------------------------------- VarSet

VarSet::VarSet(std::initializer_list<Var> vs) {
  for (Var v : vs) insert(v);
}

VarSet VarSet::ys(int d) {
  VarSet s;
  for (int i = 1; i <= d; ++i) s.insert(y_var(i));
  return s;
}

std::vector<Var> VarSet::members() const {
  std::vector<Var> out;
  for (int i = 0; i < kNumVars; ++i)
    if (bits_ & (1u << i)) out.push_back(static_cast<Var>(i));
  return out;
}

// -------------------------------------------------------------- Monomial

Monomial Monomial::of(Var v, int e) {
  Monomial m;
  m.set(v, e);
  return m;
}

int Monomial::degree() const { return std::accumulate(exps_.begin(), exps_.end(), 0); }

int Monomial::degree_in(const VarSet& vs) const {
  int d = 0;
  for (int i = 0; i < kNumVars; ++i)
    if (vs.contains(static_cast<Var>(i))) d += exps_[i];
  return d;
}

bool Monomial::is_one() const {
  return std::all_of(exps_.begin(), exps_.end(), [](int e) { return e == 0; });
}

bool Monomial::has_negative() const {
  return std::any_of(exps_.begin(), exps_.end(), [](int e) { return e < 0; });
}

VarSet Monomial::support() const {
  VarSet s;
  for (int i = 0; i < kNumVars; ++i)
    if (exps_[i] != 0) s.insert(static_cast<Var>(i));
  return s;
}

Monomial Monomial::operator*(const Monomial& o) const {
  Monomial r;
  for (int i = 0; i < kNumVars; ++i) r.exps_[i] = exps_[i] + o.exps_[i];
  return r;
}

Monomial Monomial::pow(int n) const {
  Monomial r;
  for (int i = 0; i < kNumVars; ++i) r.exps_[i] = exps_[i] * n;
  return r;
}

Monomial Monomial::invert_vars(const VarSet& vs) const {
  Monomial r = *this;
  for (int i = 0; i < kNumVars; ++i)
    if (vs.contains(static_cast<Var>(i))) r.exps_[i] = -r.exps_[i];
  return r;
}

bool Monomial::divides(const Monomial& o) const {
  for (int i = 0; i < kNumVars; ++i)
    if (exps_[i] > o.exps_[i]) return false;
  return true;
}

Monomial Monomial::gcd(const Monomial& o) const {
  Monomial r;
  for (int i = 0; i < kNumVars; ++i) r.exps_[i] = std::min(exps_[i], o.exps_[i]);
  return r;
}

std::strong_ordering Monomial::operator<=>(const Monomial& o) const {
  if (auto c = degree() <=> o.degree(); c != 0) return c;
  return exps_ <=> o.exps_;
}

std::string Monomial::to_string() const {
  std::string s;
  for (int i = 0; i < kNumVars; ++i) {
    if (exps_[i] == 0) continue;
    if (!s.empty()) s += '*';
    s += kVarNames[i];
    if (exps_[i] != 1) s += '^' + std::to_string(exps_[i]);
  }
  return s.empty() ? "1" : s;
}

// ------------------------------------------------------------ Polynomial

Polynomial::Polynomial(const Rational& c) {
  if (c != 0) terms_.emplace(Monomial{}, c);
}

Polynomial Polynomial::var(Var v, int e) { return term(1, Monomial::of(v, e)); }

Polynomial Polynomial::term(const Rational& c, const Monomial& m) {
  Polynomial p;
  p.add_term(m, c);
  return p;
}

void Polynomial::add_term(const Monomial& m, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

bool Polynomial::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one());
}

Rational Polynomial::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Rational(0) : it->second;
}

VarSet Polynomial::support() const {
  VarSet s;
  for (const auto& [m, c] : terms_)
    for (Var v : m.support().members()) s.insert(v);
  return s;
}

Monomial Polynomial::min_exponents() const {
  if (terms_.empty()) return {};
  Monomial r = terms_.begin()->first;
  for (const auto& [m, c] : terms_) r = r.gcd(m);
  return r;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  Polynomial r;
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) r.add_term(ma * mb, ca * cb);
  return r;
}

Polynomial& Polynomial::operator*=(const Polynomial& o) { return *this = *this * o; }

Polynomial& Polynomial::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
  } else {
    for (auto& [m, v] : terms_) v *= c;
  }
  return *this;
}

Polynomial Polynomial::operator-() const {
  Polynomial r = *this;
  for (auto& [m, v] : r.terms_) v = -v;
  return r;
}

Polynomial Polynomial::pow(unsigned n) const {
  Polynomial r(1), base = *this;
  while (n) {
    if (n & 1u) r *= base;
    n >>= 1;
    if (n) base *= base;
  }
  return r;
}

Polynomial Polynomial::shift(const Monomial& s) const {
  Polynomial r;
  // graded lex is translation invariant, so the order is preserved
  for (const auto& [m, c] : terms_) r.terms_.emplace_hint(r.terms_.end(), m * s, c);
  return r;
}

Polynomial Polynomial::invert_vars(const VarSet& vs) const {
  Polynomial r;
  for (const auto& [m, c] : terms_) r.add_term(m.invert_vars(vs), c);
  return r;
}

std::optional<Polynomial> Polynomial::divide_exact(const Polynomial& d) const {
  if (d.is_zero()) throw DivisionByZero("division by the zero polynomial");
  if (is_zero()) return Polynomial{};
  Monomial ma = min_exponents(), md = d.min_exponents();
  Polynomial r = shift(ma.inverse());
  Polynomial dd = d.shift(md.inverse());
  const auto& [ltm, ltc] = dd.highest();
  Polynomial q;
  while (!r.is_zero()) {
    const auto [rm, rc] = r.highest();
    if (!ltm.divides(rm)) return std::nullopt;
    Monomial qm = rm * ltm.inverse();
    Rational qc = rc / ltc;
    q.add_term(qm, qc);
    for (const auto& [m, c] : dd.terms_) r.add_term(m * qm, -qc * c);
  }
  return q.shift(ma * md.inverse());
}

Polynomial Polynomial::mul_truncated(const Polynomial& a, const Polynomial& b, const VarSet& vs,
                                     int bound) {
  Polynomial r;
  for (const auto& [ma, ca] : a.terms_) {
    int da = ma.degree_in(vs);
    if (da > bound) continue;
    for (const auto& [mb, cb] : b.terms_)
      if (da + mb.degree_in(vs) <= bound) r.add_term(ma * mb, ca * cb);
  }
  return r;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::string s;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    Rational a = abs(c);
    std::string body;
    if (m.is_one()) {
      body = a.get_str();
    } else if (a == 1) {
      body = m.to_string();
    } else {
      body = a.get_str() + "*" + m.to_string();
    }
    if (first) {
      s = (c < 0 ? "-" : "") + body;
      first = false;
    } else {
      s += (c < 0 ? " - " : " + ") + body;
    }
  }
  return s;
}

Polynomial Polynomial::parse(std::string_view text) {
  RationalFunction w = RationalFunction::parse(text);
  if (!w.is_polynomial()) throw ParseError("expected a polynomial: " + std::string(text));
  return w.numerator();
}

bool factor_less(const Polynomial& a, const Polynomial& b) {
  // Descending by terms from the top, so "larger" factors print first.
  auto ia = a.terms().rbegin(), ib = b.terms().rbegin();
  for (; ia != a.terms().rend() && ib != b.terms().rend(); ++ia, ++ib) {
    if (ia->first != ib->first) return ia->first > ib->first;
    if (ia->second != ib->second) return ia->second < ib->second;
  }
  return ia == a.terms().rend() && ib != b.terms().rend();
}

// ------------------------------------------------------ RationalFunction

RationalFunction::RationalFunction(Polynomial num) : num_(std::move(num)) {}

RationalFunction RationalFunction::quotient(const Polynomial& num, const Polynomial& den) {
  if (den.is_zero()) throw DivisionByZero("division by zero");
  RationalFunction r(num);
  r.add_factor(den, 1);
  r.normalize_order();
  return r;
}

void RationalFunction::add_factor(const Polynomial& f, int mult) {
  NormalizedFactor nf = normalize_factor(f);
  num_ *= rpow(nf.scale, -mult);
  num_ = num_.shift(nf.shift.pow(-mult));
  if (nf.f.is_constant()) return;
  for (auto& fa : den_) {
    if (fa.poly == nf.f) {
      fa.multiplicity += mult;
      return;
    }
  }
  den_.push_back({std::move(nf.f), mult});
}

void RationalFunction::normalize_order() {
  if (num_.is_zero()) {
    den_.clear();
    return;
  }
  std::erase_if(den_, [](const Factor& f) { return f.multiplicity == 0; });
  std::sort(den_.begin(), den_.end(),
            [](const Factor& a, const Factor& b) { return factor_less(a.poly, b.poly); });
}

Polynomial RationalFunction::denominator() const {
  Polynomial d(1);
  for (const auto& f : den_) d *= f.poly.pow(f.multiplicity);
  return d;
}

VarSet RationalFunction::support() const {
  VarSet s = num_.support();
  for (const auto& f : den_)
    for (Var v : f.poly.support().members()) s.insert(v);
  return s;
}

RationalFunction& RationalFunction::operator+=(const RationalFunction& o) {
  if (o.is_zero()) return *this;
  if (is_zero()) return *this = o;
  std::vector<Factor> merged = den_;
  Polynomial mine(1), theirs(1);
  for (const auto& fo : o.den_) {
    auto it = std::find_if(merged.begin(), merged.end(),
                           [&](const Factor& f) { return f.poly == fo.poly; });
    if (it == merged.end()) {
      merged.push_back(fo);
      mine *= fo.poly.pow(fo.multiplicity);
    } else if (it->multiplicity < fo.multiplicity) {
      mine *= fo.poly.pow(fo.multiplicity - it->multiplicity);
      it->multiplicity = fo.multiplicity;
    }
  }
  for (const auto& f : merged) {
    auto it = std::find_if(o.den_.begin(), o.den_.end(),
                           [&](const Factor& g) { return g.poly == f.poly; });
    int have = it == o.den_.end() ? 0 : it->multiplicity;
    if (have < f.multiplicity) theirs *= f.poly.pow(f.multiplicity - have);
  }
  num_ = num_ * mine + o.num_ * theirs;
  den_ = std::move(merged);
  normalize_order();
  return *this;
}

RationalFunction& RationalFunction::operator-=(const RationalFunction& o) { return *this += -o; }

RationalFunction& RationalFunction::operator*=(const RationalFunction& o) {
  num_ *= o.num_;
  for (const auto& fo : o.den_) {
    auto it = std::find_if(den_.begin(), den_.end(),
                           [&](const Factor& f) { return f.poly == fo.poly; });
    if (it == den_.end()) {
      den_.push_back(fo);
    } else {
      it->multiplicity += fo.multiplicity;
    }
  }
  normalize_order();
  return *this;
}

RationalFunction RationalFunction::inverse() const {
  if (is_zero()) throw DivisionByZero("inverse of the zero rational function");
  RationalFunction r(denominator());
  r.add_factor(num_, 1);
  r.normalize_order();
  return r;
}

RationalFunction& RationalFunction::operator/=(const RationalFunction& o) {
  return *this *= o.inverse();
}

RationalFunction RationalFunction::operator-() const {
  RationalFunction r = *this;
  r.num_ = -r.num_;
  return r;
}

RationalFunction RationalFunction::pow(int n) const {
  if (n < 0) return inverse().pow(-n);
  RationalFunction r(1);
  for (int i = 0; i < n; ++i) r *= *this;
  return r;
}

RationalFunction RationalFunction::cancel() const {
  RationalFunction r = *this;
  for (auto& f : r.den_) {
    while (f.multiplicity > 0) {
      auto q = r.num_.divide_exact(f.poly);
      if (!q) break;
      r.num_ = std::move(*q);
      --f.multiplicity;
    }
  }
  r.normalize_order();
  return r;
}

RationalFunction RationalFunction::invert_vars(const VarSet& vs) const {
  RationalFunction r(num_.invert_vars(vs));
  for (const auto& f : den_) r.add_factor(f.poly.invert_vars(vs), f.multiplicity);
  r.normalize_order();
  return r;
}

std::string RationalFunction::to_string() const {
  if (den_.empty()) return num_.to_string();
  std::string s = num_.size() > 1 ? "(" + num_.to_string() + ")" : num_.to_string();
  std::vector<std::string> parts;
  for (const auto& f : den_) {
    std::string p = "(" + f.poly.to_string() + ")";
    if (f.multiplicity != 1) p += "^" + std::to_string(f.multiplicity);
    parts.push_back(std::move(p));
  }
  s += " / ";
  if (parts.size() == 1) return s + parts[0];
  s += "(";
  for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? "*" : "") + parts[i];
  return s + ")";
}

// ------------------------------------------------------------------ parse

namespace {

// Values carry their product structure so that "1 / ((1 - X)*(1 - Y1))"
// keeps two denominator factors instead of one expanded polynomial.
struct Value {
  RationalFunction rf;
  std::vector<std::pair<Polynomial, int>> fac;  // rf == prod fac, when non-empty
};

Value leaf(const RationalFunction& rf) {
  Value v{rf, {}};
  if (rf.is_polynomial() && !rf.is_zero()) v.fac.emplace_back(rf.numerator(), 1);
  return v;
}

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  RationalFunction run() {
    Value r = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected character");
    return r.rf;
  }

 private:
  [[noreturn]] void fail(const std::string& why) {
    throw ParseError(why + " at offset " + std::to_string(pos_) + " in '" + std::string(s_) + "'");
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Value expr() {
    bool neg = false;
    if (accept('-')) {
      neg = true;
    } else {
      accept('+');
    }
    Value r = term();
    if (neg) r = negate(r);
    for (;;) {
      if (accept('+')) {
        r = leaf(r.rf + term().rf);
      } else if (accept('-')) {
        r = leaf(r.rf - term().rf);
      } else {
        return r;
      }
    }
  }

  static Value negate(const Value& v) {
    Value r{-v.rf, v.fac};
    if (!r.fac.empty()) r.fac.emplace_back(Polynomial(-1), 1);
    return r;
  }

  static Value multiply(const Value& a, const Value& b, int sign) {
    if (a.fac.empty() || b.fac.empty()) {
      return leaf(sign > 0 ? a.rf * b.rf : a.rf / b.rf);
    }
    Value r{{}, a.fac};
    for (const auto& [f, e] : b.fac) r.fac.emplace_back(f, sign * e);
    r.rf = build(r.fac);
    return r;
  }

  static RationalFunction build(const std::vector<std::pair<Polynomial, int>>& fac) {
    Polynomial num(1);
    std::vector<Polynomial> den;
    for (const auto& [f, e] : fac) {
      if (e >= 0) {
        num *= f.pow(e);
      } else {
        for (int i = 0; i < -e; ++i) den.push_back(f);
      }
    }
    RationalFunction r(num);
    for (const auto& d : den) r *= RationalFunction::quotient(Polynomial(1), d);
    return r;
  }

  Value term() {
    Value r = factor();
    for (;;) {
      if (accept('*')) {
        r = multiply(r, factor(), 1);
      } else if (accept('/')) {
        Value d = factor();
        if (d.rf.is_zero()) fail("division by zero");
        r = multiply(r, d, -1);
      } else {
        return r;
      }
    }
  }

  Value factor() {
    if (accept('-')) return negate(factor());
    Value base = atom();
    if (accept('^')) {
      bool paren = accept('(');
      bool neg = accept('-');
      long e = integer();
      if (paren && !accept(')')) fail("expected ')'");
      int n = neg ? -static_cast<int>(e) : static_cast<int>(e);
      if (n < 0 && base.rf.is_zero()) fail("zero to a negative power");
      if (base.fac.empty()) return leaf(base.rf.pow(n));
      Value r{{}, {}};
      for (const auto& [f, k] : base.fac) r.fac.emplace_back(f, k * n);
      r.rf = build(r.fac);
      return r;
    }
    return base;
  }

  long integer() {
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected an integer exponent");
    return std::stol(std::string(s_.substr(start, pos_ - start)));
  }

  Value atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Value r = expr();
      if (!accept(')')) fail("expected ')'");
      return r;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return leaf(Rational(Integer(std::string(s_.substr(start, pos_ - start)))));
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      auto name = s_.substr(start, pos_ - start);
      auto v = parse_var(name);
      if (!v) fail("unknown variable '" + std::string(name) + "'");
      return leaf(RationalFunction::var(*v));
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

RationalFunction RationalFunction::parse(std::string_view text) { return Parser(text).run(); }

// ----------------------------------------------------------- free functions

bool equals(const RationalFunction& a, const RationalFunction& b) {
  auto da = a.denominator_factors();
  auto db = b.denominator_factors();
  for (auto& fa : da) {
    for (auto& fb : db) {
      if (fa.poly == fb.poly) {
        int c = std::min(fa.multiplicity, fb.multiplicity);
        fa.multiplicity -= c;
        fb.multiplicity -= c;
      }
    }
  }
  Polynomial lhs = a.numerator(), rhs = b.numerator();
  for (const auto& f : db)
    if (f.multiplicity) lhs *= f.poly.pow(f.multiplicity);
  for (const auto& f : da)
    if (f.multiplicity) rhs *= f.poly.pow(f.multiplicity);
  return lhs == rhs;
}

RationalFunction invert_variables(const RationalFunction& w, const VarSet& vs) {
  return w.invert_vars(vs);
}

namespace {

bool monomial_like(const RationalFunction& v) {
  return v.is_polynomial() && v.numerator().size() <= 1;
}

std::string describe(const Bindings& b, const VarSet& vs) {
  std::string s;
  for (const auto& [v, val] : b) {
    if (!vs.contains(v)) continue;
    if (!s.empty()) s += ", ";
    s += std::string(var_name(v)) + " := " + val.to_string();
  }
  return s;
}

}  // namespace

Polynomial substitute(const Polynomial& f, const Bindings& b) {
  std::array<std::optional<Polynomial>, kNumVars> val;
  for (const auto& [v, w] : b) {
    if (!monomial_like(w)) throw DomainError("polynomial substitution needs monomial values");
    val[static_cast<int>(v)] = w.numerator();
  }
  Polynomial r;
  for (const auto& [m, c] : f.terms()) {
    Rational coef = c;
    Monomial out;
    bool vanished = false;
    for (int i = 0; i < kNumVars; ++i) {
      int e = m[static_cast<Var>(i)];
      if (e == 0) continue;
      if (!val[i]) {
        out.set(static_cast<Var>(i), out[static_cast<Var>(i)] + e);
        continue;
      }
      if (val[i]->is_zero()) {
        if (e < 0)
          throw DenominatorVanishes("negative power of " + std::string(var_name(static_cast<Var>(i))) +
                                    " under " + std::string(var_name(static_cast<Var>(i))) + " := 0");
        vanished = true;
        break;
      }
      const auto& [vm, vc] = *val[i]->terms().begin();
      coef *= rpow(vc, e);
      out = out * vm.pow(e);
    }
    if (!vanished) r += Polynomial::term(coef, out);
  }
  return r;
}

RationalFunction substitute(const RationalFunction& w, const Bindings& b) {
  bool fast = std::all_of(b.begin(), b.end(), [](const auto& kv) { return monomial_like(kv.second); });
  auto subst_poly = [&](const Polynomial& f) -> RationalFunction {
    if (fast) return substitute(f, b);
    RationalFunction r;
    for (const auto& [m, c] : f.terms()) {
      RationalFunction t(c);
      Monomial rest;
      for (int i = 0; i < kNumVars; ++i) {
        Var v = static_cast<Var>(i);
        int e = m[v];
        if (e == 0) continue;
        auto it = b.find(v);
        if (it == b.end()) {
          rest.set(v, e);
        } else {
          if (it->second.is_zero() && e < 0)
            throw DenominatorVanishes("negative power of " + std::string(var_name(v)) + " under " +
                                      std::string(var_name(v)) + " := 0");
          t *= it->second.pow(e);
        }
      }
      r += t * RationalFunction(Polynomial::term(1, rest));
    }
    return r;
  };
  RationalFunction r = subst_poly(w.numerator());
  for (const auto& f : w.denominator_factors()) {
    RationalFunction fs = subst_poly(f.poly);
    if (fs.is_zero())
      throw DenominatorVanishes("denominator factor (" + f.poly.to_string() + ") vanishes under " +
                                describe(b, f.poly.support()));
    r /= fs.pow(f.multiplicity);
  }
  return r;
}

namespace {

Polynomial series_inverse(const Polynomial& f, const VarSet& vs, int bound) {
  std::vector<Polynomial> parts;
  for (const auto& [m, c] : f.terms()) {
    int d = m.degree_in(vs);
    for (Var v : vs.members())
      if (m[v] < 0) throw NonExpandable("negative exponent of a series variable in a denominator");
    if (d >= static_cast<int>(parts.size())) parts.resize(d + 1);
    parts[d] += Polynomial::term(c, m);
  }
  if (parts.empty() || parts[0].is_zero() || !parts[0].is_monomial())
    throw NonExpandable("denominator factor (" + f.to_string() +
                        ") has no invertible constant term");
  const auto& [m0, c0] = *parts[0].terms().begin();
  Polynomial g0 = Polynomial::term(Rational(1) / c0, m0.inverse());
  std::vector<Polynomial> g{g0};
  for (int k = 1; k <= bound; ++k) {
    Polynomial s;
    for (int j = 1; j <= k && j < static_cast<int>(parts.size()); ++j)
      if (!parts[j].is_zero()) s += parts[j] * g[k - j];
    g.push_back(-(g0 * s));
  }
  Polynomial r;
  for (auto& gk : g) r += gk;
  return r;
}

}  // namespace

std::map<std::vector<int>, Polynomial> series_expand(const RationalFunction& w, const VarSet& vs,
                                                     int bound) {
  Polynomial acc;
  for (const auto& [m, c] : w.numerator().terms()) {
    for (Var v : vs.members())
      if (m[v] < 0) throw NonExpandable("negative exponent of a series variable in the numerator");
    if (m.degree_in(vs) <= bound) acc += Polynomial::term(c, m);
  }
  for (const auto& f : w.denominator_factors()) {
    Polynomial inv = series_inverse(f.poly, vs, bound);
    for (int i = 0; i < f.multiplicity; ++i) acc = Polynomial::mul_truncated(acc, inv, vs, bound);
  }
  std::map<std::vector<int>, Polynomial> out;
  auto vars = vs.members();
  for (const auto& [m, c] : acc.terms()) {
    std::vector<int> key;
    Monomial rest = m;
    for (Var v : vars) {
      key.push_back(m[v]);
      rest.set(v, 0);
    }
    out[key] += Polynomial::term(c, rest);
  }
  std::erase_if(out, [](const auto& kv) { return kv.second.is_zero(); });
  return out;
}

std::map<std::vector<int>, Rational> series_coefficients(const RationalFunction& w,
                                                         std::optional<long> p, int bound,
                                                         const VarSet& vs) {
  RationalFunction v = w;
  if (p) v = substitute(w, {{Var::X, RationalFunction(Rational(*p))}});
  for (Var x : v.support().members())
    if (!vs.contains(x))
      throw VariableMismatch("variable " + std::string(var_name(x)) +
                             " is neither a series variable nor bound");
  std::map<std::vector<int>, Rational> out;
  for (const auto& [k, c] : series_expand(v, vs, bound)) out[k] = c.constant_term();
  return out;
}

Rational evaluate(const Polynomial& f, const std::map<Var, Rational>& point) {
  Rational r = 0;
  for (const auto& [m, c] : f.terms()) {
    Rational t = c;
    for (int i = 0; i < kNumVars; ++i) {
      Var v = static_cast<Var>(i);
      if (m[v] == 0) continue;
      auto it = point.find(v);
      if (it == point.end())
        throw VariableMismatch("no value for variable " + std::string(var_name(v)));
      t *= rpow(it->second, m[v]);
    }
    r += t;
  }
  return r;
}

Rational evaluate(const RationalFunction& w, const std::map<Var, Rational>& point) {
  Rational num = evaluate(w.numerator(), point);
  Rational den = 1;
  for (const auto& f : w.denominator_factors()) {
    Rational v = evaluate(f.poly, point);
    if (v == 0) throw DenominatorVanishes("denominator factor (" + f.poly.to_string() + ") vanishes");
    den *= rpow(v, f.multiplicity);
  }
  return num / den;
}

}  // namespace cozeta
