#pragma once

// Exact sparse multivariate Laurent polynomials and rational functions over Q.
//
// The alphabet is fixed: X (the residue field size), Y1..Y5 (one variable per
// Dirichlet variable) and T (a univariate specialization). Denominators are
// kept as a list of normalized factors with multiplicities so that a
// product of binomials never has to be expanded.

#include <gmpxx.h>

#include <array>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cozeta {

using Integer = mpz_class;
using Rational = mpq_class;

enum class Var : std::uint8_t { X = 0, Y1, Y2, Y3, Y4, Y5, T };
inline constexpr int kNumVars = 7;
inline constexpr int kMaxY = 5;

Var y_var(int i);  // 1-based: y_var(1) == Var::Y1
std::string_view var_name(Var v);
std::optional<Var> parse_var(std::string_view name);

// A set of variables, used for inversion and for choosing series variables.
class VarSet {
 public:
  VarSet() = default;
  VarSet(std::initializer_list<Var> vs);
  static VarSet ys(int d);  // {Y1..Yd}
  void insert(Var v) { bits_ |= bit(v); }
  bool contains(Var v) const { return (bits_ & bit(v)) != 0; }
  bool empty() const { return bits_ == 0; }
  std::vector<Var> members() const;

 private:
  static std::uint8_t bit(Var v) { return static_cast<std::uint8_t>(1u << static_cast<int>(v)); }
  std::uint8_t bits_ = 0;
};

class Monomial {
 public:
  Monomial() = default;
  static Monomial of(Var v, int e = 1);

  int operator[](Var v) const { return exps_[static_cast<int>(v)]; }
  void set(Var v, int e) { exps_[static_cast<int>(v)] = e; }
  int degree() const;
  int degree_in(const VarSet& vs) const;
  bool is_one() const;
  bool has_negative() const;
  VarSet support() const;

  Monomial operator*(const Monomial& o) const;
  Monomial pow(int n) const;
  Monomial inverse() const { return pow(-1); }
  Monomial invert_vars(const VarSet& vs) const;
  // Componentwise exponent <= (meaningful for non-negative monomials).
  bool divides(const Monomial& o) const;
  Monomial gcd(const Monomial& o) const;  // componentwise min

  // Graded lexicographic: total degree first, then exponents X, Y1, .., T.
  std::strong_ordering operator<=>(const Monomial& o) const;
  bool operator==(const Monomial& o) const = default;

  std::string to_string() const;

 private:
  std::array<int, kNumVars> exps_{};
};

class Polynomial {
 public:
  using Terms = std::map<Monomial, Rational>;

  Polynomial() = default;
  Polynomial(const Rational& c);  // NOLINT: constants convert implicitly
  Polynomial(long c) : Polynomial(Rational(c)) {}
  static Polynomial var(Var v, int e = 1);
  static Polynomial term(const Rational& c, const Monomial& m);

  const Terms& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  bool is_monomial() const { return terms_.size() == 1; }
  Rational coefficient(const Monomial& m) const;
  Rational constant_term() const { return coefficient(Monomial{}); }
  VarSet support() const;
  // Lowest and highest terms in graded-lex order; polynomial must be nonzero.
  const std::pair<const Monomial, Rational>& lowest() const { return *terms_.begin(); }
  const std::pair<const Monomial, Rational>& highest() const { return *terms_.rbegin(); }
  Monomial min_exponents() const;  // componentwise min over all terms

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(const Polynomial& o);
  Polynomial& operator*=(const Rational& c);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  Polynomial operator-() const;
  Polynomial pow(unsigned n) const;
  Polynomial shift(const Monomial& m) const;  // multiply by a monomial
  Polynomial invert_vars(const VarSet& vs) const;

  // Exact quotient if d divides *this in the Laurent ring, otherwise nullopt.
  std::optional<Polynomial> divide_exact(const Polynomial& d) const;

  // Product truncated to total degree <= bound in the variables of vs.
  static Polynomial mul_truncated(const Polynomial& a, const Polynomial& b, const VarSet& vs,
                                  int bound);

  bool operator==(const Polynomial& o) const { return terms_ == o.terms_; }

  std::string to_string() const;
  static Polynomial parse(std::string_view text);

 private:
  void add_term(const Monomial& m, const Rational& c);
  Terms terms_;
};

// Total order used to keep denominator factors canonical.
bool factor_less(const Polynomial& a, const Polynomial& b);

class RationalFunction {
 public:
  struct Factor {
    Polynomial poly;
    int multiplicity;
    bool operator==(const Factor&) const = default;
  };

  RationalFunction() = default;
  RationalFunction(Polynomial num);  // NOLINT
  RationalFunction(const Rational& c) : RationalFunction(Polynomial(c)) {}  // NOLINT
  RationalFunction(long c) : RationalFunction(Polynomial(c)) {}             // NOLINT
  static RationalFunction var(Var v, int e = 1) { return Polynomial::var(v, e); }
  // num / den with den a single (non-expanded) factor.
  static RationalFunction quotient(const Polynomial& num, const Polynomial& den);

  const Polynomial& numerator() const { return num_; }
  const std::vector<Factor>& denominator_factors() const { return den_; }
  Polynomial denominator() const;  // expanded product
  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.empty(); }
  VarSet support() const;

  RationalFunction& operator+=(const RationalFunction& o);
  RationalFunction& operator-=(const RationalFunction& o);
  RationalFunction& operator*=(const RationalFunction& o);
  RationalFunction& operator/=(const RationalFunction& o);
  friend RationalFunction operator+(RationalFunction a, const RationalFunction& b) { return a += b; }
  friend RationalFunction operator-(RationalFunction a, const RationalFunction& b) { return a -= b; }
  friend RationalFunction operator*(RationalFunction a, const RationalFunction& b) { return a *= b; }
  friend RationalFunction operator/(RationalFunction a, const RationalFunction& b) { return a /= b; }
  RationalFunction operator-() const;
  RationalFunction inverse() const;
  RationalFunction pow(int n) const;

  // Divides out every denominator factor that exactly divides the numerator.
  RationalFunction cancel() const;
  RationalFunction invert_vars(const VarSet& vs) const;

  std::string to_string() const;
  static RationalFunction parse(std::string_view text);

 private:
  void add_factor(const Polynomial& f, int mult);
  void normalize_order();
  Polynomial num_;
  std::vector<Factor> den_;  // normalized, sorted, multiplicity > 0
};

// Cross-multiplication equality; no gcd is ever taken.
bool equals(const RationalFunction& a, const RationalFunction& b);

RationalFunction invert_variables(const RationalFunction& w, const VarSet& vs);

using Bindings = std::map<Var, RationalFunction>;
RationalFunction substitute(const RationalFunction& w, const Bindings& b);
Polynomial substitute(const Polynomial& f, const Bindings& b);  // monomial or constant values only

// Power-series coefficients of w in the variables vs, up to total degree
// bound. Variables outside vs stay symbolic in the coefficients; every
// denominator factor must have a unit (constant times monomial) as its
// constant term in vs.
std::map<std::vector<int>, Polynomial> series_expand(const RationalFunction& w, const VarSet& vs,
                                                     int bound);

// Rational coefficients after X := p (or with X absent when p is nullopt).
std::map<std::vector<int>, Rational> series_coefficients(const RationalFunction& w,
                                                         std::optional<long> p, int bound,
                                                         const VarSet& vs);

Rational evaluate(const Polynomial& f, const std::map<Var, Rational>& point);
Rational evaluate(const RationalFunction& w, const std::map<Var, Rational>& point);

}  // namespace cozeta
