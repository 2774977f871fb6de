#pragma once

// Igusa local zeta functions of ternary quadratic forms: closed forms in
// (X, T) per family, exact point counts mod p^m and the Poincare checks
// tying the two together.

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "cozeta/liealg.hpp"
#include "cozeta/ratfun.hpp"

namespace cozeta {

// Which primes a formula is valid for.
struct PrimeValidity {
  enum class Kind { All, Odd, Residue, Fixed, Legendre };
  Kind kind = Kind::All;
  long modulus = 0;  // Residue
  long residue = 0;  // Residue
  long prime = 0;    // Fixed
  long disc = 0;     // Legendre: (disc/p) == sign
  int sign = 0;
  std::set<long long> excluded;

  static PrimeValidity all() { return {}; }
  static PrimeValidity odd() {
    PrimeValidity v;
    v.kind = Kind::Odd;
    return v;
  }
  static PrimeValidity fixed(long p);
  static PrimeValidity residue_class(long r, long m);
  static PrimeValidity legendre_class(long d, int s);

  bool admits(long p) const;
  bool is_fixed() const { return kind == Kind::Fixed; }
  double density() const;  // Dirichlet density of the admitted primes
  std::string to_string() const;
  static PrimeValidity parse(std::string_view s);
  bool operator==(const PrimeValidity&) const = default;
};

struct IgusaFamily {
  enum class Kind { Zero, H, Sl2Odd, Sl2Two, L1Odd, L1Two, L2OneMod4, L2ThreeMod4, L2Two, Solvable };
  Kind kind = Kind::Zero;
  int i = 0;  // Solvable(i, k)
  int k = 0;

  static IgusaFamily parse(std::string_view name);  // throws UnknownFamily
  static std::vector<IgusaFamily> all_named(int max_k);
  std::string name() const;
  PrimeValidity validity() const;
  bool operator==(const IgusaFamily&) const = default;
};

struct IgusaClosedForm {
  IgusaFamily family;
  RationalFunction value;  // in X and T; X absent for fixed-prime families
  PrimeValidity validity;
};

IgusaClosedForm closed_form(const IgusaFamily& fam);

// A quadratic form whose Igusa function the family describes at p.
QuadraticForm family_form(const IgusaFamily& fam, long p);

struct PointCount {
  long p = 0;
  int m = 0;
  long long n = 0;       // #{x in (Z/p^m)^3 : f(x) = 0}
  long long n_star = 0;  // same, x primitive
};

inline constexpr long long kDefaultBudget = 100'000'000;

// Fibered count: enumerate (x1, x2) and count roots in x3 by Hensel lifting.
PointCount count_points(const QuadraticForm& f, long p, int m, long long budget = kDefaultBudget);
// Plain enumeration of (Z/p^m)^3, used to cross-check the fibered count.
PointCount count_points_exhaustive(const QuadraticForm& f, long p, int m,
                                   long long budget = kDefaultBudget);

// Coefficients N_m p^{-3m} (resp. N*_m p^{-3m}) for m = 0..levels-1.
std::vector<Rational> poincare_partial(const QuadraticForm& f, long p, int levels,
                                       long long budget = kDefaultBudget);
std::vector<Rational> primitive_poincare_partial(const QuadraticForm& f, long p, int levels,
                                                 long long budget = kDefaultBudget);

// Series predicted by an Igusa function Z at X = p:
// (1 - T Z) / (1 - T) and (1 - p^{-3} T - T (1 - p^{-3} T^2) Z) / (1 - T).
std::vector<Rational> predicted_poincare(const RationalFunction& z, long p, int levels);
std::vector<Rational> predicted_primitive(const RationalFunction& z, long p, int levels);

struct LevelCheck {
  int m;
  Rational predicted;
  Rational observed;
  bool match;
};

struct IgusaReport {
  std::string family;
  long p = 0;
  std::vector<LevelCheck> levels;
  std::vector<LevelCheck> primitive_levels;
  bool ok() const;
};

IgusaReport verify_igusa(const RationalFunction& z, const QuadraticForm& f, long p, int levels,
                         long long budget = kDefaultBudget);
// Throws DomainError when p is outside the family's validity.
IgusaReport verify_closed_form(const IgusaFamily& fam, long p, int levels,
                               long long budget = kDefaultBudget);

}  // namespace cozeta
