#pragma once

// Local cotype zeta functions: free modules via Igusa functions, the rank-3
// assembly from an Igusa closed form, the transcribed catalog, the
// functional-equation check, corank specialization and routing of an
// arbitrary rank-3 algebra to a formula.

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cozeta/igusa.hpp"
#include "cozeta/liealg.hpp"
#include "cozeta/ratfun.hpp"

namespace cozeta {

// Coefficient of Y1^c1 Y2^c2 .. is the number of subalgebras of cotype
// (p^c1, p^c2, ..).
struct LocalFormula {
  RationalFunction value;
  std::string algebra;
  PrimeValidity validity;
  int scale = 0;
  int dim = 3;

  std::string serialize() const;
  static LocalFormula parse(std::string_view text);
};

inline constexpr int kMaxFreeRank = 5;

Polynomial gaussian_binomial(int a, int b, Var y = Var::T);
// I = {i_1 < .. < i_l} subset of {1..d-1}.
Polynomial gaussian_multinomial(int d, const std::vector<int>& I, Var y = Var::T);

// (1/(1 - X_d)) * sum over I in [d-1] of binom(d, I)_Y prod_{i in I} X_i/(1 - X_i)
RationalFunction igusa_function(int d, const RationalFunction& y,
                                const std::vector<RationalFunction>& xs);

LocalFormula cotype_zeta_free(int d);

// Z_f(s1 - 2): T := X^2 Y1, with X := p for fixed-prime closed forms.
RationalFunction shifted_igusa(const IgusaClosedForm& igusa);

LocalFormula assemble_main(const IgusaClosedForm& igusa, int scale = 0, std::string label = "");
std::array<RationalFunction, 4> assemble_AI(const IgusaClosedForm& igusa, int scale = 0);
RationalFunction sum_AI(const std::array<RationalFunction, 4>& a);

// Formula for p^i L from the formula for L: Z3 - (X^2 Y1)^i (Z3 - w).
LocalFormula rescale(const LocalFormula& w, int i);

// Univariate local subalgebra zeta function of p^i L from the Igusa data.
RationalFunction univariate_formula(const IgusaClosedForm& igusa, int scale = 0);

const std::vector<std::string>& catalog_labels();
std::vector<LocalFormula> catalog_branches(std::string_view label);
LocalFormula catalog(std::string_view label, const PrimeValidity& cls);
LocalFormula catalog_for_prime(std::string_view label, long p);
std::optional<LieAlgebra> catalog_algebra(std::string_view label);

struct FEResult {
  bool holds = false;
  RationalFunction witness;  // lhs - rhs, zero when the equation holds
};

FEResult functional_equation_check(const LocalFormula& w, int d);

RationalFunction corank_specialize(const RationalFunction& w, int m, int d = 3);
RationalFunction univariate(const RationalFunction& w, int d = 3);

struct RouteResult {
  std::optional<LocalFormula> formula;  // empty: no formula, use the oracle
  std::string family;
  std::string reason;
};

// With p absent the formula is the uniform one for all good primes; algebras
// whose form is rank 2 and irreducible have no single uniform formula and
// need route_branches.
RouteResult route(const LieAlgebra& L, std::optional<long> p);
// One formula per class of good primes (one or two entries).
std::vector<LocalFormula> route_branches(const LieAlgebra& L);

}  // namespace cozeta
