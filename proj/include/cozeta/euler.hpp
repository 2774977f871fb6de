#pragma once

// Global side: split a univariate local factor into Riemann zeta factors
// times a residual, locate the rightmost pole, evaluate the leading constant
// by truncated Euler products and form corank densities.

#include <map>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "cozeta/igusa.hpp"
#include "cozeta/liealg.hpp"
#include "cozeta/ratfun.hpp"

namespace cozeta {

using Real = boost::multiprecision::cpp_bin_float_50;

inline constexpr long kDefaultPrimeBound = 100'000;

// (a, b) -> k means the global factor zeta(b s - a)^k; k < 0 for factors
// pulled out of the numerator.
using FactorMap = std::map<std::pair<int, int>, int>;

struct ZetaFactorization {
  FactorMap factors;
  RationalFunction residual;  // in X and T

  // residual * prod (1 - X^a T^b)^(-k)
  RationalFunction reassemble() const;
  // max (a+1)/b over factors with k > 0
  Rational abscissa() const;
};

// w must be a function of X and T whose denominator factors are of the form
// 1 -+ X^a T^b. Monomials X^a T^b of the residual with (a+1)/b >= sigma are
// pulled out as further zeta factors; sigma defaults to the abscissa of the
// denominator.
ZetaFactorization extract_zeta_factors(const RationalFunction& w);
ZetaFactorization extract_zeta_factors(const RationalFunction& w, const Rational& sigma);

struct CriticalFactor {
  int a, b;
  Rational mult;  // averaged over prime classes
};

struct PoleData {
  Rational sigma0;
  int omega = 0;
  std::vector<CriticalFactor> critical;
  Real leading_constant;
  Real error;
  long prime_bound = 0;
};

// One local factor per class of primes.
struct EulerBranch {
  RationalFunction w;
  PrimeValidity validity;
};

PoleData pole_data(const ZetaFactorization& zf, long prime_bound = kDefaultPrimeBound);
PoleData pole_data(const std::vector<EulerBranch>& branches, long prime_bound = kDefaultPrimeBound);

struct Asymptotic {
  Real c;
  Rational sigma0;
  int omega = 0;
  std::string text;  // N(X) ~ c * X^sigma0 * log(X)^(omega-1)
};

Asymptotic asymptotic_count(const PoleData& pd);

// Univariate local factors of L for subalgebras of corank <= m, one branch
// per class of good primes plus a fixed branch per bad prime.
std::vector<EulerBranch> euler_branches(const LieAlgebra& L, int m);

struct DensityResult {
  Real value;
  Real error;
  PoleData pole;       // corank <= m
  PoleData pole_full;  // all subalgebras
};

DensityResult density(const LieAlgebra& L, int m, long prime_bound = kDefaultPrimeBound);

// Euler product of zeta(s) over p <= B with an integral tail correction.
Real zeta_euler(const Real& s, long prime_bound = kDefaultPrimeBound);
std::vector<long> primes_up_to(long n);

std::string format_real(const Real& x, int digits = 6);

}  // namespace cozeta
