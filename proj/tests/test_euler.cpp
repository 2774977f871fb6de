#include <cmath>

#include <boost/math/special_functions/zeta.hpp>

#include "doctest.h"

#include "cozeta/cotype.hpp"
#include "cozeta/errors.hpp"
#include "cozeta/euler.hpp"

using namespace cozeta;

namespace {

RationalFunction corank(const char* label, int m) {
  return corank_specialize(catalog(label, PrimeValidity::all()).value, m).cancel();
}

double rel(const Real& a, double b) { return std::abs(static_cast<double>(a) / b - 1); }

// prod over p <= 2e6 in plain doubles
template <class F>
double euler_double(F f) {
  const long n = 2'000'000;
  std::vector<char> comp(n + 1, 0);
  double s = 0;
  for (long p = 2; p <= n; ++p) {
    if (comp[p]) continue;
    for (long j = p * p; j <= n; j += p) comp[j] = 1;
    s += std::log(f(static_cast<double>(p)));
  }
  return std::exp(s);
}

}  // namespace

TEST_CASE("zeta factor extraction") {
  ZetaFactorization z3 = extract_zeta_factors(corank("Z3", 3));
  CHECK(z3.factors == FactorMap{{{0, 1}, 1}, {{1, 1}, 1}, {{2, 1}, 1}});
  CHECK(z3.residual.to_string() == "1");

  ZetaFactorization h1 = extract_zeta_factors(corank("H", 1));
  CHECK(h1.factors == FactorMap{{{1, 1}, 1}, {{3, 2}, 1}});
  CHECK(equals(h1.residual, RationalFunction::parse("1 + T - X*T^2 - X^3*T^3")));

  ZetaFactorization h3 = extract_zeta_factors(corank("H", 3));
  CHECK(h3.factors == FactorMap{{{0, 1}, 1}, {{1, 1}, 1}, {{2, 2}, 1}, {{3, 2}, 1}, {{3, 3}, -1}});
  CHECK(h3.abscissa() == 2);

  ZetaFactorization z2 = extract_zeta_factors(corank("Z3", 2));
  CHECK(z2.factors.at({0, 3}) == -1);  // 1/zeta(3s)

  CHECK_THROWS_AS(extract_zeta_factors(RationalFunction::parse("1/(1 - T - X*T)")), ShapeError);
  CHECK_THROWS_AS(extract_zeta_factors(RationalFunction::parse("1/(1 - Y1)")), VariableMismatch);
  CHECK_THROWS_AS(extract_zeta_factors(RationalFunction::parse("2/(1 - T)")), ShapeError);
}

TEST_CASE("reassembly is exact") {
  for (const char* label : {"Z3", "H", "sl2", "L1", "L2"}) {
    for (const auto& b : catalog_branches(label)) {
      if (b.validity.is_fixed()) continue;
      for (int m = 1; m <= 3; ++m) {
        RationalFunction w = corank_specialize(b.value, m);
        INFO(label, " ", b.validity.to_string(), " m=", m);
        CHECK(equals(extract_zeta_factors(w).reassemble(), w));
        CHECK(equals(extract_zeta_factors(w, Rational(5, 2)).reassemble(), w));
      }
    }
  }
}

TEST_CASE("zeta by Euler product") {
  for (double s : {2.0, 3.0, 9.0})
    CHECK(rel(zeta_euler(Real(s)), boost::math::zeta(s)) < 1e-7);
  CHECK_THROWS_AS(zeta_euler(Real(1)), DomainError);
  CHECK(primes_up_to(30) == std::vector<long>{2, 3, 5, 7, 11, 13, 17, 19, 23, 29});
}

TEST_CASE("leading constants") {
  const double z2 = boost::math::zeta(2.0), z3 = boost::math::zeta(3.0), z9 = boost::math::zeta(9.0);
  auto c = [](const char* label, int m) {
    return asymptotic_count(pole_data(extract_zeta_factors(corank(label, m)), 20000));
  };
  Asymptotic a = c("Z3", 3);
  CHECK(a.sigma0 == 3);
  CHECK(a.omega == 1);
  CHECK(rel(a.c, z2 * z3 / 3) < 1e-4);
  CHECK(rel(c("Z3", 2).c, z2 * z3 / (3 * z9)) < 1e-4);
  double e1 = euler_double([](double p) { return 1 + 1 / (p * p) + 1 / (p * p * p); });
  CHECK(rel(c("Z3", 1).c, e1 / 3) < 1e-4);
  Asymptotic h3 = c("H", 3);
  CHECK(h3.omega == 2);
  CHECK(rel(h3.c, z2 * z2 / (4 * z3)) < 1e-4);
  CHECK(h3.text.find("log(X)") != std::string::npos);
  double eh1 = euler_double([](double p) { return 1 + std::pow(p, -2) - 2 * std::pow(p, -3); });
  CHECK(rel(c("H", 1).c, eh1 / 4) < 1e-4);
  double eh2 = euler_double([](double p) {
    return 1 + std::pow(p, -2) - std::pow(p, -3) + std::pow(p, -4) - std::pow(p, -5) - std::pow(p, -6);
  });
  CHECK(rel(c("H", 2).c, z2 * eh2 / 4) < 1e-4);
}

TEST_CASE("partial products stabilize") {
  ZetaFactorization zf = extract_zeta_factors(corank("H", 1));
  std::vector<PoleData> pds;
  for (long b : {2500L, 5000L, 10000L, 20000L}) pds.push_back(pole_data(zf, b));
  for (std::size_t i = 0; i + 2 < pds.size(); ++i) {
    Real d0 = abs(pds[i].leading_constant - pds[i + 1].leading_constant);
    Real d1 = abs(pds[i + 1].leading_constant - pds[i + 2].leading_constant);
    CHECK(d1 < d0);
  }
  for (std::size_t i = 0; i + 1 < pds.size(); ++i)
    CHECK(pds[i].error >= abs(pds[i].leading_constant - pds[i + 1].leading_constant));
}

TEST_CASE("pole structure does not depend on the corank") {
  for (const char* label : {"Z3", "H", "sl2", "L1", "L2"}) {
    LieAlgebra L = *catalog_algebra(label);
    std::vector<std::pair<Rational, int>> seen;
    for (int m = 1; m <= 3; ++m) {
      PoleData pd = pole_data(euler_branches(L, m), 2000);
      seen.emplace_back(pd.sigma0, pd.omega);
    }
    INFO(label);
    CHECK(seen[0] == seen[1]);
    CHECK(seen[1] == seen[2]);
  }
}

TEST_CASE("densities") {
  LieAlgebra h = *catalog_algebra("H");
  CHECK(density(h, 3, 2000).value == 1);
  CHECK(std::abs(static_cast<double>(density(h, 1, 20000).value) - 0.492) < 0.002);
  CHECK(std::abs(static_cast<double>(density(*catalog_algebra("Z3"), 1, 20000).value) - 0.885) < 0.002);
  CHECK_THROWS_AS(density(h, 0, 2000), DomainError);
}
