#include <random>

#include "doctest.h"

#include "cozeta/errors.hpp"
#include "cozeta/igusa.hpp"

using namespace cozeta;

TEST_CASE("fibered count agrees with plain enumeration") {
  std::mt19937 rng(2);
  std::uniform_int_distribution<int> d(-3, 3);
  for (int t = 0; t < 25; ++t) {
    QuadraticForm f{};
    for (auto& row : f.a)
      for (auto& x : row) x = d(rng);
    for (long p : {2L, 3L, 5L}) {
      int max_m = p == 2 ? 4 : (p == 3 ? 3 : 2);
      for (int m = 0; m <= max_m; ++m) {
        PointCount a = count_points(f, p, m), b = count_points_exhaustive(f, p, m);
        CHECK(a.n == b.n);
        CHECK(a.n_star == b.n_star);
      }
    }
  }
}

TEST_CASE("level zero and budget") {
  QuadraticForm h{};
  h.a[2][2] = 1;
  PointCount z = count_points(h, 3, 0);
  CHECK(z.n == 1);
  CHECK(z.n_star == 1);
  CHECK_THROWS_AS(count_points(h, 7, 5, 1000), BudgetExceeded);
  CHECK_THROWS_AS(count_points_exhaustive(h, 7, 4, 1000), BudgetExceeded);
  CHECK_THROWS_AS(count_points(h, 9, 2), DomainError);
}

TEST_CASE("H counts by hand") {
  QuadraticForm h{};
  h.a[2][2] = 1;
  // x3^2 = 0 mod p^2 iff p | x3
  CHECK(count_points(h, 5, 2).n == 25 * 25 * 5);
  CHECK(count_points(h, 2, 1).n == 4);
}

TEST_CASE("closed forms match point counts") {
  for (const auto& fam : IgusaFamily::all_named(3)) {
    for (long p : {2L, 3L, 5L}) {
      if (!fam.validity().admits(p)) continue;
      IgusaReport r = verify_closed_form(fam, p, p == 5 ? 4 : 5);
      INFO(fam.name(), " p=", p);
      CHECK(r.ok());
    }
  }
}

TEST_CASE("family names and validity") {
  CHECK(IgusaFamily::parse("solvable(2,3)").name() == "solvable(2,3)");
  CHECK(IgusaFamily::parse("L2_3mod4").validity().admits(7));
  CHECK_FALSE(IgusaFamily::parse("L2_3mod4").validity().admits(5));
  CHECK_THROWS_AS(IgusaFamily::parse("sl3"), UnknownFamily);
  CHECK_THROWS_AS(IgusaFamily::parse("solvable(3,1)"), UnknownFamily);
  CHECK_THROWS_AS(verify_closed_form(IgusaFamily::parse("L2_1mod4"), 3, 3), DomainError);
  for (const char* s : {"all", "p>2", "p=1 mod 4", "p=2", "p>2 except 3,5", "(-4/p)=-1"})
    CHECK(PrimeValidity::parse(s).to_string() == s);
  CHECK(PrimeValidity::legendre_class(-4, -1).admits(7));
  CHECK_FALSE(PrimeValidity::legendre_class(-4, -1).admits(2));
}

TEST_CASE("scaling the form multiplies the Igusa function by T^i") {
  for (const char* name : {"H", "sl2_odd", "L1_odd"}) {
    IgusaFamily fam = IgusaFamily::parse(name);
    for (long p : {2L, 3L}) {
      if (!fam.validity().admits(p)) continue;
      QuadraticForm f = family_form(fam, p);
      for (auto& row : f.a)
        for (auto& x : row) x *= p;
      RationalFunction z = RationalFunction::var(Var::T) * closed_form(fam).value;
      INFO(name, " p=", p);
      CHECK(verify_igusa(z, f, p, 5).ok());
    }
  }
}

TEST_CASE("the zero family gives the full space") {
  auto pred = predicted_poincare(closed_form(IgusaFamily::parse("zero")).value, 3, 4);
  for (const auto& c : pred) CHECK(c == 1);
}
