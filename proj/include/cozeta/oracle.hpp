#pragma once

// Brute-force ground truth: enumerate the sublattices of Z^3 of p-power
// index in Hermite normal form, test closure under the bracket and bin the
// subalgebras by cotype.

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cozeta/cotype.hpp"
#include "cozeta/liealg.hpp"

namespace cozeta {

// Upper triangular, rows are basis vectors, M[i][i] = p^{a_i} and
// 0 <= M[i][j] < M[j][j] for i < j.
struct HNFBasis {
  Mat3 M{};
  long long det() const { return M[0][0] * M[1][1] * M[2][2]; }
};

// Exponents c1 >= c2 >= c3 of the elementary divisors.
using Cotype = std::array<int, 3>;

inline constexpr long long kDefaultEnumerationCap = 50'000'000;

// Suggested n_max per prime for full verification runs.
int default_max_exponent(long p);

// Number of HNF matrices of index p^n.
long long count_sublattices(long p, int n);

// Calls visit once per sublattice of index p^n. Throws BudgetExceeded when
// the count passes cap.
void enumerate_sublattices(long p, int n, const std::function<void(const HNFBasis&)>& visit,
                           long long cap = kDefaultEnumerationCap);
std::vector<HNFBasis> sublattices(long p, int n, long long cap = kDefaultEnumerationCap);

// Works for any nonsingular basis matrix, not only HNF.
bool is_subalgebra(const Mat3& M, const LieAlgebra& L);
inline bool is_subalgebra(const HNFBasis& M, const LieAlgebra& L) { return is_subalgebra(M.M, L); }

// Diagonal d1 | d2 | d3 of the Smith form.
std::array<long long, 3> elementary_divisors(const Mat3& M);
Cotype cotype_of(const Mat3& M, long p);
inline Cotype cotype_of(const HNFBasis& M, long p) { return cotype_of(M.M, p); }

struct CotypeCensus {
  long p = 0;
  int max_n = 0;
  std::map<Cotype, long long> counts;  // zero counts omitted

  long long at(const Cotype& c) const;
  long long total(int n) const;  // subalgebras of index p^n
};

CotypeCensus census(const LieAlgebra& L, long p, int n_max, long long cap = kDefaultEnumerationCap);

struct CompareEntry {
  Cotype cotype;
  long long observed;
  Rational predicted;
};

struct CompareReport {
  std::string algebra;
  long p = 0;
  int n_max = 0;
  std::string formula_source;  // family or catalog label used
  std::vector<CompareEntry> entries;     // every cotype with n <= n_max
  std::vector<CompareEntry> mismatches;
  bool ok() const { return mismatches.empty(); }
};

// Without an override the formula comes from route(L, p); throws DomainError
// naming the census fallback when route finds none.
CompareReport compare(const LieAlgebra& L, long p, int n_max,
                      const std::optional<LocalFormula>& formula = std::nullopt,
                      long long cap = kDefaultEnumerationCap);
CompareReport compare_census(const CotypeCensus& c, const LocalFormula& w);

}  // namespace cozeta
