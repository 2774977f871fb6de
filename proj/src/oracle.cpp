#include "cozeta/oracle.hpp"

#include <algorithm>
#include <numeric>
#include <utility>

#include "cozeta/errors.hpp"

namespace cozeta {

namespace {

using i128 = __int128;

long long ipow(long long p, int e) {
  long long r = 1;
  for (int i = 0; i < e; ++i) r *= p;
  return r;
}

void check_prime(long p) {
  if (!is_prime(p)) throw DomainError(std::to_string(p) + " is not a prime");
}

std::array<std::array<i128, 3>, 3> adjugate(const Mat3& M) {
  std::array<std::array<i128, 3>, 3> adj{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      int r0 = (j + 1) % 3, r1 = (j + 2) % 3, c0 = (i + 1) % 3, c1 = (i + 2) % 3;
      adj[i][j] = static_cast<i128>(M[r0][c0]) * M[r1][c1] - static_cast<i128>(M[r0][c1]) * M[r1][c0];
    }
  }
  return adj;
}

}  // namespace

int default_max_exponent(long p) {
  switch (p) {
    case 2: return 8;
    case 3: return 6;
    case 5: return 4;
    case 7: return 3;
    default: return 2;
  }
}

long long count_sublattices(long p, int n) {
  check_prime(p);
  if (n < 0) throw DomainError("index exponent must be non-negative");
  long long total = 0;
  for (int a1 = 0; a1 <= n; ++a1)
    for (int a2 = 0; a1 + a2 <= n; ++a2) total += ipow(p, a2) * ipow(p, 2 * (n - a1 - a2));
  return total;
}

void enumerate_sublattices(long p, int n, const std::function<void(const HNFBasis&)>& visit,
                           long long cap) {
  long long total = count_sublattices(p, n);
  if (total > cap)
    throw BudgetExceeded(std::to_string(total) + " sublattices of index " + std::to_string(p) + "^" +
                         std::to_string(n) + " exceed the cap of " + std::to_string(cap));
  HNFBasis b;
  for (int a1 = 0; a1 <= n; ++a1) {
    for (int a2 = 0; a1 + a2 <= n; ++a2) {
      long long d1 = ipow(p, a1), d2 = ipow(p, a2), d3 = ipow(p, n - a1 - a2);
      b.M = Mat3{};
      b.M[0][0] = d1;
      b.M[1][1] = d2;
      b.M[2][2] = d3;
      for (long long m01 = 0; m01 < d2; ++m01) {
        b.M[0][1] = m01;
        for (long long m02 = 0; m02 < d3; ++m02) {
          b.M[0][2] = m02;
          for (long long m12 = 0; m12 < d3; ++m12) {
            b.M[1][2] = m12;
            visit(b);
          }
        }
      }
    }
  }
}

std::vector<HNFBasis> sublattices(long p, int n, long long cap) {
  std::vector<HNFBasis> out;
  enumerate_sublattices(p, n, [&](const HNFBasis& b) { out.push_back(b); }, cap);
  return out;
}

bool is_subalgebra(const Mat3& M, const LieAlgebra& L) {
  auto adj = adjugate(M);
  i128 d = 0;
  for (int j = 0; j < 3; ++j) d += static_cast<i128>(M[0][j]) * adj[j][0];
  if (d == 0) throw SingularMatrix("basis matrix is singular");
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      Vec3 v = L.bracket(M[i], M[j]);
      // coordinates of v in the basis are v * M^{-1} = v * adj / det
      for (int k = 0; k < 3; ++k) {
        i128 s = 0;
        for (int r = 0; r < 3; ++r) s += static_cast<i128>(v[r]) * adj[r][k];
        if (s % d != 0) return false;
      }
    }
  }
  return true;
}

std::array<long long, 3> elementary_divisors(const Mat3& M0) {
  Mat3 M = M0;
  // Plain Smith reduction: move the smallest nonzero entry of the trailing
  // block to the pivot, clear its row and column, and repeat until the pivot
  // divides the rest of the block.
  for (int t = 0; t < 3; ++t) {
    for (;;) {
      int bi = -1, bj = -1;
      for (int i = t; i < 3; ++i)
        for (int j = t; j < 3; ++j)
          if (M[i][j] != 0 && (bi < 0 || std::llabs(M[i][j]) < std::llabs(M[bi][bj]))) {
            bi = i;
            bj = j;
          }
      if (bi < 0) return {0, 0, 0};
      std::swap(M[t], M[bi]);
      for (auto& row : M) std::swap(row[t], row[bj]);
      bool clean = true;
      for (int i = t + 1; i < 3; ++i) {
        long long q = M[i][t] / M[t][t];
        for (int j = t; j < 3; ++j) M[i][j] -= q * M[t][j];
        if (M[i][t]) clean = false;
      }
      for (int j = t + 1; j < 3; ++j) {
        long long q = M[t][j] / M[t][t];
        for (int i = t; i < 3; ++i) M[i][j] -= q * M[i][t];
        if (M[t][j]) clean = false;
      }
      if (!clean) continue;
      int bad = -1;
      for (int i = t + 1; i < 3 && bad < 0; ++i)
        for (int j = t + 1; j < 3; ++j)
          if (M[i][j] % M[t][t]) {
            bad = i;
            break;
          }
      if (bad < 0) break;
      for (int j = t; j < 3; ++j) M[t][j] += M[bad][j];
    }
  }
  return {std::llabs(M[0][0]), std::llabs(M[1][1]), std::llabs(M[2][2])};
}

Cotype cotype_of(const Mat3& M, long p) {
  auto d = elementary_divisors(M);
  if (d[0] == 0) throw SingularMatrix("basis matrix is singular");
  Cotype c{};
  for (int i = 0; i < 3; ++i) {
    long long x = d[i];
    int v = valuation(x, p);
    if (x != ipow(p, v)) throw DomainError("index is not a power of " + std::to_string(p));
    c[2 - i] = v;
  }
  return c;
}

long long CotypeCensus::at(const Cotype& c) const {
  auto it = counts.find(c);
  return it == counts.end() ? 0 : it->second;
}

long long CotypeCensus::total(int n) const {
  long long s = 0;
  for (const auto& [c, k] : counts)
    if (c[0] + c[1] + c[2] == n) s += k;
  return s;
}

CotypeCensus census(const LieAlgebra& L, long p, int n_max, long long cap) {
  check_prime(p);
  if (n_max < 0) throw DomainError("max exponent must be non-negative");
  long long total = 0;
  for (int n = 0; n <= n_max; ++n) total += count_sublattices(p, n);
  if (total > cap)
    throw BudgetExceeded("census needs " + std::to_string(total) + " lattices, over the cap of " +
                         std::to_string(cap));
  CotypeCensus c;
  c.p = p;
  c.max_n = n_max;
  for (int n = 0; n <= n_max; ++n) {
    enumerate_sublattices(p, n, [&](const HNFBasis& b) {
      if (is_subalgebra(b, L)) ++c.counts[cotype_of(b, p)];
    }, cap);
  }
  return c;
}

CompareReport compare_census(const CotypeCensus& c, const LocalFormula& w) {
  if (!w.validity.admits(c.p))
    throw DomainError("formula for " + w.algebra + " (" + w.validity.to_string() +
                      ") does not apply at p = " + std::to_string(c.p));
  CompareReport r;
  r.p = c.p;
  r.n_max = c.max_n;
  r.formula_source = w.algebra;
  auto coeffs = series_coefficients(w.value, c.p, c.max_n, VarSet::ys(3));
  for (int n = 0; n <= c.max_n; ++n) {
    for (int c1 = n; c1 >= 0; --c1) {
      for (int c2 = std::min(c1, n - c1); c2 >= 0; --c2) {
        int c3 = n - c1 - c2;
        if (c3 > c2) continue;
        Cotype ct{c1, c2, c3};
        auto it = coeffs.find({c1, c2, c3});
        Rational pred = it == coeffs.end() ? Rational(0) : it->second;
        CompareEntry e{ct, c.at(ct), pred};
        if (pred != Rational(static_cast<long>(e.observed))) r.mismatches.push_back(e);
        r.entries.push_back(std::move(e));
      }
    }
  }
  // the formula must not predict subalgebras of non-monotone cotype
  for (const auto& [k, v] : coeffs) {
    if (v == 0) continue;
    if (k[0] < k[1] || k[1] < k[2])
      r.mismatches.push_back({{k[0], k[1], k[2]}, 0, v});
  }
  return r;
}

CompareReport compare(const LieAlgebra& L, long p, int n_max, const std::optional<LocalFormula>& formula,
                      long long cap) {
  check_prime(p);
  LocalFormula w;
  std::string source;
  if (formula) {
    w = *formula;
    source = w.algebra;
  } else {
    RouteResult rr = route(L, p);
    if (!rr.formula)
      throw DomainError("no formula for " + (L.name().empty() ? std::string("L") : L.name()) +
                        " at p = " + std::to_string(p) + ": " + rr.reason);
    w = *rr.formula;
    source = rr.family;
  }
  CompareReport r = compare_census(census(L, p, n_max, cap), w);
  r.algebra = L.name();
  r.formula_source = source;
  return r;
}

}  // namespace cozeta
