#include "cozeta/euler.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <sstream>

#include "cozeta/cotype.hpp"
#include "cozeta/errors.hpp"

namespace cozeta {

namespace {

// u = X^alpha T^beta with gcd(|alpha|, beta) = 1; the piece is Phi_d(u).
struct Piece {
  int alpha, beta, d;
  auto operator<=>(const Piece&) const = default;
};

int mobius(int n) {
  int r = 1;
  for (int q = 2; q * q <= n; ++q) {
    if (n % q) continue;
    n /= q;
    if (n % q == 0) return 0;
    r = -r;
  }
  return n > 1 ? -r : r;
}

int totient(int n) {
  int r = n;
  for (int q = 2; q * q <= n; ++q) {
    if (n % q) continue;
    while (n % q == 0) n /= q;
    r -= r / q;
  }
  return n > 1 ? r - r / n : r;
}

std::vector<int> divisors(int n) {
  std::vector<int> out;
  for (int k = 1; k <= n; ++k)
    if (n % k == 0) out.push_back(k);
  return out;
}

// Integer coefficients of the d-th cyclotomic polynomial.
std::vector<long long> cyclotomic(int d) {
  static std::map<int, std::vector<long long>> cache;
  if (auto it = cache.find(d); it != cache.end()) return it->second;
  std::vector<long long> num(d + 1, 0);
  num[0] = -1;
  num[d] = 1;
  for (int e : divisors(d)) {
    if (e == d) continue;
    auto den = cyclotomic(e);
    // exact division by a monic polynomial
    int n = static_cast<int>(num.size()) - 1, m = static_cast<int>(den.size()) - 1;
    std::vector<long long> q(n - m + 1, 0);
    for (int k = n - m; k >= 0; --k) {
      q[k] = num[k + m];
      for (int j = 0; j <= m; ++j) num[k + j] -= q[k] * den[j];
    }
    num = q;
  }
  cache[d] = num;
  return num;
}

Polynomial piece_poly(const Piece& pc) {
  Monomial u = Monomial::of(Var::X, pc.alpha) * Monomial::of(Var::T, pc.beta);
  Polynomial f;
  auto c = cyclotomic(pc.d);
  if (pc.d == 1) c = {1, -1};  // 1 - u rather than u - 1
  for (std::size_t k = 0; k < c.size(); ++k)
    if (c[k]) f += Polynomial::term(Rational(static_cast<long>(c[k])), u.pow(static_cast<int>(k)));
  return f;
}

// Factors contributed by Phi_d(u)^k sitting in the denominator.
void add_piece(FactorMap& fm, const Piece& pc, int k) {
  for (int e : divisors(pc.d)) {
    int mu = mobius(pc.d / e);
    if (mu) fm[{e * pc.alpha, e * pc.beta}] += k * mu;
  }
}

Rational ratio(int a, int b) {
  Rational r(a + 1, b);
  r.canonicalize();
  return r;
}

void prune(FactorMap& fm) {
  std::erase_if(fm, [](const auto& kv) { return kv.second == 0; });
}

std::optional<Rational> max_ratio(const Polynomial& f) {
  std::optional<Rational> best;
  for (const auto& [m, c] : f.terms()) {
    if (m.is_one()) continue;
    int b = m[Var::T];
    if (b <= 0) continue;
    Rational r = ratio(m[Var::X], b);
    if (!best || r > *best) best = r;
  }
  return best;
}

void check_vars(const RationalFunction& w) {
  for (Var v : w.support().members())
    if (v != Var::X && v != Var::T)
      throw VariableMismatch("zeta-factor extraction needs a function of X and T, found " +
                             std::string(var_name(v)));
}

struct Span {
  int degT = 0, lo = 0, hi = 0;
};

Span span_of(const Polynomial& f) {
  Span s;
  for (const auto& [m, c] : f.terms()) {
    s.degT = std::max(s.degT, m[Var::T]);
    s.lo = std::min(s.lo, m[Var::X]);
    s.hi = std::max(s.hi, m[Var::X]);
  }
  return s;
}

// Cyclotomic pieces of a polynomial with constant term 1, by trial division.
std::optional<std::map<Piece, int>> split_pieces(Polynomial f) {
  std::map<Piece, int> out;
  const auto& t = f.terms();
  if (t.size() == 2 && t.begin()->first.is_one() && t.begin()->second == 1) {
    const Monomial& m = t.rbegin()->first;
    Rational c = t.rbegin()->second;
    int a = m[Var::X], b = m[Var::T];
    if ((c == 1 || c == -1) && b >= 1 && m.support().members().size() <= 2) {
      int g = std::gcd(std::abs(a), b);
      for (int d : divisors(2 * g)) {
        bool in = c == -1 ? g % d == 0 : g % d != 0;
        if (in) out[{a / g, b / g, d}] += 1;
      }
      return out;
    }
  }
  const Span s = span_of(f);
  for (int beta = 1; beta <= s.degT; ++beta)
    for (int alpha = s.lo; alpha <= s.hi; ++alpha) {
      if (std::gcd(std::abs(alpha), beta) != 1) continue;
      for (int d = 1; totient(d) * beta <= s.degT; ++d) {
        Polynomial pp = piece_poly({alpha, beta, d});
        for (;;) {
          auto q = f.divide_exact(pp);
          if (!q) break;
          f = *q;
          ++out[{alpha, beta, d}];
        }
      }
    }
  if (f != Polynomial(1)) return std::nullopt;
  return out;
}

std::map<Piece, int> denominator_pieces(const RationalFunction& w) {
  std::map<Piece, int> pieces;
  for (const auto& f : w.denominator_factors()) {
    auto sp = split_pieces(f.poly);
    if (!sp)
      throw ShapeError("denominator factor (" + f.poly.to_string() +
                       ") is not a product of factors 1 - X^a*T^b");
    for (const auto& [pc, k] : *sp) pieces[pc] += k * f.multiplicity;
  }
  return pieces;
}

Rational abscissa_of(const FactorMap& fm) {
  std::optional<Rational> best;
  for (const auto& [ab, k] : fm)
    if (k > 0 && (!best || ratio(ab.first, ab.second) > *best)) best = ratio(ab.first, ab.second);
  if (!best) throw ShapeError("no zeta factor with a pole; the local factor is entire in s");
  return *best;
}

// Divide out one binomial or cyclotomic piece of the numerator when it lowers
// the largest (a+1)/b among the residual's monomials.
bool pull_numerator(Polynomial& num, FactorMap& fm, const Rational& target) {
  auto cur = max_ratio(num);
  if (!cur) return false;
  const Span s = span_of(num);
  std::vector<std::pair<Polynomial, FactorMap>> cands;
  for (int b = 1; b <= s.degT; ++b) {
    for (int a = s.lo; a <= s.hi; ++a) {
      Monomial u = Monomial::of(Var::X, a) * Monomial::of(Var::T, b);
      cands.push_back({Polynomial(1) - Polynomial::term(1, u), {{{a, b}, -1}}});
      cands.push_back({Polynomial(1) + Polynomial::term(1, u), {{{2 * a, 2 * b}, -1}, {{a, b}, 1}}});
    }
  }
  for (int beta = 1; beta <= s.degT; ++beta)
    for (int alpha = s.lo; alpha <= s.hi; ++alpha) {
      if (std::gcd(std::abs(alpha), beta) != 1) continue;
      for (int d = 3; totient(d) * beta <= s.degT; ++d) {
        FactorMap extra;
        add_piece(extra, {alpha, beta, d}, -1);
        cands.push_back({piece_poly({alpha, beta, d}), extra});
      }
    }
  for (const auto& [f, extra] : cands) {
    bool below = std::all_of(extra.begin(), extra.end(), [&](const auto& kv) {
      return kv.second == 0 || ratio(kv.first.first, kv.first.second) < target;
    });
    if (!below) continue;
    auto q = num.divide_exact(f);
    if (!q) continue;
    auto next = max_ratio(*q);
    if (next && *next >= *cur) continue;
    num = *q;
    for (const auto& [ab, k] : extra) fm[ab] += k;
    return true;
  }
  return false;
}

// Pull the first monomial X^a T^b with (a+1)/b >= target out of the series.
bool pull_monomial(RationalFunction& res, FactorMap& fm, const Rational& target, int bound) {
  auto ser = series_expand(res, VarSet{Var::T}, bound);
  if (ser[{0}] != Polynomial(1))
    throw ShapeError("local factor does not have constant term 1: " + ser[{0}].to_string());
  for (const auto& [k, coef] : ser) {
    int b = k[0];
    if (b == 0) continue;
    for (const auto& [m, c] : coef.terms()) {
      int a = m[Var::X];
      if (ratio(a, b) < target) continue;
      if (c.get_den() != 1)
        throw ShapeError("coefficient " + c.get_str() + " of X^" + std::to_string(a) + "*T^" +
                         std::to_string(b) + " is not an integer");
      int e = static_cast<int>(c.get_num().get_si());
      RationalFunction one_minus(Polynomial(1) - Polynomial::term(1, m * Monomial::of(Var::T, b)));
      res = (res * one_minus.pow(e)).cancel();
      fm[{a, b}] += e;
      return true;
    }
  }
  return false;
}

ZetaFactorization extract(const RationalFunction& w0, std::optional<Rational> sigma) {
  check_vars(w0);
  RationalFunction w = w0.cancel();
  auto pieces = denominator_pieces(w);
  Polynomial num = w.numerator();
  if (num.is_zero()) throw ShapeError("zero local factor");
  for (const auto& [m, c] : num.terms())
    if (m[Var::T] < 0) throw ShapeError("negative power of T in the numerator");

  // cancel pieces shared with the numerator
  for (auto& [pc, k] : pieces) {
    Polynomial f = piece_poly(pc);
    while (k > 0) {
      auto q = num.divide_exact(f);
      if (!q) break;
      num = *q;
      --k;
    }
  }
  ZetaFactorization zf;
  for (const auto& [pc, k] : pieces)
    if (k) add_piece(zf.factors, pc, k);
  prune(zf.factors);
  Rational target = sigma ? *sigma : abscissa_of(zf.factors);

  const int bound = std::max(12, 3 * span_of(num).degT + 3);
  RationalFunction res(num);
  for (int iter = 0;; ++iter) {
    if (iter > 200) throw ConvergenceError("zeta-factor extraction did not terminate");
    if (res.is_polynomial()) {
      Polynomial n = res.numerator();
      while (pull_numerator(n, zf.factors, target)) {
      }
      res = RationalFunction(n);
    }
    if (!pull_monomial(res, zf.factors, target, bound)) break;
  }
  prune(zf.factors);
  zf.residual = res;
  return zf;
}

}  // namespace

namespace {

Real to_real(const Rational& q) {
  return Real(q.get_num().get_str()) / Real(q.get_den().get_str());
}

// p^e for rational e
Real real_pow(long p, const Rational& e) {
  if (e.get_den() == 1) return boost::multiprecision::pow(Real(p), static_cast<int>(e.get_num().get_si()));
  return boost::multiprecision::pow(Real(p), to_real(e));
}

struct TermR {
  Real c;
  int a, b;
};

struct PolyR {
  std::vector<TermR> terms;
  explicit PolyR(const Polynomial& f) {
    for (const auto& [m, c] : f.terms()) {
      for (Var v : m.support().members())
        if (v != Var::X && v != Var::T)
          throw VariableMismatch("unexpected variable " + std::string(var_name(v)));
      terms.push_back({to_real(c), m[Var::X], m[Var::T]});
    }
  }
  // value at X = p, T = p^{-sigma}: monomial X^a T^b is p^(a - b sigma)
  Real at(long p, const Rational& sigma, std::map<Rational, Real>& cache) const {
    Real s = 0;
    for (const auto& t : terms) {
      Rational e = Rational(t.a) - Rational(t.b) * sigma;
      auto it = cache.find(e);
      if (it == cache.end()) it = cache.emplace(e, real_pow(p, e)).first;
      s += t.c * it->second;
    }
    return s;
  }
};

struct FnR {
  PolyR num;
  std::vector<std::pair<PolyR, int>> den;
  explicit FnR(const RationalFunction& w) : num(w.numerator()) {
    for (const auto& f : w.denominator_factors()) den.emplace_back(PolyR(f.poly), f.multiplicity);
  }
  Real at(long p, const Rational& sigma) const {
    std::map<Rational, Real> cache;
    Real v = num.at(p, sigma, cache);
    for (const auto& [f, k] : den) {
      Real d = f.at(p, sigma, cache);
      if (d == 0) throw DenominatorVanishes("local factor has a pole at p = " + std::to_string(p));
      v /= boost::multiprecision::pow(d, k);
    }
    return v;
  }
};

struct Analysis {
  Rational sigma0;
  int omega = 0;
  std::vector<CriticalFactor> critical;
  FactorMap common;
  Real prefactor;  // prod over critical factors of (1/b)^mult
  std::vector<std::pair<EulerBranch, FnR>> branches;  // fixed-prime ones first
  std::vector<long> excluded;  // primes handled by a fixed branch

  Real local(long p) const {
    for (const auto& [br, fn] : branches) {
      if (!br.validity.admits(p)) continue;
      Real v = fn.at(p, sigma0);
      for (const auto& cf : critical) {
        Rational e = Rational(cf.a) - Rational(cf.b) * sigma0;
        v *= boost::multiprecision::pow(1 - real_pow(p, e), to_real(cf.mult));
      }
      for (const auto& [ab, k] : common) {
        Rational e = Rational(ab.first) - Rational(ab.second) * sigma0;
        v *= boost::multiprecision::pow(1 - real_pow(p, e), k);
      }
      return v;
    }
    throw DomainError("no local factor covers p = " + std::to_string(p));
  }
};

Analysis analyze(const std::vector<EulerBranch>& input) {
  if (input.empty()) throw DomainError("no local factors given");
  std::vector<const EulerBranch*> dense;
  double total = 0;
  for (const auto& b : input) {
    if (b.validity.density() > 0) {
      dense.push_back(&b);
      total += b.validity.density();
    }
  }
  if (dense.empty()) throw DomainError("local factors cover only finitely many primes");
  if (std::abs(total - 1) > 1e-9)
    throw DomainError("prime classes of the local factors do not partition the primes");

  Rational sigma = -1000;
  for (const auto* b : dense) sigma = std::max(sigma, abscissa_of(extract(b->w, std::nullopt).factors));

  Analysis an;
  std::vector<ZetaFactorization> zfs;
  std::map<std::pair<int, int>, Rational> avg;
  for (int round = 0;; ++round) {
    if (round > 5) throw ConvergenceError("abscissa of convergence did not settle");
    zfs.clear();
    avg.clear();
    for (const auto* b : dense) {
      zfs.push_back(extract(b->w, sigma));
      Rational dens = b->validity.kind == PrimeValidity::Kind::Residue
                          ? Rational(1, totient(static_cast<int>(b->validity.modulus)))
                          : (b->validity.kind == PrimeValidity::Kind::Legendre ? Rational(1, 2)
                                                                               : Rational(1));
      for (const auto& [ab, k] : zfs.back().factors) avg[ab] += dens * k;
    }
    std::optional<Rational> s0;
    for (const auto& [ab, k] : avg)
      if (k > 0 && (!s0 || ratio(ab.first, ab.second) > *s0)) s0 = ratio(ab.first, ab.second);
    if (!s0) throw ShapeError("averaged local factors have no pole");
    if (*s0 == sigma) break;
    sigma = *s0;
  }
  an.sigma0 = sigma;
  Rational omega = 0;
  an.prefactor = 1;
  for (const auto& [ab, k] : avg) {
    if (k == 0 || ratio(ab.first, ab.second) != sigma) continue;
    an.critical.push_back({ab.first, ab.second, k});
    omega += k;
    an.prefactor *= boost::multiprecision::pow(Real(1) / ab.second, to_real(k));
  }
  if (omega.get_den() != 1 || omega <= 0)
    throw ConvergenceError("pole order " + omega.get_str() + " is not a positive integer");
  an.omega = static_cast<int>(omega.get_num().get_si());
  // non-critical factors shared by every class of primes
  for (const auto& [ab, k] : zfs.front().factors) {
    if (ratio(ab.first, ab.second) == sigma) continue;
    bool everywhere = std::all_of(zfs.begin(), zfs.end(), [&](const ZetaFactorization& z) {
      auto it = z.factors.find(ab);
      return it != z.factors.end() && it->second == k;
    });
    if (everywhere) an.common[ab] = k;
  }
  for (const auto& b : input)
    if (b.validity.is_fixed()) an.branches.emplace_back(b, FnR(b.w));
  for (const auto& b : input)
    if (!b.validity.is_fixed()) an.branches.emplace_back(b, FnR(b.w));
  return an;
}

struct Partial {
  Real log_full, log_half;
};

template <class F>
Partial log_product(long bound, F local) {
  Partial r{0, 0};
  for (long p : primes_up_to(bound)) {
    Real v = local(p);
    if (v <= 0) throw ConvergenceError("non-positive Euler factor at p = " + std::to_string(p));
    r.log_full += boost::multiprecision::log(v);
    if (2 * p <= bound) r.log_half = r.log_full;
  }
  return r;
}

Real zeta_tail(const Real& s, long bound) {
  Real lb = std::log(static_cast<double>(bound));
  return boost::multiprecision::pow(Real(bound), 1 - s) / ((s - 1) * lb);
}

PoleData finish(const Analysis& an, long bound) {
  if (bound < 8) throw DomainError("prime bound must be at least 8");
  Partial part = log_product(bound, [&](long p) { return an.local(p); });
  Real delta = boost::multiprecision::abs(part.log_full - part.log_half);
  if (delta > 0.05) throw ConvergenceError("partial Euler products fail to stabilize");
  PoleData pd;
  pd.sigma0 = an.sigma0;
  pd.omega = an.omega;
  pd.critical = an.critical;
  pd.prime_bound = bound;
  Real c = an.prefactor * boost::multiprecision::exp(part.log_full);
  Real rel = 2 * delta;
  for (const auto& [ab, k] : an.common) {
    Real s = Real(ab.second) * to_real(an.sigma0) - ab.first;
    c *= boost::multiprecision::pow(zeta_euler(s, bound), k);
    rel += std::abs(k) * zeta_tail(s, bound) / std::log(static_cast<double>(bound));
  }
  pd.leading_constant = c;
  pd.error = boost::multiprecision::abs(c) * rel;
  return pd;
}

}  // namespace

// ---------------------------------------------------------------- public

RationalFunction ZetaFactorization::reassemble() const {
  RationalFunction w = residual;
  for (const auto& [ab, k] : factors) {
    Polynomial f = Polynomial(1) - Polynomial::term(1, Monomial::of(Var::X, ab.first) *
                                                           Monomial::of(Var::T, ab.second));
    w *= RationalFunction(f).pow(-k);
  }
  return w;
}

Rational ZetaFactorization::abscissa() const { return abscissa_of(factors); }

ZetaFactorization extract_zeta_factors(const RationalFunction& w) { return extract(w, std::nullopt); }

ZetaFactorization extract_zeta_factors(const RationalFunction& w, const Rational& sigma) {
  return extract(w, sigma);
}

PoleData pole_data(const ZetaFactorization& zf, long prime_bound) {
  // a single class of primes; every non-critical factor is common
  Analysis an;
  an.sigma0 = zf.abscissa();
  Rational omega = 0;
  an.prefactor = 1;
  for (const auto& [ab, k] : zf.factors) {
    if (ratio(ab.first, ab.second) == an.sigma0) {
      an.critical.push_back({ab.first, ab.second, Rational(k)});
      omega += k;
      an.prefactor *= boost::multiprecision::pow(Real(1) / ab.second, k);
    } else {
      an.common[ab] = k;
    }
  }
  if (omega <= 0) throw ConvergenceError("no pole at the abscissa");
  an.omega = static_cast<int>(omega.get_num().get_si());
  an.branches.emplace_back(EulerBranch{zf.reassemble(), PrimeValidity::all()}, FnR(zf.reassemble()));
  return finish(an, prime_bound);
}

PoleData pole_data(const std::vector<EulerBranch>& branches, long prime_bound) {
  return finish(analyze(branches), prime_bound);
}

Asymptotic asymptotic_count(const PoleData& pd) {
  Asymptotic a;
  a.sigma0 = pd.sigma0;
  a.omega = pd.omega;
  Real fact = 1;
  for (int k = 2; k < pd.omega; ++k) fact *= k;
  a.c = pd.leading_constant / (to_real(pd.sigma0) * fact);
  std::ostringstream os;
  os << "N(X) ~ " << format_real(a.c) << " * X^" << pd.sigma0.get_str();
  if (pd.omega == 2) os << " * log(X)";
  if (pd.omega > 2) os << " * log(X)^" << pd.omega - 1;
  a.text = os.str();
  return a;
}

std::vector<EulerBranch> euler_branches(const LieAlgebra& L, int m) {
  if (m < 1 || m > 3) throw DomainError("corank must be in 1..3");
  std::vector<EulerBranch> out;
  std::set<long long> bad;
  for (const auto& f : route_branches(L)) {
    out.push_back({corank_specialize(f.value, m).cancel(), f.validity});
    bad.insert(f.validity.excluded.begin(), f.validity.excluded.end());
  }
  for (long long p : bad) {
    RouteResult r = route(L, p);
    if (!r.formula)
      throw DomainError("no local formula at p = " + std::to_string(p) + " (" + r.reason + ")");
    RationalFunction w = substitute(corank_specialize(r.formula->value, m),
                                    {{Var::X, RationalFunction(Rational(static_cast<long>(p)))}});
    out.push_back({w.cancel(), PrimeValidity::fixed(p)});
  }
  return out;
}

DensityResult density(const LieAlgebra& L, int m, long prime_bound) {
  Analysis am = analyze(euler_branches(L, m));
  Analysis a3 = analyze(euler_branches(L, 3));
  if (am.sigma0 != a3.sigma0 || am.omega != a3.omega)
    throw ConvergenceError("pole structure differs between corank " + std::to_string(m) +
                           " and the full count; internal inconsistency");
  DensityResult r;
  r.pole = finish(am, prime_bound);
  r.pole_full = finish(a3, prime_bound);
  if (m == 3) {
    r.value = 1;
    r.error = 0;
    return r;
  }
  // per-prime ratio; the critical corrections cancel class by class
  Partial part = log_product(prime_bound, [&](long p) { return am.local(p) / a3.local(p); });
  FactorMap net = am.common;
  for (const auto& [ab, k] : a3.common) net[ab] -= k;
  Real common = 1;
  for (const auto& [ab, k] : net) {
    if (k == 0) continue;
    Real s = Real(ab.second) * to_real(am.sigma0) - ab.first;
    common *= boost::multiprecision::pow(zeta_euler(s, prime_bound), k);
  }
  r.value = am.prefactor / a3.prefactor * common * boost::multiprecision::exp(part.log_full);
  r.error = r.value * 2 * boost::multiprecision::abs(part.log_full - part.log_half);
  return r;
}

Real zeta_euler(const Real& s, long prime_bound) {
  if (s <= 1) throw DomainError("Euler product of zeta needs s > 1");
  Real logz = 0;
  for (long p : primes_up_to(prime_bound))
    logz -= boost::multiprecision::log1p(-boost::multiprecision::pow(Real(p), -s));
  return boost::multiprecision::exp(logz + zeta_tail(s, prime_bound));
}

std::vector<long> primes_up_to(long n) {
  static std::map<long, std::vector<long>> cache;
  if (auto it = cache.find(n); it != cache.end()) return it->second;
  std::vector<char> comp(std::max(n + 1, 2L), 0);
  std::vector<long> out;
  for (long i = 2; i <= n; ++i) {
    if (comp[i]) continue;
    out.push_back(i);
    for (long j = i * i; j <= n; j += i) comp[j] = 1;
  }
  cache[n] = out;
  return out;
}

std::string format_real(const Real& x, int digits) {
  std::ostringstream os;
  os.precision(digits);
  os << std::fixed << x;
  return os.str();
}

}  // namespace cozeta
