#pragma once

// Rank-3 Lie algebras over Z given by structure constants, their structure
// matrix and the attached ternary quadratic form.

#include <array>
#include <optional>
#include <set>
#include <string>
#include <string_view>

#include "cozeta/ratfun.hpp"

namespace cozeta {

using Vec3 = std::array<long long, 3>;
using Mat3 = std::array<Vec3, 3>;
using QMat3 = std::array<std::array<Rational, 3>, 3>;

class LieAlgebra {
 public:
  LieAlgebra() = default;
  // Brackets [e1,e2], [e1,e3], [e2,e3] as coordinate vectors. Throws
  // JacobiViolation when the Jacobi identity fails.
  static LieAlgebra make(const Vec3& c12, const Vec3& c13, const Vec3& c23, std::string name = "");
  // Definition-file format: lines "[i,j] = c1 c2 c3" and "name = label";
  // '#' starts a comment. Unlisted brackets are zero.
  static LieAlgebra parse(std::string_view text);
  std::string to_text() const;

  const Vec3& c(int i, int j) const;  // 1-based, i < j
  Vec3 bracket(const Vec3& x, const Vec3& y) const;
  const std::string& name() const { return name_; }
  bool is_abelian() const;
  LieAlgebra scaled(long long k) const;
  bool same_brackets(const LieAlgebra& o) const { return c_ == o.c_; }

 private:
  std::array<Vec3, 3> c_{};  // c12, c13, c23
  std::string name_;
};

// Rows lambda_23, lambda_31 = -c(1,3), lambda_12.
Mat3 structure_matrix(const LieAlgebra& L);
LieAlgebra from_structure_matrix(const Mat3& A, std::string name = "");

// det(P) (P^T)^{-1} A P^{-1}: structure matrix of the algebra with basis
// f_i = sum_j P_ij e_j. Throws SingularMatrix when det(P) = 0.
QMat3 transform(const QMat3& A, const QMat3& P);
QMat3 transform(const LieAlgebra& L, const QMat3& P);
QMat3 to_rational(const Mat3& A);
Rational det(const QMat3& M);
QMat3 inverse(const QMat3& M);
QMat3 operator*(const QMat3& a, const QMat3& b);
QMat3 transpose(const QMat3& M);
long long det(const Mat3& M);

// f(x) = x^T A x; A need not be symmetric.
struct QuadraticForm {
  Mat3 a{};
  long long operator()(const Vec3& x) const;
  Mat3 polar() const;  // A + A^T, twice the symmetric Gram matrix
};

QuadraticForm quadratic_form(const LieAlgebra& L);
QuadraticForm quadratic_form_from(std::string_view text);  // nine integers, row-major

struct FormClass {
  int rank = 0;
  // det of the symmetric Gram matrix for rank 3; b^2 - 4ac of the reduced
  // binary form for rank 2; the leading coefficient for rank 1; 0 for rank 0.
  Rational discriminant;
  std::optional<long long> binary_discriminant;
  std::array<long long, 3> binary{};  // a, b, c of the reduced binary form
  long long coefficient = 0;          // rank 1: f = coefficient * l(x)^2
  bool reducible_over_z = false;
  std::set<long long> bad_primes;
  bool is_good(long long p) const { return !bad_primes.contains(p); }
};

FormClass classify(const QuadraticForm& f);

// Helpers shared with the rest of the library.
bool is_prime(long long n);
std::set<long long> prime_divisors(long long n);
int legendre(long long a, long long p);
bool is_square(long long n);
long long least_nonresidue(long long p);
long long content(const Mat3& A);
int valuation(long long n, long long p);

}  // namespace cozeta
