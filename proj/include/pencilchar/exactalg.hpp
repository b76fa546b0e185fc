#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pc {

using Int = mpz_class;
using Rat = mpq_class;

// Thrown for violated preconditions of the algebraic routines.
struct MathError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Rat make_rat(const Int &num, const Int &den = 1);
std::string to_string(const Int &v);
std::string to_string(const Rat &v);
Int lcm(const Int &a, const Int &b);

// Dense integer matrix, row major.
class IntMatrix {
public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}
  IntMatrix(std::size_t rows, std::size_t cols, std::vector<Int> entries);
  static IntMatrix identity(std::size_t n);
  static IntMatrix from_rows(const std::vector<std::vector<long>> &rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Int &operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const Int &operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  IntMatrix transpose() const;
  std::vector<Int> column(std::size_t j) const;
  std::vector<Int> row(std::size_t i) const;
  IntMatrix columns(std::size_t first, std::size_t count) const;
  void append_column(std::span<const Int> c);
  bool is_zero() const;

  void swap_rows(std::size_t i, std::size_t j);
  void swap_cols(std::size_t i, std::size_t j);
  // row_i += q * row_j
  void add_row(std::size_t i, std::size_t j, const Int &q);
  void add_col(std::size_t i, std::size_t j, const Int &q);
  void negate_row(std::size_t i);
  void negate_col(std::size_t i);

  friend IntMatrix operator*(const IntMatrix &a, const IntMatrix &b);
  friend bool operator==(const IntMatrix &a, const IntMatrix &b) = default;

private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Int> a_;
};

std::vector<Int> mat_vec(const IntMatrix &a, std::span<const Int> x);
Int determinant(const IntMatrix &a);
std::size_t rank(const IntMatrix &a);

struct SmithDecomposition {
  IntMatrix U, D, V;  // U * A * V = D
  std::size_t rank = 0;
  std::vector<Int> invariants() const;  // nonzero diagonal entries
};

// Smallest-pivot elimination; D has a nonnegative diagonal with d_i | d_{i+1}.
SmithDecomposition smith_normal_form(const IntMatrix &a);

// Row-style Hermite form of the lattice spanned by the rows of a. Zero rows
// are dropped; pivots are positive, entries above a pivot lie in [0, pivot).
IntMatrix hermite_rows(const IntMatrix &a);

// Columns form the column-Hermite basis of {x : a x = 0}.
IntMatrix integer_kernel_basis(const IntMatrix &a);

// Finite abelian group by invariant factors, each >= 2 and dividing the next.
struct FinAbelianGroup {
  std::vector<Int> invariant_factors;
  Int order() const;
  bool trivial() const { return invariant_factors.empty(); }
  std::string to_string() const;
  static FinAbelianGroup from_diagonal(std::span<const Int> diag);
  friend bool operator==(const FinAbelianGroup &, const FinAbelianGroup &) = default;
};

// Element of Q/Z kept in [0, 1); exp(2 pi i v) is the character value.
class QmodZ {
public:
  QmodZ() = default;
  explicit QmodZ(const Rat &v);
  QmodZ(long num, long den) : QmodZ(make_rat(num, den)) {}
  const Rat &value() const { return v_; }
  bool is_zero() const { return v_ == 0; }
  Int order() const { return v_.get_den(); }
  QmodZ operator-() const;
  QmodZ &operator+=(const QmodZ &o);
  QmodZ &operator-=(const QmodZ &o);
  friend QmodZ operator+(QmodZ a, const QmodZ &b) { return a += b; }
  friend QmodZ operator-(QmodZ a, const QmodZ &b) { return a -= b; }
  friend QmodZ operator*(const Int &n, const QmodZ &q);
  friend bool operator==(const QmodZ &a, const QmodZ &b) { return a.v_ == b.v_; }
  friend bool operator<(const QmodZ &a, const QmodZ &b) { return a.v_ < b.v_; }
  std::string to_string() const;

private:
  Rat v_ = 0;
};

// Dense rational matrix helpers used by resonance and polynomial solves.
class RatMatrix {
public:
  RatMatrix() = default;
  RatMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Rat &operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const Rat &operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }
  std::vector<Rat> row(std::size_t i) const;
  void append_row(std::span<const Rat> r);

  // Reduced row echelon form in place; returns pivot columns.
  std::vector<std::size_t> rref();
  std::size_t rank() const;
  // Basis of {x : A x = 0}, one vector per free column.
  std::vector<std::vector<Rat>> nullspace() const;
  // Some solution of A x = b, if any.
  std::optional<std::vector<Rat>> solve(std::span<const Rat> b) const;

private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Rat> a_;
};

// Univariate polynomial over Q, lowest degree first, no trailing zeros.
class UniPoly {
public:
  UniPoly() = default;
  explicit UniPoly(std::vector<Rat> coeffs);
  static UniPoly monomial(const Rat &c, std::size_t deg);
  static UniPoly from_ints(const std::vector<long> &coeffs);

  bool is_zero() const { return c_.empty(); }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const std::vector<Rat> &coeffs() const { return c_; }
  Rat coeff(std::size_t i) const { return i < c_.size() ? c_[i] : Rat(0); }
  const Rat &lead() const;
  Rat eval(const Rat &x) const;

  UniPoly derivative() const;
  UniPoly monic() const;
  // Integer coefficients with gcd 1 and positive leading coefficient.
  std::vector<Int> primitive_integer() const;

  friend UniPoly operator+(const UniPoly &a, const UniPoly &b);
  friend UniPoly operator-(const UniPoly &a, const UniPoly &b);
  friend UniPoly operator*(const UniPoly &a, const UniPoly &b);
  friend UniPoly operator*(const Rat &s, const UniPoly &a);
  friend bool operator==(const UniPoly &a, const UniPoly &b) = default;
  std::string to_string(char var = 't') const;

private:
  void trim();
  std::vector<Rat> c_;
};

std::pair<UniPoly, UniPoly> divmod(const UniPoly &a, const UniPoly &b);
std::optional<UniPoly> exact_quotient(const UniPoly &a, const UniPoly &b);
UniPoly gcd(const UniPoly &a, const UniPoly &b);  // monic, or zero
Rat resultant(const UniPoly &a, const UniPoly &b);
// Newton interpolation through (xs[i], ys[i]); xs pairwise distinct.
UniPoly interpolate(std::span<const Rat> xs, std::span<const Rat> ys);

struct SquarefreePart {
  int multiplicity;
  UniPoly factor;  // monic, squarefree, nonconstant
};
// f = lc * prod factor^multiplicity, parts pairwise coprime.
std::vector<SquarefreePart> squarefree_decomposition(const UniPoly &f);

struct ProfileEntry {
  int multiplicity;
  int degree;
  friend auto operator<=>(const ProfileEntry &, const ProfileEntry &) = default;
};
// Sorted by decreasing multiplicity.
std::vector<ProfileEntry> squarefree_multiplicity_profile(const UniPoly &f);

struct RationalRoots {
  std::vector<std::pair<Rat, int>> roots;  // increasing, with multiplicity
  bool nonrational_remain = false;
};
RationalRoots rational_roots(const UniPoly &f);

}  // namespace pc
