#pragma once

#include "pencilchar/cyclotomic.hpp"
#include "pencilchar/exactalg.hpp"

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pc {

using Exponent = std::array<int, 3>;

// Lexicographic order with x > y > z, largest first.
struct LexDescending {
  bool operator()(const Exponent &a, const Exponent &b) const { return a > b; }
};

// Homogeneous form in x, y, z over Q; no zero coefficients stored.
class TernaryForm {
public:
  using Terms = std::map<Exponent, Rat, LexDescending>;

  TernaryForm() = default;  // the zero form, degree 0
  TernaryForm(int degree, Terms terms);
  static TernaryForm constant(const Rat &c);
  static TernaryForm variable(int index);  // 0 = x, 1 = y, 2 = z
  static TernaryForm linear(const Rat &u, const Rat &v, const Rat &w);

  int degree() const { return degree_; }
  const Terms &terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  Rat coeff(const Exponent &e) const;
  Rat eval(const std::array<Rat, 3> &p) const;
  Cyclo eval(const std::array<Cyclo, 3> &p) const;

  // Integer coefficients with gcd 1, leading coefficient positive.
  TernaryForm primitive() const;
  // Same form scaled so the leading coefficient is 1.
  TernaryForm monic() const;
  TernaryForm pow(int e) const;

  friend TernaryForm operator+(const TernaryForm &a, const TernaryForm &b);
  friend TernaryForm operator-(const TernaryForm &a, const TernaryForm &b);
  friend TernaryForm operator*(const TernaryForm &a, const TernaryForm &b);
  friend TernaryForm operator*(const Rat &s, const TernaryForm &a);
  friend bool operator==(const TernaryForm &a, const TernaryForm &b) = default;

  std::string to_string() const;

private:
  int degree_ = 0;
  Terms terms_;
};

// Monomials of degree d in lex-descending order; their positions index coefficient vectors.
const std::vector<Exponent> &monomials(int degree);
std::vector<Rat> coefficient_vector(const TernaryForm &f);
bool proportional(const TernaryForm &a, const TernaryForm &b);

// c_i is the coefficient of s^i t^(degree - i).
struct BinaryForm {
  int degree = 0;
  std::vector<Rat> coeffs;
  bool is_zero() const;
  // Dehomogenised at t = 1.
  UniPoly affine() const { return UniPoly(coeffs); }
};

struct IntTriple {
  std::array<Int, 3> v;
  friend auto operator<=>(const IntTriple &, const IntTriple &) = default;
  friend bool operator==(const IntTriple &, const IntTriple &) = default;
};

// Primitive integer point, first nonzero coordinate positive.
struct ProjPoint {
  IntTriple c;
  static ProjPoint from(const std::array<Rat, 3> &p);
  std::array<Rat, 3> rat() const { return {Rat(c.v[0]), Rat(c.v[1]), Rat(c.v[2])}; }
  std::string to_string() const;
  friend auto operator<=>(const ProjPoint &, const ProjPoint &) = default;
  friend bool operator==(const ProjPoint &, const ProjPoint &) = default;
};

// (b0 : b1) labels the fiber b1 * P - b0 * Q.
struct P1Point {
  Int b0, b1;
  static P1Point make(const Rat &b0, const Rat &b1);
  static P1Point infinity() { return {1, 0}; }
  std::string to_string() const;
  friend bool operator==(const P1Point &a, const P1Point &b) { return a.b0 == b.b0 && a.b1 == b.b1; }
  friend bool operator<(const P1Point &a, const P1Point &b);
};

// Line u x + v y + w z = 0 with a fixed parametrisation (s : t) -> s * p + t * q.
struct ProjLine {
  IntTriple coeffs;
  IntTriple p, q;
  static ProjLine make(const Rat &u, const Rat &v, const Rat &w);
  std::array<Rat, 3> point(const Rat &s, const Rat &t) const;
};

BinaryForm restrict_to_line(const TernaryForm &f, const ProjLine &l);

// h with g * h = f, solved as a triangular coefficient-matching system.
std::optional<TernaryForm> exact_divide(const TernaryForm &f, const TernaryForm &g);
int divisibility_multiplicity(const TernaryForm &f, const TernaryForm &g);

struct PencilMembership {
  P1Point b;
  int e = 0;
};
std::optional<PencilMembership> member_of_pencil_dividing(const TernaryForm &fj, const TernaryForm &P,
                                                          const TernaryForm &Q);
TernaryForm fiber_form(const TernaryForm &P, const TernaryForm &Q, const P1Point &b);

// Linear form over Q(zeta_n), normalised so the first nonzero coefficient is 1.
struct CycloLine {
  std::array<Cyclo, 3> c;
  static CycloLine make(std::array<Cyclo, 3> coeffs);
  static CycloLine from(const TernaryForm &linear_form);
  CycloLine galois(unsigned a) const;
  bool is_rational() const;
  std::optional<TernaryForm> rational_form() const;
  std::string to_string() const;
  friend bool operator==(const CycloLine &a, const CycloLine &b);
};

using CycloPoint = std::array<Cyclo, 3>;
CycloPoint intersect(const CycloLine &a, const CycloLine &b);
bool incident(const CycloLine &l, const CycloPoint &p);
bool same_point(const CycloPoint &a, const CycloPoint &b);
std::string point_string(const CycloPoint &p);

// Product of linear forms over Q(zeta_n); must land in Q[x, y, z].
std::optional<TernaryForm> rational_product(const std::vector<std::pair<CycloLine, int>> &factors);

// Parser for signed sums of terms c*x^a*y^b*z^c; the symbol w is a primitive
// root of unity of the given order and is accepted only in linear forms.
struct ParsedForm {
  std::optional<TernaryForm> form;  // set when all coefficients are rational
  std::optional<CycloLine> line;    // set when the form is linear
};
ParsedForm parse_form(std::string_view text, unsigned root_order = 1);
TernaryForm parse_rational_form(std::string_view text);

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace pc
