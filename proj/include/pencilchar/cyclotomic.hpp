#pragma once

#include "pencilchar/exactalg.hpp"

#include <string>
#include <vector>

namespace pc {

// Element of Q(zeta_n) in the power basis 1, zeta, ..., zeta^(phi(n)-1).
// Used only for line coordinates and incidence; n = 1 is plain Q.
class Cyclo {
public:
  Cyclo() : Cyclo(1, Rat(0)) {}
  Cyclo(unsigned n, const Rat &r);
  static Cyclo zeta_power(unsigned n, long k, const Rat &scale = 1);

  unsigned order() const { return n_; }
  bool is_zero() const;
  bool is_rational() const;
  Rat rational_part() const { return c_.front(); }
  const std::vector<Rat> &coeffs() const { return c_; }

  // zeta -> zeta^a for a coprime to n.
  Cyclo galois(unsigned a) const;
  Cyclo inverse() const;

  Cyclo &operator+=(const Cyclo &o);
  Cyclo &operator-=(const Cyclo &o);
  friend Cyclo operator+(Cyclo a, const Cyclo &b) { return a += b; }
  friend Cyclo operator-(Cyclo a, const Cyclo &b) { return a -= b; }
  friend Cyclo operator*(const Cyclo &a, const Cyclo &b);
  friend Cyclo operator-(const Cyclo &a) { return Cyclo(a.n_, 0) - a; }
  friend bool operator==(const Cyclo &a, const Cyclo &b);
  std::string to_string() const;

private:
  unsigned n_;
  std::vector<Rat> c_;
  void unify(Cyclo &o);
};

std::vector<unsigned> galois_units(unsigned n);

}  // namespace pc
