#include "pencilchar/cyclotomic.hpp"

#include <map>
#include <mutex>
#include <numeric>

namespace pc {

namespace {

using IntPoly = std::vector<Int>;  // lowest degree first

IntPoly divide_monic(IntPoly a, const IntPoly &b) {
  std::size_t db = b.size() - 1;
  IntPoly q(a.size() - db);
  for (std::size_t k = q.size(); k-- > 0;) {
    q[k] = a[k + db];
    for (std::size_t i = 0; i <= db; ++i) a[k + i] -= q[k] * b[i];
  }
  return q;
}

const IntPoly &cyclotomic_poly(unsigned n) {
  static std::mutex mu;
  static std::map<unsigned, IntPoly> cache;
  std::lock_guard lock(mu);
  // Divisors in increasing order, so every proper divisor is cached first.
  for (unsigned d = 1; d <= n; ++d) {
    if (n % d || cache.count(d)) continue;
    IntPoly q(d + 1);
    q[0] = -1;
    q[d] = 1;
    for (unsigned e = 1; e < d; ++e)
      if (d % e == 0) q = divide_monic(q, cache.at(e));
    cache[d] = q;
  }
  return cache.at(n);
}

// Reduce a polynomial in zeta modulo the n-th cyclotomic polynomial.
std::vector<Rat> reduce(std::vector<Rat> v, unsigned n) {
  const IntPoly &phi = cyclotomic_poly(n);
  std::size_t d = phi.size() - 1;
  for (std::size_t k = v.size(); k-- > d;) {
    if (v[k] == 0) continue;
    Rat f = v[k];
    for (std::size_t i = 0; i <= d; ++i) v[k - d + i] -= f * Rat(phi[i]);
  }
  v.resize(d);
  return v;
}

}  // namespace

std::vector<unsigned> galois_units(unsigned n) {
  std::vector<unsigned> u;
  for (unsigned a = 1; a <= std::max(n, 1u); ++a)
    if (std::gcd(a, n) == 1) u.push_back(a % std::max(n, 1u) == 0 ? 1 : a);
  return u;
}

Cyclo::Cyclo(unsigned n, const Rat &r) : n_(n == 0 ? 1 : n) {
  c_.assign(cyclotomic_poly(n_).size() - 1, Rat(0));
  c_[0] = r;
}

Cyclo Cyclo::zeta_power(unsigned n, long k, const Rat &scale) {
  Cyclo z(n, 0);
  long e = ((k % static_cast<long>(n)) + static_cast<long>(n)) % static_cast<long>(n);
  std::vector<Rat> v(static_cast<std::size_t>(e) + 1);
  v[static_cast<std::size_t>(e)] = scale;
  z.c_ = reduce(std::move(v), z.n_);
  return z;
}

bool Cyclo::is_zero() const {
  for (const auto &x : c_)
    if (x != 0) return false;
  return true;
}

bool Cyclo::is_rational() const {
  for (std::size_t i = 1; i < c_.size(); ++i)
    if (c_[i] != 0) return false;
  return true;
}

void Cyclo::unify(Cyclo &o) {
  if (n_ == o.n_) return;
  if (o.is_rational()) {
    o = Cyclo(n_, o.rational_part());
  } else if (is_rational()) {
    *this = Cyclo(o.n_, rational_part());
  } else {
    throw MathError("mixing elements of different cyclotomic fields");
  }
}

Cyclo &Cyclo::operator+=(const Cyclo &o) {
  Cyclo b = o;
  unify(b);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += b.c_[i];
  return *this;
}

Cyclo &Cyclo::operator-=(const Cyclo &o) {
  Cyclo b = o;
  unify(b);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= b.c_[i];
  return *this;
}

Cyclo operator*(const Cyclo &a0, const Cyclo &b0) {
  Cyclo a = a0, b = b0;
  a.unify(b);
  std::vector<Rat> v(a.c_.size() + b.c_.size() - 1);
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i] == 0) continue;
    for (std::size_t j = 0; j < b.c_.size(); ++j) v[i + j] += a.c_[i] * b.c_[j];
  }
  a.c_ = reduce(std::move(v), a.n_);
  return a;
}

bool operator==(const Cyclo &a, const Cyclo &b) { return (a - b).is_zero(); }

Cyclo Cyclo::galois(unsigned a) const {
  Cyclo r(n_, 0);
  for (std::size_t i = 0; i < c_.size(); ++i)
    if (c_[i] != 0) r += zeta_power(n_, static_cast<long>(i * a), c_[i]);
  return r;
}

Cyclo Cyclo::inverse() const {
  if (is_zero()) throw MathError("inverse of zero");
  const std::size_t d = c_.size();
  // Column j holds the coordinates of this * zeta^j.
  RatMatrix m(d, d);
  for (std::size_t j = 0; j < d; ++j) {
    Cyclo col = (*this) * zeta_power(n_, static_cast<long>(j));
    for (std::size_t i = 0; i < d; ++i) m(i, j) = col.c_[i];
  }
  std::vector<Rat> e(d);
  e[0] = 1;
  auto x = m.solve(e);
  if (!x) throw MathError("singular cyclotomic element");
  Cyclo r(n_, 0);
  r.c_ = *x;
  return r;
}

std::string Cyclo::to_string() const {
  std::string s;
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    Rat a = abs(c_[i]);
    if (s.empty())
      s += c_[i] < 0 ? "-" : "";
    else
      s += c_[i] < 0 ? " - " : " + ";
    if (i == 0 || a != 1) s += pc::to_string(a) + (i ? "*" : "");
    if (i) s += i == 1 ? "w" : "w^" + std::to_string(i);
  }
  return s.empty() ? "0" : s;
}

}  // namespace pc
