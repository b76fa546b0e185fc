#include "pencilchar/exactalg.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>
#include <sstream>

namespace pc {

Rat make_rat(const Int &num, const Int &den) {
  if (den == 0) throw MathError("zero denominator");
  Rat r(num, den);
  r.canonicalize();
  return r;
}

std::string to_string(const Int &v) { return v.get_str(); }

std::string to_string(const Rat &v) {
  if (v.get_den() == 1) return v.get_num().get_str();
  return v.get_num().get_str() + "/" + v.get_den().get_str();
}

Int lcm(const Int &a, const Int &b) {
  Int r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

// ---------------------------------------------------------------- IntMatrix

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols, std::vector<Int> entries)
    : rows_(rows), cols_(cols), a_(std::move(entries)) {
  if (a_.size() != rows * cols) throw MathError("IntMatrix: entry count mismatch");
}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<long>> &rows) {
  std::size_t c = rows.empty() ? 0 : rows.front().size();
  IntMatrix m(rows.size(), c);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != c) throw MathError("IntMatrix: ragged rows");
    for (std::size_t j = 0; j < c; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

std::vector<Int> IntMatrix::column(std::size_t j) const {
  std::vector<Int> c(rows_);
  for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
  return c;
}

std::vector<Int> IntMatrix::row(std::size_t i) const {
  return {a_.begin() + static_cast<long>(i * cols_), a_.begin() + static_cast<long>((i + 1) * cols_)};
}

IntMatrix IntMatrix::columns(std::size_t first, std::size_t count) const {
  IntMatrix m(rows_, count);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < count; ++j) m(i, j) = (*this)(i, first + j);
  return m;
}

void IntMatrix::append_column(std::span<const Int> c) {
  if (cols_ == 0 && rows_ == 0) rows_ = c.size();
  if (c.size() != rows_) throw MathError("append_column: length mismatch");
  std::vector<Int> b(rows_ * (cols_ + 1));
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) b[i * (cols_ + 1) + j] = (*this)(i, j);
    b[i * (cols_ + 1) + cols_] = c[i];
  }
  a_ = std::move(b);
  ++cols_;
}

bool IntMatrix::is_zero() const {
  return std::all_of(a_.begin(), a_.end(), [](const Int &x) { return x == 0; });
}

void IntMatrix::swap_rows(std::size_t i, std::size_t j) {
  if (i == j) return;
  for (std::size_t c = 0; c < cols_; ++c) std::swap((*this)(i, c), (*this)(j, c));
}

void IntMatrix::swap_cols(std::size_t i, std::size_t j) {
  if (i == j) return;
  for (std::size_t r = 0; r < rows_; ++r) std::swap((*this)(r, i), (*this)(r, j));
}

void IntMatrix::add_row(std::size_t i, std::size_t j, const Int &q) {
  if (q == 0) return;
  for (std::size_t c = 0; c < cols_; ++c) (*this)(i, c) += q * (*this)(j, c);
}

void IntMatrix::add_col(std::size_t i, std::size_t j, const Int &q) {
  if (q == 0) return;
  for (std::size_t r = 0; r < rows_; ++r) (*this)(r, i) += q * (*this)(r, j);
}

void IntMatrix::negate_row(std::size_t i) {
  for (std::size_t c = 0; c < cols_; ++c) (*this)(i, c) = -(*this)(i, c);
}

void IntMatrix::negate_col(std::size_t i) {
  for (std::size_t r = 0; r < rows_; ++r) (*this)(r, i) = -(*this)(r, i);
}

IntMatrix operator*(const IntMatrix &a, const IntMatrix &b) {
  if (a.cols() != b.rows()) throw MathError("matrix product: shape mismatch");
  IntMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (a(i, k) == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += a(i, k) * b(k, j);
    }
  return c;
}

std::vector<Int> mat_vec(const IntMatrix &a, std::span<const Int> x) {
  if (a.cols() != x.size()) throw MathError("mat_vec: shape mismatch");
  std::vector<Int> y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) y[i] += a(i, j) * x[j];
  return y;
}

Int determinant(const IntMatrix &a) {
  if (a.rows() != a.cols()) throw MathError("determinant of non-square matrix");
  std::size_t n = a.rows();
  if (n == 0) return 1;
  // Bareiss fraction-free elimination.
  IntMatrix m = a;
  Int prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && m(p, k) == 0) ++p;
      if (p == n) return 0;
      m.swap_rows(k, p);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        Int v = m(i, j) * m(k, k) - m(i, k) * m(k, j);
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
        m(i, j) = v;
      }
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

std::size_t rank(const IntMatrix &a) { return smith_normal_form(a).rank; }

// ---------------------------------------------------------------- Smith form

std::vector<Int> SmithDecomposition::invariants() const {
  std::vector<Int> v;
  for (std::size_t i = 0; i < rank; ++i) v.push_back(D(i, i));
  return v;
}

namespace {

// Position of the nonzero entry of least absolute value in D[t.., t..].
bool smallest_entry(const IntMatrix &d, std::size_t t, std::size_t &pi, std::size_t &pj) {
  bool found = false;
  Int best;
  for (std::size_t i = t; i < d.rows(); ++i)
    for (std::size_t j = t; j < d.cols(); ++j) {
      if (d(i, j) == 0) continue;
      Int v = abs(d(i, j));
      if (!found || v < best) {
        best = v;
        pi = i;
        pj = j;
        found = true;
      }
    }
  return found;
}

}  // namespace

SmithDecomposition smith_normal_form(const IntMatrix &a) {
  const std::size_t m = a.rows(), n = a.cols();
  IntMatrix d = a, u = IntMatrix::identity(m), v = IntMatrix::identity(n);
  std::size_t t = 0;
  for (; t < std::min(m, n); ++t) {
    std::size_t pi = 0, pj = 0;
    if (!smallest_entry(d, t, pi, pj)) break;
    d.swap_rows(t, pi);
    u.swap_rows(t, pi);
    d.swap_cols(t, pj);
    v.swap_cols(t, pj);
    for (;;) {
      bool clean = true;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (d(t + 0, t) == 0) break;
        Int q;
        mpz_tdiv_q(q.get_mpz_t(), d(i, t).get_mpz_t(), d(t, t).get_mpz_t());
        d.add_row(i, t, -q);
        u.add_row(i, t, -q);
        if (d(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        Int q;
        mpz_tdiv_q(q.get_mpz_t(), d(t, j).get_mpz_t(), d(t, t).get_mpz_t());
        d.add_col(j, t, -q);
        v.add_col(j, t, -q);
        if (d(t, j) != 0) clean = false;
      }
      if (!clean) {
        // A remainder smaller than the pivot survived; promote it.
        std::size_t bi = t, bj = t;
        Int best = abs(d(t, t));
        for (std::size_t i = t + 1; i < m; ++i)
          if (d(i, t) != 0 && abs(d(i, t)) < best) best = abs(d(i, t)), bi = i, bj = t;
        for (std::size_t j = t + 1; j < n; ++j)
          if (d(t, j) != 0 && abs(d(t, j)) < best) best = abs(d(t, j)), bi = t, bj = j;
        d.swap_rows(t, bi);
        u.swap_rows(t, bi);
        d.swap_cols(t, bj);
        v.swap_cols(t, bj);
        continue;
      }
      // Pivot must divide the remaining block.
      bool divides = true;
      for (std::size_t i = t + 1; i < m && divides; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (!mpz_divisible_p(d(i, j).get_mpz_t(), d(t, t).get_mpz_t())) {
            d.add_row(t, i, 1);
            u.add_row(t, i, 1);
            divides = false;
            break;
          }
      if (divides) break;
    }
    if (d(t, t) < 0) {
      d.negate_row(t);
      u.negate_row(t);
    }
  }
  return {std::move(u), std::move(d), std::move(v), t};
}

// ---------------------------------------------------------------- Hermite

IntMatrix hermite_rows(const IntMatrix &a) {
  IntMatrix h = a;
  const std::size_t m = h.rows(), n = h.cols();
  std::size_t r = 0;
  for (std::size_t c = 0; c < n && r < m; ++c) {
    for (;;) {
      // Bring the smallest nonzero entry of column c (rows >= r) to row r.
      std::size_t best = m;
      for (std::size_t i = r; i < m; ++i)
        if (h(i, c) != 0 && (best == m || abs(h(i, c)) < abs(h(best, c)))) best = i;
      if (best == m) break;
      h.swap_rows(r, best);
      bool done = true;
      for (std::size_t i = r + 1; i < m; ++i) {
        if (h(i, c) == 0) continue;
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), h(i, c).get_mpz_t(), h(r, c).get_mpz_t());
        h.add_row(i, r, -q);
        if (h(i, c) != 0) done = false;
      }
      if (done) break;
    }
    if (h(r, c) == 0) continue;
    if (h(r, c) < 0) h.negate_row(r);
    for (std::size_t i = 0; i < r; ++i) {
      Int q;
      mpz_fdiv_q(q.get_mpz_t(), h(i, c).get_mpz_t(), h(r, c).get_mpz_t());
      h.add_row(i, r, -q);
    }
    ++r;
  }
  IntMatrix out(r, n);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = h(i, j);
  return out;
}

IntMatrix integer_kernel_basis(const IntMatrix &a) {
  const std::size_t n = a.cols();
  SmithDecomposition s = smith_normal_form(a);
  IntMatrix k = s.V.columns(s.rank, n - s.rank);
  if (k.cols() == 0) return IntMatrix(n, 0);
  return hermite_rows(k.transpose()).transpose();
}

// ---------------------------------------------------------------- groups

Int FinAbelianGroup::order() const {
  Int o = 1;
  for (const auto &f : invariant_factors) o *= f;
  return o;
}

std::string FinAbelianGroup::to_string() const {
  if (invariant_factors.empty()) return "1";
  std::string s;
  for (std::size_t i = 0; i < invariant_factors.size(); ++i) {
    if (i) s += " + ";
    s += "Z/" + invariant_factors[i].get_str();
  }
  return s;
}

FinAbelianGroup FinAbelianGroup::from_diagonal(std::span<const Int> diag) {
  IntMatrix d(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) d(i, i) = diag[i];
  FinAbelianGroup g;
  for (const auto &x : smith_normal_form(d).invariants())
    if (x > 1) g.invariant_factors.push_back(x);
  return g;
}

QmodZ::QmodZ(const Rat &v) {
  Int fl;
  mpz_fdiv_q(fl.get_mpz_t(), v.get_num_mpz_t(), v.get_den_mpz_t());
  v_ = v - Rat(fl);
  v_.canonicalize();
}

QmodZ QmodZ::operator-() const { return QmodZ(-v_); }
QmodZ &QmodZ::operator+=(const QmodZ &o) { return *this = QmodZ(v_ + o.v_); }
QmodZ &QmodZ::operator-=(const QmodZ &o) { return *this = QmodZ(v_ - o.v_); }
QmodZ operator*(const Int &n, const QmodZ &q) { return QmodZ(Rat(n) * q.v_); }
std::string QmodZ::to_string() const { return pc::to_string(v_); }

// ---------------------------------------------------------------- RatMatrix

std::vector<Rat> RatMatrix::row(std::size_t i) const {
  return {a_.begin() + static_cast<long>(i * cols_), a_.begin() + static_cast<long>((i + 1) * cols_)};
}

void RatMatrix::append_row(std::span<const Rat> r) {
  if (rows_ == 0 && cols_ == 0) cols_ = r.size();
  if (r.size() != cols_) throw MathError("append_row: length mismatch");
  a_.insert(a_.end(), r.begin(), r.end());
  ++rows_;
}

std::vector<std::size_t> RatMatrix::rref() {
  std::vector<std::size_t> piv;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols_ && r < rows_; ++c) {
    std::size_t p = r;
    while (p < rows_ && (*this)(p, c) == 0) ++p;
    if (p == rows_) continue;
    if (p != r)
      for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(p, j), (*this)(r, j));
    Rat inv = 1 / (*this)(r, c);
    for (std::size_t j = c; j < cols_; ++j) (*this)(r, j) *= inv;
    for (std::size_t i = 0; i < rows_; ++i) {
      if (i == r || (*this)(i, c) == 0) continue;
      Rat f = (*this)(i, c);
      for (std::size_t j = c; j < cols_; ++j) (*this)(i, j) -= f * (*this)(r, j);
    }
    piv.push_back(c);
    ++r;
  }
  return piv;
}

std::size_t RatMatrix::rank() const {
  RatMatrix m = *this;
  return m.rref().size();
}

std::vector<std::vector<Rat>> RatMatrix::nullspace() const {
  RatMatrix m = *this;
  auto piv = m.rref();
  std::vector<bool> is_piv(cols_, false);
  for (auto p : piv) is_piv[p] = true;
  std::vector<std::vector<Rat>> basis;
  for (std::size_t f = 0; f < cols_; ++f) {
    if (is_piv[f]) continue;
    std::vector<Rat> v(cols_);
    v[f] = 1;
    for (std::size_t i = 0; i < piv.size(); ++i) v[piv[i]] = -m(i, f);
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<std::vector<Rat>> RatMatrix::solve(std::span<const Rat> b) const {
  if (b.size() != rows_) throw MathError("solve: length mismatch");
  RatMatrix aug(rows_, cols_ + 1);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) aug(i, j) = (*this)(i, j);
    aug(i, cols_) = b[i];
  }
  auto piv = aug.rref();
  if (!piv.empty() && piv.back() == cols_) return std::nullopt;
  std::vector<Rat> x(cols_);
  for (std::size_t i = 0; i < piv.size(); ++i) x[piv[i]] = aug(i, cols_);
  return x;
}

// ---------------------------------------------------------------- UniPoly

UniPoly::UniPoly(std::vector<Rat> coeffs) : c_(std::move(coeffs)) { trim(); }

UniPoly UniPoly::monomial(const Rat &c, std::size_t deg) {
  std::vector<Rat> v(deg + 1);
  v[deg] = c;
  return UniPoly(std::move(v));
}

UniPoly UniPoly::from_ints(const std::vector<long> &coeffs) {
  std::vector<Rat> v;
  for (long c : coeffs) v.emplace_back(c);
  return UniPoly(std::move(v));
}

void UniPoly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

const Rat &UniPoly::lead() const {
  if (c_.empty()) throw MathError("leading coefficient of zero polynomial");
  return c_.back();
}

Rat UniPoly::eval(const Rat &x) const {
  Rat acc = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

UniPoly UniPoly::derivative() const {
  if (c_.size() <= 1) return {};
  std::vector<Rat> d(c_.size() - 1);
  for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * static_cast<long>(i);
  return UniPoly(std::move(d));
}

UniPoly UniPoly::monic() const {
  if (is_zero()) return {};
  return (1 / lead()) * (*this);
}

std::vector<Int> UniPoly::primitive_integer() const {
  if (is_zero()) return {};
  Int den = 1;
  for (const auto &c : c_) den = lcm(den, c.get_den());
  std::vector<Int> v;
  Int g = 0;
  for (const auto &c : c_) {
    Int x = c.get_num() * (den / c.get_den());
    g = gcd(g, x);
    v.push_back(x);
  }
  if (v.back() < 0) g = -g;
  for (auto &x : v) x /= g;
  return v;
}

UniPoly operator+(const UniPoly &a, const UniPoly &b) {
  std::vector<Rat> c(std::max(a.c_.size(), b.c_.size()));
  for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
  for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] += b.c_[i];
  return UniPoly(std::move(c));
}

UniPoly operator-(const UniPoly &a, const UniPoly &b) { return a + Rat(-1) * b; }

UniPoly operator*(const UniPoly &a, const UniPoly &b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Rat> c(a.c_.size() + b.c_.size() - 1);
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i] == 0) continue;
    for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
  }
  return UniPoly(std::move(c));
}

UniPoly operator*(const Rat &s, const UniPoly &a) {
  std::vector<Rat> c = a.c_;
  for (auto &x : c) x *= s;
  return UniPoly(std::move(c));
}

std::string UniPoly::to_string(char var) const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t k = c_.size(); k-- > 0;) {
    const Rat &c = c_[k];
    if (c == 0) continue;
    Rat a = abs(c);
    os << (c < 0 ? (first ? "-" : " - ") : (first ? "" : " + "));
    if (a != 1 || k == 0) os << pc::to_string(a) << (k ? "*" : "");
    if (k) os << var << (k > 1 ? "^" + std::to_string(k) : "");
    first = false;
  }
  return os.str();
}

std::pair<UniPoly, UniPoly> divmod(const UniPoly &a, const UniPoly &b) {
  if (b.is_zero()) throw MathError("division by zero polynomial");
  std::vector<Rat> r = a.coeffs();
  int db = b.degree();
  if (a.degree() < db) return {UniPoly(), a};
  std::vector<Rat> q(static_cast<std::size_t>(a.degree() - db + 1));
  Rat inv = 1 / b.lead();
  for (int k = a.degree() - db; k >= 0; --k) {
    Rat f = r[static_cast<std::size_t>(k + db)] * inv;
    q[static_cast<std::size_t>(k)] = f;
    if (f == 0) continue;
    for (int i = 0; i <= db; ++i) r[static_cast<std::size_t>(k + i)] -= f * b.coeff(static_cast<std::size_t>(i));
  }
  return {UniPoly(std::move(q)), UniPoly(std::move(r))};
}

std::optional<UniPoly> exact_quotient(const UniPoly &a, const UniPoly &b) {
  auto [q, r] = divmod(a, b);
  if (!r.is_zero()) return std::nullopt;
  return q;
}

UniPoly gcd(const UniPoly &a, const UniPoly &b) {
  UniPoly x = a, y = b;
  while (!y.is_zero()) {
    UniPoly r = divmod(x, y).second;
    x = std::move(y);
    y = r.monic();
  }
  return x.monic();
}

Rat resultant(const UniPoly &a, const UniPoly &b) {
  if (a.is_zero() || b.is_zero()) return 0;
  UniPoly x = a, y = b;
  Rat acc = 1;
  for (;;) {
    int dx = x.degree(), dy = y.degree();
    if (dx == 0) {
      Rat p = 1;
      for (int i = 0; i < dy; ++i) p *= x.lead();
      return acc * p;
    }
    if (dy == 0) {
      Rat p = 1;
      for (int i = 0; i < dx; ++i) p *= y.lead();
      return acc * p;
    }
    UniPoly r = divmod(x, y).second;
    if (r.is_zero()) return 0;
    if ((dx * dy) % 2) acc = -acc;
    for (int i = 0; i < dx - r.degree(); ++i) acc *= y.lead();
    x = std::move(y);
    y = std::move(r);
  }
}

UniPoly interpolate(std::span<const Rat> xs, std::span<const Rat> ys) {
  const std::size_t n = xs.size();
  if (ys.size() != n) throw MathError("interpolate: length mismatch");
  std::vector<Rat> dd(ys.begin(), ys.end());
  for (std::size_t k = 1; k < n; ++k)
    for (std::size_t i = n - 1; i >= k; --i) {
      dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - k]);
      if (i == k) break;
    }
  UniPoly p;
  for (std::size_t k = n; k-- > 0;) p = p * UniPoly({-xs[k], Rat(1)}) + UniPoly({dd[k]});
  return p;
}

std::vector<SquarefreePart> squarefree_decomposition(const UniPoly &f) {
  if (f.is_zero()) throw MathError("squarefree decomposition of zero polynomial");
  std::vector<SquarefreePart> out;
  if (f.degree() == 0) return out;
  // Yun's algorithm.
  UniPoly fm = f.monic();
  UniPoly fp = fm.derivative();
  UniPoly a = gcd(fm, fp);
  UniPoly b = *exact_quotient(fm, a);
  UniPoly c = *exact_quotient(fp, a);
  UniPoly d = c - b.derivative();
  for (int i = 1; b.degree() > 0; ++i) {
    UniPoly g = gcd(b, d);
    if (g.degree() > 0) out.push_back({i, g});
    b = *exact_quotient(b, g);
    c = *exact_quotient(d, g);
    d = c - b.derivative();
  }
  return out;
}

std::vector<ProfileEntry> squarefree_multiplicity_profile(const UniPoly &f) {
  std::vector<ProfileEntry> p;
  for (const auto &part : squarefree_decomposition(f)) p.push_back({part.multiplicity, part.factor.degree()});
  std::sort(p.begin(), p.end(), [](const ProfileEntry &x, const ProfileEntry &y) {
    return x.multiplicity != y.multiplicity ? x.multiplicity > y.multiplicity : x.degree > y.degree;
  });
  return p;
}

namespace {

bool is_prime(unsigned long p) {
  if (p < 2) return false;
  for (unsigned long d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

unsigned long mod_ui(const Int &x, unsigned long p) { return mpz_fdiv_ui(x.get_mpz_t(), p); }

unsigned long eval_mod(const std::vector<Int> &c, unsigned long x, unsigned long p) {
  unsigned long acc = 0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = (acc * x + mod_ui(*it, p)) % p;
  return acc;
}

// True when the reduction mod p keeps its degree and stays squarefree.
bool good_prime(const std::vector<Int> &c, unsigned long p) {
  if (mod_ui(c.back(), p) == 0) return false;
  auto reduce = [p](const std::vector<Int> &v) {
    std::vector<unsigned long> r;
    for (const auto &x : v) r.push_back(mod_ui(x, p));
    while (!r.empty() && r.back() == 0) r.pop_back();
    return r;
  };
  auto inv = [p](unsigned long a) {
    Int r, m = p, x = a;
    mpz_invert(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
    return r.get_ui();
  };
  std::vector<unsigned long> a = reduce(c), b;
  for (std::size_t i = 1; i < c.size(); ++i) b.push_back(static_cast<unsigned long>((mod_ui(c[i], p) * (i % p)) % p));
  while (!b.empty() && b.back() == 0) b.pop_back();
  while (!b.empty()) {
    // a mod b
    unsigned long ib = inv(b.back());
    while (a.size() >= b.size() && !a.empty()) {
      unsigned long f = a.back() * ib % p;
      std::size_t sh = a.size() - b.size();
      for (std::size_t i = 0; i < b.size(); ++i) a[sh + i] = (a[sh + i] + p - f * b[i] % p) % p;
      while (!a.empty() && a.back() == 0) a.pop_back();
    }
    std::swap(a, b);
  }
  return a.size() == 1;
}

// Rational reconstruction of r mod n with |num| <= bound_n, 0 < den <= bound_d.
std::optional<Rat> reconstruct(const Int &r, const Int &n, const Int &bound_n, const Int &bound_d) {
  Int r0 = n, r1 = r, t0 = 0, t1 = 1;
  while (r1 > bound_n) {
    Int q = r0 / r1;
    Int r2 = r0 - q * r1, t2 = t0 - q * t1;
    r0 = r1, r1 = r2, t0 = t1, t1 = t2;
  }
  if (t1 == 0 || abs(t1) > bound_d) return std::nullopt;
  return make_rat(t1 < 0 ? Int(-r1) : r1, abs(t1));
}

}  // namespace

RationalRoots rational_roots(const UniPoly &f) {
  if (f.is_zero()) throw MathError("rational roots of zero polynomial");
  RationalRoots out;
  UniPoly g = f;
  // Strip the root at zero first.
  std::size_t z = 0;
  while (z < g.coeffs().size() && g.coeffs()[z] == 0) ++z;
  std::vector<Rat> found;
  if (z > 0) {
    found.push_back(0);
    g = UniPoly(std::vector<Rat>(g.coeffs().begin() + static_cast<long>(z), g.coeffs().end()));
  }
  UniPoly sq;  // squarefree part
  if (g.degree() > 0) {
    sq = UniPoly({Rat(1)});
    for (const auto &part : squarefree_decomposition(g)) sq = sq * part.factor;
  }
  std::size_t sq_roots = 0;
  if (sq.degree() > 0) {
    std::vector<Int> c = sq.primitive_integer();
    const Int bound_n = abs(c.front()), bound_d = abs(c.back());
    const Int target = 2 * bound_n * bound_d + 1;
    unsigned long p = 1009;
    while (!is_prime(p) || !good_prime(c, p)) ++p;
    std::vector<Int> cand;
    for (unsigned long x = 0; x < p; ++x)
      if (eval_mod(c, x, p) == 0) cand.emplace_back(x);
    std::vector<Int> dc;
    for (std::size_t i = 1; i < c.size(); ++i) dc.push_back(c[i] * static_cast<long>(i));
    for (Int r : cand) {
      Int mod = p;
      while (mod <= target) {
        Int next = mod * mod;
        Int fv = 0, dv = 0;
        for (auto it = c.rbegin(); it != c.rend(); ++it) fv = (fv * r + *it) % next;
        for (auto it = dc.rbegin(); it != dc.rend(); ++it) dv = (dv * r + *it) % next;
        Int inv;
        mpz_invert(inv.get_mpz_t(), dv.get_mpz_t(), next.get_mpz_t());
        r = r - fv * inv;
        mpz_mod(r.get_mpz_t(), r.get_mpz_t(), next.get_mpz_t());
        mod = next;
      }
      auto q = reconstruct(r, mod, bound_n, bound_d);
      if (q && sq.eval(*q) == 0) {
        found.push_back(*q);
        ++sq_roots;
      }
    }
    out.nonrational_remain = static_cast<int>(sq_roots) < sq.degree();
  }
  std::sort(found.begin(), found.end());
  found.erase(std::unique(found.begin(), found.end()), found.end());
  for (const auto &r : found) {
    int m = 0;
    UniPoly h = f;
    UniPoly lin({-r, Rat(1)});
    while (auto q = exact_quotient(h, lin)) {
      h = *q;
      ++m;
    }
    out.roots.emplace_back(r, m);
  }
  return out;
}

}  // namespace pc
