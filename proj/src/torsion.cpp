#include "pencilchar/torsion.hpp"

#include <algorithm>
#include <numeric>

namespace pc {

namespace {

Int mod_positive(const Int &a, const Int &m) {
  if (m == 1) return 0;
  Int r = a % m;
  if (r < 0) r += m;
  return r;
}

// Solves the lower triangular system h y = x over the integers.
std::vector<Int> lower_solve(const IntMatrix &h, std::span<const Int> x) {
  const std::size_t n = h.rows();
  std::vector<Int> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    Int s = x[i];
    for (std::size_t j = 0; j < i; ++j) s -= h(i, j) * y[j];
    if (!mpz_divisible_p(s.get_mpz_t(), h(i, i).get_mpz_t()))
      throw MathError("element outside the lattice of im theta");
    y[i] = s / h(i, i);
  }
  return y;
}

std::vector<Int> unimodular_solve(const IntMatrix &u, std::span<const Int> b) {
  RatMatrix m(0, u.cols());
  for (std::size_t i = 0; i < u.rows(); ++i) {
    std::vector<Rat> r;
    for (std::size_t j = 0; j < u.cols(); ++j) r.emplace_back(u(i, j));
    m.append_row(r);
  }
  std::vector<Rat> rhs(b.begin(), b.end());
  auto x = m.solve(rhs);
  if (!x) throw MathError("singular unimodular matrix");
  std::vector<Int> out;
  for (const auto &v : *x) {
    if (v.get_den() != 1) throw MathError("non-integral inverse of a unimodular matrix");
    out.push_back(v.get_num());
  }
  return out;
}

void require_setup(const Arrangement &arr, const PencilClassification &cls) {
  if (!arr.infinity()) throw MathError("torsion computations need a line at infinity");
  if (cls.B.size() < 2) throw MathError("torsion computations need at least two fibers over B");
}

std::vector<std::size_t> affine_components(const Arrangement &arr) {
  std::vector<std::size_t> a;
  for (std::size_t j = 0; j < arr.size(); ++j)
    if (j != *arr.infinity()) a.push_back(j);
  return a;
}

// Position of component j among the affine coordinates.
std::optional<std::size_t> affine_position(const std::vector<std::size_t> &affine, std::size_t j) {
  auto it = std::find(affine.begin(), affine.end(), j);
  if (it == affine.end()) return std::nullopt;
  return static_cast<std::size_t>(it - affine.begin());
}

std::string mobius_text(const P1Point &ref) {
  if (ref == P1Point::infinity()) return "identity: " + ref.to_string() + " is already at infinity";
  Rat s = ref.b0 / ref.b1;
  return ref.to_string() + " moved to infinity by s -> 1/(s - " + to_string(s) + "), s = b0/b1";
}

}  // namespace

std::vector<Int> ThetaData::theta_of(std::span<const Int> alpha) const {
  std::vector<Int> v = mat_vec(theta_rows, alpha);
  for (std::size_t c = 0; c < v.size(); ++c) v[c] = mod_positive(v[c], moduli[c]);
  return v;
}

namespace {

// Rows express f_*(alpha) = 0: one per B point other than the reference.
IntMatrix relation_rows(const Arrangement &arr, const PencilClassification &cls) {
  auto affine = affine_components(arr);
  const FiberDivisor &ref = cls.B.back();
  IntMatrix rel(cls.B.size() - 1, affine.size());
  for (std::size_t i = 0; i + 1 < cls.B.size(); ++i) {
    for (const auto &[j, m] : cls.B[i].members)
      if (auto a = affine_position(affine, j)) rel(i, *a) += m;
    for (const auto &[j, m] : ref.members)
      if (auto a = affine_position(affine, j)) rel(i, *a) -= m;
  }
  return rel;
}

}  // namespace

IntMatrix kernel_fstar(const Arrangement &arr, const PencilClassification &cls) {
  require_setup(arr, cls);
  return integer_kernel_basis(relation_rows(arr, cls));
}

ThetaData theta(const Arrangement &arr, const PencilClassification &cls) {
  require_setup(arr, cls);
  if (!cls.special_fibers_detected) throw MathError("special fibers have not been detected");
  ThetaData d;
  d.affine = affine_components(arr);
  d.reference = cls.B.back().b;
  d.mobius = mobius_text(d.reference);
  d.relations = relation_rows(arr, cls);
  d.kernel = integer_kernel_basis(d.relations);
  d.conditional = cls.conditional;

  d.theta_rows = IntMatrix(cls.special.size(), d.affine.size());
  for (std::size_t c = 0; c < cls.special.size(); ++c) {
    const auto &s = cls.special[c];
    if (s.m_double_prime < 1) throw MathError("special fiber without a new component at " + s.c.to_string());
    d.special_points.push_back(s.c);
    d.moduli.push_back(s.m_double_prime);
    for (const auto &[j, m] : cls.B.back().members)
      if (auto a = affine_position(d.affine, j)) d.theta_rows(c, *a) += m;
    for (const auto &[j, m] : s.arrangement_part)
      if (auto a = affine_position(d.affine, j)) d.theta_rows(c, *a) -= m;
  }
  d.theta = IntMatrix(cls.special.size(), d.kernel.cols());
  for (std::size_t l = 0; l < d.kernel.cols(); ++l) {
    auto v = d.theta_of(d.kernel.column(l));
    for (std::size_t c = 0; c < v.size(); ++c) d.theta(c, l) = v[c];
  }
  return d;
}

TfGroup compute_Tf(const ThetaData &data) {
  TfGroup tf;
  tf.conditional = data.conditional;
  const std::size_t C = data.moduli.size();
  if (C == 0) return tf;

  IntMatrix L = data.theta;
  for (std::size_t c = 0; c < C; ++c) {
    std::vector<Int> col(C, Int(0));
    col[c] = data.moduli[c];
    L.append_column(col);
  }
  tf.hermite = hermite_rows(L.transpose()).transpose();
  if (tf.hermite.cols() != C) throw MathError("im theta lattice is not of full rank");

  IntMatrix N(C, C);
  for (std::size_t c = 0; c < C; ++c) {
    std::vector<Int> col(C, Int(0));
    col[c] = data.moduli[c];
    auto y = lower_solve(tf.hermite, col);
    for (std::size_t i = 0; i < C; ++i) N(i, c) = y[i];
  }
  auto snf = smith_normal_form(N);
  tf.smith_U = snf.U;
  for (std::size_t i = 0; i < C; ++i) tf.all_invariants.push_back(snf.D(i, i));
  tf.group = FinAbelianGroup::from_diagonal(tf.all_invariants);

  for (std::size_t i = 0; i < C; ++i) {
    if (tf.all_invariants[i] <= 1) continue;
    std::vector<Int> e(C, Int(0));
    e[i] = 1;
    auto y = unimodular_solve(snf.U, e);
    auto g = mat_vec(tf.hermite, y);
    for (std::size_t c = 0; c < C; ++c) g[c] = mod_positive(g[c], data.moduli[c]);
    tf.orders.push_back(tf.all_invariants[i]);
    tf.generators.push_back(std::move(g));
  }
  return tf;
}

std::vector<Int> TfGroup::coordinates(std::span<const Int> x) const {
  std::vector<Int> out;
  if (all_invariants.empty()) return out;
  auto y = lower_solve(hermite, x);
  auto z = mat_vec(smith_U, y);
  for (std::size_t i = 0; i < z.size(); ++i)
    if (all_invariants[i] > 1) out.push_back(mod_positive(z[i], all_invariants[i]));
  return out;
}

bool reduced_fast_path_applies(const PencilClassification &cls) {
  for (const auto &s : cls.special) {
    for (const auto &[j, m] : s.arrangement_part)
      if (m != 1) return false;
    for (const auto &e : s.new_part)
      if (e.multiplicity != 1) return false;
  }
  return true;
}

Int fiber_multiplicity_lcm(const Arrangement &arr, const PencilClassification &cls) {
  Int mf = 1;
  for (const auto &f : cls.B) {
    Int g = 0;
    for (const auto &[j, m] : f.members)
      if (!arr.infinity() || j != *arr.infinity()) g = gcd(g, Int(m));
    mf = g == 0 ? Int(0) : lcm(mf, g);
    if (mf == 0) break;
  }
  return mf;
}

FinAbelianGroup minimal_fast_path(const Arrangement &arr, const PencilClassification &cls, const ThetaData &data) {
  if (!cls.minimal) throw MathError("the cyclic description needs every component in a fiber over B");
  Int mf = fiber_multiplicity_lcm(arr, cls);
  Int order = 1;
  for (const auto &m : data.moduli) order = lcm(order, m / gcd(m, mf));
  std::vector<Int> d{order};
  return FinAbelianGroup::from_diagonal(d);
}

std::vector<TfCharacter> characters_of_Tf(const TfGroup &tf) {
  std::vector<TfCharacter> out;
  const std::size_t n = tf.orders.size();
  std::vector<Int> k(n, Int(0));
  for (;;) {
    TfCharacter chi;
    for (std::size_t i = 0; i < n; ++i) chi.push_back(QmodZ(make_rat(k[i], tf.orders[i])));
    out.push_back(std::move(chi));
    std::size_t i = n;
    while (i > 0 && ++k[i - 1] == tf.orders[i - 1]) k[--i] = 0;
    if (i == 0) return out;
  }
}

bool is_trivial(const TfCharacter &chi) {
  return std::all_of(chi.begin(), chi.end(), [](const QmodZ &q) { return q.is_zero(); });
}

QmodZ evaluate(const TfGroup &tf, const TfCharacter &chi, std::span<const Int> x) {
  QmodZ s;
  if (chi.empty()) return s;
  auto z = tf.coordinates(x);
  for (std::size_t i = 0; i < z.size(); ++i) s += z[i] * chi[i];
  return s;
}

LiftedCharacter lift_character(const Arrangement &arr, const PencilClassification &cls, const ThetaData &data,
                               const TfGroup &tf, const TfCharacter &chi) {
  if (chi.size() != tf.orders.size()) throw MathError("character does not match the group");
  for (std::size_t i = 0; i < chi.size(); ++i)
    if (!(tf.orders[i] * chi[i]).is_zero()) throw MathError("character value of wrong order");

  const std::size_t n = data.affine.size(), s = data.kernel.cols();
  std::vector<QmodZ> psi(s);
  for (std::size_t l = 0; l < s; ++l) {
    std::vector<Int> col(data.theta.rows());
    for (std::size_t c = 0; c < col.size(); ++c) col[c] = data.theta(c, l);
    psi[l] = evaluate(tf, chi, col);
  }

  // U K V = [I; 0] for the saturated kernel lattice.
  auto snf = smith_normal_form(data.kernel);
  for (std::size_t i = 0; i < s; ++i)
    if (snf.D(i, i) != 1) throw MathError("kernel basis is not saturated");
  std::vector<QmodZ> rho_prime(n);
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t l = 0; l < s; ++l) rho_prime[i] += snf.V(l, i) * psi[l];
  std::vector<QmodZ> rho_aff(n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < s; ++i) rho_aff[j] += snf.U(i, j) * rho_prime[i];

  for (std::size_t l = 0; l < s; ++l) {
    QmodZ v;
    for (std::size_t j = 0; j < n; ++j) v += data.kernel(j, l) * rho_aff[j];
    if (!(v == psi[l])) throw MathError("lifted character disagrees with theta on the kernel");
  }

  TorsionCharacter rho;
  rho.exponents.assign(arr.size(), QmodZ());
  QmodZ at_infinity;
  auto degs = arr.degrees();
  for (std::size_t a = 0; a < n; ++a) {
    rho.exponents[data.affine[a]] = rho_aff[a];
    at_infinity -= Int(degs[data.affine[a]]) * rho_aff[a];
  }
  rho.exponents[*arr.infinity()] = at_infinity;
  return LiftedCharacter{canonical_representative(rho, pullback_subtorus(arr, cls)), chi};
}

TorsionCharacter canonical_representative(const TorsionCharacter &rho, const ExponentSubtorus &sub) {
  TorsionCharacter out = rho;
  if (sub.dimension() == 0) return out;
  IntMatrix h = sub.lattice_key();
  for (std::size_t i = 0; i < h.rows(); ++i) {
    std::size_t p = 0;
    while (p < h.cols() && h(i, p) == 0) ++p;
    if (p == h.cols()) continue;
    Rat t = -out.exponents[p].value() / Rat(h(i, p));
    for (std::size_t j = 0; j < h.cols(); ++j)
      if (h(i, j) != 0) out.exponents[j] += QmodZ(t * Rat(h(i, j)));
  }
  return out;
}

TorsionCharacter representative_with(const TorsionCharacter &rho, const ExponentSubtorus &sub,
                                     const std::vector<std::pair<std::size_t, QmodZ>> &targets) {
  const std::size_t d = sub.dimension(), J = targets.size();
  IntMatrix EJ(J, d);
  std::vector<Rat> rhs(J);
  for (std::size_t r = 0; r < J; ++r) {
    const auto &[pos, val] = targets[r];
    if (pos >= rho.exponents.size()) throw MathError("target position out of range");
    for (std::size_t i = 0; i < d; ++i) EJ(r, i) = sub.E(pos, i);
    rhs[r] = val.value() - rho.exponents[pos].value();
  }

  // Integer shifts n with rhs + n in the column span of EJ.
  std::vector<Rat> shifted = rhs;
  IntMatrix W = integer_kernel_basis(EJ.transpose()).transpose();
  if (W.rows() > 0) {
    std::vector<Int> target(W.rows());
    for (std::size_t i = 0; i < W.rows(); ++i) {
      Rat s = 0;
      for (std::size_t r = 0; r < J; ++r) s += Rat(W(i, r)) * rhs[r];
      if (s.get_den() != 1) throw MathError("no member of the coset takes the requested values");
      target[i] = -s.get_num();
    }
    auto snf = smith_normal_form(W);
    auto c = mat_vec(snf.U, target);
    std::vector<Int> y(J, Int(0));
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (i >= snf.rank) {
        if (c[i] != 0) throw MathError("no member of the coset takes the requested values");
        continue;
      }
      if (!mpz_divisible_p(c[i].get_mpz_t(), snf.D(i, i).get_mpz_t()))
        throw MathError("no member of the coset takes the requested values");
      y[i] = c[i] / snf.D(i, i);
    }
    auto n = mat_vec(snf.V, y);
    for (std::size_t r = 0; r < J; ++r) shifted[r] += Rat(n[r]);
  }

  RatMatrix m(0, d);
  for (std::size_t r = 0; r < J; ++r) {
    std::vector<Rat> row;
    for (std::size_t i = 0; i < d; ++i) row.emplace_back(EJ(r, i));
    m.append_row(row);
  }
  auto t = m.solve(shifted);
  if (!t) throw MathError("no member of the coset takes the requested values");

  TorsionCharacter out = rho;
  for (std::size_t j = 0; j < out.exponents.size(); ++j) {
    Rat s = 0;
    for (std::size_t i = 0; i < d; ++i) s += Rat(sub.E(j, i)) * (*t)[i];
    out.exponents[j] += QmodZ(s);
  }
  for (const auto &[pos, val] : targets)
    if (!(out.exponents[pos] == val)) throw MathError("coset normalization failed");
  return out;
}

int epsilon(const PencilClassification &cls, const TorsionCharacter &rho) {
  int e = 0;
  for (const auto &s : cls.special)
    if (std::any_of(s.arrangement_part.begin(), s.arrangement_part.end(),
                    [&](const auto &jm) { return !rho.exponents[jm.first].is_zero(); }))
      ++e;
  return e;
}

}  // namespace pc
