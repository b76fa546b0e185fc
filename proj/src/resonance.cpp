#include "pencilchar/resonance.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace pc {

namespace {

std::string component_text(const Arrangement &arr, std::size_t j) {
  const auto &c = arr[j];
  return c.form ? c.form->to_string() : c.line->to_string();
}

std::vector<Rat> affine_part(const CupStructure &cs, const ResidueVector &v) {
  std::vector<Rat> out;
  for (std::size_t j : cs.affine) out.push_back(v.at(j));
  return out;
}

std::vector<Rat> wedge(const CupStructure &cs, const std::vector<Rat> &v, const std::vector<Rat> &w) {
  std::vector<Rat> out(cs.pairs.size());
  for (std::size_t p = 0; p < cs.pairs.size(); ++p) {
    auto [a, b] = cs.pairs[p];
    out[p] = v[a] * w[b] - v[b] * w[a];
  }
  return out;
}

bool is_zero(const std::vector<Rat> &v) {
  return std::all_of(v.begin(), v.end(), [](const Rat &x) { return x == 0; });
}

// Functionals proportional up to a nonzero scalar.
bool proportional(const std::vector<Rat> &a, const std::vector<Rat> &b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j)
      if (a[i] * b[j] != a[j] * b[i]) return false;
  return true;
}

}  // namespace

std::vector<Rat> to_rational(const std::vector<Int> &v) {
  std::vector<Rat> out;
  for (const auto &x : v) out.emplace_back(x);
  return out;
}

std::size_t CupStructure::pair_index(std::size_t a, std::size_t b) const {
  if (a > b) std::swap(a, b);
  const std::size_t n = affine.size();
  // Row-major position of (a, b) among pairs with a < b.
  return a * n - a * (a + 1) / 2 + (b - a - 1);
}

std::vector<Rat> CupStructure::reduce(std::vector<Rat> w) const {
  for (std::size_t i = 0; i < pivots.size(); ++i) {
    const Rat c = w[pivots[i]];
    if (c == 0) continue;
    for (std::size_t k = 0; k < w.size(); ++k)
      if (relations(i, k) != 0) w[k] -= c * relations(i, k);
  }
  return w;
}

CupStructure cup_structure(const Arrangement &arr) {
  if (!arr.is_line_arrangement()) throw MathError("cup product implemented for line arrangements only");
  if (!arr.infinity()) throw MathError("cup product needs a line at infinity");
  CupStructure cs;
  for (std::size_t j = 0; j < arr.size(); ++j)
    if (j != *arr.infinity()) cs.affine.push_back(j);
  const std::size_t n = cs.affine.size();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) cs.pairs.emplace_back(a, b);

  const CycloLine &inf = *arr[*arr.infinity()].line;
  std::vector<CycloPoint> seen;
  RatMatrix rel(0, cs.pairs.size());
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) {
      CycloPoint p = intersect(*arr[cs.affine[a]].line, *arr[cs.affine[b]].line);
      if (std::any_of(seen.begin(), seen.end(), [&](const CycloPoint &q) { return same_point(p, q); })) continue;
      seen.push_back(p);
      std::vector<std::size_t> through;
      for (std::size_t c = 0; c < n; ++c)
        if (incident(*arr[cs.affine[c]].line, p)) through.push_back(c);
      if (incident(inf, p)) {
        cs.parallel.push_back(through);
        for (std::size_t i = 0; i < through.size(); ++i)
          for (std::size_t j = i + 1; j < through.size(); ++j) {
            std::vector<Rat> r(cs.pairs.size());
            r[cs.pair_index(through[i], through[j])] = 1;
            rel.append_row(r);
          }
      } else if (through.size() >= 3) {
        cs.concurrent.push_back(through);
        for (std::size_t i = 0; i < through.size(); ++i)
          for (std::size_t j = i + 1; j < through.size(); ++j)
            for (std::size_t k = j + 1; k < through.size(); ++k) {
              std::vector<Rat> r(cs.pairs.size());
              r[cs.pair_index(through[i], through[j])] += 1;
              r[cs.pair_index(through[i], through[k])] -= 1;
              r[cs.pair_index(through[j], through[k])] += 1;
              rel.append_row(r);
            }
      }
    }
  cs.pivots = rel.rref();
  cs.relations = RatMatrix(0, cs.pairs.size());
  for (std::size_t i = 0; i < cs.pivots.size(); ++i) cs.relations.append_row(rel.row(i));
  return cs;
}

std::vector<Rat> cup_product(const CupStructure &cs, const ResidueVector &v, const ResidueVector &w) {
  return cs.reduce(wedge(cs, affine_part(cs, v), affine_part(cs, w)));
}

IsotropyFlags is_maximal_isotropic(const CupStructure &cs, const RatMatrix &E) {
  IsotropyFlags flags;
  flags.dimension = E.rank();
  std::vector<std::vector<Rat>> basis;
  for (std::size_t i = 0; i < E.rows(); ++i) basis.push_back(affine_part(cs, E.row(i)));

  flags.isotropic = true;
  for (std::size_t i = 0; i < basis.size() && flags.isotropic; ++i)
    for (std::size_t j = i + 1; j < basis.size(); ++j)
      if (!is_zero(cs.reduce(wedge(cs, basis[i], basis[j])))) {
        flags.isotropic = false;
        break;
      }

  // Linear map v -> (v ^ e) reduced, stacked over the rows of E; column a is its value on e_a.
  const std::size_t n = cs.affine.size();
  RatMatrix m(0, n);
  for (const auto &e : basis) {
    std::vector<std::vector<Rat>> cols;
    for (std::size_t a = 0; a < n; ++a) {
      std::vector<Rat> unit(n);
      unit[a] = 1;
      cols.push_back(cs.reduce(wedge(cs, unit, e)));
    }
    for (std::size_t p = 0; p < cs.pairs.size(); ++p) {
      std::vector<Rat> row(n);
      for (std::size_t a = 0; a < n; ++a) row[a] = cols[a][p];
      if (!is_zero(row)) m.append_row(row);
    }
  }
  flags.annihilator_dimension = n - m.rank();
  flags.maximal = flags.isotropic && flags.dimension > 0 && flags.annihilator_dimension == flags.dimension;
  return flags;
}

RatMatrix subspace_from_pencil(const Arrangement &arr, const PencilClassification &cls) {
  if (cls.B.size() < 2) throw MathError("a pencil subspace needs at least two fibers over B");
  auto sub = pullback_subtorus(arr, cls);
  RatMatrix E(0, arr.size());
  for (std::size_t i = 0; i < sub.dimension(); ++i) E.append_row(to_rational(sub.E.column(i)));
  return E;
}

ReconstructedPencil pencil_from_subspace(const Arrangement &arr, const RatMatrix &E) {
  if (E.cols() != arr.size()) throw MathError("subspace rows must have one entry per component");
  RatMatrix basis = E;
  auto piv = basis.rref();
  const std::size_t dim = piv.size();
  if (dim < 2) throw MathError("not a pencil subspace: dimension " + std::to_string(dim) + " < 2");
  auto degs = arr.degrees();
  for (std::size_t i = 0; i < dim; ++i) {
    Rat s = 0;
    for (std::size_t j = 0; j < arr.size(); ++j) s += degs[j] * basis(i, j);
    if (s != 0) throw MathError("subspace is not inside H^1: the degree sum of a row is nonzero");
  }

  // Residue functional of component j: its coordinates along the basis rows.
  struct Class {
    std::vector<Rat> direction;
    std::vector<std::pair<std::size_t, Rat>> members;  // component, ratio to the direction
  };
  std::vector<Class> classes;
  for (std::size_t j = 0; j < arr.size(); ++j) {
    std::vector<Rat> ell(dim);
    for (std::size_t i = 0; i < dim; ++i) ell[i] = basis(i, j);
    if (is_zero(ell)) continue;
    auto it = std::find_if(classes.begin(), classes.end(), [&](const Class &c) { return proportional(c.direction, ell); });
    if (it == classes.end()) {
      classes.push_back(Class{ell, {{j, Rat(1)}}});
      continue;
    }
    std::size_t i = 0;
    while (it->direction[i] == 0) ++i;
    it->members.emplace_back(j, ell[i] / it->direction[i]);
  }
  if (classes.size() < 3) throw MathError("not a pencil subspace: fewer than three fiber blocks");

  // lambda spans the relations sum_b lambda_b u_b = 0 among the block directions.
  RatMatrix dirs(0, classes.size());
  for (std::size_t i = 0; i < dim; ++i) {
    std::vector<Rat> row;
    for (const auto &c : classes) row.push_back(c.direction[i]);
    dirs.append_row(row);
  }
  auto ker = dirs.nullspace();
  if (ker.size() != 1) throw MathError("not a pencil subspace: block directions do not satisfy one relation");
  const auto &lambda = ker[0];
  if (std::any_of(lambda.begin(), lambda.end(), [](const Rat &x) { return x == 0; }))
    throw MathError("not a pencil subspace: a block direction is independent of the others");

  std::vector<std::vector<Rat>> mults;
  Int den_lcm = 1;
  for (std::size_t b = 0; b < classes.size(); ++b) {
    std::vector<Rat> m;
    for (const auto &[j, c] : classes[b].members) {
      m.push_back(c / lambda[b]);
      den_lcm = lcm(den_lcm, m.back().get_den());
    }
    mults.push_back(std::move(m));
  }
  Int g = 0;
  int sign = 0;
  for (auto &m : mults)
    for (auto &x : m) {
      x *= den_lcm;
      g = gcd(g, x.get_num());
      int sg = x > 0 ? 1 : -1;
      if (sign == 0) sign = sg;
      if (sg != sign) throw MathError("not a pencil subspace: multiplicities of mixed sign");
    }

  ReconstructedPencil out{Pencil{}, {}};
  std::vector<TernaryForm> fibers;
  for (std::size_t b = 0; b < classes.size(); ++b) {
    Block blk;
    for (std::size_t i = 0; i < classes[b].members.size(); ++i) {
      Int m = mults[b][i].get_num() / g * sign;
      if (!m.fits_sint_p()) throw MathError("multiplicity out of range");
      blk.emplace_back(classes[b].members[i].first, static_cast<int>(m.get_si()));
    }
    std::map<std::size_t, int> unit_mult;
    for (const auto &[j, m] : blk) {
      auto [it, fresh] = unit_mult.emplace(arr[j].unit, m);
      if (!fresh && it->second != m) throw MathError("not a pencil subspace: conjugate lines in different blocks");
    }
    for (const auto &[u, m] : unit_mult)
      for (std::size_t j : arr.units()[u].members)
        if (std::none_of(blk.begin(), blk.end(), [&](const auto &jm) { return jm.first == j; }))
          throw MathError("not a pencil subspace: conjugate lines in different blocks");
    out.blocks.push_back(std::move(blk));
  }
  try {
    out.pencil = pencil_from_blocks(arr, out.blocks);
  } catch (const MathError &e) {
    throw MathError(std::string("not a pencil subspace: ") + e.what());
  }
  return out;
}

RayMap ray_to_map(const Arrangement &arr, const ResidueVector &direction) {
  if (direction.size() != arr.size()) throw MathError("the direction needs one entry per component");
  if (is_zero(direction)) throw MathError("the direction is zero");
  auto degs = arr.degrees();
  Rat s = 0;
  for (std::size_t j = 0; j < arr.size(); ++j) s += degs[j] * direction[j];
  if (s != 0) throw MathError("the degree sum of the direction is " + to_string(s) + ", not 0");

  Int den = 1, g = 0;
  for (const auto &x : direction) den = lcm(den, x.get_den());
  for (const auto &x : direction) g = gcd(g, Int(x * den));
  RayMap ray;
  for (const auto &x : direction) ray.exponents.push_back(Int(x * den) / g);
  auto first = std::find_if(ray.exponents.begin(), ray.exponents.end(), [](const Int &x) { return x != 0; });
  if (*first < 0)
    for (auto &x : ray.exponents) x = -x;

  Block pos, neg;
  for (std::size_t j = 0; j < arr.size(); ++j) {
    const Int &m = ray.exponents[j];
    if (m == 0) continue;
    if (!m.fits_sint_p()) throw MathError("exponent out of range");
    (m > 0 ? pos : neg).emplace_back(j, static_cast<int>(Int(abs(m)).get_si()));
  }
  auto product = [&](const Block &blk, bool positive) {
    std::map<std::size_t, int> unit_mult;
    for (const auto &[j, m] : blk) {
      auto [it, fresh] = unit_mult.emplace(arr[j].unit, m);
      if (!fresh && it->second != m) throw MathError("conjugate components need equal exponents");
    }
    TernaryForm f = TernaryForm::constant(1);
    for (const auto &[u, m] : unit_mult) {
      for (std::size_t j : arr.units()[u].members)
        if (ray.exponents[j] == 0 || (ray.exponents[j] > 0) != positive)
          throw MathError("conjugate components need equal exponents");
      f = f * arr.units()[u].form.pow(m);
    }
    return f;
  };
  ray.numerator = product(pos, true);
  ray.denominator = product(neg, false);

  auto text = [&](const Block &blk) {
    std::string t;
    for (const auto &[j, m] : blk) {
      if (!t.empty()) t += "*";
      t += "(" + component_text(arr, j) + ")";
      if (m != 1) t += "^" + std::to_string(m);
    }
    return t;
  };
  ray.formula = text(pos) + " / " + text(neg);
  ray.connectivity_note =
      "exponents are coprime, so the generic fiber of the map is connected by Bertini's theorem";
  ray.subtorus.E = IntMatrix(arr.size(), 1);
  for (std::size_t j = 0; j < arr.size(); ++j) ray.subtorus.E(j, 0) = ray.exponents[j];
  return ray;
}

}  // namespace pc
