#include "pencilchar/arrangement.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace pc {

namespace {

// Small integer points on f, used to look for lines through two of them.
std::vector<std::array<Rat, 3>> small_points(const TernaryForm &f, int bound, std::size_t want) {
  std::vector<std::array<Rat, 3>> pts;
  for (int x = -bound; x <= bound && pts.size() < want; ++x)
    for (int y = -bound; y <= bound && pts.size() < want; ++y)
      for (int z = -bound; z <= bound && pts.size() < want; ++z) {
        if (x == 0 && y == 0 && z == 0) continue;
        if (std::gcd(std::gcd(x, y), z) != 1) continue;
        // One representative per projective point.
        int first = x != 0 ? x : y != 0 ? y : z;
        if (first < 0) continue;
        std::array<Rat, 3> p{Rat(x), Rat(y), Rat(z)};
        if (f.eval(p) == 0) pts.push_back(p);
      }
  return pts;
}

std::optional<TernaryForm> linear_factor(const TernaryForm &f) {
  auto pts = small_points(f, 4, 24);
  for (std::size_t a = 0; a < pts.size(); ++a)
    for (std::size_t b = a + 1; b < pts.size(); ++b) {
      const auto &p = pts[a], &q = pts[b];
      TernaryForm l = TernaryForm::linear(p[1] * q[2] - p[2] * q[1], p[2] * q[0] - p[0] * q[2],
                                          p[0] * q[1] - p[1] * q[0]);
      if (l.is_zero()) continue;
      if (exact_divide(f, l)) return l.primitive();
    }
  return std::nullopt;
}

}  // namespace

Arrangement Arrangement::build(const std::vector<ComponentInput> &inputs, unsigned root_order,
                               const std::optional<std::string> &infinity) {
  if (inputs.empty()) throw InvariantError("arrangement has no components");
  Arrangement arr;
  arr.root_order_ = std::max(root_order, 1u);
  for (const auto &in : inputs) {
    if (arr.index_of(in.label)) throw InvariantError("duplicate label '" + in.label + "'");
    ParsedForm parsed = parse_form(in.poly, arr.root_order_);
    CurveComponent c;
    c.label = in.label;
    if (parsed.form) {
      c.form = parsed.form->primitive();
      c.degree = c.form->degree();
    }
    if (parsed.line) {
      c.line = *parsed.line;
      c.degree = 1;
    }
    if (c.degree < 1) throw InvariantError("component '" + in.label + "' is constant");
    arr.components_.push_back(std::move(c));
  }

  const std::size_t r = arr.components_.size();
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = i + 1; j < r; ++j) {
      const auto &a = arr.components_[i], &b = arr.components_[j];
      bool same = a.line && b.line ? *a.line == *b.line
                                   : a.form && b.form && a.degree == b.degree && proportional(*a.form, *b.form);
      if (same) throw InvariantError("components '" + a.label + "' and '" + b.label + "' coincide");
    }

  // Galois orbits of lines with irrational coefficients.
  std::vector<bool> placed(r, false);
  for (std::size_t j = 0; j < r; ++j) {
    if (placed[j]) continue;
    auto &c = arr.components_[j];
    RationalUnit unit;
    if (c.form) {
      unit.members = {j};
      unit.form = *c.form;
    } else {
      std::vector<std::pair<CycloLine, int>> factors;
      for (unsigned a : galois_units(arr.root_order_)) {
        CycloLine conj = c.line->galois(a);
        auto it = std::find_if(factors.begin(), factors.end(), [&](const auto &f) { return f.first == conj; });
        if (it != factors.end()) continue;
        factors.emplace_back(conj, 1);
        std::optional<std::size_t> idx;
        for (std::size_t k = 0; k < r; ++k)
          if (arr.components_[k].line && *arr.components_[k].line == conj) idx = k;
        if (!idx)
          throw InvariantError("the conjugate " + conj.to_string() + " of component '" + c.label +
                               "' is missing; the arrangement must be defined over the rationals");
        unit.members.push_back(*idx);
      }
      auto prod = rational_product(factors);
      if (!prod) throw InvariantError("Galois orbit of '" + c.label + "' has an irrational product");
      std::sort(unit.members.begin(), unit.members.end());
      unit.form = *prod;
    }
    for (std::size_t m : unit.members) {
      placed[m] = true;
      arr.components_[m].unit = arr.units_.size();
    }
    arr.units_.push_back(std::move(unit));
  }

  for (const auto &c : arr.components_) {
    if (!c.form || c.degree < 2) continue;
    if (auto l = linear_factor(*c.form))
      arr.warnings_.push_back("component '" + c.label + "' has the linear factor " + l->to_string() +
                              " and is not irreducible");
  }

  if (infinity) {
    auto idx = arr.index_of(*infinity);
    if (!idx) throw InvariantError("infinity label '" + *infinity + "' is not a component");
    const auto &c = arr.components_[*idx];
    if (c.degree != 1 || !c.form) throw InvariantError("the line at infinity must be a line with rational coefficients");
    arr.infinity_ = idx;
  }
  return arr;
}

std::vector<int> Arrangement::degrees() const {
  std::vector<int> d;
  for (const auto &c : components_) d.push_back(c.degree);
  return d;
}

int Arrangement::total_degree() const {
  int s = 0;
  for (const auto &c : components_) s += c.degree;
  return s;
}

bool Arrangement::is_line_arrangement() const {
  return std::all_of(components_.begin(), components_.end(), [](const auto &c) { return c.degree == 1; });
}

bool Arrangement::designate_infinity() {
  if (infinity_) return true;
  for (std::size_t j = 0; j < components_.size(); ++j)
    if (components_[j].degree == 1 && components_[j].form) {
      infinity_ = j;
      return true;
    }
  return false;
}

std::optional<std::size_t> Arrangement::index_of(const std::string &label) const {
  for (std::size_t j = 0; j < components_.size(); ++j)
    if (components_[j].label == label) return j;
  return std::nullopt;
}

H1Model h1_model(const Arrangement &arr) {
  H1Model h;
  h.relation = arr.degrees();
  h.torsion_order = 0;
  for (int d : h.relation) h.torsion_order = gcd(h.torsion_order, Int(d));
  if (auto inf = arr.infinity()) {
    for (std::size_t j = 0; j < arr.size(); ++j)
      if (j != *inf) h.free_basis.push_back(j);
  } else {
    IntMatrix col(arr.size(), 1);
    for (std::size_t j = 0; j < arr.size(); ++j) col(j, 0) = h.relation[j];
    h.smith_coordinates = smith_normal_form(col).U;
  }
  return h;
}

std::vector<MultiplePoint> local_pencil_points(const Arrangement &arr, const std::vector<ProjPoint> &extra_points) {
  std::vector<CycloPoint> candidates;
  auto add = [&](const CycloPoint &p) {
    for (const auto &q : candidates)
      if (same_point(p, q)) return;
    candidates.push_back(p);
  };
  const std::size_t r = arr.size();
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = i + 1; j < r; ++j)
      if (arr[i].line && arr[j].line) add(intersect(*arr[i].line, *arr[j].line));
  for (const auto &e : extra_points) {
    auto q = e.rat();
    add({Cyclo(1, q[0]), Cyclo(1, q[1]), Cyclo(1, q[2])});
  }

  std::vector<MultiplePoint> out;
  for (const auto &p : candidates) {
    std::vector<std::size_t> through;
    for (std::size_t j = 0; j < r; ++j) {
      bool on = arr[j].line ? incident(*arr[j].line, p) : arr[j].form->eval(p).is_zero();
      if (on) through.push_back(j);
    }
    std::vector<int> degs;
    for (std::size_t j : through) degs.push_back(arr[j].degree);
    std::sort(degs.begin(), degs.end());
    degs.erase(std::unique(degs.begin(), degs.end()), degs.end());
    for (int d : degs) {
      MultiplePoint mp;
      mp.point = p;
      mp.degree = d;
      for (std::size_t j : through)
        if (arr[j].degree == d) mp.incident.push_back(j);
      if (d == 1) {
        // Distinct lines through one point span the pencil of lines there.
        mp.span_dim = std::min<std::size_t>(mp.incident.size(), 2);
      } else {
        RatMatrix m(0, monomials(d).size());
        for (std::size_t j : mp.incident) m.append_row(coefficient_vector(*arr[j].form));
        mp.span_dim = m.rank();
      }
      out.push_back(std::move(mp));
    }
  }
  return out;
}

bool ExponentSubtorus::in_character_torus(const std::vector<int> &degrees) const {
  for (std::size_t i = 0; i < E.cols(); ++i) {
    Int s = 0;
    for (std::size_t j = 0; j < E.rows(); ++j) s += degrees[j] * E(j, i);
    if (s != 0) return false;
  }
  return true;
}

std::string ExponentSubtorus::to_string(const std::string &param) const {
  std::ostringstream os;
  os << "(";
  for (std::size_t j = 0; j < E.rows(); ++j) {
    if (j) os << ",";
    std::string entry;
    for (std::size_t i = 0; i < E.cols(); ++i) {
      const Int &e = E(j, i);
      if (e == 0) continue;
      std::string name = E.cols() == 1 ? param : param + std::to_string(i + 1);
      if (!entry.empty()) entry += "*";
      entry += name;
      if (e != 1) entry += "^" + e.get_str();
    }
    os << (entry.empty() ? "1" : entry);
  }
  os << ")";
  return os.str();
}

std::vector<P1Point> fiber_points(const std::vector<ComponentPlacement> &placements) {
  std::vector<P1Point> B;
  for (const auto &p : placements)
    if (p.kind == PlacementKind::type1 && std::find(B.begin(), B.end(), p.point) == B.end()) B.push_back(p.point);
  std::sort(B.begin(), B.end());
  return B;
}

ExponentSubtorus pullback_subtorus(const Arrangement &arr, const std::vector<ComponentPlacement> &placements) {
  if (placements.size() != arr.size()) throw MathError("placement count does not match the arrangement");
  auto B = fiber_points(placements);
  ExponentSubtorus t;
  t.E = IntMatrix(arr.size(), B.empty() ? 0 : B.size() - 1);
  if (B.size() < 2) return t;
  const P1Point &ref = B.back();
  for (std::size_t j = 0; j < arr.size(); ++j) {
    const auto &p = placements[j];
    if (p.kind != PlacementKind::type1) continue;
    for (std::size_t i = 0; i + 1 < B.size(); ++i) {
      if (p.point == B[i]) t.E(j, i) = p.multiplicity;
      if (p.point == ref) t.E(j, i) = -p.multiplicity;
    }
  }
  return t;
}

bool TorsionCharacter::is_trivial() const {
  return std::all_of(exponents.begin(), exponents.end(), [](const QmodZ &q) { return q.is_zero(); });
}

bool TorsionCharacter::in_character_torus(const std::vector<int> &degrees) const {
  QmodZ s;
  for (std::size_t j = 0; j < exponents.size(); ++j) s += Int(degrees[j]) * exponents[j];
  return s.is_zero();
}

std::string TorsionCharacter::values_string() const {
  std::string s = "(";
  for (std::size_t j = 0; j < exponents.size(); ++j) {
    if (j) s += ",";
    const Rat &v = exponents[j].value();
    if (v == 0)
      s += "1";
    else if (v == Rat(1, 2))
      s += "-1";
    else
      s += "e(" + pc::to_string(v) + ")";
  }
  return s + ")";
}

std::string TorsionCharacter::exponents_string() const {
  std::string s = "(";
  for (std::size_t j = 0; j < exponents.size(); ++j) s += (j ? "," : "") + exponents[j].to_string();
  return s + ")";
}

}  // namespace pc
