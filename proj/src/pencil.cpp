#include "pencilchar/pencil.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>

namespace pc {

namespace {

std::uint64_t fnv1a(const std::string &s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

class ProbeLines {
public:
  explicit ProbeLines(std::uint64_t seed) : rng_(seed) {}
  ProjLine next() {
    std::uniform_int_distribution<int> c(-50, 50);
    for (;;) {
      int u = c(rng_), v = c(rng_), w = c(rng_);
      if (u != 0 && v != 0 && w != 0) return ProjLine::make(u, v, w);
    }
  }

private:
  std::mt19937_64 rng_;
};

// Multiplicity profile of a binary form, counting the root (1 : 0) lost when
// dehomogenising at t = 1.
std::vector<ProfileEntry> binary_profile(const BinaryForm &g) {
  UniPoly a = g.affine();
  std::map<int, int, std::greater<>> byMult;
  if (a.degree() > 0)
    for (const auto &part : squarefree_decomposition(a)) byMult[part.multiplicity] += part.factor.degree();
  int at_infinity = g.degree - a.degree();
  if (at_infinity > 0) byMult[at_infinity] += 1;
  std::vector<ProfileEntry> out;
  for (const auto &[m, d] : byMult) out.push_back({m, d});
  return out;
}

std::optional<std::vector<ProfileEntry>> profile_on(const TernaryForm &g, const ProjLine &l) {
  BinaryForm b = restrict_to_line(g, l);
  if (b.is_zero()) return std::nullopt;
  return binary_profile(b);
}

// Discriminant in c of the restriction of P - c Q to the line, or none when
// the line is degenerate for the pencil.
std::optional<UniPoly> line_discriminant(const Pencil &pencil, const ProjLine &l) {
  BinaryForm bp = restrict_to_line(pencil.P, l), bq = restrict_to_line(pencil.Q, l);
  const auto D = static_cast<std::size_t>(pencil.degree());
  const Rat &pd = bp.coeffs[D], &qd = bq.coeffs[D];
  if (pd == 0 && qd == 0) return std::nullopt;
  std::vector<Rat> xs, ys;
  for (long c = 0; xs.size() < 2 * D; ++c) {
    if (pd - c * qd == 0) continue;
    std::vector<Rat> g(D + 1);
    for (std::size_t i = 0; i <= D; ++i) g[i] = bp.coeffs[i] - c * bq.coeffs[i];
    UniPoly gp(std::move(g));
    xs.emplace_back(c);
    ys.push_back(resultant(gp, gp.derivative()));
  }
  UniPoly r = interpolate(xs, ys);
  if (r.is_zero()) return std::nullopt;
  return r;
}

std::array<Cyclo, 3> points_on_line(const CycloLine &l, int which) {
  // Intersections with coordinate lines give points with explicit coordinates.
  std::array<CycloLine, 3> axes{CycloLine::from(TernaryForm::variable(0)), CycloLine::from(TernaryForm::variable(1)),
                                CycloLine::from(TernaryForm::variable(2))};
  int found = 0;
  for (const auto &a : axes) {
    if (a == l) continue;
    if (found++ == which) return intersect(l, a);
  }
  return intersect(l, CycloLine::from(TernaryForm::linear(1, 1, 1)));
}

// True when a line lies in some fiber, rational or not.
bool line_in_some_fiber(const CycloLine &l, const Pencil &pencil) {
  std::vector<std::pair<Cyclo, Cyclo>> vals;
  for (int w = 0; w < 3; ++w) {
    auto p = points_on_line(l, w);
    vals.emplace_back(pencil.P.eval(p), pencil.Q.eval(p));
  }
  for (std::size_t i = 0; i < vals.size(); ++i)
    for (std::size_t j = i + 1; j < vals.size(); ++j) {
      Cyclo d = vals[i].first * vals[j].second - vals[i].second * vals[j].first;
      if (!d.is_zero()) return false;
    }
  return true;
}

}  // namespace

Pencil Pencil::make(TernaryForm P, TernaryForm Q) {
  if (P.is_zero() || Q.is_zero()) throw MathError("degenerate pencil: zero form");
  if (P.degree() != Q.degree()) throw MathError("degenerate pencil: P and Q have different degrees");
  if (P.degree() < 1) throw MathError("degenerate pencil: constant forms");
  if (proportional(P, Q)) throw MathError("degenerate pencil: P and Q are proportional");
  Pencil pencil{std::move(P), std::move(Q)};
  // A common factor survives on every line; coprime forms share no root on a generic line.
  ProbeLines probes(pencil.seed());
  for (int attempt = 0; attempt < 5; ++attempt) {
    ProjLine l = probes.next();
    BinaryForm bp = restrict_to_line(pencil.P, l), bq = restrict_to_line(pencil.Q, l);
    if (bp.is_zero() || bq.is_zero()) continue;
    UniPoly ap = bp.affine(), aq = bq.affine();
    bool both_at_infinity = ap.degree() < bp.degree && aq.degree() < bq.degree;
    if (!both_at_infinity && gcd(ap, aq).degree() == 0) return pencil;
  }
  throw MathError("degenerate pencil: P and Q share a factor");
}

Pencil pencil_from_blocks(const Arrangement &arr, const std::vector<Block> &blocks) {
  if (blocks.size() < 2) throw MathError("a pencil needs at least two blocks");
  std::vector<TernaryForm> forms;
  std::vector<bool> used(arr.size(), false);
  for (const auto &blk : blocks) {
    if (blk.empty()) throw MathError("empty pencil block");
    std::map<std::size_t, int> unit_mult;
    for (const auto &[j, m] : blk) {
      if (j >= arr.size()) throw MathError("block member out of range");
      if (m < 1) throw MathError("block multiplicities must be positive");
      if (used[j]) throw MathError("component '" + arr[j].label + "' appears in two blocks");
      used[j] = true;
      auto [it, fresh] = unit_mult.emplace(arr[j].unit, m);
      if (!fresh && it->second != m)
        throw MathError("conjugate components need equal multiplicities ('" + arr[j].label + "')");
    }
    TernaryForm f = TernaryForm::constant(1);
    for (const auto &[u, m] : unit_mult) {
      for (std::size_t j : arr.units()[u].members)
        if (!used[j]) throw MathError("block omits the conjugate '" + arr[j].label + "'");
      f = f * arr.units()[u].form.pow(m);
    }
    forms.push_back(f.primitive());
  }
  Pencil pencil = Pencil::make(forms[0], forms[1]);
  for (std::size_t i = 2; i < forms.size(); ++i) {
    if (forms[i].degree() != pencil.degree()) throw MathError("pencil blocks have different degrees");
    RatMatrix m(0, monomials(pencil.degree()).size());
    m.append_row(coefficient_vector(pencil.P));
    m.append_row(coefficient_vector(pencil.Q));
    m.append_row(coefficient_vector(forms[i]));
    if (m.rank() != 2) throw MathError("block " + std::to_string(i + 1) + " is not in the span of the first two");
  }
  return pencil;
}

std::uint64_t Pencil::seed() const { return fnv1a(P.to_string() + "|" + Q.to_string()); }

const FiberDivisor *PencilClassification::fiber_at(const P1Point &b) const {
  for (const auto &f : B)
    if (f.b == b) return &f;
  return nullptr;
}

PencilClassification classify(const Arrangement &arr, const Pencil &pencil) {
  PencilClassification cls;
  cls.placements.assign(arr.size(), ComponentPlacement{});
  std::map<P1Point, std::vector<std::pair<std::size_t, int>>> byPoint;  // unit, multiplicity
  for (std::size_t u = 0; u < arr.units().size(); ++u) {
    const auto &unit = arr.units()[u];
    auto mem = member_of_pencil_dividing(unit.form, pencil.P, pencil.Q);
    if (mem) {
      byPoint[mem->b].emplace_back(u, mem->e);
      continue;
    }
    for (std::size_t j : unit.members) {
      if (arr[j].form || !line_in_some_fiber(*arr[j].line, pencil)) continue;
      cls.conditional = true;
      cls.warnings.push_back("component '" + arr[j].label + "' lies in a fiber over an irrational parameter");
      break;
    }
  }

  for (const auto &[b, units] : byPoint) {
    TernaryForm rest = pencil.fiber(b);
    for (const auto &[u, e] : units) {
      auto q = exact_divide(rest, arr.units()[u].form.pow(e));
      if (!q) throw MathError("inconsistent fiber decomposition at " + b.to_string());
      rest = std::move(*q);
    }
    const bool full = rest.degree() == 0;
    std::vector<std::pair<std::size_t, int>> members;
    for (const auto &[u, e] : units)
      for (std::size_t j : arr.units()[u].members) {
        members.emplace_back(j, e);
        cls.placements[j] = ComponentPlacement{full ? PlacementKind::type1 : PlacementKind::type2, b, e};
      }
    std::sort(members.begin(), members.end());
    if (full) {
      cls.B.push_back(FiberDivisor{b, std::move(members)});
    } else {
      SpecialFiber s;
      s.c = b;
      s.m_prime = 0;
      for (const auto &[j, e] : members) s.m_prime = gcd(s.m_prime, Int(e));
      s.arrangement_part = std::move(members);
      s.m_double_prime = 0;
      cls.special.push_back(std::move(s));
    }
  }
  cls.minimal = std::all_of(cls.placements.begin(), cls.placements.end(),
                            [](const auto &p) { return p.kind == PlacementKind::type1; });
  cls.special_flag = std::any_of(cls.placements.begin(), cls.placements.end(),
                                 [](const auto &p) { return p.kind == PlacementKind::type2; });
  return cls;
}

void detect_special_fibers(const Arrangement &arr, const Pencil &pencil, PencilClassification &cls) {
  ProbeLines probes(pencil.seed());

  auto next_discriminant = [&]() {
    for (int attempt = 0; attempt < 10; ++attempt)
      if (auto r = line_discriminant(pencil, probes.next())) return *r;
    throw MathError("probe degeneracy: no usable probe line for the discriminant");
  };
  UniPoly disc = gcd(next_discriminant(), next_discriminant());

  std::vector<P1Point> candidates;
  for (const auto &s : cls.special) candidates.push_back(s.c);
  if (disc.degree() > 0) {
    auto roots = rational_roots(disc);
    for (const auto &[c, mult] : roots.roots) candidates.push_back(P1Point::make(c, 1));
    if (roots.nonrational_remain) {
      cls.conditional = true;
      cls.warnings.push_back("the discriminant has irrational roots; special fibers there are not analysed");
    }
  }
  candidates.push_back(P1Point::infinity());
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  std::vector<SpecialFiber> found;
  for (const auto &c : candidates) {
    if (cls.fiber_at(c)) continue;
    SpecialFiber s;
    s.c = c;
    s.m_prime = 0;
    for (const auto &old : cls.special)
      if (old.c == c) s = old;
    TernaryForm rest = pencil.fiber(c);
    std::set<std::size_t> seen_units;
    for (const auto &[j, e] : s.arrangement_part) {
      if (!seen_units.insert(arr[j].unit).second) continue;
      rest = *exact_divide(rest, arr.units()[arr[j].unit].form.pow(e));
    }
    if (rest.degree() == 0) continue;

    std::optional<std::vector<ProfileEntry>> agreed;
    for (int attempt = 0; attempt < 5 && !agreed; ++attempt) {
      auto p1 = profile_on(rest, probes.next());
      auto p2 = profile_on(rest, probes.next());
      if (p1 && p2 && *p1 == *p2) agreed = p1;
    }
    if (!agreed) throw MathError("probe degeneracy at " + c.to_string());
    s.new_part = *agreed;
    s.m_double_prime = 0;
    bool reduced = true;
    for (const auto &e : s.new_part) {
      s.m_double_prime = gcd(s.m_double_prime, Int(e.multiplicity));
      if (e.multiplicity > 1) reduced = false;
    }
    if (s.arrangement_part.empty() && reduced) continue;
    found.push_back(std::move(s));
  }
  cls.special = std::move(found);
  cls.special_fibers_detected = true;
}

PencilClassification analyze(const Arrangement &arr, const Pencil &pencil) {
  auto cls = classify(arr, pencil);
  detect_special_fibers(arr, pencil, cls);
  return cls;
}

ExponentSubtorus pullback_subtorus(const Arrangement &arr, const PencilClassification &cls) {
  return pullback_subtorus(arr, cls.placements);
}

namespace {

std::vector<BasePoint> base_points(const Arrangement &arr, const PencilClassification &cls) {
  std::vector<BasePoint> pts;
  for (std::size_t a = 0; a < cls.B.size(); ++a)
    for (std::size_t b = a + 1; b < cls.B.size(); ++b)
      for (const auto &[i, mi] : cls.B[a].members)
        for (const auto &[j, mj] : cls.B[b].members) {
          CycloPoint p = intersect(*arr[i].line, *arr[j].line);
          bool known = std::any_of(pts.begin(), pts.end(), [&](const BasePoint &q) { return same_point(q.point, p); });
          if (!known) pts.push_back(BasePoint{p, {}, 0});
        }
  for (auto &bp : pts) {
    for (const auto &f : cls.B) {
      int n = 0;
      for (const auto &[j, m] : f.members)
        if (incident(*arr[j].line, bp.point)) n += m;
      bp.fiber_multiplicity.push_back(n);
    }
    for (std::size_t j = 0; j < arr.size(); ++j)
      if (incident(*arr[j].line, bp.point)) ++bp.curve_multiplicity;
  }
  return pts;
}

void require_minimal_lines(const Arrangement &arr, const PencilClassification &cls, const char *what) {
  if (!arr.is_line_arrangement()) throw MathError(std::string(what) + " requires a line arrangement");
  if (!cls.minimal) throw MathError(std::string(what) + " requires every component to lie in a fiber over B");
  if (cls.B.size() < 2) throw MathError(std::string(what) + " requires at least two fibers over B");
}

}  // namespace

BaseLocusReport base_locus_identities(const Arrangement &arr, const Pencil &pencil, const PencilClassification &cls) {
  require_minimal_lines(arr, cls, "base-locus identities");
  BaseLocusReport rep;
  rep.D = pencil.degree();
  rep.k = cls.B.size();
  rep.points = base_points(arr, cls);
  rep.constant_multiplicity = true;
  rep.multiplicity_sum = 0;
  rep.intersection_sum = 0;
  for (const auto &p : rep.points) {
    for (int n : p.fiber_multiplicity)
      if (n != p.fiber_multiplicity.front()) rep.constant_multiplicity = false;
    Int n = p.fiber_multiplicity.front();
    rep.multiplicity_sum += n;
    rep.intersection_sum += n * n;
  }
  rep.sum_matches = rep.intersection_sum == Int(rep.D) * rep.D;
  rep.component_multiplicity_sum = 0;
  for (const auto &f : cls.B)
    for (const auto &[j, m] : f.members) rep.component_multiplicity_sum += m;
  rep.component_sum_matches = rep.component_multiplicity_sum == Int(rep.k) * rep.D;
  return rep;
}

Int self_intersection(const Arrangement &arr, const std::vector<int> &clusters) {
  Int deg = arr.total_degree();
  Int s = deg * deg;
  for (int m : clusters) {
    if (m < 1) throw MathError("cluster multiplicities must be positive");
    s -= Int(m) * m;
  }
  return s;
}

Int self_intersection_auto(const Arrangement &arr, const Pencil &, const PencilClassification &cls) {
  require_minimal_lines(arr, cls, "automatic clusters");
  std::vector<int> clusters;
  for (const auto &p : base_points(arr, cls)) clusters.push_back(p.curve_multiplicity);
  return self_intersection(arr, clusters);
}

std::vector<Rat> span_key(const Pencil &pencil) {
  RatMatrix m(0, monomials(pencil.degree()).size());
  m.append_row(coefficient_vector(pencil.P));
  m.append_row(coefficient_vector(pencil.Q));
  m.rref();
  std::vector<Rat> key;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (const auto &x : m.row(i)) key.push_back(x);
  return key;
}

// ---------------------------------------------------------------- search

namespace {

using u64 = std::uint64_t;

u64 mulmod(u64 a, u64 b, u64 p) { return a * b % p; }

u64 powmod(u64 a, u64 e, u64 p) {
  u64 r = 1;
  for (a %= p; e; e >>= 1, a = mulmod(a, a, p))
    if (e & 1) r = mulmod(r, a, p);
  return r;
}

bool is_prime_u(u64 n) {
  if (n < 2) return false;
  for (u64 d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// Reduction of Q(zeta_n) into F_p through a fixed primitive n-th root of unity.
struct ModField {
  u64 p = 0;
  u64 zeta = 1;

  std::optional<u64> rat(const Rat &r) const {
    u64 den = mpz_fdiv_ui(r.get_den_mpz_t(), p);
    if (den == 0) return std::nullopt;
    return mulmod(mpz_fdiv_ui(r.get_num_mpz_t(), p), powmod(den, p - 2, p), p);
  }
  std::optional<u64> cyclo(const Cyclo &c) const {
    u64 acc = 0, zp = 1;
    for (const auto &x : c.coeffs()) {
      auto v = rat(x);
      if (!v) return std::nullopt;
      acc = (acc + mulmod(*v, zp, p)) % p;
      zp = mulmod(zp, zeta, p);
    }
    return acc;
  }
};

ModField choose_field(unsigned n) {
  for (u64 p = 10007;; ++p) {
    if (!is_prime_u(p) || (p - 1) % n != 0) continue;
    std::vector<u64> primes;
    for (u64 m = n, d = 2; m > 1; ++d)
      if (m % d == 0) {
        primes.push_back(d);
        while (m % d == 0) m /= d;
      }
    for (u64 a = 2; a < p; ++a) {
      u64 g = powmod(a, (p - 1) / n, p);
      bool primitive = std::all_of(primes.begin(), primes.end(), [&](u64 l) { return powmod(g, n / l, p) != 1; });
      if (primitive) return ModField{p, g};
    }
  }
}

struct ModForm {
  std::vector<std::pair<Exponent, u64>> terms;
  u64 eval(const std::array<u64, 3> &q, u64 p) const {
    u64 s = 0;
    for (const auto &[e, c] : terms) {
      u64 t = c;
      for (std::size_t i = 0; i < 3; ++i) t = mulmod(t, powmod(q[i], static_cast<u64>(e[i]), p), p);
      s = (s + t) % p;
    }
    return s;
  }
};

// Evaluation data for the modular pre-filter of the search.
struct SearchTables {
  ModField field;
  std::vector<ModForm> unit_forms;
  std::vector<std::vector<std::size_t>> samples_of_unit;  // indices into points
  std::vector<std::array<u64, 3>> points;
  std::vector<std::vector<u64>> value;  // value[unit][point]
};

SearchTables build_tables(const Arrangement &arr, std::uint64_t seed) {
  SearchTables t;
  t.field = choose_field(arr.root_order());
  const u64 p = t.field.p;
  for (const auto &u : arr.units()) {
    ModForm mf;
    for (const auto &[e, c] : u.form.terms()) mf.terms.emplace_back(e, *t.field.rat(c));
    t.unit_forms.push_back(std::move(mf));
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<u64> coord(0, p - 1);
  auto random_point = [&]() { return std::array<u64, 3>{coord(rng), coord(rng), coord(rng)}; };
  auto cross = [&](const std::array<u64, 3> &a, const std::array<u64, 3> &b) {
    return std::array<u64, 3>{(mulmod(a[1], b[2], p) + p - mulmod(a[2], b[1], p)) % p,
                              (mulmod(a[2], b[0], p) + p - mulmod(a[0], b[2], p)) % p,
                              (mulmod(a[0], b[1], p) + p - mulmod(a[1], b[0], p)) % p};
  };

  t.samples_of_unit.resize(arr.units().size());
  for (std::size_t u = 0; u < arr.units().size(); ++u) {
    const auto &unit = arr.units()[u];
    for (std::size_t j : unit.members) {
      const auto &c = arr[j];
      if (c.line) {
        std::array<u64, 3> l{};
        bool ok = true;
        for (std::size_t i = 0; i < 3; ++i) {
          auto v = t.field.cyclo(c.line->c[i]);
          if (!v) ok = false;
          else l[i] = *v;
        }
        if (!ok) continue;
        std::size_t want = unit.members.size() > 1 ? 4 : 6;
        for (std::size_t got = 0; got < want;) {
          auto q = cross(l, random_point());
          if (q[0] == 0 && q[1] == 0 && q[2] == 0) continue;
          t.samples_of_unit[u].push_back(t.points.size());
          t.points.push_back(q);
          ++got;
        }
      } else {
        const ModForm &f = t.unit_forms[u];
        std::size_t got = 0;
        for (int tries = 0; tries < 40 && got < 8; ++tries) {
          auto a = random_point(), b = random_point();
          for (u64 s = 0; s < p && got < 8; ++s) {
            std::array<u64, 3> q{(mulmod(s, a[0], p) + b[0]) % p, (mulmod(s, a[1], p) + b[1]) % p,
                                 (mulmod(s, a[2], p) + b[2]) % p};
            if (q[0] == 0 && q[1] == 0 && q[2] == 0) continue;
            if (f.eval(q, p) == 0) {
              t.samples_of_unit[u].push_back(t.points.size());
              t.points.push_back(q);
              ++got;
            }
          }
        }
      }
    }
  }
  t.value.assign(arr.units().size(), std::vector<u64>(t.points.size()));
  for (std::size_t u = 0; u < arr.units().size(); ++u)
    for (std::size_t q = 0; q < t.points.size(); ++q) t.value[u][q] = t.unit_forms[u].eval(t.points[q], p);
  return t;
}

struct Searcher {
  const Arrangement &arr;
  const SearchCaps &caps;
  SearchTables tables;
  std::size_t nunits;
  std::vector<int> deg;
  std::vector<int> assign;  // 0 unused, 1 in P, 2 in Q
  std::vector<int> mult;
  std::set<std::vector<std::vector<std::pair<std::size_t, int>>>> tried;
  std::vector<std::pair<std::vector<std::pair<std::size_t, int>>, std::vector<std::pair<std::size_t, int>>>> survivors;
  int max_degree = 0;

  Searcher(const Arrangement &a, const SearchCaps &c)
      : arr(a), caps(c), tables(build_tables(a, 0x5eed0000ull + a.size())), nunits(a.units().size()) {
    for (const auto &u : a.units()) deg.push_back(u.degree());
    assign.assign(nunits, 0);
    mult.assign(nunits, 0);
    int total = 0;
    for (int d : deg) total += d;
    max_degree = total * caps.max_multiplicity / 2;
  }

  void run() {
    std::vector<u64> pv(tables.points.size(), 1), qv(tables.points.size(), 1);
    recurse(0, 0, 0, false, pv, qv);
  }

  void recurse(std::size_t u, int dp, int dq, bool started, const std::vector<u64> &pv, const std::vector<u64> &qv) {
    if (u == nunits) {
      if (dp == dq && dp >= 2) leaf(pv, qv);
      return;
    }
    recurse(u + 1, dp, dq, started, pv, qv);
    const u64 p = tables.field.p;
    for (int side = 1; side <= 2; ++side) {
      if (side == 2 && !started) continue;  // the first used unit goes to P
      std::vector<u64> acc = side == 1 ? pv : qv;
      for (int m = 1; m <= caps.max_multiplicity; ++m) {
        int nd = (side == 1 ? dp : dq) + m * deg[u];
        if (nd > max_degree) break;
        for (std::size_t q = 0; q < acc.size(); ++q) acc[q] = mulmod(acc[q], tables.value[u][q], p);
        assign[u] = side;
        mult[u] = m;
        if (side == 1)
          recurse(u + 1, nd, dq, true, acc, qv);
        else
          recurse(u + 1, dp, nd, true, pv, acc);
      }
      assign[u] = 0;
      mult[u] = 0;
    }
  }

  void leaf(const std::vector<u64> &pv, const std::vector<u64> &qv) {
    int g = 0;
    for (std::size_t u = 0; u < nunits; ++u)
      if (assign[u]) g = std::gcd(g, mult[u]);
    if (g != 1) return;
    const u64 p = tables.field.p;
    const int D = [&] {
      int s = 0;
      for (std::size_t u = 0; u < nunits; ++u)
        if (assign[u] == 1) s += mult[u] * deg[u];
      return s;
    }();
    // Group unused units by the constant value of P : Q on their sample points.
    std::map<std::pair<u64, u64>, std::vector<std::size_t>> groups;
    for (std::size_t u = 0; u < nunits; ++u) {
      if (assign[u]) continue;
      std::optional<std::pair<u64, u64>> ratio;
      bool constant = true;
      for (std::size_t q : tables.samples_of_unit[u]) {
        u64 a = pv[q], b = qv[q];
        if (a == 0 && b == 0) continue;
        std::pair<u64, u64> r = b == 0 ? std::pair<u64, u64>{1, 0} : std::pair<u64, u64>{mulmod(a, powmod(b, p - 2, p), p), 1};
        if (ratio && *ratio != r) {
          constant = false;
          break;
        }
        ratio = r;
      }
      if (constant && ratio) groups[*ratio].push_back(u);
    }
    if (groups.empty()) return;
    bool may_have_three = false;
    for (const auto &[r, us] : groups) {
      int s = 0;
      for (std::size_t u : us) s += deg[u];
      if (s <= D) may_have_three = true;
    }
    if (!may_have_three && caps.ray_filter) {
      std::vector<int> ray(arr.size(), 0);
      for (std::size_t u = 0; u < nunits; ++u)
        for (std::size_t j : arr.units()[u].members) ray[j] = assign[u] == 1 ? mult[u] : assign[u] == 2 ? -mult[u] : 0;
      if (!caps.ray_filter(ray)) return;
    }
    std::vector<std::pair<std::size_t, int>> a, b;
    for (std::size_t u = 0; u < nunits; ++u) {
      if (assign[u] == 1) a.emplace_back(u, mult[u]);
      if (assign[u] == 2) b.emplace_back(u, mult[u]);
    }
    std::vector<std::vector<std::pair<std::size_t, int>>> key{a, b};
    for (const auto &[r, us] : groups) {
      std::vector<std::pair<std::size_t, int>> blk;
      for (std::size_t u : us) blk.emplace_back(u, 0);
      key.push_back(std::move(blk));
    }
    std::sort(key.begin(), key.end());
    if (!tried.insert(key).second) return;
    survivors.emplace_back(std::move(a), std::move(b));
  }
};

TernaryForm block_product(const Arrangement &arr, const std::vector<std::pair<std::size_t, int>> &units) {
  TernaryForm f = TernaryForm::constant(1);
  for (const auto &[u, m] : units) f = f * arr.units()[u].form.pow(m);
  return f;
}

TernaryForm fiber_product(const Arrangement &arr, const FiberDivisor &fd) {
  TernaryForm f = TernaryForm::constant(1);
  std::set<std::size_t> seen;
  for (const auto &[j, m] : fd.members)
    if (seen.insert(arr[j].unit).second) f = f * arr.units()[arr[j].unit].form.pow(m);
  return f.primitive();
}

}  // namespace

std::vector<FoundPencil> pencil_search(const Arrangement &arr, const SearchCaps &caps) {
  if (caps.max_multiplicity < 1 || caps.max_blocks < 2 || caps.min_blocks > caps.max_blocks)
    throw MathError("invalid search caps");
  Searcher s(arr, caps);
  s.run();

  std::vector<FoundPencil> out;
  std::set<std::vector<Rat>> spans;
  for (const auto &[a, b] : s.survivors) {
    Pencil raw{block_product(arr, a), block_product(arr, b)};
    auto cls = classify(arr, raw);
    const std::size_t k = cls.B.size();
    if (k < std::max<std::size_t>(caps.min_blocks, 2) || k > caps.max_blocks) continue;
    bool within = true;
    for (const auto &p : cls.placements)
      if (p.kind == PlacementKind::type1 && p.multiplicity > caps.max_multiplicity) within = false;
    if (!within) continue;
    if (k == 2 && !cls.special_flag) continue;
    if (k == 2 && caps.ray_filter) {
      std::vector<int> ray(arr.size(), 0);
      for (const auto &[j, m] : cls.B[0].members) ray[j] = m;
      for (const auto &[j, m] : cls.B[1].members) ray[j] = -m;
      if (!caps.ray_filter(ray)) continue;
    }
    Pencil canonical{fiber_product(arr, cls.B[0]), fiber_product(arr, cls.B[1])};
    if (!spans.insert(span_key(canonical)).second) continue;
    out.push_back(FoundPencil{canonical, analyze(arr, canonical)});
  }
  std::stable_sort(out.begin(), out.end(), [](const FoundPencil &x, const FoundPencil &y) {
    if (x.classification.k() != y.classification.k()) return x.classification.k() > y.classification.k();
    std::vector<std::vector<std::pair<std::size_t, int>>> kx, ky;
    for (const auto &f : x.classification.B) kx.push_back(f.members);
    for (const auto &f : y.classification.B) ky.push_back(f.members);
    std::sort(kx.begin(), kx.end());
    std::sort(ky.begin(), ky.end());
    return kx < ky;
  });
  return out;
}

}  // namespace pc
