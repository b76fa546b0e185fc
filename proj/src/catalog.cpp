#include "pencilchar/catalog.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace pc {

std::string to_string(ComponentKind kind) {
  switch (kind) {
    case ComponentKind::local: return "local";
    case ComponentKind::global: return "global";
    case ComponentKind::translated: return "translated";
  }
  return "";
}

std::size_t Catalog::count(ComponentKind kind) const {
  return std::count_if(records.begin(), records.end(), [&](const ComponentRecord &r) { return r.kind == kind; });
}

namespace {

std::string fiber_string(const Arrangement &arr, const PencilClassification &cls) {
  std::ostringstream os;
  for (std::size_t i = 0; i < cls.B.size(); ++i) {
    if (i) os << " | ";
    os << cls.B[i].b.to_string() << ":";
    for (const auto &[j, m] : cls.B[i].members) {
      os << " " << arr[j].label;
      if (m != 1) os << "^" << m;
    }
  }
  return os.str();
}

std::vector<Int> flatten(const IntMatrix &m) {
  std::vector<Int> v{Int(static_cast<unsigned long>(m.rows())), Int(static_cast<unsigned long>(m.cols()))};
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) v.push_back(m(i, j));
  return v;
}

std::vector<Rat> torsion_key(const TorsionCharacter &rho) {
  std::vector<Rat> v;
  for (const auto &e : rho.exponents) v.push_back(e.value());
  return v;
}

TorsionCharacter trivial_character(std::size_t r) { return TorsionCharacter{std::vector<QmodZ>(r)}; }

// Residue vector of a k = 2 pencil: +m on the fiber over B[0], -m over B[1].
std::vector<int> ray_of(const PencilClassification &cls, std::size_t r) {
  std::vector<int> ray(r, 0);
  for (const auto &[j, m] : cls.B[0].members) ray[j] = m;
  for (const auto &[j, m] : cls.B[1].members) ray[j] = -m;
  return ray;
}

bool maximal_ray(const CupStructure &cs, const std::vector<int> &ray) {
  RatMatrix E(0, ray.size());
  std::vector<Rat> row(ray.begin(), ray.end());
  E.append_row(row);
  return is_maximal_isotropic(cs, E).maximal;
}

// rho * T_inner lies in T_outer: the columns of inner are in the rational span
// of outer, and rho pairs integrally with every integer relation of outer.
bool contained_in(const ExponentSubtorus &inner, const TorsionCharacter &rho, const ExponentSubtorus &outer) {
  IntMatrix joined = outer.E;
  for (std::size_t i = 0; i < inner.E.cols(); ++i) joined.append_column(inner.E.column(i));
  if (rank(joined) != rank(outer.E)) return false;
  IntMatrix relations = integer_kernel_basis(outer.E.transpose());
  for (std::size_t c = 0; c < relations.cols(); ++c) {
    QmodZ s;
    for (std::size_t j = 0; j < rho.exponents.size(); ++j) s += relations(j, c) * rho.exponents[j];
    if (!s.is_zero()) return false;
  }
  return true;
}

void certify_translated(ComponentRecord &rec, const Arrangement &arr) {
  const auto &cls = *rec.classification;
  if (cls.k() >= 3) {
    rec.certified = true;
    rec.certification = "certified: negative Euler characteristic of the base";
    return;
  }
  std::vector<std::string> failing;
  for (const auto &sf : cls.special)
    if (sf.m_prime != 1) failing.push_back("m'(" + sf.c.to_string() + ") = " + pc::to_string(sf.m_prime) + " != 1");
  if (!arr.is_line_arrangement()) {
    failing.push_back("maximal isotropy of the residue line is only tested for line arrangements");
  } else if (!maximal_ray(cup_structure(arr), ray_of(cls, arr.size()))) {
    failing.push_back("the residue line is not maximal isotropic");
  }
  if (failing.empty()) {
    rec.certified = true;
    rec.certification = "certified: m' = 1 at every point of C(f) and maximal isotropic residue line";
    rec.notes.push_back("the m' = 1 hypothesis is checked over the special points C(f) only");
    return;
  }
  rec.certified = false;
  std::string text = "candidate: ";
  for (std::size_t i = 0; i < failing.size(); ++i) text += (i ? "; " : "") + failing[i];
  rec.certification = text;
}

}  // namespace

ComponentRecord local_record(const Arrangement &arr, const MultiplePoint &mp) {
  ComponentRecord rec;
  rec.kind = ComponentKind::local;
  rec.dimension = mp.k() - 1;
  std::ostringstream os;
  os << "point " << point_string(mp.point) << " on";
  for (std::size_t j : mp.incident) os << " " << arr[j].label;
  rec.source = os.str();
  rec.point = mp;
  // rho_j = 1 off the point; the incident coordinates have product 1.
  IntMatrix E(arr.size(), mp.k() - 1);
  const std::size_t last = mp.incident.back();
  for (std::size_t i = 0; i + 1 < mp.k(); ++i) {
    E(mp.incident[i], i) = 1;
    E(last, i) = -1;
  }
  rec.subtorus = ExponentSubtorus{E};
  rec.torsion = trivial_character(arr.size());
  rec.certified = true;
  rec.certification = "certified: local pencil of " + std::to_string(mp.k()) + " curves through one point";
  classify_flags(rec, arr);
  expected_h1(rec);
  return rec;
}

ComponentRecord global_record(const Arrangement &arr, const Pencil &pencil, const PencilClassification &cls) {
  if (cls.k() < 3) throw MathError("a global component needs at least three deleted fibers");
  ComponentRecord rec;
  rec.kind = ComponentKind::global;
  rec.dimension = cls.k() - 1;
  rec.source = "pencil " + fiber_string(arr, cls);
  rec.pencil = pencil;
  rec.classification = cls;
  rec.subtorus = pullback_subtorus(arr, cls);
  rec.torsion = trivial_character(arr.size());
  rec.certified = true;
  rec.certification = "certified: negative Euler characteristic of the base";
  rec.conditional = cls.conditional;
  classify_flags(rec, arr);
  expected_h1(rec);
  return rec;
}

ComponentRecord translated_record(const Arrangement &arr, const Pencil &pencil, const PencilClassification &cls,
                                  const ThetaData &data, const TfGroup &tf, const TfCharacter &chi) {
  ComponentRecord rec;
  rec.kind = ComponentKind::translated;
  rec.dimension = cls.k() - 1;
  rec.source = "pencil " + fiber_string(arr, cls);
  rec.pencil = pencil;
  rec.classification = cls;
  rec.subtorus = pullback_subtorus(arr, cls);
  auto lifted = lift_character(arr, cls, data, tf, chi);
  rec.torsion = lifted.rho;
  rec.rho_tilde = lifted.rho_tilde;
  rec.tf = tf.group;
  rec.conditional = tf.conditional || cls.conditional;
  rec.epsilon = epsilon(cls, rec.torsion);
  certify_translated(rec, arr);
  classify_flags(rec, arr);
  expected_h1(rec);
  return rec;
}

void classify_flags(ComponentRecord &rec, const Arrangement &arr) {
  rec.coordinate = false;
  rec.coordinate_witness.reset();
  const IntMatrix &E = rec.subtorus.E;
  std::optional<std::size_t> translated_witness;
  for (std::size_t j = 0; j < arr.size(); ++j) {
    bool zero_row = true;
    for (std::size_t i = 0; i < E.cols(); ++i)
      if (E(j, i) != 0) zero_row = false;
    if (!zero_row) continue;
    if (rec.torsion.exponents[j].is_zero()) {
      if (!rec.coordinate_witness) rec.coordinate_witness = j;
    } else if (!translated_witness) {
      translated_witness = j;
    }
  }
  // Torsion entries are of finite order, so a zero row always makes the
  // component coordinate after multiplying by a torsion character.
  if (rec.kind == ComponentKind::translated && translated_witness) {
    rec.coordinate = true;
    rec.coordinate_witness = translated_witness;
    rec.flag = "translated coordinate component";
  } else if (rec.coordinate_witness) {
    rec.coordinate = true;
    rec.flag = rec.kind == ComponentKind::translated ? "translated coordinate component" : "coordinate component";
  } else if (translated_witness) {
    rec.coordinate = true;
    rec.coordinate_witness = translated_witness;
    rec.flag = "translated coordinate component";
  } else {
    rec.flag = "essential";
  }
  rec.essential = !rec.coordinate;
  if (rec.coordinate && rec.kind == ComponentKind::translated && rec.dimension >= 2)
    rec.notes.push_back("pull-back from the arrangement without " + arr[*rec.coordinate_witness].label);
}

int expected_h1(ComponentRecord &rec) {
  if (rec.kind == ComponentKind::translated) {
    rec.expected_generic_h1 = static_cast<int>(rec.dimension) - 1 + rec.epsilon;
    rec.exceptional_note = "generic value k - 2 + epsilon with epsilon = " + std::to_string(rec.epsilon) +
                           "; dim H^1 can only jump up, at finitely many characters of the component";
  } else {
    rec.expected_generic_h1 = static_cast<int>(rec.dimension) - 1;
    rec.exceptional_note = "generic value dimension - 1; dim H^1 can only jump up, at finitely many characters";
  }
  return rec.expected_generic_h1;
}

Catalog build_catalog(const Arrangement &arr, const CatalogCaps &caps, const std::vector<ProjPoint> &extra_points) {
  Catalog cat;
  cat.notes.push_back("zero-dimensional components are not computed");

  for (const auto &mp : local_pencil_points(arr, extra_points))
    if (mp.gives_local_component()) cat.records.push_back(local_record(arr, mp));

  SearchCaps sc;
  sc.max_multiplicity = caps.max_multiplicity;
  sc.max_blocks = std::max<std::size_t>(caps.max_blocks, 2);
  sc.min_blocks = 2;
  std::optional<CupStructure> cs;
  if (arr.is_line_arrangement() && arr.infinity()) {
    cs = cup_structure(arr);
    sc.ray_filter = [&cs](const std::vector<int> &ray) { return maximal_ray(*cs, ray); };
  }
  auto found = pencil_search(arr, sc);

  std::set<std::vector<Int>> global_keys;
  std::set<std::pair<std::vector<Int>, std::vector<Rat>>> translated_keys;
  std::vector<ComponentRecord> untranslated, translated;
  for (const auto &fp : found) {
    const auto &cls = fp.classification;
    if (cls.k() >= 3) {
      auto rec = global_record(arr, fp.pencil, cls);
      if (global_keys.insert(flatten(rec.subtorus.lattice_key())).second) untranslated.push_back(std::move(rec));
    }
    if (!arr.infinity()) continue;
    if (reduced_fast_path_applies(cls)) continue;
    ThetaData data;
    TfGroup tf;
    try {
      data = theta(arr, cls);
      tf = compute_Tf(data);
    } catch (const MathError &e) {
      cat.notes.push_back("T(f) unavailable for pencil " + fiber_string(arr, cls) + ": " + e.what());
      continue;
    }
    if (tf.group.trivial()) continue;
    for (const auto &chi : characters_of_Tf(tf)) {
      if (is_trivial(chi)) continue;
      auto rec = translated_record(arr, fp.pencil, cls, data, tf, chi);
      std::pair key{flatten(rec.subtorus.lattice_key()), torsion_key(rec.torsion)};
      if (translated_keys.insert(key).second) translated.push_back(std::move(rec));
    }
  }
  if (!arr.infinity()) cat.notes.push_back("no line component: translated components are not computed");

  // Pencils composed with a smaller pencil give subtori inside another
  // component; only maximal ones are irreducible components.
  auto absorbed = [&](const ComponentRecord &rec) {
    for (const auto &other : cat.records)
      if (other.dimension > rec.dimension && contained_in(rec.subtorus, rec.torsion, other.subtorus)) return true;
    for (const auto &other : untranslated)
      if (other.dimension > rec.dimension && contained_in(rec.subtorus, rec.torsion, other.subtorus)) return true;
    return false;
  };
  std::size_t dropped = 0;
  std::vector<ComponentRecord> kept;
  for (auto &rec : untranslated) {
    if (absorbed(rec))
      ++dropped;
    else
      kept.push_back(std::move(rec));
  }
  untranslated.clear();
  for (auto &rec : kept) cat.records.push_back(std::move(rec));
  std::erase_if(translated, [&](const ComponentRecord &rec) {
    bool a = absorbed(rec);
    dropped += a;
    return a;
  });
  if (dropped) cat.notes.push_back(std::to_string(dropped) + " pencil subtori lie inside larger components and are omitted");

  for (auto &rec : translated) {
    if (rec.dimension >= 2) {
      bool present = global_keys.count(flatten(rec.subtorus.lattice_key())) > 0;
      rec.notes.push_back(present ? "untranslated subtorus is listed as a global component"
                                  : "untranslated subtorus missing from the global components");
      if (!present) cat.cross_reference_ok = false;
    }
    cat.records.push_back(std::move(rec));
  }
  return cat;
}

}  // namespace pc
