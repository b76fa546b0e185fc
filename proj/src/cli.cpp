#include "pencilchar/cli.hpp"

#include "pencilchar/catalog.hpp"
#include "pencilchar/fileformat.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace pc {

using nlohmann::ordered_json;

namespace {

// Reports are built as JSON trees; the text renderers read the same tree.
struct ConditionalResult : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string rat_text(const Rat &r) { return to_string(r); }

ordered_json matrix_json(const IntMatrix &m) {
  ordered_json rows = ordered_json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j).get_str());
    rows.push_back(row);
  }
  return rows;
}

std::string label_list(const Arrangement &arr, const std::vector<std::pair<std::size_t, int>> &members) {
  std::string s;
  for (const auto &[j, m] : members) {
    if (!s.empty()) s += " ";
    s += arr[j].label;
    if (m != 1) s += "^" + std::to_string(m);
  }
  return s;
}

std::string kind_text(PlacementKind k) {
  switch (k) {
    case PlacementKind::type1: return "type1";
    case PlacementKind::type2: return "type2";
    case PlacementKind::horizontal: return "horizontal";
  }
  return "";
}

std::string profile_text(const std::vector<ProfileEntry> &profile) {
  std::string s;
  for (const auto &e : profile) {
    if (!s.empty()) s += ", ";
    s += "multiplicity " + std::to_string(e.multiplicity) + " degree " + std::to_string(e.degree);
  }
  return s.empty() ? "none" : s;
}

ordered_json torsion_json(const TorsionCharacter &rho) {
  ordered_json e = ordered_json::array();
  for (const auto &x : rho.exponents) e.push_back(x.to_string());
  return {{"values", rho.values_string()}, {"exponents", e}};
}

ordered_json subtorus_json(const ExponentSubtorus &s) {
  return {{"dimension", s.dimension()}, {"string", s.to_string()}, {"matrix", matrix_json(s.E)}};
}

ordered_json chi_json(const TfCharacter &chi) {
  ordered_json a = ordered_json::array();
  for (const auto &x : chi) a.push_back(x.to_string());
  return a;
}

std::string joined(const ordered_json &arr, const std::string &sep = ",") {
  std::string s;
  for (std::size_t i = 0; i < arr.size(); ++i) s += (i ? sep : "") + arr[i].get<std::string>();
  return s;
}

ordered_json classification_json(const Arrangement &arr, const Pencil &pencil, const PencilClassification &cls) {
  ordered_json j;
  j["pencil"] = {{"P", pencil.P.to_string()}, {"Q", pencil.Q.to_string()}, {"degree", pencil.degree()}};
  ordered_json comps = ordered_json::array();
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const auto &p = cls.placements[i];
    ordered_json c{{"label", arr[i].label}, {"kind", kind_text(p.kind)}};
    if (p.kind != PlacementKind::horizontal) {
      c["point"] = p.point.to_string();
      c["multiplicity"] = p.multiplicity;
    }
    comps.push_back(c);
  }
  j["components"] = comps;
  ordered_json B = ordered_json::array();
  for (const auto &fd : cls.B) B.push_back({{"point", fd.b.to_string()}, {"members", label_list(arr, fd.members)}});
  j["B"] = B;
  j["k"] = cls.k();
  ordered_json C = ordered_json::array();
  for (const auto &sf : cls.special) {
    C.push_back({{"point", sf.c.to_string()},
                 {"arrangement_part", label_list(arr, sf.arrangement_part)},
                 {"new_part", profile_text(sf.new_part)},
                 {"m_prime", sf.m_prime.get_str()},
                 {"m_double_prime", sf.m_double_prime.get_str()},
                 {"multiple", sf.multiple()}});
  }
  j["special_fibers"] = C;
  j["minimal"] = cls.minimal;
  j["special"] = cls.special_flag;
  j["conditional"] = cls.conditional;
  j["subtorus"] = subtorus_json(pullback_subtorus(arr, cls));
  j["warnings"] = cls.warnings;
  return j;
}

ordered_json record_json(const Arrangement &arr, const ComponentRecord &r) {
  ordered_json j{{"kind", to_string(r.kind)}, {"dimension", r.dimension}, {"source", r.source}};
  j["subtorus"] = subtorus_json(r.subtorus);
  j["torsion"] = torsion_json(r.torsion);
  if (r.kind == ComponentKind::translated) {
    j["T(f)"] = r.tf.to_string();
    j["character"] = chi_json(r.rho_tilde);
    j["epsilon"] = r.epsilon;
  }
  j["flag"] = r.flag;
  j["coordinate_witness"] = r.coordinate_witness ? ordered_json(arr[*r.coordinate_witness].label) : ordered_json(nullptr);
  j["essential"] = r.essential;
  j["certified"] = r.certified;
  j["certification"] = r.certification;
  j["expected_generic_h1"] = r.expected_generic_h1;
  j["exceptional_note"] = r.exceptional_note;
  j["conditional"] = r.conditional;
  j["notes"] = r.notes;
  return j;
}

// ---- text renderers ----

void render_validate(const ordered_json &r, std::ostream &out) {
  out << "arrangement: " << r["components"].size() << " components, total degree " << r["total_degree"].get<int>()
      << (r["line_arrangement"].get<bool>() ? ", all lines" : "") << "\n";
  std::size_t w = 5;
  for (const auto &c : r["components"]) w = std::max(w, c["label"].get<std::string>().size());
  for (const auto &c : r["components"])
    out << "  " << std::left << std::setw(int(w)) << c["label"].get<std::string>() << "  degree " << c["degree"].get<int>()
        << "  " << c["equation"].get<std::string>() << "\n";
  if (r["infinity"].is_null())
    out << "line at infinity: none\n";
  else
    out << "line at infinity: " << r["infinity"]["label"].get<std::string>()
        << (r["infinity"]["auto"].get<bool>() ? " (chosen automatically)" : "") << "\n";
  out << "H1 rank: " << r["h1_rank"].get<std::size_t>() << "; character torus components: "
      << r["torus_components"].get<std::string>() << "\n";
  out << "points with three or more components: " << r["multiple_points"].size() << "\n";
  for (const auto &p : r["multiple_points"])
    out << "  " << p["point"].get<std::string>() << "  k = " << p["k"].get<std::size_t>() << "  " << p["components"].get<std::string>()
        << (p["local_component"].get<bool>() ? "  local component" : "") << "\n";
  for (const auto &wn : r["warnings"]) out << "warning: " << wn.get<std::string>() << "\n";
  out << "valid\n";
}

void render_classify(const ordered_json &r, std::ostream &out) {
  out << "pencil: P = " << r["pencil"]["P"].get<std::string>() << ", Q = " << r["pencil"]["Q"].get<std::string>()
      << " (degree " << r["pencil"]["degree"].get<int>() << ")\n";
  std::size_t w = 5;
  for (const auto &c : r["components"]) w = std::max(w, c["label"].get<std::string>().size());
  out << "components:\n";
  for (const auto &c : r["components"]) {
    out << "  " << std::left << std::setw(int(w)) << c["label"].get<std::string>() << "  " << std::setw(10)
        << c["kind"].get<std::string>();
    if (c.contains("point")) out << "  " << c["point"].get<std::string>() << "  multiplicity " << c["multiplicity"].get<int>();
    out << "\n";
  }
  out << "B (k = " << r["k"].get<std::size_t>() << "):\n";
  for (const auto &b : r["B"]) out << "  " << b["point"].get<std::string>() << ": " << b["members"].get<std::string>() << "\n";
  out << "C(f):" << (r["special_fibers"].empty() ? " none" : "") << "\n";
  for (const auto &c : r["special_fibers"]) {
    out << "  " << c["point"].get<std::string>() << ": arrangement part " << c["arrangement_part"].get<std::string>()
        << "; new part " << c["new_part"].get<std::string>() << "; m' = " << c["m_prime"].get<std::string>()
        << ", m'' = " << c["m_double_prime"].get<std::string>() << (c["multiple"].get<bool>() ? "; multiple" : "") << "\n";
  }
  out << "minimal: " << (r["minimal"].get<bool>() ? "yes" : "no") << "; special: " << (r["special"].get<bool>() ? "yes" : "no")
      << "\n";
  out << "pullback subtorus = " << r["subtorus"]["string"].get<std::string>() << "\n";
  if (r["conditional"].get<bool>()) out << "conditional: special fibers at irrational parameters were not resolved\n";
  for (const auto &wn : r["warnings"]) out << "warning: " << wn.get<std::string>() << "\n";
}

void render_tf(const ordered_json &r, std::ostream &out) {
  const std::string group = r["T(f)"].get<std::string>();
  if (r["characters"].empty()) {
    out << "T(f) = " << group << " (trivial)\n";
  }
  for (const auto &c : r["characters"]) {
    out << "T(f) = " << group << "; rho = " << c["rho"]["values"].get<std::string>() << "\n";
    out << "  character: (" << joined(c["character"]) << ")\n";
    out << "  exponents: (" << joined(c["rho"]["exponents"]) << ")\n";
    out << "  epsilon = " << c["epsilon"].get<int>() << "; expected generic h1 = " << c["expected_generic_h1"].get<int>()
        << "\n";
  }
  out << "pullback subtorus = " << r["subtorus"]["string"].get<std::string>() << "\n";
  out << "reference fiber: " << r["reference"].get<std::string>() << " (" << r["mobius"].get<std::string>() << ")\n";
  if (r["conditional"].get<bool>()) out << "conditional: special fibers at irrational parameters were not resolved\n";
}

void render_check(const ordered_json &r, std::ostream &out) {
  if (r.contains("base_locus")) {
    const auto &b = r["base_locus"];
    if (b.contains("error")) {
      out << "base locus identities: unavailable (" << b["error"].get<std::string>() << ")\n";
    } else {
      out << "base points: " << b["points"].size() << "; D = " << b["D"].get<int>() << "; k = " << b["k"].get<std::size_t>()
          << "\n";
      for (const auto &p : b["points"])
        out << "  " << p["point"].get<std::string>() << "  n_p = (" << joined(p["n_p"]) << ")  curves through: "
            << p["curves"].get<int>() << "\n";
      auto ok = [](bool v) { return v ? "OK" : "FAIL"; };
      out << "n_p independent of the fiber: " << ok(b["constant"].get<bool>()) << "\n";
      out << "sum of n_p = " << b["sum_n_p"].get<std::string>() << "\n";
      out << "sum of n_p^2 = " << b["sum_n_p_squared"].get<std::string>() << ", D^2 = " << b["D_squared"].get<std::string>()
          << ": " << ok(b["sum_matches"].get<bool>()) << "\n";
      out << "sum of m(C_j) = " << b["sum_m"].get<std::string>() << ", kD = " << b["kD"].get<std::string>() << ": "
          << ok(b["component_sum_matches"].get<bool>()) << "\n";
    }
  }
  const auto &s = r["self_intersection"];
  if (s.contains("error")) {
    out << "self-intersection: unavailable (" << s["error"].get<std::string>() << ")\n";
  } else {
    out << "self-intersection = " << s["value"].get<std::string>() << " (<= 0: " << (s["ok"].get<bool>() ? "OK" : "FAIL")
        << ")\n";
  }
}

void render_catalog(const ordered_json &r, std::ostream &out, const Arrangement &) {
  const auto &recs = r["records"];
  if (recs.empty()) {
    out << "no positive-dimensional components\n";
  } else {
    out << "components: " << r["counts"]["local"].get<std::size_t>() << " local, " << r["counts"]["global"].get<std::size_t>()
        << " global, " << r["counts"]["translated"].get<std::size_t>() << " translated\n";
  }
  std::size_t i = 0;
  for (const auto &c : recs) {
    out << "[" << ++i << "] " << c["kind"].get<std::string>() << ", dimension " << c["dimension"].get<std::size_t>() << ": "
        << c["source"].get<std::string>() << "\n";
    out << "    subtorus = " << c["subtorus"]["string"].get<std::string>() << "\n";
    if (c["kind"] == "translated") {
      out << "    T(f) = " << c["T(f)"].get<std::string>() << "; rho = " << c["torsion"]["values"].get<std::string>()
          << "; epsilon = " << c["epsilon"].get<int>() << "\n";
    }
    out << "    " << c["flag"].get<std::string>();
    if (!c["coordinate_witness"].is_null()) out << " (witness " << c["coordinate_witness"].get<std::string>() << ")";
    out << "; " << c["certification"].get<std::string>() << "\n";
    out << "    expected generic h1 = " << c["expected_generic_h1"].get<int>() << "\n";
    for (const auto &n : c["notes"]) out << "    note: " << n.get<std::string>() << "\n";
  }
  for (const auto &n : r["notes"]) out << "note: " << n.get<std::string>() << "\n";
}

void render_reconstruct(const ordered_json &r, std::ostream &out) {
  out << "pencil: P = " << r["P"].get<std::string>() << ", Q = " << r["Q"].get<std::string>() << "\n";
  out << "fibers:\n";
  for (const auto &b : r["blocks"]) out << "  " << b.get<std::string>() << "\n";
}

void render_ray(const ordered_json &r, std::ostream &out) {
  out << "exponents = (" << joined(r["exponents"]) << ")\n";
  out << "map: " << r["formula"].get<std::string>() << "\n";
  out << "subtorus = " << r["subtorus"]["string"].get<std::string>() << "\n";
  out << "note: " << r["note"].get<std::string>() << "\n";
  if (r.contains("tf")) render_tf(r["tf"], out);
}

// ---- report builders ----

ordered_json validate_report(const ArrangementFile &f) {
  const Arrangement &arr = f.arr;
  ordered_json r;
  ordered_json comps = ordered_json::array();
  for (const auto &c : arr.components())
    comps.push_back({{"label", c.label},
                     {"degree", c.degree},
                     {"equation", c.form ? c.form->to_string() : c.line->to_string()},
                     {"orbit_size", arr.units()[c.unit].members.size()}});
  r["components"] = comps;
  r["total_degree"] = arr.total_degree();
  r["line_arrangement"] = arr.is_line_arrangement();
  r["infinity"] = arr.infinity() ? ordered_json{{"label", arr[*arr.infinity()].label}, {"auto", f.infinity_auto}}
                                  : ordered_json(nullptr);
  auto h1 = h1_model(arr);
  r["h1_rank"] = h1.rank();
  r["torus_components"] = h1.torsion_order.get_str();
  ordered_json pts = ordered_json::array();
  for (const auto &mp : local_pencil_points(arr, f.extra_points)) {
    if (mp.k() < 3) continue;
    std::string labels;
    for (std::size_t j : mp.incident) labels += (labels.empty() ? "" : " ") + arr[j].label;
    pts.push_back({{"point", point_string(mp.point)},
                   {"k", mp.k()},
                   {"components", labels},
                   {"span", mp.span_dim},
                   {"local_component", mp.gives_local_component()}});
  }
  r["multiple_points"] = pts;
  r["warnings"] = arr.warnings();
  return r;
}

std::vector<std::pair<std::size_t, QmodZ>> parse_fixes(const Arrangement &arr, const std::vector<std::string> &fixes) {
  std::vector<std::pair<std::size_t, QmodZ>> out;
  for (const auto &s : fixes) {
    auto eq = s.find('=');
    if (eq == std::string::npos) throw ParseError("--fix expects label=exponent, got " + s);
    auto j = arr.index_of(s.substr(0, eq));
    if (!j) throw ParseError("unknown label in --fix: " + s.substr(0, eq));
    Rat v;
    try {
      v = Rat(s.substr(eq + 1));
      v.canonicalize();
    } catch (const std::invalid_argument &) {
      throw ParseError("bad exponent in --fix: " + s.substr(eq + 1));
    }
    out.emplace_back(*j, QmodZ(v));
  }
  return out;
}

ordered_json tf_report(const Arrangement &arr, const Pencil &pencil, const std::vector<std::string> &fixes) {
  auto cls = analyze(arr, pencil);
  auto data = theta(arr, cls);
  auto tf = compute_Tf(data);
  auto sub = pullback_subtorus(arr, cls);
  auto targets = parse_fixes(arr, fixes);
  ordered_json r;
  r["T(f)"] = tf.group.to_string();
  r["order"] = tf.group.order().get_str();
  ordered_json chars = ordered_json::array();
  for (const auto &chi : characters_of_Tf(tf)) {
    if (is_trivial(chi)) continue;
    auto rec = translated_record(arr, pencil, cls, data, tf, chi);
    TorsionCharacter rho = targets.empty() ? rec.torsion : representative_with(rec.torsion, sub, targets);
    chars.push_back({{"character", chi_json(chi)},
                     {"rho", torsion_json(rho)},
                     {"epsilon", rec.epsilon},
                     {"expected_generic_h1", rec.expected_generic_h1},
                     {"certification", rec.certification}});
  }
  r["characters"] = chars;
  r["subtorus"] = subtorus_json(sub);
  r["reference"] = data.reference.to_string();
  r["mobius"] = data.mobius;
  r["conditional"] = tf.conditional || cls.conditional;
  return r;
}

std::vector<int> parse_int_list(const std::string &s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t pos = 0;
      int v = std::stoi(item, &pos);
      if (pos != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception &) {
      throw ParseError("expected a comma-separated list of integers, got " + s);
    }
  }
  return out;
}

ResidueVector parse_rat_list(const std::string &s) {
  ResidueVector out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      Rat v(item);
      v.canonicalize();
      out.push_back(v);
    } catch (const std::invalid_argument &) {
      throw ParseError("expected a comma-separated list of rationals, got " + s);
    }
  }
  return out;
}

ordered_json check_report(const Arrangement &arr, const Pencil &pencil, const std::vector<int> &clusters) {
  auto cls = analyze(arr, pencil);
  ordered_json r;
  try {
    auto rep = base_locus_identities(arr, pencil, cls);
    ordered_json b;
    b["D"] = rep.D;
    b["k"] = rep.k;
    ordered_json pts = ordered_json::array();
    for (const auto &p : rep.points) {
      ordered_json n = ordered_json::array();
      for (int v : p.fiber_multiplicity) n.push_back(std::to_string(v));
      pts.push_back({{"point", point_string(p.point)}, {"n_p", n}, {"curves", p.curve_multiplicity}});
    }
    b["points"] = pts;
    b["constant"] = rep.constant_multiplicity;
    b["sum_n_p"] = rep.multiplicity_sum.get_str();
    b["sum_n_p_squared"] = rep.intersection_sum.get_str();
    b["D_squared"] = std::to_string(rep.D * rep.D);
    b["sum_matches"] = rep.sum_matches;
    b["sum_m"] = rep.component_multiplicity_sum.get_str();
    b["kD"] = std::to_string(rep.k * rep.D);
    b["component_sum_matches"] = rep.component_sum_matches;
    b["passed"] = rep.passed();
    r["base_locus"] = b;
  } catch (const MathError &e) {
    r["base_locus"] = {{"error", e.what()}};
  }
  try {
    Int v = clusters.empty() ? self_intersection_auto(arr, pencil, cls) : self_intersection(arr, clusters);
    r["self_intersection"] = {{"value", v.get_str()}, {"ok", v <= 0}};
  } catch (const MathError &e) {
    r["self_intersection"] = {{"error", e.what()}};
  }
  return r;
}

ordered_json catalog_report(const Arrangement &arr, const Catalog &cat) {
  ordered_json r;
  r["counts"] = {{"local", cat.count(ComponentKind::local)},
                 {"global", cat.count(ComponentKind::global)},
                 {"translated", cat.count(ComponentKind::translated)}};
  ordered_json recs = ordered_json::array();
  for (const auto &rec : cat.records) recs.push_back(record_json(arr, rec));
  r["records"] = recs;
  r["cross_reference_ok"] = cat.cross_reference_ok;
  r["notes"] = cat.notes;
  return r;
}

ordered_json reconstruct_report(const Arrangement &arr, const RatMatrix &E) {
  auto rp = pencil_from_subspace(arr, E);
  ordered_json r{{"P", rp.pencil.P.to_string()}, {"Q", rp.pencil.Q.to_string()}};
  ordered_json blocks = ordered_json::array();
  for (const auto &b : rp.blocks) blocks.push_back(label_list(arr, b));
  r["blocks"] = blocks;
  return r;
}

ordered_json ray_report(const Arrangement &arr, const ResidueVector &dir, bool with_tf) {
  auto ray = ray_to_map(arr, dir);
  ordered_json e = ordered_json::array();
  for (const auto &x : ray.exponents) e.push_back(x.get_str());
  ordered_json r{{"exponents", e},
                 {"formula", ray.formula},
                 {"numerator", ray.numerator.to_string()},
                 {"denominator", ray.denominator.to_string()},
                 {"subtorus", subtorus_json(ray.subtorus)},
                 {"note", ray.connectivity_note}};
  if (with_tf) r["tf"] = tf_report(arr, Pencil::make(ray.numerator, ray.denominator), {});
  return r;
}

bool conditional_in(const ordered_json &r) {
  if (r.is_object()) {
    for (auto it = r.begin(); it != r.end(); ++it)
      if ((it.key() == "conditional" && it.value().is_boolean() && it.value().get<bool>()) || conditional_in(it.value()))
        return true;
  } else if (r.is_array()) {
    for (const auto &x : r)
      if (conditional_in(x)) return true;
  }
  return false;
}

int fail(std::ostream &err, int code, const std::string &kind, const std::string &msg) {
  std::string one_line = msg;
  std::replace(one_line.begin(), one_line.end(), '\n', ' ');
  err << "error " << code << " " << kind << ": " << one_line << "\n";
  return code;
}

}  // namespace

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  CLI::App app{"Pencils, torsion characters and characteristic varieties of plane curve arrangements", "pencilchar"};
  app.require_subcommand(1);
  std::string arr_path, pencil_path, subspace_path, exponents, clusters;
  std::vector<std::string> fixes;
  bool json = false, strict = false, with_tf = false;
  int max_mult = CatalogCaps{}.max_multiplicity;
  std::size_t max_blocks = CatalogCaps{}.max_blocks;

  auto common = [&](CLI::App *sub) {
    sub->add_option("arrangement", arr_path, "arrangement JSON file")->required();
    sub->add_flag("--json", json, "print the report as JSON");
  };
  auto *validate = app.add_subcommand("validate", "parse an arrangement and report its invariants");
  common(validate);
  auto *catalog = app.add_subcommand("catalog", "list the positive-dimensional components");
  common(catalog);
  catalog->add_option("--max-mult", max_mult, "largest multiplicity in the pencil search")->check(CLI::Range(1, 6));
  catalog->add_option("--max-blocks", max_blocks, "largest number of deleted fibers")->check(CLI::Range(2, 8));
  catalog->add_flag("--strict", strict, "fail on conditional results");
  auto *classify_cmd = app.add_subcommand("classify", "classify the components against a pencil");
  common(classify_cmd);
  classify_cmd->add_option("--pencil", pencil_path, "pencil JSON file")->required();
  classify_cmd->add_flag("--strict", strict, "fail on conditional results");
  auto *tf = app.add_subcommand("tf", "compute T(f) and lift its characters");
  common(tf);
  tf->add_option("--pencil", pencil_path, "pencil JSON file")->required();
  tf->add_option("--fix", fixes, "label=exponent: pick the coset representative with this value");
  tf->add_flag("--strict", strict, "fail on conditional results");
  auto *check = app.add_subcommand("check", "base-locus identities and self-intersection");
  common(check);
  check->add_option("--pencil", pencil_path, "pencil JSON file")->required();
  check->add_option("--clusters", clusters, "multiplicities of the blown-up clusters, comma separated");
  auto *reconstruct = app.add_subcommand("reconstruct", "rebuild a pencil from an isotropic subspace");
  common(reconstruct);
  reconstruct->add_option("--subspace", subspace_path, "subspace JSON file")->required();
  auto *ray = app.add_subcommand("ray", "map and subtorus of a residue direction");
  common(ray);
  ray->add_option("--exponents", exponents, "one exponent per component, comma separated")->required();
  ray->add_flag("--tf", with_tf, "also compute T(f) of the induced pencil");
  ray->add_flag("--strict", strict, "fail on conditional results");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::CallForAllHelp &) {
    out << app.help("", CLI::AppFormatMode::All);
    return exit_ok;
  } catch (const CLI::ParseError &e) {
    return fail(err, exit_parse, "usage", e.what());
  }

  try {
    auto file = load_arrangement(arr_path);
    const Arrangement &arr = file.arr;
    ordered_json report;
    std::function<void(const ordered_json &, std::ostream &)> render;
    if (validate->parsed()) {
      report = validate_report(file);
      render = render_validate;
    } else if (catalog->parsed()) {
      CatalogCaps caps;
      caps.max_multiplicity = max_mult;
      caps.max_blocks = max_blocks;
      report = catalog_report(arr, build_catalog(arr, caps, file.extra_points));
      render = [&arr](const ordered_json &r, std::ostream &o) { render_catalog(r, o, arr); };
    } else if (classify_cmd->parsed()) {
      Pencil p = load_pencil(arr, pencil_path);
      report = classification_json(arr, p, analyze(arr, p));
      render = render_classify;
    } else if (tf->parsed()) {
      report = tf_report(arr, load_pencil(arr, pencil_path), fixes);
      render = render_tf;
    } else if (check->parsed()) {
      std::vector<int> cl = clusters.empty() ? std::vector<int>{} : parse_int_list(clusters);
      report = check_report(arr, load_pencil(arr, pencil_path), cl);
      render = render_check;
    } else if (reconstruct->parsed()) {
      report = reconstruct_report(arr, load_subspace(subspace_path, arr.size()));
      render = render_reconstruct;
    } else {
      report = ray_report(arr, parse_rat_list(exponents), with_tf);
      render = render_ray;
    }
    if (json)
      out << report.dump(2) << "\n";
    else
      render(report, out);
    if (strict && conditional_in(report))
      return fail(err, exit_conditional, "conditional", "the result depends on unresolved irrational special fibers");
    return exit_ok;
  } catch (const ParseError &e) {
    return fail(err, exit_parse, "parse", e.what());
  } catch (const InvariantError &e) {
    return fail(err, exit_invariant, "invariant", e.what());
  } catch (const MathError &e) {
    return fail(err, exit_math, "math", e.what());
  }
}

}  // namespace pc
