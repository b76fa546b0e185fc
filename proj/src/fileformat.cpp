#include "pencilchar/fileformat.hpp"

#include "json.hpp"

#include <fstream>
#include <sstream>

namespace pc {

namespace {

using nlohmann::json;

json parse_json(const std::string &text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error &e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
}

const json &field(const json &obj, const char *name) {
  if (!obj.is_object() || !obj.contains(name)) throw ParseError(std::string("missing field '") + name + "'");
  return obj.at(name);
}

std::string string_field(const json &obj, const char *name) {
  const json &v = field(obj, name);
  if (!v.is_string()) throw ParseError(std::string("field '") + name + "' must be a string");
  return v.get<std::string>();
}

Rat rational_entry(const json &v) {
  if (v.is_number_integer()) return Rat(v.get<long>());
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    try {
      Rat r(s);
      if (r.get_den() == 0) throw ParseError("zero denominator in '" + s + "'");
      r.canonicalize();
      return r;
    } catch (const ParseError &) {
      throw;
    } catch (const std::exception &) {
      throw ParseError("'" + s + "' is not a rational number");
    }
  }
  throw ParseError("matrix entries must be integers or rational strings");
}

}  // namespace

std::string read_text_file(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read '" + path.string() + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

ArrangementFile parse_arrangement(const std::string &json_text) {
  json doc = parse_json(json_text);
  const json &comps = field(doc, "components");
  if (!comps.is_array()) throw ParseError("'components' must be an array");
  std::vector<ComponentInput> inputs;
  for (const auto &c : comps) inputs.push_back({string_field(c, "label"), string_field(c, "poly")});

  unsigned root_order = 1;
  if (doc.contains("cyclotomic")) {
    const json &n = doc.at("cyclotomic");
    if (!n.is_number_integer() || n.get<long long>() < 1 || n.get<long long>() > 64)
      throw ParseError("'cyclotomic' must be an integer between 1 and 64");
    root_order = static_cast<unsigned>(n.get<long>());
  }
  std::optional<std::string> infinity;
  if (doc.contains("infinity")) infinity = string_field(doc, "infinity");

  ArrangementFile file{Arrangement::build(inputs, root_order, infinity), {}, false};
  if (!infinity) file.infinity_auto = file.arr.designate_infinity();

  if (doc.contains("extra_points")) {
    const json &pts = doc.at("extra_points");
    if (!pts.is_array()) throw ParseError("'extra_points' must be an array");
    for (const auto &p : pts) {
      if (!p.is_array() || p.size() != 3) throw ParseError("extra points are integer triples");
      std::array<Rat, 3> q;
      for (int i = 0; i < 3; ++i) {
        if (!p[i].is_number_integer()) throw ParseError("extra points are integer triples");
        q[i] = Rat(p[i].get<long>());
      }
      if (q[0] == 0 && q[1] == 0 && q[2] == 0) throw ParseError("extra point (0,0,0) is not a projective point");
      file.extra_points.push_back(ProjPoint::from(q));
    }
  }
  return file;
}

ArrangementFile load_arrangement(const std::filesystem::path &path) { return parse_arrangement(read_text_file(path)); }

Pencil parse_pencil(const Arrangement &arr, const std::string &json_text) {
  json doc = parse_json(json_text);
  if (doc.contains("blocks")) {
    const json &bl = doc.at("blocks");
    if (!bl.is_array()) throw ParseError("'blocks' must be an array");
    std::vector<Block> blocks;
    for (const auto &b : bl) {
      const json &mem = field(b, "members"), &mul = field(b, "multiplicities");
      if (!mem.is_array() || !mul.is_array() || mem.size() != mul.size())
        throw ParseError("each block needs equally long 'members' and 'multiplicities'");
      Block blk;
      for (std::size_t i = 0; i < mem.size(); ++i) {
        if (!mem[i].is_string() || !mul[i].is_number_integer()) throw ParseError("malformed block entry");
        auto idx = arr.index_of(mem[i].get<std::string>());
        if (!idx) throw ParseError("unknown component label '" + mem[i].get<std::string>() + "'");
        blk.emplace_back(*idx, static_cast<int>(mul[i].get<long>()));
      }
      blocks.push_back(std::move(blk));
    }
    return pencil_from_blocks(arr, blocks);
  }
  return Pencil::make(parse_rational_form(string_field(doc, "P")), parse_rational_form(string_field(doc, "Q")));
}

Pencil load_pencil(const Arrangement &arr, const std::filesystem::path &path) {
  return parse_pencil(arr, read_text_file(path));
}

RatMatrix parse_subspace(const std::string &json_text, std::size_t components) {
  json doc = parse_json(json_text);
  if (doc.is_object()) doc = field(doc, "rows");
  if (!doc.is_array()) throw ParseError("a subspace is a list of rows");
  RatMatrix m(0, components);
  for (const auto &row : doc) {
    if (!row.is_array() || row.size() != components)
      throw ParseError("each subspace row needs " + std::to_string(components) + " entries");
    std::vector<Rat> r;
    for (const auto &v : row) r.push_back(rational_entry(v));
    m.append_row(r);
  }
  return m;
}

RatMatrix load_subspace(const std::filesystem::path &path, std::size_t components) {
  return parse_subspace(read_text_file(path), components);
}

}  // namespace pc
