#include "doctest.h"

#include "pencilchar/fileformat.hpp"

#include <algorithm>
#include <map>
#include <set>

using namespace pc;

namespace {

ArrangementFile fixture(const std::string &name) { return load_arrangement(std::string(PC_FIXTURE_DIR) + "/" + name); }

Pencil fixture_pencil(const Arrangement &arr, const std::string &name) {
  return load_pencil(arr, std::string(PC_FIXTURE_DIR) + "/" + name);
}

std::set<std::string> labels(const Arrangement &arr, const FiberDivisor &f) {
  std::set<std::string> s;
  for (const auto &[j, m] : f.members) s.insert(arr[j].label + "^" + std::to_string(m));
  return s;
}

// Sum over j of row weights times E(j, i), for every column i.
bool annihilates(const std::vector<int> &weights, const IntMatrix &E) {
  for (std::size_t i = 0; i < E.cols(); ++i) {
    Int s = 0;
    for (std::size_t j = 0; j < E.rows(); ++j) s += weights[j] * E(j, i);
    if (s != 0) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("conic arrangement: three fibers, nothing special") {
  auto f = fixture("ex2.json");
  auto pencil = fixture_pencil(f.arr, "ex2_pencil.json");
  auto cls = analyze(f.arr, pencil);
  REQUIRE(cls.k() == 3);
  CHECK(cls.minimal);
  CHECK_FALSE(cls.special_flag);
  CHECK(cls.special.empty());
  CHECK_FALSE(cls.conditional);

  std::map<std::string, std::set<std::string>> fibers;
  for (const auto &fd : cls.B) fibers[fd.b.to_string()] = labels(f.arr, fd);
  CHECK(fibers["(0:1)"] == std::set<std::string>{"C1^2"});
  CHECK(fibers["(1:0)"] == std::set<std::string>{"C2^1", "C3^1"});
  CHECK(fibers["(1:1)"] == std::set<std::string>{"C4^1"});

  auto t = pullback_subtorus(f.arr, cls);
  CHECK(t.dimension() == 2);
  CHECK(rank(t.E) == 2);
  CHECK(annihilates({1, 2, 0, 2}, t.E));
  CHECK(annihilates({0, 1, -1, 0}, t.E));
  CHECK(t.in_character_torus(f.arr.degrees()));
}

TEST_CASE("reduced-fiber pencil of f_W has one multiple special fiber") {
  auto f = fixture("deleted_b3.json");
  auto pencil = fixture_pencil(f.arr, "deleted_b3_fw.json");
  auto cls = analyze(f.arr, pencil);
  REQUIRE(cls.k() == 2);
  CHECK_FALSE(cls.minimal);
  CHECK(cls.special_flag);
  REQUIRE(cls.special.size() == 1);
  const auto &s = cls.special[0];
  std::set<std::string> part;
  for (const auto &[j, m] : s.arrangement_part) part.insert(f.arr[j].label + "^" + std::to_string(m));
  CHECK(part == std::set<std::string>{"L6^1", "L8^1"});
  CHECK(s.m_prime == 1);
  CHECK(s.m_double_prime == 2);
  CHECK(s.new_part == std::vector<ProfileEntry>{{2, 1}});  // a doubled line
  CHECK(s.multiple() == false);

  auto t = pullback_subtorus(f.arr, cls);
  REQUIRE(t.dimension() == 1);
  std::vector<Int> col;
  for (std::size_t j = 0; j < 8; ++j) col.push_back(t.E(j, 0));
  CHECK(col == std::vector<Int>{1, -1, -1, 1, 2, 0, -2, 0});
  CHECK(t.to_string() == "(t,t^-1,t^-1,t,t^2,1,t^-2,1)");
}

TEST_CASE("partition 15|26|38 of the deleted B3") {
  auto f = fixture("deleted_b3.json");
  auto pencil = fixture_pencil(f.arr, "deleted_b3_15_26_38.json");
  auto cls = analyze(f.arr, pencil);
  REQUIRE(cls.k() == 3);
  CHECK_FALSE(cls.special_flag);
  CHECK(f.arr[3].label == "L4");
  CHECK(cls.placements[3].kind == PlacementKind::horizontal);
  std::set<std::set<std::string>> blocks;
  for (const auto &fd : cls.B) blocks.insert(labels(f.arr, fd));
  CHECK(blocks == std::set<std::set<std::string>>{{"L1^1", "L5^1"}, {"L2^1", "L6^1"}, {"L3^1", "L8^1"}});
  CHECK(cls.special.empty());
}

TEST_CASE("A_m pencils: special fiber at (1:1) with m' = 1 and m'' = m") {
  for (int m : {2, 3}) {
    CAPTURE(m);
    auto f = fixture("a" + std::to_string(m) + ".json");
    CHECK(f.arr.size() == static_cast<std::size_t>(3 * m + 2));
    auto pencil = fixture_pencil(f.arr, "a" + std::to_string(m) + "_pencil.json");
    auto cls = analyze(f.arr, pencil);
    REQUIRE(cls.k() == 2);
    REQUIRE(cls.special.size() == 1);
    const auto &s = cls.special[0];
    CHECK(s.c == P1Point::make(1, 1));
    CHECK(s.m_prime == 1);
    CHECK(s.m_double_prime == m);
    CHECK(s.arrangement_part.size() == static_cast<std::size_t>(m));
    for (const auto &[j, e] : s.arrangement_part) CHECK(f.arr[j].label.rfind("z12:", 0) == 0);
    CHECK_FALSE(cls.conditional);
  }
}

TEST_CASE("quartic fibers of the A_2 pencil: three special fibers") {
  auto f = fixture("ex69.json");
  CHECK(f.arr.warnings().empty());
  auto pencil = fixture_pencil(f.arr, "ex69_pencil.json");
  auto cls = analyze(f.arr, pencil);
  REQUIRE(cls.k() == 2);
  REQUIRE(cls.special.size() == 3);
  for (const auto &s : cls.special) {
    CHECK(s.m_prime == 1);
    CHECK(s.m_double_prime == 2);
    CHECK(s.arrangement_part.size() == 2);
  }
}

TEST_CASE("base-locus data of B3 by hand") {
  auto f = fixture("b3.json");
  auto pencil = fixture_pencil(f.arr, "b3_pencil.json");
  auto rep = base_locus_identities(f.arr, pencil, analyze(f.arr, pencil));
  // Three coordinate points with n_p = 2 and four points (1:+-1:+-1) with n_p = 1.
  std::multiset<int> n, mult;
  for (const auto &p : rep.points) {
    n.insert(p.fiber_multiplicity.front());
    mult.insert(p.curve_multiplicity);
  }
  CHECK(n == std::multiset<int>{1, 1, 1, 1, 2, 2, 2});
  CHECK(mult == std::multiset<int>{3, 3, 3, 3, 4, 4, 4});
  CHECK(rep.multiplicity_sum == 10);
  CHECK(rep.intersection_sum == 16);
}

TEST_CASE("base-locus identities") {
  for (auto [arr_name, pencil_name] : {std::pair{"ceva2.json", "ceva2_pencil.json"},
                                      std::pair{"ceva3.json", "ceva3_pencil.json"},
                                      std::pair{"b3.json", "b3_pencil.json"}}) {
    CAPTURE(arr_name);
    auto f = fixture(arr_name);
    auto pencil = fixture_pencil(f.arr, pencil_name);
    auto cls = analyze(f.arr, pencil);
    REQUIRE(cls.minimal);
    CHECK(cls.k() == 3);
    auto rep = base_locus_identities(f.arr, pencil, cls);
    CHECK(rep.constant_multiplicity);
    CHECK(rep.sum_matches);
    CHECK(rep.component_sum_matches);
    CHECK(rep.intersection_sum == Int(rep.D) * rep.D);
  }
}

TEST_CASE("self-intersection of the pencil curve") {
  auto b3 = fixture("b3.json");
  auto pb3 = fixture_pencil(b3.arr, "b3_pencil.json");
  CHECK(self_intersection_auto(b3.arr, pb3, analyze(b3.arr, pb3)) == -3);
  // 81 - 3 * 16 - 4 * 9 counted by hand.
  CHECK(self_intersection(b3.arr, {4, 4, 4, 3, 3, 3, 3}) == -3);

  auto c2 = fixture("ceva2.json");
  auto pc2 = fixture_pencil(c2.arr, "ceva2_pencil.json");
  CHECK(self_intersection_auto(c2.arr, pc2, analyze(c2.arr, pc2)) == 0);

  auto c3 = fixture("ceva3.json");
  auto pc3 = fixture_pencil(c3.arr, "ceva3_pencil.json");
  CHECK(self_intersection_auto(c3.arr, pc3, analyze(c3.arr, pc3)) == 0);

  auto ex2 = fixture("ex2.json");
  CHECK(self_intersection(ex2.arr, {3, 3, 3, 3}) == -11);
  CHECK_THROWS_AS(self_intersection(ex2.arr, {0}), MathError);
}

TEST_CASE("pencil construction rejects bad input") {
  auto f = fixture("deleted_b3.json");
  CHECK_THROWS_AS(Pencil::make(parse_rational_form("x^2"), parse_rational_form("x*y")), MathError);
  CHECK_THROWS_AS(Pencil::make(parse_rational_form("x"), parse_rational_form("2*x")), MathError);
  CHECK_THROWS_AS(Pencil::make(parse_rational_form("x"), parse_rational_form("y^2")), MathError);
  CHECK_THROWS_AS(pencil_from_blocks(f.arr, {{{0, 1}}}), MathError);
  CHECK_THROWS_AS(pencil_from_blocks(f.arr, {{{0, 1}}, {{0, 1}}}), MathError);
  // Third block outside the span.
  CHECK_THROWS_AS(pencil_from_blocks(f.arr, {{{0, 1}}, {{2, 1}}, {{1, 1}}}), MathError);

  auto a3 = fixture("a3.json");
  auto i1 = *a3.arr.index_of("z12:1");
  auto i2 = *a3.arr.index_of("z13:1");
  // z12:1 alone is not defined over the rationals.
  CHECK_THROWS_AS(pencil_from_blocks(a3.arr, {{{i1, 1}}, {{i2, 1}}}), MathError);
}

TEST_CASE("search on the deleted B3 finds the five 3-block pencils") {
  auto f = fixture("deleted_b3.json");
  SearchCaps caps;
  caps.max_multiplicity = 1;
  caps.min_blocks = 3;
  caps.max_blocks = 3;
  auto found = pencil_search(f.arr, caps);
  std::set<std::set<std::set<std::string>>> partitions;
  for (const auto &p : found) {
    CHECK(p.classification.k() == 3);
    CHECK_FALSE(p.classification.special_flag);
    std::set<std::set<std::string>> part;
    for (const auto &fd : p.classification.B) part.insert(labels(f.arr, fd));
    partitions.insert(part);
  }
  auto L = [](std::initializer_list<int> idx) {
    std::set<std::string> s;
    for (int i : idx) s.insert("L" + std::to_string(i) + "^1");
    return s;
  };
  std::set<std::set<std::set<std::string>>> expected{
      {L({1, 5}), L({2, 6}), L({3, 8})}, {L({2, 8}), L({3, 6}), L({4, 5})}, {L({1, 4}), L({2, 3}), L({6, 8})},
      {L({1, 6}), L({2, 7}), L({4, 8})}, {L({1, 8}), L({3, 7}), L({4, 6})}};
  CHECK(partitions == expected);
}

TEST_CASE("search finds f_W among k = 2 pencils with a special fiber") {
  auto f = fixture("deleted_b3.json");
  SearchCaps caps;
  caps.max_multiplicity = 2;
  caps.min_blocks = 2;
  caps.max_blocks = 2;
  auto found = pencil_search(f.arr, caps);
  auto fw = fixture_pencil(f.arr, "deleted_b3_fw.json");
  bool seen = false;
  for (const auto &p : found)
    if (span_key(p.pencil) == span_key(fw)) seen = true;
  CHECK(seen);
}
