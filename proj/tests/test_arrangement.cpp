#include "doctest.h"

#include "pencilchar/fileformat.hpp"

#include <algorithm>
#include <map>

using namespace pc;

namespace {

ArrangementFile fixture(const std::string &name) { return load_arrangement(std::string(PC_FIXTURE_DIR) + "/" + name); }

std::map<std::size_t, int> local_dimensions(const ArrangementFile &f) {
  std::map<std::size_t, int> dims;  // dimension -> count
  for (const auto &mp : local_pencil_points(f.arr, f.extra_points))
    if (mp.gives_local_component()) ++dims[mp.k() - 1];
  return dims;
}

}  // namespace

TEST_CASE("fixtures load with their infinity lines") {
  auto b = fixture("deleted_b3.json");
  CHECK(b.arr.size() == 8);
  CHECK(b.arr.is_line_arrangement());
  REQUIRE(b.arr.infinity());
  CHECK(b.arr[*b.arr.infinity()].label == "L8");
  CHECK_FALSE(b.infinity_auto);
  CHECK(b.arr.warnings().empty());

  auto ex2 = fixture("ex2.json");
  CHECK(ex2.arr.degrees() == std::vector<int>{1, 1, 1, 2});
  CHECK(ex2.arr.total_degree() == 5);
  CHECK_FALSE(ex2.arr.is_line_arrangement());
}

TEST_CASE("Galois orbits of cyclotomic lines") {
  auto a3 = fixture("a3.json");
  CHECK(a3.arr.size() == 11);
  // z1, z2, and for each of z12, z13, z23 one rational line plus one orbit of two.
  CHECK(a3.arr.units().size() == 8);
  auto u = a3.arr[*a3.arr.index_of("z12:1")].unit;
  CHECK(a3.arr[*a3.arr.index_of("z12:2")].unit == u);
  CHECK(a3.arr.units()[u].form == parse_rational_form("x^2+x*y+y^2"));

  auto c3 = fixture("ceva3.json");
  CHECK(c3.arr.units().size() == 6);

  std::vector<ComponentInput> lonely{{"a", "x-w*y"}, {"b", "z"}};
  CHECK_THROWS_AS(Arrangement::build(lonely, 3), InvariantError);
}

TEST_CASE("structural errors") {
  CHECK_THROWS_AS(Arrangement::build({}), InvariantError);
  CHECK_THROWS_AS(Arrangement::build({{"a", "x"}, {"a", "y"}}), InvariantError);
  CHECK_THROWS_AS(Arrangement::build({{"a", "x"}, {"b", "2*x"}}), InvariantError);
  CHECK_THROWS_AS(Arrangement::build({{"a", "x"}, {"b", "y"}}, 1, std::string("c")), InvariantError);
  CHECK_THROWS_AS(Arrangement::build({{"a", "x^2-y*z"}, {"b", "y"}}, 1, std::string("a")), InvariantError);
  CHECK_THROWS_AS(parse_arrangement("{\"components\": 3}"), ParseError);
  CHECK_THROWS_AS(parse_arrangement("{not json"), ParseError);
  CHECK_THROWS_AS(parse_arrangement("{\"components\": [{\"label\": \"a\", \"poly\": \"x+\"}]}"), ParseError);
}

TEST_CASE("reducible components are reported") {
  auto arr = Arrangement::build({{"q", "x^2-y^2"}, {"z", "z"}});
  REQUIRE(arr.warnings().size() == 1);
  CHECK(arr.warnings()[0].find("'q'") != std::string::npos);
}

TEST_CASE("automatic infinity picks the first rational line") {
  auto f = parse_arrangement(R"({"components": [{"label": "c", "poly": "x^2-y*z"}, {"label": "l", "poly": "y"}]})");
  CHECK(f.infinity_auto);
  REQUIRE(f.arr.infinity());
  CHECK(*f.arr.infinity() == 1);
}

TEST_CASE("local components from multiple points") {
  // Six triple points and one quadruple point.
  CHECK(local_dimensions(fixture("deleted_b3.json")) == std::map<std::size_t, int>{{2, 6}, {3, 1}});
  CHECK(local_dimensions(fixture("triangle.json")).empty());
  // B3: four triple points and three quadruple points.
  CHECK(local_dimensions(fixture("b3.json")) == std::map<std::size_t, int>{{2, 4}, {3, 3}});
  // Ceva(3): the nine lines meet in twelve triple points.
  CHECK(local_dimensions(fixture("ceva3.json")) == std::map<std::size_t, int>{{2, 12}});
}

TEST_CASE("conics through a common point give a local pencil only with 2-dimensional span") {
  // The conics x z = a y^2 all pass through (1:0:0) and span a 2-dimensional space.
  auto f = parse_arrangement(R"({"components": [
    {"label": "q1", "poly": "x*z-y^2"}, {"label": "q2", "poly": "x*z-2*y^2"}, {"label": "q3", "poly": "x*z+y^2"},
    {"label": "z", "poly": "z"}], "extra_points": [[1, 0, 0]]})");
  bool found = false;
  for (const auto &mp : local_pencil_points(f.arr, f.extra_points))
    if (mp.degree == 2) {
      found = true;
      CHECK(mp.k() == 3);
      CHECK(mp.span_dim == 2);
      CHECK(mp.gives_local_component());
    }
  CHECK(found);
}

TEST_CASE("h1 model") {
  auto f = fixture("ex2.json");
  auto h = h1_model(f.arr);
  CHECK(h.rank() == 3);
  CHECK(h.torsion_order == 1);
  CHECK(h.free_basis == std::vector<std::size_t>{1, 2, 3});
  auto g = Arrangement::build({{"a", "x^2-y*z"}, {"b", "x^2+y*z"}});
  auto hg = h1_model(g);
  CHECK(hg.torsion_order == 2);
  REQUIRE(hg.smith_coordinates);
}
