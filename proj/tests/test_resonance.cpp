#include "doctest.h"

#include "pencilchar/fileformat.hpp"
#include "pencilchar/resonance.hpp"

#include <random>

using namespace pc;

namespace {

ArrangementFile fixture(const std::string &name) { return load_arrangement(std::string(PC_FIXTURE_DIR) + "/" + name); }

Pencil fixture_pencil(const Arrangement &arr, const std::string &name) {
  return load_pencil(arr, std::string(PC_FIXTURE_DIR) + "/" + name);
}

RatMatrix rows(const std::vector<std::vector<long>> &r) {
  RatMatrix m(0, r.empty() ? 0 : r[0].size());
  for (const auto &row : r) {
    std::vector<Rat> v(row.begin(), row.end());
    m.append_row(v);
  }
  return m;
}

TernaryForm product(std::initializer_list<const char *> factors) {
  TernaryForm f = TernaryForm::constant(1);
  for (const char *t : factors) f = f * parse_rational_form(t);
  return f;
}

bool same_span(const Pencil &a, const Pencil &b) { return a.degree() == b.degree() && span_key(a) == span_key(b); }

bool is_zero(const std::vector<Rat> &v) {
  return std::all_of(v.begin(), v.end(), [](const Rat &x) { return x == 0; });
}

// Deleted B3 pencil from a partition written with 1-based line numbers.
Pencil partition_pencil(const Arrangement &arr, std::initializer_list<std::pair<int, int>> blocks) {
  std::vector<Block> b;
  for (auto [i, j] : blocks) b.push_back({{std::size_t(i - 1), 1}, {std::size_t(j - 1), 1}});
  return pencil_from_blocks(arr, b);
}

const std::vector<std::vector<std::pair<int, int>>> kPartitions{
    {{1, 5}, {2, 6}, {3, 8}}, {{2, 8}, {3, 6}, {4, 5}}, {{1, 4}, {2, 3}, {6, 8}},
    {{1, 6}, {2, 7}, {4, 8}}, {{1, 8}, {3, 7}, {4, 6}}};

}  // namespace

TEST_CASE("triangle: one nonzero product and every line is maximal isotropic") {
  auto f = fixture("triangle.json");
  auto cs = cup_structure(f.arr);
  CHECK(cs.affine.size() == 2);
  CHECK(cs.h2_dimension() == 1);
  CHECK_FALSE(is_zero(cup_product(cs, {1, 0, -1}, {0, 1, -1})));
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> c(-5, 5);
  for (int i = 0; i < 20; ++i) {
    long a = c(rng), b = c(rng);
    if (a == 0 && b == 0) continue;
    auto flags = is_maximal_isotropic(cs, rows({{a, b, -a - b}}));
    CHECK(flags.isotropic);
    CHECK(flags.maximal);
  }
}

TEST_CASE("cup product is bilinear and antisymmetric") {
  auto f = fixture("deleted_b3.json");
  auto cs = cup_structure(f.arr);
  // Seven affine lines: six triple points give six relations, the quadruple point three,
  // and three parallel classes at infinity give 1 + 1 + 3 more.
  CHECK(cs.pivots.size() + cs.h2_dimension() == 21);
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> c(-4, 4);
  auto random_vec = [&] {
    ResidueVector v(8);
    Rat s = 0;
    for (int j = 0; j < 7; ++j) {
      v[j] = c(rng);
      s += v[j];
    }
    v[7] = -s;
    return v;
  };
  for (int trial = 0; trial < 40; ++trial) {
    auto u = random_vec(), v = random_vec(), w = random_vec();
    CHECK(is_zero(cup_product(cs, v, v)));
    auto vw = cup_product(cs, v, w), wv = cup_product(cs, w, v);
    for (std::size_t i = 0; i < vw.size(); ++i) CHECK(vw[i] == -wv[i]);
    ResidueVector sum(8);
    for (int j = 0; j < 8; ++j) sum[j] = u[j] + 3 * v[j];
    auto lhs = cup_product(cs, sum, w), uw = cup_product(cs, u, w);
    for (std::size_t i = 0; i < lhs.size(); ++i) CHECK(lhs[i] == uw[i] + 3 * vw[i]);
  }
}

TEST_CASE("relations annihilate exactly the listed generators") {
  auto f = fixture("deleted_b3.json");
  auto cs = cup_structure(f.arr);
  auto gen = [&](std::size_t a, std::size_t b) {
    std::vector<Rat> w(cs.pairs.size());
    w[cs.pair_index(a, b)] = 1;
    return w;
  };
  for (const auto &cls : cs.parallel)
    for (std::size_t i = 0; i < cls.size(); ++i)
      for (std::size_t j = i + 1; j < cls.size(); ++j) CHECK(is_zero(cs.reduce(gen(cls[i], cls[j]))));
  for (const auto &cls : cs.concurrent) {
    auto w = gen(cls[0], cls[1]);
    auto w2 = gen(cls[0], cls[2]), w3 = gen(cls[1], cls[2]);
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = w[i] - w2[i] + w3[i];
    CHECK(is_zero(cs.reduce(w)));
    CHECK_FALSE(is_zero(cs.reduce(gen(cls[0], cls[1]))));
  }
  // L1 = x and L3 = y meet at the affine double point (0:0:1).
  CHECK_FALSE(is_zero(cs.reduce(gen(0, 2))));
}

TEST_CASE("the residue vector of f_W spans a maximal isotropic line") {
  auto f = fixture("deleted_b3.json");
  auto cs = cup_structure(f.arr);
  auto flags = is_maximal_isotropic(cs, rows({{1, -1, -1, 1, 2, 0, -2, 0}}));
  CHECK(flags.isotropic);
  CHECK(flags.maximal);
  CHECK(flags.annihilator_dimension == 1);

  auto a2 = fixture("a2.json");
  auto cls = analyze(a2.arr, fixture_pencil(a2.arr, "a2_pencil.json"));
  auto E = subspace_from_pencil(a2.arr, cls);
  CHECK(E.rows() == 1);
  CHECK(is_maximal_isotropic(cup_structure(a2.arr), E).maximal);

  // A sum of two loops around lines through a double point is not isotropic with a third.
  auto not_iso = is_maximal_isotropic(cs, rows({{1, 0, -1, 0, 0, 0, 0, 0}, {0, 1, 0, 0, 0, -1, 0, 0}}));
  CHECK_FALSE(not_iso.maximal);
}

TEST_CASE("3-block pencils give 2-dimensional maximal isotropic subspaces") {
  auto f = fixture("deleted_b3.json");
  auto cs = cup_structure(f.arr);
  for (const auto &part : kPartitions) {
    Pencil p = partition_pencil(f.arr, {part[0], part[1], part[2]});
    auto cls = analyze(f.arr, p);
    REQUIRE(cls.k() == 3);
    auto E = subspace_from_pencil(f.arr, cls);
    auto flags = is_maximal_isotropic(cs, E);
    CHECK(flags.dimension == 2);
    CHECK(flags.isotropic);
    CHECK(flags.maximal);
  }
  for (auto [a, p] : {std::pair{"b3.json", "b3_pencil.json"}, std::pair{"ceva2.json", "ceva2_pencil.json"},
                      std::pair{"ceva3.json", "ceva3_pencil.json"}}) {
    CAPTURE(a);
    auto g = fixture(a);
    auto cls = analyze(g.arr, fixture_pencil(g.arr, p));
    auto flags = is_maximal_isotropic(cup_structure(g.arr), subspace_from_pencil(g.arr, cls));
    CHECK(flags.dimension == 2);
    CHECK(flags.maximal);
  }
}

TEST_CASE("subspace to pencil round trip") {
  auto f = fixture("deleted_b3.json");
  for (const auto &part : kPartitions) {
    Pencil p = partition_pencil(f.arr, {part[0], part[1], part[2]});
    auto back = pencil_from_subspace(f.arr, subspace_from_pencil(f.arr, analyze(f.arr, p)));
    CHECK(same_span(back.pencil, p));
    CHECK(back.blocks.size() == 3);
  }
  Pencil p15 = fixture_pencil(f.arr, "deleted_b3_15_26_38.json");
  auto back = pencil_from_subspace(f.arr, subspace_from_pencil(f.arr, analyze(f.arr, p15)));
  CHECK(same_span(back.pencil, Pencil::make(product({"x", "x-y-z"}), product({"x-z", "x-y"}))));

  for (auto [a, p] : {std::pair{"b3.json", "b3_pencil.json"}, std::pair{"ceva2.json", "ceva2_pencil.json"},
                      std::pair{"ceva3.json", "ceva3_pencil.json"}, std::pair{"ex2.json", "ex2_pencil.json"}}) {
    CAPTURE(a);
    auto g = fixture(a);
    Pencil pen = fixture_pencil(g.arr, p);
    auto r = pencil_from_subspace(g.arr, subspace_from_pencil(g.arr, analyze(g.arr, pen)));
    CHECK(same_span(r.pencil, pen));
  }
  // The degree-2 curves of the conic arrangement keep their multiplicities.
  auto ex2 = fixture("ex2.json");
  auto r = pencil_from_subspace(ex2.arr, subspace_from_pencil(ex2.arr, analyze(ex2.arr, fixture_pencil(ex2.arr, "ex2_pencil.json"))));
  bool doubled_c1 = false;
  for (const auto &blk : r.blocks)
    for (const auto &[j, m] : blk)
      if (j == 0) doubled_c1 = m == 2;
  CHECK(doubled_c1);
}

TEST_CASE("pencil reconstruction errors") {
  auto f = fixture("deleted_b3.json");
  CHECK_THROWS_AS(pencil_from_subspace(f.arr, RatMatrix(0, 8)), MathError);
  CHECK_THROWS_AS(pencil_from_subspace(f.arr, rows({{1, -1, -1, 1, 2, 0, -2, 0}})), MathError);
  CHECK_THROWS_AS(pencil_from_subspace(f.arr, rows({{1, -1, 0, 0, 0, 0, 0, 0}, {0, 0, 1, 0, 0, 0, 0, -1}})), MathError);
  CHECK_THROWS_AS(pencil_from_subspace(f.arr, rows({{1, 0, 0, 0, 0, 0, 0, 0}, {0, 1, 0, 0, 0, 0, 0, -1}})), MathError);
  auto ex2 = fixture("ex2.json");
  CHECK_THROWS_AS(cup_structure(ex2.arr), MathError);
}

TEST_CASE("ray to map") {
  auto f = fixture("deleted_b3.json");
  ResidueVector m{1, -1, -1, 1, 2, 0, -2, 0};
  auto ray = ray_to_map(f.arr, m);
  CHECK(ray.exponents == std::vector<Int>{1, -1, -1, 1, 2, 0, -2, 0});
  CHECK(ray.numerator == product({"x", "y-z", "x-y-z", "x-y-z"}));
  CHECK(ray.denominator == product({"x-z", "y", "x-y+z", "x-y+z"}));
  CHECK(ray.subtorus.to_string() == "(t,t^-1,t^-1,t,t^2,1,t^-2,1)");
  CHECK(ray.connectivity_note.find("Bertini") != std::string::npos);

  auto scaled = ray_to_map(f.arr, {2, -2, -2, 2, 4, 0, -4, 0});
  CHECK(scaled.exponents == ray.exponents);
  auto flipped = ray_to_map(f.arr, {Rat(-1, 3), Rat(1, 3), Rat(1, 3), Rat(-1, 3), Rat(-2, 3), 0, Rat(2, 3), 0});
  CHECK(flipped.exponents == ray.exponents);

  // Residue extraction through the pencil of the map returns the exponents.
  auto cls = analyze(f.arr, Pencil::make(ray.numerator, ray.denominator));
  auto E = subspace_from_pencil(f.arr, cls);
  REQUIRE(E.rows() == 1);
  for (std::size_t j = 0; j < 8; ++j) CHECK(E(0, j) == Rat(ray.exponents[j]));

  CHECK_THROWS_AS(ray_to_map(f.arr, {1, 0, 0, 0, 0, 0, 0, 0}), MathError);
  CHECK_THROWS_AS(ray_to_map(f.arr, ResidueVector(8)), MathError);
}
