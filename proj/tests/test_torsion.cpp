#include "doctest.h"

#include "pencilchar/fileformat.hpp"
#include "pencilchar/torsion.hpp"

#include <random>
#include <set>

using namespace pc;

namespace {

ArrangementFile fixture(const std::string &name) { return load_arrangement(std::string(PC_FIXTURE_DIR) + "/" + name); }

Pencil fixture_pencil(const Arrangement &arr, const std::string &name) {
  return load_pencil(arr, std::string(PC_FIXTURE_DIR) + "/" + name);
}

std::vector<QmodZ> q(std::initializer_list<std::pair<long, long>> v) {
  std::vector<QmodZ> out;
  for (auto [n, d] : v) out.emplace_back(n, d);
  return out;
}

// Independent check of a lift: rho on every kernel vector equals chi o theta,
// and the degree relation holds.
void check_lift(const Arrangement &arr, const ThetaData &d, const TfGroup &tf, const LiftedCharacter &lc) {
  CHECK(lc.rho.in_character_torus(arr.degrees()));
  for (std::size_t l = 0; l < d.kernel.cols(); ++l) {
    QmodZ lhs;
    for (std::size_t a = 0; a < d.affine.size(); ++a) lhs += d.kernel(a, l) * lc.rho.exponents[d.affine[a]];
    auto th = d.theta_of(d.kernel.column(l));
    CHECK(lhs == evaluate(tf, lc.rho_tilde, th));
  }
}

TernaryForm random_line(std::mt19937 &rng) {
  std::uniform_int_distribution<int> c(-3, 3);
  for (;;) {
    int u = c(rng), v = c(rng), w = c(rng);
    if (u || v || w) return TernaryForm::linear(u, v, w).primitive();
  }
}

// Arrangement of the given distinct lines; nullopt when two coincide.
std::optional<Arrangement> lines_arrangement(const std::vector<TernaryForm> &lines) {
  std::vector<ComponentInput> in;
  for (std::size_t i = 0; i < lines.size(); ++i) in.push_back({"l" + std::to_string(i), lines[i].to_string()});
  try {
    auto arr = Arrangement::build(in, 1, std::string("l0"));
    return arr;
  } catch (const InvariantError &) {
    return std::nullopt;
  }
}

}  // namespace

TEST_CASE("kernel relation and theta of f_W") {
  auto f = fixture("deleted_b3.json");
  auto cls = analyze(f.arr, fixture_pencil(f.arr, "deleted_b3_fw.json"));
  auto d = theta(f.arr, cls);
  CHECK(d.affine == std::vector<std::size_t>{0, 1, 2, 3, 4, 5, 6});
  // alpha1 + alpha4 + 2 alpha5 = alpha2 + alpha3 + 2 alpha7
  CHECK(d.relations == IntMatrix::from_rows({{1, -1, -1, 1, 2, 0, -2}}));
  CHECK(d.kernel.cols() == 6);
  CHECK((d.relations * d.kernel).is_zero());
  CHECK(d.moduli == std::vector<Int>{2});
  CHECK(d.reference == P1Point::infinity());
  // theta = alpha2 + alpha3 - alpha6 mod 2 on the unit loops.
  std::vector<Int> expect{0, 1, 1, 0, 0, 1, 0};
  for (std::size_t a = 0; a < 7; ++a) {
    std::vector<Int> e(7, Int(0));
    e[a] = 1;
    CHECK(d.theta_of(e)[0] == expect[a]);
  }
}

TEST_CASE("T(f) of f_W and the lifted character") {
  auto f = fixture("deleted_b3.json");
  auto cls = analyze(f.arr, fixture_pencil(f.arr, "deleted_b3_fw.json"));
  auto d = theta(f.arr, cls);
  auto tf = compute_Tf(d);
  CHECK(tf.group.to_string() == "Z/2");
  auto chars = characters_of_Tf(tf);
  REQUIRE(chars.size() == 2);
  CHECK(is_trivial(chars[0]));
  auto lc = lift_character(f.arr, cls, d, tf, chars[1]);
  check_lift(f.arr, d, tf, lc);
  CHECK(lc.rho.exponents == q({{0, 1}, {1, 2}, {1, 2}, {0, 1}, {0, 1}, {1, 2}, {0, 1}, {1, 2}}));
  CHECK(lc.rho.values_string() == "(1,-1,-1,1,1,-1,1,-1)");

  auto sub = pullback_subtorus(f.arr, cls);
  auto alt = representative_with(lc.rho, sub, {{0, QmodZ(1, 2)}});
  CHECK(alt.values_string() == "(-1,1,1,-1,1,-1,1,-1)");
  // Both lie in one coset: the difference is t * (1,-1,-1,1,2,0,-2,0) with t = 1/2.
  for (std::size_t j = 0; j < 8; ++j)
    CHECK(alt.exponents[j] - lc.rho.exponents[j] == sub.E(j, 0) * QmodZ(1, 2));
  // No coset member is trivial on L6, whose row in E is zero.
  CHECK_THROWS_AS(representative_with(lc.rho, sub, {{5, QmodZ(0, 1)}}), MathError);

  CHECK(lift_character(f.arr, cls, d, tf, chars[0]).rho.is_trivial());
  CHECK(epsilon(cls, lc.rho) == 1);
}

TEST_CASE("A_m: T(f) = Z/m with the root-of-unity pattern") {
  for (int m : {2, 3}) {
    CAPTURE(m);
    auto f = fixture("a" + std::to_string(m) + ".json");
    auto cls = analyze(f.arr, fixture_pencil(f.arr, "a" + std::to_string(m) + "_pencil.json"));
    auto d = theta(f.arr, cls);
    auto tf = compute_Tf(d);
    REQUIRE(tf.group.invariant_factors == std::vector<Int>{Int(m)});
    auto sub = pullback_subtorus(f.arr, cls);

    std::vector<std::pair<std::size_t, QmodZ>> z23_trivial;
    for (int k = 1; k <= m; ++k) z23_trivial.emplace_back(*f.arr.index_of("z23:" + std::to_string(k)), QmodZ());

    std::set<std::vector<Rat>> got, expected;
    for (const auto &chi : characters_of_Tf(tf)) {
      auto lc = lift_character(f.arr, cls, d, tf, chi);
      check_lift(f.arr, d, tf, lc);
      auto pinned = representative_with(lc.rho, sub, z23_trivial);
      std::vector<Rat> v;
      for (const auto &e : pinned.exponents) v.push_back(e.value());
      got.insert(v);
    }
    for (int k = 0; k < m; ++k) {
      std::vector<Rat> v{0, 0};
      for (int i = 0; i < m; ++i) v.push_back(QmodZ(k, m).value());
      for (int i = 0; i < m; ++i) v.push_back(QmodZ(-k, m).value());
      for (int i = 0; i < m; ++i) v.push_back(0);
      expected.insert(v);
    }
    CHECK(got == expected);
  }
}

TEST_CASE("conic arrangement: no special fibers, trivial T(f)") {
  auto f = fixture("ex2.json");
  auto cls = analyze(f.arr, fixture_pencil(f.arr, "ex2_pencil.json"));
  auto d = theta(f.arr, cls);
  CHECK(d.moduli.empty());
  auto tf = compute_Tf(d);
  CHECK(tf.group.trivial());
  CHECK(characters_of_Tf(tf).size() == 1);
  CHECK(reduced_fast_path_applies(cls));
}

TEST_CASE("quartic fibers: (Z/2)^3 and epsilon counts nontrivial coordinates") {
  auto f = fixture("ex69.json");
  auto cls = analyze(f.arr, fixture_pencil(f.arr, "ex69_pencil.json"));
  auto d = theta(f.arr, cls);
  auto tf = compute_Tf(d);
  CHECK(tf.group.to_string() == "Z/2 + Z/2 + Z/2");
  auto chars = characters_of_Tf(tf);
  REQUIRE(chars.size() == 8);
  std::set<int> eps;
  for (const auto &chi : chars) {
    auto lc = lift_character(f.arr, cls, d, tf, chi);
    check_lift(f.arr, d, tf, lc);
    int oracle = 0;
    for (std::size_t c = 0; c < d.moduli.size(); ++c) {
      std::vector<Int> e(d.moduli.size(), Int(0));
      e[c] = 1;
      if (!evaluate(tf, chi, e).is_zero()) ++oracle;
    }
    CHECK(epsilon(cls, lc.rho) == oracle);
    eps.insert(oracle);
  }
  CHECK(eps == std::set<int>{0, 1, 2, 3});
}

TEST_CASE("character enumeration counts") {
  TfGroup g;
  g.orders = {Int(3), Int(3)};
  CHECK(characters_of_Tf(g).size() == 9);
  TfGroup z2;
  z2.orders = {Int(2)};
  auto c = characters_of_Tf(z2);
  REQUIRE(c.size() == 2);
  CHECK(c[1][0] == QmodZ(1, 2));
  CHECK(characters_of_Tf(TfGroup{}).size() == 1);
}

TEST_CASE("cyclic fast path agrees with the general route on minimal fixtures") {
  for (auto [a, p] : {std::pair{"ex2.json", "ex2_pencil.json"}, std::pair{"b3.json", "b3_pencil.json"},
                      std::pair{"ceva2.json", "ceva2_pencil.json"}, std::pair{"ceva3.json", "ceva3_pencil.json"}}) {
    CAPTURE(a);
    auto f = fixture(a);
    auto cls = analyze(f.arr, fixture_pencil(f.arr, p));
    REQUIRE(cls.minimal);
    auto d = theta(f.arr, cls);
    CHECK(minimal_fast_path(f.arr, cls, d) == compute_Tf(d).group);
  }
}

TEST_CASE("cyclic fast path agrees on random minimal line pencils") {
  std::mt19937 rng(5150);
  std::uniform_int_distribution<int> mult(1, 3);
  int checked = 0;
  for (int trial = 0; trial < 400 && checked < 30; ++trial) {
    std::vector<TernaryForm> lines;
    for (int i = 0; i < 4; ++i) lines.push_back(random_line(rng));
    int a = mult(rng), b = mult(rng), c = mult(rng);
    int dq = a + b - c;
    if (dq < 1 || std::gcd(std::gcd(a, b), std::gcd(c, dq)) != 1) continue;
    auto arr = lines_arrangement(lines);
    if (!arr) continue;
    std::optional<Pencil> pencil;
    try {
      pencil = Pencil::make(lines[0].pow(a) * lines[1].pow(b), lines[2].pow(c) * lines[3].pow(dq));
    } catch (const MathError &) {
      continue;
    }
    auto cls = analyze(*arr, *pencil);
    if (!cls.minimal || cls.conditional) continue;
    auto d = theta(*arr, cls);
    CHECK(minimal_fast_path(*arr, cls, d) == compute_Tf(d).group);
    ++checked;
  }
  CHECK(checked == 30);
}

TEST_CASE("cyclic fast path agrees on random pencils with a multiple special fiber") {
  // Fibers l1^a l2^b and an irreducible member C = l1^a l2^b - t L^(a+b); the
  // special fiber L^(a+b) is new, so T(f) = Z/(a+b) by the cyclic description.
  std::mt19937 rng(777);
  std::uniform_int_distribution<int> mult(1, 3), tpar(1, 9);
  int checked = 0;
  for (int trial = 0; trial < 400 && checked < 20; ++trial) {
    int a = mult(rng), b = mult(rng);
    if (std::gcd(a, b) != 1) continue;
    TernaryForm l1 = random_line(rng), l2 = random_line(rng), L = random_line(rng);
    TernaryForm P = l1.pow(a) * l2.pow(b);
    TernaryForm C = P - Rat(tpar(rng)) * L.pow(a + b);
    std::optional<Arrangement> arr;
    std::optional<Pencil> pencil;
    try {
      arr = Arrangement::build({{"l1", l1.to_string()}, {"l2", l2.to_string()}, {"C", C.to_string()}}, 1,
                               std::string("l1"));
      pencil = Pencil::make(P, C);
    } catch (const std::exception &) {
      continue;
    }
    if (!arr->warnings().empty()) continue;
    auto cls = analyze(*arr, *pencil);
    if (!cls.minimal || cls.conditional || cls.k() != 2) continue;
    auto d = theta(*arr, cls);
    auto tf = compute_Tf(d);
    CHECK(minimal_fast_path(*arr, cls, d) == tf.group);
    CHECK(tf.group.order() == a + b);
    ++checked;
  }
  CHECK(checked == 20);
}

TEST_CASE("reduced fibers give trivial T(f) on 50 random line pencils") {
  std::mt19937 rng(4242);
  std::uniform_int_distribution<int> deg(2, 3), extra(0, 2);
  int checked = 0;
  for (int trial = 0; trial < 1000 && checked < 50; ++trial) {
    const int D = deg(rng);
    std::vector<TernaryForm> lines;
    for (int i = 0; i < 2 * D + extra(rng); ++i) lines.push_back(random_line(rng));
    auto arr = lines_arrangement(lines);
    if (!arr) continue;
    TernaryForm P = TernaryForm::constant(1), Q = TernaryForm::constant(1);
    for (int i = 0; i < D; ++i) {
      P = P * lines[i];
      Q = Q * lines[D + i];
    }
    std::optional<Pencil> pencil;
    try {
      pencil = Pencil::make(P, Q);
    } catch (const MathError &) {
      continue;
    }
    auto cls = analyze(*arr, *pencil);
    if (cls.conditional || !reduced_fast_path_applies(cls)) continue;
    auto d = theta(*arr, cls);
    auto tf = compute_Tf(d);
    CHECK(tf.group.trivial());
    for (const auto &chi : characters_of_Tf(tf)) check_lift(*arr, d, tf, lift_character(*arr, cls, d, tf, chi));
    ++checked;
  }
  CHECK(checked == 50);
}

TEST_CASE("torsion needs a line at infinity and two B fibers") {
  auto arr = Arrangement::build({{"c", "x^2-y*z"}, {"d", "x^2+y*z"}});
  auto pencil = Pencil::make(parse_rational_form("x^2-y*z"), parse_rational_form("x^2+y*z"));
  auto cls = analyze(arr, pencil);
  CHECK_THROWS_AS(theta(arr, cls), MathError);
  auto f = fixture("deleted_b3.json");
  auto raw = classify(f.arr, fixture_pencil(f.arr, "deleted_b3_fw.json"));
  CHECK_THROWS_AS(theta(f.arr, raw), MathError);
}
