#include "doctest.h"

#include "pencilchar/cli.hpp"

#include "json.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace pc;

namespace {

const std::string kDir = PC_FIXTURE_DIR;

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string fx(const std::string &name) { return kDir + "/" + name; }

// Compares with fixtures/golden/<name>; PC_UPDATE_GOLDEN=1 rewrites the file instead.
void golden(const std::string &name, const std::vector<std::string> &args) {
  CAPTURE(name);
  auto r = run(args);
  CHECK(r.code == 0);
  CHECK(r.err.empty());
  const std::filesystem::path path = kDir + "/golden/" + name;
  if (const char *u = std::getenv("PC_UPDATE_GOLDEN"); u && std::string(u) == "1") {
    std::ofstream(path) << r.out;
    return;
  }
  std::ifstream in(path);
  REQUIRE_MESSAGE(in.good(), "missing golden file " << path.string());
  std::ostringstream expected;
  expected << in.rdbuf();
  CHECK(r.out == expected.str());
}

}  // namespace

TEST_CASE("golden: validate every arrangement fixture") {
  for (const char *a : {"a2", "a3", "b3", "ceva2", "ceva3", "deleted_b3", "ex2", "ex69", "triangle"})
    golden(std::string("validate_") + a + ".txt", {"validate", fx(std::string(a) + ".json")});
}

TEST_CASE("golden: classify every pencil fixture") {
  for (auto [a, p] : {std::pair{"a2", "a2_pencil"}, std::pair{"a3", "a3_pencil"}, std::pair{"b3", "b3_pencil"},
                      std::pair{"ceva2", "ceva2_pencil"}, std::pair{"ceva3", "ceva3_pencil"},
                      std::pair{"deleted_b3", "deleted_b3_fw"}, std::pair{"deleted_b3", "deleted_b3_15_26_38"},
                      std::pair{"ex2", "ex2_pencil"}, std::pair{"ex69", "ex69_pencil"}})
    golden(std::string("classify_") + p + ".txt",
           {"classify", fx(std::string(a) + ".json"), "--pencil", fx(std::string(p) + ".json")});
}

TEST_CASE("golden: tf") {
  golden("tf_deleted_b3_fw.txt", {"tf", fx("deleted_b3.json"), "--pencil", fx("deleted_b3_fw.json")});
  golden("tf_deleted_b3_fw_fix.txt",
         {"tf", fx("deleted_b3.json"), "--pencil", fx("deleted_b3_fw.json"), "--fix", "L1=1/2"});
  golden("tf_a2.txt", {"tf", fx("a2.json"), "--pencil", fx("a2_pencil.json")});
  golden("tf_a3.txt", {"tf", fx("a3.json"), "--pencil", fx("a3_pencil.json")});
  golden("tf_ex2.txt", {"tf", fx("ex2.json"), "--pencil", fx("ex2_pencil.json")});
  golden("tf_ex69.txt", {"tf", fx("ex69.json"), "--pencil", fx("ex69_pencil.json")});

  auto r = run({"tf", fx("deleted_b3.json"), "--pencil", fx("deleted_b3_fw.json")});
  CHECK(r.out.rfind("T(f) = Z/2; rho = (1,-1,-1,1,1,-1,1,-1)\n", 0) == 0);
}

TEST_CASE("golden: check") {
  golden("check_b3.txt", {"check", fx("b3.json"), "--pencil", fx("b3_pencil.json")});
  golden("check_ceva2.txt", {"check", fx("ceva2.json"), "--pencil", fx("ceva2_pencil.json")});
  golden("check_ceva3.txt", {"check", fx("ceva3.json"), "--pencil", fx("ceva3_pencil.json")});
  golden("check_ex2.txt", {"check", fx("ex2.json"), "--pencil", fx("ex2_pencil.json"), "--clusters", "3,3,3,3"});
  auto r = run({"check", fx("b3.json"), "--pencil", fx("b3_pencil.json")});
  CHECK(r.out.find("self-intersection = -3 (<= 0: OK)\n") != std::string::npos);
}

TEST_CASE("golden: catalog") {
  golden("catalog_triangle.txt", {"catalog", fx("triangle.json")});
  golden("catalog_deleted_b3.txt", {"catalog", fx("deleted_b3.json")});
  golden("catalog_deleted_b3.json", {"catalog", fx("deleted_b3.json"), "--json"});
  golden("catalog_ex2.txt", {"catalog", fx("ex2.json")});
  golden("catalog_ceva2.txt", {"catalog", fx("ceva2.json")});
  golden("catalog_ceva3.txt", {"catalog", fx("ceva3.json"), "--max-blocks", "3"});
  auto r = run({"catalog", fx("triangle.json")});
  CHECK(r.out.rfind("no positive-dimensional components\n", 0) == 0);
}

TEST_CASE("golden: reconstruct and ray") {
  golden("reconstruct_deleted_b3.txt", {"reconstruct", fx("deleted_b3.json"), "--subspace", fx("deleted_b3_subspace.json")});
  golden("ray_deleted_b3.txt", {"ray", fx("deleted_b3.json"), "--exponents", "1,-1,-1,1,2,0,-2,0", "--tf"});
}

TEST_CASE("JSON reports round-trip and are stable") {
  for (std::vector<std::string> args :
       {std::vector<std::string>{"catalog", fx("ex2.json"), "--json"},
        std::vector<std::string>{"tf", fx("ex69.json"), "--pencil", fx("ex69_pencil.json"), "--json"},
        std::vector<std::string>{"classify", fx("deleted_b3.json"), "--pencil", fx("deleted_b3_fw.json"), "--json"},
        std::vector<std::string>{"validate", fx("ceva3.json"), "--json"}}) {
    auto a = run(args), b = run(args);
    CHECK(a.out == b.out);
    auto parsed = nlohmann::ordered_json::parse(a.out);
    CHECK(parsed.dump(2) + "\n" == a.out);
    CHECK(nlohmann::ordered_json::parse(parsed.dump()) == parsed);
  }
}

TEST_CASE("exit codes and one-line errors") {
  auto usage = run({"frobnicate"});
  CHECK(usage.code == exit_parse);
  auto missing = run({"validate", fx("no_such_file.json")});
  CHECK(missing.code == exit_parse);
  CHECK(missing.err.rfind("error 2 parse: ", 0) == 0);
  CHECK(std::count(missing.err.begin(), missing.err.end(), '\n') == 1);

  auto dir = std::filesystem::temp_directory_path() / "pencilchar_cli_test";
  std::filesystem::create_directories(dir);
  auto write = [&](const std::string &name, const std::string &text) {
    std::ofstream((dir / name).string()) << text;
    return (dir / name).string();
  };
  auto nonhomog = write("nonhomog.json", R"({"components":[{"label":"a","poly":"x^2+y"}]})");
  CHECK(run({"validate", nonhomog}).code == exit_parse);
  auto dup = write("dup.json", R"({"components":[{"label":"a","poly":"x"},{"label":"a","poly":"y"}]})");
  auto r = run({"validate", dup});
  CHECK(r.code == exit_invariant);
  CHECK(r.err.rfind("error 3 invariant: ", 0) == 0);
  auto bad_json = write("bad.json", "{ not json");
  CHECK(run({"validate", bad_json}).code == exit_parse);

  auto unbalanced = run({"ray", fx("deleted_b3.json"), "--exponents", "1,0,0,0,0,0,0,0"});
  CHECK(unbalanced.code == exit_math);
  CHECK(unbalanced.err.rfind("error 4 math: ", 0) == 0);
  CHECK(run({"check", fx("b3.json"), "--pencil", fx("b3_pencil.json"), "--clusters", "4,x"}).code == exit_parse);
  CHECK(run({"tf", fx("deleted_b3.json"), "--pencil", fx("deleted_b3_fw.json"), "--fix", "L6=0"}).code == exit_math);

  // The fiber b1 (x^2 + 2 y^2) - b0 x y is a square only at b0 / b1 = +-sqrt(8).
  auto tri = write("tri.json", R"({"components":[{"label":"a","poly":"x"},{"label":"b","poly":"y"},{"label":"c","poly":"z"}]})");
  auto irr = write("irr.json", R"({"P":"x^2+2*y^2","Q":"x*y"})");
  CHECK(run({"classify", tri, "--pencil", irr}).code == exit_ok);
  auto strict = run({"classify", tri, "--pencil", irr, "--strict"});
  CHECK(strict.code == exit_conditional);
  CHECK(strict.err.rfind("error 5 conditional: ", 0) == 0);
  std::filesystem::remove_all(dir);
}
