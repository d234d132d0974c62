#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "sptkit/cli.hpp"

using namespace sptkit;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "sptkit_cli_test";
  std::filesystem::create_directories(dir);
  return (dir / name).string();
}

std::string write_temp(const std::string& name, const std::string& text) {
  auto p = temp_path(name);
  std::ofstream(p) << text;
  return p;
}

Json manifest_of(const Run& r) {
  std::istringstream lines(r.err);
  std::string line, last;
  while (std::getline(lines, line))
    if (!line.empty()) last = line;
  return Json::parse(last).at("manifest");
}

}  // namespace

TEST(Cli, Sha256KnownVector) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Cli, H2OnKleinFour) {
  auto r = run({"cohomology", "h2", "--group", "Z2xZ2"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(Json::parse(r.out).at("divisors"), Json::array({2}));
  auto file = write_temp("z2xz2.json", to_json(*build_group("Z2xZ2")).dump());
  auto f = run({"cohomology", "h2", "--group", file});
  ASSERT_EQ(f.code, 0) << f.err;
  EXPECT_EQ(Json::parse(f.out).at("divisors"), Json::array({2}));
  auto m = manifest_of(f);
  EXPECT_EQ(m.at("command"), "cohomology h2");
  EXPECT_EQ(m.at("inputs")[0].at("sha256"), sha256_hex(read_text_file(file)));
  EXPECT_EQ(m.at("exit_code"), 0);
  EXPECT_TRUE(m.contains("wall_time_s"));
}

TEST(Cli, GroupShow) {
  auto r = run({"group", "show", "--group", "S3"});
  ASSERT_EQ(r.code, 0);
  auto j = Json::parse(r.out);
  EXPECT_EQ(j.at("order"), 6);
  EXPECT_FALSE(j.at("abelian").get<bool>());
  EXPECT_EQ(j.at("identity"), 0);
}

TEST(Cli, MalformedJsonReportsLineAndColumn) {
  auto p = write_temp("bad.json", "{\n  \"group\": \"Z2\",\n  \"phases\": [\n  oops\n]}\n");
  auto r = run({"cocycle", "check", "--cocycle", p});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("line 4, column 3"), std::string::npos) << r.err;
}

TEST(Cli, CocycleCheckAndClassify) {
  auto pauli = R"({"group":"Z2xZ2","phases":[
    [{"num":0,"den":1},{"num":0,"den":1},{"num":0,"den":1},{"num":0,"den":1}],
    [{"num":0,"den":1},{"num":0,"den":1},{"num":1,"den":2},{"num":1,"den":2}],
    [{"num":0,"den":1},{"num":0,"den":1},{"num":0,"den":1},{"num":0,"den":1}],
    [{"num":0,"den":1},{"num":0,"den":1},{"num":1,"den":2},{"num":1,"den":2}]]})";
  auto p = write_temp("pauli.json", pauli);
  auto c = run({"cocycle", "check", "--group", "Z2xZ2", "--cocycle", p});
  ASSERT_EQ(c.code, 0) << c.err;
  EXPECT_TRUE(Json::parse(c.out).at("cocycle").get<bool>());
  auto k = run({"cocycle", "classify", "--cocycle", p});
  ASSERT_EQ(k.code, 0) << k.err;
  auto j = Json::parse(k.out);
  EXPECT_FALSE(j.at("trivial").get<bool>());
  EXPECT_EQ(j.at("coordinates"), Json::array({1}));

  std::string broken = pauli;
  broken.replace(broken.find("{\"num\":1,\"den\":2}]"), 17, "{\"num\":1,\"den\":4}");
  auto b = write_temp("broken.json", broken);
  auto bc = run({"cocycle", "check", "--cocycle", b});
  ASSERT_EQ(bc.code, 0);
  EXPECT_FALSE(Json::parse(bc.out).at("cocycle").get<bool>());
  EXPECT_EQ(run({"cocycle", "classify", "--cocycle", b}).code, 1);
}

TEST(Cli, SnapFailureExitsThree) {
  // Coboundary of nu(1) = e^{0.3 i} on Z2: a cocycle whose phases are not near
  // any multiple of 2 pi / 4.
  auto p = write_temp("irrational.json",
                      R"({"group":"Z2","phases":[[{"angle":0},{"angle":0}],[{"angle":0},{"angle":0.6}]]})");
  EXPECT_EQ(run({"cocycle", "classify", "--cocycle", p}).code, 3);
}

TEST(Cli, RepExtract) {
  auto rep = R"({"group":"Z2xZ2","dim":2,"matrices":[
    [[[1,0],[0,0]],[[0,0],[1,0]]],
    [[[0,0],[1,0]],[[1,0],[0,0]]],
    [[[1,0],[0,0]],[[0,0],[-1,0]]],
    [[[0,0],[-1,0]],[[1,0],[0,0]]]]})";
  auto p = write_temp("pauli_rep.json", rep);
  auto r = run({"rep", "extract", "--rep", p});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_FALSE(Json::parse(r.out).at("class").at("trivial").get<bool>());
}

TEST(Cli, StateBuildAndIndex) {
  auto aklt = temp_path("aklt.json");
  ASSERT_EQ(run({"state", "build", "--kind", "aklt", "--out", aklt}).code, 0);
  auto r = run({"index", "compute", "--state", aklt, "--detector", "so3"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = Json::parse(r.out);
  EXPECT_FALSE(j.at("trivial").get<bool>());
  EXPECT_EQ(j.at("verdict"), "haldane");
  EXPECT_NEAR(j.at("commutator")[0].get<double>(), -1.0, 1e-8);

  auto product = temp_path("product.json");
  auto b = run({"state", "build", "--kind", "product", "--out", product});
  ASSERT_EQ(b.code, 0);
  EXPECT_TRUE(b.out.empty());
  auto p = run({"index", "compute", "--state", product});
  ASSERT_EQ(p.code, 0) << p.err;
  EXPECT_TRUE(Json::parse(p.out).at("trivial").get<bool>());

  auto spin1 = temp_path("spin1.json");
  ASSERT_EQ(run({"state", "build", "--kind", "product-spin1", "--out", spin1}).code, 0);
  auto u = run({"index", "compute", "--state", spin1, "--detector", "u1"});
  ASSERT_EQ(u.code, 0) << u.err;
  EXPECT_EQ(Json::parse(u.out).at("verdict"), "trivial");
}

TEST(Cli, FixedPointStateFromCocycle) {
  auto c = write_temp("z3z3.json", to_json(compute_h2(build_group("Z3xZ3")).generators[0]).dump());
  auto s = temp_path("fp.json");
  ASSERT_EQ(run({"state", "build", "--kind", "fixed-point", "--cocycle", c, "--out", s}).code, 0);
  auto r = run({"index", "compute", "--state", s});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(Json::parse(r.out).at("class").at("coordinates"), Json::array({1}));
}

TEST(Cli, BrokenSymmetryExitsTwo) {
  // |0> on every site with Z2 acting by X.
  auto p = write_temp("broken_state.json", R"({"d":2,"D":1,"group":"Z2","label":"up",
    "tensor":[[[[1,0]]],[[[0,0]]]],
    "onsite":{"group":"Z2","dim":2,"matrices":[[[[1,0],[0,0]],[[0,0],[1,0]]],[[[0,0],[1,0]],[[1,0],[0,0]]]]}})");
  auto r = run({"index", "compute", "--state", p});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("broken_symmetry"), std::string::npos);
  EXPECT_NE(r.err.find("group element 1"), std::string::npos);
}

TEST(Cli, ValidationAndResourceGuardExitCodes) {
  EXPECT_EQ(run({"group", "show", "--group", "Z0x"}).code, 1);
  EXPECT_EQ(run({"cohomology"}).code, 1);
  EXPECT_EQ(run({"state", "build", "--kind", "nope"}).code, 1);
  EXPECT_EQ(run({"index", "compute", "--state", temp_path("missing.json")}).code, 1);
  auto q = write_temp("q4.json", R"({"group":"Z4","charges":[[{"num":0,"den":1},{"num":1,"den":4},{"num":1,"den":2},{"num":3,"den":4}]]})");
  EXPECT_EQ(run({"circuit", "charge-transfer", "--charges", q, "--length", "26"}).code, 4);
  EXPECT_EQ(run({"circuit", "charge-transfer", "--charges", q, "--length", "5"}).code, 1);
  EXPECT_EQ(run({"locality", "ffunction", "--decay", "const:0.5", "--rmax", "100"}).code, 1);
}

TEST(Cli, ChargeTransferOutput) {
  auto q = write_temp("q_array.json", R"([
    {"group":"Z4","phases":[{"num":0,"den":1},{"num":1,"den":4},{"num":1,"den":2},{"num":3,"den":4}]},
    {"group":"Z4","phases":[{"num":0,"den":1},{"num":1,"den":2},{"num":0,"den":1},{"num":1,"den":2}]}])");
  auto r = run({"circuit", "charge-transfer", "--charges", q, "--length", "4"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = Json::parse(r.out);
  EXPECT_LT(j.at("equivariance_residual").get<double>(), 1e-12);
  EXPECT_NEAR(j.at("product_overlap").get<double>(), 1.0, 1e-12);
  for (const auto& g : j.at("gates")) {
    auto layer = g.at("layer").get<std::string>();
    EXPECT_TRUE(layer == "T" || layer == "V" || layer == "W");
    EXPECT_EQ(g.at("support").size(), 2u);
  }
  EXPECT_EQ(j.at("sites").size(), 5u);
}

TEST(Cli, FFunctionOutput) {
  auto r = run({"locality", "ffunction", "--decay", "exp:1.0", "--rmax", "300"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = Json::parse(r.out);
  EXPECT_EQ(j.at("values").size(), 301u);
  for (const auto& [k, v] : j.at("axioms").items()) EXPECT_TRUE(v.get<bool>()) << k;
}

TEST(Cli, DeterministicOutput) {
  auto q = write_temp("q_det.json", R"({"group":"Z4","charges":[
    [{"num":0,"den":1},{"num":1,"den":4},{"num":1,"den":2},{"num":3,"den":4}],
    [{"num":0,"den":1},{"num":3,"den":4},{"num":1,"den":2},{"num":1,"den":4}],
    [{"num":0,"den":1},{"num":1,"den":2},{"num":0,"den":1},{"num":1,"den":2}]]})");
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"circuit", "charge-transfer", "--charges", q, "--length", "6"},
           {"locality", "ffunction", "--decay", "stretched:1:0.5", "--rmax", "600"},
           {"state", "build", "--kind", "cluster"},
           {"cohomology", "h2", "--group", "D4"}}) {
    auto a = run(args), b = run(args);
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out) << args[0];
  }
}
