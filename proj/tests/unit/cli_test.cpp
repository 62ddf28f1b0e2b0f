#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "glp/cli.hpp"
#include "json.hpp"

using namespace glp;
using json = nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string fixture(const std::string& name) { return std::string(GLP_FIXTURES) + "/" + name; }

std::filesystem::path temp_file(const std::string& name, const std::string& text) {
  auto path = std::filesystem::temp_directory_path() / ("glp_cli_" + name);
  std::ofstream(path) << text;
  return path;
}

}  // namespace

TEST(Cli, FmtIsIdempotent) {
  auto first = run({"fmt", fixture("workshop.glp")});
  ASSERT_EQ(first.code, kExitOk) << first.err;
  auto copy = std::filesystem::temp_directory_path() / "workshop.glp";
  std::ofstream(copy) << first.out;
  std::filesystem::copy_file(fixture("workshop.pol"), std::filesystem::temp_directory_path() / "workshop.pol",
                             std::filesystem::copy_options::overwrite_existing);
  auto second = run({"fmt", copy.string()});
  ASSERT_EQ(second.code, kExitOk) << second.err;
  EXPECT_EQ(first.out, second.out);
}

TEST(Cli, FmtKeepsLabels) {
  auto r = run({"fmt", fixture("robot.glp")});
  ASSERT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("@chi_r22"), std::string::npos);
  EXPECT_NE(r.out.find("@chi_s22"), std::string::npos);
}

TEST(Cli, MalformedFileReportsPosition) {
  auto path = temp_file("bad.glp", "x<y>.\n  | (");
  auto r = run({"fmt", path.string()});
  EXPECT_EQ(r.code, kExitParseError);
  EXPECT_NE(r.err.find(":2:"), std::string::npos) << r.err;
}

TEST(Cli, MissingFileIsIoError) {
  EXPECT_EQ(run({"fmt", "/nonexistent/file.glp"}).code, kExitIoError);
  EXPECT_EQ(run({"analyze", "/nonexistent/file.glp"}).code, kExitIoError);
}

TEST(Cli, UnknownFlagIsUsageError) { EXPECT_EQ(run({"explore", fixture("workshop.glp"), "--bogus"}).code, 2); }

TEST(Cli, RunIsReproducible) {
  auto a = run({"run", fixture("workshop.glp"), "--seed", "7", "--json"});
  auto b = run({"run", fixture("workshop.glp"), "--seed", "7", "--json"});
  ASSERT_EQ(a.code, kExitOk);
  EXPECT_EQ(a.out, b.out);
  auto j = json::parse(a.out);
  EXPECT_EQ(j["version"], "0.1.0");
  EXPECT_EQ(j["inputs"].size(), 1u);
}

TEST(Cli, RunOnNilIsEmpty) {
  auto path = temp_file("nil.glp", "0");
  auto r = run({"run", path.string(), "--json"});
  ASSERT_EQ(r.code, kExitOk);
  EXPECT_TRUE(json::parse(r.out)["result"]["labels"].empty());
}

TEST(Cli, SomeSeedHitsTheFaultyAccess) {
  bool found = false;
  for (int seed = 0; seed < 50 && !found; ++seed) {
    auto r = run({"run", fixture("workshop.glp"), "--seed", std::to_string(seed)});
    found = r.out.find("hard_hit!(#mallet)") != std::string::npos;
  }
  EXPECT_TRUE(found);
}

TEST(Cli, ExploreWorkshopWritesGraph) {
  auto out = std::filesystem::temp_directory_path() / "glp_cli_workshop_lts.json";
  auto r = run({"explore", fixture("workshop.glp"), "--json", "--out", out.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  auto report = json::parse(r.out);
  EXPECT_GT(report["result"]["faulty_edges"].get<int>(), 0);
  std::ifstream in(out);
  auto graph = json::parse(in);
  EXPECT_EQ(graph["nodes"].size(), report["result"]["nodes"].get<size_t>());
  EXPECT_FALSE(graph["truncated"].get<bool>());
}

TEST(Cli, ExploreNilAndCap) {
  auto nil = temp_file("nil.glp", "0");
  auto r = json::parse(run({"explore", nil.string(), "--json"}).out);
  EXPECT_EQ(r["result"]["nodes"], 1);
  auto capped = json::parse(run({"explore", fixture("workshop.glp"), "--cap", "5", "--json"}).out);
  EXPECT_TRUE(capped["result"]["truncated"].get<bool>());
}

TEST(Cli, AnalyzeWorkshop) {
  auto r = run({"analyze", fixture("workshop.glp"), "--json"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  auto e = json::parse(r.out)["result"]["estimate"];
  EXPECT_EQ(e["rho"]["#s"], json::array({"#hammer", "#mallet"}));
  EXPECT_EQ(e["rho"]["#t"], json::array({"#mallet"}));
  EXPECT_EQ(e["kappa"]["x"], json::array({"#hammer", "#mallet"}));
}

TEST(Cli, AnalyzeNilIsEmpty) {
  auto path = temp_file("nil.glp", "0");
  auto e = json::parse(run({"analyze", path.string(), "--json"}).out)["result"]["estimate"];
  EXPECT_TRUE(e["rho"].empty());
  EXPECT_TRUE(e["gamma"].empty());
  EXPECT_TRUE(e["psi"].empty());
}

TEST(Cli, ReportsAreByteIdentical) {
  auto a = run({"analyze", fixture("robot.glp"), "--json"});
  auto b = run({"analyze", fixture("robot.glp"), "--json"});
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, CheckExitCodes) {
  EXPECT_EQ(run({"check", fixture("workshop.glp"), "--resource", "mallet"}).code, kExitPolicyFailure);
  EXPECT_EQ(run({"check", fixture("workshop.glp"), "--resource", "#hammer"}).code, kExitOk);
  EXPECT_EQ(run({"check", fixture("robot.glp"), "--resource", "IT", "--cap", "2000"}).code, kExitPolicyFailure);
  // Static analysis passes, exploration stops at the cap.
  EXPECT_EQ(run({"check", fixture("robot.glp"), "--resource", "sns11", "--cap", "2000"}).code, kExitInconclusive);
  EXPECT_EQ(run({"check", fixture("workshop.glp"), "--resource", "anvil"}).code, kExitParseError);
}
