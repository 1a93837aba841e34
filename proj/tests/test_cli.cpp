#include <gtest/gtest.h>

#include <json.hpp>

#include <sys/wait.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

namespace {

struct Run {
  int status;
  std::string out;
};

Run qrg(const std::string& args, const std::string& env = "") {
  std::string cmd = env + (env.empty() ? "" : " ") + QRG_CLI_PATH + std::string(" ") + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return {-1, ""};
  std::string out;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), n);
  int st = pclose(p);
  return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

nlohmann::json json_of(const Run& r) { return nlohmann::json::parse(r.out); }

}  // namespace

TEST(Cli, MetadataInEveryJsonOutput) {
  for (const char* args : {"solve -n 4", "verify -n 4", "curvature -n 4", "flat-metric -n 4", "laplacian -n 4",
                           "det-l --n-max 4", "qft -n 4", "gravity --G 1"}) {
    auto r = qrg(std::string("--seed 9 ") + args);
    ASSERT_EQ(r.status, 0) << args;
    auto meta = json_of(r)["meta"];
    EXPECT_EQ(meta["mode"], "float") << args;
    EXPECT_EQ(meta["tol"], 1e-10) << args;
    EXPECT_EQ(meta["seed"], 9) << args;
    EXPECT_EQ(meta["version"], "0.1.0") << args;
  }
}

TEST(Cli, MetadataInCsvOutput) {
  auto r = qrg("march --eps 0.1 --x-max 0.5");
  ASSERT_EQ(r.status, 0);
  EXPECT_EQ(r.out.rfind("# mode=float tol=1e-10 seed=1 version=0.1.0\n", 0), 0u);
  EXPECT_NE(r.out.find("i,x,f,reference\n"), std::string::npos);
  auto c = qrg("conformal-scan --eps 0.1 --x-max 0.5 --psi 0,0.2");
  ASSERT_EQ(c.status, 0);
  EXPECT_NE(c.out.find("i,x,discrete,continuum,observed\n"), std::string::npos);
}

TEST(Cli, Deterministic) {
  for (const char* args : {"--seed 5 verify -n 7 --random-h", "--mode exact --seed 5 curvature --lattice n -n 9 --random-h",
                           "gravity --G 0.01,100", "reproduce-paper"}) {
    auto a = qrg(args), b = qrg(args);
    EXPECT_EQ(a.status, b.status) << args;
    EXPECT_EQ(a.out, b.out) << args;
    EXPECT_FALSE(a.out.empty()) << args;
  }
  EXPECT_NE(qrg("--seed 5 solve -n 5 --random-h").out, qrg("--seed 6 solve -n 5 --random-h").out);
}

TEST(Cli, ToleranceFromEnvironment) {
  auto r = qrg("det-l --n-max 3", "QRG_TOL=1e-6");
  ASSERT_EQ(r.status, 0);
  EXPECT_EQ(json_of(r)["meta"]["tol"], 1e-6);
  EXPECT_EQ(json_of(qrg("--tol 1e-8 det-l --n-max 3", "QRG_TOL=1e-6"))["meta"]["tol"], 1e-8);
}

TEST(Cli, ExactVerifyOnHalfLine) {
  auto r = qrg("--mode exact verify --lattice n -n 16 --random-h -s -1");
  ASSERT_EQ(r.status, 0);
  auto res = json_of(r)["residuals"];
  for (const char* k : {"metric_compatibility", "torsion", "star"}) EXPECT_EQ(res[k]["rat"], "0") << k;
  EXPECT_TRUE(json_of(r)["qlc"]);
}

TEST(Cli, PerturbedConnectionIsReported) {
  auto clean = json_of(qrg("verify -n 6"));
  EXPECT_TRUE(clean["qlc"]);
  auto r = json_of(qrg("verify -n 6 --perturb-tau 2 --delta 0.1"));
  EXPECT_FALSE(r["qlc"]);
  EXPECT_GT(r["residuals"]["metric_compatibility"]["float"].get<double>(), 1e-3);
}

TEST(Cli, ExactOutputIsRational) {
  auto r = json_of(qrg("--mode exact solve --lattice n -n 4 -w 1,3/2,2"));
  EXPECT_EQ(r["metric"]["h"][1]["rat"], "3/2");
  EXPECT_EQ(r["connection"]["tau"][1]["rat"], "-1/2");
  auto f = json_of(qrg("--mode exact flat-metric --lattice n -n 6"));
  EXPECT_EQ(f["h"][1]["rat"], "6");
  EXPECT_EQ(f["h"][2]["rat"], "9/2");
}

TEST(Cli, FlatRatioOnAThree) {
  auto r = json_of(qrg("flat-metric -n 3"));
  EXPECT_NEAR(r["h2_over_h1"].get<double>(), 4 + 3 * std::sqrt(2.0), 1e-12);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(qrg("").status, 2);
  EXPECT_EQ(qrg("bogus").status, 2);
  EXPECT_EQ(qrg("solve -n 3 -w 1").status, 2);
  EXPECT_EQ(qrg("--mode exact solve -n 3 -w 1,0.5").status, 2);
  EXPECT_EQ(qrg("--mode exact solve -n 4").status, 3);
  EXPECT_EQ(qrg("gravity --c-positive").status, 3);
  EXPECT_EQ(qrg("--version").status, 0);
  EXPECT_EQ(qrg("solve --help").status, 0);
}

TEST(Cli, OutputFile) {
  auto path = std::filesystem::temp_directory_path() / "qrg_cli_test_output.json";
  std::filesystem::remove(path);
  auto r = qrg("-o " + path.string() + " det-l --n-max 4");
  ASSERT_EQ(r.status, 0);
  EXPECT_TRUE(r.out.empty());
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  EXPECT_EQ(nlohmann::json::parse(ss.str())["rows"].size(), 2u);
  std::filesystem::remove(path);
}

TEST(Cli, ReproduceReportsMismatches) {
  auto r = qrg("reproduce-paper");
  EXPECT_EQ(r.status, 1);
  auto j = json_of(r);
  std::set<std::string> failing, passing;
  for (const auto& c : j["checks"]) {
    const auto name = c["check"].get<std::string>();
    if (c["status"] == "PASS") passing.insert(name);
    if (c["required"] && c["status"] == "FAIL") failing.insert(name.substr(0, 8));
  }
  for (const char* name : {"phi row 5", "tau row n=4", "A_3 flat ratio h2/h1"}) EXPECT_TRUE(passing.count(name)) << name;
  // det(L) against the full determinant, the printed A_3 action matrix, and the printed A_3 scalar and EH values
  EXPECT_EQ(failing, (std::set<std::string>{"det L n=", "A_3 acti", "A_3 det ", "A_3 scal", "A_3 EH a"}));
  EXPECT_EQ(j["summary"]["required_failures"], 15);
}
