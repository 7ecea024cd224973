#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "strongcert/cli.hpp"
#include "support.hpp"

using namespace strongcert;
using nlohmann::json;

namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  args.insert(args.begin(), "strongcert");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string write_temp(const std::string& name, const std::string& text) {
  const auto p = std::filesystem::temp_directory_path() / name;
  std::ofstream(p) << text;
  return p.string();
}

}  // namespace

TEST(Cli, CertifyStable) {
  const CliRun r = run({"certify", testsupport::data_path("s51.json")});
  EXPECT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["verdict"], "StronglyStable");
  EXPECT_EQ(j["relaxation"]["S"], 48);
}

TEST(Cli, CertifyAboveWitnessRadius) {
  // 0.751 exceeds the largest spectral radius on the torus (about 0.75070)
  const CliRun r = run({"certify", testsupport::data_path("s51.json"), "--gamma", "0.751", "--no-timing"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(json::parse(r.out)["verdict"], "StronglyStable");
}

TEST(Cli, CertifyAtBoundaryIsUndetermined) {
  const CliRun r = run({"certify", testsupport::data_path("s51.json"), "--gamma", "0.75", "--no-timing"});
  EXPECT_EQ(r.code, 2) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["verdict"], "Undetermined");
  EXPECT_TRUE(j["sdp_infeasible"].get<bool>());
}

TEST(Cli, CertifyUnstable) {
  const CliRun r = run({"certify", testsupport::data_path("s53.json"), "--no-timing"});
  EXPECT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["verdict"], "Unstable");
  EXPECT_GT(j["lower"]["radius"].get<double>(), 1.0);
}

TEST(Cli, ScanSection52) {
  const CliRun r = run({"scan", testsupport::data_path("s52.json")});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(json::parse(r.out)["gamma0_scan"].get<double>(), 0.6028, 5e-4);
}

TEST(Cli, ScanWritesSurfaceAndReport) {
  const auto csv = std::filesystem::temp_directory_path() / "strongcert_cli_surface.csv";
  const auto rep = std::filesystem::temp_directory_path() / "strongcert_cli_report.json";
  const CliRun r = run({"scan", testsupport::data_path("s51.json"), "--N", "90", "--surface", csv.string(), "--out",
                     rep.string()});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  EXPECT_TRUE(std::filesystem::exists(csv));
  std::ifstream in(rep);
  EXPECT_EQ(json::parse(in)["N"], 90);
  std::filesystem::remove(csv);
  std::filesystem::remove(rep);
}

TEST(Cli, ExportReportsDims) {
  const auto out = std::filesystem::temp_directory_path() / "strongcert_cli_s51.dat-s";
  const CliRun r = run({"export", testsupport::data_path("s51.json"), "--out", out.string(), "--no-timing"});
  EXPECT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["relaxation"]["S"], 48);
  EXPECT_EQ(j["relaxation"]["M"], 440);
  EXPECT_TRUE(std::filesystem::exists(out));
  std::filesystem::remove(out);
}

TEST(Cli, BoundsRows) {
  const CliRun r = run({"bounds", testsupport::data_path("s51.json"), "--kmax", "2", "--no-timing"});
  EXPECT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  ASSERT_EQ(j["rows"].size(), 2u);
  EXPECT_GE(j["rows"][0]["upper"].get<double>(), j["rows"][1]["upper"].get<double>());
}

TEST(Cli, BisectIsDeterministicWithoutTimings) {
  const std::string path = write_temp("strongcert_scalar.json", R"({"n":1,"m":3,"H":[[[0.3]],[[-0.2]],[[0.1]]]})");
  const CliRun a = run({"bisect", path, "--N", "60", "--no-timing"});
  const CliRun b = run({"bisect", path, "--N", "60", "--no-timing"});
  EXPECT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  const json j = json::parse(a.out);
  EXPECT_FALSE(j.contains("timings"));
  EXPECT_LE(j["bracket"]["lo"].get<double>(), 0.6);
  EXPECT_GE(j["bracket"]["hi"].get<double>(), 0.6);
}

TEST(Cli, ComplexEntries) {
  const std::string path = write_temp("strongcert_complex.json", R"({"n":1,"m":1,"H":[[[[0.0, 1.5]]]]})");
  const CliRun r = run({"certify", path, "--no-timing"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(json::parse(r.out)["verdict"], "Unstable");
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"frobnicate"}).code, 1);
  EXPECT_EQ(run({"scan"}).code, 1);
  EXPECT_EQ(run({"scan", testsupport::data_path("s51.json"), "--N", "1"}).code, 1);
  EXPECT_EQ(run({"certify", testsupport::data_path("s51.json"), "--gamma", "-1"}).code, 1);
  EXPECT_EQ(run({"export", testsupport::data_path("s51.json")}).code, 1);
  EXPECT_EQ(run({"scan", "/nonexistent/system.json"}).code, 1);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, MalformedInputsNameTheField) {
  const std::vector<std::pair<std::string, std::string>> cases = {
      {R"({"m":1,"H":[[[0.5]]]})", "'n'"},
      {R"({"n":0,"m":1,"H":[[[0.5]]]})", "'n'"},
      {R"({"n":1.5,"m":1,"H":[[[0.5]]]})", "'n'"},
      {R"({"n":1,"m":"x","H":[[[0.5]]]})", "'m'"},
      {R"({"n":1,"m":1})", "'H'"},
      {R"({"n":1,"m":2,"H":[[[0.5]]]})", "'H'"},
      {R"({"n":2,"m":1,"H":[[[0.5, 0.1]]]})", "'H[0]'"},
      {R"({"n":2,"m":1,"H":[[[0.5, 0.1],[0.2]]]})", "'H[0][1]'"},
      {R"({"n":1,"m":1,"H":[[["a"]]]})", "'H[0][0][0]'"},
      {R"({"n":1,"m":1,"H":[[[[1,2,3]]]]})", "'H[0][0][0]'"},
      {R"([1,2,3])", "'<root>'"},
      {R"({"n":1,)", "'<root>'"},
  };
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const std::string path = write_temp("strongcert_bad_" + std::to_string(i) + ".json", cases[i].first);
    const CliRun r = run({"scan", path, "--N", "4"});
    EXPECT_EQ(r.code, 1) << cases[i].first;
    EXPECT_NE(r.err.find(cases[i].second), std::string::npos) << r.err;
    std::filesystem::remove(path);
  }
}

TEST(ParseSystem, BundledFilesParse) {
  for (const char* f : {"s51.json", "s52.json", "s53.json"}) EXPECT_NO_THROW(load_system(testsupport::data_path(f)));
  EXPECT_EQ(load_system(testsupport::data_path("s52.json")).n, 4);
  EXPECT_EQ(load_system(testsupport::data_path("s52.json")).m, 3);
  EXPECT_EQ(load_system(testsupport::data_path("s53.json")).m, 4);
}

TEST(ParseSystem, RejectsNonFinite) {
  json j = {{"n", 1}, {"m", 1}, {"H", {{{1e308}}}}};
  EXPECT_NO_THROW(parse_system(j));
  j["H"][0][0][0] = std::numeric_limits<double>::infinity();
  try {
    parse_system(j);
    FAIL() << "expected InputError";
  } catch (const InputError& e) {
    EXPECT_EQ(e.field(), "H[0][0][0]");
  }
}
