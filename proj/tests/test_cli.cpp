#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "rebound/cli.hpp"
#include "rebound/io.hpp"

namespace fs = std::filesystem;
using namespace rebound;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "rebound");
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string &name) { return std::string(REBOUND_DATA_DIR) + "/" + name; }

class CliTest : public ::testing::Test {
protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("rebound_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string &name) const { return (dir_ / name).string(); }

  std::string write(const std::string &name, const std::string &text) const {
    std::ofstream(path(name)) << text;
    return path(name);
  }

  fs::path dir_;
};

Json results_of(const Run &r) { return Json::parse(r.out).at("results"); }

double value(const Json &j) { return parse_number(j); }

} // namespace

TEST(Hash, KnownDigests) {
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Numbers, FormatRoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, 2.0, 1e-300, -0.45120505930460153})
    EXPECT_EQ(parse_number(Json(format_number(v))), v);
  EXPECT_EQ(format_number(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_THROW(parse_number(Json("nan")), ParseError);
  EXPECT_EQ(parse_number(Json(0.25)), 0.25);
}

TEST_F(CliTest, CanonicalDumpIsStable) {
  for (const auto &entry : fs::directory_iterator(REBOUND_DATA_DIR)) {
    const std::string file = entry.path().string();
    const std::string stem = entry.path().stem().string();
    std::vector<std::string> extra;
    if (stem.ends_with("_protocol"))
      extra = {"--collection", data(stem.substr(0, stem.size() - 9) + ".json")};
    auto args = std::vector<std::string>{"--no-timing", "validate", file, "--dump", path("a.json")};
    args.insert(args.end(), extra.begin(), extra.end());
    const auto first = run(args);
    ASSERT_EQ(first.code, 0) << file << "\n" << first.err << first.out;
    args[2] = path("a.json");
    args[4] = path("b.json");
    ASSERT_EQ(run(args).code, 0) << file;
    EXPECT_EQ(read_text_file(path("a.json")), read_text_file(path("b.json"))) << file;
  }
}

TEST_F(CliTest, ValidationFailureExitsOne) {
  const double s = std::sqrt(0.9);
  Json doc;
  doc["in_dim"] = 2;
  doc["out_dim"] = 2;
  Json k = Json::array({Json::array({s, 0.0}), Json::array({0.0, s})});
  doc["channels"] = Json::array({Json{{"label", "a"}, {"kraus", Json::array({k})}},
                                 Json{{"label", "b"}, {"kraus", Json::array({k})}}});
  const auto r = run({"validate", write("weak.json", doc.dump()), "--dump", path("out.json")});
  EXPECT_EQ(r.code, 1);
  const auto res = results_of(r);
  EXPECT_FALSE(res.at("pass").get<bool>());
  EXPECT_NEAR(value(res.at("checks")[0].at("deviation")), 0.1, 1e-12);
  EXPECT_FALSE(fs::exists(path("out.json")));
}

TEST_F(CliTest, ParseAndUsageErrorsExitTwo) {
  EXPECT_EQ(run({"validate", path("missing.json")}).code, 2);
  EXPECT_EQ(run({"validate", write("broken.json", "{\"channels\": [")}).code, 2);
  const std::string nan_doc =
      R"({"in_dim": 1, "out_dim": 1, "channels": [{"label": "a", "kraus": [[["nan"]]]}, )"
      R"({"label": "b", "kraus": [[[1]]]}]})";
  EXPECT_EQ(run({"validate", write("nan.json", nan_doc)}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"bounds"}).code, 2);
  EXPECT_EQ(run({"bounds", data("replacer.json")}).code, 2); // neither --group nor --env
  EXPECT_EQ(run({"validate", data("ix_protocol.json")}).code, 2);
}

TEST_F(CliTest, SolverErrorsExitOne) {
  // Swapping the environment states breaks the simulation of the replacer.
  Json env = read_json_file(data("replacer_env.json"));
  std::swap(env["env_states"][0]["matrix"], env["env_states"][1]["matrix"]);
  const auto r = run({"bounds", data("replacer.json"), "--env", write("swapped.json", env.dump())});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("NotParametrized"), std::string::npos) << r.err;
  // Labels that do not match the collection.
  EXPECT_EQ(run({"bounds", data("replacer.json"), "--env", data("identical_env.json")}).code, 1);
}

TEST(Cli, CovariantBoundsAgree) {
  const auto r = run({"--no-timing", "bounds", data("depolarizing_jc.json"), "--group",
                      data("pauli_group.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto res = results_of(r);
  const auto &b = res.at("bounds");
  ASSERT_EQ(b.size(), 3u);
  EXPECT_EQ(b[0].at("kind"), "theorem2_equality");
  EXPECT_NEAR(value(b[0].at("value")), 0.45120505930460153, 1e-12);
  for (const auto &c : res.at("cross_checks"))
    EXPECT_LT(value(c.at("delta")), 1e-9);
  const auto report = Json::parse(r.out);
  EXPECT_FALSE(report.contains("wall_time_ms"));
  EXPECT_EQ(report.at("inputs")[0].at("sha256"),
            sha256_hex(read_text_file(data("depolarizing_jc.json"))));
}

TEST(Cli, EnvironmentBoundsAndFiniteBlocklength) {
  const auto r = run({"bounds", data("replacer.json"), "--env", data("replacer_env.json"),
                      "--seize", data("replacer_seizure.json"), "--n", "1", "--epsilon", "0"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto res = results_of(r);
  const auto &b = res.at("bounds");
  ASSERT_EQ(b.size(), 3u);
  for (const auto &x : b)
    EXPECT_NEAR(value(x.at("value")), 1.0, 1e-9) << x.at("kind");
  EXPECT_TRUE(Json::parse(r.out).contains("wall_time_ms"));
}

TEST_F(CliTest, FixedSeedReportsAreByteIdentical) {
  const std::vector<std::string> args{"--no-timing", "--seed", "7", "bounds",
                                      data("replacer.json"), "--env", data("replacer_env.json"),
                                      "--n", "2", "--epsilon", "0.1", "--theta-hat-strategy",
                                      "grid", "--grid-size", "3"};
  const auto a = run(args), b = run(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  auto with_threads = args;
  with_threads.insert(with_threads.begin(), {"--threads", "1"});
  EXPECT_EQ(run(with_threads).out, a.out);
}

TEST(Cli, SimulateAndReduce) {
  const auto r = run({"simulate", data("ix_protocol.json"), data("ix.json"), data("ix_codebook.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto res = results_of(r);
  EXPECT_NEAR(value(res.at("avg_success")), 1.0, 1e-12);
  EXPECT_NEAR(value(res.at("rate")), 0.5, 1e-15);
  EXPECT_TRUE(res.at("zero_error").get<bool>());

  const auto red = run({"reduce", data("replacer_protocol.json"), data("replacer.json"),
                        data("replacer_codebook.json"), data("replacer_env.json")});
  ASSERT_EQ(red.code, 0) << red.err;
  EXPECT_TRUE(results_of(red).at("reduction").at("pass").get<bool>());
}

TEST(Cli, HypothesisTestingDivergence) {
  const auto dir = fs::temp_directory_path();
  const auto rho = (dir / "rebound_dhe_rho.json").string();
  const auto sigma = (dir / "rebound_dhe_sigma.json").string();
  std::ofstream(rho) << R"({"kind": "state", "dims": [2], "matrix": [[0.5, 0], [0, 0.5]]})";
  std::ofstream(sigma) << R"({"kind": "state", "dims": [2], "matrix": [[0.9, 0], [0, 0.1]]})";
  const auto r = run({"dhe", rho, sigma, "--epsilon", "0.5"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(value(results_of(r).at("value")), 3.321928094887362, 1e-12);
  fs::remove(rho);
  fs::remove(sigma);
}

TEST_F(CliTest, CovarianceBuildDump) {
  const auto r = run({"covariance", data("depolarizing_jc.json"), "--group", data("pauli_group.json"),
                      "--build", "g0", "--dump", path("built.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto res = results_of(r);
  EXPECT_TRUE(res.at("one_design").at("pass").get<bool>());
  for (const auto &m : res.at("members"))
    EXPECT_TRUE(m.at("pass").get<bool>());
  EXPECT_EQ(collection_from_json(read_json_file(path("built.json"))).size(), 4u);
}
