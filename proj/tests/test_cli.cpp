#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <sstream>
#include <string>
#include <vector>

#include "rrt/cli.hpp"

using namespace rrt::cli;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(std::vector<std::string> tokens) {
  std::ostringstream out, err;
  const int code = run(tokens, out, err);
  return {code, out.str(), err.str()};
}

RunPlan parse(std::vector<std::string> tokens) { return parse_args(tokens); }

}  // namespace

TEST_CASE("parse exact-cdf") {
  const auto plan = parse({"exact-cdf", "--n-max", "10", "--k-max", "9", "--format", "csv"});
  CHECK(plan.command == "exact-cdf");
  CHECK(plan.params.at("n-max") == "10");
  CHECK(plan.params.at("k-max") == "9");
  CHECK(plan.format == Format::csv);
  CHECK(parse({"exact-cdf", "--n-max", "10"}).params.at("k-max") == "9");
}

TEST_CASE("parse tail-upper") {
  const auto plan = parse({"tail-upper", "--n", "1000", "--beta", "3", "--reps", "100000", "--seed", "42"});
  CHECK(plan.params.at("n") == "1000");
  CHECK(plan.params.at("beta") == "3");
  CHECK(plan.params.at("seed") == "42");
  CHECK(plan.format == Format::json);
}

TEST_CASE("usage errors") {
  CHECK_THROWS_AS(parse({"omega", "--n", "10", "--alpha", "1.5"}), UsageError);
  CHECK_THROWS_AS(parse({"tail-upper", "--n", "10"}), UsageError);
  CHECK_THROWS_AS(parse({"tail-upper", "--n", "10", "--beta", "3", "--bogus", "1"}), UsageError);
  CHECK_THROWS_AS(parse({"tail-upper", "--n", "ten", "--beta", "3"}), UsageError);
  CHECK_THROWS_AS(parse({"tail-upper", "--n", "10", "--beta", "3", "--format", "xml"}), UsageError);
  CHECK_THROWS_AS(parse({"good-vertices", "--n", "100", "--beta", "2"}), UsageError);
  CHECK_THROWS_AS(parse({"bounds", "--kind", "rates"}), UsageError);
  CHECK_THROWS_AS(parse({"bounds", "--kind", "rates", "--beta", "3", "--lambda", "1"}), UsageError);
  CHECK_THROWS_AS(parse({"nonsense"}), UsageError);
  CHECK_THROWS_AS(parse({}), UsageError);
  CHECK_THROWS_AS(parse({"verify", "--suite", "everything"}), UsageError);
  try {
    parse({"omega", "--n", "10", "--alpha", "1.5"});
  } catch (const UsageError& e) {
    CHECK(std::string(e.what()).find("--alpha") != std::string::npos);
  }
}

TEST_CASE("round trip through the canonical rendering") {
  const std::vector<std::vector<std::string>> cases{
      {"simulate", "--n", "50", "--reps", "7", "--generator", "yule"},
      {"exact-cdf", "--n-max", "10"},
      {"omega", "--n", "10,020,40", "--alpha", "0.50"},
      {"tail-upper", "--n", "1000", "--beta", "3.0", "--output", "/tmp/x.json"},
      {"tail-lower", "--n", "64", "--alpha", "0.5", "--theta", "6e-1"},
      {"pi-chain", "--n", "100", "--k", "3", "--beta", "3", "--format", "csv"},
      {"good-vertices", "--n", "100", "--beta", "3"},
      {"bounds", "--kind", "sandwich", "--n", "10", "--k", "1", "--beta", "2.718281828459045"},
      {"verify", "--suite", "exact"},
  };
  for (const auto& c : cases) {
    const auto plan = parse(c);
    const auto again = parse(render(plan));
    CHECK(again == plan);
    CHECK(canonical_string(again) == canonical_string(plan));
  }
  CHECK(parse({"omega", "--n", "10,020", "--alpha", "0.50"}).params.at("n") == "10,20");
  CHECK(parse({"tail-lower", "--n", "64", "--alpha", "0.5", "--theta", "6e-1"}).params.at("theta") == "0.6");
}

TEST_CASE("exact-cdf csv") {
  const auto r = call({"exact-cdf", "--n-max", "4", "--k-max", "3"});
  CHECK(r.code == kExitOk);
  std::istringstream in(r.out);
  std::string header, line;
  std::getline(in, header);
  CHECK(header == "n,k,A_k_n,prob_num,prob_den,prob_float");
  std::vector<std::string> rows;
  while (std::getline(in, line)) rows.push_back(line);
  CHECK(rows.size() == 16);
  CHECK(rows[4 * 3 + 2].rfind("4,2,5,5,6,", 0) == 0);
}

TEST_CASE("resource limit exit code") {
  const auto r = call({"exact-cdf", "--n-max", "5000", "--k-max", "3"});
  CHECK(r.code == kExitResourceLimit);
  CHECK(r.err.find("resource limit") != std::string::npos);
}

TEST_CASE("usage exit code") {
  const auto r = call({"omega", "--n", "10", "--alpha", "1.5"});
  CHECK(r.code == kExitUsage);
  CHECK(r.out.empty());
}

TEST_CASE("help exits cleanly") {
  const auto r = call({"--help"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("rrt-ldp/1") != std::string::npos);
}

TEST_CASE("tail-upper json") {
  const auto r = call({"tail-upper", "--n", "1000", "--beta", "3", "--reps", "2000", "--seed", "42"});
  REQUIRE(r.code == kExitOk);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("schema") == "rrt-ldp/1");
  for (const char* key : {"event", "threshold", "estimate", "std_error", "reps", "seed"}) CHECK(j.contains(key));
  CHECK(j.at("threshold") == 21);
  CHECK(j.at("reps") == 2000);
  CHECK(j.at("seed") == 42);
}

TEST_CASE("byte-identical output for identical plans") {
  const std::vector<std::string> args{"pi-chain", "--n", "1000", "--k", "4", "--beta", "3", "--reps", "5000"};
  CHECK(call(args).out == call(args).out);
  const std::vector<std::string> sim{"simulate", "--n", "30", "--reps", "20", "--seed", "3"};
  const auto a = call(sim);
  CHECK(a.out == call(sim).out);
  CHECK(a.out.rfind("n,rep,height\n30,0,", 0) == 0);
}

TEST_CASE("flattened csv for tail commands") {
  const auto r = call({"pi-chain", "--n", "10", "--k", "1", "--beta", "3", "--reps", "100", "--format", "csv"});
  REQUIRE(r.code == kExitOk);
  std::istringstream in(r.out);
  std::string header;
  std::getline(in, header);
  CHECK(header.rfind("schema,command,", 0) == 0);
  CHECK(header.find("sandwich_upper") != std::string::npos);
}

TEST_CASE("omega csv") {
  const auto r = call({"omega", "--n", "10,20", "--alpha", "0.5"});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.rfind("n,alpha,threshold,neg_ln_F,omega\n10,0.5,3,", 0) == 0);
}

TEST_CASE("bounds kinds") {
  const auto r = call({"bounds", "--kind", "rates", "--beta", "3"});
  REQUIRE(r.code == kExitOk);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("J_sf").get<double>() == doctest::Approx(0.2958).epsilon(1e-4));
  const auto p = nlohmann::json::parse(call({"bounds", "--kind", "partition", "--N", "10"}).out);
  CHECK(p.at("count") == "2100");
  CHECK(call({"bounds", "--kind", "tower", "--x", "0.5", "--k", "1"}).code == kExitUsage);
}

TEST_CASE("verify exit codes") {
  const auto tree = call({"verify", "--suite", "tree"});
  CHECK(tree.code == kExitOk);
  CHECK(tree.out.find("5/5 checks passed") != std::string::npos);
  CHECK(tree.out == call({"verify", "--suite", "tree"}).out);
  // the bounds suite carries the level-1 tail check, which fails at n = 1e4
  const auto bounds = call({"verify", "--suite", "bounds", "--format", "json"});
  CHECK(bounds.code == kExitVerifyFailed);
  const auto j = nlohmann::json::parse(bounds.out);
  CHECK(j.at("passed") == false);
  for (const auto& c : j.at("checks")) CHECK(c.at("passed") == (c.at("name") != "level1_tail_bound"));
}
