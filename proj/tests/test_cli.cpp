#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lccp/cli.hpp"
#include "lccp/error.hpp"

using lccp::cli::run;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::size_t count_lines(const std::string& text) {
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

}  // namespace

TEST_CASE("exact", "[cli]") {
  CHECK(invoke({"exact", "--n", "3", "--p", "0"}).out == "2.5\n");
  CHECK(invoke({"exact", "--n", "3", "--p", "1"}).out == "5.5\n");

  const auto dist = invoke({"exact", "--n", "3", "--dist", R"({"sizes":{"1":0.5,"2":0.5}})"});
  CHECK(dist.code == 0);
  CHECK(dist.out == "3.7\n");

  const auto beyond = invoke({"exact", "--n", "3", "--dist", R"({"sizes":{"3":1.0}})"});
  CHECK(beyond.code == lccp::cli::kExitUsage);
  CHECK(beyond.err.find("support beyond {1,2}") != std::string::npos);
  CHECK(beyond.err.find("simulate") != std::string::npos);

  const auto doc = nlohmann::json::parse(
      invoke({"exact", "--n", "3", "--p", "0", "--tail", "3", "--format", "json"}).out);
  CHECK(doc["expected_complete"] == 2.5);
  CHECK(doc["tail"].size() == 4);
  CHECK(doc["tail"][1] == 1.0);

  const auto csv = invoke({"exact", "--n", "3", "--p", "0", "--format", "csv"});
  CHECK(csv.out == "n,p,expected_complete\n3,0,2.5\n");
}

TEST_CASE("usage errors exit with 2", "[cli][errors]") {
  CHECK(invoke({}).code == 2);
  CHECK(invoke({"exact", "--n", "3"}).code == 2);
  CHECK(invoke({"exact", "--n", "3", "--p", "2"}).code == 2);
  CHECK(invoke({"exact", "--n", "2", "--p", "0"}).code == 2);
  CHECK(invoke({"simulate", "--n", "3", "--p", "1"}).code == 2);  // no seed
  CHECK(invoke({"simulate", "--n", "3", "--p", "1", "--seed", "1", "--target", "bogus"}).code == 2);
  CHECK(invoke({"formula", "nope", "--n", "3"}).code == 2);
  CHECK(invoke({"sweep", "--n", "3", "--grid", "0,1.5", "--reps", "0"}).code == 2);
  CHECK(invoke({"sweep", "--n", "3", "--grid", "0,1", "--reps", "5"}).code == 2);  // no seed
  CHECK(invoke({"--help"}).code == 0);
}

TEST_CASE("formula and min-samples", "[cli]") {
  const auto st1 = invoke({"formula", "st1", "--n", "10", "--variant", "tailsum"});
  CHECK(st1.code == 0);
  CHECK(st1.out.find("proof_tail_sum") != std::string::npos);
  std::istringstream fields(st1.out);
  double value = 0;
  fields >> value;
  CHECK(value == Catch::Approx(6.488970588235).epsilon(1e-12));

  const auto printed = nlohmann::json::parse(
      invoke({"formula", "st1", "--n", "3", "--variant", "printed", "--format", "json"}).out);
  CHECK(printed["provenance"] == "printed_closed_form");
  CHECK(printed["value"].get<double>() == Catch::Approx(138.0 / 66));

  CHECK(invoke({"formula", "ccp-partial", "--n", "3", "--r", "2"}).out == "2.5 baseline\n");
  std::istringstream series(invoke({"formula", "kp3", "--p", "1", "--variant", "series"}).out);
  double series_value = 0;
  std::string tag;
  series >> series_value >> tag;
  CHECK(series_value == Catch::Approx(3.25).epsilon(1e-11));
  CHECK(tag == "proof_series");

  CHECK(invoke({"min-samples", "--n", "6", "--dist", R"({"sizes":{"1":0.5,"2":0.5}})"}).out ==
        "4 proven\n");
  const auto conj = nlohmann::json::parse(
      invoke({"min-samples", "--n", "12", "--dist", R"({"sizes":{"5":1}})", "--format", "json"}).out);
  CHECK(conj["status"] == "conjecture");
  CHECK(conj["value"] == 4);
}

TEST_CASE("simulate", "[cli]") {
  const auto r = invoke({"simulate", "--n", "5", "--p", "1", "--reps", "20000", "--seed", "1",
                         "--format", "json"});
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  for (const char* key : {"reps", "mean", "std_error", "five_number", "seed"}) {
    CHECK(doc.contains(key));
  }
  const double mean = doc["mean"], se = doc["std_error"];
  CHECK(std::abs(mean - 137.0 / 12) <= 3 * se);

  const std::vector<std::string> args = {"simulate", "--n",   "9",  "--p",      "0.2", "--reps",
                                         "300",      "--seed", "42", "--format", "csv"};
  const auto a = invoke(args), b = invoke(args);
  CHECK(a.out == b.out);
  CHECK(count_lines(a.out) == 2);

  const auto specific = invoke({"simulate", "--n", "6", "--dist", R"({"sizes":{"3":1}})",
                                "--target", "specific:0,4", "--mode", "known", "--reps", "50",
                                "--seed", "3"});
  CHECK(specific.code == 0);
}

TEST_CASE("sweep", "[cli]") {
  const auto r = invoke({"sweep", "--n", "3", "--grid", "0,1", "--reps", "0"});
  REQUIRE(r.code == 0);
  std::istringstream lines(r.out);
  std::string header, first, second;
  std::getline(lines, header);
  std::getline(lines, first);
  std::getline(lines, second);
  CHECK(header.rfind("n,p,expected_exact,normalized_exact,convex_baseline,sim_mean", 0) == 0);
  CHECK(first.rfind("3,0,2.5,", 0) == 0);
  CHECK(second.rfind("3,1,5.5,", 0) == 0);
  CHECK(r.out.find('\r') == std::string::npos);

  const auto grid = lccp::cli::parse_grid("0:1:0.1");
  REQUIRE(grid.size() == 11);
  CHECK(grid[3] == 0.3);
  CHECK(grid[10] == 1.0);
  CHECK(lccp::cli::parse_grid("0.5") == std::vector<double>{0.5});

  const std::vector<std::string> args = {"sweep", "--n", "20", "--grid", "0:1:0.5", "--reps", "40",
                                         "--seed", "7"};
  const auto a = invoke(args), b = invoke(args);
  CHECK(a.out == b.out);
  CHECK(count_lines(a.out) == 4);

  const auto json = nlohmann::json::parse(
      invoke({"sweep", "--n", "10", "--grid", "0.5", "--reps", "20", "--seed", "1", "--format", "json"}).out);
  REQUIRE(json.size() == 1);
  CHECK(json[0]["reps"] == 20);
  CHECK(json[0].contains("sim_q75"));
}

TEST_CASE("sweep rows", "[cli]") {
  const auto rows = lccp::cli::sweep(12, {0.0, 0.5, 1.0}, 0, 0);
  REQUIRE(rows.size() == 3);
  CHECK(rows[1].convex_baseline == Catch::Approx(0.5 * rows[0].expected_exact + 0.5 * rows[2].expected_exact));
  CHECK_FALSE(rows[1].sim.has_value());
  CHECK(rows[2].normalized_exact == Catch::Approx(1.0));
}

TEST_CASE("verify reports findings without failing", "[cli]") {
  const auto r = invoke({"verify", "--n-max", "4"});
  CHECK(r.code == 0);
  CHECK(r.out.find("FAIL") == std::string::npos);
  CHECK(r.out.find("FINDING E[ST1] printed closed form vs tail sum") != std::string::npos);
  CHECK(r.out.find("2.0909") != std::string::npos);
  CHECK(r.out.find("PASS    Min 2-LCCP witness length ceil(2n/3)") != std::string::npos);
  CHECK(r.out.find("PASS    Strict inequality") != std::string::npos);
}
