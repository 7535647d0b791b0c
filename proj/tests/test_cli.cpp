#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "weylmax/cli.hpp"
#include "weylmax/errors.hpp"
#include "weylmax/report.hpp"

using namespace weylmax;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "weylmax_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("number formatting round-trips") {
  for (double v : {0.1, 1.0 / 3.0, 5.2915026221291814, 1e-300, -2.5e17}) CHECK(std::stod(format_double(v)) == v);
  CHECK(format_double(4.0) == "4");
  CHECK(dump_json(nlohmann::ordered_json{{"b", 0.1}, {"a", 1}}) == R"({"b":0.10000000000000001,"a":1})");
  CHECK(dump_json(nlohmann::ordered_json{{"x", std::nan("")}}) == R"({"x":null})");
}

TEST_CASE("ladder syntax") {
  CHECK(parse_ladder("1024,2048,...,32768") == std::vector<std::int64_t>{1024, 2048, 4096, 8192, 16384, 32768});
  CHECK(parse_ladder("256, 512") == std::vector<std::int64_t>{256, 512});
  CHECK_THROWS_AS(parse_ladder("1024,...,4096"), Error);
  CHECK_THROWS_AS(parse_ladder("10,x"), Error);
}

TEST_CASE("rows and balls CSV round-trip") {
  ExperimentRow r;
  r.N = 1024;
  r.Q = 32;
  r.J = 341;
  r.measure = 0.1 / 3;
  r.sup_lb = 147.25;
  r.hs_norm = 32.5;
  r.ratio = 0.6552855375154558;
  r.wall_ms = 3;
  ExperimentRow bad = r;
  bad.failed = true;
  std::stringstream ss;
  write_rows_csv(ss, {r, bad}, {{"seed", 42}});
  std::string first;
  std::getline(ss, first);
  CHECK(first.rfind("# {\"artifact\":\"weylmax\",\"version\":", 0) == 0);
  ss.seekg(0);
  const RowsFile back = read_rows_csv(ss);
  REQUIRE(back.rows.size() == 2);
  CHECK(back.rows[0].ratio == r.ratio);
  CHECK(back.rows[0].measure == r.measure);
  CHECK(back.rows[1].failed);
  CHECK(back.header["config"]["seed"] == 42);

  const auto x = divergence_set_from_balls(4096, 2, 1.0 / 32, {{7, {1, 2}}, {11, {0, 10}}});
  std::stringstream bs;
  write_balls_csv(bs, x, {{"N", 4096}});
  const BallsFile balls = read_balls_csv(bs);
  CHECK(balls.d == 2);
  REQUIRE(balls.balls.size() == 2);
  CHECK(balls.balls[1].b == std::vector<std::int64_t>{0, 10});

  std::stringstream wrong("N,Q\n1,2\n");
  CHECK_THROWS_AS(read_rows_csv(wrong), Error);
}

TEST_CASE("cli: fixed outputs and exit codes") {
  CHECK(run({"lattice-count", "3", "5", "2"}).out == "{\"count\":4,\"bound\":4,\"ok\":true}\n");
  const Run dl = run({"verify-deligne", "--poly", R"({"d":1,"terms":[{"e":[3],"c":1}]})", "--q", "7"});
  CHECK(dl.code == 0);
  const auto j = nlohmann::json::parse(dl.out);
  CHECK(j["max_modulus"].get<double>() == doctest::Approx(4.7409).epsilon(1e-4));
  CHECK(j["bound"].get<double>() == doctest::Approx(5.2915).epsilon(1e-4));
  CHECK(j["ok"] == true);
  CHECK(run({"selftest"}).code == 0);
  CHECK(run({"no-such-command"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"weyl-table", "--d", "1", "--k", "2", "--q", "9"}).code == 2);
  CHECK(run({"weyl-table", "--d", "3", "--k", "2", "--q", "1009"}).code == 3);
  CHECK(run({"verify-deligne", "--poly", "{", "--q", "7"}).code == 2);
  CHECK(run({"verify-deligne", "--poly", R"({"d":1,"terms":[{"e":[3],"c":1}]})", "--k", "2", "--q", "7"}).code == 2);
  CHECK(run({"fit", "--in", "/nonexistent/rows.csv"}).code == 2);
}

TEST_CASE("cli: weyl table and good set") {
  const Run t = run({"weyl-table", "--d", "1", "--k", "2", "--q", "5"});
  CHECK(t.code == 0);
  std::istringstream lines(t.out);
  std::string line;
  std::getline(lines, line);
  CHECK(line[0] == '#');
  std::getline(lines, line);
  CHECK(line == "b1,re,im,modulus");
  int n = 0;
  while (std::getline(lines, line)) ++n;
  CHECK(n == 5);
  const Run g = run({"good-set", "--d", "2", "--k", "3", "--q", "11", "--c", "0.5"});
  CHECK(g.code == 0);
  CHECK(nlohmann::json::parse(g.out)["density"].get<double>() >= 0.1875);
}

TEST_CASE("cli: build, measure, experiment, fit") {
  const std::string balls = scratch("balls.csv").string();
  const Run b = run({"build-xn", "--d", "1", "--k", "2", "--N", "1024", "--out", balls});
  CHECK(b.code == 0);
  CHECK(nlohmann::json::parse(b.out)["J"] == 341);
  const Run m = run({"measure-xn", "--in", balls});
  CHECK(m.code == 0);
  const auto mj = nlohmann::json::parse(m.out);
  CHECK(mj["J"] == 341);
  for (const char* key : {"estimate", "stderr", "upper_bound", "lower_bound", "overlap_pairs"}) CHECK(mj.contains(key));
  const Run mc = run({"measure-xn", "--in", balls, "--method", "montecarlo", "--samples", "1000"});
  CHECK(mc.code == 0);
  CHECK(mc.err.find("warning") != std::string::npos);

  const std::string rows = scratch("rows.csv").string();
  const Run e = run({"ratio-experiment", "--d", "1", "--k", "2", "--s", "0.0", "--n-ladder", "256,512,1024",
                     "--seed", "42", "--sample-budget", "100", "--out", rows});
  CHECK(e.code == 0);
  std::ifstream in(rows);
  std::string header, columns;
  std::getline(in, header);
  std::getline(in, columns);
  CHECK(columns == "N,Q,J,measure,measure_err,sup_lb,hs_norm,ratio,wall_ms");
  CHECK(nlohmann::json::parse(header.substr(2))["config"]["n_ladder"].size() == 3);
  const Run f = run({"fit", "--in", rows});
  CHECK(f.code == 0);
  CHECK(nlohmann::json::parse(f.out)["n_points"] == 3);

  const Run s = run({"solution-eval", "--d", "1", "--k", "2", "--N", "1024", "--q", "37", "--b", "5", "--delta", "1e-5"});
  CHECK(s.code == 0);
  const Run dcmp = run({"decompose", "--d", "1", "--k", "2", "--N", "1024", "--q", "37", "--b", "5"});
  CHECK(dcmp.code == 0);
  CHECK(nlohmann::json::parse(dcmp.out)["ratio"].get<double>() < 0.5);
  CHECK(run({"decompose", "--d", "1", "--k", "2", "--N", "64", "--q", "37", "--b", "5,1"}).code == 2);
}
