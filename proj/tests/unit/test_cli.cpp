#include <doctest.h>

#include <sstream>

#include <json.hpp>

#include "ckn/stability.hpp"

#include "ckn/commands.hpp"
#include "ckn/report.hpp"

using namespace ckn;
using doctest::Approx;

TEST_CASE("range syntax") {
  CHECK(parse_range("4") == std::vector<double>{4.0});
  CHECK(parse_range("4:5.5:0.5") == std::vector<double>{4.0, 4.5, 5.0, 5.5});
  CHECK(parse_range("2.2:3:0.4") == std::vector<double>{2.2, 2.6, 3.0});
  CHECK(parse_range("1:1:1") == std::vector<double>{1.0});
  CHECK_THROWS_AS(parse_range("a"), std::invalid_argument);
  CHECK_THROWS_AS(parse_range("1:2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_range("2:1:0.1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_range("1:2:0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_range("1:2:3:4"), std::invalid_argument);
}

TEST_CASE("config validation") {
  RunConfig c;
  c.n_values = {3};
  c.p_values = {6.0};
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.p_values = {4.0};
  CHECK_NOTHROW(c.validate());
  c.M = 5;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  RunConfig two;
  two.n_values = {2, 3};
  two.p_values = {3.0, 4.0, 5.0};
  CHECK(two.pairs().size() == 6);
  CHECK(two.pairs()[3] == std::pair{3, 3.0});
}

TEST_CASE("number formatting is round-trip and locale free") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(-2.5e-12) == "-2.5e-12");
  CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
  CHECK(format_number(NAN) == "nan");
}

TEST_CASE("csv and json writers") {
  Table t;
  t.columns = {"a", "b", "c"};
  auto& r = t.add_row("sig1");
  r.cells = {1.5, 2LL, std::string("x,y")};
  t.add_row("sig2");
  std::ostringstream csv;
  write_csv(csv, t);
  CHECK(csv.str() == "a,b,c\n1.5,2,\"x,y\"\n,,\n");
  std::ostringstream js;
  ReportMeta m;
  m.command = "constants";
  m.params = {{3, 4.0}};
  write_json(js, t, m);
  const auto j = nlohmann::json::parse(js.str());
  CHECK(j["meta"]["version"] == kVersion);
  CHECK(j["meta"]["params"][0]["n"] == 3);
  CHECK(j["rows"].size() == 2);
  CHECK(j["rows"][0]["a"] == 1.5);
  CHECK(j["rows"][0]["signature"] == "sig1");
  CHECK(j["rows"][1]["a"].is_null());
  CHECK(t.number(0, "b") == 2.0);
  CHECK_THROWS(t.column("zzz"));
}

TEST_CASE("empty sweep") {
  RunConfig c;
  CHECK(cmd_constants(c).rows.empty());
  CHECK(cmd_sharpness(c).rows.empty());
  CHECK(cmd_interactions(c).rows.empty());
}

TEST_CASE("spectrum table at p=4, n=3") {
  RunConfig c;
  c.n_values = {3};
  c.p_values = {4.0};
  c.ells = {0, 1};
  c.k = 2;
  const auto t = cmd_spectrum(c);
  REQUIRE(t.rows.size() == 5);
  CHECK(t.number(0, "gamma") == Approx(1.0).epsilon(1e-8));
  CHECK(t.number(1, "gamma") == Approx(3.0).epsilon(1e-8));
  CHECK(t.number(2, "gamma") == Approx(3.0).epsilon(1e-8));
  CHECK(std::get<std::string>(t.at(4, "kind")) == "gamma3");
  CHECK(t.number(4, "gamma") > 3.0);
  for (const auto& r : t.rows) CHECK(r.signature.find("n=3;p=4;") == 0);
}

TEST_CASE("constants rows are deterministic across thread counts") {
  RunConfig c;
  c.n_values = {3};
  c.p_values = {4.0, 5.0};
  std::ostringstream a, b;
  write_csv(a, cmd_constants(c));
  c.threads = 2;
  write_csv(b, cmd_constants(c));
  CHECK(a.str() == b.str());
  const auto t = cmd_constants(c);
  CHECK(t.number(0, "E0_over_F_plus_1") > t.number(1, "E0_over_F_plus_1"));
  CHECK(t.number(0, "F") > 0.0);
  CHECK(t.number(0, "grid_floor") <= 1e-6);
}

TEST_CASE("per-row failures are recorded") {
  RunConfig c;
  c.n_values = {3};
  c.p_values = {4.0};
  c.grid_S = 3.0;  // below the minimum half-length
  const auto t = cmd_constants(c);
  REQUIRE(t.rows.size() == 1);
  CHECK(!std::get<std::string>(t.at(0, "error")).empty());
}

TEST_CASE("sharpness and interactions") {
  RunConfig c;
  c.n_values = {3};
  c.p_values = {4.0};
  const auto s = cmd_sharpness(c);
  REQUIRE(s.rows.size() == 1);
  CHECK(s.number(0, "slope_residual") == Approx(3.0).epsilon(0.03));
  CHECK(s.number(0, "slope_naive") == Approx(2.0).epsilon(0.05));
  c.detail = true;
  CHECK(cmd_sharpness(c).rows.size() == default_mus().size());
  c.gaps = {8.0, 12.0};
  const auto w = cmd_interactions(c);
  CHECK(w.rows.size() == 8);
}

TEST_CASE("selftest passes by default") {
  RunConfig c;
  const auto r = cmd_selftest(c);
  CHECK(r.passed);
  CHECK(r.table.rows.size() > 10);
}
