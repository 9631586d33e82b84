#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "qlg/report.hpp"

using namespace qlg;

TEST_SUITE("report") {

TEST_CASE("fmt_double round trips and uses a dot") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double x = u(rng) * std::pow(10.0, int(i % 40) - 20);
    const std::string s = fmt_double(x);
    CHECK(std::stod(s) == x);
    CHECK(s.find(',') == std::string::npos);
  }
  CHECK(fmt_double(0.5) == "0.5");
  CHECK(fmt_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
}

TEST_CASE("CSV quoting and line ends") {
  CsvTable t({"a", "b"});
  t.row({"1", "x,y"}).row({"he said \"hi\"", ""});
  CHECK(t.str() == "a,b\r\n1,\"x,y\"\r\n\"he said \"\"hi\"\"\",\r\n");
  CHECK_THROWS(t.row({"only one"}));
}

TEST_CASE("sha256 known answer") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("manifest hash depends only on the config") {
  const Json cfg{{"seed", 7}, {"eps_list", {0.1, 0.05}}};
  const Json a = make_manifest("x", "anchor", cfg, 7, {"f.csv"});
  const Json b = make_manifest("x", "anchor", cfg, 7, {"f.csv"});
  CHECK(a.dump() == b.dump());
  CHECK(a.at("config_sha256") == sha256_hex(cfg.dump()));
  Json other = cfg;
  other["seed"] = 8;
  CHECK(make_manifest("x", "anchor", other, 8, {}).at("config_sha256") != a.at("config_sha256"));
}

}
