#include "doctest.h"

#include <algorithm>

#include "qplasma/config.hpp"

using namespace qplasma::config;

TEST_CASE("parse with comments and overrides") {
  const auto c = parse_config(
      "# scenario\n"
      "model = wigner   # inline comment\n"
      "H = 1\n"
      "alpha=0.05\n"
      "\n"
      "streams = -1.5, -0.5, 0.5, 1.5\n",
      {"alpha=0.1", "nx=64"});
  CHECK(c.model == "wigner");
  CHECK(c.H == 1.0);
  CHECK(c.alpha == 0.1);
  CHECK(c.nx == 64);
  CHECK(c.streams == std::vector<double>{-1.5, -0.5, 0.5, 1.5});
  CHECK(c.box_length() == doctest::Approx(2 * std::numbers::pi));
  CHECK(c.grid().space.nx == 64);
}

TEST_CASE("every problem is reported at once") {
  try {
    parse_config("model = vlasov\nnx = 100\nbogus = 3\nalpha = abc\nthis line is wrong\n", {"dt=-1", "noequals"});
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const auto& is = e.issues();
    auto has = [&](const std::string& key) {
      return std::any_of(is.begin(), is.end(), [&](const ConfigIssue& i) { return i.key == key; });
    };
    CHECK(has("nx"));
    CHECK(has("bogus"));
    CHECK(has("alpha"));
    CHECK(has("dt"));
    CHECK(has("noequals"));
    CHECK(is.size() >= 6);
    const auto bogus = std::find_if(is.begin(), is.end(), [](const ConfigIssue& i) { return i.key == "bogus"; });
    CHECK(bogus->line == 3);
    CHECK(std::string(e.what()).find("bogus") != std::string::npos);
  }
}

TEST_CASE("cross-key validation") {
  ScenarioConfig c;
  CHECK(validate(c).empty());
  c.model = "hartree";
  const auto issues = validate(c);
  CHECK(issues.size() == 2);  // H and streams
  c.H = 1.0;
  c.streams = {0.5};
  CHECK(validate(c).empty());
  c.t_end = 1.03;
  c.dt = 0.05;
  CHECK(validate(c).size() == 1);
  CHECK_THROWS_AS(parse_config("model = quantum\n"), ConfigError);
}

TEST_CASE("serialization round trip and hash") {
  ScenarioConfig c;
  c.model = "hartree";
  c.H = 0.7;
  c.alpha = 1.0 / 3.0;
  c.streams = {-0.1, 0.2};
  c.out_dir = "a";
  const auto text = serialize(c);
  CHECK(parse_config(text) == c);
  for (const auto& key : known_keys()) CHECK(text.find(key + " =") != std::string::npos);
  auto d = c;
  d.out_dir = "elsewhere";
  CHECK(config_hash(c) == config_hash(d));
  d.alpha = 0.3;
  CHECK(config_hash(c) != config_hash(d));
  CHECK(config_hash(c).size() == 16);
}
