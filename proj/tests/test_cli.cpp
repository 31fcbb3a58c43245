#include <sstream>

#include "biasperm/cli.hpp"
#include "doctest.h"

using namespace biasperm;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(ExperimentConfig cfg) {
  std::ostringstream out, err;
  const int code = run_command(cfg, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> data_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream is(text);
  for (std::string line; std::getline(is, line);)
    if (!line.empty() && line[0] != '#') lines.push_back(line);
  return lines;
}

ExperimentConfig base(const std::string& sub) {
  ExperimentConfig c;
  c.subcommand = sub;
  return c;
}

}  // namespace

TEST_CASE("sample output is byte-identical under the same seed") {
  ExperimentConfig c = base("sample");
  c.chain = "nn";
  c.model = "constant:0.7";
  c.n = 5;
  c.steps = 2000;
  c.seed = 17;
  const Run a = run(c), b = run(c);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  c.seed = 18;
  CHECK(run(c).out != a.out);
  CHECK(a.out.find("# seed: 17") != std::string::npos);
  CHECK(a.out.find("# spec-revision: 1") != std::string::npos);
}

TEST_CASE("exact over a range gives one row per size with growing tau") {
  ExperimentConfig c = base("exact");
  c.chain = "nn";
  c.model = "constant:0.5";
  c.n_range = {3, 6};
  const Run r = run(c);
  REQUIRE(r.code == 0);
  const auto lines = data_lines(r.out);
  REQUIRE(lines.size() == 5);
  CHECK(lines[0] == "n,chain,model,eps,tau,gap,pi_min,caveat");
  int prev = 0;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    std::vector<std::string> cols;
    std::istringstream is(lines[i]);
    for (std::string f; std::getline(is, f, ',');) cols.push_back(f);
    const int tau = std::stoi(cols[4]);
    CHECK(tau > prev);
    prev = tau;
  }
}

TEST_CASE("exit codes for caps, bad input and size mismatches") {
  ExperimentConfig c = base("exact");
  c.chain = "nn";
  c.model = "constant:0.7";
  c.n = 9;
  CHECK(run(c).code == exit_cap);
  c.model = "nonsense";
  CHECK(run(c).code == exit_usage);
  c.chain = "tree";
  c.model = "league:data/league9.json";
  c.n = 5;
  const Run r = run(c);
  CHECK(r.code == exit_usage);
  CHECK(r.err.find("9 leaves") != std::string::npos);
  ExperimentConfig p = base("paths");
  p.kind = "tree";
  p.model = "league:data/league9.json";
  CHECK(run(p).code == exit_usage);
  ExperimentConfig s = base("slowmix");
  s.n = 3;
  CHECK(run(s).code == exit_usage);
}

TEST_CASE("constant models are coerced with a notice") {
  ExperimentConfig c = base("exact");
  c.chain = "inv";
  c.model = "constant:0.7";
  c.n = 4;
  const Run r = run(c);
  CHECK(r.code == 0);
  CHECK(r.err.find("coerced") != std::string::npos);
}

TEST_CASE("json output carries metadata and rows") {
  ExperimentConfig c = base("exact");
  c.chain = "asep";
  c.ones = 2;
  c.zeros = 2;
  c.format = "json";
  const Run r = run(c);
  CHECK(r.code == 0);
  CHECK(r.out.find("\"meta\"") != std::string::npos);
  CHECK(r.out.find("\"rows\"") != std::string::npos);
}

TEST_CASE("paths report passes floors on a choose-your-weapon model") {
  ExperimentConfig c = base("paths");
  c.kind = "inv";
  c.model = "cyw:0.6,0.7,0.8,0.9";
  c.n = 5;
  const Run r = run(c);
  REQUIRE(r.code == 0);
  const auto lines = data_lines(r.out);
  REQUIRE(lines.size() == 2);
  CHECK(lines[1].find(",pass,") != std::string::npos);
  CHECK(r.out.find("# log-base: natural") != std::string::npos);
}

TEST_CASE("verify exit code reflects its failing checks") {
  ExperimentConfig c = base("verify");
  c.fast = true;
  const Run r = run(c);
  const bool any_fail = r.out.find("\nFAIL ") != std::string::npos;
  CHECK(r.code == (any_fail ? exit_invariant : exit_ok));
  CHECK(r.out.find("summary:") != std::string::npos);
}

TEST_CASE("range parsing") {
  CHECK(parse_range("3:7") == std::pair<int, int>{3, 7});
  CHECK_THROWS(parse_range("7:3"));
  CHECK_THROWS(parse_range("3-7"));
}
