#include <cmath>
#include <set>

#include "biasperm/bias_models.hpp"
#include "biasperm/bias_table.hpp"
#include "biasperm/errors.hpp"
#include "biasperm/league_tree.hpp"
#include "biasperm/permutation.hpp"
#include "biasperm/rng.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace biasperm;

TEST_CASE("permutation parsing and validation") {
  CHECK(Permutation::parse("3,1,2").entries() == std::vector<int>{3, 1, 2});
  CHECK_THROWS_AS(Permutation::parse("5,1,9"), InvalidArgument);
  CHECK(Permutation::parse("519386742").size() == 9);
  CHECK_THROWS_AS(Permutation({1, 1, 2}), InvalidArgument);
  CHECK_THROWS_AS(Permutation({0, 1}), InvalidArgument);
  CHECK(Permutation::reversal(4).inversions() == 6);
  CHECK(Permutation::parse("2,1,3").swapped(0, 2).to_string() == "3,1,2");
}

TEST_CASE("weight of a single adjacent inversion under constant bias") {
  const BiasTable P = constant_bias(4, 0.7);
  const std::vector<int> s{2, 1, 3, 4};
  const double brute = oracle::pair_product(s, [](int a, int b) { return a < b ? 0.7 : 0.3; });
  CHECK(weight<double>(s, P) == doctest::Approx(brute).epsilon(1e-15));
  CHECK(brute == doctest::Approx(0.3 * std::pow(0.7, 5)).epsilon(1e-15));
  CHECK(log_weight(s, P) == doctest::Approx(std::log(brute)));
  CHECK_THROWS_AS(weight<double>(std::vector<int>{1, 2, 3}, P), InvalidArgument);
}

TEST_CASE("zero weight has log weight minus infinity") {
  BiasTable P(3);
  P.set(1, 2, 1.0);
  CHECK(std::isinf(log_weight(std::vector<int>{2, 1, 3}, P)));
  CHECK(weight<double>(std::vector<int>{2, 1, 3}, P) == 0.0);
}

TEST_CASE("inversion table of the worked eight-element example") {
  // Counting larger values before each label by hand; the published table lists x_2 = 7,
  // which exceeds the bound x_2 <= n - 2 = 6.
  const Permutation s = Permutation::parse("8,1,5,3,7,4,6,2");
  const std::vector<int> counted = oracle::inversion_counts(s.entries());
  CHECK(counted == std::vector<int>{1, 6, 2, 3, 1, 2, 1, 0});
  CHECK(inversion_table(s).x == counted);
  CHECK(permutation_from_inversion_table(InversionTable({1, 6, 2, 3, 1, 2, 1, 0})) == s);
  CHECK_THROWS_AS(InversionTable({1, 7, 2, 3, 1, 2, 1, 0}), InvalidArgument);
}

TEST_CASE("inversion tables round trip against brute-force counts") {
  for (int n = 1; n <= 6; ++n) {
    for (const auto& e : oracle::all_permutations(n)) {
      const Permutation s(e);
      const InversionTable t = inversion_table(s);
      REQUIRE(t.x == oracle::inversion_counts(e));
      REQUIRE(permutation_from_inversion_table(t) == s);
      REQUIRE(t.total() == s.inversions());
    }
  }
}

TEST_CASE("staircase walk of the slow-mixing worked example") {
  const StaircaseWalk w = to_staircase_walk(Permutation::parse("5,1,7,8,4,3,6,2"));
  CHECK(w.steps == std::vector<int>{-1, 1, -1, -1, 1, 1, -1, 1});
  int h = 0, peak = 0;
  for (int s : w.steps) peak = std::max(peak, h += s);
  CHECK(w.max_height() == peak);
  CHECK(w.max_height() == 0);
  CHECK(w.heights().back() == 0);
  CHECK(to_staircase_walk(sorted_preimage(w)) == w);
}

TEST_CASE("enumerators produce the right counts in order") {
  int count = 0;
  std::vector<int> prev;
  for_each_permutation(5, [&](const std::vector<int>& p) {
    if (!prev.empty()) CHECK(prev < p);
    prev = p;
    ++count;
  });
  CHECK(count == 120);
  count = 0;
  for_each_walk(4, [&](const std::vector<int>&) { ++count; });
  CHECK(count == 70);
  count = 0;
  for_each_binary_string(3, 3, [&](const std::vector<int>&) { ++count; });
  CHECK(count == 20);
  CHECK(binomial(18, 9) == 48620);
  CHECK(factorial(7) == 5040);
}

TEST_CASE("league tree lookups on the nine-leaf example") {
  const LeagueTree T = LeagueTree::example9();
  const BiasTable P = league_hierarchy(T);
  CHECK(P(1, 4) == 0.8);
  CHECK(P(4, 9) == 0.9);
  CHECK(P(5, 8) == 0.7);
  CHECK(P(4, 1) == doctest::Approx(0.2));
  CHECK(T.q_of(2, 3) == 0.5);
}

TEST_CASE("tree encoding of 519386742") {
  const LeagueTree T = LeagueTree::example9();
  const Permutation s = Permutation::parse("519386742");
  const TreeEncoding E = tree_encode(s, T);
  // Each internal node's string marks left-subtree members with 1, read in permutation order.
  std::map<std::string, std::string> by_members;
  for (int v : T.internal_nodes()) {
    const auto& nd = T.node(v);
    std::string members, expect;
    for (int x : s.entries()) {
      if (!T.covers(v, x)) continue;
      members += std::to_string(x);
      expect += x <= T.node(nd.left).hi ? '1' : '0';
    }
    CHECK(E.strings[v] == expect);
    by_members[members] = E.strings[v];
  }
  CHECK(by_members.at("519386742") == "010100011");
  CHECK(by_members.at("1342") == "1101");
  CHECK(by_members.at("132") == "100");
  CHECK(by_members.at("32") == "01");
  CHECK(by_members.at("56") == "10");
  CHECK(by_members.at("987") == "011");
  CHECK(by_members.at("87") == "01");
  // The published string for this node is 01101, the complement with a wrong count of ones.
  CHECK(by_members.at("59867") == "10010");
  CHECK(tree_decode(E, T) == s);
}

TEST_CASE("tree encoding round trips on several shapes") {
  for (int n = 2; n <= 6; ++n) {
    for (const LeagueTree& T : {LeagueTree::complete(n, 0.7), LeagueTree::random(n, 3), LeagueTree::random(n, 11)}) {
      std::set<std::vector<std::string>> seen;
      for (const auto& e : oracle::all_permutations(n)) {
        const TreeEncoding E = tree_encode(Permutation(e), T);
        REQUIRE(tree_decode(E, T).entries() == e);
        seen.insert(E.strings);
      }
      CHECK(seen.size() == factorial(n));
    }
  }
}

TEST_CASE("tree decode rejects strings with the wrong number of ones") {
  const LeagueTree T = LeagueTree::example9();
  TreeEncoding E = tree_encode(Permutation::parse("519386742"), T);
  E.strings[T.root()] = "110100011";
  CHECK_THROWS_AS(tree_decode(E, T), InvalidArgument);
}

TEST_CASE("league tree json round trip") {
  const LeagueTree T = LeagueTree::example9();
  const LeagueTree U = LeagueTree::from_json(T.to_json());
  CHECK(U.to_json() == T.to_json());
  CHECK(league_hierarchy(U).matrix() == league_hierarchy(T).matrix());
}

TEST_CASE("counter rng is deterministic and splits into distinct streams") {
  CounterRng a(42), b(42), c(43);
  std::vector<std::uint64_t> xa, xb, xc;
  for (int i = 0; i < 8; ++i) xa.push_back(a.next_u64()), xb.push_back(b.next_u64()), xc.push_back(c.next_u64());
  CHECK(xa == xb);
  CHECK(xa != xc);
  CHECK(a.draws() == 8);
  CounterRng s0 = CounterRng(42).split(0), s1 = CounterRng(42).split(1);
  CHECK(s0.next_u64() != s1.next_u64());
  CounterRng r(7);
  double lo = 1, hi = 0;
  for (int i = 0; i < 10000; ++i) {
    const double u = r.uniform01();
    lo = std::min(lo, u), hi = std::max(hi, u);
    const auto k = r.uniform_index(5);
    REQUIRE(k < 5);
  }
  CHECK(lo >= 0.0);
  CHECK(hi < 1.0);
}
