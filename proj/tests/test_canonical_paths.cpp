#include <cmath>
#include <map>

#include "biasperm/analysis.hpp"
#include "biasperm/canonical_paths.hpp"
#include "biasperm/errors.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace biasperm;

namespace {

bool is_subsequence(const std::vector<State>& needles, const std::vector<State>& hay) {
  std::size_t k = 0;
  for (const auto& s : hay)
    if (k < needles.size() && s == needles[k]) ++k;
  return k == needles.size();
}

// Congestion recomputed from scratch: loads on directed adjacent-swap edges.
double congestion_oracle(const ChainKernel& aux, const BiasTable& P, int n, bool tree) {
  const auto perms = oracle::all_permutations(n);
  const auto w = [&](const State& s) { return weight<double>(s, P); };
  std::map<std::pair<State, State>, double> load;
  const TreePathMode mode = tree_path_mode(P);
  for (const auto& s : perms)
    for (const auto& [b, pr] : transition_distribution<double>(aux, s)) {
      if (b == s) continue;
      const NnPath path = tree ? path_tree_to_nn(s, b, mode) : path_inv_to_nn(s, b);
      for (int k = 0; k < path.length(); ++k) load[{path.states[k], path.states[k + 1]}] += path.length() * w(s) * pr;
    }
  double A = 0.0;
  for (const auto& [edge, l] : load) {
    const auto& [u, v] = edge;
    int pos = 0;
    while (u[pos] == v[pos]) ++pos;
    const double p_nn = P(u[pos + 1], u[pos]) / (n - 1);
    A = std::max(A, l / (w(u) * p_nn));
  }
  return A;
}

}  // namespace

TEST_CASE("tree path for transposing 5 and 7 passes the published configurations") {
  // The published example omits label 6; appending it keeps the rows inside S_10.
  const auto with6 = [](State s) {
    s.push_back(6);
    return s;
  };
  const State sigma = with6({5, 8, 9, 2, 10, 3, 4, 1, 7});
  const State beta = with6({7, 8, 9, 2, 10, 3, 4, 1, 5});
  const NnPath path = path_tree_to_nn(sigma, beta, TreePathMode::direct);
  const std::vector<State> rows = {with6({5, 8, 9, 2, 10, 3, 4, 1, 7}), with6({5, 2, 8, 9, 3, 10, 4, 1, 7}),
                                   with6({2, 8, 9, 3, 10, 4, 1, 5, 7}), with6({2, 8, 9, 3, 10, 4, 1, 7, 5}),
                                   with6({7, 2, 8, 9, 3, 10, 4, 1, 5}), with6({7, 8, 9, 2, 10, 3, 4, 1, 5})};
  CHECK(is_subsequence(rows, path.states));
  // Stage one, row by row.
  REQUIRE(path.states.size() >= 4);
  CHECK(path.states[1] == with6({5, 8, 9, 2, 3, 10, 4, 1, 7}));
  CHECK(path.states[2] == with6({5, 8, 2, 9, 3, 10, 4, 1, 7}));
  CHECK(path.states[3] == with6({5, 2, 8, 9, 3, 10, 4, 1, 7}));
  CHECK(path.stages[0] == 1);
  CHECK(path.stages[2] == 1);
  CHECK(path.stages[3] == 2);
  CHECK(path.length() <= 4 * 10);
}

TEST_CASE("inversion path moves the left element right then the right element left") {
  const State sigma{3, 1, 2, 4}, beta{4, 1, 2, 3};
  const NnPath path = path_inv_to_nn(sigma, beta);
  const std::vector<State> expect = {{3, 1, 2, 4}, {1, 3, 2, 4}, {1, 2, 3, 4}, {1, 2, 4, 3}, {1, 4, 2, 3}, {4, 1, 2, 3}};
  CHECK(path.states == expect);
  CHECK(path.length() == 2 * 3 - 1);
  const PathReport r = verify_path<double>(path, sigma, beta, choose_your_weapon({{0.6, 0.7, 0.8}, {}}));
  CHECK(r.endpoints_ok);
  CHECK(r.legal);
  CHECK(r.floor_ok);
}

TEST_CASE("inversion paths keep the weight floor on every edge") {
  for (int n = 3; n <= 5; ++n) {
    std::vector<double> r(n - 1);
    for (int i = 0; i < n - 1; ++i) r[i] = 0.55 + 0.4 * std::fmod(0.37 * (i + 1) * n, 1.0);
    const InvKernel kk({r, {}});
    for (const auto& s : oracle::all_permutations(n))
      for (const auto& [b, p] : transition_distribution<Rational>(kk, s)) {
        if (b == s) continue;
        const PathReport rep = verify_path<Rational>(path_inv_to_nn(s, b), s, b, kk.P);
        REQUIRE(rep.endpoints_ok);
        REQUIRE(rep.legal);
        REQUIRE(rep.floor_ok);
      }
  }
}

TEST_CASE("tree path mode follows the monotonicity clauses") {
  CHECK(tree_path_mode(league_hierarchy(LeagueTree::left_comb({0.9, 0.8, 0.7}))) == TreePathMode::direct);
  CHECK(tree_path_mode(league_hierarchy(LeagueTree::right_comb({0.6, 0.7, 0.8}))) == TreePathMode::mirrored);
  BiasTable P(3);
  P.set(1, 2, 0.9);
  P.set(1, 3, 0.6);
  P.set(2, 3, 0.9);
  CHECK(tree_path_mode(P) == TreePathMode::unguaranteed);
}

TEST_CASE("tree paths keep the weight floor under weakly monotone leagues") {
  for (int n = 3; n <= 5; ++n) {
    std::vector<LeagueTree> shapes = {LeagueTree::complete(n, 0.7)};
    std::vector<double> down(n - 1), up(n - 1);
    for (int k = 0; k < n - 1; ++k) down[k] = 0.9 - 0.05 * k, up[k] = 0.6 + 0.05 * k;
    shapes.push_back(LeagueTree::left_comb(down));
    shapes.push_back(LeagueTree::right_comb(up));
    for (std::uint64_t seed = 1; seed <= 6; ++seed) shapes.push_back(LeagueTree::random(n, seed));
    for (const auto& T : shapes) {
      const TreeKernel k(T);
      REQUIRE(is_weakly_monotone(k.P).weakly_monotone());
      const TreePathMode mode = tree_path_mode(k.P);
      for (const auto& s : oracle::all_permutations(n))
        for (const auto& [b, p] : transition_distribution<double>(k, s)) {
          if (b == s) continue;
          const NnPath path = path_tree_to_nn(s, b, mode, &T);
          const PathReport rep = verify_path<Rational>(path, s, b, k.P);
          REQUIRE(rep.endpoints_ok);
          REQUIRE(rep.legal);
          REQUIRE(rep.floor_ok);
          REQUIRE(path.length() <= 4 * n);
        }
    }
  }
}

TEST_CASE("tree path rejects a pair that is not a tree move") {
  const LeagueTree T = LeagueTree::example9();
  const State s{5, 1, 9, 3, 8, 6, 7, 4, 2};
  State b = s;
  std::swap(b[0], b[6]);
  CHECK_THROWS_AS(path_tree_to_nn(s, b, TreePathMode::direct, &T), InvalidArgument);
}

TEST_CASE("congestion agrees with an independent accumulation") {
  {
    const InvKernel k({{0.7, 0.7}, {}});
    const CongestionReport rep = congestion_A(PathKind::inv, k);
    CHECK(rep.A == doctest::Approx(congestion_oracle(k, k.P, 3, false)).epsilon(1e-12));
    CHECK(rep.floor_failures == 0);
  }
  for (int n = 3; n <= 5; ++n) {
    const InvKernel ki({std::vector<double>(n - 1, 0.8), {}});
    CHECK(congestion_A(PathKind::inv, ki).A == doctest::Approx(congestion_oracle(ki, ki.P, n, false)).epsilon(1e-12));
    const TreeKernel kt(LeagueTree::random(n, 40 + n));
    CHECK(congestion_A(PathKind::tree, kt).A == doctest::Approx(congestion_oracle(kt, kt.P, n, true)).epsilon(1e-12));
  }
}

TEST_CASE("constant 0.7 inversion congestion on three elements") {
  const InvKernel k({{0.7, 0.7}, {}});
  const CongestionReport rep = congestion_A(PathKind::inv, k);
  // Regression pin of the independently accumulated value.
  CHECK(rep.A == doctest::Approx(congestion_oracle(k, k.P, 3, false)));
  CHECK(rep.A == doctest::Approx(5.0 / 3.0).epsilon(1e-12));
  CHECK(rep.max_paths_per_edge <= 9);
  CHECK(rep.max_path_length <= 6);
}

TEST_CASE("congestion growth stays within the stated polynomial orders") {
  // A(n) / n^d at the largest size must not exceed its maximum over smaller sizes.
  const auto settled = [](const std::vector<double>& a, int d) {
    double peak = 0.0;
    for (std::size_t i = 0; i + 1 < a.size(); ++i) peak = std::max(peak, a[i] / std::pow(3.0 + i, d));
    return a.back() / std::pow(3.0 + a.size() - 1, d) <= peak;
  };
  std::vector<double> a_inv, a_tree, a_comb;
  for (int n = 3; n <= 6; ++n) {
    a_inv.push_back(congestion_A(PathKind::inv, InvKernel({std::vector<double>(n - 1, 0.7), {}})).A);
    a_tree.push_back(congestion_A(PathKind::tree, TreeKernel(LeagueTree::complete(n, 0.7))).A);
    a_comb.push_back(congestion_A(PathKind::tree, TreeKernel(LeagueTree::left_comb(std::vector<double>(n - 1, 0.7)))).A);
  }
  CHECK(settled(a_inv, 3));
  CHECK(settled(a_tree, 2));
  CHECK(settled(a_comb, 2));
}

TEST_CASE("comparison bound arithmetic and soundness") {
  CHECK(comparison_bound(1.0, 1, 0.5, 0.25) == 12);
  CHECK(comparison_bound(2.0, 1, 0.5, 0.25) >= comparison_bound(1.0, 1, 0.5, 0.25));
  CHECK(comparison_bound(1.0, 3, 0.5, 0.25) >= comparison_bound(1.0, 2, 0.5, 0.25));
  CHECK_THROWS_AS(comparison_bound(1.0, 1, 0.5, 0.5), InvalidArgument);
  for (int n = 3; n <= 5; ++n) {
    const InvKernel aux({std::vector<double>(n - 1, 0.75), {}});
    const StateSpaceIndex idx = StateSpaceIndex::permutations(n);
    const Eigen::VectorXd pi = stationary_exact(aux, idx);
    const auto starts = worst_case_starts(idx);
    const MixingResult ta = mixing_time_exact(build_transition_matrix(aux, idx), pi, 0.25, starts);
    const MixingResult tn = mixing_time_exact(build_transition_matrix(NnKernel{aux.P}, idx), pi, 0.25, starts);
    const long long bound = comparison_bound(congestion_A(PathKind::inv, aux).A, *ta.tau, pi.minCoeff(), 0.25);
    CHECK(bound >= *tn.tau);
  }
}
