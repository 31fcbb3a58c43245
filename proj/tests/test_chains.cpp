#include <cmath>
#include <map>

#include "biasperm/analysis.hpp"
#include "biasperm/chains.hpp"
#include "biasperm/errors.hpp"
#include "biasperm/state_space.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace biasperm;

namespace {

std::map<State, double> as_map(const std::vector<std::pair<State, double>>& d) {
  std::map<State, double> m;
  for (const auto& [s, p] : d) m[s] += p;
  return m;
}

}  // namespace

TEST_CASE("nearest-neighbour one-step distribution from (2,1,3)") {
  const auto d = as_map(transition_distribution<double>(NnKernel{constant_bias(3, 0.7)}, {2, 1, 3}));
  // Position 1: swapping 2,1 sorts them, accepted with 0.7; position 2: swapping 1,3 unsorts, accepted with 0.3.
  CHECK(d.size() == 3);
  CHECK(d.at({1, 2, 3}) == doctest::Approx(0.5 * 0.7));
  CHECK(d.at({2, 3, 1}) == doctest::Approx(0.5 * 0.3));
  CHECK(d.at({2, 1, 3}) == doctest::Approx(0.5));
}

TEST_CASE("two-state nearest-neighbour kernel") {
  const ChainKernel k = NnKernel{constant_bias(2, 0.7)};
  const StateSpaceIndex idx = StateSpaceIndex::permutations(2);
  const Eigen::MatrixXd P = to_dense(build_transition_matrix(k, idx));
  Eigen::MatrixXd expect(2, 2);
  expect << 0.7, 0.3, 0.7, 0.3;
  CHECK((P - expect).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("inversion chain partners on the eight-element example") {
  const State s{8, 1, 5, 3, 7, 4, 6, 2};
  // Value 4 sits at position 5 (0-based); the first larger value after it is 6.
  const int q = inv_partner(s, 5, +1);
  REQUIRE(q >= 0);
  CHECK(s[q] == 6);
  CHECK(s[inv_partner(s, 5, -1)] == 7);
  CHECK(inv_partner(s, 0, +1) == -1);
}

TEST_CASE("inversion chain moves change exactly one inversion-table entry by one") {
  const ChooseYourWeaponSpec spec{{0.6, 0.7, 0.8, 0.9}, {}};
  const InvKernel k(spec);
  for (const auto& e : oracle::all_permutations(5)) {
    const auto x = oracle::inversion_counts(e);
    double hold = 0.0;
    for (const auto& [b, p] : transition_distribution<double>(k, e)) {
      if (b == e) {
        hold += p;
        continue;
      }
      const auto y = oracle::inversion_counts(b);
      int changed = 0, delta = 0;
      for (int i = 0; i < 5; ++i)
        if (x[i] != y[i]) ++changed, delta = y[i] - x[i];
      REQUIRE(changed == 1);
      REQUIRE(std::abs(delta) == 1);
    }
    CHECK(hold >= 0.5 - 1e-12);
  }
}

TEST_CASE("tree chain legality on the nine-leaf example") {
  const LeagueTree T = LeagueTree::example9();
  const State s{5, 1, 9, 3, 8, 6, 7, 4, 2};
  // Between 5 and 7 sit 1, 9, 3, 8, 6; 9, 8 and 6 descend from lca(5,7).
  CHECK_FALSE(tree_pair_legal(s, T, 5, 7));
  // Between 1 and 4 sit 9, 3, 8, 6, 7; 3 descends from lca(1,4).
  CHECK_FALSE(tree_pair_legal(s, T, 1, 4));
  // Between 5 and 1 nothing sits.
  CHECK(tree_pair_legal(s, T, 5, 1));
  // lca(9,4) is the root, which covers every in-between entry.
  CHECK_FALSE(tree_pair_legal(s, T, 9, 4));
  // Between 3 and 2 sit 8, 6, 7, 4, none of them under the node over {2,3}.
  CHECK(tree_pair_legal(s, T, 3, 2));
}

TEST_CASE("legal tree moves multiply the weight by lambda") {
  CounterRng rng(5);
  for (int n = 4; n <= 8; ++n) {
    const TreeKernel k(LeagueTree::random(n, 100 + n));
    for (int trial = 0; trial < 50; ++trial) {
      State s(n);
      for (int i = 0; i < n; ++i) s[i] = i + 1;
      for (int i = n - 1; i > 0; --i) std::swap(s[i], s[rng.uniform_index(i + 1)]);
      for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
          if (!tree_pair_legal(s, k.T, s[a], s[b])) continue;
          State t = s;
          std::swap(t[a], t[b]);
          const double ratio = weight<double>(t, k.P) / weight<double>(s, k.P);
          REQUIRE(ratio == doctest::Approx(k.P(s[b], s[a]) / k.P(s[a], s[b])).epsilon(1e-12));
        }
    }
  }
}

TEST_CASE("exclusion process stationary weights") {
  const double p = 0.7, lambda = p / (1 - p);
  const AsepKernel k{p, 3, 3};
  const StateSpaceIndex idx = StateSpaceIndex::binary_strings(3, 3);
  CHECK(idx.size() == 20);
  const Eigen::VectorXd pi = stationary_from_matrix(build_transition_matrix(k, idx));
  Eigen::VectorXd w(idx.size());
  for (int s = 0; s < idx.size(); ++s) {
    const State& b = idx.state(s);
    int ordered = 0;
    for (int i = 0; i < 6; ++i)
      for (int j = i + 1; j < 6; ++j) ordered += b[i] == 1 && b[j] == 0;
    w[s] = std::pow(lambda, ordered);
  }
  CHECK((pi - oracle::normalized(w)).cwiseAbs().maxCoeff() < 1e-12);

  const AsepKernel two{0.7, 1, 1};
  const StateSpaceIndex i2 = StateSpaceIndex::binary_strings(1, 1);
  const Eigen::VectorXd pi2 = stationary_exact(two, i2);
  CHECK(pi2[i2.id({1, 0})] == doctest::Approx(0.7));
  CHECK(pi2[i2.id({0, 1})] == doctest::Approx(0.3));
}

TEST_CASE("slow-mixing walk model swap ratios") {
  const SlowMixSpec spec = solve_delta(6);
  const WalkWeightModel m = WalkWeightModel::slowmix(spec);
  CHECK(m.lambda_low() == doctest::Approx(1.0 + 1.0 / 24.0));
  CHECK(m.lambda_high() == doctest::Approx(spec.xi));
}

TEST_CASE("walk weights match the permutation weights of sorted preimages") {
  for (int n = 4; n <= 6; ++n) {
    const auto [P, spec] = slow_mixing_bias(n);
    const WalkWeightModel m = WalkWeightModel::slowmix(spec);
    State top(2 * n, -1);
    std::fill(top.begin(), top.begin() + n, 1);
    const double w0 = weight<double>(sorted_preimage(StaircaseWalk(top)), P);
    for_each_walk(n, [&](const std::vector<int>& w) {
      const double pw = weight<double>(sorted_preimage(StaircaseWalk(w)), P) / w0;
      // Walk weights count tiles below the walk relative to the bottom walk, so compare ratios.
      const double ww = walk_weight<double>(w, m) / walk_weight<double>(top, m);
      REQUIRE(ww == doctest::Approx(pw).epsilon(1e-10));
    });
  }
}

TEST_CASE("transposition walk moves change the max height by at most two") {
  const WalkWeightModel m = WalkWeightModel::slowmix(solve_delta(5));
  CounterRng rng(9);
  StaircaseWalk w(default_start(WalkTranspositionKernel{m}, 5));
  int moves = 0;
  for (int t = 0; t < 20000; ++t) {
    const StaircaseWalk v = step_walk_transposition(w, m, rng);
    if (v != w) ++moves;
    REQUIRE(std::abs(v.max_height() - w.max_height()) <= 2);
    w = v;
  }
  CHECK(moves > 0);
}

TEST_CASE("exact detailed balance for the walk chains on n = 4") {
  const WalkWeightModel m = WalkWeightModel::slowmix(solve_delta(4));
  for (const ChainKernel& k : {ChainKernel{WalkKernel{m}}, ChainKernel{WalkTranspositionKernel{m}}}) {
    const StateSpaceIndex idx = StateSpaceIndex::for_kernel(k);
    CHECK(idx.size() == 70);
    const SparseMatrix P = build_transition_matrix(k, idx);
    const Eigen::VectorXd pi = stationary_exact(k, idx);
    CHECK(detailed_balance_residual(P, pi) < 1e-14);
    CHECK((stationary_from_matrix(P) - pi).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("transition rows sum to one for every kernel") {
  const std::vector<ChainKernel> kernels = {NnKernel{constant_bias(4, 0.7)},
                                            InvKernel({{0.6, 0.7, 0.8}, {}}),
                                            TreeKernel(LeagueTree::random(4, 2)),
                                            OnedKernel{0.75, 6},
                                            AsepKernel{0.7, 2, 3},
                                            WalkKernel{WalkWeightModel::constant(3, 0.6)},
                                            WalkTranspositionKernel{WalkWeightModel::constant(3, 0.6)}};
  for (const auto& k : kernels) {
    const StateSpaceIndex idx = StateSpaceIndex::for_kernel(k);
    for (int s = 0; s < idx.size(); ++s) {
      double total = 0;
      for (const auto& [b, p] : transition_distribution<double>(k, idx.state(s))) {
        total += p;
        REQUIRE(idx.contains(b));
      }
      REQUIRE(total == doctest::Approx(1.0).epsilon(1e-14));
    }
  }
}

TEST_CASE("sampled trajectories are reproducible and approach the exact distribution") {
  const ChainKernel k = NnKernel{constant_bias(4, 0.7)};
  const Trajectory a = run(k, default_start(k, 4), 5000, 3, 100);
  const Trajectory b = run(k, default_start(k, 4), 5000, 3, 100);
  CHECK(a.final_state == b.final_state);
  CHECK(a.rows.size() == b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) CHECK(a.rows[i].value == b.rows[i].value);

  const StateSpaceIndex idx = StateSpaceIndex::permutations(4);
  const Eigen::VectorXd pi = stationary_exact(k, idx);
  Eigen::VectorXd hist = Eigen::VectorXd::Zero(idx.size());
  CounterRng rng(11);
  State s = default_start(k, 4);
  for (int t = 0; t < 400000; ++t) {
    s = step(k, s, rng).next;
    hist[idx.id(s)] += 1.0;
  }
  CHECK(oracle::tv(oracle::normalized(hist), pi) < 0.02);
}

TEST_CASE("steps consume a fixed number of draws even when blocked") {
  CounterRng rng(1);
  const NnKernel k{constant_bias(3, 1.0)};
  step(k, {1, 2, 3}, rng);
  CHECK(rng.draws() == 2);
  CounterRng r2(1);
  step(InvKernel({{0.6, 0.7}, {}}), {1, 2, 3}, r2);
  CHECK(r2.draws() == 3);
}

TEST_CASE("invalid chain inputs are rejected") {
  CounterRng rng(1);
  CHECK_THROWS_AS(step_oned(11, 0.7, 10, rng), InvalidArgument);
  CHECK_THROWS_AS(step(NnKernel{constant_bias(3, 0.7)}, {1, 2}, rng), InvalidArgument);
}
