#include "biasperm/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <sstream>

#include "biasperm/analysis.hpp"
#include "biasperm/bias_models.hpp"
#include "biasperm/canonical_paths.hpp"
#include "biasperm/chains.hpp"
#include "biasperm/slow_mixing.hpp"
#include "biasperm/state_space.hpp"

namespace biasperm {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

CheckResult guarded(const std::string& name, const std::function<CheckResult()>& body) {
  try {
    CheckResult r = body();
    r.name = name;
    return r;
  } catch (const std::exception& e) {
    return CheckResult{name, false, std::string("exception: ") + e.what()};
  }
}

std::vector<double> random_rates(CounterRng& rng, int count) {
  std::vector<double> r(count);
  for (auto& v : r) v = 0.5 + 0.45 * rng.uniform01();
  return r;
}

// Complete, a left comb satisfying only the column clause, a right comb
// satisfying only the row clause, and a random monotone tree.
std::vector<LeagueTree> tree_shapes(int n, std::uint64_t seed) {
  std::vector<double> down(n - 1), up(n - 1);
  for (int k = 0; k < n - 1; ++k) {
    down[k] = 0.9 - 0.05 * k;
    up[k] = 0.6 + 0.05 * k;
  }
  return {LeagueTree::complete(n, 0.7), LeagueTree::left_comb(down), LeagueTree::right_comb(up),
          LeagueTree::random(n, seed)};
}

}  // namespace

std::vector<CheckResult> run_invariant_suite(const SuiteOptions& opt) {
  std::vector<CheckResult> out;
  const int big = opt.fast ? 4 : 7;
  const int mid = opt.fast ? 4 : 6;
  const int small = opt.fast ? 4 : 5;
  CounterRng rng(opt.seed);

  out.push_back(guarded("inversion-table round trip, n <= " + std::to_string(big), [&] {
    long long count = 0, bad = 0;
    for (int n = 1; n <= big; ++n) {
      for_each_permutation(n, [&](const std::vector<int>& e) {
        const Permutation s(e);
        const InversionTable t = inversion_table(s);
        if (permutation_from_inversion_table(t) != s || t.total() != s.inversions()) ++bad;
        ++count;
      });
    }
    return CheckResult{"", bad == 0, std::to_string(count) + " permutations, " + std::to_string(bad) + " failures"};
  }));

  out.push_back(guarded("tree encoding round trip, n <= " + std::to_string(mid), [&] {
    long long count = 0, bad = 0;
    for (int n = 2; n <= mid; ++n) {
      for (const auto& T : tree_shapes(n, rng.next_u64())) {
        for_each_permutation(n, [&](const std::vector<int>& e) {
          const Permutation s(e);
          const TreeEncoding E = tree_encode(s, T);
          bool ok = tree_decode(E, T) == s;
          for (int v : T.internal_nodes()) {
            const auto& nd = T.node(v);
            const auto ones = std::count(E.strings[v].begin(), E.strings[v].end(), '1');
            ok = ok && ones == T.node(nd.left).hi - nd.lo + 1;
          }
          if (!ok) ++bad;
          ++count;
        });
      }
    }
    return CheckResult{"", bad == 0, std::to_string(count) + " encodings, " + std::to_string(bad) + " failures"};
  }));

  out.push_back(guarded("weights normalize and identity is a mode, n <= " + std::to_string(big), [&] {
    double worst = 0.0;
    bool mode_ok = true;
    for (int n = 2; n <= big; ++n) {
      const BiasTable P = choose_your_weapon(ChooseYourWeaponSpec{random_rates(rng, n - 1), {}});
      const double top = weight<double>(Permutation::identity(n), P);
      double Z = 0.0;
      for_each_permutation(n, [&](const std::vector<int>& e) {
        const double w = weight<double>(e, P);
        Z += w;
        if (w > top) mode_ok = false;
      });
      double total = 0.0;
      for_each_permutation(n, [&](const std::vector<int>& e) { total += weight<double>(e, P) / Z; });
      worst = std::max(worst, std::abs(total - 1.0));
    }
    return CheckResult{"", worst <= 1e-12 && mode_ok, "max |sum - 1| = " + fmt(worst)};
  }));

  out.push_back(guarded("staircase walks close at height 0", [&] {
    bool ok = true;
    for (int n = 1; n <= (opt.fast ? 3 : 5); ++n) {
      for_each_permutation(2 * n, [&](const std::vector<int>& e) {
        const StaircaseWalk w = to_staircase_walk(Permutation(e));
        ok = ok && w.heights().back() == 0 && w.max_height() == walk_max_height(w.steps);
      });
    }
    return CheckResult{"", ok, ""};
  }));

  out.push_back(guarded("constructors are complementary and positively biased", [&] {
    std::vector<BiasTable> tables = {constant_bias(6, 0.7), choose_your_weapon(ChooseYourWeaponSpec{random_rates(rng, 5), {}}),
                                     league_hierarchy(LeagueTree::example9()), slow_mixing_bias(4).first};
    bool ok = true;
    for (const auto& P : tables) ok = ok && P.is_complementary(1e-15) && P.is_positively_biased();
    return CheckResult{"", ok, std::to_string(tables.size()) + " tables"};
  }));

  out.push_back(guarded("league tables are neutral outside the common ancestor", [&] {
    long long bad = 0;
    for (const auto& T : tree_shapes(8, rng.next_u64())) {
      const BiasTable P = league_hierarchy(T);
      for (int i = 1; i <= 8; ++i)
        for (int j = i + 1; j <= 8; ++j)
          for (int c = 1; c <= 8; ++c)
            if (c != i && c != j && !T.covers(T.lca(i, j), c) && P(i, c) != P(j, c)) ++bad;
    }
    return CheckResult{"", bad == 0, std::to_string(bad) + " violations"};
  }));

  out.push_back(guarded("slow-mixing halves never invert once ordered", [&] {
    const auto [P, spec] = slow_mixing_bias(4);
    bool ok = true;
    for (int i = 1; i <= 8; ++i)
      for (int j = i + 1; j <= 8; ++j)
        if ((j <= 4 || i > 4) && P(j, i) != 0.0) ok = false;
    return CheckResult{"", ok, "delta = " + fmt(spec.delta)};
  }));

  out.push_back(guarded("solve_delta balances S1 and S3", [&] {
    double worst = 0.0;
    bool bracket = true;
    for (int n = 4; n <= (opt.fast ? 4 : 9); ++n) {
      const SlowMixSpec s = solve_delta(n);
      const auto m = slowmix_cut_masses(n, s.xi);
      worst = std::max(worst, static_cast<double>(std::abs(m[2] + m[3] - m[0]) / m[0]));
      bracket = bracket && s.delta > 1.0 / 65 && s.delta < 0.5 && s.gamma < s.xi && s.xi < 4 * std::exp(2.0);
    }
    return CheckResult{"", worst <= 1e-8 && bracket, "max relative imbalance " + fmt(worst)};
  }));

  out.push_back(guarded("detailed balance, exact rationals, n <= " + std::to_string(small), [&] {
    std::vector<std::pair<std::string, ChainKernel>> kernels;
    for (int n = 2; n <= small; ++n) {
      ChooseYourWeaponSpec cyw{random_rates(rng, n - 1), {}};
      ChooseYourWeaponSpec cyw_max = cyw;
      cyw_max.variant = ChooseYourWeaponSpec::Variant::max_indexed;
      kernels.emplace_back("nn", NnKernel{constant_bias(n, 0.7)});
      kernels.emplace_back("nn-cyw", NnKernel{choose_your_weapon(cyw)});
      kernels.emplace_back("inv", InvKernel(cyw));
      kernels.emplace_back("inv-max", InvKernel(cyw_max));
      for (const auto& T : tree_shapes(n, rng.next_u64())) kernels.emplace_back("tree", TreeKernel(T));
    }
    kernels.emplace_back("oned", OnedKernel{0.75, 6});
    kernels.emplace_back("asep", AsepKernel{0.7, 3, 3});
    const SlowMixSpec s4 = solve_delta(4);
    kernels.emplace_back("walk", WalkKernel{WalkWeightModel::slowmix(s4)});
    kernels.emplace_back("walk-transposition", WalkTranspositionKernel{WalkWeightModel::slowmix(s4)});
    std::string failed;
    for (const auto& [name, k] : kernels) {
      const StateSpaceIndex idx = StateSpaceIndex::for_kernel(k);
      if (!detailed_balance_exact(build_transition_rows_exact(k, idx), stationary_exact_rational(k, idx))) failed += name + " ";
    }
    return CheckResult{"", failed.empty(), failed.empty() ? std::to_string(kernels.size()) + " kernels" : "failed: " + failed};
  }));

  out.push_back(guarded("weight formula is the matrix fixed point, n <= " + std::to_string(mid), [&] {
    double worst = 0.0;
    for (int n = 3; n <= mid; ++n) {
      const std::vector<ChainKernel> ks = {NnKernel{constant_bias(n, 0.7)}, InvKernel(ChooseYourWeaponSpec{random_rates(rng, n - 1), {}}),
                                           TreeKernel(LeagueTree::random(n, rng.next_u64()))};
      for (const auto& k : ks) {
        const StateSpaceIndex idx = StateSpaceIndex::for_kernel(k);
        const SparseMatrix P = build_transition_matrix(k, idx);
        worst = std::max(worst, (stationary_exact(k, idx) - stationary_from_matrix(P)).cwiseAbs().maxCoeff());
      }
    }
    return CheckResult{"", worst <= 1e-10, "max |pi_weight - pi_matrix| = " + fmt(worst)};
  }));

  out.push_back(guarded("inversion chain holds with probability at least 1/2", [&] {
    bool ok = true;
    for (int n = 2; n <= small; ++n) {
      const ChainKernel k = InvKernel(ChooseYourWeaponSpec{random_rates(rng, n - 1), {}});
      for_each_permutation(n, [&](const std::vector<int>& e) {
        for (const auto& [next, p] : transition_distribution<double>(k, e))
          if (next == e && p < 0.5 - 1e-15) ok = false;
      });
    }
    return CheckResult{"", ok, ""};
  }));

  out.push_back(guarded("product structure of the inversion and tree chains", [&] {
    const int ni = opt.fast ? 4 : 5;
    const int nt = opt.fast ? 4 : 6;
    double e = inv_projection_error(ChooseYourWeaponSpec{random_rates(rng, ni - 1), {}});
    ChooseYourWeaponSpec mx{random_rates(rng, ni - 1), ChooseYourWeaponSpec::Variant::max_indexed};
    e = std::max(e, inv_projection_error(mx));
    for (const auto& T : tree_shapes(nt, rng.next_u64())) e = std::max(e, tree_projection_error(T));
    return CheckResult{"", e <= 1e-14, "max entrywise error " + fmt(e)};
  }));

  out.push_back(guarded("identity reachable from every permutation", [&] {
    bool ok = true;
    for (int n = 2; n <= mid; ++n) {
      const BiasTable P = constant_bias(n, 0.9);
      const StateSpaceIndex idx = StateSpaceIndex::permutations(n);
      // Search backwards from the identity over moves with positive probability.
      std::vector<char> seen(idx.size(), 0);
      std::deque<int> queue{idx.id(Permutation::identity(n).entries())};
      seen[queue.front()] = 1;
      while (!queue.empty()) {
        const State s = idx.state(queue.front());
        queue.pop_front();
        for (int k = 0; k + 1 < n; ++k) {
          State t = s;
          std::swap(t[k], t[k + 1]);
          // t moves to s when swapping t[k], t[k+1] is accepted.
          const int id = idx.id(t);
          if (!seen[id] && P(t[k + 1], t[k]) > 0.0) {
            seen[id] = 1;
            queue.push_back(id);
          }
        }
      }
      ok = ok && std::all_of(seen.begin(), seen.end(), [](char c) { return c; });
    }
    return CheckResult{"", ok, ""};
  }));

  out.push_back(guarded("canonical path floors, n <= " + std::to_string(small), [&] {
    std::ostringstream os;
    bool ok = true;
    for (int n = 3; n <= small; ++n) {
      const CongestionReport inv = congestion_A(PathKind::inv, InvKernel(ChooseYourWeaponSpec{random_rates(rng, n - 1), {}}));
      ok = ok && inv.floor_failures == 0 && inv.illegal_paths == 0 && inv.max_path_length <= 2 * n &&
           inv.max_paths_per_edge <= n * n;
      for (const auto& T : tree_shapes(n, rng.next_u64())) {
        const CongestionReport tr = congestion_A(PathKind::tree, TreeKernel(T));
        ok = ok && tr.floor_failures == 0 && tr.illegal_paths == 0 && tr.stage2_failures == 0 &&
             tr.max_path_length <= 4 * n && tr.max_paths_per_edge <= 4 * n * n;
      }
      os << "n=" << n << " A_inv=" << fmt(inv.A) << " ";
    }
    return CheckResult{"", ok, os.str()};
  }));

  // The (stage, i, j) record must decode every path edge back to its transition.
  out.push_back(guarded("path uniqueness witness, n <= " + std::to_string(small), [&] {
    long long inv_bad = 0, tree_bad = 0, tree_bad_offset = 0;
    for (int n = 3; n <= small; ++n) {
      inv_bad += congestion_A(PathKind::inv, InvKernel(ChooseYourWeaponSpec{random_rates(rng, n - 1), {}})).witness_collisions;
      std::vector<LeagueTree> shapes = tree_shapes(n, rng.next_u64());
      for (int extra = 0; extra < 16; ++extra) shapes.push_back(LeagueTree::random(n, rng.next_u64()));
      for (const auto& T : shapes) {
        const CongestionReport tr = congestion_A(PathKind::tree, TreeKernel(T));
        tree_bad += tr.witness_collisions;
        tree_bad_offset += tr.offset_witness_collisions;
      }
    }
    std::ostringstream os;
    os << "collisions inv=" << inv_bad << " tree=" << tree_bad << " (tree with step offset=" << tree_bad_offset << ")";
    return CheckResult{"", inv_bad == 0 && tree_bad == 0, os.str()};
  }));

  return out;
}

}  // namespace biasperm
