#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "biasperm/bias_models.hpp"
#include "biasperm/bias_table.hpp"
#include "biasperm/league_tree.hpp"
#include "biasperm/rng.hpp"
#include "biasperm/slow_mixing.hpp"

namespace biasperm {

/// Every chain state is a vector of ints: permutation entries, walk steps,
/// 0/1 string characters, or a single height.
using State = std::vector<int>;

struct NnKernel {
  BiasTable P;
};

/// Inversion-table chain. Max-indexed specs run through the mirror map.
struct InvKernel {
  ChooseYourWeaponSpec spec;
  BiasTable P;
  explicit InvKernel(ChooseYourWeaponSpec s) : spec(std::move(s)), P(choose_your_weapon(spec)) {}
};

struct TreeKernel {
  LeagueTree T;
  BiasTable P;
  explicit TreeKernel(LeagueTree tree) : T(std::move(tree)), P(league_hierarchy(T)) {}
};

/// Biased walk on {0..k}: up with probability r, down otherwise, blocked moves hold.
struct OnedKernel {
  double r = 0.5;
  int k = 1;
};

/// Exclusion process on strings with `ones` ones and `zeros` zeros.
struct AsepKernel {
  double p = 0.5;
  int ones = 1;
  int zeros = 1;
};

/// Adjacent-swap chain on staircase walks.
struct WalkKernel {
  WalkWeightModel model;
};

/// Swaps any +1 step with any -1 step under a Metropolis filter.
struct WalkTranspositionKernel {
  WalkWeightModel model;
};

using ChainKernel =
    std::variant<NnKernel, InvKernel, TreeKernel, OnedKernel, AsepKernel, WalkKernel, WalkTranspositionKernel>;

std::string kernel_name(const ChainKernel& kernel);

struct Proposal {
  int a = -1;  // index, element or position chosen first
  int b = -1;  // partner, when there is one
  int bit = 0;
  double accept = 0.0;
};

struct StepOutcome {
  State next;
  bool moved = false;
  Proposal proposal;
};

/// One step. Draw order is frozen per kernel: selection, then the bit b for
/// the inversion chain, then one uniform for acceptance. Every draw is taken
/// even when the proposal turns out to be blocked.
StepOutcome step(const ChainKernel& kernel, const State& state, CounterRng& rng);

StepOutcome step_nn(const Permutation& sigma, const BiasTable& P, CounterRng& rng);
StepOutcome step_inv(const Permutation& sigma, const ChooseYourWeaponSpec& spec, CounterRng& rng);
StepOutcome step_tree(const Permutation& sigma, const TreeKernel& kernel, CounterRng& rng);
int step_oned(int h, double r, int k, CounterRng& rng);
State step_asep(const State& s, double p, CounterRng& rng);
StaircaseWalk step_walk(const StaircaseWalk& w, const WalkWeightModel& model, CounterRng& rng);
StaircaseWalk step_walk_transposition(const StaircaseWalk& w, const WalkWeightModel& model, CounterRng& rng);

/// Exact one-step law as (successor, probability) with duplicates merged.
/// Instantiated for double and Rational.
template <class Scalar>
std::vector<std::pair<State, Scalar>> transition_distribution(const ChainKernel& kernel, const State& state);

/// For a tree kernel: can a and b be transposed in sigma?
bool tree_pair_legal(const State& sigma, const LeagueTree& T, int a, int b);
/// For the inversion chain: position of the first larger element after
/// position p (dir = +1) or the last larger one before it (dir = -1), or -1.
int inv_partner(const State& sigma, int p, int dir);

/// Weight of a state under the kernel's stationary law, natural log.
double kernel_log_weight(const ChainKernel& kernel, const State& state);

template <class Scalar>
Scalar kernel_weight(const ChainKernel& kernel, const State& state);

/// Canonical starting state: identity, all -1 then +1, 1s then 0s, or height 0.
State default_start(const ChainKernel& kernel, int n);

struct ObservableRow {
  std::uint64_t step = 0;
  std::string name;
  double value = 0.0;
};

struct Trajectory {
  State final_state;
  std::uint64_t moves = 0;
  std::vector<ObservableRow> rows;
};

/// Runs `steps` steps from `start`. Observables are recorded at step 0 and
/// every `stride` steps when stride > 0.
Trajectory run(const ChainKernel& kernel, const State& start, std::uint64_t steps, std::uint64_t seed,
               std::uint64_t stride = 0);

/// Name and value of the kernel's scalar observable.
std::pair<std::string, double> observable(const ChainKernel& kernel, const State& state);

}  // namespace biasperm
