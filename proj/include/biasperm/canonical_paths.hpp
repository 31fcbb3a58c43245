#pragma once

#include <optional>
#include <string>
#include <vector>

#include "biasperm/bias_models.hpp"
#include "biasperm/bias_table.hpp"
#include "biasperm/chains.hpp"
#include "biasperm/league_tree.hpp"

namespace biasperm {

/// A route of adjacent transpositions. stages[k] labels the move from
/// states[k] to states[k+1]; 0 marks a direct nearest-neighbor edge.
struct NnPath {
  std::vector<State> states;
  std::vector<int> stages;
  int i = -1;  // 0-based positions of the transposed pair in the source
  int j = -1;
  bool mirrored = false;

  int length() const { return static_cast<int>(stages.size()); }
};

/// Two-stage route for a transposition of the inversion chain. Throws
/// InvalidArgument unless beta swaps two entries of sigma whose in-between
/// entries are all smaller than both.
NnPath path_inv_to_nn(const State& sigma, const State& beta);

/// How a tree route is built for a given table.
enum class TreePathMode {
  direct,      // weight floor needs the column clause p_{i-1,j} >= p_{i,j}
  mirrored,    // direct route on the mirror image, for the row clause
  unguaranteed // neither clause holds; the route exists but carries no floor
};

TreePathMode tree_path_mode(const BiasTable& P);

/// Four-stage route for a tree transposition. With T supplied the edge's
/// legality is checked; otherwise only the small/big split of in-between
/// entries is required.
NnPath path_tree_to_nn(const State& sigma, const State& beta, TreePathMode mode,
                       const LeagueTree* T = nullptr);

struct PathReport {
  bool endpoints_ok = false;
  bool legal = false;   // every step is an adjacent swap with positive probability
  int first_bad_step = -1;
  bool floor_ok = false;
  double worst_ratio = 0.0;  // min over states of weight / floor
};

/// Checks a route against the table. `floor` defaults to min(weight(source), weight(target)).
template <class Scalar>
PathReport verify_path(const NnPath& path, const State& sigma, const State& beta, const BiasTable& P,
                       std::optional<Scalar> floor = std::nullopt);

struct CongestionReport {
  std::string kind;
  int n = 0;
  long long aux_edges = 0;        // auxiliary transitions that are not holds
  long long nn_edges_used = 0;
  int max_paths_per_edge = 0;
  int max_path_length = 0;
  double A = 0.0;
  long long floor_failures = 0;   // exact rational comparison
  long long illegal_paths = 0;
  long long witness_collisions = 0;         // (stage, i, j) record
  long long offset_witness_collisions = 0;  // (stage, i, j, step offset) record
  long long stage2_failures = 0;  // tree only: weight after stage 2 below lambda * weight(sigma)
  TreePathMode mode = TreePathMode::direct;
};

enum class PathKind { inv, tree };

/// Exhaustive congestion constant over every auxiliary transition on n <= 6 labels.
/// For kind=inv `aux` must be an InvKernel, for kind=tree a TreeKernel.
CongestionReport congestion_A(PathKind kind, const ChainKernel& aux, int max_n = 6);

/// 4 ln(1/(eps pi_min)) / ln(1/(2 eps)) * A * tau_aux, rounded up.
long long comparison_bound(double A, long long tau_aux, double pi_min, double eps);

}  // namespace biasperm
