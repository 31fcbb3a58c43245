#pragma once

#include <optional>
#include <string>
#include <vector>

#include "biasperm/bias_table.hpp"
#include "biasperm/league_tree.hpp"

namespace biasperm {

/// p_ij = p for every i < j.
BiasTable constant_bias(int n, double p);

/// Bias depending only on one of the two ranks.
///
/// With the min variant r[k-1] holds r_k and p_ij = r_i for i < j, k = 1..n-1.
/// With the max variant r[k-2] holds r_k and p_ij = r_j for i < j, k = 2..n.
struct ChooseYourWeaponSpec {
  enum class Variant { min_indexed, max_indexed };
  std::vector<double> r;
  Variant variant = Variant::min_indexed;

  int size() const { return static_cast<int>(r.size()) + 1; }
  /// The equivalent min-indexed spec under the relabeling k -> n+1-k.
  ChooseYourWeaponSpec as_min_indexed() const;
  /// Keeps the first n-1 values.
  ChooseYourWeaponSpec truncated(int n) const;
};

BiasTable choose_your_weapon(const ChooseYourWeaponSpec& spec);

/// p_ij = q at lca(i, j).
BiasTable league_hierarchy(const LeagueTree& T);

struct WeakMonotonicity {
  bool positively_biased = false;  // p_ij >= 1/2 for i < j
  bool row_clause = false;         // p_{i,j+1} >= p_{i,j}
  bool column_clause = false;      // p_{i-1,j} >= p_{i,j}

  bool weakly_monotone() const { return positively_biased && (row_clause || column_clause); }
  bool monotone() const { return positively_biased && row_clause && column_clause; }
  std::string describe() const;
};

WeakMonotonicity is_weakly_monotone(const BiasTable& P);

/// Relabels k -> n+1-k and reverses positions: p'_{x,y} = p_{n+1-y, n+1-x}.
BiasTable mirrored(const BiasTable& P);
std::vector<int> mirrored(const std::vector<int>& sigma);

/// A parsed model string: constant:<p>, cyw:<r1,r2,...>[:max], league:<path>, slowmix:<n>.
struct ModelSpec {
  enum class Kind { constant, cyw, league, slowmix };
  Kind kind = Kind::constant;
  std::string text;
  double p = 0.5;
  ChooseYourWeaponSpec cyw;
  std::optional<LeagueTree> tree;
  int slowmix_n = 0;

  /// Natural size, if the model fixes one.
  std::optional<int> natural_size() const;
};

/// League paths are read from disk relative to the working directory.
ModelSpec parse_model(const std::string& text);
/// Table for n labels. cyw prefixes are allowed; a league tree must have exactly n leaves.
BiasTable model_table(const ModelSpec& model, int n);
/// Choose-Your-Weapon view of the model, or nullopt when none exists.
std::optional<ChooseYourWeaponSpec> model_as_cyw(const ModelSpec& model, int n);
/// League view of the model, or nullopt when none exists.
std::optional<LeagueTree> model_as_league(const ModelSpec& model, int n);

}  // namespace biasperm
