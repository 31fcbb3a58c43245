#pragma once

#include <array>
#include <utility>
#include <vector>

#include "biasperm/bias_table.hpp"
#include "biasperm/rational.hpp"

namespace biasperm {

/// Parameters of the two-level bias on 2n labels that mixes slowly.
struct SlowMixSpec {
  int n = 0;
  double M = 0.0;      // n - sqrt(n)
  double eps = 0.0;    // 1 / (16n + 2)
  double gamma = 0.0;  // (1/2 + eps) / (1/2 - eps) = 1 + 1/(4n)
  double delta = 0.0;
  double xi = 0.0;     // (1 - delta) / delta
  int cut_level = 0;   // floor(M)
};

/// floor(n - sqrt(n)) computed in integers.
int slowmix_cut_level(int n);

/// For a <= n < b: true when a - b + 2n + 1 > n + M, decided exactly by squaring.
/// Smallest tile peak that carries the 1 - delta bias, one above the cut level.
int slowmix_high_from(int n);
bool slowmix_corner_pair(int n, int a, int b);

/// Bias on 2n labels with delta from solve_delta.
std::pair<BiasTable, SlowMixSpec> slow_mixing_bias(int n);
BiasTable slow_mixing_table(const SlowMixSpec& spec);

/// Tile weights of a walk. Every +1 step placed before a -1 step forms one
/// tile. With u earlier +1 steps before the first and d earlier -1 steps
/// before the second, the tile's peak height is u - d + 1. A tile weighs
/// p/(1-p) with p = p_high when the peak is at least high_from, else p_low.
struct WalkWeightModel {
  int n = 0;
  double p_low = 0.5;
  double p_high = 0.5;
  int high_from = 0;

  double lambda_low() const { return p_low / (1.0 - p_low); }
  double lambda_high() const { return p_high / (1.0 - p_high); }
  /// Probability of ordering a tile's pair as +1 then -1.
  double p_for_peak(int peak) const { return peak >= high_from ? p_high : p_low; }

  static WalkWeightModel slowmix(const SlowMixSpec& spec);
  static WalkWeightModel constant(int n, double p);
};

struct TileCounts {
  int low = 0;
  int high = 0;
};

TileCounts walk_tiles(const std::vector<int>& steps, int high_from);
double walk_log_weight(const std::vector<int>& steps, const WalkWeightModel& model);

template <class Scalar>
Scalar walk_weight(const std::vector<int>& steps, const WalkWeightModel& model) {
  const TileCounts t = walk_tiles(steps, model.high_from);
  const Scalar pl = scalar_from_double<Scalar>(model.p_low);
  const Scalar ph = scalar_from_double<Scalar>(model.p_high);
  const Scalar lo = pl / (Scalar(1) - pl);
  const Scalar hi = ph / (Scalar(1) - ph);
  Scalar w(1);
  for (int k = 0; k < t.low; ++k) w *= lo;
  for (int k = 0; k < t.high; ++k) w *= hi;
  return w;
}

int walk_max_height(const std::vector<int>& steps);

/// Unnormalized mass by max-height class: below L, equal L, equal L+1, above L+1.
/// Computed by dynamic programming over (ups, downs, running-max class).
std::array<long double, 4> slowmix_cut_masses(int n, double xi);

/// Z pi(S3) - Z pi(S1) at the given xi.
long double slowmix_balance(int n, double xi);

/// Bisection on (gamma, 4 e^2) for the root of slowmix_balance; at most 200 halvings.
SlowMixSpec solve_delta(int n, double rel_tol = 1e-10);

}  // namespace biasperm
