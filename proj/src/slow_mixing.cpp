#include "biasperm/slow_mixing.hpp"

#include <algorithm>
#include <cmath>

#include "biasperm/errors.hpp"

namespace biasperm {

int slowmix_cut_level(int n) {
  // Largest L with n - L >= sqrt(n), i.e. (n - L)^2 >= n.
  int L = 0;
  while (L + 1 <= n && static_cast<long long>(n - L - 1) * (n - L - 1) >= n) ++L;
  return L;
}

int slowmix_high_from(int n) { return slowmix_cut_level(n) + 1; }

bool slowmix_corner_pair(int n, int a, int b) {
  if (!(a >= 1 && a <= n && b > n && b <= 2 * n)) throw InvalidArgument("corner test needs a <= n < b");
  // Strictly beyond the diagonal, t = b - a - 1 < sqrt(n): walks peaking on the diagonal carry no 1 - delta tile.
  const long long t = static_cast<long long>(b) - a - 1;
  return t * t < n;
}

BiasTable slow_mixing_table(const SlowMixSpec& spec) {
  const int n = spec.n;
  BiasTable P(2 * n);
  for (int i = 1; i <= 2 * n; ++i) {
    for (int j = i + 1; j <= 2 * n; ++j) {
      if (j <= n || i > n) P.set(i, j, 1.0);
      else P.set(i, j, slowmix_corner_pair(n, i, j) ? 1.0 - spec.delta : 0.5 + spec.eps);
    }
  }
  return P;
}

std::pair<BiasTable, SlowMixSpec> slow_mixing_bias(int n) {
  if (n < 4) throw InvalidArgument("slow-mixing construction needs n >= 4");
  SlowMixSpec spec = solve_delta(n);
  return {slow_mixing_table(spec), spec};
}

WalkWeightModel WalkWeightModel::slowmix(const SlowMixSpec& spec) {
  return WalkWeightModel{spec.n, 0.5 + spec.eps, 1.0 - spec.delta, slowmix_high_from(spec.n)};
}

WalkWeightModel WalkWeightModel::constant(int n, double p) { return WalkWeightModel{n, p, p, 0}; }

namespace {

// Tiles added by a -1 step preceded by `ups` +1 steps and `downs` -1 steps.
TileCounts tiles_of_down_step(int ups, int downs, int high_from) {
  const int first_high = std::max(0, high_from + downs - 1);
  const int high = std::max(0, ups - first_high);
  return TileCounts{ups - high, high};
}

}  // namespace

TileCounts walk_tiles(const std::vector<int>& steps, int high_from) {
  TileCounts total;
  int ups = 0, downs = 0;
  for (int s : steps) {
    if (s > 0) {
      ++ups;
    } else {
      const TileCounts t = tiles_of_down_step(ups, downs, high_from);
      total.low += t.low;
      total.high += t.high;
      ++downs;
    }
  }
  return total;
}

double walk_log_weight(const std::vector<int>& steps, const WalkWeightModel& model) {
  const TileCounts t = walk_tiles(steps, model.high_from);
  double lw = 0.0;
  if (t.low) lw += t.low * std::log(model.lambda_low());
  if (t.high) lw += t.high * std::log(model.lambda_high());
  return lw;
}

int walk_max_height(const std::vector<int>& steps) {
  int h = 0, best = 0;
  for (int s : steps) best = std::max(best, h += s);
  return best;
}

std::array<long double, 4> slowmix_cut_masses(int n, double xi) {
  const int L = slowmix_cut_level(n);
  const int high_from = slowmix_high_from(n);
  const long double gamma = 1.0L + 1.0L / (4.0L * n);
  const auto cls = [L](int h) { return h < L ? 0 : h == L ? 1 : h == L + 1 ? 2 : 3; };
  // dp[ups][downs][class]
  std::vector<std::array<long double, 4>> dp((n + 1) * (n + 1), std::array<long double, 4>{0, 0, 0, 0});
  const auto at = [n](int u, int d) { return u * (n + 1) + d; };
  dp[at(0, 0)][cls(0)] = 1.0L;
  for (int u = 0; u <= n; ++u) {
    for (int d = 0; d <= n; ++d) {
      const auto& cur = dp[at(u, d)];
      if (u < n) {
        const int c = cls(u + 1 - d);
        for (int k = 0; k < 4; ++k) dp[at(u + 1, d)][std::max(k, c)] += cur[k];
      }
      if (d < n) {
        const TileCounts t = tiles_of_down_step(u, d, high_from);
        const long double f = std::pow(gamma, static_cast<long double>(t.low)) *
                              std::pow(static_cast<long double>(xi), static_cast<long double>(t.high));
        for (int k = 0; k < 4; ++k) dp[at(u, d + 1)][k] += cur[k] * f;
      }
    }
  }
  return dp[at(n, n)];
}

long double slowmix_balance(int n, double xi) {
  const auto m = slowmix_cut_masses(n, xi);
  return m[2] + m[3] - m[0];
}

SlowMixSpec solve_delta(int n, double rel_tol) {
  if (n < 4) throw InvalidArgument("slow-mixing construction needs n >= 4");
  SlowMixSpec s;
  s.n = n;
  s.M = n - std::sqrt(static_cast<double>(n));
  s.eps = 1.0 / (16.0 * n + 2.0);
  s.gamma = 1.0 + 1.0 / (4.0 * n);
  s.cut_level = slowmix_cut_level(n);
  double lo = s.gamma;
  double hi = 4.0 * std::exp(2.0);
  if (!(slowmix_balance(n, lo) < 0) || !(slowmix_balance(n, hi) > 0)) {
    throw SoundnessFailure("slow-mixing balance has no sign change on its bracket");
  }
  for (int it = 0; it < 200 && hi - lo > rel_tol * lo; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (slowmix_balance(n, mid) < 0) lo = mid;
    else hi = mid;
  }
  s.xi = 0.5 * (lo + hi);
  s.delta = 1.0 / (s.xi + 1.0);
  return s;
}

}  // namespace biasperm
