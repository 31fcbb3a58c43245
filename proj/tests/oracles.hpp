#pragma once
// Brute-force reference computations kept independent of the library code paths.

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "Eigen/Dense"

namespace oracle {

inline std::vector<std::vector<int>> all_permutations(int n) {
  std::vector<int> p(n);
  for (int i = 0; i < n; ++i) p[i] = i + 1;
  std::vector<std::vector<int>> out;
  do out.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

// x_i = number of larger values appearing before value i.
inline std::vector<int> inversion_counts(const std::vector<int>& s) {
  const int n = static_cast<int>(s.size());
  std::vector<int> x(n, 0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < a; ++b)
      if (s[b] > s[a]) ++x[s[a] - 1];
  return x;
}

// Product over position pairs of p(first, second), with p given as a callable on labels.
template <class F>
double pair_product(const std::vector<int>& s, F p) {
  double w = 1.0;
  for (std::size_t a = 0; a < s.size(); ++a)
    for (std::size_t b = a + 1; b < s.size(); ++b) w *= p(s[a], s[b]);
  return w;
}

// Dense row-stochastic matrix of the adjacent-swap chain: position uniform in [n-1],
// accept with p(s[i+1], s[i]).
template <class F>
Eigen::MatrixXd nn_matrix(const std::vector<std::vector<int>>& states, F p) {
  std::map<std::vector<int>, int> id;
  for (std::size_t k = 0; k < states.size(); ++k) id[states[k]] = static_cast<int>(k);
  const int N = static_cast<int>(states.size());
  const int n = static_cast<int>(states[0].size());
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(N, N);
  for (int k = 0; k < N; ++k) {
    for (int i = 0; i + 1 < n; ++i) {
      auto t = states[k];
      const double acc = p(t[i + 1], t[i]) / (n - 1);
      std::swap(t[i], t[i + 1]);
      M(k, id[t]) += acc;
      M(k, k) += 1.0 / (n - 1) - acc;
    }
  }
  return M;
}

inline double tv(const Eigen::VectorXd& a, const Eigen::VectorXd& b) { return 0.5 * (a - b).cwiseAbs().sum(); }

// First t with worst-start distance <= eps that stays there for `tail` more steps.
inline int power_iteration_tau(const Eigen::MatrixXd& P, const Eigen::VectorXd& pi, double eps, int tail = 200) {
  const int N = static_cast<int>(P.rows());
  Eigen::MatrixXd X = Eigen::MatrixXd::Identity(N, N);
  std::vector<double> d;
  for (int t = 0; t < 100000; ++t) {
    double worst = 0.0;
    for (int s = 0; s < N; ++s) worst = std::max(worst, tv(X.row(s).transpose(), pi));
    d.push_back(worst);
    X = X * P;
    if (static_cast<int>(d.size()) > tail) {
      const int cand = static_cast<int>(d.size()) - 1 - tail;
      bool ok = true;
      for (std::size_t u = cand; u < d.size(); ++u) ok = ok && d[u] <= eps;
      if (ok && (cand == 0 || d[cand - 1] > eps)) return cand;
    }
  }
  return -1;
}

inline Eigen::VectorXd normalized(Eigen::VectorXd v) { return v / v.sum(); }

}  // namespace oracle
