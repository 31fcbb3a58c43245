#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "biasperm/chains.hpp"
#include "biasperm/rational.hpp"
#include "biasperm/state_space.hpp"

namespace biasperm {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Row-stochastic matrix of the kernel over the index. Throws SoundnessFailure
/// when a row misses 1 by more than 1e-14 or leaves the index.
SparseMatrix build_transition_matrix(const ChainKernel& kernel, const StateSpaceIndex& index);

/// Exact rows as (column, probability) lists.
std::vector<std::vector<std::pair<int, Rational>>> build_transition_rows_exact(const ChainKernel& kernel,
                                                                               const StateSpaceIndex& index);

/// Normalized weights from the kernel's product formula.
Eigen::VectorXd stationary_exact(const ChainKernel& kernel, const StateSpaceIndex& index);
std::vector<Rational> stationary_exact_rational(const ChainKernel& kernel, const StateSpaceIndex& index);

/// Solves pi P = pi, sum pi = 1 with a sparse LU factorization.
Eigen::VectorXd stationary_from_matrix(const SparseMatrix& P);

/// max_j |(pi P)_j - pi_j|.
double fixed_point_residual(const SparseMatrix& P, const Eigen::VectorXd& pi);

/// max over pairs of |pi(x) P(x,y) - pi(y) P(y,x)|.
double detailed_balance_residual(const SparseMatrix& P, const Eigen::VectorXd& pi);
/// True when pi(x) P(x,y) = pi(y) P(y,x) holds exactly for every pair.
bool detailed_balance_exact(const std::vector<std::vector<std::pair<int, Rational>>>& rows,
                            const std::vector<Rational>& pi);

double tv_distance(const Eigen::VectorXd& mu, const Eigen::VectorXd& nu);

struct MixingResult {
  std::optional<int> tau;      // empty when the horizon ran out first
  int horizon = 0;
  bool all_starts = true;      // false when only extreme starts were used
  bool monotone = true;        // worst-start distance never increased along the trace
  std::vector<double> trace;   // worst-start distance at t = 0, 1, ...
};

/// Starts used for worst-case mixing: every state up to `all_start_limit`
/// states, otherwise the two extreme states of the space.
std::vector<int> worst_case_starts(const StateSpaceIndex& index, int all_start_limit = 720);

MixingResult mixing_time_exact(const SparseMatrix& P, const Eigen::VectorXd& pi, double eps,
                               const std::vector<int>& starts, int horizon = 1000000);

struct GapResult {
  double gap = 0.0;        // 1 - second largest eigenvalue modulus
  double lambda2 = 0.0;    // second largest eigenvalue
  double lambda_min = 0.0;
};

/// Dense eigensolve of D^{1/2} P D^{-1/2}. Throws InvalidArgument for a
/// non-reversible chain and CapExceeded above `cap` states.
GapResult spectral_gap(const SparseMatrix& P, const Eigen::VectorXd& pi, int cap = 10000);

struct CutConductance {
  double phi = 0.0;
  double pi_S = 0.0;
  double flow = 0.0;
  bool complemented = false;  // S had mass above 1/2, so its complement was used
};

CutConductance conductance_of_cut(const SparseMatrix& P, const Eigen::VectorXd& pi, const std::vector<bool>& in_S);

/// Lower bound on mixing time from a conductance value: 1/(4 phi) - 1/2.
double conductance_mixing_lower_bound(double phi);

struct SlowmixRow {
  int n = 0;
  double delta = 0.0;
  double xi = 0.0;
  double piS1 = 0.0, piS2 = 0.0, piS3 = 0.0;
  double ratio = 0.0;      // piS2 / piS1
  double phi = 0.0;        // exact conductance of S1 under the adjacent walk chain
  double tau_lower = 0.0;  // 1/(4 phi) - 1/2
  double piS2w = 0.0;      // max height in {L, L+1}
  double ratio_w = 0.0;
  double phi_w = 0.0;      // exact conductance of S1 under the transposition chain
  double tau_lower_w = 0.0;
  std::optional<int> tau_compare;  // tau(1/4) of the constant 1/2 + eps walk chain
};

/// Exact cut masses and conductances for the slow-mixing walk chain.
SlowmixRow slowmix_cut_report(int n, bool with_transposition = true, bool with_comparison = false,
                              std::size_t cap = StateSpaceIndex::default_cap);

/// max_i (2 / p_i) tau_i(eps / (2M)), rounded up. The hypothesis on tau_i is not enforced.
long long product_mixing_bound(const std::vector<double>& p_select,
                               const std::vector<std::function<long long(double)>>& tau, double eps);

/// Each step picks factor i with probability p_i and moves it by P_i; the rest holds.
Eigen::MatrixXd product_chain_matrix(const std::vector<double>& p_select, const std::vector<Eigen::MatrixXd>& factors);

struct CouplingEstimate {
  double mean_T = 0.0;
  double tau_bound = 0.0;  // T e ceil(ln 1/eps)
};

/// Runs the monotone coupling of two copies from 0 and k and averages the coalescence time.
CouplingEstimate coupling_time_estimate(const OnedKernel& kernel, int pairs, std::uint64_t seed, double eps = 0.25);

/// Mean number of steps to reach k from 0, averaged over independent trials.
double mean_hitting_time(const OnedKernel& kernel, int trials, std::uint64_t seed);

/// Closed form for that mean: k/(2r-1) - rho(1-rho^k)/((1-rho)(2r-1)) with rho = (1-r)/r, and k(k+1) at r = 1/2.
double hitting_time_closed_form(double r, int k);

/// Largest entrywise gap between the inversion chain's kernel projected on
/// coordinate x_i and the lazy one-dimensional kernel (1 - s/2) I + (s/2) K,
/// with K the walk of rate r_i on {0..n-i} in the coordinate y = (n-i) - x_i
/// and s = (n-i)/C(n,2). Also fails (returns infinity) when the projection
/// depends on the other coordinates.
double inv_projection_error(const ChooseYourWeaponSpec& spec);

/// Same for the tree chain: the node string of v moves by
/// (1 - c) I + c K_v, with K_v the exclusion process of parameter q_v on that
/// node's ones and zeros and c = (k_v - 1)/C(n,2).
double tree_projection_error(const LeagueTree& T);

/// Dense copy of a sparse matrix, for small spaces.
Eigen::MatrixXd to_dense(const SparseMatrix& P);
SparseMatrix to_sparse(const Eigen::MatrixXd& P);

}  // namespace biasperm
