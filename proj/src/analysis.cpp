#include "biasperm/analysis.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>

#include "biasperm/errors.hpp"

namespace biasperm {

SparseMatrix build_transition_matrix(const ChainKernel& kernel, const StateSpaceIndex& index) {
  std::vector<Eigen::Triplet<double>> triplets;
  const int N = index.size();
  triplets.reserve(static_cast<std::size_t>(N) * 8);
  for (int s = 0; s < N; ++s) {
    double row = 0.0;
    for (const auto& [next, p] : transition_distribution<double>(kernel, index.state(s))) {
      triplets.emplace_back(s, index.id(next), p);
      row += p;
    }
    if (std::abs(row - 1.0) > 1e-14) throw SoundnessFailure("transition row does not sum to 1");
  }
  SparseMatrix P(N, N);
  P.setFromTriplets(triplets.begin(), triplets.end());
  P.makeCompressed();
  return P;
}

std::vector<std::vector<std::pair<int, Rational>>> build_transition_rows_exact(const ChainKernel& kernel,
                                                                               const StateSpaceIndex& index) {
  std::vector<std::vector<std::pair<int, Rational>>> rows(index.size());
  for (int s = 0; s < index.size(); ++s) {
    Rational total(0);
    for (auto& [next, p] : transition_distribution<Rational>(kernel, index.state(s))) {
      total += p;
      rows[s].emplace_back(index.id(next), std::move(p));
    }
    if (total != 1) throw SoundnessFailure("exact transition row does not sum to 1");
  }
  return rows;
}

Eigen::VectorXd stationary_exact(const ChainKernel& kernel, const StateSpaceIndex& index) {
  const int N = index.size();
  Eigen::VectorXd lw(N);
  for (int s = 0; s < N; ++s) lw[s] = kernel_log_weight(kernel, index.state(s));
  const double top = lw.maxCoeff();
  if (!std::isfinite(top)) throw InvalidArgument("every state has zero weight");
  // std::exp keeps zero weights at exactly zero; the vectorized exp clamps -inf.
  Eigen::VectorXd pi = lw.unaryExpr([top](double v) { return std::exp(v - top); });
  return pi / pi.sum();
}

std::vector<Rational> stationary_exact_rational(const ChainKernel& kernel, const StateSpaceIndex& index) {
  std::vector<Rational> pi(index.size());
  Rational Z(0);
  for (int s = 0; s < index.size(); ++s) {
    pi[s] = kernel_weight<Rational>(kernel, index.state(s));
    Z += pi[s];
  }
  if (Z == 0) throw InvalidArgument("every state has zero weight");
  for (auto& v : pi) v /= Z;
  return pi;
}

Eigen::VectorXd stationary_from_matrix(const SparseMatrix& P) {
  const int N = static_cast<int>(P.rows());
  // Rows of (P^T - I) with the last equation replaced by sum(pi) = 1.
  Eigen::SparseMatrix<double> A = Eigen::SparseMatrix<double>(P.transpose());
  std::vector<Eigen::Triplet<double>> trips;
  for (int k = 0; k < A.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(A, k); it; ++it)
      if (it.row() != N - 1) trips.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
  for (int i = 0; i < N - 1; ++i) trips.emplace_back(i, i, -1.0);
  for (int j = 0; j < N; ++j) trips.emplace_back(N - 1, j, 1.0);
  Eigen::SparseMatrix<double> M(N, N);
  M.setFromTriplets(trips.begin(), trips.end());
  M.makeCompressed();
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(M);
  if (lu.info() != Eigen::Success) throw SoundnessFailure("stationary solve failed to factor");
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(N);
  rhs[N - 1] = 1.0;
  Eigen::VectorXd pi = lu.solve(rhs);
  return pi;
}

double fixed_point_residual(const SparseMatrix& P, const Eigen::VectorXd& pi) {
  const Eigen::VectorXd next = P.transpose() * pi;
  return (next - pi).cwiseAbs().maxCoeff();
}

double detailed_balance_residual(const SparseMatrix& P, const Eigen::VectorXd& pi) {
  const SparseMatrix PT = P.transpose();
  double worst = 0.0;
  for (int x = 0; x < P.outerSize(); ++x) {
    for (SparseMatrix::InnerIterator it(P, x); it; ++it) {
      const int y = static_cast<int>(it.col());
      worst = std::max(worst, std::abs(pi[x] * it.value() - pi[y] * PT.coeff(x, y)));
    }
  }
  return worst;
}

bool detailed_balance_exact(const std::vector<std::vector<std::pair<int, Rational>>>& rows,
                            const std::vector<Rational>& pi) {
  const auto lookup = [&](int x, int y) {
    for (const auto& [c, p] : rows[x])
      if (c == y) return p;
    return Rational(0);
  };
  for (int x = 0; x < static_cast<int>(rows.size()); ++x)
    for (const auto& [y, p] : rows[x])
      if (pi[x] * p != pi[y] * lookup(y, x)) return false;
  return true;
}

double tv_distance(const Eigen::VectorXd& mu, const Eigen::VectorXd& nu) {
  if (mu.size() != nu.size()) throw InvalidArgument("distributions live on different spaces");
  return 0.5 * (mu - nu).cwiseAbs().sum();
}

std::vector<int> worst_case_starts(const StateSpaceIndex& index, int all_start_limit) {
  std::vector<int> starts;
  if (index.size() <= all_start_limit) {
    for (int s = 0; s < index.size(); ++s) starts.push_back(s);
  } else {
    // Lexicographic order puts the identity / lowest walk first and the reversal / highest walk last.
    starts = {0, index.size() - 1};
  }
  return starts;
}

MixingResult mixing_time_exact(const SparseMatrix& P, const Eigen::VectorXd& pi, double eps,
                               const std::vector<int>& starts, int horizon) {
  const int N = static_cast<int>(P.rows());
  MixingResult res;
  res.horizon = horizon;
  res.all_starts = static_cast<int>(starts.size()) == N;
  Eigen::MatrixXd X = Eigen::MatrixXd::Zero(N, static_cast<int>(starts.size()));
  for (int j = 0; j < static_cast<int>(starts.size()); ++j) X(starts[j], j) = 1.0;
  const SparseMatrix PT = P.transpose();
  int stop_at = horizon;
  for (int t = 0; t <= stop_at; ++t) {
    double worst = 0.0;
    for (int j = 0; j < X.cols(); ++j) worst = std::max(worst, 0.5 * (X.col(j) - pi).cwiseAbs().sum());
    if (!res.trace.empty() && worst > res.trace.back() + 1e-12) res.monotone = false;
    res.trace.push_back(worst);
    if (!res.tau && worst <= eps) {
      res.tau = t;
      stop_at = std::min(horizon, t + std::max(5, t / 10));
    }
    if (t < stop_at) X = PT * X;
  }
  return res;
}

GapResult spectral_gap(const SparseMatrix& P, const Eigen::VectorXd& pi, int cap) {
  const int N = static_cast<int>(P.rows());
  if (N > cap) throw CapExceeded("dense eigensolve above " + std::to_string(cap) + " states");
  if (pi.minCoeff() <= 0.0) throw InvalidArgument("spectral gap needs a positive stationary vector");
  if (detailed_balance_residual(P, pi) > 1e-12) throw InvalidArgument("chain is not reversible");
  const Eigen::VectorXd s = pi.cwiseSqrt();
  Eigen::MatrixXd S = s.asDiagonal() * to_dense(P) * s.cwiseInverse().asDiagonal();
  S = 0.5 * (S + S.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd ev = es.eigenvalues();  // ascending
  GapResult g;
  g.lambda_min = ev[0];
  g.lambda2 = N >= 2 ? ev[N - 2] : 0.0;
  g.gap = 1.0 - std::max(std::abs(g.lambda_min), g.lambda2);
  if (N < 2) g.gap = 1.0;
  return g;
}

CutConductance conductance_of_cut(const SparseMatrix& P, const Eigen::VectorXd& pi, const std::vector<bool>& in_S) {
  const int N = static_cast<int>(P.rows());
  std::vector<bool> S = in_S;
  double mass = 0.0;
  int count = 0;
  for (int x = 0; x < N; ++x)
    if (S[x]) mass += pi[x], ++count;
  if (count == 0) throw InvalidArgument("cut set is empty");
  CutConductance c;
  if (mass > 0.5) {
    S.flip();
    mass = 1.0 - mass;
    c.complemented = true;
    if (count == N) throw InvalidArgument("cut set is the whole space");
  }
  for (int x = 0; x < N; ++x) {
    if (!S[x]) continue;
    for (SparseMatrix::InnerIterator it(P, x); it; ++it)
      if (!S[it.col()]) c.flow += pi[x] * it.value();
  }
  c.pi_S = mass;
  c.phi = c.flow / mass;
  return c;
}

double conductance_mixing_lower_bound(double phi) { return 1.0 / (4.0 * phi) - 0.5; }

SlowmixRow slowmix_cut_report(int n, bool with_transposition, bool with_comparison, std::size_t cap) {
  const SlowMixSpec spec = solve_delta(n);
  SlowmixRow row;
  row.n = n;
  row.delta = spec.delta;
  row.xi = spec.xi;
  const auto m = slowmix_cut_masses(n, spec.xi);
  const long double Z = m[0] + m[1] + m[2] + m[3];
  row.piS1 = static_cast<double>(m[0] / Z);
  row.piS2 = static_cast<double>(m[1] / Z);
  row.piS3 = static_cast<double>((m[2] + m[3]) / Z);
  row.piS2w = static_cast<double>((m[1] + m[2]) / Z);
  row.ratio = static_cast<double>(m[1] / m[0]);
  row.ratio_w = static_cast<double>((m[1] + m[2]) / m[0]);

  const StateSpaceIndex index = StateSpaceIndex::walks(n, cap);
  const WalkWeightModel model = WalkWeightModel::slowmix(spec);
  const ChainKernel walk = WalkKernel{model};
  const Eigen::VectorXd pi = stationary_exact(walk, index);
  std::vector<bool> S1(index.size());
  double s1_mass = 0.0;
  for (int s = 0; s < index.size(); ++s) {
    S1[s] = walk_max_height(index.state(s)) < spec.cut_level;
    if (S1[s]) s1_mass += pi[s];
  }
  if (std::abs(s1_mass - row.piS1) > 1e-9 * row.piS1) {
    throw SoundnessFailure("enumerated and dynamic-programming cut masses disagree");
  }
  const SparseMatrix P = build_transition_matrix(walk, index);
  const CutConductance c = conductance_of_cut(P, pi, S1);
  row.phi = c.phi;
  row.tau_lower = conductance_mixing_lower_bound(c.phi);
  if (with_transposition) {
    const SparseMatrix PT = build_transition_matrix(WalkTranspositionKernel{model}, index);
    const CutConductance cw = conductance_of_cut(PT, pi, S1);
    row.phi_w = cw.phi;
    row.tau_lower_w = conductance_mixing_lower_bound(cw.phi);
  }
  if (with_comparison) {
    const ChainKernel flat = WalkKernel{WalkWeightModel::constant(n, 0.5 + spec.eps)};
    const SparseMatrix Pc = build_transition_matrix(flat, index);
    const Eigen::VectorXd pic = stationary_exact(flat, index);
    row.tau_compare = mixing_time_exact(Pc, pic, 0.25, worst_case_starts(index, 0)).tau;
  }
  return row;
}

long long product_mixing_bound(const std::vector<double>& p_select,
                               const std::vector<std::function<long long(double)>>& tau, double eps) {
  if (p_select.empty() || p_select.size() != tau.size()) throw InvalidArgument("product bound needs matching factors");
  double sum = 0.0;
  for (double p : p_select) {
    if (!(p > 0.0)) throw InvalidArgument("selection probabilities must be positive");
    sum += p;
  }
  if (sum > 1.0 + 1e-12) throw InvalidArgument("selection probabilities sum above 1");
  const double M = static_cast<double>(p_select.size());
  double best = 0.0;
  for (std::size_t i = 0; i < p_select.size(); ++i)
    best = std::max(best, 2.0 / p_select[i] * static_cast<double>(tau[i](eps / (2.0 * M))));
  return static_cast<long long>(std::ceil(best - 1e-9));
}

Eigen::MatrixXd product_chain_matrix(const std::vector<double>& p_select, const std::vector<Eigen::MatrixXd>& factors) {
  if (p_select.size() != factors.size() || factors.empty()) throw InvalidArgument("product chain needs matching factors");
  int N = 1;
  for (const auto& F : factors) N *= static_cast<int>(F.rows());
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(N, N);
  double rest = 1.0;
  // Coordinate i has stride equal to the product of the sizes after it.
  for (std::size_t i = 0; i < factors.size(); ++i) {
    rest -= p_select[i];
    int before = 1, after = 1;
    for (std::size_t j = 0; j < i; ++j) before *= static_cast<int>(factors[j].rows());
    for (std::size_t j = i + 1; j < factors.size(); ++j) after *= static_cast<int>(factors[j].rows());
    const int s = static_cast<int>(factors[i].rows());
    for (int b = 0; b < before; ++b)
      for (int x = 0; x < s; ++x)
        for (int y = 0; y < s; ++y)
          for (int a = 0; a < after; ++a)
            P((b * s + x) * after + a, (b * s + y) * after + a) += p_select[i] * factors[i](x, y);
  }
  P += rest * Eigen::MatrixXd::Identity(N, N);
  return P;
}

CouplingEstimate coupling_time_estimate(const OnedKernel& kernel, int pairs, std::uint64_t seed, double eps) {
  CounterRng root(seed);
  double total = 0.0;
  for (int trial = 0; trial < pairs; ++trial) {
    CounterRng rng = root.split(static_cast<std::uint64_t>(trial));
    int lo = 0, hi = kernel.k;
    long long t = 0;
    while (lo != hi) {
      const bool up = rng.uniform01() < kernel.r;
      lo = std::clamp(lo + (up ? 1 : -1), 0, kernel.k);
      hi = std::clamp(hi + (up ? 1 : -1), 0, kernel.k);
      ++t;
    }
    total += static_cast<double>(t);
  }
  CouplingEstimate est;
  est.mean_T = pairs > 0 ? total / pairs : 0.0;
  est.tau_bound = est.mean_T * std::exp(1.0) * std::ceil(std::log(1.0 / eps));
  return est;
}

double mean_hitting_time(const OnedKernel& kernel, int trials, std::uint64_t seed) {
  CounterRng root(seed);
  double total = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    CounterRng rng = root.split(static_cast<std::uint64_t>(trial));
    int h = 0;
    long long t = 0;
    while (h < kernel.k) {
      h = step_oned(h, kernel.r, kernel.k, rng);
      ++t;
    }
    total += static_cast<double>(t);
  }
  return trials > 0 ? total / trials : 0.0;
}

double hitting_time_closed_form(double r, int k) {
  if (r == 0.5) return static_cast<double>(k) * (k + 1);
  const double rho = (1.0 - r) / r;
  const double drift = 2.0 * r - 1.0;
  return k / drift - rho * (1.0 - std::pow(rho, k)) / ((1.0 - rho) * drift);
}

namespace {

// Projects every row of `kernel` through `coord` and compares with `expected`,
// requiring the projection to be the same for all states sharing a coordinate.
double projection_error(const ChainKernel& kernel, const StateSpaceIndex& index,
                        const std::function<int(const State&)>& coord, const Eigen::MatrixXd& expected) {
  double worst = 0.0;
  const int m = static_cast<int>(expected.rows());
  for (int s = 0; s < index.size(); ++s) {
    const State& st = index.state(s);
    const int c = coord(st);
    Eigen::VectorXd row = Eigen::VectorXd::Zero(m);
    for (const auto& [next, p] : transition_distribution<double>(kernel, st)) row[coord(next)] += p;
    worst = std::max(worst, (row - expected.row(c).transpose()).cwiseAbs().maxCoeff());
  }
  return worst;
}

}  // namespace

double inv_projection_error(const ChooseYourWeaponSpec& spec) {
  const ChooseYourWeaponSpec mspec = spec.as_min_indexed();
  const bool mirror = spec.variant == ChooseYourWeaponSpec::Variant::max_indexed;
  const int n = spec.size();
  const ChainKernel kernel = InvKernel(spec);
  const StateSpaceIndex index = StateSpaceIndex::permutations(n);
  const double pairs = static_cast<double>(binomial(n, 2));
  double worst = 0.0;
  for (int i = 1; i < n; ++i) {
    const int k = n - i;
    const ChainKernel walk = OnedKernel{mspec.r[i - 1], k};
    const StateSpaceIndex line = StateSpaceIndex::interval(k);
    const Eigen::MatrixXd K = to_dense(build_transition_matrix(walk, line));
    const double s = k / pairs;
    const Eigen::MatrixXd L = (1.0 - s / 2.0) * Eigen::MatrixXd::Identity(k + 1, k + 1) + (s / 2.0) * K;
    const auto coord = [&](const State& st) {
      const State v = mirror ? mirrored(st) : st;
      return k - inversion_table(Permutation(v)).x[i - 1];
    };
    worst = std::max(worst, projection_error(kernel, index, coord, L));
  }
  return worst;
}

double tree_projection_error(const LeagueTree& T) {
  const int n = T.size();
  const ChainKernel kernel = TreeKernel(T);
  const StateSpaceIndex index = StateSpaceIndex::permutations(n);
  const double pairs = static_cast<double>(binomial(n, 2));
  double worst = 0.0;
  for (int v : T.internal_nodes()) {
    const auto& nd = T.node(v);
    const int ones = T.node(nd.left).hi - nd.lo + 1;
    const int zeros = nd.hi - T.node(nd.right).lo + 1;
    const ChainKernel asep = AsepKernel{nd.q, ones, zeros};
    const StateSpaceIndex strings = StateSpaceIndex::binary_strings(ones, zeros);
    const Eigen::MatrixXd K = to_dense(build_transition_matrix(asep, strings));
    const double c = (ones + zeros - 1) / pairs;
    const int m = strings.size();
    const Eigen::MatrixXd L = (1.0 - c) * Eigen::MatrixXd::Identity(m, m) + c * K;
    const auto coord = [&](const State& st) {
      State b;
      for (int x : st)
        if (T.covers(v, x)) b.push_back(x <= T.node(nd.left).hi ? 1 : 0);
      return strings.id(b);
    };
    worst = std::max(worst, projection_error(kernel, index, coord, L));
  }
  return worst;
}

Eigen::MatrixXd to_dense(const SparseMatrix& P) { return Eigen::MatrixXd(P); }

SparseMatrix to_sparse(const Eigen::MatrixXd& P) {
  SparseMatrix S = P.sparseView();
  S.makeCompressed();
  return S;
}

}  // namespace biasperm
