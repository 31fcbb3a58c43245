#include "biasperm/canonical_paths.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <tuple>
#include <unordered_map>

#include "biasperm/errors.hpp"
#include "biasperm/state_space.hpp"

namespace biasperm {

namespace {

// The two positions where sigma and beta differ, checked to be a swap.
std::pair<int, int> transposed_positions(const State& sigma, const State& beta) {
  if (sigma.size() != beta.size()) throw InvalidArgument("states differ in size");
  std::vector<int> diff;
  for (int k = 0; k < static_cast<int>(sigma.size()); ++k)
    if (sigma[k] != beta[k]) diff.push_back(k);
  if (diff.size() != 2 || sigma[diff[0]] != beta[diff[1]] || sigma[diff[1]] != beta[diff[0]]) {
    throw InvalidArgument("states are not related by one transposition");
  }
  return {diff[0], diff[1]};
}

class PathBuilder {
 public:
  PathBuilder(const State& start, NnPath& path) : cur_(start), path_(path) { path_.states.push_back(cur_); }

  void swap_right(int pos, int stage) {
    std::swap(cur_[pos], cur_[pos + 1]);
    path_.states.push_back(cur_);
    path_.stages.push_back(stage);
  }
  int position_of(int value) const {
    return static_cast<int>(std::find(cur_.begin(), cur_.end(), value) - cur_.begin());
  }
  const State& current() const { return cur_; }

 private:
  State cur_;
  NnPath& path_;
};

NnPath direct_tree_path(const State& sigma, int i, int j) {
  NnPath path;
  path.i = i;
  path.j = j;
  if (j == i + 1) {
    path.states.push_back(sigma);
    State next = sigma;
    std::swap(next[i], next[j]);
    path.states.push_back(next);
    path.stages.push_back(0);
    return path;
  }
  const int x = sigma[i], y = sigma[j];
  const int lo = std::min(x, y), hi = std::max(x, y);
  const auto small = [lo](int v) { return v < lo; };
  const auto big = [hi](int v) { return v > hi; };
  for (int k = i + 1; k < j; ++k)
    if (!small(sigma[k]) && !big(sigma[k])) throw InvalidArgument("an in-between entry lies between the transposed pair");

  PathBuilder b(sigma, path);
  // Stage 1: push sigma(j) left past big entries, then each small entry
  // (right to left) past the big entries directly to its left.
  int py = j;
  while (py - 1 > i && big(b.current()[py - 1])) b.swap_right(--py, 1);
  std::vector<std::pair<int, int>> moved;  // (value, original position)
  for (int k = py - 1; k > i; --k) {
    const int v = b.current()[k];
    if (!small(v)) continue;
    int pos = k;
    while (pos - 1 > i && big(b.current()[pos - 1])) b.swap_right(--pos, 1);
    if (pos != k) {
      const int orig = static_cast<int>(std::find(sigma.begin(), sigma.end(), v) - sigma.begin());
      moved.emplace_back(v, orig);
      k = pos;
    }
  }
  // Stage 2: sigma(i) walks right into position j.
  for (int px = i; px < j; ++px) b.swap_right(px, 2);
  // Stage 3: sigma(j) walks left into position i.
  for (int p = b.position_of(y); p > i; --p) b.swap_right(p - 1, 3);
  // Stage 4: moved small entries return, leftmost first.
  for (auto it = moved.rbegin(); it != moved.rend(); ++it) {
    for (int p = b.position_of(it->first); p < it->second; ++p) b.swap_right(p, 4);
  }
  return path;
}

}  // namespace

NnPath path_inv_to_nn(const State& sigma, const State& beta) {
  const auto [p, q] = transposed_positions(sigma, beta);
  const int lo = std::min(sigma[p], sigma[q]);
  for (int k = p + 1; k < q; ++k)
    if (sigma[k] > lo) throw InvalidArgument("not an inversion-chain transition: an in-between entry is larger");
  NnPath path;
  path.i = p;
  path.j = q;
  if (q == p + 1) {
    path.states = {sigma, beta};
    path.stages = {0};
    return path;
  }
  PathBuilder b(sigma, path);
  for (int k = p; k < q; ++k) b.swap_right(k, 1);       // sigma(p) ends at q
  for (int k = q - 1; k > p; --k) b.swap_right(k - 1, 2);  // sigma(q) back to p
  if (b.current() != beta) throw SoundnessFailure("inversion path missed its target");
  return path;
}

TreePathMode tree_path_mode(const BiasTable& P) {
  const WeakMonotonicity w = is_weakly_monotone(P);
  if (w.positively_biased && w.column_clause) return TreePathMode::direct;
  if (w.positively_biased && w.row_clause) return TreePathMode::mirrored;
  return TreePathMode::unguaranteed;
}

NnPath path_tree_to_nn(const State& sigma, const State& beta, TreePathMode mode, const LeagueTree* T) {
  const auto [i, j] = transposed_positions(sigma, beta);
  if (T && !tree_pair_legal(sigma, *T, sigma[i], sigma[j])) {
    throw InvalidArgument("not a tree transition: an in-between entry descends from the pair's ancestor");
  }
  if (mode != TreePathMode::mirrored) {
    NnPath path = direct_tree_path(sigma, i, j);
    if (path.states.back() != beta) throw SoundnessFailure("tree path missed its target");
    return path;
  }
  const int n = static_cast<int>(sigma.size());
  NnPath m = direct_tree_path(mirrored(sigma), n - 1 - j, n - 1 - i);
  for (auto& s : m.states) s = mirrored(s);
  m.i = i;
  m.j = j;
  m.mirrored = true;
  if (m.states.back() != beta) throw SoundnessFailure("mirrored tree path missed its target");
  return m;
}

template <class Scalar>
PathReport verify_path(const NnPath& path, const State& sigma, const State& beta, const BiasTable& P,
                       std::optional<Scalar> floor) {
  PathReport r;
  r.endpoints_ok = !path.states.empty() && path.states.front() == sigma && path.states.back() == beta;
  r.legal = true;
  for (int k = 0; k + 1 < static_cast<int>(path.states.size()); ++k) {
    const State& u = path.states[k];
    const State& v = path.states[k + 1];
    std::vector<int> diff;
    for (int t = 0; t < static_cast<int>(u.size()); ++t)
      if (u[t] != v[t]) diff.push_back(t);
    const bool adjacent = diff.size() == 2 && diff[1] == diff[0] + 1 && u[diff[0]] == v[diff[1]] && u[diff[1]] == v[diff[0]];
    if (!adjacent || P(u[diff[0] + 1], u[diff[0]]) <= 0.0) {
      r.legal = false;
      r.first_bad_step = k;
      break;
    }
  }
  const Scalar ws = weight<Scalar>(sigma, P);
  const Scalar wb = weight<Scalar>(beta, P);
  const Scalar f = floor ? *floor : (ws < wb ? ws : wb);
  r.floor_ok = true;
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& s : path.states) {
    const Scalar w = weight<Scalar>(s, P);
    if (w < f) r.floor_ok = false;
    if (f > Scalar(0)) worst = std::min(worst, static_cast<double>(w / f));
  }
  r.worst_ratio = worst;
  return r;
}

template PathReport verify_path<double>(const NnPath&, const State&, const State&, const BiasTable&, std::optional<double>);
template PathReport verify_path<Rational>(const NnPath&, const State&, const State&, const BiasTable&,
                                          std::optional<Rational>);

CongestionReport congestion_A(PathKind kind, const ChainKernel& aux, int max_n) {
  CongestionReport rep;
  rep.kind = kind == PathKind::inv ? "inv" : "tree";
  const BiasTable* Pp = nullptr;
  const LeagueTree* T = nullptr;
  if (kind == PathKind::inv) {
    const auto* k = std::get_if<InvKernel>(&aux);
    if (!k) throw InvalidArgument("inv congestion needs an inversion-chain kernel");
    Pp = &k->P;
  } else {
    const auto* k = std::get_if<TreeKernel>(&aux);
    if (!k) throw InvalidArgument("tree congestion needs a tree kernel");
    Pp = &k->P;
    T = &k->T;
  }
  const BiasTable& P = *Pp;
  const int n = P.size();
  if (n > max_n) throw CapExceeded("path enumeration is limited to n <= " + std::to_string(max_n));
  rep.n = n;
  rep.mode = kind == PathKind::tree ? tree_path_mode(P) : TreePathMode::direct;

  const StateSpaceIndex index = StateSpaceIndex::permutations(n);
  const int N = index.size();
  std::vector<Rational> wr(N);
  std::vector<double> wd(N);
  for (int s = 0; s < N; ++s) {
    wr[s] = weight<Rational>(index.state(s), P);
    wd[s] = weight<double>(index.state(s), P);
  }

  struct EdgeData {
    double load = 0.0;
    std::vector<long long> users;                         // distinct (sigma, beta) keys
    std::map<std::tuple<int, int, int>, long long> witness;  // (stage, i, j) -> (sigma, beta)
    std::map<std::tuple<int, int, int, int>, long long> offset_witness;
  };
  std::unordered_map<long long, EdgeData> edges;

  for (int s = 0; s < N; ++s) {
    const State& sigma = index.state(s);
    for (const auto& [beta, prob] : transition_distribution<double>(aux, sigma)) {
      if (beta == sigma) continue;
      ++rep.aux_edges;
      const int bid = index.id(beta);
      const NnPath path = kind == PathKind::inv ? path_inv_to_nn(sigma, beta) : path_tree_to_nn(sigma, beta, rep.mode, T);
      const int len = path.length();
      rep.max_path_length = std::max(rep.max_path_length, len);
      const long long pair_key = static_cast<long long>(s) * N + bid;

      std::vector<int> ids(path.states.size());
      for (std::size_t k = 0; k < ids.size(); ++k) ids[k] = index.id(path.states[k]);
      const Rational& floor = wr[s] < wr[bid] ? wr[s] : wr[bid];
      bool floor_ok = true, legal = ids.front() == s && ids.back() == bid;
      for (int id : ids)
        if (wr[id] < floor) floor_ok = false;
      if (!floor_ok) ++rep.floor_failures;

      if (kind == PathKind::tree && len > 1) {
        int last2 = -1;
        for (int k = 0; k < len; ++k)
          if (path.stages[k] == 2) last2 = k + 1;
        const int x = sigma[path.i], y = sigma[path.j];
        const Rational pxy = P.entry<Rational>(x, y), pyx = P.entry<Rational>(y, x);
        if (last2 > 0 && wr[ids[last2]] * pxy < pyx * wr[s]) ++rep.stage2_failures;
      }

      for (int k = 0; k < len; ++k) {
        const State& u = path.states[k];
        int pos = 0;
        while (u[pos] == path.states[k + 1][pos]) ++pos;
        if (pos + 1 >= n || path.states[k + 1][pos] != u[pos + 1] || P(u[pos + 1], u[pos]) <= 0.0) legal = false;
        const long long key = static_cast<long long>(ids[k]) * N + ids[k + 1];
        EdgeData& e = edges[key];
        e.load += len * wd[s] * prob;
        if (std::find(e.users.begin(), e.users.end(), pair_key) == e.users.end()) e.users.push_back(pair_key);
        const auto w = std::make_tuple(path.stages[k], path.i, path.j);
        auto [it, inserted] = e.witness.emplace(w, pair_key);
        if (!inserted && it->second != pair_key) ++rep.witness_collisions;
        auto [it2, inserted2] = e.offset_witness.emplace(std::make_tuple(path.stages[k], path.i, path.j, k), pair_key);
        if (!inserted2 && it2->second != pair_key) ++rep.offset_witness_collisions;
      }
      if (!legal) ++rep.illegal_paths;
    }
  }

  rep.nn_edges_used = static_cast<long long>(edges.size());
  for (const auto& [key, e] : edges) {
    const int u = static_cast<int>(key / N), v = static_cast<int>(key % N);
    const State& su = index.state(u);
    const State& sv = index.state(v);
    int pos = 0;
    while (su[pos] == sv[pos]) ++pos;
    const double pnn = P(su[pos + 1], su[pos]) / (n - 1);
    rep.A = std::max(rep.A, e.load / (wd[u] * pnn));
    rep.max_paths_per_edge = std::max(rep.max_paths_per_edge, static_cast<int>(e.users.size()));
  }
  return rep;
}

long long comparison_bound(double A, long long tau_aux, double pi_min, double eps) {
  if (!(eps > 0.0 && eps < 0.5)) throw InvalidArgument("comparison bound needs 0 < eps < 1/2");
  if (!(A > 0.0) || tau_aux < 0 || !(pi_min > 0.0)) throw InvalidArgument("comparison bound needs positive inputs");
  const double factor = 4.0 * std::log(1.0 / (eps * pi_min)) / std::log(1.0 / (2.0 * eps));
  return static_cast<long long>(std::ceil(factor * A * static_cast<double>(tau_aux) - 1e-9));
}

}  // namespace biasperm
