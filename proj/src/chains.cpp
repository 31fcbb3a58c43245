#include "biasperm/chains.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "biasperm/errors.hpp"

namespace biasperm {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

template <class Scalar>
void add_mass(std::vector<std::pair<State, Scalar>>& dist, State s, const Scalar& mass) {
  if (mass == Scalar(0)) return;
  for (auto& [t, m] : dist) {
    if (t == s) {
      m += mass;
      return;
    }
  }
  dist.emplace_back(std::move(s), mass);
}

// Maps a draw in [0, C(n,2)) to the pair (a, b), a < b, in lexicographic order.
std::pair<int, int> pair_from_index(int n, std::uint64_t idx) {
  for (int a = 1; a < n; ++a) {
    const auto row = static_cast<std::uint64_t>(n - a);
    if (idx < row) return {a, a + 1 + static_cast<int>(idx)};
    idx -= row;
  }
  throw SoundnessFailure("pair index out of range");
}

// Element i in 1..n-1 chosen with weight n - i.
int element_from_index(int n, std::uint64_t idx) {
  for (int i = 1; i < n; ++i) {
    const auto w = static_cast<std::uint64_t>(n - i);
    if (idx < w) return i;
    idx -= w;
  }
  throw SoundnessFailure("element index out of range");
}

int prefix_height(const State& w, int t) {
  int h = 0;
  for (int i = 0; i < t; ++i) h += w[i];
  return h;
}

// Position of the k-th entry equal to `value`.
int nth_position(const State& w, int value, int k) {
  for (int i = 0; i < static_cast<int>(w.size()); ++i)
    if (w[i] == value && k-- == 0) return i;
  throw SoundnessFailure("walk lacks the requested step");
}

int count_ordered_pairs(const State& s) {
  int ones = 0, pairs = 0;
  for (int c : s) {
    if (c == 1) ++ones;
    else pairs += ones;
  }
  return pairs;
}

StepOutcome step_inv_min(const State& sigma, const ChooseYourWeaponSpec& spec, CounterRng& rng) {
  const int n = static_cast<int>(sigma.size());
  StepOutcome out{sigma, false, {}};
  const std::uint64_t total = binomial(n, 2);
  const std::uint64_t pick = total ? rng.uniform_index(total) : 0;
  const int dir = rng.uniform_index(2) == 0 ? 1 : -1;
  const double u = rng.uniform01();
  if (n < 2) return out;
  const int i = element_from_index(n, pick);
  const double r = spec.r[i - 1];
  int p = 0;
  while (sigma[p] != i) ++p;
  const int q = inv_partner(sigma, p, dir);
  const double accept = dir > 0 ? 1.0 - r : r;
  out.proposal = Proposal{i, q < 0 ? -1 : sigma[q], dir, q < 0 ? 0.0 : accept};
  if (q >= 0 && u < accept) {
    std::swap(out.next[p], out.next[q]);
    out.moved = true;
  }
  return out;
}

template <class Scalar>
void inv_min_distribution(const State& sigma, const ChooseYourWeaponSpec& spec,
                          std::vector<std::pair<State, Scalar>>& dist) {
  const int n = static_cast<int>(sigma.size());
  if (n < 2) {
    add_mass(dist, sigma, Scalar(1));
    return;
  }
  const Scalar total(static_cast<long long>(binomial(n, 2)));
  Scalar hold(0);
  for (int i = 1; i < n; ++i) {
    const Scalar branch = Scalar(n - i) / total / Scalar(2);
    const Scalar r = scalar_from_double<Scalar>(spec.r[i - 1]);
    int p = 0;
    while (sigma[p] != i) ++p;
    for (int dir : {1, -1}) {
      const Scalar accept = dir > 0 ? Scalar(1) - r : r;
      const int q = inv_partner(sigma, p, dir);
      if (q < 0) {
        hold += branch;
        continue;
      }
      State next = sigma;
      std::swap(next[p], next[q]);
      add_mass(dist, std::move(next), branch * accept);
      hold += branch * (Scalar(1) - accept);
    }
  }
  add_mass(dist, sigma, hold);
}

template <class Scalar>
Scalar walk_pair_probability(const WalkWeightModel& m, int peak) {
  return scalar_from_double<Scalar>(m.p_for_peak(peak));
}

template <class Scalar>
Scalar metropolis_ratio(const WalkWeightModel& m, const State& from, const State& to) {
  if constexpr (std::is_same_v<Scalar, double>) {
    return std::exp(walk_log_weight(to, m) - walk_log_weight(from, m));
  } else {
    return walk_weight<Scalar>(to, m) / walk_weight<Scalar>(from, m);
  }
}

}  // namespace

std::string kernel_name(const ChainKernel& kernel) {
  return std::visit(overloaded{[](const NnKernel&) { return std::string("nn"); },
                               [](const InvKernel&) { return std::string("inv"); },
                               [](const TreeKernel&) { return std::string("tree"); },
                               [](const OnedKernel&) { return std::string("oned"); },
                               [](const AsepKernel&) { return std::string("asep"); },
                               [](const WalkKernel&) { return std::string("walk"); },
                               [](const WalkTranspositionKernel&) { return std::string("walk-transposition"); }},
                    kernel);
}

int inv_partner(const State& sigma, int p, int dir) {
  const int n = static_cast<int>(sigma.size());
  const int x = sigma[p];
  if (dir > 0) {
    for (int q = p + 1; q < n; ++q)
      if (sigma[q] > x) return q;
  } else {
    for (int q = p - 1; q >= 0; --q)
      if (sigma[q] > x) return q;
  }
  return -1;
}

bool tree_pair_legal(const State& sigma, const LeagueTree& T, int a, int b) {
  const int v = T.lca(a, b);
  int pa = -1, pb = -1;
  for (int i = 0; i < static_cast<int>(sigma.size()); ++i) {
    if (sigma[i] == a) pa = i;
    if (sigma[i] == b) pb = i;
  }
  if (pa > pb) std::swap(pa, pb);
  for (int k = pa + 1; k < pb; ++k)
    if (T.covers(v, sigma[k])) return false;
  return true;
}

StepOutcome step(const ChainKernel& kernel, const State& state, CounterRng& rng) {
  const auto perm_size = [](const ChainKernel& k) {
    if (const auto* a = std::get_if<NnKernel>(&k)) return a->P.size();
    if (const auto* b = std::get_if<InvKernel>(&k)) return b->P.size();
    if (const auto* c = std::get_if<TreeKernel>(&k)) return c->P.size();
    return -1;
  };
  const int expect = perm_size(kernel);
  if (expect >= 0 && static_cast<int>(state.size()) != expect) throw InvalidArgument("state size does not match the kernel");
  return std::visit(
      overloaded{
          [&](const NnKernel& k) {
            const int n = static_cast<int>(state.size());
            StepOutcome out{state, false, {}};
            const int i = n > 1 ? static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(n - 1))) : 0;
            const double u = rng.uniform01();
            if (n < 2) return out;
            const double accept = k.P(state[i + 1], state[i]);
            out.proposal = Proposal{i, i + 1, 0, accept};
            if (u < accept) {
              std::swap(out.next[i], out.next[i + 1]);
              out.moved = true;
            }
            return out;
          },
          [&](const InvKernel& k) {
            if (k.spec.variant == ChooseYourWeaponSpec::Variant::min_indexed) return step_inv_min(state, k.spec, rng);
            StepOutcome out = step_inv_min(mirrored(state), k.spec.as_min_indexed(), rng);
            out.next = mirrored(out.next);
            const int n = static_cast<int>(state.size());
            if (out.proposal.a > 0) out.proposal.a = n + 1 - out.proposal.a;
            if (out.proposal.b > 0) out.proposal.b = n + 1 - out.proposal.b;
            return out;
          },
          [&](const TreeKernel& k) {
            const int n = static_cast<int>(state.size());
            StepOutcome out{state, false, {}};
            const std::uint64_t total = binomial(n, 2);
            const std::uint64_t pick = total ? rng.uniform_index(total) : 0;
            const double u = rng.uniform01();
            if (n < 2) return out;
            const auto [a, b] = pair_from_index(n, pick);
            const bool legal = tree_pair_legal(state, k.T, a, b);
            const double p_ab = k.P(a, b);
            out.proposal = Proposal{a, b, 0, legal ? p_ab : 0.0};
            if (!legal) return out;
            int pa = 0, pb = 0;
            for (int i = 0; i < n; ++i) {
              if (state[i] == a) pa = i;
              if (state[i] == b) pb = i;
            }
            const int first = std::min(pa, pb), second = std::max(pa, pb);
            out.next[first] = u < p_ab ? a : b;
            out.next[second] = u < p_ab ? b : a;
            out.moved = out.next != state;
            return out;
          },
          [&](const OnedKernel& k) {
            StepOutcome out{state, false, {}};
            const double u = rng.uniform01();
            const int h = state.at(0);
            const int target = u < k.r ? h + 1 : h - 1;
            out.proposal = Proposal{h, target, 0, u < k.r ? k.r : 1.0 - k.r};
            if (target >= 0 && target <= k.k) {
              out.next[0] = target;
              out.moved = true;
            }
            return out;
          },
          [&](const AsepKernel& k) {
            const int len = static_cast<int>(state.size());
            StepOutcome out{state, false, {}};
            const int i = len > 1 ? static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(len - 1))) : 0;
            const double u = rng.uniform01();
            if (len < 2 || state[i] == state[i + 1]) return out;
            out.proposal = Proposal{i, i + 1, 0, k.p};
            out.next[i] = u < k.p ? 1 : 0;
            out.next[i + 1] = u < k.p ? 0 : 1;
            out.moved = out.next != state;
            return out;
          },
          [&](const WalkKernel& k) {
            const int len = static_cast<int>(state.size());
            StepOutcome out{state, false, {}};
            const int t = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(len - 1)));
            const double u = rng.uniform01();
            if (state[t] == state[t + 1]) return out;
            const double p = k.model.p_for_peak(prefix_height(state, t) + 1);
            out.proposal = Proposal{t, t + 1, 0, p};
            out.next[t] = u < p ? 1 : -1;
            out.next[t + 1] = u < p ? -1 : 1;
            out.moved = out.next != state;
            return out;
          },
          [&](const WalkTranspositionKernel& k) {
            const int n = static_cast<int>(state.size()) / 2;
            StepOutcome out{state, false, {}};
            const std::uint64_t pick = rng.uniform_index(static_cast<std::uint64_t>(n) * n);
            const double u = rng.uniform01();
            const int pu = nth_position(state, 1, static_cast<int>(pick / n));
            const int pd = nth_position(state, -1, static_cast<int>(pick % n));
            State next = state;
            std::swap(next[pu], next[pd]);
            const double accept = std::min(1.0, metropolis_ratio<double>(k.model, state, next));
            out.proposal = Proposal{pu, pd, 0, accept};
            if (u < accept) {
              out.next = std::move(next);
              out.moved = true;
            }
            return out;
          }},
      kernel);
}

StepOutcome step_nn(const Permutation& sigma, const BiasTable& P, CounterRng& rng) {
  return step(NnKernel{P}, sigma.entries(), rng);
}

StepOutcome step_inv(const Permutation& sigma, const ChooseYourWeaponSpec& spec, CounterRng& rng) {
  return step(InvKernel(spec), sigma.entries(), rng);
}

StepOutcome step_tree(const Permutation& sigma, const TreeKernel& kernel, CounterRng& rng) {
  return step(kernel, sigma.entries(), rng);
}

int step_oned(int h, double r, int k, CounterRng& rng) {
  if (h < 0 || h > k) throw InvalidArgument("height outside [0, k]");
  return step(OnedKernel{r, k}, State{h}, rng).next[0];
}

State step_asep(const State& s, double p, CounterRng& rng) {
  const int ones = static_cast<int>(std::count(s.begin(), s.end(), 1));
  return step(AsepKernel{p, ones, static_cast<int>(s.size()) - ones}, s, rng).next;
}

StaircaseWalk step_walk(const StaircaseWalk& w, const WalkWeightModel& model, CounterRng& rng) {
  return StaircaseWalk(step(WalkKernel{model}, w.steps, rng).next);
}

StaircaseWalk step_walk_transposition(const StaircaseWalk& w, const WalkWeightModel& model, CounterRng& rng) {
  return StaircaseWalk(step(WalkTranspositionKernel{model}, w.steps, rng).next);
}

template <class Scalar>
std::vector<std::pair<State, Scalar>> transition_distribution(const ChainKernel& kernel, const State& state) {
  std::vector<std::pair<State, Scalar>> dist;
  std::visit(
      overloaded{
          [&](const NnKernel& k) {
            const int n = static_cast<int>(state.size());
            if (n < 2) return add_mass(dist, state, Scalar(1));
            const Scalar pick = Scalar(1) / Scalar(n - 1);
            Scalar hold(0);
            for (int i = 0; i + 1 < n; ++i) {
              const Scalar accept = k.P.entry<Scalar>(state[i + 1], state[i]);
              State next = state;
              std::swap(next[i], next[i + 1]);
              add_mass(dist, std::move(next), pick * accept);
              hold += pick * (Scalar(1) - accept);
            }
            add_mass(dist, state, hold);
          },
          [&](const InvKernel& k) {
            if (k.spec.variant == ChooseYourWeaponSpec::Variant::min_indexed) {
              inv_min_distribution<Scalar>(state, k.spec, dist);
              return;
            }
            std::vector<std::pair<State, Scalar>> mirror;
            inv_min_distribution<Scalar>(mirrored(state), k.spec.as_min_indexed(), mirror);
            for (auto& [s, m] : mirror) add_mass(dist, mirrored(s), m);
          },
          [&](const TreeKernel& k) {
            const int n = static_cast<int>(state.size());
            if (n < 2) return add_mass(dist, state, Scalar(1));
            const Scalar pick = Scalar(1) / Scalar(static_cast<long long>(binomial(n, 2)));
            Scalar hold(0);
            std::vector<int> pos(n + 1);
            for (int i = 0; i < n; ++i) pos[state[i]] = i;
            for (int a = 1; a <= n; ++a) {
              for (int b = a + 1; b <= n; ++b) {
                if (!tree_pair_legal(state, k.T, a, b)) {
                  hold += pick;
                  continue;
                }
                const int first = std::min(pos[a], pos[b]);
                const int second = std::max(pos[a], pos[b]);
                const Scalar p_ab = k.P.entry<Scalar>(a, b);
                const bool ordered = pos[a] < pos[b];
                State flipped = state;
                std::swap(flipped[first], flipped[second]);
                // The ordered arrangement has probability p_ab.
                const Scalar stay = ordered ? p_ab : Scalar(1) - p_ab;
                hold += pick * stay;
                add_mass(dist, std::move(flipped), pick * (Scalar(1) - stay));
              }
            }
            add_mass(dist, state, hold);
          },
          [&](const OnedKernel& k) {
            const int h = state.at(0);
            const Scalar r = scalar_from_double<Scalar>(k.r);
            add_mass(dist, State{h + 1 <= k.k ? h + 1 : h}, r);
            add_mass(dist, State{h - 1 >= 0 ? h - 1 : h}, Scalar(1) - r);
          },
          [&](const AsepKernel& k) {
            const int len = static_cast<int>(state.size());
            if (len < 2) return add_mass(dist, state, Scalar(1));
            const Scalar pick = Scalar(1) / Scalar(len - 1);
            const Scalar p = scalar_from_double<Scalar>(k.p);
            Scalar hold(0);
            for (int i = 0; i + 1 < len; ++i) {
              if (state[i] == state[i + 1]) {
                hold += pick;
                continue;
              }
              const Scalar stay = state[i] == 1 ? p : Scalar(1) - p;
              State next = state;
              std::swap(next[i], next[i + 1]);
              add_mass(dist, std::move(next), pick * (Scalar(1) - stay));
              hold += pick * stay;
            }
            add_mass(dist, state, hold);
          },
          [&](const WalkKernel& k) {
            const int len = static_cast<int>(state.size());
            const Scalar pick = Scalar(1) / Scalar(len - 1);
            Scalar hold(0);
            int h = 0;
            for (int t = 0; t + 1 < len; h += state[t], ++t) {
              if (state[t] == state[t + 1]) {
                hold += pick;
                continue;
              }
              const Scalar p = walk_pair_probability<Scalar>(k.model, h + 1);
              const Scalar stay = state[t] == 1 ? p : Scalar(1) - p;
              State next = state;
              std::swap(next[t], next[t + 1]);
              add_mass(dist, std::move(next), pick * (Scalar(1) - stay));
              hold += pick * stay;
            }
            add_mass(dist, state, hold);
          },
          [&](const WalkTranspositionKernel& k) {
            const int len = static_cast<int>(state.size());
            const int n = len / 2;
            const Scalar pick = Scalar(1) / Scalar(n * n);
            Scalar hold(0);
            for (int pu = 0; pu < len; ++pu) {
              if (state[pu] != 1) continue;
              for (int pd = 0; pd < len; ++pd) {
                if (state[pd] != -1) continue;
                State next = state;
                std::swap(next[pu], next[pd]);
                Scalar accept = metropolis_ratio<Scalar>(k.model, state, next);
                if (accept > Scalar(1)) accept = Scalar(1);
                add_mass(dist, std::move(next), pick * accept);
                hold += pick * (Scalar(1) - accept);
              }
            }
            add_mass(dist, state, hold);
          }},
      kernel);
  return dist;
}

template std::vector<std::pair<State, double>> transition_distribution<double>(const ChainKernel&, const State&);
template std::vector<std::pair<State, Rational>> transition_distribution<Rational>(const ChainKernel&, const State&);

template <class Scalar>
Scalar kernel_weight(const ChainKernel& kernel, const State& state) {
  return std::visit(
      overloaded{[&](const NnKernel& k) { return weight<Scalar>(state, k.P); },
                 [&](const InvKernel& k) { return weight<Scalar>(state, k.P); },
                 [&](const TreeKernel& k) { return weight<Scalar>(state, k.P); },
                 [&](const OnedKernel& k) {
                   const Scalar r = scalar_from_double<Scalar>(k.r);
                   Scalar w(1);
                   for (int i = 0; i < state[0]; ++i) w *= r;
                   for (int i = state[0]; i < k.k; ++i) w *= Scalar(1) - r;
                   return w;
                 },
                 [&](const AsepKernel& k) {
                   // Each 1 before a 0 weighs p, each 0 before a 1 weighs 1 - p.
                   const Scalar p = scalar_from_double<Scalar>(k.p);
                   const int ordered = count_ordered_pairs(state);
                   Scalar w(1);
                   for (int i = 0; i < ordered; ++i) w *= p;
                   for (int i = ordered; i < k.ones * k.zeros; ++i) w *= Scalar(1) - p;
                   return w;
                 },
                 [&](const WalkKernel& k) { return walk_weight<Scalar>(state, k.model); },
                 [&](const WalkTranspositionKernel& k) { return walk_weight<Scalar>(state, k.model); }},
      kernel);
}

template double kernel_weight<double>(const ChainKernel&, const State&);
template Rational kernel_weight<Rational>(const ChainKernel&, const State&);

double kernel_log_weight(const ChainKernel& kernel, const State& state) {
  return std::visit(
      overloaded{[&](const NnKernel& k) { return log_weight(state, k.P); },
                 [&](const InvKernel& k) { return log_weight(state, k.P); },
                 [&](const TreeKernel& k) { return log_weight(state, k.P); },
                 [&](const WalkKernel& k) { return walk_log_weight(state, k.model); },
                 [&](const WalkTranspositionKernel& k) { return walk_log_weight(state, k.model); },
                 [&](const auto&) {
                   const double w = kernel_weight<double>(kernel, state);
                   return w > 0 ? std::log(w) : -std::numeric_limits<double>::infinity();
                 }},
      kernel);
}

State default_start(const ChainKernel& kernel, int n) {
  return std::visit(overloaded{[&](const OnedKernel&) { return State{0}; },
                               [&](const AsepKernel& k) {
                                 State s(k.ones + k.zeros, 0);
                                 std::fill(s.begin(), s.begin() + k.ones, 1);
                                 return s;
                               },
                               [&](const WalkKernel& k) {
                                 State s(2 * k.model.n, 1);
                                 std::fill(s.begin(), s.begin() + k.model.n, -1);
                                 return s;
                               },
                               [&](const WalkTranspositionKernel& k) {
                                 State s(2 * k.model.n, 1);
                                 std::fill(s.begin(), s.begin() + k.model.n, -1);
                                 return s;
                               },
                               [&](const auto&) { return Permutation::identity(n).entries(); }},
                    kernel);
}

std::pair<std::string, double> observable(const ChainKernel& kernel, const State& state) {
  return std::visit(
      overloaded{[&](const OnedKernel&) { return std::pair<std::string, double>{"height", state[0]}; },
                 [&](const AsepKernel&) {
                   return std::pair<std::string, double>{"ordered_pairs", count_ordered_pairs(state)};
                 },
                 [&](const WalkKernel&) { return std::pair<std::string, double>{"max_height", walk_max_height(state)}; },
                 [&](const WalkTranspositionKernel&) {
                   return std::pair<std::string, double>{"max_height", walk_max_height(state)};
                 },
                 [&](const auto&) {
                   return std::pair<std::string, double>{"inversions", Permutation(state).inversions()};
                 }},
      kernel);
}

Trajectory run(const ChainKernel& kernel, const State& start, std::uint64_t steps, std::uint64_t seed,
               std::uint64_t stride) {
  CounterRng rng(seed);
  Trajectory tr;
  State cur = start;
  auto record = [&](std::uint64_t t) {
    auto [name, value] = observable(kernel, cur);
    tr.rows.push_back(ObservableRow{t, name, value});
  };
  if (stride > 0) record(0);
  for (std::uint64_t t = 1; t <= steps; ++t) {
    StepOutcome o = step(kernel, cur, rng);
    if (o.moved) {
      ++tr.moves;
      cur = std::move(o.next);
    }
    if (stride > 0 && t % stride == 0) record(t);
  }
  tr.final_state = std::move(cur);
  return tr;
}

}  // namespace biasperm
