#include "biasperm/state_space.hpp"

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

}  // namespace

void StateSpaceIndex::check_cap(std::size_t count, std::size_t cap, const std::string& what) {
  if (count > cap) {
    throw CapExceeded(what + " has " + std::to_string(count) + " states, above the cap of " + std::to_string(cap));
  }
}

void StateSpaceIndex::add(const State& s) {
  ids_.emplace(s, static_cast<int>(states_.size()));
  states_.push_back(s);
}

int StateSpaceIndex::id(const State& s) const {
  auto it = ids_.find(s);
  if (it == ids_.end()) throw InvalidArgument("state not in index");
  return it->second;
}

StateSpaceIndex StateSpaceIndex::permutations(int n, std::size_t cap) {
  if (n < 1) throw InvalidArgument("permutation space needs n >= 1");
  check_cap(n > 20 ? std::numeric_limits<std::size_t>::max() : factorial(n), cap, "S_" + std::to_string(n));
  StateSpaceIndex idx;
  idx.kind_ = Kind::permutations;
  for_each_permutation(n, [&](const std::vector<int>& p) { idx.add(p); });
  return idx;
}

StateSpaceIndex StateSpaceIndex::walks(int n, std::size_t cap) {
  if (n < 1) throw InvalidArgument("walk space needs n >= 1");
  check_cap(n > 30 ? std::numeric_limits<std::size_t>::max() : binomial(2 * n, n), cap,
            "walk space of half-size " + std::to_string(n));
  StateSpaceIndex idx;
  idx.kind_ = Kind::walks;
  for_each_walk(n, [&](const std::vector<int>& w) { idx.add(w); });
  return idx;
}

StateSpaceIndex StateSpaceIndex::binary_strings(int ones, int zeros, std::size_t cap) {
  if (ones < 0 || zeros < 0) throw InvalidArgument("string space needs nonnegative counts");
  check_cap(ones + zeros > 60 ? std::numeric_limits<std::size_t>::max() : binomial(ones + zeros, ones), cap,
            "string space");
  StateSpaceIndex idx;
  idx.kind_ = Kind::binary_strings;
  for_each_binary_string(ones, zeros, [&](const std::vector<int>& s) { idx.add(s); });
  return idx;
}

StateSpaceIndex StateSpaceIndex::interval(int k, std::size_t cap) {
  if (k < 0) throw InvalidArgument("interval needs k >= 0");
  check_cap(static_cast<std::size_t>(k) + 1, cap, "interval");
  StateSpaceIndex idx;
  idx.kind_ = Kind::interval;
  for (int h = 0; h <= k; ++h) idx.add(State{h});
  return idx;
}

StateSpaceIndex StateSpaceIndex::for_kernel(const ChainKernel& kernel, std::size_t cap) {
  return std::visit(overloaded{[&](const OnedKernel& k) { return interval(k.k, cap); },
                               [&](const AsepKernel& k) { return binary_strings(k.ones, k.zeros, cap); },
                               [&](const WalkKernel& k) { return walks(k.model.n, cap); },
                               [&](const WalkTranspositionKernel& k) { return walks(k.model.n, cap); },
                               [&](const TreeKernel& k) { return permutations(k.T.size(), cap); },
                               [&](const InvKernel& k) { return permutations(k.spec.size(), cap); },
                               [&](const NnKernel& k) { return permutations(k.P.size(), cap); }},
                    kernel);
}

}  // namespace biasperm
