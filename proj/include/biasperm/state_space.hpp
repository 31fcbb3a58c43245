#pragma once

#include <cstddef>
#include <string>
#include <unordered_map>
#include <vector>

#include "biasperm/chains.hpp"

namespace biasperm {

struct StateHash {
  std::size_t operator()(const State& s) const noexcept {
    std::size_t h = 1469598103934665603ULL;
    for (int v : s) h = (h ^ static_cast<std::size_t>(v + 7)) * 1099511628211ULL;
    return h;
  }
};

/// Dense ids for an enumerated state space. Permutations, walks and strings
/// are ordered lexicographically; the interval is 0..k.
class StateSpaceIndex {
 public:
  enum class Kind { permutations, walks, binary_strings, interval };
  static constexpr std::size_t default_cap = 100000;

  static StateSpaceIndex permutations(int n, std::size_t cap = default_cap);
  static StateSpaceIndex walks(int n, std::size_t cap = default_cap);
  static StateSpaceIndex binary_strings(int ones, int zeros, std::size_t cap = default_cap);
  static StateSpaceIndex interval(int k, std::size_t cap = default_cap);
  /// The natural space of a kernel.
  static StateSpaceIndex for_kernel(const ChainKernel& kernel, std::size_t cap = default_cap);

  Kind kind() const { return kind_; }
  int size() const { return static_cast<int>(states_.size()); }
  const State& state(int id) const { return states_[id]; }
  const std::vector<State>& states() const { return states_; }
  /// Id of a state; throws when absent.
  int id(const State& s) const;
  bool contains(const State& s) const { return ids_.count(s) != 0; }

 private:
  static void check_cap(std::size_t count, std::size_t cap, const std::string& what);
  void add(const State& s);

  Kind kind_ = Kind::permutations;
  std::vector<State> states_;
  std::unordered_map<State, int, StateHash> ids_;
};

}  // namespace biasperm
