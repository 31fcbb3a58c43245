#include "biasperm/permutation.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>

#include "biasperm/errors.hpp"

namespace biasperm {

Permutation::Permutation(std::vector<int> entries) : entries_(std::move(entries)) {
  const int n = size();
  std::vector<char> seen(n + 1, 0);
  for (int v : entries_) {
    if (v < 1 || v > n || seen[v]) {
      throw InvalidArgument("not a permutation of 1.." + std::to_string(n));
    }
    seen[v] = 1;
  }
}

Permutation Permutation::identity(int n) {
  std::vector<int> e(n);
  std::iota(e.begin(), e.end(), 1);
  return Permutation(std::move(e));
}

Permutation Permutation::reversal(int n) {
  std::vector<int> e(n);
  for (int i = 0; i < n; ++i) e[i] = n - i;
  return Permutation(std::move(e));
}

Permutation Permutation::parse(std::string_view text) {
  std::vector<int> e;
  if (text.find_first_of(", ") == std::string_view::npos) {
    for (char c : text) {
      if (c < '1' || c > '9') throw InvalidArgument("bad permutation digit");
      e.push_back(c - '0');
    }
    return Permutation(std::move(e));
  }
  std::size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && (text[pos] == ',' || text[pos] == ' ')) ++pos;
    if (pos >= text.size()) break;
    int v = 0;
    auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + text.size(), v);
    if (ec != std::errc()) throw InvalidArgument("bad permutation entry");
    e.push_back(v);
    pos = static_cast<std::size_t>(ptr - text.data());
  }
  return Permutation(std::move(e));
}

std::vector<int> Permutation::positions() const {
  std::vector<int> pos(size() + 1, -1);
  for (int i = 0; i < size(); ++i) pos[entries_[i]] = i;
  return pos;
}

Permutation Permutation::swapped(int pos_a, int pos_b) const {
  Permutation out = *this;
  std::swap(out.entries_.at(pos_a), out.entries_.at(pos_b));
  return out;
}

int Permutation::inversions() const {
  int count = 0;
  for (int i = 0; i < size(); ++i)
    for (int j = i + 1; j < size(); ++j)
      if (entries_[i] > entries_[j]) ++count;
  return count;
}

std::string Permutation::to_string() const {
  std::string s;
  for (int i = 0; i < size(); ++i) {
    if (i) s += ',';
    s += std::to_string(entries_[i]);
  }
  return s;
}

InversionTable::InversionTable(std::vector<int> values) : x(std::move(values)) {
  const int n = size();
  for (int i = 1; i <= n; ++i) {
    if (x[i - 1] < 0 || x[i - 1] > n - i) {
      throw InvalidArgument("inversion table entry x_" + std::to_string(i) + " = " +
                            std::to_string(x[i - 1]) + " outside [0, " + std::to_string(n - i) + "]");
    }
  }
}

int InversionTable::total() const { return std::accumulate(x.begin(), x.end(), 0); }

InversionTable inversion_table(const Permutation& sigma) {
  const int n = sigma.size();
  std::vector<int> x(n, 0);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (sigma[a] > sigma[b]) ++x[sigma[b] - 1];
  return InversionTable(std::move(x));
}

Permutation permutation_from_inversion_table(const InversionTable& table) {
  // Place i into the (x_i + 1)-st free slot, working upward from 1; every
  // label placed later is larger, so free slots before i get larger labels.
  const int n = table.size();
  std::vector<int> out(n, 0);
  for (int i = 1; i <= n; ++i) {
    int skip = table.x[i - 1];
    for (int pos = 0; pos < n; ++pos) {
      if (out[pos] != 0) continue;
      if (skip == 0) {
        out[pos] = i;
        break;
      }
      --skip;
    }
  }
  return Permutation(std::move(out));
}

StaircaseWalk::StaircaseWalk(std::vector<int> values) : steps(std::move(values)) {
  if (steps.size() % 2 != 0) throw InvalidArgument("walk length must be even");
  int sum = 0;
  for (int s : steps) {
    if (s != 1 && s != -1) throw InvalidArgument("walk steps must be +1 or -1");
    sum += s;
  }
  if (sum != 0) throw InvalidArgument("walk must have equally many +1 and -1 steps");
}

std::vector<int> StaircaseWalk::heights() const {
  std::vector<int> h(steps.size() + 1, 0);
  for (std::size_t i = 0; i < steps.size(); ++i) h[i + 1] = h[i] + steps[i];
  return h;
}

int StaircaseWalk::max_height() const {
  const auto h = heights();
  return *std::max_element(h.begin(), h.end());
}

std::string StaircaseWalk::to_string() const {
  std::string s;
  for (int v : steps) s += v > 0 ? '+' : '-';
  return s;
}

StaircaseWalk to_staircase_walk(const Permutation& sigma) {
  if (sigma.size() % 2 != 0) throw InvalidArgument("staircase walk needs an even number of labels");
  const int n = sigma.size() / 2;
  std::vector<int> steps(sigma.size());
  for (int i = 0; i < sigma.size(); ++i) steps[i] = sigma[i] <= n ? 1 : -1;
  return StaircaseWalk(std::move(steps));
}

Permutation sorted_preimage(const StaircaseWalk& walk) {
  const int n = walk.half();
  std::vector<int> e;
  int small = 1, large = n + 1;
  for (int s : walk.steps) e.push_back(s > 0 ? small++ : large++);
  return Permutation(std::move(e));
}

void for_each_permutation(int n, const std::function<void(const std::vector<int>&)>& visit) {
  std::vector<int> e(n);
  std::iota(e.begin(), e.end(), 1);
  do {
    visit(e);
  } while (std::next_permutation(e.begin(), e.end()));
}

void for_each_walk(int n, const std::function<void(const std::vector<int>&)>& visit) {
  std::vector<int> w(2 * n, -1);
  std::fill(w.begin() + n, w.end(), 1);
  do {
    visit(w);
  } while (std::next_permutation(w.begin(), w.end()));
}

void for_each_binary_string(int ones, int zeros,
                            const std::function<void(const std::vector<int>&)>& visit) {
  std::vector<int> s(ones + zeros, 0);
  std::fill(s.begin() + zeros, s.end(), 1);
  do {
    visit(s);
  } while (std::next_permutation(s.begin(), s.end()));
}

std::uint64_t factorial(int n) {
  std::uint64_t f = 1;
  for (int i = 2; i <= n; ++i) f *= static_cast<std::uint64_t>(i);
  return f;
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::uint64_t c = 1;
  for (int i = 1; i <= k; ++i) c = c * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return c;
}

}  // namespace biasperm
