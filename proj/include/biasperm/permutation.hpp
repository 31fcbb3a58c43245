#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace biasperm {

/// A permutation of the labels 1..n stored in one-line notation.
/// Positions are 0-based internally; labels stay 1-based everywhere.
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<int> entries);

  static Permutation identity(int n);
  static Permutation reversal(int n);
  /// Parses "5,1,9" or "519" (the latter only for n <= 9).
  static Permutation parse(std::string_view text);

  int size() const { return static_cast<int>(entries_.size()); }
  int operator[](int pos) const { return entries_[pos]; }
  const std::vector<int>& entries() const { return entries_; }

  /// Position of each label: positions()[label] for label in 1..n (index 0 unused).
  std::vector<int> positions() const;

  Permutation swapped(int pos_a, int pos_b) const;
  int inversions() const;
  std::string to_string() const;

  auto operator<=>(const Permutation&) const = default;

 private:
  std::vector<int> entries_;
};

/// Per-label counts: x[i-1] is the number of labels larger than i appearing before i.
struct InversionTable {
  std::vector<int> x;

  InversionTable() = default;
  explicit InversionTable(std::vector<int> values);
  int size() const { return static_cast<int>(x.size()); }
  int total() const;
  bool operator==(const InversionTable&) const = default;
};

InversionTable inversion_table(const Permutation& sigma);
Permutation permutation_from_inversion_table(const InversionTable& table);

/// A sequence of 2n steps in {+1, -1} with n of each.
struct StaircaseWalk {
  std::vector<int> steps;

  StaircaseWalk() = default;
  explicit StaircaseWalk(std::vector<int> values);
  int half() const { return static_cast<int>(steps.size()) / 2; }
  /// heights()[i] is the sum of the first i steps, so the vector has 2n+1 entries.
  std::vector<int> heights() const;
  int max_height() const;
  std::string to_string() const;
  bool operator==(const StaircaseWalk&) const = default;
};

/// Labels at most n map to +1 and the rest to -1, read in permutation order.
StaircaseWalk to_staircase_walk(const Permutation& sigma);
/// The unique permutation with both halves in increasing order mapping to `walk`.
Permutation sorted_preimage(const StaircaseWalk& walk);

/// Lexicographic enumeration; the callback receives each permutation in turn.
void for_each_permutation(int n, const std::function<void(const std::vector<int>&)>& visit);
/// All walks of half-size n in lexicographic order with -1 before +1.
void for_each_walk(int n, const std::function<void(const std::vector<int>&)>& visit);
/// All 0/1 strings with `ones` ones and `zeros` zeros, lexicographic with 0 before 1.
void for_each_binary_string(int ones, int zeros,
                            const std::function<void(const std::vector<int>&)>& visit);

std::uint64_t factorial(int n);
std::uint64_t binomial(int n, int k);

}  // namespace biasperm
