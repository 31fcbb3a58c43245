#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "biasperm/permutation.hpp"

namespace biasperm {

/// Rooted proper binary tree whose leaves read 1..n from left to right.
/// Every node covers a contiguous label range [lo, hi].
class LeagueTree {
 public:
  struct Node {
    int left = -1;
    int right = -1;
    int parent = -1;
    int label = 0;  // leaf label, 0 for internal nodes
    double q = 0.5;
    int lo = 0;
    int hi = 0;
    bool is_leaf() const { return left < 0; }
  };

  /// Builder handles: either a leaf or two subtrees joined under a q value.
  struct Spec {
    int label = 0;
    double q = 0.5;
    std::vector<Spec> children;
  };
  static Spec leaf(int label) { return Spec{label, 0.5, {}}; }
  static Spec join(double q, Spec left, Spec right) { return Spec{0, q, {std::move(left), std::move(right)}}; }

  LeagueTree() = default;
  explicit LeagueTree(const Spec& spec);

  int size() const { return n_; }
  int root() const { return root_; }
  const Node& node(int id) const { return nodes_[id]; }
  int node_count() const { return static_cast<int>(nodes_.size()); }
  int leaf_node(int label) const { return leaf_of_[label]; }
  /// Internal node ids in preorder.
  std::vector<int> internal_nodes() const;

  int lca(int i, int j) const;
  /// True when label x lies under node v.
  bool covers(int v, int x) const { return nodes_[v].lo <= x && x <= nodes_[v].hi; }
  double q_of(int i, int j) const { return nodes_[lca(i, j)].q; }

  Spec to_spec() const;
  std::string to_json() const;
  static LeagueTree from_json(const std::string& text);

  /// Balanced split, the same q everywhere.
  static LeagueTree complete(int n, double q);
  /// ((..((1,2),3)..),n); q[k-2] sits on the node whose right child is leaf k.
  static LeagueTree left_comb(const std::vector<double>& q);
  /// (1,(2,(..(n-1,n)..))); q[k-1] sits on the node whose left child is leaf k.
  static LeagueTree right_comb(const std::vector<double>& q);
  /// Random shape from a seed; q is non-increasing from root to leaves within [q_min, q_max].
  static LeagueTree random(int n, std::uint64_t seed, double q_min = 0.55, double q_max = 0.95);
  /// The nine-leaf example tree used throughout the documentation.
  static LeagueTree example9();
  /// Keeps leaves 1..m and splices out nodes left with a single child.
  LeagueTree truncated(int m) const;
  /// Reverses leaf order and relabels k -> n+1-k.
  LeagueTree mirrored() const;

 private:
  int build(const Spec& spec, int parent);

  int n_ = 0;
  int root_ = -1;
  std::vector<Node> nodes_;
  std::vector<int> leaf_of_;
};

/// b_v for each internal node, indexed by node id (empty for leaves).
/// '1' marks a label from the left subtree and '0' one from the right.
struct TreeEncoding {
  std::vector<std::string> strings;
  bool operator==(const TreeEncoding&) const = default;
};

TreeEncoding tree_encode(const Permutation& sigma, const LeagueTree& T);
Permutation tree_decode(const TreeEncoding& E, const LeagueTree& T);

}  // namespace biasperm
