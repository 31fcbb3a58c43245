#include "biasperm/league_tree.hpp"

#include <algorithm>
#include <functional>

#include "biasperm/errors.hpp"
#include "biasperm/rng.hpp"
#include "json.hpp"

namespace biasperm {

LeagueTree::LeagueTree(const Spec& spec) {
  root_ = build(spec, -1);
  n_ = nodes_[root_].hi;
  if (nodes_[root_].lo != 1) throw InvalidArgument("league tree leaves must start at 1");
  leaf_of_.assign(n_ + 1, -1);
  for (int id = 0; id < node_count(); ++id)
    if (nodes_[id].is_leaf()) leaf_of_[nodes_[id].label] = id;
}

int LeagueTree::build(const Spec& spec, int parent) {
  const int id = node_count();
  nodes_.push_back(Node{});
  nodes_[id].parent = parent;
  if (spec.children.empty()) {
    if (spec.label < 1) throw InvalidArgument("league tree leaf label must be positive");
    nodes_[id].label = nodes_[id].lo = nodes_[id].hi = spec.label;
    return id;
  }
  if (spec.children.size() != 2) throw InvalidArgument("league tree nodes need exactly two children");
  if (!(spec.q >= 0.5 && spec.q <= 1.0)) throw InvalidArgument("league tree q outside [1/2, 1]");
  const int l = build(spec.children[0], id);
  const int r = build(spec.children[1], id);
  if (nodes_[r].lo != nodes_[l].hi + 1) throw InvalidArgument("league tree leaves must read 1..n in order");
  Node& v = nodes_[id];
  v.left = l;
  v.right = r;
  v.q = spec.q;
  v.lo = nodes_[l].lo;
  v.hi = nodes_[r].hi;
  return id;
}

std::vector<int> LeagueTree::internal_nodes() const {
  std::vector<int> out;
  std::function<void(int)> walk = [&](int v) {
    if (nodes_[v].is_leaf()) return;
    out.push_back(v);
    walk(nodes_[v].left);
    walk(nodes_[v].right);
  };
  walk(root_);
  return out;
}

int LeagueTree::lca(int i, int j) const {
  if (i < 1 || j < 1 || i > n_ || j > n_) throw InvalidArgument("label out of range");
  if (i == j) throw InvalidArgument("lca needs two distinct labels");
  int v = leaf_of_[i];
  while (!covers(v, j)) v = nodes_[v].parent;
  return v;
}

LeagueTree::Spec LeagueTree::to_spec() const {
  std::function<Spec(int)> rec = [&](int v) -> Spec {
    const Node& nd = nodes_[v];
    if (nd.is_leaf()) return leaf(nd.label);
    return join(nd.q, rec(nd.left), rec(nd.right));
  };
  return rec(root_);
}

namespace {

nlohmann::json spec_to_json(const LeagueTree::Spec& s) {
  if (s.children.empty()) return s.label;
  return nlohmann::json{{"q", s.q}, {"left", spec_to_json(s.children[0])}, {"right", spec_to_json(s.children[1])}};
}

LeagueTree::Spec spec_from_json(const nlohmann::json& j) {
  if (j.is_number_integer()) return LeagueTree::leaf(j.get<int>());
  if (!j.is_object() || !j.contains("q") || !j.contains("left") || !j.contains("right")) {
    throw InvalidArgument("league tree JSON node must be an integer or {q, left, right}");
  }
  return LeagueTree::join(j["q"].get<double>(), spec_from_json(j["left"]), spec_from_json(j["right"]));
}

LeagueTree::Spec complete_spec(int lo, int hi, double q) {
  if (lo == hi) return LeagueTree::leaf(lo);
  const int mid = (lo + hi) / 2;
  return LeagueTree::join(q, complete_spec(lo, mid, q), complete_spec(mid + 1, hi, q));
}

}  // namespace

std::string LeagueTree::to_json() const { return spec_to_json(to_spec()).dump(); }

LeagueTree LeagueTree::from_json(const std::string& text) {
  try {
    return LeagueTree(spec_from_json(nlohmann::json::parse(text)));
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("league tree JSON: ") + e.what());
  }
}

LeagueTree LeagueTree::complete(int n, double q) {
  if (n < 1) throw InvalidArgument("tree needs at least one leaf");
  return LeagueTree(complete_spec(1, n, q));
}

LeagueTree LeagueTree::left_comb(const std::vector<double>& q) {
  Spec s = leaf(1);
  for (std::size_t k = 0; k < q.size(); ++k) s = join(q[k], std::move(s), leaf(static_cast<int>(k) + 2));
  return LeagueTree(s);
}

LeagueTree LeagueTree::right_comb(const std::vector<double>& q) {
  const int n = static_cast<int>(q.size()) + 1;
  Spec s = leaf(n);
  for (int k = n - 1; k >= 1; --k) s = join(q[k - 1], leaf(k), std::move(s));
  return LeagueTree(s);
}

LeagueTree LeagueTree::random(int n, std::uint64_t seed, double q_min, double q_max) {
  if (n < 1) throw InvalidArgument("tree needs at least one leaf");
  CounterRng rng(seed);
  std::function<Spec(int, int, double)> rec = [&](int lo, int hi, double cap) -> Spec {
    if (lo == hi) return leaf(lo);
    const int split = lo + static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(hi - lo)));
    const double q = q_min + (cap - q_min) * rng.uniform01();
    return join(q, rec(lo, split, q), rec(split + 1, hi, q));
  };
  return LeagueTree(rec(1, n, q_max));
}

LeagueTree LeagueTree::example9() {
  return LeagueTree(join(0.9,
                         join(0.8, join(0.6, leaf(1), join(0.5, leaf(2), leaf(3))), leaf(4)),
                         join(0.7, join(0.7, leaf(5), leaf(6)), join(0.6, join(0.5, leaf(7), leaf(8)), leaf(9)))));
}

LeagueTree LeagueTree::truncated(int m) const {
  if (m < 1 || m > n_) throw InvalidArgument("truncation size out of range");
  std::function<std::vector<Spec>(int)> rec = [&](int v) -> std::vector<Spec> {
    const Node& nd = nodes_[v];
    if (nd.is_leaf()) return nd.label <= m ? std::vector<Spec>{leaf(nd.label)} : std::vector<Spec>{};
    auto l = rec(nd.left);
    auto r = rec(nd.right);
    if (l.empty()) return r;
    if (r.empty()) return l;
    return {join(nd.q, std::move(l[0]), std::move(r[0]))};
  };
  return LeagueTree(rec(root_).at(0));
}

LeagueTree LeagueTree::mirrored() const {
  std::function<Spec(int)> rec = [&](int v) -> Spec {
    const Node& nd = nodes_[v];
    if (nd.is_leaf()) return leaf(n_ + 1 - nd.label);
    return join(nd.q, rec(nd.right), rec(nd.left));
  };
  return LeagueTree(rec(root_));
}

TreeEncoding tree_encode(const Permutation& sigma, const LeagueTree& T) {
  if (sigma.size() != T.size()) throw InvalidArgument("permutation and tree sizes differ");
  TreeEncoding E;
  E.strings.assign(T.node_count(), std::string());
  for (int v : T.internal_nodes()) {
    const auto& nd = T.node(v);
    const int split = T.node(nd.left).hi;
    std::string& b = E.strings[v];
    for (int x : sigma.entries())
      if (T.covers(v, x)) b += x <= split ? '1' : '0';
  }
  return E;
}

Permutation tree_decode(const TreeEncoding& E, const LeagueTree& T) {
  if (static_cast<int>(E.strings.size()) != T.node_count()) throw InvalidArgument("encoding does not match tree");
  std::function<std::vector<int>(int)> rec = [&](int v) -> std::vector<int> {
    const auto& nd = T.node(v);
    if (nd.is_leaf()) return {nd.label};
    const auto ones = rec(nd.left);
    const auto zeros = rec(nd.right);
    const std::string& b = E.strings[v];
    const auto n1 = static_cast<std::size_t>(std::count(b.begin(), b.end(), '1'));
    const auto n0 = static_cast<std::size_t>(std::count(b.begin(), b.end(), '0'));
    if (n1 != ones.size() || n0 != zeros.size() || n1 + n0 != b.size()) {
      throw InvalidArgument("node string violates the ones/zeros count");
    }
    std::vector<int> out;
    std::size_t a = 0, c = 0;
    for (char bit : b) out.push_back(bit == '1' ? ones[a++] : zeros[c++]);
    return out;
  };
  return Permutation(rec(T.root()));
}

}  // namespace biasperm
