#include "phyloci/tree.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>

namespace phyloci {

namespace {

struct RawNode {
  std::vector<int> children;
  std::string label;
};

struct NewickParser {
  const std::string& text;
  size_t pos = 0;
  std::vector<RawNode> nodes;

  explicit NewickParser(const std::string& t) : text(t) {}

  char peek() const { return pos < text.size() ? text[pos] : '\0'; }
  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  int parse_subtree() {
    skip_ws();
    const int id = static_cast<int>(nodes.size());
    nodes.emplace_back();
    if (peek() == '(') {
      ++pos;
      while (true) {
        int child = parse_subtree();
        nodes[id].children.push_back(child);
        skip_ws();
        if (peek() == ',') {
          ++pos;
          continue;
        }
        if (peek() == ')') {
          ++pos;
          break;
        }
        throw ParseError("expected ',' or ')'", pos);
      }
      skip_ws();
      nodes[id].label = parse_label();  // optional interior label, ignored
    } else {
      nodes[id].label = parse_label();
      if (nodes[id].label.empty()) throw ParseError("expected leaf label", pos);
    }
    skip_ws();
    if (peek() == ':') {  // branch length: accepted and ignored
      ++pos;
      while (pos < text.size() &&
             (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '.' ||
              text[pos] == '-' || text[pos] == '+' || text[pos] == 'e' || text[pos] == 'E'))
        ++pos;
    }
    return id;
  }

  std::string parse_label() {
    std::string out;
    while (pos < text.size()) {
      char c = text[pos];
      if (c == '(' || c == ')' || c == ',' || c == ';' || c == ':' ||
          std::isspace(static_cast<unsigned char>(c)))
        break;
      out.push_back(c);
      ++pos;
    }
    return out;
  }
};

Tree from_edges(int n_leaves, int n_vertices, const std::vector<std::pair<int, int>>& edges,
                const std::vector<int>& leaf_label) {
  Tree t;
  t.n = n_leaves;
  t.adj.assign(n_vertices, {});
  t.leaf_label = leaf_label;
  t.leaf_vertex.assign(n_leaves + 1, -1);
  for (auto [u, v] : edges) {
    t.adj[u].push_back(v);
    t.adj[v].push_back(u);
  }
  for (int v = 0; v < n_vertices; ++v) {
    std::sort(t.adj[v].begin(), t.adj[v].end());
    if (leaf_label[v] != 0) t.leaf_vertex[leaf_label[v]] = v;
  }
  return t;
}

// Removes degree-2 vertices and compacts vertex ids.
Tree simplify(int n_leaves, std::vector<std::pair<int, int>> edges, std::vector<int> leaf_label) {
  bool changed = true;
  while (changed) {
    changed = false;
    std::map<int, std::vector<int>> adj;
    for (auto [u, v] : edges) {
      adj[u].push_back(v);
      adj[v].push_back(u);
    }
    for (auto& [v, nb] : adj) {
      if (leaf_label[v] == 0 && nb.size() == 2) {
        std::vector<std::pair<int, int>> next;
        for (auto e : edges)
          if (e.first != v && e.second != v) next.push_back(e);
        next.push_back({nb[0], nb[1]});
        edges = std::move(next);
        changed = true;
        break;
      }
    }
  }
  // compact ids
  std::map<int, int> remap;
  for (auto [u, v] : edges) {
    if (!remap.count(u)) remap[u] = static_cast<int>(remap.size());
    if (!remap.count(v)) remap[v] = static_cast<int>(remap.size());
  }
  std::vector<std::pair<int, int>> redges;
  for (auto [u, v] : edges) redges.push_back({remap[u], remap[v]});
  std::vector<int> rlabel(remap.size(), 0);
  for (size_t v = 0; v < leaf_label.size(); ++v)
    if (leaf_label[v] != 0 && remap.count(static_cast<int>(v))) rlabel[remap[v]] = leaf_label[v];
  return from_edges(n_leaves, static_cast<int>(remap.size()), redges, rlabel);
}

void leaves_beyond(const Tree& t, int from, int towards, std::vector<int>& out) {
  if (t.is_leaf(towards)) {
    out.push_back(t.leaf_label[towards]);
    return;
  }
  for (int nb : t.adj[towards])
    if (nb != from) leaves_beyond(t, towards, nb, out);
}

}  // namespace

bool Tree::is_claw() const {
  int interior = 0;
  for (int v = 0; v < num_vertices(); ++v)
    if (!is_leaf(v)) ++interior;
  return interior == 1;
}

int Tree::default_root() const {
  for (int v = 0; v < num_vertices(); ++v)
    if (!is_leaf(v)) return v;
  throw std::runtime_error("tree has no interior vertex");
}

std::vector<std::pair<int, int>> Tree::edges() const {
  std::vector<std::pair<int, int>> out;
  for (int v = 0; v < num_vertices(); ++v)
    for (int u : adj[v])
      if (v < u) out.push_back({v, u});
  return out;
}

std::vector<std::pair<int, int>> Tree::interior_edges() const {
  std::vector<std::pair<int, int>> out;
  for (auto [u, v] : edges())
    if (!is_leaf(u) && !is_leaf(v)) out.push_back({u, v});
  return out;
}

Tree parse_newick(const std::string& text) {
  NewickParser parser(text);
  parser.skip_ws();
  if (parser.peek() != '(') throw ParseError("expected '('", parser.pos);
  const int root = parser.parse_subtree();
  parser.skip_ws();
  if (parser.peek() != ';') throw ParseError("expected ';'", parser.pos);
  ++parser.pos;
  parser.skip_ws();
  if (parser.pos != text.size()) throw ParseError("trailing characters", parser.pos);

  // collect leaf labels and sort (numerically when all-numeric)
  std::vector<std::string> labels;
  for (const auto& node : parser.nodes)
    if (node.children.empty()) labels.push_back(node.label);
  std::vector<std::string> sorted = labels;
  const bool numeric = std::all_of(sorted.begin(), sorted.end(), [](const std::string& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
  });
  if (numeric)
    std::sort(sorted.begin(), sorted.end(), [](const std::string& a, const std::string& b) {
      return std::stol(a) < std::stol(b);
    });
  else
    std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw ParseError("duplicate leaf label", 0);
  std::map<std::string, int> label_of;
  for (size_t i = 0; i < sorted.size(); ++i) label_of[sorted[i]] = static_cast<int>(i + 1);

  const int n = static_cast<int>(labels.size());
  if (n < 3) throw ParseError("tree needs at least 3 leaves", 0);

  std::vector<std::pair<int, int>> edges;
  std::vector<int> leaf_label(parser.nodes.size(), 0);
  for (size_t v = 0; v < parser.nodes.size(); ++v) {
    for (int c : parser.nodes[v].children) edges.push_back({static_cast<int>(v), c});
    if (parser.nodes[v].children.empty()) leaf_label[v] = label_of[parser.nodes[v].label];
  }
  (void)root;
  return simplify(n, edges, leaf_label);
}

std::vector<std::string> newick_labels(const std::string& text) {
  NewickParser parser(text);
  parser.skip_ws();
  parser.parse_subtree();
  std::vector<std::string> labels;
  for (const auto& node : parser.nodes)
    if (node.children.empty()) labels.push_back(node.label);
  std::sort(labels.begin(), labels.end());
  return labels;
}

std::string EdgeSplit::display() const {
  std::string out;
  for (size_t i = 0; i < A.size(); ++i) out += (i ? "," : "") + std::to_string(A[i]);
  out += "|";
  for (size_t i = 0; i < B.size(); ++i) out += (i ? "," : "") + std::to_string(B[i]);
  return out;
}

std::vector<EdgeSplit> edge_splits(const Tree& tree) {
  std::vector<EdgeSplit> out;
  for (auto [u, v] : tree.interior_edges()) {
    EdgeSplit s;
    leaves_beyond(tree, v, u, s.A);
    leaves_beyond(tree, u, v, s.B);
    std::sort(s.A.begin(), s.A.end());
    std::sort(s.B.begin(), s.B.end());
    if (std::find(s.B.begin(), s.B.end(), 1) != s.B.end()) std::swap(s.A, s.B);
    s.alpha = s.A.back();
    s.beta = s.B.front();
    s.edge = {u, v};
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<int> interior_degrees(const Tree& tree) {
  std::vector<int> out;
  for (int v = 0; v < tree.num_vertices(); ++v)
    if (!tree.is_leaf(v)) out.push_back(tree.degree(v));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<PeelStep> peel_schedule(const Tree& tree) {
  std::vector<PeelStep> steps;
  Tree cur = tree;
  while (!cur.is_claw()) {
    // cherry vertices: interior with exactly one non-leaf neighbor
    int best = -1, best_label = -1;
    for (int v = 0; v < cur.num_vertices(); ++v) {
      if (cur.is_leaf(v)) continue;
      int non_leaf = 0, max_label = 0;
      for (int nb : cur.adj[v]) {
        if (cur.is_leaf(nb))
          max_label = std::max(max_label, cur.leaf_label[nb]);
        else
          ++non_leaf;
      }
      if (non_leaf == 1 && max_label > best_label) {
        best = v;
        best_label = max_label;
      }
    }
    if (best < 0) throw std::runtime_error("no cherry vertex found");

    PeelStep step;
    for (int nb : cur.adj[best])
      if (cur.is_leaf(nb)) step.split.B.push_back(cur.leaf_label[nb]);
    std::sort(step.split.B.begin(), step.split.B.end());
    for (int l = 1; l <= cur.n; ++l)
      if (!std::binary_search(step.split.B.begin(), step.split.B.end(), l))
        step.split.A.push_back(l);
    step.split.alpha = step.split.A.back();
    step.split.beta = step.split.B.front();
    step.cherry_degree = cur.degree(best);

    // label map: A ascending -> 1..a, B ascending -> a+1..n
    const int a = static_cast<int>(step.split.A.size());
    step.new_label.assign(cur.n + 1, 0);
    for (int i = 0; i < a; ++i) step.new_label[step.split.A[i]] = i + 1;
    for (size_t i = 0; i < step.split.B.size(); ++i)
      step.new_label[step.split.B[i]] = a + 1 + static_cast<int>(i);

    // reduced tree: drop B's leaves, cherry vertex becomes leaf a+1
    std::vector<std::pair<int, int>> edges;
    std::vector<int> label(cur.num_vertices(), 0);
    std::vector<bool> keep(cur.num_vertices(), true);
    for (int v = 0; v < cur.num_vertices(); ++v) {
      if (cur.is_leaf(v)) {
        const int old = cur.leaf_label[v];
        if (std::binary_search(step.split.B.begin(), step.split.B.end(), old))
          keep[v] = false;
        else
          label[v] = step.new_label[old];
      }
    }
    label[best] = a + 1;
    for (auto [u, v] : cur.edges())
      if (keep[u] && keep[v]) edges.push_back({u, v});
    // compact
    std::map<int, int> remap;
    for (int v = 0; v < cur.num_vertices(); ++v)
      if (keep[v]) remap[v] = static_cast<int>(remap.size());
    std::vector<std::pair<int, int>> redges;
    for (auto [u, v] : edges) redges.push_back({remap[u], remap[v]});
    std::vector<int> rlabel(remap.size(), 0);
    for (auto [v, nv] : remap) rlabel[nv] = label[v];
    step.reduced = from_edges(a + 1, static_cast<int>(remap.size()), redges, rlabel);

    steps.push_back(step);
    cur = steps.back().reduced;
  }
  return steps;
}

}  // namespace phyloci
