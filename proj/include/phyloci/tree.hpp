#pragma once

#include <set>
#include <string>
#include <vector>

#include "phyloci/common.hpp"

namespace phyloci {

/// Leaf-labeled unrooted tree. Leaves are labeled 1..n; interior vertices
/// have degree >= 3 (degree-2 vertices are suppressed on input).
struct Tree {
  int n = 0;                              // number of leaves
  std::vector<std::vector<int>> adj;      // adjacency lists over vertex ids
  std::vector<int> leaf_label;            // per vertex: label 1..n, or 0 if interior
  std::vector<int> leaf_vertex;           // label -> vertex id (index 0 unused)

  int num_vertices() const { return static_cast<int>(adj.size()); }
  bool is_leaf(int v) const { return leaf_label[v] != 0; }
  int degree(int v) const { return static_cast<int>(adj[v].size()); }
  bool is_claw() const;
  /// Deterministic root: the lowest-indexed interior vertex.
  int default_root() const;
  std::vector<std::pair<int, int>> edges() const;           // u < v
  std::vector<std::pair<int, int>> interior_edges() const;  // both ends interior
};

struct ParseError : std::runtime_error {
  size_t position;
  ParseError(const std::string& what, size_t pos)
      : std::runtime_error(what + " at position " + std::to_string(pos)), position(pos) {}
};

/// Parses a Newick string. Labels may be arbitrary strings; they are sorted
/// (numerically when all-numeric) and mapped to 1..n.
Tree parse_newick(const std::string& text);

/// The original labels in slot order 1..n (after canonicalization).
std::vector<std::string> newick_labels(const std::string& text);

struct EdgeSplit {
  std::vector<int> A, B;  // sorted ascending, disjoint, A u B = {1..n}
  int alpha = 0;          // last leaf of A
  int beta = 0;           // first leaf of B
  std::pair<int, int> edge{-1, -1};
  std::string display() const;  // "1,2|3,4"
};

/// Splits induced by the interior edges, with the side not containing leaf 1
/// reported as B.
std::vector<EdgeSplit> edge_splits(const Tree& tree);

/// One cherry-peeling step: B is the leaf set of a single interior vertex
/// whose neighbors are all leaves except exactly one.
struct PeelStep {
  EdgeSplit split;
  Tree reduced;                 // T_A with B replaced by the new leaf L_A
  std::vector<int> new_label;   // old label -> label in the peeled ordering
  int cherry_degree = 0;        // degree of the removed interior vertex + ...
};

/// Ordered cherry-peeling schedule ending at a claw tree. Deterministic:
/// among cherry vertices, the one containing the largest leaf label is
/// peeled first. Empty for claw trees.
std::vector<PeelStep> peel_schedule(const Tree& tree);

/// Multiset of interior-vertex degrees, sorted ascending.
std::vector<int> interior_degrees(const Tree& tree);

}  // namespace phyloci
