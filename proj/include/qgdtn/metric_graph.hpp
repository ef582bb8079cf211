#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace qgdtn {

using Index = std::size_t;

// Graph description as read from a file, before any checking.
struct RawEdge {
  std::string u;
  std::string v;
  double length = 0.0;
};

struct RawGraph {
  std::vector<std::string> vertices;
  std::vector<RawEdge> edges;
  std::vector<std::string> outer;
};

struct Edge {
  Index u = 0;
  Index v = 0;
  double length = 0.0;

  Index other(Index w) const { return w == u ? v : u; }
};

// Purely combinatorial simple graph over dense indices 0..n-1.
struct SimpleGraph {
  std::size_t n = 0;
  std::vector<std::pair<Index, Index>> edges;  // u < v

  std::vector<std::vector<Index>> adjacency() const;
};

/// Quantum graph with a validated outer/inner partition.
///
/// Vertices are stored in canonical order: outer vertices first, then inner
/// ones; inside each class the vertices of one connected component of the
/// induced subgraph are contiguous. Components are ordered by the position of
/// their first vertex in the input, and so are vertices inside a component.
/// With this numbering the blocks of any vertex-indexed matrix split
/// positionally into the outer block [0, m) and inner block [m, n).
class MetricGraph {
 public:
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<Edge>& edges() const { return edges_; }

  std::size_t vertex_count() const { return names_.size(); }
  std::size_t outer_count() const { return outer_count_; }
  std::size_t inner_count() const { return names_.size() - outer_count_; }
  bool is_outer(Index i) const { return i < outer_count_; }

  // Components of G[outer] and G[inner] as ranges of canonical indices.
  const std::vector<std::vector<Index>>& outer_components() const { return outer_components_; }
  const std::vector<std::vector<Index>>& inner_components() const { return inner_components_; }

  // Index of the inner component containing inner vertex i.
  std::size_t inner_component_of(Index i) const { return inner_component_of_.at(i - outer_count_); }

  std::vector<double> lengths() const;
  SimpleGraph topology() const;
  Index index_of(const std::string& name) const;

  // Copy with a different outer set (names); re-validates.
  MetricGraph with_outer(const std::vector<std::string>& outer) const;
  RawGraph to_raw() const;

 private:
  friend MetricGraph validate(const RawGraph& raw);

  std::vector<std::string> names_;
  std::vector<Edge> edges_;
  std::size_t outer_count_ = 0;
  std::vector<std::vector<Index>> outer_components_;
  std::vector<std::vector<Index>> inner_components_;
  std::vector<std::size_t> inner_component_of_;
};

/// Checks the simple/connected/positive-length/non-empty-outer invariants and
/// returns the graph in canonical vertex order. Throws Error naming the
/// offending vertex or edge.
MetricGraph validate(const RawGraph& raw);

enum class ReducedEdgeKind { Direct, ThroughInner, Both };

struct ReducedEdge {
  Index r = 0;  // outer indices, r < s
  Index s = 0;
  ReducedEdgeKind kind = ReducedEdgeKind::Direct;
};

struct ReducedGraph {
  std::vector<std::string> names;  // outer vertices, canonical order
  std::vector<ReducedEdge> edges;  // sorted by (r, s)

  std::size_t vertex_count() const { return names.size(); }
  bool has_edge(Index r, Index s) const;
  const ReducedEdge* find_edge(Index r, Index s) const;
  SimpleGraph topology() const;
};

/// Outer vertices u, w are joined when G has the edge uw, or when both have a
/// neighbour in the same connected component of G[inner].
ReducedGraph reduced_graph(const MetricGraph& g);

bool is_connected(const SimpleGraph& g);
bool is_tree(const SimpleGraph& g);
bool has_cycle(const SimpleGraph& g);
inline bool is_tree(const ReducedGraph& r) { return is_tree(r.topology()); }
inline bool has_cycle(const ReducedGraph& r) { return has_cycle(r.topology()); }

// Edges lying on at least one cycle (i.e. non-bridges), as indices into g.edges.
std::vector<std::size_t> cycle_edges(const SimpleGraph& g);

/// L_G = A_G - D_G: off-diagonal 1 on edges, diagonal minus the degree.
Eigen::MatrixXi graph_laplacian(const SimpleGraph& g);

class AdjacencyPattern {
 public:
  AdjacencyPattern() = default;
  explicit AdjacencyPattern(std::size_t n) : n_(n), allowed_(n * n, false) {}

  std::size_t size() const { return n_; }
  bool allows(Index k, Index j) const { return allowed_[k * n_ + j]; }
  void allow(Index k, Index j) {
    allowed_[k * n_ + j] = true;
    allowed_[j * n_ + k] = true;
  }
  std::vector<std::pair<Index, Index>> allowed_pairs() const;

 private:
  std::size_t n_ = 0;
  std::vector<bool> allowed_;
};

AdjacencyPattern adjacency_pattern(const ReducedGraph& r);
AdjacencyPattern adjacency_pattern(const SimpleGraph& g);

}  // namespace qgdtn
