#include "qgdtn/metric_graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <unordered_map>

#include "qgdtn/error.hpp"

namespace qgdtn {

namespace {

// Connected components of the subgraph induced by `members` (input indices),
// each listed in input order, components ordered by their first member.
std::vector<std::vector<Index>> induced_components(const std::vector<Index>& members,
                                                   const std::vector<std::vector<Index>>& adj,
                                                   const std::vector<bool>& in_set) {
  std::vector<std::vector<Index>> comps;
  std::vector<bool> seen(adj.size(), false);
  for (Index start : members) {
    if (seen[start]) continue;
    std::vector<Index> comp;
    std::queue<Index> q;
    q.push(start);
    seen[start] = true;
    while (!q.empty()) {
      Index x = q.front();
      q.pop();
      comp.push_back(x);
      for (Index y : adj[x]) {
        if (in_set[y] && !seen[y]) {
          seen[y] = true;
          q.push(y);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  }
  return comps;
}

}  // namespace

std::vector<std::vector<Index>> SimpleGraph::adjacency() const {
  std::vector<std::vector<Index>> adj(n);
  for (auto [a, b] : edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  return adj;
}

std::vector<double> MetricGraph::lengths() const {
  std::vector<double> out;
  out.reserve(edges_.size());
  for (const auto& e : edges_) out.push_back(e.length);
  return out;
}

SimpleGraph MetricGraph::topology() const {
  SimpleGraph g;
  g.n = names_.size();
  for (const auto& e : edges_) g.edges.emplace_back(std::min(e.u, e.v), std::max(e.u, e.v));
  return g;
}

Index MetricGraph::index_of(const std::string& name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) throw Error(ErrorCode::UnknownVertex, "vertex '" + name + "'");
  return static_cast<Index>(it - names_.begin());
}

RawGraph MetricGraph::to_raw() const {
  RawGraph raw;
  raw.vertices = names_;
  for (const auto& e : edges_) raw.edges.push_back({names_[e.u], names_[e.v], e.length});
  raw.outer.assign(names_.begin(), names_.begin() + static_cast<std::ptrdiff_t>(outer_count_));
  return raw;
}

MetricGraph MetricGraph::with_outer(const std::vector<std::string>& outer) const {
  RawGraph raw = to_raw();
  raw.outer = outer;
  return validate(raw);
}

MetricGraph validate(const RawGraph& raw) {
  const std::size_t n = raw.vertices.size();
  std::unordered_map<std::string, Index> id;
  for (Index i = 0; i < n; ++i) {
    if (!id.emplace(raw.vertices[i], i).second)
      throw Error(ErrorCode::ParseError, "duplicate vertex '" + raw.vertices[i] + "'");
  }
  auto lookup = [&](const std::string& name) {
    auto it = id.find(name);
    if (it == id.end()) throw Error(ErrorCode::UnknownVertex, "vertex '" + name + "'");
    return it->second;
  };

  std::vector<std::vector<Index>> adj(n);
  std::set<std::pair<Index, Index>> seen_pairs;
  for (const auto& e : raw.edges) {
    Index a = lookup(e.u), b = lookup(e.v);
    const std::string label = "edge (" + e.u + ", " + e.v + ")";
    if (a == b) throw Error(ErrorCode::NotSimple, label + " is a loop");
    if (!seen_pairs.emplace(std::min(a, b), std::max(a, b)).second)
      throw Error(ErrorCode::NotSimple, label + " is a parallel edge");
    if (!(e.length > 0.0) || !std::isfinite(e.length))
      throw Error(ErrorCode::NonPositiveLength, label + " has length " + std::to_string(e.length));
    adj[a].push_back(b);
    adj[b].push_back(a);
  }

  if (raw.outer.empty()) throw Error(ErrorCode::EmptyOuterSet, "no outer vertex given");
  std::vector<bool> outer(n, false);
  for (const auto& name : raw.outer) {
    Index i = lookup(name);
    if (outer[i]) throw Error(ErrorCode::ParseError, "outer vertex '" + name + "' listed twice");
    outer[i] = true;
  }

  if (n > 0) {
    std::vector<bool> reach(n, false);
    std::queue<Index> q;
    q.push(0);
    reach[0] = true;
    while (!q.empty()) {
      Index x = q.front();
      q.pop();
      for (Index y : adj[x])
        if (!reach[y]) reach[y] = true, q.push(y);
    }
    for (Index i = 0; i < n; ++i)
      if (!reach[i])
        throw Error(ErrorCode::Disconnected,
                    "vertex '" + raw.vertices[i] + "' is not reachable from '" + raw.vertices[0] + "'");
  }

  std::vector<Index> outer_list, inner_list;
  for (Index i = 0; i < n; ++i) (outer[i] ? outer_list : inner_list).push_back(i);
  std::vector<bool> inner(n);
  for (Index i = 0; i < n; ++i) inner[i] = !outer[i];

  auto outer_comps = induced_components(outer_list, adj, outer);
  auto inner_comps = induced_components(inner_list, adj, inner);

  MetricGraph g;
  std::vector<Index> canon(n);
  for (const auto& comp : outer_comps) {
    std::vector<Index> ids;
    for (Index v : comp) {
      canon[v] = g.names_.size();
      ids.push_back(g.names_.size());
      g.names_.push_back(raw.vertices[v]);
    }
    g.outer_components_.push_back(std::move(ids));
  }
  g.outer_count_ = g.names_.size();
  for (const auto& comp : inner_comps) {
    std::vector<Index> ids;
    for (Index v : comp) {
      canon[v] = g.names_.size();
      ids.push_back(g.names_.size());
      g.names_.push_back(raw.vertices[v]);
      g.inner_component_of_.push_back(g.inner_components_.size());
    }
    g.inner_components_.push_back(std::move(ids));
  }
  for (const auto& e : raw.edges) {
    Index a = canon[id.at(e.u)], b = canon[id.at(e.v)];
    g.edges_.push_back({std::min(a, b), std::max(a, b), e.length});
  }
  return g;
}

bool ReducedGraph::has_edge(Index r, Index s) const { return find_edge(r, s) != nullptr; }

const ReducedEdge* ReducedGraph::find_edge(Index r, Index s) const {
  if (r > s) std::swap(r, s);
  auto it = std::lower_bound(edges.begin(), edges.end(), std::make_pair(r, s),
                             [](const ReducedEdge& e, const std::pair<Index, Index>& key) {
                               return std::make_pair(e.r, e.s) < key;
                             });
  if (it != edges.end() && it->r == r && it->s == s) return &*it;
  return nullptr;
}

SimpleGraph ReducedGraph::topology() const {
  SimpleGraph g;
  g.n = names.size();
  for (const auto& e : edges) g.edges.emplace_back(e.r, e.s);
  return g;
}

ReducedGraph reduced_graph(const MetricGraph& g) {
  const std::size_t m = g.outer_count();
  std::map<std::pair<Index, Index>, ReducedEdgeKind> kinds;
  auto mark = [&](Index a, Index b, ReducedEdgeKind k) {
    auto key = std::make_pair(std::min(a, b), std::max(a, b));
    auto [it, inserted] = kinds.emplace(key, k);
    if (!inserted && it->second != k) it->second = ReducedEdgeKind::Both;
  };

  std::vector<std::set<Index>> touching(g.inner_components().size());
  for (const auto& e : g.edges()) {
    bool ou = g.is_outer(e.u), ov = g.is_outer(e.v);
    if (ou && ov) {
      mark(e.u, e.v, ReducedEdgeKind::Direct);
    } else if (ou != ov) {
      Index o = ou ? e.u : e.v, in = ou ? e.v : e.u;
      touching[g.inner_component_of(in)].insert(o);
    }
  }
  for (const auto& set : touching) {
    std::vector<Index> list(set.begin(), set.end());
    for (std::size_t i = 0; i < list.size(); ++i)
      for (std::size_t j = i + 1; j < list.size(); ++j) mark(list[i], list[j], ReducedEdgeKind::ThroughInner);
  }

  ReducedGraph r;
  r.names.assign(g.names().begin(), g.names().begin() + static_cast<std::ptrdiff_t>(m));
  for (const auto& [key, kind] : kinds) r.edges.push_back({key.first, key.second, kind});
  return r;
}

bool is_connected(const SimpleGraph& g) {
  if (g.n == 0) return true;
  auto adj = g.adjacency();
  std::vector<bool> seen(g.n, false);
  std::vector<Index> stack{0};
  seen[0] = true;
  std::size_t count = 1;
  while (!stack.empty()) {
    Index x = stack.back();
    stack.pop_back();
    for (Index y : adj[x])
      if (!seen[y]) seen[y] = true, ++count, stack.push_back(y);
  }
  return count == g.n;
}

bool is_tree(const SimpleGraph& g) { return is_connected(g) && g.edges.size() + 1 == std::max<std::size_t>(g.n, 1); }

bool has_cycle(const SimpleGraph& g) {
  // Union-find: an edge closing two already-joined vertices closes a cycle.
  std::vector<Index> parent(g.n);
  std::iota(parent.begin(), parent.end(), Index{0});
  auto find = [&](Index x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (auto [a, b] : g.edges) {
    Index ra = find(a), rb = find(b);
    if (ra == rb) return true;
    parent[ra] = rb;
  }
  return false;
}

std::vector<std::size_t> cycle_edges(const SimpleGraph& g) {
  // Bridge detection via DFS low-links; non-bridges lie on a cycle.
  std::vector<std::vector<std::pair<Index, std::size_t>>> adj(g.n);
  for (std::size_t k = 0; k < g.edges.size(); ++k) {
    adj[g.edges[k].first].emplace_back(g.edges[k].second, k);
    adj[g.edges[k].second].emplace_back(g.edges[k].first, k);
  }
  const std::size_t none = static_cast<std::size_t>(-1);
  std::vector<std::size_t> tin(g.n, none), low(g.n, 0);
  std::vector<bool> bridge(g.edges.size(), false);
  std::size_t timer = 0;
  struct Frame {
    Index v;
    std::size_t via;
    std::size_t next;
  };
  for (Index root = 0; root < g.n; ++root) {
    if (tin[root] != none) continue;
    std::vector<Frame> stack{{root, none, 0}};
    tin[root] = low[root] = timer++;
    while (!stack.empty()) {
      Frame& f = stack.back();
      if (f.next < adj[f.v].size()) {
        auto [w, k] = adj[f.v][f.next++];
        if (k == f.via) continue;
        if (tin[w] != none) {
          low[f.v] = std::min(low[f.v], tin[w]);
        } else {
          tin[w] = low[w] = timer++;
          stack.push_back({w, k, 0});
        }
      } else {
        Frame done = f;
        stack.pop_back();
        if (!stack.empty()) {
          Index p = stack.back().v;
          low[p] = std::min(low[p], low[done.v]);
          if (low[done.v] > tin[p]) bridge[done.via] = true;
        }
      }
    }
  }
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < g.edges.size(); ++k)
    if (!bridge[k]) out.push_back(k);
  return out;
}

Eigen::MatrixXi graph_laplacian(const SimpleGraph& g) {
  Eigen::MatrixXi L = Eigen::MatrixXi::Zero(static_cast<Eigen::Index>(g.n), static_cast<Eigen::Index>(g.n));
  for (auto [a, b] : g.edges) {
    auto i = static_cast<Eigen::Index>(a), j = static_cast<Eigen::Index>(b);
    L(i, j) = 1;
    L(j, i) = 1;
    L(i, i) -= 1;
    L(j, j) -= 1;
  }
  return L;
}

std::vector<std::pair<Index, Index>> AdjacencyPattern::allowed_pairs() const {
  std::vector<std::pair<Index, Index>> out;
  for (Index k = 0; k < n_; ++k)
    for (Index j = 0; j < n_; ++j)
      if (allows(k, j)) out.emplace_back(k, j);
  return out;
}

AdjacencyPattern adjacency_pattern(const SimpleGraph& g) {
  AdjacencyPattern p(g.n);
  for (auto [a, b] : g.edges) p.allow(a, b);
  return p;
}

AdjacencyPattern adjacency_pattern(const ReducedGraph& r) { return adjacency_pattern(r.topology()); }

}  // namespace qgdtn
