#pragma once

#include <algorithm>
#include <cstdint>
#include <queue>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace relaydmt {

struct TopologyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Directed acyclic relay network. Node 0 is the source, node
/// node_count-1 the destination, everything in between a relay.
struct NetworkTopology {
  int node_count = 0;
  std::vector<int> antennas;                   // per-node antenna count
  std::vector<std::pair<int, int>> edges;      // ordered (from, to)

  int source() const { return 0; }
  int destination() const { return node_count - 1; }
  int relay_count() const { return node_count - 2; }
};

/// A source-side vertex set S (0 in S, destination not in S) and the total
/// N_a * N_b weight of edges crossing from S to its complement.
struct CutSet {
  std::vector<int> members;
  long long weight = 0;
};

namespace detail {

inline std::vector<std::vector<int>> adjacency(const NetworkTopology& t) {
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(t.node_count));
  for (const auto& [a, b] : t.edges) {
    adj[static_cast<std::size_t>(a)].push_back(b);
  }
  return adj;
}

}  // namespace detail

/// Checks every structural invariant; throws TopologyError naming the first
/// violation found.
inline void validate(const NetworkTopology& t) {
  if (t.node_count < 2) {
    throw TopologyError("topology: need at least a source and a destination");
  }
  if (static_cast<int>(t.antennas.size()) != t.node_count) {
    throw TopologyError("topology: antenna list length != node_count");
  }
  for (int n : t.antennas) {
    if (n < 1) throw TopologyError("topology: antenna counts must be >= 1");
  }
  for (const auto& [a, b] : t.edges) {
    if (a < 0 || a >= t.node_count || b < 0 || b >= t.node_count) {
      throw TopologyError("topology: edge index out of range");
    }
    if (a == b) throw TopologyError("topology: self-loop detected");
  }
  // Kahn topological sort for acyclicity.
  std::vector<int> indeg(static_cast<std::size_t>(t.node_count), 0);
  auto adj = detail::adjacency(t);
  for (const auto& [a, b] : t.edges) {
    (void)a;
    ++indeg[static_cast<std::size_t>(b)];
  }
  std::queue<int> q;
  for (int v = 0; v < t.node_count; ++v) {
    if (indeg[static_cast<std::size_t>(v)] == 0) q.push(v);
  }
  int seen = 0;
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    ++seen;
    for (int w : adj[static_cast<std::size_t>(v)]) {
      if (--indeg[static_cast<std::size_t>(w)] == 0) q.push(w);
    }
  }
  if (seen != t.node_count) {
    throw TopologyError("topology: cycle detected");
  }
  // Reachability of the destination from the source.
  std::vector<char> reach(static_cast<std::size_t>(t.node_count), 0);
  std::queue<int> bfs;
  bfs.push(0);
  reach[0] = 1;
  while (!bfs.empty()) {
    int v = bfs.front();
    bfs.pop();
    for (int w : adj[static_cast<std::size_t>(v)]) {
      if (!reach[static_cast<std::size_t>(w)]) {
        reach[static_cast<std::size_t>(w)] = 1;
        bfs.push(w);
      }
    }
  }
  if (!reach[static_cast<std::size_t>(t.destination())]) {
    throw TopologyError("topology: destination unreachable from source");
  }
}

/// Weight of the cut whose source side is given by `in_s` (indexed by node).
inline long long cut_weight(const NetworkTopology& t, const std::vector<char>& in_s) {
  long long w = 0;
  for (const auto& [a, b] : t.edges) {
    if (in_s[static_cast<std::size_t>(a)] && !in_s[static_cast<std::size_t>(b)]) {
      w += static_cast<long long>(t.antennas[static_cast<std::size_t>(a)]) *
           t.antennas[static_cast<std::size_t>(b)];
    }
  }
  return w;
}

/// All 2^K cuts (K = relay count). Throws for K > 20; use min_cut_weight,
/// which switches to max-flow, beyond that.
inline std::vector<CutSet> enumerate_cuts(const NetworkTopology& t) {
  validate(t);
  const int k = t.relay_count();
  if (k > 20) {
    throw TopologyError("enumerate_cuts: too many relays, use min_cut_weight");
  }
  std::vector<CutSet> cuts;
  cuts.reserve(static_cast<std::size_t>(1) << k);
  std::vector<char> in_s(static_cast<std::size_t>(t.node_count), 0);
  for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
    std::fill(in_s.begin(), in_s.end(), 0);
    in_s[0] = 1;
    CutSet cut;
    cut.members.push_back(0);
    for (int i = 0; i < k; ++i) {
      if (mask & (1u << i)) {
        in_s[static_cast<std::size_t>(i + 1)] = 1;
        cut.members.push_back(i + 1);
      }
    }
    cut.weight = cut_weight(t, in_s);
    cuts.push_back(std::move(cut));
  }
  return cuts;
}

namespace detail {

/// Dinic max-flow on the antenna-weighted edge capacities N_a * N_b.
class Dinic {
 public:
  explicit Dinic(int n) : head_(static_cast<std::size_t>(n)) {}

  void add_edge(int a, int b, long long cap) {
    head_[static_cast<std::size_t>(a)].push_back(static_cast<int>(edges_.size()));
    edges_.push_back({b, cap});
    head_[static_cast<std::size_t>(b)].push_back(static_cast<int>(edges_.size()));
    edges_.push_back({a, 0});
  }

  long long run(int s, int d) {
    long long flow = 0;
    while (bfs(s, d)) {
      iter_.assign(head_.size(), 0);
      long long f;
      while ((f = dfs(s, d, kInf)) > 0) flow += f;
    }
    return flow;
  }

 private:
  static constexpr long long kInf = (1LL << 62);
  struct Edge {
    int to;
    long long cap;
  };

  bool bfs(int s, int d) {
    level_.assign(head_.size(), -1);
    std::queue<int> q;
    level_[static_cast<std::size_t>(s)] = 0;
    q.push(s);
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (int id : head_[static_cast<std::size_t>(v)]) {
        const Edge& e = edges_[static_cast<std::size_t>(id)];
        if (e.cap > 0 && level_[static_cast<std::size_t>(e.to)] < 0) {
          level_[static_cast<std::size_t>(e.to)] = level_[static_cast<std::size_t>(v)] + 1;
          q.push(e.to);
        }
      }
    }
    return level_[static_cast<std::size_t>(d)] >= 0;
  }

  long long dfs(int v, int d, long long limit) {
    if (v == d) return limit;
    for (std::size_t& i = iter_[static_cast<std::size_t>(v)];
         i < head_[static_cast<std::size_t>(v)].size(); ++i) {
      int id = head_[static_cast<std::size_t>(v)][i];
      Edge& e = edges_[static_cast<std::size_t>(id)];
      if (e.cap <= 0 || level_[static_cast<std::size_t>(e.to)] !=
                            level_[static_cast<std::size_t>(v)] + 1) {
        continue;
      }
      long long f = dfs(e.to, d, std::min(limit, e.cap));
      if (f > 0) {
        e.cap -= f;
        edges_[static_cast<std::size_t>(id ^ 1)].cap += f;
        return f;
      }
    }
    return 0;
  }

  std::vector<std::vector<int>> head_;
  std::vector<Edge> edges_;
  std::vector<int> level_;
  std::vector<std::size_t> iter_;
};

}  // namespace detail

/// Min cut via max-flow with edge (a,b) given capacity N_a * N_b.
inline long long max_flow_min_cut(const NetworkTopology& t) {
  validate(t);
  detail::Dinic dinic(t.node_count);
  for (const auto& [a, b] : t.edges) {
    dinic.add_edge(a, b, static_cast<long long>(t.antennas[static_cast<std::size_t>(a)]) *
                             t.antennas[static_cast<std::size_t>(b)]);
  }
  return dinic.run(t.source(), t.destination());
}

/// Exact minimum cut weight: exhaustive enumeration up to 20 relays,
/// max-flow beyond.
inline long long min_cut_weight(const NetworkTopology& t) {
  validate(t);
  if (t.relay_count() > 20) return max_flow_min_cut(t);
  long long best = -1;
  for (const CutSet& cut : enumerate_cuts(t)) {
    if (best < 0 || cut.weight < best) best = cut.weight;
  }
  return best;
}

}  // namespace relaydmt
