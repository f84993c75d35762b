#include "gmlkm/topology.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace gmlkm {

PDualGraph build_pdual(const RoadNetwork& net) {
  const auto L = static_cast<std::size_t>(net.size());
  PDualGraph g;
  g.nodes.reserve(2 * L);
  for (const auto& s : net.segments()) {
    g.nodes.push_back({s.id, 1});
    g.nodes.push_back({s.id, s.sensor_count()});
  }
  g.adjacency.assign(2 * L, std::vector<std::uint8_t>(2 * L, 0));
  for (std::size_t i = 0; i < L; ++i) {
    for (std::size_t j = 0; j < L; ++j) {
      if (net.has_edge(static_cast<int>(i) + 1, static_cast<int>(j) + 1)) {
        g.adjacency[2 * i + 1][2 * j] = 1;
      }
    }
  }
  return g;
}

std::string intersection_name(std::size_t ordinal) {
  std::string name;
  std::size_t n = ordinal + 1;
  while (n > 0) {
    --n;
    name.insert(name.begin(), static_cast<char>('a' + n % 26));
    n /= 26;
  }
  return name;
}

namespace {

struct DisjointSets {
  std::vector<std::size_t> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

// Algorithm 1's alternating row/column sweep reaches exactly the connected
// component of the bipartite nonzero structure, so components are labelled
// directly with union-find.
std::vector<IntersectionSpec> extract_subgraphs(const PDualGraph& graph) {
  const std::size_t n = graph.nodes.size();
  DisjointSets sets(n);
  std::vector<std::pair<std::size_t, std::size_t>> nonzeros;
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      if (graph.adjacency[r][c]) {
        nonzeros.emplace_back(r, c);
        sets.unite(r, c);
      }
    }
  }

  std::map<std::size_t, std::pair<std::set<int>, std::set<int>>> components;
  for (const auto& [r, c] : nonzeros) {
    auto& comp = components[sets.find(r)];
    comp.first.insert(graph.nodes[r].segment);
    comp.second.insert(graph.nodes[c].segment);
  }

  std::vector<IntersectionSpec> out;
  for (const auto& [root, comp] : components) {
    IntersectionSpec spec;
    spec.upstream.assign(comp.first.begin(), comp.first.end());
    spec.downstream.assign(comp.second.begin(), comp.second.end());
    out.push_back(std::move(spec));
  }
  // Upstream sets of distinct components are disjoint, so the highest
  // upstream segment is a strict key.
  std::sort(out.begin(), out.end(), [](const IntersectionSpec& a, const IntersectionSpec& b) {
    return a.upstream.back() > b.upstream.back();
  });
  for (std::size_t i = 0; i < out.size(); ++i) out[i].name = intersection_name(i);
  return out;
}

std::vector<int> source_segments(const RoadNetwork& net) {
  std::vector<int> out;
  for (int i = 1; i <= net.size(); ++i) {
    if (net.predecessors(i).empty()) out.push_back(i);
  }
  return out;
}

bool has_cycle(const RoadNetwork& net) {
  enum class Colour { white, grey, black };
  const int n = net.size();
  std::vector<Colour> colour(static_cast<std::size_t>(n) + 1, Colour::white);
  // Iterative DFS: (node, index of next successor to visit).
  std::vector<std::pair<int, std::size_t>> stack;
  std::vector<std::vector<int>> succ(static_cast<std::size_t>(n) + 1);
  for (int i = 1; i <= n; ++i) succ[i] = net.successors(i);

  for (int root = 1; root <= n; ++root) {
    if (colour[root] != Colour::white) continue;
    stack.emplace_back(root, 0);
    colour[root] = Colour::grey;
    while (!stack.empty()) {
      auto& [node, next] = stack.back();
      if (next < succ[node].size()) {
        const int child = succ[node][next++];
        if (colour[child] == Colour::grey) return true;
        if (colour[child] == Colour::white) {
          colour[child] = Colour::grey;
          stack.emplace_back(child, 0);
        }
      } else {
        colour[node] = Colour::black;
        stack.pop_back();
      }
    }
  }
  return false;
}

}  // namespace gmlkm
