#include "dadmm/digraph.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <vector>

#include "dadmm/errors.hpp"
#include "dadmm/rng.hpp"

namespace dadmm {

namespace {

void check_node(const DiGraph& g, int v, const char* what) {
  if (v < 0 || v >= g.n)
    throw InvalidArgument(std::string(what) + ": node " + std::to_string(v) +
                          " out of range [0, " + std::to_string(g.n) + ")");
}

}  // namespace

bool DiGraph::has_edge(int i, int j) const {
  return std::binary_search(edges.begin(), edges.end(), std::make_pair(i, j));
}

std::vector<int> DiGraph::in_neighbors(int i) const {
  check_node(*this, i, "in_neighbors");
  auto lo = std::lower_bound(edges.begin(), edges.end(), std::make_pair(i, 0));
  auto hi = std::lower_bound(edges.begin(), edges.end(), std::make_pair(i + 1, 0));
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(hi - lo));
  for (auto it = lo; it != hi; ++it) out.push_back(it->second);
  return out;
}

int DiGraph::in_degree(int i) const {
  check_node(*this, i, "in_degree");
  auto lo = std::lower_bound(edges.begin(), edges.end(), std::make_pair(i, 0));
  auto hi = std::lower_bound(edges.begin(), edges.end(), std::make_pair(i + 1, 0));
  return static_cast<int>(hi - lo);
}

int DiGraph::out_degree(int j) const {
  check_node(*this, j, "out_degree");
  int d = 0;
  for (const auto& e : edges)
    if (e.second == j) ++d;
  return d;
}

DiGraph make_digraph(int n, std::vector<std::pair<int, int>> edges) {
  if (n < 1) throw InvalidArgument("make_digraph: n must be >= 1");
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  for (const auto& [i, j] : edges) {
    if (i < 0 || i >= n || j < 0 || j >= n)
      throw InvalidArgument("make_digraph: edge (" + std::to_string(i) + ", " +
                            std::to_string(j) + ") out of range for n = " +
                            std::to_string(n));
    if (i == j)
      throw InvalidArgument("make_digraph: self-pair (" + std::to_string(i) +
                            ", " + std::to_string(i) + ") is not storable");
  }
  DiGraph g;
  g.n = n;
  g.edges = std::move(edges);
  return g;
}

DiGraph generate_random_digraph(int n, double p, std::uint64_t seed) {
  if (n < 1) throw InvalidArgument("generate_random_digraph: n must be >= 1");
  if (!(p >= 0.0 && p <= 1.0))
    throw InvalidArgument("generate_random_digraph: p must lie in [0, 1]");
  Rng rng(seed);
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      if (rng.uniform01() < p) edges.emplace_back(i, j);
    }
  DiGraph g;
  g.n = n;
  g.edges = std::move(edges);  // generated in sorted order already
  return g;
}

std::pair<DiGraph, std::uint64_t> generate_strongly_connected_digraph(
    int n, double p, std::uint64_t seed, int max_attempts) {
  for (int t = 0; t < max_attempts; ++t) {
    DiGraph g = generate_random_digraph(n, p, seed + static_cast<std::uint64_t>(t));
    if (is_strongly_connected(g)) return {std::move(g), seed + static_cast<std::uint64_t>(t)};
  }
  throw NoConvergence("generate_strongly_connected_digraph: no strongly connected draw in " +
                      std::to_string(max_attempts) + " attempts (n = " + std::to_string(n) +
                      ", p = " + std::to_string(p) + ")");
}

bool is_strongly_connected(const DiGraph& g) {
  if (g.n <= 1) return true;
  std::vector<std::vector<int>> fwd(g.n), bwd(g.n);
  for (const auto& [i, j] : g.edges) {
    fwd[j].push_back(i);  // j sends to i
    bwd[i].push_back(j);
  }
  auto reaches_all = [&](const std::vector<std::vector<int>>& adj) {
    std::vector<char> seen(g.n, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int w : adj[v])
        if (!seen[w]) {
          seen[w] = 1;
          ++count;
          stack.push_back(w);
        }
    }
    return count == g.n;
  };
  return reaches_all(fwd) && reaches_all(bwd);
}

std::string to_edge_list(const DiGraph& g) {
  std::ostringstream out;
  out << g.n << "\n";
  for (const auto& [i, j] : g.edges) out << i << " " << j << "\n";
  return out.str();
}

DiGraph parse_edge_list(std::istream& in) {
  int n = 0;
  if (!(in >> n)) throw IoError("parse_edge_list: missing node count header");
  std::vector<std::pair<int, int>> edges;
  int i = 0, j = 0;
  while (in >> i >> j) edges.emplace_back(i, j);
  return make_digraph(n, std::move(edges));
}

void save_digraph(const DiGraph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("save_digraph: cannot open " + path);
  out << to_edge_list(g);
  if (!out.good()) throw IoError("save_digraph: write failed for " + path);
}

DiGraph load_digraph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("load_digraph: cannot open " + path);
  return parse_edge_list(in);
}

}  // namespace dadmm
