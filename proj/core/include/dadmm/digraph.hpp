#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace dadmm {

// Communication topology over n agents. An edge (i, j) means agent j can
// send to agent i. Self-pairs are never stored: an agent always sees its own
// state for free. Immutable after construction and safe to share across
// threads.
struct DiGraph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;  // sorted, unique (receiver, sender)

  bool has_edge(int i, int j) const;
  std::vector<int> in_neighbors(int i) const;  // all j with (i, j) present
  int in_degree(int i) const;
  int out_degree(int j) const;  // number of receivers of j
  std::size_t edge_count() const { return edges.size(); }
};

// Sorts and deduplicates; rejects self-pairs and out-of-range indices.
DiGraph make_digraph(int n, std::vector<std::pair<int, int>> edges);

// Every ordered pair (i, j), i != j, is included independently with
// probability p. Identical (n, p, seed) always produce the identical graph.
DiGraph generate_random_digraph(int n, double p, std::uint64_t seed);

// Draws with seed, seed+1, ... until the sample is strongly connected and
// returns the graph together with the seed that produced it.
std::pair<DiGraph, std::uint64_t> generate_strongly_connected_digraph(
    int n, double p, std::uint64_t seed, int max_attempts = 100000);

// True iff every node reaches every other node along directed edges.
bool is_strongly_connected(const DiGraph& g);

// Edge-list text format: header line `n`, then one `i j` pair per line.
std::string to_edge_list(const DiGraph& g);
DiGraph parse_edge_list(std::istream& in);
void save_digraph(const DiGraph& g, const std::string& path);
DiGraph load_digraph(const std::string& path);

}  // namespace dadmm
