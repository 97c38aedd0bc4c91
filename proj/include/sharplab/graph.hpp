#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "sharplab/bits.hpp"
#include "sharplab/rng.hpp"

namespace sharplab {

/// Edge-index bijection for n-vertex graphs: edges {i,j} with i<j in
/// row-major upper-triangular order, i.e. (0,1),(0,2),..,(0,n-1),(1,2),..
inline std::uint32_t edge_index(std::uint32_t n, std::uint32_t i,
                                std::uint32_t j) {
  if (i > j) std::swap(i, j);
  return i * (2 * n - i - 1) / 2 + (j - i - 1);
}

inline std::pair<std::uint32_t, std::uint32_t> edge_unindex(std::uint32_t n,
                                                            std::uint32_t idx) {
  std::uint32_t i = 0, row = n - 1;
  while (idx >= row) {
    idx -= row;
    ++i;
    --row;
  }
  return {i, i + 1 + idx};
}

inline std::uint64_t edge_count(std::uint64_t n) { return n * (n - 1) / 2; }

/// An undirected graph as its edge-indicator vector of width C(n,2).
struct GraphInput {
  std::uint32_t n = 0;
  Bits edges;

  explicit GraphInput(std::uint32_t n_) : n(n_), edges(edge_count(n_)) {}
  GraphInput(std::uint32_t n_, Bits e) : n(n_), edges(std::move(e)) {}

  bool has_edge(std::uint32_t i, std::uint32_t j) const {
    return edges.get(edge_index(n, i, j));
  }
  void add_edge(std::uint32_t i, std::uint32_t j) {
    edges.set(edge_index(n, i, j));
  }

  std::vector<std::uint32_t> degrees() const {
    std::vector<std::uint32_t> deg(n, 0);
    for (auto e : edges.ones()) {
      auto [i, j] = edge_unindex(n, e);
      ++deg[i];
      ++deg[j];
    }
    return deg;
  }

  GraphInput complement() const {
    GraphInput g(n);
    for (std::uint32_t e = 0; e < edge_count(n); ++e)
      if (!edges.get(e)) g.edges.set(e);
    return g;
  }
};

inline GraphInput sample_gnp(std::uint32_t n, double p, Rng& rng) {
  GraphInput g(n);
  for (auto e : sample_ones(rng, edge_count(n), p)) g.edges.set(e);
  return g;
}

inline std::uint32_t count_isolated_vertices(const GraphInput& g) {
  auto deg = g.degrees();
  std::uint32_t c = 0;
  for (auto d : deg)
    if (d == 0) ++c;
  return c;
}

/// Edges whose both endpoints have degree exactly 1.
inline std::uint32_t count_isolated_edges(const GraphInput& g) {
  auto deg = g.degrees();
  std::uint32_t c = 0;
  for (auto e : g.edges.ones()) {
    auto [i, j] = edge_unindex(g.n, e);
    if (deg[i] == 1 && deg[j] == 1) ++c;
  }
  return c;
}

namespace detail {

/// Row-bitset adjacency for the branch-and-bound solvers; n <= 100 keeps
/// rows at two words.
struct AdjMatrix {
  std::uint32_t n = 0;
  std::uint32_t row_words = 0;
  std::vector<std::uint64_t> bits;

  explicit AdjMatrix(std::uint32_t n_)
      : n(n_), row_words((n_ + 63) / 64), bits(std::size_t(n_) * row_words, 0) {}

  void add(std::uint32_t i, std::uint32_t j) {
    bits[std::size_t(i) * row_words + (j >> 6)] |= std::uint64_t(1) << (j & 63);
    bits[std::size_t(j) * row_words + (i >> 6)] |= std::uint64_t(1) << (i & 63);
  }
  const std::uint64_t* row(std::uint32_t i) const {
    return &bits[std::size_t(i) * row_words];
  }
};

/// Tomita-style maximum clique: greedy-coloring upper bounds, branching
/// from the highest color class down.
class MaxCliqueSolver {
 public:
  explicit MaxCliqueSolver(const AdjMatrix& adj) : adj_(adj), w_(adj.row_words) {}

  std::uint32_t solve() {
    std::vector<std::uint32_t> cand(adj_.n);
    for (std::uint32_t v = 0; v < adj_.n; ++v) cand[v] = v;
    best_ = 0;
    expand(cand, 0);
    return best_;
  }

 private:
  void expand(const std::vector<std::uint32_t>& cand, std::uint32_t depth) {
    if (cand.empty()) {
      if (depth > best_) best_ = depth;
      return;
    }
    // Greedy coloring of the candidate set; color[i] bounds the clique
    // size extendable from cand[i] within its prefix.
    std::vector<std::uint32_t> order, color;
    color_sort(cand, order, color);
    for (std::size_t idx = order.size(); idx-- > 0;) {
      if (depth + color[idx] <= best_) return;  // bound prunes the rest
      std::uint32_t v = order[idx];
      std::vector<std::uint32_t> next;
      next.reserve(idx);
      const std::uint64_t* row = adj_.row(v);
      for (std::size_t k = 0; k < idx; ++k) {
        std::uint32_t u = order[k];
        if (row[u >> 6] >> (u & 63) & 1) next.push_back(u);
      }
      expand(next, depth + 1);
    }
  }

  void color_sort(const std::vector<std::uint32_t>& cand,
                  std::vector<std::uint32_t>& order,
                  std::vector<std::uint32_t>& color) {
    std::vector<std::vector<std::uint64_t>> class_bits;
    std::vector<std::vector<std::uint32_t>> class_members;
    for (std::uint32_t v : cand) {
      const std::uint64_t* row = adj_.row(v);
      std::size_t cls = 0;
      for (; cls < class_bits.size(); ++cls) {
        bool conflict = false;
        for (std::uint32_t w = 0; w < w_; ++w)
          if (class_bits[cls][w] & row[w]) { conflict = true; break; }
        if (!conflict) break;
      }
      if (cls == class_bits.size()) {
        class_bits.emplace_back(w_, 0);
        class_members.emplace_back();
      }
      class_bits[cls][v >> 6] |= std::uint64_t(1) << (v & 63);
      class_members[cls].push_back(v);
    }
    order.clear();
    color.clear();
    for (std::size_t cls = 0; cls < class_members.size(); ++cls)
      for (std::uint32_t v : class_members[cls]) {
        order.push_back(v);
        color.push_back(std::uint32_t(cls + 1));
      }
  }

  const AdjMatrix& adj_;
  std::uint32_t w_;
  std::uint32_t best_ = 0;
};

inline AdjMatrix to_adj(const GraphInput& g) {
  AdjMatrix adj(g.n);
  for (auto e : g.edges.ones()) {
    auto [i, j] = edge_unindex(g.n, e);
    adj.add(i, j);
  }
  return adj;
}

}  // namespace detail

/// Exact independence number, as maximum clique of the complement.
inline std::uint32_t independence_number(const GraphInput& g) {
  if (g.n > 100)
    throw std::invalid_argument("independence_number: n > 100 is outside the "
                                "exact branch-and-bound regime");
  detail::AdjMatrix comp(g.n);
  for (std::uint32_t i = 0; i < g.n; ++i)
    for (std::uint32_t j = i + 1; j < g.n; ++j)
      if (!g.has_edge(i, j)) comp.add(i, j);
  return detail::MaxCliqueSolver(comp).solve();
}

/// k-clique membership through the independence-number dual: G has a
/// k-clique iff the complement has an independent set of size k.
inline bool has_k_clique(const GraphInput& g, std::uint32_t k) {
  if (k <= 1) return k == 0 || g.n >= 1;
  return independence_number(g.complement()) >= k;
}

/// Direct triangle test, used as an independent cross-check oracle.
inline bool has_triangle(const GraphInput& g) {
  auto adj = detail::to_adj(g);
  for (std::uint32_t i = 0; i < g.n; ++i)
    for (std::uint32_t j = i + 1; j < g.n; ++j) {
      if (!g.has_edge(i, j)) continue;
      const std::uint64_t* ri = adj.row(i);
      const std::uint64_t* rj = adj.row(j);
      for (std::uint32_t w = 0; w < adj.row_words; ++w)
        if (ri[w] & rj[w]) return true;
    }
  return false;
}

}  // namespace sharplab
