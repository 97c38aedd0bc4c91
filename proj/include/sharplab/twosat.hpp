#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "sharplab/bits.hpp"

namespace sharplab {

/// Literals are packed as 2*var + sign, sign 1 meaning negated. The
/// clause universe consists of all unordered pairs of strictly distinct
/// literals (different variables), which has size exactly 2n(n-1): out
/// of C(2n,2) pairs, the n pairs {x, !x} are excluded and {l, l} never
/// occurs.
struct Literal {
  std::uint32_t var;
  bool negated;

  std::uint32_t packed() const { return 2 * var + (negated ? 1 : 0); }
  static Literal unpack(std::uint32_t l) { return {l >> 1, (l & 1) != 0}; }
  bool operator==(const Literal&) const = default;
};

inline std::uint64_t clause_universe_size(std::uint64_t n) {
  return 2 * n * (n - 1);
}

namespace detail {
// Pairs are ordered (a,b) with a<b in packed literal order; row a holds
// the partners of a above it, minus the complement slot a+1 when a is
// even. Cumulative row sizes in closed form keep both directions fast.
inline std::uint64_t clause_rows_before(std::uint64_t n, std::uint64_t a) {
  return a * (2 * n - 1) - a * (a - 1) / 2 - (a + 1) / 2;
}
}  // namespace detail

/// Maps an unordered pair of strictly distinct literals to its index in
/// [0, 2n(n-1)).
inline std::uint32_t clause_index(std::uint32_t n, Literal x, Literal y) {
  std::uint32_t a = x.packed(), b = y.packed();
  if (a > b) std::swap(a, b);
  if (x.var == y.var)
    throw std::invalid_argument(
        "clause literals must be strictly distinct (different variables)");
  if (b >= 2 * n) throw std::invalid_argument("literal out of range");
  std::uint32_t offset = b - a - 1;
  if (a % 2 == 0) --offset;  // b > a+1 here, so the complement slot is skipped
  return std::uint32_t(detail::clause_rows_before(n, a) + offset);
}

inline std::pair<Literal, Literal> clause_unindex(std::uint32_t n,
                                                  std::uint32_t idx) {
  if (idx >= clause_universe_size(n))
    throw std::invalid_argument("clause index out of range");
  // Largest a with rows_before(a) <= idx.
  std::uint32_t lo = 0, hi = 2 * n - 1;
  while (lo < hi) {
    std::uint32_t mid = (lo + hi + 1) / 2;
    if (detail::clause_rows_before(n, mid) <= idx) lo = mid;
    else hi = mid - 1;
  }
  std::uint32_t a = lo;
  std::uint32_t off = std::uint32_t(idx - detail::clause_rows_before(n, a));
  std::uint32_t b = a + 1 + off;
  if (a % 2 == 0) ++b;  // complement slot a+1 was skipped
  return {Literal::unpack(a), Literal::unpack(b)};
}

/// A 2-SAT formula as the indicator vector over the clause universe.
struct TwoSatFormula {
  std::uint32_t n = 0;
  Bits clause_bits;

  explicit TwoSatFormula(std::uint32_t n_)
      : n(n_), clause_bits(clause_universe_size(n_)) {}

  void add_clause(Literal x, Literal y) {
    clause_bits.set(clause_index(n, x, y));
  }
};

/// Satisfiability via the implication graph on 2n literal nodes: clause
/// (a or b) contributes !a -> b and !b -> a; unsatisfiable iff some
/// variable shares a strongly connected component with its negation.
/// Linear time in clauses (iterative Tarjan).
inline bool two_sat_satisfiable_sparse(
    std::uint32_t n, std::span<const std::uint32_t> clause_indices) {
  const std::uint32_t nodes = 2 * n;
  const std::size_t m = clause_indices.size();

  // CSR adjacency, two arcs per clause.
  std::vector<std::uint32_t> head(nodes + 1, 0);
  std::vector<std::uint32_t> arcs(2 * m);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edge_list;
  edge_list.reserve(2 * m);
  for (auto ci : clause_indices) {
    auto [x, y] = clause_unindex(n, ci);
    std::uint32_t xp = x.packed(), yp = y.packed();
    edge_list.emplace_back(xp ^ 1u, yp);  // !x -> y
    edge_list.emplace_back(yp ^ 1u, xp);  // !y -> x
  }
  for (auto& [u, v] : edge_list) ++head[u + 1];
  for (std::uint32_t i = 0; i < nodes; ++i) head[i + 1] += head[i];
  {
    std::vector<std::uint32_t> fill(head.begin(), head.end() - 1);
    for (auto& [u, v] : edge_list) arcs[fill[u]++] = v;
  }

  // Iterative Tarjan SCC.
  constexpr std::uint32_t kUnvisited = 0xffffffffu;
  std::vector<std::uint32_t> index(nodes, kUnvisited), low(nodes, 0),
      comp(nodes, kUnvisited);
  std::vector<std::uint32_t> stack, call_node, call_arc;
  std::vector<bool> on_stack(nodes, false);
  std::uint32_t next_index = 0, next_comp = 0;

  for (std::uint32_t root = 0; root < nodes; ++root) {
    if (index[root] != kUnvisited) continue;
    call_node.push_back(root);
    call_arc.push_back(head[root]);
    index[root] = low[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call_node.empty()) {
      std::uint32_t v = call_node.back();
      if (call_arc.back() < head[v + 1]) {
        std::uint32_t w = arcs[call_arc.back()++];
        if (index[w] == kUnvisited) {
          index[w] = low[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = true;
          call_node.push_back(w);
          call_arc.push_back(head[w]);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
      } else {
        call_node.pop_back();
        call_arc.pop_back();
        if (low[v] == index[v]) {
          while (true) {
            std::uint32_t w = stack.back();
            stack.pop_back();
            on_stack[w] = false;
            comp[w] = next_comp;
            if (w == v) break;
          }
          ++next_comp;
        }
        if (!call_node.empty()) {
          std::uint32_t parent = call_node.back();
          low[parent] = std::min(low[parent], low[v]);
        }
      }
    }
  }

  for (std::uint32_t var = 0; var < n; ++var)
    if (comp[2 * var] == comp[2 * var + 1]) return false;
  return true;
}

inline bool two_sat_satisfiable(const TwoSatFormula& f) {
  auto ones = f.clause_bits.ones();
  return two_sat_satisfiable_sparse(f.n, ones);
}

}  // namespace sharplab
