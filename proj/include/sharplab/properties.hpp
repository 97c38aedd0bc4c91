#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "sharplab/constructions.hpp"
#include "sharplab/graph.hpp"
#include "sharplab/oracle.hpp"
#include "sharplab/stats.hpp"
#include "sharplab/twosat.hpp"

namespace sharplab {

inline FunctionOracle dictator_oracle(std::uint64_t n) {
  auto o = make_mask_oracle("dictator", n,
                            [](std::uint64_t x) { return (x & 1) != 0; },
                            Monotonicity::Increasing);
  o.expectation = [](double p) { return p; };
  return o;
}

inline FunctionOracle and_oracle(std::uint64_t n) {
  const std::uint64_t full = (n >= 64) ? ~std::uint64_t(0)
                                       : ((std::uint64_t(1) << n) - 1);
  auto o = make_mask_oracle(
      "and" + std::to_string(n), n,
      [full](std::uint64_t x) { return (x & full) == full; },
      Monotonicity::Increasing);
  o.expectation = [n](double p) { return std::pow(p, double(n)); };
  return o;
}

inline FunctionOracle or_oracle(std::uint64_t n) {
  auto o = make_mask_oracle("or" + std::to_string(n), n,
                            [](std::uint64_t x) { return x != 0; },
                            Monotonicity::Increasing);
  o.expectation = [n](double p) {
    return 1.0 - std::exp(double(n) * std::log1p(-p));
  };
  return o;
}

inline FunctionOracle parity_oracle(std::uint64_t n) {
  return make_mask_oracle("parity" + std::to_string(n), n, [](std::uint64_t x) {
    return (std::popcount(x) & 1) != 0;
  });
}

/// Majority on an odd number of bits; ties are undefined, so even
/// widths are rejected.
inline FunctionOracle majority_oracle(std::uint64_t n) {
  if (n % 2 == 0)
    throw std::invalid_argument("majority: width must be odd (ties undefined)");
  const std::uint64_t need = n / 2 + 1;
  FunctionOracle o;
  o.name = "maj" + std::to_string(n);
  o.width = n;
  if (n <= 63)
    o.eval_mask = [need](std::uint64_t x) {
      return std::uint64_t(std::popcount(x)) >= need;
    };
  o.eval_ones = [need](std::span<const std::uint32_t> ones) {
    return ones.size() >= need;
  };
  o.monotone = Monotonicity::Increasing;
  o.expectation = [n, need](double p) {
    return binom_upper_tail(n, need, p);
  };
  return o;
}

inline FunctionOracle tribes_oracle(std::uint64_t n, double p_target = 0.5) {
  const std::uint32_t w = tribes_width(n, p_target);
  const std::uint64_t blocks = n / w;
  FunctionOracle o;
  o.name = "tribes" + std::to_string(n);
  o.width = n;
  auto eval = [w, blocks](const Bits& b) {
    for (std::uint64_t blk = 0; blk < blocks; ++blk) {
      bool all = true;
      for (std::uint32_t j = 0; j < w; ++j)
        if (!b.get(blk * w + j)) { all = false; break; }
      if (all) return true;
    }
    return false;
  };
  if (n <= 63) {
    o.eval_mask = [w, blocks](std::uint64_t x) {
      const std::uint64_t block_mask = (std::uint64_t(1) << w) - 1;
      for (std::uint64_t blk = 0; blk < blocks; ++blk) {
        std::uint64_t m = block_mask << (blk * w);
        if ((x & m) == m) return true;
      }
      return false;
    };
  }
  o.eval_ones = [eval, n](std::span<const std::uint32_t> ones) {
    return eval(Bits::from_ones(ones, n));
  };
  o.monotone = Monotonicity::Increasing;
  o.expectation = [n, w](double p) { return tribes_expectation(n, w, p); };
  return o;
}

inline FunctionOracle iterated_tribes_oracle(std::uint64_t n, std::uint32_t d,
                                             double p_target = 0.5) {
  // The circuit reads block^(d/2) bits; the oracle width is that exact
  // value rather than the requested upper bound.
  const std::uint64_t block = integer_root(n, d / 2);
  std::uint64_t width = 1;
  for (std::uint32_t j = 0; j < d / 2; ++j) width *= block;
  FunctionOracle o;
  o.name = "itribes" + std::to_string(n) + "d" + std::to_string(d);
  o.width = width;
  o.monotone = Monotonicity::Increasing;
  o.expectation = [n, d, p_target](double p) {
    return iterated_tribes_expectation(n, d, p, p_target);
  };
  // Evaluation goes through the built circuit only when needed.
  auto circuit = std::make_shared<Circuit>(iterated_tribes(n, d, p_target));
  o.eval_ones = [circuit, width](std::span<const std::uint32_t> ones) {
    return circuit->evaluate1(Bits::from_ones(ones, width));
  };
  if (width <= 63)
    o.eval_mask = [circuit, width](std::uint64_t x) {
      return circuit->evaluate1(Bits::from_mask(x, width));
    };
  return o;
}

/// k-clique membership on n-vertex graphs; width C(n,2).
inline FunctionOracle kclique_oracle(std::uint32_t n, std::uint32_t k) {
  FunctionOracle o;
  o.name = "kclique" + std::to_string(n) + "k" + std::to_string(k);
  o.width = edge_count(n);
  auto eval = [n, k](Bits bits) {
    return has_k_clique(GraphInput(n, std::move(bits)), k);
  };
  if (o.width <= 63)
    o.eval_mask = [eval, w = o.width](std::uint64_t x) {
      return eval(Bits::from_mask(x, w));
    };
  o.eval_ones = [eval, w = o.width](std::span<const std::uint32_t> ones) {
    return eval(Bits::from_ones(ones, w));
  };
  o.monotone = Monotonicity::Increasing;
  return o;
}

/// Satisfiability of the 2-SAT formula encoded by the clause-indicator
/// vector; width 2n(n-1). Monotone decreasing: adding clauses never
/// turns UNSAT into SAT.
inline FunctionOracle twosat_oracle(std::uint32_t n) {
  FunctionOracle o;
  o.name = "twosat" + std::to_string(n);
  o.width = clause_universe_size(n);
  o.eval_ones = [n](std::span<const std::uint32_t> ones) {
    return two_sat_satisfiable_sparse(n, ones);
  };
  if (o.width <= 63)
    o.eval_mask = [n, w = o.width](std::uint64_t x) {
      Bits b = Bits::from_mask(x, w);
      auto ones = b.ones();
      return two_sat_satisfiable_sparse(n, ones);
    };
  o.monotone = Monotonicity::Decreasing;
  return o;
}

inline FunctionOracle constant_oracle(std::uint64_t n, bool value) {
  auto o = make_mask_oracle(value ? "const1" : "const0", n,
                            [value](std::uint64_t) { return value; });
  o.expectation = [value](double) { return value ? 1.0 : 0.0; };
  o.monotone = Monotonicity::Increasing;
  return o;
}

/// Random truth table on n <= 20 bits (test corpus material).
inline FunctionOracle random_function_oracle(std::uint64_t n, std::uint64_t seed) {
  if (n > 20) throw std::invalid_argument("random function: width > 20");
  auto table = std::make_shared<std::vector<bool>>(std::uint64_t(1) << n);
  Rng rng(seed);
  for (std::size_t i = 0; i < table->size(); ++i) (*table)[i] = rng.bernoulli(0.5);
  return make_mask_oracle("rand" + std::to_string(n) + "s" + std::to_string(seed),
                          n, [table](std::uint64_t x) { return (*table)[x]; });
}

/// Named oracle lookup used by the CLI: maj, tribes, itribes4, dictator,
/// and, or, parity, kclique (size = vertex count, with k), twosat
/// (size = variable count), const0, const1.
inline FunctionOracle oracle_by_name(const std::string& name,
                                     std::uint64_t size, std::uint32_t k = 3) {
  if (name == "maj") return majority_oracle(size);
  if (name == "tribes") return tribes_oracle(size);
  if (name == "itribes4") return iterated_tribes_oracle(size, 4);
  if (name == "dictator") return dictator_oracle(size);
  if (name == "and") return and_oracle(size);
  if (name == "or") return or_oracle(size);
  if (name == "parity") return parity_oracle(size);
  if (name == "kclique") return kclique_oracle(std::uint32_t(size), k);
  if (name == "twosat") return twosat_oracle(std::uint32_t(size));
  if (name == "const0") return constant_oracle(size, false);
  if (name == "const1") return constant_oracle(size, true);
  throw std::invalid_argument("unknown oracle '" + name + "'");
}

// ---------------------------------------------------------------------------
// Text input formats

/// Edge-list document: optional "n <count>" header line, then one
/// "u v" pair per line. Lines starting with '#' are comments.
inline GraphInput parse_graph(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  std::uint32_t n = 0;
  bool have_n = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string tok;
    ls >> tok;
    if (tok == "n") {
      ls >> n;
      have_n = true;
      continue;
    }
    std::uint32_t u = std::uint32_t(std::stoul(tok)), v;
    if (!(ls >> v)) throw std::invalid_argument("graph: bad edge line: " + line);
    if (u == v) throw std::invalid_argument("graph: self-loop " + line);
    edges.emplace_back(u, v);
    n = have_n ? n : std::max({n, u + 1, v + 1});
  }
  GraphInput g(n);
  for (auto& [u, v] : edges) g.add_edge(u, v);
  return g;
}

/// Clause-list document using signed 1-based literals, e.g. "1 -2" for
/// (x1 or not x2). Optional "n <count>" header.
inline TwoSatFormula parse_formula(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::pair<int, int>> clauses;
  std::uint32_t n = 0;
  bool have_n = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string tok;
    ls >> tok;
    if (tok == "n") {
      ls >> n;
      have_n = true;
      continue;
    }
    int a = std::stoi(tok), b;
    if (!(ls >> b))
      throw std::invalid_argument("formula: bad clause line: " + line);
    if (a == 0 || b == 0)
      throw std::invalid_argument("formula: literal 0 in line: " + line);
    clauses.emplace_back(a, b);
    if (!have_n)
      n = std::max({n, std::uint32_t(std::abs(a)), std::uint32_t(std::abs(b))});
  }
  TwoSatFormula f(n);
  for (auto& [a, b] : clauses)
    f.add_clause({std::uint32_t(std::abs(a)) - 1, a < 0},
                 {std::uint32_t(std::abs(b)) - 1, b < 0});
  return f;
}

/// Minimal-element list: graphs separated by "graph" lines, each an
/// edge list over labels 0..v-1.
inline std::vector<MinimalElement> parse_minimal_elements(
    const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<MinimalElement> out;
  MinimalElement cur;
  auto flush = [&] {
    if (!cur.element_edges.empty()) out.push_back(cur);
    cur.element_edges.clear();
  };
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string tok;
    ls >> tok;
    if (tok == "graph") {
      flush();
      continue;
    }
    std::uint32_t u = std::uint32_t(std::stoul(tok)), v;
    if (!(ls >> v))
      throw std::invalid_argument("minimal elements: bad edge line: " + line);
    cur.element_edges.emplace_back(u, v);
  }
  flush();
  return out;
}

}  // namespace sharplab
