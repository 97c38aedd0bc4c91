#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "sharplab/circuit.hpp"
#include "sharplab/graph.hpp"

namespace sharplab {

// ---------------------------------------------------------------------------
// Debiasing layer

/// One AND block per output maps constant-bias inputs to bias-p0
/// outputs: with inputs Bern(p1)^{bw*N}, outputs are Bern(p0)^N, since
/// p1^bw = p0 exactly.
struct DebiasSpec {
  std::size_t n_outputs = 0;      // N
  double p0 = 0.25;
  std::uint32_t block_width = 2;  // smallest b with 2^-b <= p0
  double p1 = 0.5;                // p0^(1/block_width), in [1/2, 1/sqrt(2))

  static DebiasSpec make(std::size_t n_outputs, double p0) {
    if (!(p0 > 0.0))
      throw std::invalid_argument("debias: p0 must be positive");
    if (p0 > 0.5) throw std::invalid_argument("debias: p0 must be <= 1/2");
    DebiasSpec s;
    s.n_outputs = n_outputs;
    s.p0 = p0;
    std::uint32_t bw = 1;
    while (std::exp2(-double(bw)) > p0) ++bw;
    s.block_width = bw;
    s.p1 = std::exp(std::log(p0) / double(bw));
    return s;
  }

  /// r solving (p1 - r)^block_width = p0 (1 - gamma), the perturbation
  /// that shifts the output bias to p0(1-gamma). Closed form; the
  /// asymptotic form Theta(gamma log 1/p0) is a property, not the
  /// computation.
  double perturbation(double gamma) const {
    if (!(gamma > 0.0 && gamma < 1.0))
      throw std::invalid_argument("debias: gamma must lie in (0,1)");
    return p1 * (1.0 - std::exp(std::log1p(-gamma) / double(block_width)));
  }
};

/// Depth-1 circuit with block_width*N inputs and N outputs; output i is
/// the AND of input block i.
inline Circuit debias_layer(const DebiasSpec& spec) {
  const std::uint32_t bw = spec.block_width;
  Circuit c(std::size_t(bw) * spec.n_outputs);
  std::vector<std::uint32_t> outs;
  outs.reserve(spec.n_outputs);
  for (std::uint32_t i = 0; i < spec.n_outputs; ++i) {
    std::vector<std::uint32_t> kids;
    kids.reserve(bw);
    for (std::uint32_t j = 0; j < bw; ++j)
      kids.push_back(c.add_input(i * bw + j));
    outs.push_back(c.add_and(std::move(kids)));
  }
  c.set_outputs(std::move(outs));
  return c;
}

// ---------------------------------------------------------------------------
// Tribes

/// E_p of the OR of floor(N/w) disjoint width-w ANDs.
inline double tribes_expectation(std::uint64_t n_bits, std::uint32_t w,
                                 double p) {
  const double blocks = double(n_bits / w);
  return 1.0 - std::exp(blocks * std::log1p(-std::pow(p, double(w))));
}

/// Integer block width minimizing |E_{p_target} - 1/2| over w = 1..N;
/// first minimizer wins, so the choice is parameter free.
inline std::uint32_t tribes_width(std::uint64_t n_bits, double p_target = 0.5) {
  if (n_bits < 4) throw std::invalid_argument("tribes: need N >= 4");
  std::uint32_t best_w = 1;
  double best_gap = 2.0;
  for (std::uint32_t w = 1; w <= n_bits; ++w) {
    double gap = std::abs(tribes_expectation(n_bits, w, p_target) - 0.5);
    if (gap < best_gap) {
      best_gap = gap;
      best_w = w;
    }
  }
  return best_w;
}

/// Depth-2 tribes circuit: OR of floor(N/w) disjoint ANDs of width w.
/// Leftover input bits beyond w*floor(N/w) are unread.
inline Circuit tribes(std::uint64_t n_bits, double p_target = 0.5) {
  const std::uint32_t w = tribes_width(n_bits, p_target);
  const std::uint64_t blocks = n_bits / w;
  Circuit c(n_bits);
  std::vector<std::uint32_t> ands;
  ands.reserve(blocks);
  for (std::uint64_t b = 0; b < blocks; ++b) {
    std::vector<std::uint32_t> kids;
    kids.reserve(w);
    for (std::uint32_t j = 0; j < w; ++j)
      kids.push_back(c.add_input(std::uint32_t(b * w + j)));
    ands.push_back(c.add_and(std::move(kids)));
  }
  c.set_outputs({c.add_or(std::move(ands))});
  return c;
}

// ---------------------------------------------------------------------------
// Iterated tribes

/// floor(n^(1/e)) by integer search, immune to pow() rounding.
inline std::uint64_t integer_root(std::uint64_t n, std::uint32_t e) {
  std::uint64_t r = std::uint64_t(std::pow(double(n), 1.0 / double(e)));
  auto pow_ok = [&](std::uint64_t b) {
    std::uint64_t acc = 1;
    for (std::uint32_t i = 0; i < e; ++i) {
      if (b != 0 && acc > n / b) return false;
      acc *= b;
    }
    return acc <= n;
  };
  while (!pow_ok(r)) --r;
  while (pow_ok(r + 1)) ++r;
  return r;
}

/// Places `copies` disjoint copies of c side by side: input width
/// copies*width, outputs concatenated.
inline Circuit parallel_bank(const Circuit& c, std::uint64_t copies) {
  Circuit out(c.input_width() * copies);
  std::vector<std::uint32_t> outs;
  outs.reserve(copies * c.output_count());
  for (std::uint64_t k = 0; k < copies; ++k) {
    const std::uint32_t shift_in = std::uint32_t(k * c.input_width());
    const std::uint32_t shift_id = std::uint32_t(k * c.gates().size());
    for (const Gate& g : c.gates()) {
      switch (g.kind) {
        case GateKind::Input: out.add_input(g.children[0] + shift_in); break;
        case GateKind::NegInput:
          out.add_neg_input(g.children[0] + shift_in);
          break;
        case GateKind::Const0: out.add_const(false); break;
        case GateKind::Const1: out.add_const(true); break;
        case GateKind::And:
        case GateKind::Or: {
          std::vector<std::uint32_t> kids;
          kids.reserve(g.children.size());
          for (auto ch : g.children) kids.push_back(ch + shift_id);
          if (g.kind == GateKind::And) out.add_and(std::move(kids));
          else out.add_or(std::move(kids));
          break;
        }
      }
    }
    for (auto o : c.outputs()) outs.push_back(o + shift_id);
  }
  out.set_outputs(std::move(outs));
  return out;
}

/// d/2-fold self-composition of tribes on b = floor(N^(2/d)) bits; the
/// result reads b^(d/2) <= N inputs, has depth exactly d and size O(N).
inline Circuit iterated_tribes(std::uint64_t n_bits, std::uint32_t depth,
                               double p_target = 0.5) {
  if (depth < 2 || depth % 2 != 0)
    throw std::invalid_argument("iterated_tribes: depth must be even, >= 2");
  const std::uint64_t block = integer_root(n_bits, depth / 2);
  if (block < 4)
    throw std::invalid_argument(
        "iterated_tribes: block floor(N^(2/d)) too small, need >= 4");
  Circuit level = tribes(block, p_target);
  Circuit result = level;
  for (std::uint32_t j = 1; j < depth / 2; ++j)
    result = compose(level, parallel_bank(result, block));
  return result;
}

/// Closed-form E_p of iterated_tribes(N, d): the per-level map
/// q -> 1-(1-q^w)^floor(b/w) applied d/2 times to p, since the blocks
/// at each level are disjoint and i.i.d.
inline double iterated_tribes_expectation(std::uint64_t n_bits,
                                          std::uint32_t depth, double p,
                                          double p_target = 0.5) {
  const std::uint64_t block = integer_root(n_bits, depth / 2);
  const std::uint32_t w = tribes_width(block, p_target);
  double q = p;
  for (std::uint32_t j = 0; j < depth / 2; ++j)
    q = tribes_expectation(block, w, q);
  return q;
}

// ---------------------------------------------------------------------------
// Negation wrapper

/// Same gates with input leaf polarities flipped, so
/// evaluate(result, x) == evaluate(c, ~x) and hence
/// E_p[result] = E_{1-p}[c]. Size and depth are untouched.
inline Circuit negate_inputs(const Circuit& c) {
  Circuit out = c;
  for (Gate& g : out.gates_) {
    if (g.kind == GateKind::Input) g.kind = GateKind::NegInput;
    else if (g.kind == GateKind::NegInput) g.kind = GateKind::Input;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Equality augmentation

/// From an N-output circuit c on W inputs, builds the single-output
/// circuit on W+N inputs that fires iff c(X) equals the fresh block S
/// bitwise: AND over i of (C_i and S_i) or (not C_i and not S_i).
/// Negated internal wires take the De Morgan dual cone, so depth grows
/// by exactly 3 and size stays O(size(c) + N).
inline Circuit equality_augment(const Circuit& c) {
  const std::size_t w = c.input_width();
  const std::size_t n = c.output_count();
  if (n == 0) throw CircuitError("equality_augment: circuit has no outputs");
  Circuit out(w + n);
  // Copy c verbatim; input positions 0..W-1 keep their meaning.
  for (const Gate& g : c.gates()) {
    switch (g.kind) {
      case GateKind::Input: out.add_input(g.children[0]); break;
      case GateKind::NegInput: out.add_neg_input(g.children[0]); break;
      case GateKind::Const0: out.add_const(false); break;
      case GateKind::Const1: out.add_const(true); break;
      case GateKind::And: out.add_and(g.children); break;
      case GateKind::Or: out.add_or(g.children); break;
    }
  }
  std::vector<std::int64_t> dual_map(c.gates().size(), -1);
  std::vector<std::uint32_t> eq_bits;
  eq_bits.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint32_t ci = c.outputs()[i];
    const std::uint32_t not_ci = detail::append_dual(c, ci, out, dual_map);
    const std::uint32_t si = out.add_input(std::uint32_t(w + i));
    const std::uint32_t not_si = out.add_neg_input(std::uint32_t(w + i));
    const std::uint32_t both = out.add_and({ci, si});
    const std::uint32_t neither = out.add_and({not_ci, not_si});
    eq_bits.push_back(out.add_or({both, neither}));
  }
  out.set_outputs({out.add_and(std::move(eq_bits))});
  return detail::sweep_dead_gates(out);
}

// ---------------------------------------------------------------------------
// Monotone graph properties from minimal elements

/// A constant-size graph given as an edge list over labels 0..v-1.
struct MinimalElement {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> element_edges;

  std::uint32_t vertex_count() const {
    std::uint32_t v = 0;
    for (auto& [a, b] : element_edges) v = std::max({v, a + 1, b + 1});
    return v;
  }
};

inline MinimalElement single_edge_element() { return {{{0, 1}}}; }
inline MinimalElement triangle_element() { return {{{0, 1}, {0, 2}, {1, 2}}}; }
inline MinimalElement k4_element() {
  return {{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};
}

struct MonotonePropertyCircuit {
  Circuit circuit;
  bool empty_family = false;  // warning: no placements, output is CONST0
  std::size_t placement_count = 0;
};

/// OR over all distinct injective placements of each minimal element of
/// the AND of that placement's edge bits. Placements that induce the
/// same edge set (automorphisms, or across elements) are deduplicated.
/// Depth <= 2, size = #placements + 1.
inline MonotonePropertyCircuit monotone_property_circuit(
    const std::vector<MinimalElement>& minimal, std::uint32_t n) {
  const std::uint64_t n_edges = edge_count(n);
  std::set<std::vector<std::uint32_t>> placements;
  for (const MinimalElement& h : minimal) {
    if (h.element_edges.empty())
      throw std::invalid_argument(
          "monotone property: minimal element with no edges");
    const std::uint32_t v = h.vertex_count();
    if (v > n) continue;  // cannot be placed
    // All injective maps [0,v) -> [0,n).
    std::vector<std::uint32_t> map(v, 0);
    std::vector<bool> used(n, false);
    std::vector<std::uint32_t> stack;
    // Iterative depth-first enumeration of injective assignments.
    std::size_t level = 0;
    std::vector<std::uint32_t> choice(v, 0);
    while (true) {
      if (level == v) {
        std::vector<std::uint32_t> key;
        key.reserve(h.element_edges.size());
        for (auto& [a, b] : h.element_edges)
          key.push_back(edge_index(n, map[a], map[b]));
        std::sort(key.begin(), key.end());
        placements.insert(std::move(key));
        --level;
        used[map[level]] = false;
        ++choice[level];
      }
      while (choice[level] < n && used[choice[level]]) ++choice[level];
      if (choice[level] >= n) {
        if (level == 0) break;
        choice[level] = 0;
        --level;
        used[map[level]] = false;
        ++choice[level];
      } else {
        map[level] = choice[level];
        used[map[level]] = true;
        ++level;
        if (level < v) choice[level] = 0;
      }
    }
  }
  MonotonePropertyCircuit out;
  out.placement_count = placements.size();
  Circuit c(n_edges);
  if (placements.empty()) {
    c.set_outputs({c.add_const(false)});
    out.empty_family = true;
    out.circuit = std::move(c);
    return out;
  }
  std::vector<std::int64_t> edge_leaf(n_edges, -1);
  auto leaf = [&](std::uint32_t e) {
    if (edge_leaf[e] < 0) edge_leaf[e] = c.add_input(e);
    return std::uint32_t(edge_leaf[e]);
  };
  std::vector<std::uint32_t> ands;
  ands.reserve(placements.size());
  for (const auto& key : placements) {
    std::vector<std::uint32_t> kids;
    kids.reserve(key.size());
    for (auto e : key) kids.push_back(leaf(e));
    ands.push_back(c.add_and(std::move(kids)));
  }
  c.set_outputs({c.add_or(std::move(ands))});
  out.circuit = std::move(c);
  return out;
}

// ---------------------------------------------------------------------------
// Depth-4 converse estimator

/// Parameters of the depth-4 estimator for a monotone graph property
/// whose Friedgut approximators g_i are supplied as minimal-element
/// lists, one per bias interval [q_i, q_{i+1}].
struct ConverseSpec {
  std::uint32_t n = 0;           // vertex count; N = C(n,2) input bits
  double p_c = 0.0;              // threshold location, sets K = floor(1/p_c)
  std::uint32_t s_blocks = 0;    // probe blocks; bounded by log2 N and 20
  std::vector<double> q_points;  // q_0 < ... < q_M inside (0,1)
  std::vector<std::vector<MinimalElement>> g_elements;  // size M, one per interval
  double c0 = 0.0;               // interval margin; <= 0 picks the default
  std::uint32_t max_element_edges = 16;

  std::uint32_t block_size() const {  // K
    return std::uint32_t(1.0 / p_c);
  }
  double bias_map(double p) const {  // b(p) = 1 - (1-p)^K
    return 1.0 - std::exp(double(block_size()) * std::log1p(-p));
  }
  std::size_t interval_count() const {  // M
    return q_points.empty() ? 0 : q_points.size() - 1;
  }
  double margin() const {
    if (c0 > 0.0) return c0;
    double min_gap = 1.0;
    for (std::size_t i = 0; i + 1 < q_points.size(); ++i)
      min_gap = std::min(min_gap, bias_map(q_points[i + 1]) - bias_map(q_points[i]));
    double m = min_gap / 4.0;
    return std::min(m, bias_map(q_points.front()) / 2.0 * 0.999999);
  }
};

struct ConverseBuild {
  Circuit circuit;
  std::vector<double> interval_lo, interval_hi;  // I_m bounds in Q/S units
  std::size_t config_gate_count = 0;     // layer-2 configuration ANDs (2^S)
  std::size_t count_gate_count = 0;      // layer-3 "Q=k" ORs (S+1)
  std::size_t selection_gate_count = 0;  // layer-3 selection ANDs
  std::size_t g_gate_count = 0;          // AND/OR gates of all g_i
  std::vector<std::uint32_t> count_gates;  // gate id of "Q=k", k=0..S
};

/// Builds the four-layer estimator. Layer 1 ORs the first S blocks of K
/// input bits (plus their De Morgan duals). Layers 2-3 count the fired
/// blocks exactly: one AND per probe configuration, then one OR per
/// count value k. The g_i run in parallel in the first two layers. The
/// output layer ORs, over every (k, i) with k/S inside interval I_i, a
/// selection AND that fires iff Q=k and g_i(X)=1.
inline ConverseBuild converse_estimator(const ConverseSpec& spec) {
  const std::uint64_t n_inputs = edge_count(spec.n);
  const std::uint32_t s = spec.s_blocks;
  const std::uint32_t k_block = spec.block_size();
  if (!(spec.p_c > 0.0 && spec.p_c < 1.0))
    throw std::invalid_argument("converse: p_c must lie in (0,1)");
  if (s < 2) throw std::invalid_argument("converse: need s_blocks >= 2");
  if (s > 20)
    throw std::invalid_argument(
        "converse: s_blocks > 20 would need more than ~1M exact-count gates");
  if (double(s) >= std::log2(double(n_inputs)))
    throw std::invalid_argument(
        "converse: s_blocks >= log2 N blows up the counting layers");
  if (std::uint64_t(s) * k_block > n_inputs)
    throw std::invalid_argument("converse: probe S*K exceeds the input width");
  if (spec.q_points.size() < 2)
    throw std::invalid_argument("converse: need at least two q points");
  for (std::size_t i = 0; i + 1 < spec.q_points.size(); ++i)
    if (!(spec.q_points[i] < spec.q_points[i + 1]))
      throw std::invalid_argument("converse: q points must increase strictly");
  if (!(spec.q_points.front() > 0.0 && spec.q_points.back() < 1.0))
    throw std::invalid_argument("converse: q points must lie in (0,1)");
  if (spec.g_elements.size() != spec.interval_count())
    throw std::invalid_argument(
        "converse: need one minimal-element list per interval");
  for (const auto& lst : spec.g_elements)
    for (const auto& h : lst)
      if (h.element_edges.size() > spec.max_element_edges)
        throw std::invalid_argument(
            "converse: minimal element exceeds the edge budget");

  const double c0 = spec.margin();
  if (!(c0 > 0.0))
    throw std::invalid_argument("converse: interval margin must be positive");

  ConverseBuild out;
  const std::size_t m_intervals = spec.interval_count();
  for (std::size_t m = 0; m < m_intervals; ++m) {
    out.interval_lo.push_back(spec.bias_map(spec.q_points[m]) - c0);
    out.interval_hi.push_back(spec.bias_map(spec.q_points[m + 1]) + c0);
  }

  Circuit c(n_inputs);
  // Layer 1: block ORs and their duals.
  std::vector<std::uint32_t> pos(s), neg(s);
  for (std::uint32_t b = 0; b < s; ++b) {
    std::vector<std::uint32_t> ork, andk;
    ork.reserve(k_block);
    andk.reserve(k_block);
    for (std::uint32_t j = 0; j < k_block; ++j) {
      ork.push_back(c.add_input(b * k_block + j));
      andk.push_back(c.add_neg_input(b * k_block + j));
    }
    pos[b] = c.add_or(std::move(ork));
    neg[b] = c.add_and(std::move(andk));
  }
  // Layer 2: one AND per probe configuration, and its dual OR used by
  // the selection layer (exactly one configuration fires, so "Q=k" can
  // be written as an AND of dual gates).
  const std::uint32_t n_config = std::uint32_t(1) << s;
  std::vector<std::uint32_t> config(n_config), nconfig(n_config);
  for (std::uint32_t sigma = 0; sigma < n_config; ++sigma) {
    std::vector<std::uint32_t> kids, dual_kids;
    kids.reserve(s);
    dual_kids.reserve(s);
    for (std::uint32_t b = 0; b < s; ++b) {
      const bool on = (sigma >> b) & 1;
      kids.push_back(on ? pos[b] : neg[b]);
      dual_kids.push_back(on ? neg[b] : pos[b]);
    }
    config[sigma] = c.add_and(std::move(kids));
    nconfig[sigma] = c.add_or(std::move(dual_kids));
  }
  out.config_gate_count = n_config;
  // Layer 3: the count gates "Q=k".
  std::vector<std::vector<std::uint32_t>> by_count(s + 1);
  for (std::uint32_t sigma = 0; sigma < n_config; ++sigma)
    by_count[std::popcount(sigma)].push_back(config[sigma]);
  out.count_gates.resize(s + 1);
  for (std::uint32_t k = 0; k <= s; ++k)
    out.count_gates[k] = c.add_or(std::vector<std::uint32_t>(by_count[k]));
  out.count_gate_count = s + 1;

  // g_i circuits, merged in with shared input leaves (layers 1-2).
  std::vector<std::uint32_t> g_out(m_intervals);
  std::size_t g_gates = 0;
  for (std::size_t i = 0; i < m_intervals; ++i) {
    auto g = monotone_property_circuit(spec.g_elements[i], spec.n);
    std::uint32_t shift = std::uint32_t(c.gates().size());
    for (const Gate& gate : g.circuit.gates()) {
      switch (gate.kind) {
        case GateKind::Input: c.add_input(gate.children[0]); break;
        case GateKind::NegInput: c.add_neg_input(gate.children[0]); break;
        case GateKind::Const0: c.add_const(false); break;
        case GateKind::Const1: c.add_const(true); break;
        case GateKind::And:
        case GateKind::Or: {
          std::vector<std::uint32_t> kids;
          kids.reserve(gate.children.size());
          for (auto ch : gate.children) kids.push_back(ch + shift);
          if (gate.kind == GateKind::And) c.add_and(std::move(kids));
          else c.add_or(std::move(kids));
          ++g_gates;
          break;
        }
      }
    }
    g_out[i] = g.circuit.outputs()[0] + shift;
  }
  out.g_gate_count = g_gates;

  // Layer 3/4: selection ANDs, one per compatible (k, interval) pair,
  // then the output OR.
  std::vector<std::uint32_t> selected;
  for (std::uint32_t k = 0; k <= s; ++k) {
    const double frac = double(k) / double(s);
    for (std::size_t i = 0; i < m_intervals; ++i) {
      if (!(frac > out.interval_lo[i] && frac < out.interval_hi[i])) continue;
      std::vector<std::uint32_t> kids;
      kids.reserve(n_config - by_count[k].size() + 1);
      for (std::uint32_t sigma = 0; sigma < n_config; ++sigma)
        if (std::uint32_t(std::popcount(sigma)) != k)
          kids.push_back(nconfig[sigma]);
      kids.push_back(g_out[i]);
      selected.push_back(c.add_and(std::move(kids)));
    }
  }
  out.selection_gate_count = selected.size();
  if (selected.empty())
    throw std::invalid_argument(
        "converse: no count value k/S falls inside any interval; the "
        "intervals fail to cover the probe range");
  c.set_outputs({c.add_or(std::move(selected))});
  out.circuit = std::move(c);
  return out;
}

}  // namespace sharplab
