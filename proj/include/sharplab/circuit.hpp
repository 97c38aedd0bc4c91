#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "sharplab/bits.hpp"

namespace sharplab {

/// Unbounded fan-in AND/OR circuits with negations at the input level
/// only. Gates are stored in topological order and ids are their dense
/// positions in that order, so validity is a single forward scan and
/// evaluation a single bottom-up pass.
enum class GateKind : std::uint8_t { Input, NegInput, Const0, Const1, And, Or };

inline const char* gate_kind_name(GateKind k) {
  switch (k) {
    case GateKind::Input: return "INPUT";
    case GateKind::NegInput: return "NEG_INPUT";
    case GateKind::Const0: return "CONST0";
    case GateKind::Const1: return "CONST1";
    case GateKind::And: return "AND";
    case GateKind::Or: return "OR";
  }
  return "?";
}

inline bool parse_gate_kind(const std::string& s, GateKind& out) {
  if (s == "INPUT") out = GateKind::Input;
  else if (s == "NEG_INPUT") out = GateKind::NegInput;
  else if (s == "CONST0") out = GateKind::Const0;
  else if (s == "CONST1") out = GateKind::Const1;
  else if (s == "AND") out = GateKind::And;
  else if (s == "OR") out = GateKind::Or;
  else return false;
  return true;
}

struct Gate {
  GateKind kind;
  // INPUT/NEG_INPUT: single entry, an input position in [0, input_width).
  // AND/OR: gate ids, each smaller than this gate's id. CONST: empty.
  std::vector<std::uint32_t> children;
};

struct CircuitStats {
  std::size_t size = 0;   // AND/OR gates only
  std::size_t depth = 0;  // AND/OR layers on the deepest input->output path
};

class CircuitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Circuit {
 public:
  Circuit() = default;
  explicit Circuit(std::size_t input_width) : input_width_(input_width) {}

  std::size_t input_width() const { return input_width_; }
  const std::vector<Gate>& gates() const { return gates_; }
  const std::vector<std::uint32_t>& outputs() const { return outputs_; }
  std::size_t output_count() const { return outputs_.size(); }

  std::uint32_t add_input(std::uint32_t pos) {
    return add(GateKind::Input, {pos});
  }
  std::uint32_t add_neg_input(std::uint32_t pos) {
    return add(GateKind::NegInput, {pos});
  }
  std::uint32_t add_const(bool v) {
    return add(v ? GateKind::Const1 : GateKind::Const0, {});
  }
  std::uint32_t add_and(std::vector<std::uint32_t> children) {
    return add(GateKind::And, std::move(children));
  }
  std::uint32_t add_or(std::vector<std::uint32_t> children) {
    return add(GateKind::Or, std::move(children));
  }

  void set_outputs(std::vector<std::uint32_t> outs) {
    outputs_ = std::move(outs);
  }

  /// Checks all structural invariants; throws CircuitError naming the
  /// offending gate id.
  void validate() const {
    if (input_width_ == 0) throw CircuitError("circuit has input width 0");
    for (std::uint32_t id = 0; id < gates_.size(); ++id) {
      const Gate& g = gates_[id];
      switch (g.kind) {
        case GateKind::Input:
        case GateKind::NegInput:
          if (g.children.size() != 1)
            throw CircuitError("gate " + std::to_string(id) +
                               ": input gate needs exactly one position");
          if (g.children[0] >= input_width_)
            throw CircuitError("gate " + std::to_string(id) +
                               ": input position out of range");
          break;
        case GateKind::Const0:
        case GateKind::Const1:
          if (!g.children.empty())
            throw CircuitError("gate " + std::to_string(id) +
                               ": const gate has children");
          break;
        case GateKind::And:
        case GateKind::Or:
          if (g.children.empty())
            throw CircuitError("gate " + std::to_string(id) +
                               ": AND/OR needs fan-in >= 1");
          for (auto c : g.children)
            if (c >= id)
              throw CircuitError("gate " + std::to_string(id) +
                                 ": child " + std::to_string(c) +
                                 " does not precede its parent");
          break;
      }
    }
    if (outputs_.empty()) throw CircuitError("circuit has no outputs");
    for (auto o : outputs_)
      if (o >= gates_.size())
        throw CircuitError("output id " + std::to_string(o) + " out of range");
  }

  /// Bottom-up evaluation; one value slot per gate. Scratch is
  /// thread-local, so concurrent evaluation of a shared circuit is safe.
  Bits evaluate(const Bits& input) const {
    if (input.size() != input_width_)
      throw CircuitError("input width mismatch: got " +
                         std::to_string(input.size()) + ", want " +
                         std::to_string(input_width_));
    thread_local std::vector<std::uint8_t> scratch;
    scratch.resize(gates_.size());
    std::uint8_t* val = scratch.data();
    for (std::uint32_t id = 0; id < gates_.size(); ++id) {
      const Gate& g = gates_[id];
      switch (g.kind) {
        case GateKind::Input: val[id] = input.get(g.children[0]); break;
        case GateKind::NegInput: val[id] = !input.get(g.children[0]); break;
        case GateKind::Const0: val[id] = 0; break;
        case GateKind::Const1: val[id] = 1; break;
        case GateKind::And: {
          std::uint8_t v = 1;
          for (auto c : g.children)
            if (!val[c]) { v = 0; break; }
          val[id] = v;
          break;
        }
        case GateKind::Or: {
          std::uint8_t v = 0;
          for (auto c : g.children)
            if (val[c]) { v = 1; break; }
          val[id] = v;
          break;
        }
      }
    }
    Bits out(outputs_.size());
    for (std::size_t i = 0; i < outputs_.size(); ++i)
      out.assign(i, val[outputs_[i]] != 0);
    return out;
  }

  /// Single-output convenience.
  bool evaluate1(const Bits& input) const { return evaluate(input).get(0); }

  CircuitStats measure() const {
    CircuitStats st;
    std::vector<std::uint32_t> depth(gates_.size(), 0);
    for (std::uint32_t id = 0; id < gates_.size(); ++id) {
      const Gate& g = gates_[id];
      if (g.kind == GateKind::And || g.kind == GateKind::Or) {
        ++st.size;
        std::uint32_t d = 0;
        for (auto c : g.children) d = std::max(d, depth[c]);
        depth[id] = d + 1;
      }
    }
    for (auto o : outputs_) st.depth = std::max<std::size_t>(st.depth, depth[o]);
    return st;
  }

 private:
  std::uint32_t add(GateKind k, std::vector<std::uint32_t> children) {
    gates_.push_back(Gate{k, std::move(children)});
    return std::uint32_t(gates_.size() - 1);
  }

  friend Circuit compose(const Circuit&, const Circuit&);
  friend Circuit negate_inputs(const Circuit&);

  std::size_t input_width_ = 0;
  std::vector<Gate> gates_;
  std::vector<std::uint32_t> outputs_;
};

namespace detail {

/// De Morgan dual of the cone of `src_id`, appended to `dst`. Leaf
/// polarities flip, AND/OR swap; the result computes the complement of
/// the source gate. `dual_map` memoizes per source gate, `copy_map`
/// holds the already-copied positive gates.
inline std::uint32_t append_dual(const Circuit& src, std::uint32_t src_id,
                                 Circuit& dst,
                                 std::vector<std::int64_t>& dual_map) {
  if (dual_map[src_id] >= 0) return std::uint32_t(dual_map[src_id]);
  const Gate& g = src.gates()[src_id];
  std::uint32_t id;
  switch (g.kind) {
    case GateKind::Input: id = dst.add_neg_input(g.children[0]); break;
    case GateKind::NegInput: id = dst.add_input(g.children[0]); break;
    case GateKind::Const0: id = dst.add_const(true); break;
    case GateKind::Const1: id = dst.add_const(false); break;
    case GateKind::And:
    case GateKind::Or: {
      std::vector<std::uint32_t> kids;
      kids.reserve(g.children.size());
      for (auto c : g.children) kids.push_back(append_dual(src, c, dst, dual_map));
      id = (g.kind == GateKind::And) ? dst.add_or(std::move(kids))
                                     : dst.add_and(std::move(kids));
      break;
    }
    default: throw CircuitError("unreachable");
  }
  dual_map[src_id] = id;
  return id;
}

/// Drops gates unreachable from the outputs and renumbers densely.
inline Circuit sweep_dead_gates(const Circuit& c) {
  std::vector<bool> live(c.gates().size(), false);
  std::vector<std::uint32_t> stack(c.outputs().begin(), c.outputs().end());
  while (!stack.empty()) {
    std::uint32_t id = stack.back();
    stack.pop_back();
    if (live[id]) continue;
    live[id] = true;
    const Gate& g = c.gates()[id];
    if (g.kind == GateKind::And || g.kind == GateKind::Or)
      for (auto ch : g.children) stack.push_back(ch);
  }
  Circuit out(c.input_width());
  std::vector<std::uint32_t> remap(c.gates().size(), 0);
  for (std::uint32_t id = 0; id < c.gates().size(); ++id) {
    if (!live[id]) continue;
    const Gate& g = c.gates()[id];
    switch (g.kind) {
      case GateKind::Input: remap[id] = out.add_input(g.children[0]); break;
      case GateKind::NegInput:
        remap[id] = out.add_neg_input(g.children[0]);
        break;
      case GateKind::Const0: remap[id] = out.add_const(false); break;
      case GateKind::Const1: remap[id] = out.add_const(true); break;
      case GateKind::And:
      case GateKind::Or: {
        std::vector<std::uint32_t> kids;
        kids.reserve(g.children.size());
        for (auto ch : g.children) kids.push_back(remap[ch]);
        remap[id] = (g.kind == GateKind::And) ? out.add_and(std::move(kids))
                                              : out.add_or(std::move(kids));
        break;
      }
    }
  }
  std::vector<std::uint32_t> outs;
  outs.reserve(c.outputs().size());
  for (auto o : c.outputs()) outs.push_back(remap[o]);
  out.set_outputs(std::move(outs));
  return out;
}

}  // namespace detail

/// compose(outer, inner): feeds inner's outputs into outer's inputs, so
/// evaluate(compose(A,B), x) == evaluate(A, evaluate(B, x)). Outer input
/// leaves are rewired onto inner output gates; negated leaves take the
/// De Morgan dual cone of the inner output, keeping negations at the
/// input level. Unreferenced inner cones are swept, so when each inner
/// output is used in a single polarity the gate count is exactly
/// size(outer) + size(inner).
inline Circuit compose(const Circuit& outer, const Circuit& inner) {
  if (outer.input_width() != inner.output_count())
    throw CircuitError("compose: outer width " +
                       std::to_string(outer.input_width()) +
                       " != inner output count " +
                       std::to_string(inner.output_count()));
  Circuit out(inner.input_width());
  out.gates_ = inner.gates_;
  std::vector<std::int64_t> dual_map(inner.gates_.size(), -1);
  std::vector<std::uint32_t> remap(outer.gates_.size(), 0);
  for (std::uint32_t id = 0; id < outer.gates_.size(); ++id) {
    const Gate& g = outer.gates_[id];
    switch (g.kind) {
      case GateKind::Input:
        remap[id] = inner.outputs_[g.children[0]];
        break;
      case GateKind::NegInput:
        remap[id] = detail::append_dual(inner, inner.outputs_[g.children[0]],
                                        out, dual_map);
        break;
      case GateKind::Const0:
      case GateKind::Const1:
        remap[id] = out.add_const(g.kind == GateKind::Const1);
        break;
      case GateKind::And:
      case GateKind::Or: {
        std::vector<std::uint32_t> kids;
        kids.reserve(g.children.size());
        for (auto c : g.children) kids.push_back(remap[c]);
        remap[id] = (g.kind == GateKind::And) ? out.add_and(std::move(kids))
                                              : out.add_or(std::move(kids));
        break;
      }
    }
  }
  std::vector<std::uint32_t> outs;
  outs.reserve(outer.outputs_.size());
  for (auto o : outer.outputs_) outs.push_back(remap[o]);
  out.set_outputs(std::move(outs));
  return detail::sweep_dead_gates(out);
}

/// Identity wiring: N inputs passed through as N outputs. Size 0, depth 0.
inline Circuit identity_circuit(std::size_t n) {
  Circuit c(n);
  std::vector<std::uint32_t> outs;
  outs.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    outs.push_back(c.add_input(std::uint32_t(i)));
  c.set_outputs(std::move(outs));
  return c;
}

}  // namespace sharplab
