#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>

#include "sharplab/bits.hpp"
#include "sharplab/circuit.hpp"

namespace sharplab {

enum class Monotonicity { Unknown, Increasing, Decreasing, No };

/// A Boolean function given as an evaluator plus input width. Two entry
/// points: `eval_mask` on packed inputs (exact enumeration, width <= 63)
/// and `eval_ones` on a sparse list of one-positions (Monte Carlo at any
/// width). `expectation` is the analytic E_p f when a closed form exists.
struct FunctionOracle {
  std::string name;
  std::uint64_t width = 0;
  std::function<bool(std::uint64_t)> eval_mask;  // null when width > 63
  std::function<bool(std::span<const std::uint32_t>)> eval_ones;
  Monotonicity monotone = Monotonicity::Unknown;
  std::function<double(double)> expectation;  // null when no closed form

  bool has_mask_eval() const { return bool(eval_mask); }
  bool known_monotone() const {
    return monotone == Monotonicity::Increasing ||
           monotone == Monotonicity::Decreasing;
  }
};

inline FunctionOracle make_mask_oracle(
    std::string name, std::uint64_t width,
    std::function<bool(std::uint64_t)> f,
    Monotonicity monotone = Monotonicity::Unknown) {
  FunctionOracle o;
  o.name = std::move(name);
  o.width = width;
  o.eval_mask = f;
  o.eval_ones = [f](std::span<const std::uint32_t> ones) {
    std::uint64_t m = 0;
    for (auto i : ones) m |= std::uint64_t(1) << i;
    return f(m);
  };
  o.monotone = monotone;
  return o;
}

/// Wraps a single-output circuit as an oracle.
inline FunctionOracle circuit_oracle(std::shared_ptr<const Circuit> c,
                                     std::string name = "circuit") {
  FunctionOracle o;
  o.name = std::move(name);
  o.width = c->input_width();
  if (c->input_width() <= 63) {
    o.eval_mask = [c](std::uint64_t mask) {
      return c->evaluate1(Bits::from_mask(mask, c->input_width()));
    };
  }
  o.eval_ones = [c](std::span<const std::uint32_t> ones) {
    return c->evaluate1(Bits::from_ones(ones, c->input_width()));
  };
  return o;
}

inline FunctionOracle circuit_oracle(Circuit c, std::string name = "circuit") {
  return circuit_oracle(std::make_shared<const Circuit>(std::move(c)),
                        std::move(name));
}

}  // namespace sharplab
