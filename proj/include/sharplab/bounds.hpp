#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>

#include "sharplab/thresholds.hpp"

namespace sharplab {

/// Inputs to the depth/size lower-bound formulas. All logarithms are
/// base 2. The universal constants are unspecified by the theory, so
/// they default to 1 and every output is "up to universal constants".
struct BoundInput {
  std::uint64_t n_bits = 0;  // N
  double epsilon = 0.0;      // window size
  double delta = 0.0;        // jump size
  double p_c = 0.0;          // threshold location
  int depth = -1;            // optional circuit depth (size bound needs it)
  double c1 = 1.0, c2 = 1.0;

  double beta() const { return std::min(p_c, 1.0 - p_c); }

  void validate() const {
    if (!(epsilon > 0.0 && epsilon < 1.0))
      throw std::invalid_argument("bounds: epsilon must lie in (0,1)");
    if (!(delta > 0.0 && delta < 1.0))
      throw std::invalid_argument("bounds: delta must lie in (0,1)");
    if (!(p_c > 0.0 && p_c < 1.0))
      throw std::invalid_argument("bounds: p_c must lie in (0,1)");
  }

  /// Advisory hypothesis flags; the asymptotic conditions have no exact
  /// finite-N form, so these are proxies, not hard errors.
  bool beta_polynomially_small() const {
    return beta() <= std::pow(double(n_bits), -0.01);
  }
  bool epsilon_small_enough() const {
    return epsilon * std::log2(1.0 / beta()) / (1.0 - p_c) <= 0.1;
  }

  static BoundInput from_report(const ThresholdReport& rep, int depth = -1) {
    BoundInput in;
    in.n_bits = rep.width;
    in.epsilon = rep.epsilon;
    in.delta = rep.delta;
    in.p_c = rep.p_c;
    in.depth = depth;
    return in;
  }
};

/// The quantity controlling both bounds:
/// delta (1 - p_c) / (epsilon log2(1/beta)).
inline double key_quantity(const BoundInput& in) {
  in.validate();
  const double beta = in.beta();
  const double log_term = std::log2(1.0 / beta);
  return in.delta * (1.0 - in.p_c) / (in.epsilon * log_term);
}

struct DepthBound {
  double rhs = 0.0;     // lower bound on the depth
  bool trivial = false;  // key quantity <= 1 makes the bound vacuous
};

/// d >= log2(Q) / (2 log2 log2 N) - 3 with Q the key quantity.
inline DepthBound depth_bound(const BoundInput& in) {
  if (in.n_bits < 16)
    throw std::invalid_argument("depth_bound: need N >= 16 for log log N");
  const double q = key_quantity(in);
  DepthBound out;
  out.rhs = std::log2(q) / (2.0 * std::log2(std::log2(double(in.n_bits)))) - 3.0;
  out.trivial = q <= 1.0;
  return out;
}

struct SizeBound {
  double value = 0.0;  // c1 exp(c2 Q^{1/(d+3)}); may overflow to inf
  double log2_value = 0.0;
};

/// s >= c1 exp(c2 Q^{1/(d+3)}), also returned in log2 form since the
/// value itself overflows quickly.
inline SizeBound size_bound(const BoundInput& in) {
  if (in.depth < 0)
    throw std::invalid_argument("size_bound: depth is required");
  const double q = key_quantity(in);
  const double expo = in.c2 * std::pow(q, 1.0 / double(in.depth + 3));
  SizeBound out;
  out.log2_value = std::log2(in.c1) + expo / std::numbers::ln2;
  out.value = in.c1 * std::exp(expo);
  return out;
}

struct AoNBounds {
  double ratio = 0.0;      // (1 - p_IT) / (epsilon log2(1/beta))
  double depth_rhs = 0.0;  // log2(ratio) / (2 log2 log2 N) - 6
  double size_rhs_log2 = 0.0;
  double size_rhs = 0.0;
  bool hypothesis_flag = false;  // epsilon not small against (1-p_IT)/log 1/beta
};

/// All-or-Nothing variants: the jump is pinned at Theta(1) by the 0.8
/// recovery gap, the exponent offset moves from 3 to 6.
inline AoNBounds aon_bounds(std::uint64_t n_bits, double epsilon, double p_it,
                            int depth, double c2 = 1.0, double c3 = 1.0) {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw std::invalid_argument("aon_bounds: epsilon must lie in (0,1)");
  if (!(p_it > 0.0 && p_it < 1.0))
    throw std::invalid_argument("aon_bounds: p_it must lie in (0,1)");
  if (n_bits < 16)
    throw std::invalid_argument("aon_bounds: need N >= 16 for log log N");
  const double beta = std::min(p_it, 1.0 - p_it);
  const double log_term = std::log2(1.0 / beta);
  AoNBounds out;
  out.ratio = (1.0 - p_it) / (epsilon * log_term);
  out.hypothesis_flag = epsilon >= (1.0 - p_it) / log_term * 0.1;
  out.depth_rhs =
      std::log2(out.ratio) / (2.0 * std::log2(std::log2(double(n_bits)))) - 6.0;
  const double expo = c3 * std::pow(out.ratio, 1.0 / double(depth + 6));
  out.size_rhs_log2 = std::log2(c2) + expo / std::numbers::ln2;
  out.size_rhs = c2 * std::exp(expo);
  return out;
}

}  // namespace sharplab
