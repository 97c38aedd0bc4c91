#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "sharplab/oracle.hpp"

namespace sharplab {

/// Exact p-biased Fourier analysis by full enumeration. The default
/// width cap keeps expectation-only runs feasible at 22 bits (~4M
/// inputs) and full-spectrum runs fast up to 16.
inline constexpr std::uint64_t kExactWidthLimit = 22;
inline constexpr std::uint64_t kDenseSpectrumLimit = 16;

namespace detail {
inline void require_exact(const FunctionOracle& f,
                          std::uint64_t limit = kExactWidthLimit) {
  if (f.width > limit)
    throw std::invalid_argument("oracle '" + f.name + "' width " +
                                std::to_string(f.width) +
                                " exceeds the exact enumeration limit " +
                                std::to_string(limit));
  if (!f.eval_mask)
    throw std::invalid_argument("oracle '" + f.name +
                                "' has no packed evaluator");
}
inline void require_bias(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("bias p must lie in (0,1)");
}
}  // namespace detail

/// E_p f = sum_x f(x) p^{|x|} (1-p)^{N-|x|}.
inline double expectation_exact(const FunctionOracle& f, double p) {
  detail::require_exact(f);
  detail::require_bias(p);
  const std::uint64_t n = f.width;
  std::vector<double> w(n + 1);
  for (std::uint64_t k = 0; k <= n; ++k)
    w[k] = std::exp(double(k) * std::log(p) +
                    double(n - k) * std::log1p(-p));
  double total = 0.0;
  for (std::uint64_t x = 0; x < (std::uint64_t(1) << n); ++x)
    if (f.eval_mask(x)) total += w[std::popcount(x)];
  return total;
}

/// d/dp E_p f, in the closed form
/// sum_x f(x) p^{|x|}(1-p)^{N-|x|} (|x|/p - (N-|x|)/(1-p)).
/// Exact for non-monotone functions too, and independent of the
/// influence route, so it can sit on one side of an identity check.
inline double expectation_derivative_exact(const FunctionOracle& f, double p) {
  detail::require_exact(f);
  detail::require_bias(p);
  const std::uint64_t n = f.width;
  std::vector<double> w(n + 1);
  for (std::uint64_t k = 0; k <= n; ++k)
    w[k] = std::exp(double(k) * std::log(p) + double(n - k) * std::log1p(-p)) *
           (double(k) / p - double(n - k) / (1.0 - p));
  double total = 0.0;
  for (std::uint64_t x = 0; x < (std::uint64_t(1) << n); ++x)
    if (f.eval_mask(x)) total += w[std::popcount(x)];
  return total;
}

struct SpectrumReport {
  double p = 0.5;
  std::uint64_t width = 0;
  /// Coefficients indexed by subset bitmask. Dense for width <= 16;
  /// above that only entries with |coef| > 1e-14 are kept.
  std::vector<double> dense;
  std::map<std::uint64_t, double> sparse;
  std::vector<double> influences;
  double total_influence = 0.0;
  double expectation = 0.0;
  double derivative = 0.0;

  double coefficient(std::uint64_t subset) const {
    if (!dense.empty()) return dense[subset];
    auto it = sparse.find(subset);
    return it == sparse.end() ? 0.0 : it->second;
  }
  double sum_sq() const {
    double s = 0.0;
    if (!dense.empty())
      for (double c : dense) s += c * c;
    else
      for (auto& [_, c] : sparse) s += c * c;
    return s;
  }
  double weighted_sum_sq() const {  // sum over S of |S| fhat(S)^2
    double s = 0.0;
    if (!dense.empty())
      for (std::uint64_t m = 0; m < dense.size(); ++m)
        s += double(std::popcount(m)) * dense[m] * dense[m];
    else
      for (auto& [m, c] : sparse) s += double(std::popcount(m)) * c * c;
    return s;
  }
  /// Spectral mass above degree k.
  double tail_mass(std::uint64_t k) const {
    double s = 0.0;
    if (!dense.empty()) {
      for (std::uint64_t m = 0; m < dense.size(); ++m)
        if (std::uint64_t(std::popcount(m)) > k) s += dense[m] * dense[m];
    } else {
      for (auto& [m, c] : sparse)
        if (std::uint64_t(std::popcount(m)) > k) s += c * c;
    }
    return s;
  }
};

namespace detail {

/// In-place p-biased Walsh transform. Input a[x] = f(x); output
/// a[S] = E_p[f chi_S] with chi_S(x) = prod_{i in S} (x_i - p)/sqrt(p(1-p)).
/// One butterfly pass per coordinate: the pair (a0, a1) along bit i maps
/// to ((1-p)a0 + p a1, sqrt(p(1-p)) (a1 - a0)).
inline void biased_walsh(std::vector<double>& a, std::uint64_t n, double p) {
  const double root = std::sqrt(p * (1.0 - p));
  for (std::uint64_t i = 0; i < n; ++i) {
    const std::uint64_t bit = std::uint64_t(1) << i;
    for (std::uint64_t x = 0; x < a.size(); ++x) {
      if (x & bit) continue;
      const double a0 = a[x], a1 = a[x | bit];
      a[x] = (1.0 - p) * a0 + p * a1;
      a[x | bit] = root * (a1 - a0);
    }
  }
}

}  // namespace detail

/// Per-bit influence by the direct definition
/// (I_i)_p(f) = p(1-p) E_p (f(x^{-i},1) - f(x^{-i},0))^2,
/// enumerated over the restricted cube. Deliberately not derived from
/// the spectrum, so the spectral identity stays a genuine check.
inline std::vector<double> influences_exact(const FunctionOracle& f, double p) {
  detail::require_exact(f);
  detail::require_bias(p);
  const std::uint64_t n = f.width;
  std::vector<double> w(n + 1);
  for (std::uint64_t k = 0; k <= n; ++k)
    w[k] = std::exp(double(k) * std::log(p) +
                    double(n - k) * std::log1p(-p));
  std::vector<double> out(n, 0.0);
  for (std::uint64_t i = 0; i < n; ++i) {
    const std::uint64_t bit = std::uint64_t(1) << i;
    // Summing w over pivotal x with x_i=0 gives (1-p) E_{p}^{N-1}[diff^2],
    // so I_i = p(1-p) E[diff^2] = p * acc.
    double acc = 0.0;
    for (std::uint64_t x = 0; x < (std::uint64_t(1) << n); ++x) {
      if (x & bit) continue;
      if (f.eval_mask(x) != f.eval_mask(x | bit)) acc += w[std::popcount(x)];
    }
    out[i] = p * acc;
  }
  return out;
}

/// Full spectrum report: coefficients, influences, total influence,
/// expectation and its analytic derivative.
inline SpectrumReport spectrum(const FunctionOracle& f, double p) {
  detail::require_exact(f);
  detail::require_bias(p);
  const std::uint64_t n = f.width;
  std::vector<double> a(std::uint64_t(1) << n);
  for (std::uint64_t x = 0; x < a.size(); ++x) a[x] = f.eval_mask(x) ? 1.0 : 0.0;
  detail::biased_walsh(a, n, p);

  SpectrumReport rep;
  rep.p = p;
  rep.width = n;
  rep.expectation = a[0];  // fhat(empty) = E_p f
  if (n <= kDenseSpectrumLimit) {
    rep.dense = std::move(a);
  } else {
    for (std::uint64_t m = 0; m < a.size(); ++m)
      if (std::abs(a[m]) > 1e-14) rep.sparse.emplace(m, a[m]);
  }
  rep.influences = influences_exact(f, p);
  for (double v : rep.influences) rep.total_influence += v;
  rep.derivative = expectation_derivative_exact(f, p);
  return rep;
}

/// Exhaustive monotonicity test; feasible for width <= ~22, intended
/// for <= 12 per the corpus conventions.
inline bool is_monotone_exact(const FunctionOracle& f) {
  detail::require_exact(f);
  const std::uint64_t n = f.width;
  for (std::uint64_t i = 0; i < n; ++i) {
    const std::uint64_t bit = std::uint64_t(1) << i;
    for (std::uint64_t x = 0; x < (std::uint64_t(1) << n); ++x) {
      if (x & bit) continue;
      if (f.eval_mask(x) && !f.eval_mask(x | bit)) return false;
    }
  }
  return true;
}

struct RussoMargulisCheck {
  double lhs = 0.0;  // |d/dp E_p f|
  double rhs = 0.0;  // I_p(f) / (p(1-p))
  bool monotone = false;
};

/// One-sided derivative bound |d/dp E_p f| <= I_p(f)/(p(1-p)), with
/// equality for monotone f. Both sides come from independent
/// enumeration routes.
inline RussoMargulisCheck russo_margulis_check(const FunctionOracle& f,
                                               double p) {
  RussoMargulisCheck out;
  out.lhs = std::abs(expectation_derivative_exact(f, p));
  double total = 0.0;
  for (double v : influences_exact(f, p)) total += v;
  out.rhs = total / (p * (1.0 - p));
  out.monotone = f.known_monotone() ||
                 (f.monotone == Monotonicity::Unknown && f.width <= 12 &&
                  is_monotone_exact(f));
  return out;
}

struct LmnTailReport {
  double tail_mass = 0.0;  // sum over |S| > k of coef^2
  double bound = 0.0;      // size * 2^{-p(1-p) k^{1/(depth+2)} / 5}
  double ratio = 0.0;      // tail_mass / bound
  bool exceeds_bound = false;
};

/// Measures the spectral tail of a circuit against the depth-d tail
/// form. The universal constant in the lemma is unspecified, so this
/// reports both sides and flags violations instead of asserting.
inline LmnTailReport lmn_tail(const Circuit& c, double p, std::uint64_t k) {
  auto oracle = circuit_oracle(std::make_shared<const Circuit>(c));
  SpectrumReport rep = spectrum(oracle, p);
  auto st = c.measure();
  LmnTailReport out;
  out.tail_mass = rep.tail_mass(k);
  const double expo = std::pow(double(k), 1.0 / double(st.depth + 2));
  out.bound = double(st.size) * std::exp2(-p * (1.0 - p) * expo / 5.0);
  out.ratio = out.bound > 0.0 ? out.tail_mass / out.bound : 0.0;
  out.exceeds_bound = out.tail_mass > out.bound;
  return out;
}

}  // namespace sharplab
