#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "sharplab/circuit.hpp"
#include "sharplab/fourier.hpp"
#include "sharplab/oracle.hpp"
#include "sharplab/rng.hpp"
#include "sharplab/stats.hpp"

namespace sharplab {

struct EstimateResult {
  double estimate = 0.0;
  Interval ci;
  std::uint64_t samples = 0;
};

/// Unbiased Monte Carlo estimate of E_p f with a Wilson interval.
/// Trials are grouped into fixed-size chunks, each on its own derived
/// RNG stream, so the result is byte-identical for any `jobs`.
inline EstimateResult estimate_expectation(const FunctionOracle& f, double p,
                                           std::uint64_t samples,
                                           std::uint64_t master_seed,
                                           std::uint64_t stream_id = 0,
                                           int jobs = 1) {
  if (samples < 100)
    throw std::invalid_argument("estimate_expectation: need samples >= 100");
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("estimate_expectation: p must lie in (0,1)");
  constexpr std::uint64_t kChunk = 256;
  const std::uint64_t chunks = (samples + kChunk - 1) / kChunk;
  std::vector<std::uint64_t> hits(chunks, 0);
  parallel_for(chunks, jobs, [&](std::size_t ci) {
    Rng rng(master_seed, stream_child(stream_id, ci));
    const std::uint64_t lo = ci * kChunk;
    const std::uint64_t hi = std::min(samples, lo + kChunk);
    std::uint64_t h = 0;
    for (std::uint64_t t = lo; t < hi; ++t) {
      auto ones = sample_ones(rng, f.width, p);
      if (f.eval_ones(ones)) ++h;
    }
    hits[ci] = h;
  });
  std::uint64_t total = 0;
  for (auto h : hits) total += h;
  EstimateResult r;
  r.samples = samples;
  r.estimate = double(total) / double(samples);
  r.ci = wilson_interval(total, samples);
  return r;
}

/// Best available evaluation of E_p f without Monte Carlo: analytic
/// closed form first, exact enumeration second. Returns false when
/// neither applies.
inline bool try_expectation_exact(const FunctionOracle& f, double p,
                                  double& out) {
  if (f.expectation) {
    out = f.expectation(p);
    return true;
  }
  if (f.has_mask_eval() && f.width <= kExactWidthLimit) {
    out = expectation_exact(f, p);
    return true;
  }
  return false;
}

struct MonteCarloOptions {
  std::uint64_t samples_base = 2000;   // first estimate at a bisection point
  std::uint64_t samples_max = 32000;   // per-point escalation cap
  std::uint64_t budget = 4'000'000;    // total MC samples per search
  std::uint64_t seed = 1;
  int jobs = 1;
};

struct SweepRow {
  double p = 0.0;
  double estimate = 0.0;
  Interval ci;
  std::uint64_t samples = 0;
};

struct PAlphaResult {
  double p = 0.0;
  double achieved = 0.0;  // E at the returned point (exact or estimated)
  bool exact = false;
  bool undetermined = false;
  std::uint64_t samples_used = 0;
  std::vector<SweepRow> trace;
};

/// Unique p with E_p f = alpha, for monotone f. Exact bisection when a
/// closed form or exhaustive enumeration is available; otherwise Monte
/// Carlo bisection with sequential sample escalation: samples double
/// until the confidence interval separates the decision, and a point
/// the interval cannot separate from alpha is accepted as the root (the
/// tie rule). Exhausting the total budget with a wide bracket returns
/// the midpoint flagged undetermined.
inline PAlphaResult find_p_alpha(const FunctionOracle& f, double alpha,
                                 double tol = 1e-10,
                                 const MonteCarloOptions& opt = {},
                                 std::uint64_t stream_id = 0) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("find_p_alpha: alpha must lie in (0,1)");
  if (!f.known_monotone())
    throw std::invalid_argument("find_p_alpha: oracle '" + f.name +
                                "' is not flagged monotone");
  const bool increasing = f.monotone == Monotonicity::Increasing;
  PAlphaResult res;
  double lo = 1e-12, hi = 1.0 - 1e-12;

  double probe;
  if (try_expectation_exact(f, 0.5, probe)) {
    res.exact = true;
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
      double mid = 0.5 * (lo + hi);
      double e;
      try_expectation_exact(f, mid, e);
      if (std::abs(e - alpha) <= tol) {
        res.p = mid;
        res.achieved = e;
        return res;
      }
      if ((e < alpha) == increasing) lo = mid;
      else hi = mid;
    }
    res.p = 0.5 * (lo + hi);
    try_expectation_exact(f, res.p, res.achieved);
    return res;
  }

  std::uint64_t used = 0, point = 0;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    std::uint64_t s = opt.samples_base;
    while (true) {
      if (used + s > opt.budget) {
        res.p = mid;
        res.achieved = alpha;
        res.undetermined = true;
        res.samples_used = used;
        return res;
      }
      auto est = estimate_expectation(f, mid, s, opt.seed,
                                      stream_child(stream_id, point++),
                                      opt.jobs);
      used += s;
      res.trace.push_back({mid, est.estimate, est.ci, s});
      if (est.ci.lo > alpha || est.ci.hi < alpha) {
        if ((est.estimate < alpha) == increasing) lo = mid;
        else hi = mid;
        break;
      }
      if (s >= opt.samples_max) {
        // The interval straddles alpha at the escalation cap: accept mid.
        res.p = mid;
        res.achieved = est.estimate;
        res.samples_used = used;
        return res;
      }
      s *= 2;
    }
  }
  res.p = 0.5 * (lo + hi);
  res.achieved = alpha;
  res.samples_used = used;
  return res;
}

enum class Classification { Sharp, Coarse, Undetermined };

inline const char* classification_name(Classification c) {
  switch (c) {
    case Classification::Sharp: return "sharp";
    case Classification::Coarse: return "coarse";
    case Classification::Undetermined: return "undetermined";
  }
  return "?";
}

/// Finite-size threshold measurements. epsilon is the relative
/// half-width (p_{1-xi} - p_xi) / (2 p_c), matching the (1 +/- eps)p_c
/// window parameterization; delta = 1 - 2 xi by construction. The sharp
/// vs coarse flag is a tool convention on the measured relative window
/// (< 0.2 counts as sharp), not an asymptotic claim.
struct ThresholdReport {
  std::string oracle;
  std::uint64_t width = 0;
  double xi = 0.25;
  std::map<double, double> p_points;  // alpha -> p_alpha
  double p_c = 0.0;
  double epsilon = 0.0;
  double delta = 0.0;
  double beta = 0.0;  // min(p_c, 1-p_c)
  /// Window re-expressed at the negated-input threshold 1-p_c
  /// (epsilon * p_c / (1-p_c)); meaningful when p_c > 1/2.
  double epsilon_negated = 0.0;
  Classification classification = Classification::Undetermined;
  bool exact = false;
  std::vector<SweepRow> sweep;
  std::uint64_t seed = 0;
};

inline constexpr double kSharpWindowCutoff = 0.2;

inline ThresholdReport window(const FunctionOracle& f, double xi,
                              const MonteCarloOptions& opt = {},
                              std::uint64_t stream_id = 0) {
  if (!(xi > 0.0 && xi < 0.5))
    throw std::invalid_argument("window: xi must lie in (0, 1/2)");
  ThresholdReport rep;
  rep.oracle = f.name;
  rep.width = f.width;
  rep.xi = xi;
  rep.seed = opt.seed;
  auto mid = find_p_alpha(f, 0.5, 1e-10, opt, stream_child(stream_id, 0));
  auto lo = find_p_alpha(f, xi, 1e-10, opt, stream_child(stream_id, 1));
  auto hi = find_p_alpha(f, 1.0 - xi, 1e-10, opt, stream_child(stream_id, 2));
  rep.exact = mid.exact && lo.exact && hi.exact;
  for (auto* r : {&mid, &lo, &hi})
    for (auto& row : r->trace) rep.sweep.push_back(row);
  rep.p_points[xi] = lo.p;
  rep.p_points[0.5] = mid.p;
  rep.p_points[1.0 - xi] = hi.p;
  rep.p_c = mid.p;
  rep.delta = 1.0 - 2.0 * xi;
  rep.epsilon = std::abs(hi.p - lo.p) / (2.0 * mid.p);
  rep.beta = std::min(rep.p_c, 1.0 - rep.p_c);
  rep.epsilon_negated = rep.epsilon * rep.p_c / (1.0 - rep.p_c);
  if (mid.undetermined || lo.undetermined || hi.undetermined)
    rep.classification = Classification::Undetermined;
  else
    rep.classification = rep.epsilon < kSharpWindowCutoff
                             ? Classification::Sharp
                             : Classification::Coarse;
  return rep;
}

struct ScalingMember {
  std::uint64_t size = 0;
  ThresholdReport report;
};

struct ScalingResult {
  LineFit fit;  // slope of log(epsilon) against log(size)
  std::vector<ScalingMember> members;
};

/// Least-squares slope of log(window) vs log(size) across a family.
/// Family members are measured as independent tasks on derived streams,
/// so --jobs does not change the numbers.
inline ScalingResult window_scaling_exponent(
    const std::function<FunctionOracle(std::uint64_t)>& family,
    const std::vector<std::uint64_t>& sizes, double xi,
    const MonteCarloOptions& opt = {}) {
  if (sizes.size() < 4)
    throw std::invalid_argument("window_scaling_exponent: need >= 4 sizes");
  ScalingResult out;
  out.members.resize(sizes.size());
  parallel_for(sizes.size(), opt.jobs, [&](std::size_t i) {
    MonteCarloOptions local = opt;
    local.jobs = 1;
    FunctionOracle f = family(sizes[i]);
    out.members[i] = {sizes[i], window(f, xi, local, stream_child(1000, i))};
  });
  std::vector<double> xs, ys;
  for (auto& m : out.members) {
    if (m.report.classification == Classification::Undetermined)
      throw std::runtime_error(
          "window_scaling_exponent: undetermined window at size " +
          std::to_string(m.size));
    xs.push_back(std::log(double(m.size)));
    ys.push_back(std::log(m.report.epsilon));
  }
  out.fit = fit_line(xs, ys);
  return out;
}

struct AgreementReport {
  double p1 = 0.0, p2 = 0.0;           // E_{p1} f = xi, E_{p2} f = 1 - xi
  double disagreement_p1 = 0.0;        // E |C - f| at p1
  double disagreement_p2 = 0.0;
  Interval ci_p1, ci_p2;
  std::uint64_t samples = 0;
};

/// Measures how well a circuit computes f on average: disagreement
/// rates at the two biases where E_p f hits xi and 1-xi.
inline AgreementReport agrees_on_average(const Circuit& c,
                                         const FunctionOracle& f, double xi,
                                         std::uint64_t samples,
                                         const MonteCarloOptions& opt = {},
                                         std::uint64_t stream_id = 7) {
  if (c.input_width() != f.width)
    throw std::invalid_argument("agrees_on_average: width mismatch");
  AgreementReport rep;
  rep.samples = samples;
  rep.p1 = find_p_alpha(f, xi, 1e-10, opt, stream_child(stream_id, 0)).p;
  rep.p2 = find_p_alpha(f, 1.0 - xi, 1e-10, opt, stream_child(stream_id, 1)).p;
  auto disagree = [&](double p, std::uint64_t sub) {
    constexpr std::uint64_t kChunk = 64;
    const std::uint64_t chunks = (samples + kChunk - 1) / kChunk;
    std::vector<std::uint64_t> bad(chunks, 0);
    parallel_for(chunks, opt.jobs, [&](std::size_t chunk) {
      Rng rng(opt.seed, stream_child(stream_child(stream_id, sub), chunk));
      const std::uint64_t lo = chunk * kChunk;
      const std::uint64_t hi = std::min(samples, lo + kChunk);
      std::uint64_t b = 0;
      for (std::uint64_t t = lo; t < hi; ++t) {
        auto ones = sample_ones(rng, f.width, p);
        bool yf = f.eval_ones(ones);
        bool yc = c.evaluate1(Bits::from_ones(ones, f.width));
        if (yf != yc) ++b;
      }
      bad[chunk] = b;
    });
    std::uint64_t total = 0;
    for (auto b : bad) total += b;
    return std::pair<double, Interval>(double(total) / double(samples),
                                       wilson_interval(total, samples));
  };
  std::tie(rep.disagreement_p1, rep.ci_p1) = disagree(rep.p1, 2);
  std::tie(rep.disagreement_p2, rep.ci_p2) = disagree(rep.p2, 3);
  return rep;
}

/// Expectation sweep over a p grid (Monte Carlo), one row per point.
inline std::vector<SweepRow> sweep_expectation(const FunctionOracle& f,
                                               const std::vector<double>& grid,
                                               std::uint64_t samples,
                                               const MonteCarloOptions& opt = {},
                                               std::uint64_t stream_id = 11) {
  std::vector<SweepRow> rows(grid.size());
  parallel_for(grid.size(), opt.jobs, [&](std::size_t i) {
    auto est = estimate_expectation(f, grid[i], samples, opt.seed,
                                    stream_child(stream_id, i), 1);
    rows[i] = {grid[i], est.estimate, est.ci, est.samples};
  });
  return rows;
}

}  // namespace sharplab
