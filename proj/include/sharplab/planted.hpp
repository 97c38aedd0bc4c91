#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "sharplab/graph.hpp"
#include "sharplab/rng.hpp"
#include "sharplab/stats.hpp"

namespace sharplab {

inline constexpr std::uint32_t kPlantedMaxVertices = 30;
inline constexpr std::uint64_t kCliqueCountCap = 10'000'000;

/// One draw of the planted k-clique observation Y = S or X: S the edge
/// set of a uniform k-subset, X an independent Bern(p) noise mask.
struct PlantedInstance {
  std::uint32_t n = 0, k = 0;
  double p = 0.0;
  std::vector<std::uint32_t> planted_vertices;  // sorted
  Bits s_edges, x_noise, y;
};

inline PlantedInstance sample_instance(std::uint32_t n, std::uint32_t k,
                                       double p, std::uint64_t master_seed,
                                       std::uint64_t stream_id = 0) {
  if (k > n) throw std::invalid_argument("sample_instance: k > n");
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("sample_instance: p must lie in (0,1)");
  Rng rng(master_seed, stream_id);
  PlantedInstance inst;
  inst.n = n;
  inst.k = k;
  inst.p = p;
  inst.planted_vertices = sample_subset(rng, n, k);
  inst.s_edges = Bits(edge_count(n));
  for (std::uint32_t a = 0; a < k; ++a)
    for (std::uint32_t b = a + 1; b < k; ++b)
      inst.s_edges.set(
          edge_index(n, inst.planted_vertices[a], inst.planted_vertices[b]));
  inst.x_noise = Bits(edge_count(n));
  sample_bits(rng, p, inst.x_noise);
  inst.y = inst.s_edges;
  for (auto e : inst.x_noise.ones()) inst.y.set(e);
  return inst;
}

namespace detail {

/// Recursive k-clique extension over uint32 adjacency rows (n <= 30).
/// Calls cb(vertex_mask) per clique; aborts past the count cap.
template <typename Cb>
bool enumerate_k_cliques(const std::vector<std::uint32_t>& adj, std::uint32_t n,
                         std::uint32_t k, Cb&& cb) {
  std::uint64_t found = 0;
  // stack of (member_mask, candidate_mask, depth)
  struct Frame {
    std::uint32_t members, cand;
    std::uint32_t depth;
  };
  std::vector<Frame> stack;
  stack.push_back({0u, (n == 32) ? ~0u : ((1u << n) - 1u), 0});
  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    if (f.depth == k) {
      if (++found > kCliqueCountCap) return false;
      cb(f.members);
      continue;
    }
    std::uint32_t cand = f.cand;
    while (cand) {
      std::uint32_t v = std::uint32_t(std::countr_zero(cand));
      cand &= cand - 1;
      // Remaining candidates are restricted to indices above v, so each
      // clique is produced exactly once.
      std::uint32_t rest = cand & adj[v];
      if (std::popcount(rest) + f.depth + 1 < k) continue;
      stack.push_back({f.members | (1u << v), rest, f.depth + 1});
    }
    if (k - 0 > 0 && f.depth + std::popcount(f.cand) < k) continue;
  }
  return true;
}

inline std::vector<std::uint32_t> adjacency_rows(const GraphInput& g) {
  std::vector<std::uint32_t> adj(g.n, 0);
  for (auto e : g.edges.ones()) {
    auto [i, j] = edge_unindex(g.n, e);
    adj[i] |= 1u << j;
    adj[j] |= 1u << i;
  }
  return adj;
}

inline void require_planted_size(std::uint32_t n) {
  if (n > kPlantedMaxVertices)
    throw std::invalid_argument(
        "planted: n > 30 is outside the exact clique-enumeration regime");
}

}  // namespace detail

struct CliqueCounts {
  std::uint64_t total = 0;
  /// by_overlap[l] = k-cliques sharing exactly l vertices with the
  /// planted set; the planted clique itself sits at l = k.
  std::vector<std::uint64_t> by_overlap;
  bool overflow = false;  // enumeration aborted past the cap
};

inline CliqueCounts count_cliques(const GraphInput& y, std::uint32_t k) {
  detail::require_planted_size(y.n);
  auto adj = detail::adjacency_rows(y);
  CliqueCounts out;
  bool ok = detail::enumerate_k_cliques(adj, y.n, k,
                                        [&](std::uint32_t) { ++out.total; });
  out.overflow = !ok;
  return out;
}

inline CliqueCounts count_cliques_by_overlap(
    const GraphInput& y, std::uint32_t k,
    const std::vector<std::uint32_t>& planted_vertices) {
  detail::require_planted_size(y.n);
  std::uint32_t planted_mask = 0;
  for (auto v : planted_vertices) planted_mask |= 1u << v;
  auto adj = detail::adjacency_rows(y);
  CliqueCounts out;
  out.by_overlap.assign(k + 1, 0);
  bool ok = detail::enumerate_k_cliques(adj, y.n, k, [&](std::uint32_t members) {
    ++out.total;
    ++out.by_overlap[std::popcount(members & planted_mask)];
  });
  out.overflow = !ok;
  return out;
}

struct MapRecovery {
  std::uint64_t clique_count = 0;
  bool overflow = false;
  bool ambiguous = false;  // more than one k-clique (or enumeration cap hit)
  std::vector<std::uint32_t> estimate;  // the clique, or a posterior draw
};

/// MAP recovery given Y: the posterior over S is uniform on the
/// k-cliques of Y, so recovery succeeds exactly when Y has a unique
/// k-clique. With several cliques the returned estimate is a uniform
/// posterior draw (reservoir sample over the enumeration).
inline MapRecovery map_recover(const GraphInput& y, std::uint32_t k, Rng& rng) {
  detail::require_planted_size(y.n);
  auto adj = detail::adjacency_rows(y);
  MapRecovery out;
  std::uint32_t kept = 0;
  bool ok = detail::enumerate_k_cliques(adj, y.n, k, [&](std::uint32_t members) {
    ++out.clique_count;
    // Reservoir of size 1: keep the j-th clique with probability 1/j.
    if (rng.below(out.clique_count) == 0) kept = members;
  });
  out.overflow = !ok;
  if (out.clique_count == 0)
    throw std::runtime_error(
        "map_recover: no k-clique present; genuine instances always contain "
        "the planted clique, so the input is corrupted");
  out.ambiguous = out.overflow || out.clique_count > 1;
  for (std::uint32_t v = 0; v < y.n; ++v)
    if (kept & (1u << v)) out.estimate.push_back(v);
  return out;
}

/// First-moment information-theoretic point C(n,k)^{-1/C(k,2)}, via
/// log-gamma so nothing under- or overflows.
inline double p_it_analytic(std::uint32_t n, std::uint32_t k) {
  if (k < 2) throw std::invalid_argument("p_it_analytic: need k >= 2");
  if (k > n) throw std::invalid_argument("p_it_analytic: k > n");
  const double choose2 = double(k) * double(k - 1) / 2.0;
  return std::exp(-log_binom(double(n), double(k)) / choose2);
}

/// The displayed overlap sum bounding E[sum_{l<k} Z_l] at
/// p = (1-eps) p_IT:
///   sum_l (1-eps)^{C(k,2)-C(l,2)} C(k,l) C(n-k,k-l) C(n,k)^{-1+l^2/k^2},
/// evaluated in log space. The "all" phase needs this below 0.01.
inline double first_moment_bound(std::uint32_t n, std::uint32_t k, double eps) {
  if (k < 2 || k > n) throw std::invalid_argument("first_moment_bound: bad k");
  if (!(eps > 0.0 && eps < 1.0))
    throw std::invalid_argument("first_moment_bound: eps must lie in (0,1)");
  const double log1meps = std::log1p(-eps);
  const double log_cnk = log_binom(double(n), double(k));
  std::vector<double> terms;
  terms.reserve(k);
  for (std::uint32_t l = 0; l < k; ++l) {
    const double ck2 = double(k) * double(k - 1) / 2.0;
    const double cl2 = double(l) * (double(l) - 1.0) / 2.0;
    const double lt = (ck2 - cl2) * log1meps + log_binom(double(k), double(l)) +
                      log_binom(double(n - k), double(k - l)) +
                      (-1.0 + double(l) * double(l) / (double(k) * double(k))) *
                          log_cnk;
    terms.push_back(lt);
  }
  return std::exp(log_sum_exp(terms));
}

/// Planting-trick likelihood ratio between the planted and null laws
/// of Y: Z(Y) / (C(n,k) p^{C(k,2)}). E_null of this is exactly 1.
inline double likelihood_ratio(const GraphInput& y, std::uint32_t k, double p) {
  detail::require_planted_size(y.n);
  auto counts = count_cliques(y, k);
  if (counts.total == 0) return 0.0;
  const double choose2 = double(k) * double(k - 1) / 2.0;
  const double log_den = log_binom(double(y.n), double(k)) + choose2 * std::log(p);
  return std::exp(std::log(double(counts.total)) - log_den);
}

struct AoNPoint {
  double p = 0.0;
  double success = 0.0;
  Interval ci;
  std::uint64_t trials = 0;
};

struct AoNCurve {
  std::uint32_t n = 0, k = 0;
  double p_it = 0.0;  // analytic first-moment point
  std::vector<AoNPoint> points;
  std::uint64_t seed = 0;
};

/// Empirical exact-recovery curve: per grid point, the fraction of
/// trials where the planted set is the unique k-clique of Y and is
/// returned by MAP. Trials run on per-(point, trial) derived streams.
inline AoNCurve aon_curve(std::uint32_t n, std::uint32_t k,
                          const std::vector<double>& p_grid,
                          std::uint64_t trials, std::uint64_t seed,
                          int jobs = 1) {
  detail::require_planted_size(n);
  for (std::size_t i = 0; i + 1 < p_grid.size(); ++i)
    if (!(p_grid[i] < p_grid[i + 1]))
      throw std::invalid_argument("aon_curve: p grid must increase strictly");
  AoNCurve curve;
  curve.n = n;
  curve.k = k;
  curve.p_it = p_it_analytic(n, k);
  curve.seed = seed;
  curve.points.resize(p_grid.size());
  std::vector<std::uint64_t> wins(p_grid.size() * trials, 0);
  parallel_for(p_grid.size() * trials, jobs, [&](std::size_t task) {
    const std::size_t pi = task / trials;
    const std::uint64_t id = stream_child(900 + pi, task % trials);
    PlantedInstance inst = sample_instance(n, k, p_grid[pi], seed, id);
    Rng rng(seed, stream_child(id, 1));
    MapRecovery rec = map_recover(GraphInput(n, inst.y), k, rng);
    bool success = !rec.ambiguous && rec.estimate == inst.planted_vertices;
    wins[task] = success ? 1 : 0;
  });
  for (std::size_t pi = 0; pi < p_grid.size(); ++pi) {
    std::uint64_t w = 0;
    for (std::uint64_t t = 0; t < trials; ++t) w += wins[pi * trials + t];
    curve.points[pi] = {p_grid[pi], double(w) / double(trials),
                        wilson_interval(w, trials), trials};
  }
  return curve;
}

/// Default grid for the AoN experiment: geometric sweep from well below
/// the analytic point up to near-saturation noise.
inline std::vector<double> aon_default_grid(std::uint32_t n, std::uint32_t k,
                                            std::size_t points = 10) {
  const double pit = p_it_analytic(n, k);
  const double lo = 0.25 * pit;
  const double hi = 0.99;
  std::vector<double> grid(points);
  for (std::size_t i = 0; i < points; ++i)
    grid[i] = lo * std::pow(hi / lo, double(i) / double(points - 1));
  return grid;
}

}  // namespace sharplab
