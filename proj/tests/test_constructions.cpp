#include <catch_amalgamated.hpp>

#include <cmath>
#include <map>

#include "sharplab/circuit_io.hpp"
#include "sharplab/constructions.hpp"
#include "sharplab/fourier.hpp"
#include "sharplab/graph.hpp"
#include "sharplab/oracle.hpp"
#include "sharplab/rng.hpp"
#include "sharplab/stats.hpp"

using namespace sharplab;

namespace {

/// Exhaustive pushforward law of a multi-output circuit under the
/// bias-q product measure on its inputs: output-mask -> probability.
std::map<std::uint64_t, double> pushforward_law(const Circuit& c, double q) {
  const std::size_t w = c.input_width();
  REQUIRE(w <= 20);
  std::map<std::uint64_t, double> law;
  for (std::uint64_t x = 0; x < (std::uint64_t(1) << w); ++x) {
    double prob = 1.0;
    for (std::size_t i = 0; i < w; ++i)
      prob *= (x >> i) & 1 ? q : 1.0 - q;
    Bits out = c.evaluate(Bits::from_mask(x, w));
    std::uint64_t mask = 0;
    for (std::size_t i = 0; i < out.size(); ++i)
      if (out.get(i)) mask |= std::uint64_t(1) << i;
    law[mask] += prob;
  }
  return law;
}

/// Total variation distance to the bias-p product law on `n` bits.
double tv_to_product(const std::map<std::uint64_t, double>& law, double p,
                     std::size_t n) {
  double tv = 0.0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << n); ++mask) {
    double target = 1.0;
    for (std::size_t i = 0; i < n; ++i)
      target *= (mask >> i) & 1 ? p : 1.0 - p;
    auto it = law.find(mask);
    double actual = it == law.end() ? 0.0 : it->second;
    tv += std::abs(actual - target);
  }
  return tv / 2.0;
}

/// Depth-2 circuit with two outputs on 4 inputs, for augment tests.
Circuit two_output_depth2() {
  Circuit c(4);
  auto a = c.add_and({c.add_input(0), c.add_input(1)});
  auto b = c.add_and({c.add_input(2), c.add_input(3)});
  auto o1 = c.add_or({a, b});
  auto o2 = c.add_or({a, c.add_input(3)});
  c.set_outputs({o1, o2});
  return c;
}

}  // namespace

TEST_CASE("debias spec block width and p1") {
  auto s = DebiasSpec::make(4, 0.25);
  CHECK(s.block_width == 2);
  CHECK_THAT(s.p1, Catch::Matchers::WithinAbs(0.5, 1e-15));

  auto t = DebiasSpec::make(4, 1.0 / 3.0);
  CHECK(t.block_width == 2);
  CHECK_THAT(t.p1, Catch::Matchers::WithinAbs(0.57735026918962576, 1e-12));
  CHECK(t.p1 >= 0.5);
  CHECK(t.p1 < 1.0 / std::sqrt(2.0));

  // p1^bw = p0 exactly, across the p0 range.
  for (double p0 : {0.5, 0.25, 0.1, 0.03, 1e-3}) {
    auto sp = DebiasSpec::make(2, p0);
    CHECK_THAT(std::pow(sp.p1, double(sp.block_width)),
               Catch::Matchers::WithinAbs(p0, 1e-12));
    CHECK(sp.p1 >= 0.5);
    CHECK(sp.p1 < 1.0 / std::sqrt(2.0) + 1e-15);
  }

  CHECK_THROWS_AS(DebiasSpec::make(4, 0.75), std::invalid_argument);
  CHECK_THROWS_AS(DebiasSpec::make(4, 0.0), std::invalid_argument);
}

TEST_CASE("debias layer pushes the p1 law to the p0 product law") {
  for (std::size_t n : {1, 2, 3}) {
    for (double p0 : {0.5, 0.25, 0.1}) {
      auto spec = DebiasSpec::make(n, p0);
      Circuit layer = debias_layer(spec);
      CHECK(layer.measure().depth == 1);
      CHECK(layer.measure().size == n);
      auto law = pushforward_law(layer, spec.p1);
      CHECK(tv_to_product(law, p0, n) < 1e-12);
    }
  }
}

TEST_CASE("debias perturbed identity with closed-form r") {
  for (double gamma : {1e-3, 1e-2, 0.1}) {
    for (double p0 : {0.5, 0.25, 0.1}) {
      auto spec = DebiasSpec::make(2, p0);
      double r = spec.perturbation(gamma);
      CHECK(r > 0.0);
      Circuit layer = debias_layer(spec);
      auto law = pushforward_law(layer, spec.p1 - r);
      CHECK(tv_to_product(law, p0 * (1.0 - gamma), 2) < 1e-12);
    }
  }
}

TEST_CASE("debias perturbation scales like gamma log(1/p0)") {
  // r / (gamma log2(1/p0)) stays in a constant band as gamma shrinks.
  for (double p0 : {0.25, 0.1, 0.01}) {
    auto spec = DebiasSpec::make(2, p0);
    double lo = 1e9, hi = 0.0;
    for (double gamma : {1e-2, 1e-3, 1e-4, 1e-5}) {
      double ratio = spec.perturbation(gamma) / (gamma * std::log2(1.0 / p0));
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
    CHECK(hi / lo < 3.0);
    CHECK(lo > 0.01);
    CHECK(hi < 10.0);
  }
}

TEST_CASE("tribes width minimizes the closed-form gap") {
  // Independent re-derivation of the argmin for N=8, p=1/2.
  std::uint32_t best_w = 0;
  double best = 2.0;
  for (std::uint32_t w = 1; w <= 8; ++w) {
    double e = 1.0 - std::pow(1.0 - std::pow(0.5, double(w)), double(8 / w));
    if (std::abs(e - 0.5) < best) {
      best = std::abs(e - 0.5);
      best_w = w;
    }
  }
  CHECK(tribes_width(8) == best_w);
  double e8 = tribes_expectation(8, tribes_width(8), 0.5);
  CHECK(e8 > 0.25);
  CHECK(e8 < 0.75);
  CHECK_THROWS_AS(tribes_width(3), std::invalid_argument);
}

TEST_CASE("tribes circuit evaluates the tribes function") {
  Circuit t = tribes(8);
  CHECK(t.measure().depth == 2);
  Bits ones(8), zeros(8);
  for (int i = 0; i < 8; ++i) ones.set(i);
  CHECK(t.evaluate1(ones) == 1);
  CHECK(t.evaluate1(zeros) == 0);

  // Expectation through exact enumeration matches the closed form.
  auto oracle = circuit_oracle(t, "tribes8");
  const std::uint32_t w = tribes_width(8);
  for (double p : {0.3, 0.5, 0.7})
    CHECK_THAT(expectation_exact(oracle, p),
               Catch::Matchers::WithinAbs(tribes_expectation(8, w, p), 1e-12));
}

TEST_CASE("iterated tribes: d=2 reduces to tribes and d=4 measures right") {
  CHECK(serialize_circuit(iterated_tribes(16, 2)) ==
        serialize_circuit(tribes(16)));

  Circuit it4 = iterated_tribes(256, 4);
  auto st = it4.measure();
  CHECK(st.depth == 4);
  CHECK(st.size <= 2 * 256);
  CHECK(it4.input_width() == 256);

  // The closed-form expectation matches exact enumeration on a small
  // instance (d=4, block 4 -> width 16).
  Circuit small = iterated_tribes(16, 4);
  CHECK(small.input_width() == 16);
  auto oracle = circuit_oracle(small, "itribes16");
  for (double p : {0.3, 0.5, 0.8})
    CHECK_THAT(expectation_exact(oracle, p),
               Catch::Matchers::WithinAbs(iterated_tribes_expectation(16, 4, p),
                                          1e-12));
  CHECK_THROWS_AS(iterated_tribes(16, 3), std::invalid_argument);
  CHECK_THROWS_AS(iterated_tribes(8, 4), std::invalid_argument);
}

TEST_CASE("negate_inputs is an involution and swaps the bias") {
  Rng rng(5);
  Circuit c(6);
  {
    std::vector<std::uint32_t> leaves;
    for (std::uint32_t i = 0; i < 6; ++i)
      leaves.push_back(rng.bernoulli(0.4) ? c.add_neg_input(i) : c.add_input(i));
    auto a = c.add_and({leaves[0], leaves[1], leaves[2]});
    auto b = c.add_or({leaves[3], leaves[4]});
    c.set_outputs({c.add_or({a, b, leaves[5]})});
  }
  Circuit nn = negate_inputs(negate_inputs(c));
  Circuit neg = negate_inputs(c);
  for (std::uint64_t x = 0; x < 64; ++x) {
    Bits in = Bits::from_mask(x, 6);
    Bits flipped = Bits::from_mask(~x & 63, 6);
    CHECK(nn.evaluate1(in) == c.evaluate1(in));
    CHECK(neg.evaluate1(in) == c.evaluate1(flipped));
  }
  CHECK(neg.measure().size == c.measure().size);
  CHECK(neg.measure().depth == c.measure().depth);

  // E_p[negate(AND2)] = (1-p)^2 = E_{1-p}[AND2]
  Circuit a2(2);
  a2.set_outputs({a2.add_and({a2.add_input(0), a2.add_input(1)})});
  auto negoracle = circuit_oracle(negate_inputs(a2), "negand");
  for (double p : {0.1, 0.5, 0.9})
    CHECK_THAT(expectation_exact(negoracle, p),
               Catch::Matchers::WithinAbs((1.0 - p) * (1.0 - p), 1e-12));
}

TEST_CASE("equality_augment fires exactly on C(X)=S") {
  // Identity wiring: result(X,S) = [X == S], exhaustively on 2^6 inputs.
  Circuit eq = equality_augment(identity_circuit(3));
  CHECK(eq.input_width() == 6);
  CHECK(eq.output_count() == 1);
  CHECK(eq.measure().depth == 3);
  for (std::uint64_t x = 0; x < 8; ++x)
    for (std::uint64_t s = 0; s < 8; ++s) {
      Bits in = Bits::from_mask(x | (s << 3), 6);
      CHECK(eq.evaluate1(in) == (x == s));
    }

  // Constant all-zeros circuit: result = [S == 0].
  Circuit zeros(3);
  {
    auto z = zeros.add_const(false);
    zeros.set_outputs({z, z, z});
  }
  Circuit eqz = equality_augment(zeros);
  for (std::uint64_t x = 0; x < 8; ++x)
    for (std::uint64_t s = 0; s < 8; ++s) {
      Bits in = Bits::from_mask(x | (s << 3), 6);
      CHECK(eqz.evaluate1(in) == (s == 0));
    }

  // Depth-2 circuit -> depth 5, exhaustive semantics on 2^6 inputs.
  Circuit t = two_output_depth2();
  Circuit eqt = equality_augment(t);
  CHECK(t.measure().depth == 2);
  CHECK(eqt.measure().depth == 5);
  const std::size_t w = t.input_width();
  for (std::uint64_t x = 0; x < (std::uint64_t(1) << w); ++x)
    for (std::uint64_t s = 0; s < 4; ++s) {
      Bits in = Bits::from_mask(x | (s << w), w + 2);
      Bits cx = t.evaluate(Bits::from_mask(x, w));
      std::uint64_t cmask = (cx.get(0) ? 1u : 0u) | (cx.get(1) ? 2u : 0u);
      CHECK(eqt.evaluate1(in) == (cmask == s));
    }
}

TEST_CASE("monotone property circuit places minimal elements") {
  // Single edge: equivalent to the OR of all edge bits.
  auto edge = monotone_property_circuit({single_edge_element()}, 4);
  CHECK(!edge.empty_family);
  CHECK(edge.placement_count == 6);
  for (std::uint64_t x = 0; x < 64; ++x) {
    Bits in = Bits::from_mask(x, 6);
    CHECK(edge.circuit.evaluate1(in) == (x != 0));
  }

  // Triangle at n=5: C(5,3) = 10 distinct placements, size = 10 + 1.
  auto tri = monotone_property_circuit({triangle_element()}, 5);
  CHECK(tri.placement_count == 10);
  CHECK(tri.circuit.measure().size == 11);
  CHECK(tri.circuit.measure().depth == 2);

  // Cross-check against the direct triangle detector on random graphs.
  Rng rng(42);
  for (int trial = 0; trial < 50; ++trial) {
    GraphInput g = sample_gnp(5, 0.4, rng);
    CHECK(tri.circuit.evaluate1(g.edges) == has_triangle(g));
  }

  // Empty family: CONST0 with the warning flag.
  auto none = monotone_property_circuit({}, 5);
  CHECK(none.empty_family);
  CHECK(none.circuit.evaluate1(Bits(10)) == 0);
}

TEST_CASE("converse estimator structure and semantics") {
  // Small spec: n=10 (N=45), S=4, triangle g on every interval.
  ConverseSpec spec;
  spec.n = 10;
  spec.p_c = 0.35;  // K = floor(1/0.35) = 2
  spec.s_blocks = 4;
  spec.q_points = {0.2, 0.35, 0.55};
  spec.g_elements = {{triangle_element()}, {triangle_element()}};
  auto build = converse_estimator(spec);
  build.circuit.validate();
  CHECK(build.circuit.measure().depth == 4);
  CHECK(build.config_gate_count == 16);
  CHECK(build.count_gate_count == 5);
  CHECK(build.config_gate_count + build.count_gate_count ==
        (std::size_t(1) << spec.s_blocks) + spec.s_blocks + 1);

  // The count gates one-hot encode Q = number of fired K-blocks; the
  // output is g(X) AND "the count lands in a covered interval".
  Circuit counter = build.circuit;
  counter.set_outputs(build.count_gates);
  const std::uint32_t K = spec.block_size();
  Rng rng(17);
  auto tri = monotone_property_circuit({triangle_element()}, 10);
  for (int trial = 0; trial < 200; ++trial) {
    GraphInput g = sample_gnp(10, 0.2 + 0.01 * (trial % 30), rng);
    std::uint32_t q = 0;
    for (std::uint32_t b = 0; b < spec.s_blocks; ++b) {
      bool fired = false;
      for (std::uint32_t j = 0; j < K; ++j)
        if (g.edges.get(b * K + j)) fired = true;
      q += fired;
    }
    Bits onehot = counter.evaluate(g.edges);
    for (std::uint32_t k = 0; k <= spec.s_blocks; ++k)
      CHECK(onehot.get(k) == (k == q));
    bool covered = false;
    double frac = double(q) / double(spec.s_blocks);
    for (std::size_t i = 0; i < build.interval_lo.size(); ++i)
      if (frac > build.interval_lo[i] && frac < build.interval_hi[i])
        covered = true;
    CHECK(build.circuit.evaluate1(g.edges) ==
          (covered && tri.circuit.evaluate1(g.edges)));
  }
}

TEST_CASE("converse estimator validates its inputs") {
  ConverseSpec spec;
  spec.n = 10;
  spec.p_c = 0.35;
  spec.s_blocks = 4;
  spec.q_points = {0.2, 0.35, 0.55};
  spec.g_elements = {{triangle_element()}, {triangle_element()}};
  CHECK_NOTHROW(converse_estimator(spec));

  auto bad = spec;
  bad.s_blocks = 25;
  CHECK_THROWS_AS(converse_estimator(bad), std::invalid_argument);
  bad = spec;
  bad.s_blocks = 6;  // log2(45) ~ 5.49
  CHECK_THROWS_AS(converse_estimator(bad), std::invalid_argument);
  bad = spec;
  bad.q_points = {0.2, 0.2, 0.55};
  CHECK_THROWS_AS(converse_estimator(bad), std::invalid_argument);
  bad = spec;
  bad.g_elements = {{triangle_element()}};
  CHECK_THROWS_AS(converse_estimator(bad), std::invalid_argument);
  bad = spec;
  bad.p_c = 0.002;  // K = 500, S*K > 45
  CHECK_THROWS_AS(converse_estimator(bad), std::invalid_argument);
}

TEST_CASE("probe count distribution is binomial") {
  // Frozen oracle value for the S=16 window claim: Q ~ Bin(16, 1/2)
  // gives P(Q/S in (1/4, 3/4)) = P(5 <= Q <= 11) = 60502/65536.
  double mass = 0.0;
  for (std::uint64_t k = 5; k <= 11; ++k) mass += binom_pmf(16, k, 0.5);
  CHECK_THAT(mass, Catch::Matchers::WithinAbs(0.92315673828125, 1e-10));
  CHECK(mass >= 0.92);

  // Circuit-level cross-check at S=4: the exact law of the count gates
  // under the p-biased measure equals Bin(4, b(p)).
  ConverseSpec spec;
  spec.n = 10;
  spec.p_c = 0.35;
  spec.s_blocks = 4;
  spec.q_points = {0.2, 0.35, 0.55};
  spec.g_elements = {{triangle_element()}, {triangle_element()}};
  auto build = converse_estimator(spec);
  Circuit counter = build.circuit;
  counter.set_outputs(build.count_gates);
  const std::uint32_t K = spec.block_size();
  const std::uint32_t probe_bits = spec.s_blocks * K;
  const double p = 0.3;
  std::vector<double> law(spec.s_blocks + 1, 0.0);
  for (std::uint64_t x = 0; x < (std::uint64_t(1) << probe_bits); ++x) {
    double prob = 1.0;
    for (std::uint32_t i = 0; i < probe_bits; ++i)
      prob *= (x >> i) & 1 ? p : 1.0 - p;
    Bits in(edge_count(10));
    for (std::uint32_t i = 0; i < probe_bits; ++i)
      if ((x >> i) & 1) in.set(i);
    Bits onehot = counter.evaluate(in);
    for (std::uint32_t k = 0; k <= spec.s_blocks; ++k)
      if (onehot.get(k)) law[k] += prob;
  }
  const double b = spec.bias_map(p);
  for (std::uint32_t k = 0; k <= spec.s_blocks; ++k)
    CHECK_THAT(law[k], Catch::Matchers::WithinAbs(binom_pmf(4, k, b), 1e-12));
}
