#include <catch_amalgamated.hpp>

#include "sharplab/circuit.hpp"
#include "sharplab/circuit_io.hpp"
#include "sharplab/constructions.hpp"
#include "sharplab/rng.hpp"

using namespace sharplab;

namespace {

Circuit and2() {
  Circuit c(2);
  auto a = c.add_input(0);
  auto b = c.add_input(1);
  c.set_outputs({c.add_and({a, b})});
  return c;
}

Circuit tribes_2x2() {  // OR of two width-2 ANDs on 4 bits
  Circuit c(4);
  auto a = c.add_and({c.add_input(0), c.add_input(1)});
  auto b = c.add_and({c.add_input(2), c.add_input(3)});
  c.set_outputs({c.add_or({a, b})});
  return c;
}

/// Random layered circuit: `layers` alternating AND/OR levels over
/// random fan-ins, single output.
Circuit random_layered(std::size_t width, std::size_t layers,
                       std::size_t gates_per_layer, Rng& rng,
                       bool with_negations = true) {
  Circuit c(width);
  std::vector<std::uint32_t> prev;
  for (std::size_t i = 0; i < width; ++i) {
    if (with_negations && rng.bernoulli(0.3))
      prev.push_back(c.add_neg_input(std::uint32_t(i)));
    else
      prev.push_back(c.add_input(std::uint32_t(i)));
  }
  for (std::size_t l = 0; l < layers; ++l) {
    std::vector<std::uint32_t> cur;
    for (std::size_t g = 0; g < gates_per_layer; ++g) {
      std::size_t fanin = 1 + rng.below(3);
      std::vector<std::uint32_t> kids;
      for (std::size_t j = 0; j < fanin; ++j)
        kids.push_back(prev[rng.below(prev.size())]);
      cur.push_back(l % 2 ? c.add_or(std::move(kids))
                          : c.add_and(std::move(kids)));
    }
    prev = std::move(cur);
  }
  c.set_outputs({prev[rng.below(prev.size())]});
  return c;
}

}  // namespace

TEST_CASE("evaluate basic gates") {
  Circuit c = and2();
  CHECK(c.evaluate1(Bits::from_mask(0b11, 2)) == 1);
  CHECK(c.evaluate1(Bits::from_mask(0b01, 2)) == 0);

  // first AND block fires, OR propagates
  Circuit t = tribes_2x2();
  CHECK(t.evaluate1(Bits::from_mask(0b0011, 4)) == 1);
  CHECK(t.evaluate1(Bits::from_mask(0b0010, 4)) == 0);

  Circuit k(3);
  k.set_outputs({k.add_const(false)});
  for (std::uint64_t x = 0; x < 8; ++x)
    CHECK(k.evaluate1(Bits::from_mask(x, 3)) == 0);
}

TEST_CASE("evaluate rejects width mismatch and validates children") {
  Circuit c = and2();
  CHECK_THROWS_AS(c.evaluate(Bits(3)), CircuitError);

  Circuit bad(2);
  bad.add_and({5});  // dangling child
  bad.set_outputs({0});
  CHECK_THROWS_AS(bad.validate(), CircuitError);
}

TEST_CASE("measure counts only AND/OR gates") {
  auto st = tribes_2x2().measure();
  CHECK(st.size == 3);
  CHECK(st.depth == 2);

  auto layer = debias_layer(DebiasSpec::make(4, 0.25));
  auto lst = layer.measure();
  CHECK(lst.size == 4);
  CHECK(lst.depth == 1);

  // Constants and input leaves contribute nothing.
  Circuit k(2);
  k.set_outputs({k.add_const(true), k.add_input(0)});
  CHECK(k.measure().size == 0);
  CHECK(k.measure().depth == 0);
}

TEST_CASE("compose matches sequential evaluation exhaustively") {
  // outer: tribes on 4 bits; inner: 4 outputs over 3 inputs.
  Rng rng(7);
  Circuit inner(3);
  {
    std::vector<std::uint32_t> outs;
    auto i0 = inner.add_input(0), i1 = inner.add_input(1),
         i2 = inner.add_input(2);
    outs.push_back(inner.add_or({i0, i1}));
    outs.push_back(inner.add_and({i1, i2}));
    outs.push_back(inner.add_or({i0, i2}));
    outs.push_back(inner.add_and({i0, i1, i2}));
    inner.set_outputs(outs);
  }
  Circuit outer = tribes_2x2();
  Circuit comp = compose(outer, inner);
  comp.validate();
  for (std::uint64_t x = 0; x < 8; ++x) {
    Bits in = Bits::from_mask(x, 3);
    Bits mid = inner.evaluate(in);
    CHECK(comp.evaluate1(in) == outer.evaluate1(mid));
  }
  CHECK(comp.measure().size == outer.measure().size + inner.measure().size);
  CHECK(comp.measure().depth == outer.measure().depth + inner.measure().depth);
}

TEST_CASE("compose with identity wiring is a no-op") {
  Rng rng(3);
  Circuit c = random_layered(6, 3, 5, rng);
  Circuit wrapped = compose(identity_circuit(1), c);
  for (std::uint64_t x = 0; x < 64; ++x) {
    Bits in = Bits::from_mask(x, 6);
    CHECK(wrapped.evaluate1(in) == c.evaluate1(in));
  }
}

TEST_CASE("compose handles negated outer leaves via dual cones") {
  // outer = AND(NEG_INPUT 0, INPUT 1) over the two outputs of inner.
  Circuit outer(2);
  outer.set_outputs(
      {outer.add_and({outer.add_neg_input(0), outer.add_input(1)})});
  Circuit inner(3);
  {
    auto a = inner.add_and({inner.add_input(0), inner.add_input(1)});
    auto b = inner.add_or({inner.add_input(1), inner.add_input(2)});
    inner.set_outputs({a, b});
  }
  Circuit comp = compose(outer, inner);
  comp.validate();
  for (std::uint64_t x = 0; x < 8; ++x) {
    Bits in = Bits::from_mask(x, 3);
    Bits mid = inner.evaluate(in);
    CHECK(comp.evaluate1(in) == outer.evaluate1(mid));
  }
  // NOT gates stay at the input level.
  for (const Gate& g : comp.gates())
    if (g.kind == GateKind::NegInput) CHECK(g.children[0] < 3);
}

TEST_CASE("compose associativity on exhaustive small inputs") {
  Rng rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    Circuit c1(4), c2(4), c3(4);
    auto mk = [&](Circuit& c, std::size_t outs) {
      std::vector<std::uint32_t> leaves;
      for (std::uint32_t i = 0; i < 4; ++i)
        leaves.push_back(rng.bernoulli(0.25) ? c.add_neg_input(i)
                                             : c.add_input(i));
      std::vector<std::uint32_t> os;
      for (std::size_t o = 0; o < outs; ++o) {
        std::vector<std::uint32_t> kids;
        std::size_t fanin = 1 + rng.below(3);
        for (std::size_t j = 0; j < fanin; ++j)
          kids.push_back(leaves[rng.below(leaves.size())]);
        os.push_back(rng.bernoulli(0.5) ? c.add_and(std::move(kids))
                                        : c.add_or(std::move(kids)));
      }
      c.set_outputs(os);
    };
    mk(c1, 1);
    mk(c2, 4);
    mk(c3, 4);
    Circuit left = compose(c1, compose(c2, c3));
    Circuit right = compose(compose(c1, c2), c3);
    for (std::uint64_t x = 0; x < 16; ++x) {
      Bits in = Bits::from_mask(x, 4);
      CHECK(left.evaluate1(in) == right.evaluate1(in));
    }
  }
}

TEST_CASE("serialize round-trips bit-identically") {
  Circuit t = tribes(4);
  std::string s1 = serialize_circuit(t);
  Circuit back = deserialize_circuit(s1);
  std::string s2 = serialize_circuit(back);
  CHECK(s1 == s2);
  CHECK(back.input_width() == t.input_width());
  CHECK(back.measure().size == t.measure().size);
}

TEST_CASE("deserialize rejects malformed streams") {
  CHECK_THROWS_AS(deserialize_circuit("not json at all"), CircuitError);
  // forward-referencing child id
  std::string doc = R"({"input_width": 2,
    "outputs": [0],
    "gates": [{"id": 0, "kind": "AND", "children": [1]},
              {"id": 1, "kind": "INPUT", "children": [0]}]})";
  CHECK_THROWS_AS(deserialize_circuit(doc), CircuitError);
  // unknown kind
  std::string doc2 = R"({"input_width": 1, "outputs": [0],
    "gates": [{"id": 0, "kind": "XOR", "children": []}]})";
  CHECK_THROWS_AS(deserialize_circuit(doc2), CircuitError);
}

TEST_CASE("large random circuit round-trips with size and depth intact") {
  Rng rng(99);
  Circuit c = random_layered(64, 10, 10000, rng);
  REQUIRE(c.gates().size() > 100000);
  auto st = c.measure();
  Circuit back = deserialize_circuit(serialize_circuit(c));
  auto st2 = back.measure();
  CHECK(st.size == st2.size);
  CHECK(st.depth == st2.depth);
}

TEST_CASE("evaluation is total and deterministic on small widths") {
  Rng rng(123);
  Circuit c = random_layered(8, 4, 6, rng);
  for (std::uint64_t x = 0; x < 256; ++x) {
    Bits in = Bits::from_mask(x, 8);
    bool v1 = c.evaluate1(in);
    bool v2 = c.evaluate1(in);
    CHECK(v1 == v2);
  }
}
