#pragma once

#include <string>

#include "json.hpp"
#include "sharplab/circuit.hpp"

namespace sharplab {

/// Circuit file format: one JSON document with fields `input_width`,
/// `outputs` and `gates`, each gate a record {id, kind, children} with
/// kinds spelled INPUT, NEG_INPUT, CONST0, CONST1, AND, OR. Field order
/// is canonical and integers are base-10, so serialization round-trips
/// byte-identically.
inline std::string serialize_circuit(const Circuit& c) {
  nlohmann::ordered_json doc;
  doc["input_width"] = c.input_width();
  doc["outputs"] = c.outputs();
  nlohmann::ordered_json gates = nlohmann::ordered_json::array();
  for (std::uint32_t id = 0; id < c.gates().size(); ++id) {
    const Gate& g = c.gates()[id];
    nlohmann::ordered_json rec;
    rec["id"] = id;
    rec["kind"] = gate_kind_name(g.kind);
    rec["children"] = g.children;
    gates.push_back(std::move(rec));
  }
  doc["gates"] = std::move(gates);
  return doc.dump(2) + "\n";
}

/// Parses and re-validates every structural invariant; malformed
/// streams and invariant violations throw CircuitError with the
/// offending gate id where applicable.
inline Circuit deserialize_circuit(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw CircuitError(std::string("malformed circuit document: ") + e.what());
  }
  if (!doc.contains("input_width") || !doc.contains("outputs") ||
      !doc.contains("gates"))
    throw CircuitError("circuit document missing required fields");
  Circuit c(doc["input_width"].get<std::size_t>());
  std::uint32_t expect_id = 0;
  for (const auto& rec : doc["gates"]) {
    if (!rec.contains("id") || !rec.contains("kind") ||
        !rec.contains("children"))
      throw CircuitError("gate record missing fields near id " +
                         std::to_string(expect_id));
    if (rec["id"].get<std::uint32_t>() != expect_id)
      throw CircuitError("gate ids must be dense and in order; saw " +
                         rec["id"].dump() + ", expected " +
                         std::to_string(expect_id));
    GateKind kind;
    if (!parse_gate_kind(rec["kind"].get<std::string>(), kind))
      throw CircuitError("gate " + std::to_string(expect_id) +
                         ": unknown kind " + rec["kind"].dump());
    auto children = rec["children"].get<std::vector<std::uint32_t>>();
    switch (kind) {
      case GateKind::Input:
        if (children.size() != 1)
          throw CircuitError("gate " + std::to_string(expect_id) +
                             ": INPUT needs one child position");
        c.add_input(children[0]);
        break;
      case GateKind::NegInput:
        if (children.size() != 1)
          throw CircuitError("gate " + std::to_string(expect_id) +
                             ": NEG_INPUT needs one child position");
        c.add_neg_input(children[0]);
        break;
      case GateKind::Const0:
      case GateKind::Const1:
        if (!children.empty())
          throw CircuitError("gate " + std::to_string(expect_id) +
                             ": const gate has children");
        c.add_const(kind == GateKind::Const1);
        break;
      case GateKind::And: c.add_and(std::move(children)); break;
      case GateKind::Or: c.add_or(std::move(children)); break;
    }
    ++expect_id;
  }
  c.set_outputs(doc["outputs"].get<std::vector<std::uint32_t>>());
  c.validate();
  return c;
}

}  // namespace sharplab
