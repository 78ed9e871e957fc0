#pragma once

#include <json.hpp>

#include <string>

#include "phasekick/circuit.hpp"

namespace phasekick {

/// Circuit wire format:
/// {
///   "num_qubits": n,
///   "label": "...",
///   "ops": [{"kind": "h", "targets": [0], "controls": [[2, 0]],
///            "params": [], "matrix": [[re, im], ...]}]
/// }
/// Dense matrices are row-major [re, im] pairs; "matrix" appears only for
/// kind "unitary". Round-trips are lossless at double precision.
inline nlohmann::json circuit_to_json(const Circuit& c) {
  nlohmann::json j;
  j["num_qubits"] = c.num_qubits();
  j["label"] = c.label();
  nlohmann::json ops = nlohmann::json::array();
  for (const GateOp& op : c.ops()) {
    nlohmann::json o;
    o["kind"] = kind_name(op.kind);
    o["targets"] = op.targets;
    nlohmann::json ctrls = nlohmann::json::array();
    for (const Control& ctl : op.controls)
      ctrls.push_back({ctl.qubit, ctl.polarity});
    o["controls"] = ctrls;
    o["params"] = op.params;
    if (op.kind == GateKind::Unitary) {
      nlohmann::json entries = nlohmann::json::array();
      for (Eigen::Index r = 0; r < op.matrix.rows(); ++r)
        for (Eigen::Index col = 0; col < op.matrix.cols(); ++col)
          entries.push_back(
              {op.matrix(r, col).real(), op.matrix(r, col).imag()});
      o["matrix"] = entries;
    }
    ops.push_back(std::move(o));
  }
  j["ops"] = std::move(ops);
  return j;
}

inline Circuit circuit_from_json(const nlohmann::json& j) {
  Circuit c(j.at("num_qubits").get<int>(),
            j.value("label", std::string{}));
  for (const nlohmann::json& o : j.at("ops")) {
    GateOp op;
    op.kind = kind_from_name(o.at("kind").get<std::string>());
    op.targets = o.at("targets").get<std::vector<int>>();
    for (const nlohmann::json& ctl : o.at("controls"))
      op.controls.push_back(
          Control{ctl.at(0).get<int>(), ctl.at(1).get<int>()});
    op.params = o.value("params", std::vector<double>{});
    if (op.kind == GateKind::Unitary) {
      const nlohmann::json& entries = o.at("matrix");
      const Eigen::Index dim = Eigen::Index(1) << op.targets.size();
      if (static_cast<Eigen::Index>(entries.size()) != dim * dim)
        throw std::invalid_argument("matrix entry count does not match arity");
      op.matrix.resize(dim, dim);
      Eigen::Index at = 0;
      for (Eigen::Index r = 0; r < dim; ++r)
        for (Eigen::Index col = 0; col < dim; ++col, ++at)
          op.matrix(r, col) = Complex(entries[at].at(0).get<double>(),
                                      entries[at].at(1).get<double>());
    }
    c.add(std::move(op));  // re-validates structure, indices and unitarity
  }
  return c;
}

inline std::string circuit_to_json_string(const Circuit& c, int indent = -1) {
  return circuit_to_json(c).dump(indent);
}

inline Circuit circuit_from_json_string(const std::string& text) {
  return circuit_from_json(nlohmann::json::parse(text));
}

}  // namespace phasekick
