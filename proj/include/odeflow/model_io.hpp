/// @file model_io.hpp
/// @brief JSON model files. A model is either a raw tensor
///   { "n": int, "B": [[[...]]] }   (B indexed [k][i][j]; symmetrized on load)
/// or a gate shorthand
///   { "gate": "rotor", "params": { "alpha": 1.0 } }
/// with rigid_body taking params I1, I2, I3. An optional "y0" array supplies
/// a default initial state for simulation.

#pragma once

#include <optional>
#include <string>

#include "odeflow/gates.hpp"
#include "odeflow/quadode.hpp"

namespace odeflow {

struct Model {
    SymBilinearMap B;
    std::optional<GateSpec> gate;          // set when loaded from shorthand
    std::optional<Eigen::VectorXd> y0;     // optional initial state
};

/// Parses a model from JSON text; throws std::invalid_argument with the
/// offending field named on malformed input.
Model parse_model(const std::string& json_text);

/// Reads a model file; throws std::invalid_argument when unreadable.
Model load_model(const std::string& path);

/// Serializes a model (raw tensor form, plus the gate shorthand when known).
std::string model_to_json(const Model& model);

}  // namespace odeflow
