#include "odeflow/model_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace odeflow {

using nlohmann::json;

namespace {

GateSpec parse_gate(const json& j) {
    const std::string name = j.at("gate").get<std::string>();
    const auto id = gate_from_name(name);
    if (!id || *id == GateId::custom)
        throw std::invalid_argument("model: unknown gate \"" + name + "\"");
    json params = j.contains("params") ? j.at("params") : json::object();
    switch (*id) {
        case GateId::rotor:
            return GateSpec::rotor(params.value("alpha", 1.0));
        case GateId::pump:
            return GateSpec::pump(params.value("alpha", 1.0));
        case GateId::amplifier:
            return GateSpec::amplifier(params.value("alpha", 1.0));
        case GateId::rigid_body:
            return GateSpec::rigid_body(params.value("I1", 1.0), params.value("I2", 1.0),
                                        params.value("I3", 1.0));
        default:
            break;
    }
    throw std::invalid_argument("model: unknown gate \"" + name + "\"");
}

}  // namespace

Model parse_model(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("model: malformed JSON: ") + e.what());
    }
    try {
        Model model;
        if (j.contains("gate")) {
            model.gate = parse_gate(j);
            model.B = build(*model.gate);
        } else {
            if (!j.contains("n")) throw std::invalid_argument("model: missing field \"n\"");
            if (!j.contains("B")) throw std::invalid_argument("model: missing field \"B\"");
            const int n = j.at("n").get<int>();
            if (n <= 0) throw std::invalid_argument("model: field \"n\" must be positive");
            const auto& tensor = j.at("B");
            if (!tensor.is_array() || static_cast<int>(tensor.size()) != n)
                throw std::invalid_argument("model: field \"B\" must be an n x n x n tensor");
            std::vector<Eigen::MatrixXd> raw(n, Eigen::MatrixXd::Zero(n, n));
            for (int k = 0; k < n; ++k) {
                const auto& mat = tensor.at(k);
                if (!mat.is_array() || static_cast<int>(mat.size()) != n)
                    throw std::invalid_argument("model: field \"B\" must be an n x n x n tensor");
                for (int i = 0; i < n; ++i) {
                    const auto& row = mat.at(i);
                    if (!row.is_array() || static_cast<int>(row.size()) != n)
                        throw std::invalid_argument(
                            "model: field \"B\" must be an n x n x n tensor");
                    for (int jj = 0; jj < n; ++jj) raw[k](i, jj) = row.at(jj).get<double>();
                }
            }
            model.B = SymBilinearMap::symmetrize(raw);
        }
        if (j.contains("y0")) {
            const auto& arr = j.at("y0");
            if (!arr.is_array() || static_cast<int>(arr.size()) != model.B.n())
                throw std::invalid_argument("model: field \"y0\" must have length n");
            Eigen::VectorXd y0(model.B.n());
            for (int i = 0; i < model.B.n(); ++i) y0[i] = arr.at(i).get<double>();
            model.y0 = y0;
        }
        return model;
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("model: malformed field: ") + e.what());
    }
}

Model load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("model: cannot read file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_model(ss.str());
}

std::string model_to_json(const Model& model) {
    json j;
    const int n = model.B.n();
    if (model.gate) {
        j["gate"] = gate_name(model.gate->id);
        if (model.gate->id == GateId::rigid_body) {
            j["params"] = {{"I1", model.gate->inertia[0]},
                           {"I2", model.gate->inertia[1]},
                           {"I3", model.gate->inertia[2]}};
        } else {
            j["params"] = {{"alpha", model.gate->alpha}};
        }
    }
    j["n"] = n;
    json tensor = json::array();
    for (int k = 0; k < n; ++k) {
        json mat = json::array();
        for (int i = 0; i < n; ++i) {
            json row = json::array();
            for (int jj = 0; jj < n; ++jj) row.push_back(model.B.coeff(k, i, jj));
            mat.push_back(row);
        }
        tensor.push_back(mat);
    }
    j["B"] = tensor;
    if (model.y0) {
        json arr = json::array();
        for (int i = 0; i < model.y0->size(); ++i) arr.push_back((*model.y0)[i]);
        j["y0"] = arr;
    }
    return j.dump(2) + "\n";
}

}  // namespace odeflow
