#include "mermin/circuit.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace mermin {

using ordered_json = nlohmann::ordered_json;

std::vector<int> Circuit::measured_qubits() const {
    std::vector<int> out;
    for (const auto& op : ops) {
        if (const auto* m = std::get_if<Measure>(&op)) {
            out.push_back(m->qubit);
        }
    }
    return out;
}

Statevector Circuit::final_state() const {
    Statevector state = new_zero_state(num_qubits);
    for (const auto& op : ops) {
        if (const auto* gate = std::get_if<GateOp>(&op)) {
            apply_gate_in_place(state, *gate);
        }
    }
    return state;
}

void validate_circuit(const Circuit& circuit) {
    if (circuit.num_qubits < 1 || circuit.num_qubits > kMaxQubits) {
        throw std::invalid_argument("circuit qubit count out of range");
    }
    auto check_wire = [&](int q) {
        if (q < 0 || q >= circuit.num_qubits) {
            throw std::invalid_argument("wire index out of range in circuit '" +
                                        circuit.label + "'");
        }
    };
    std::vector<bool> measured(static_cast<std::size_t>(circuit.num_qubits), false);
    for (const auto& op : circuit.ops) {
        if (const auto* gate = std::get_if<GateOp>(&op)) {
            check_wire(gate->target);
            if (gate->is_controlled()) {
                check_wire(gate->control);
                if (gate->control == gate->target) {
                    throw std::invalid_argument("control equals target");
                }
            } else if (gate->control != -1) {
                throw std::invalid_argument("control set on single-qubit gate");
            }
            if (measured[static_cast<std::size_t>(gate->target)] ||
                (gate->is_controlled() &&
                 measured[static_cast<std::size_t>(gate->control)])) {
                throw std::invalid_argument("gate acts on an already-measured qubit");
            }
        } else {
            const auto& m = std::get<Measure>(op);
            check_wire(m.qubit);
            if (measured[static_cast<std::size_t>(m.qubit)]) {
                throw std::invalid_argument("qubit measured twice");
            }
            measured[static_cast<std::size_t>(m.qubit)] = true;
        }
    }
}

int selection_delay(const Circuit& circuit) {
    int pos_q0 = -1;
    int pos_q4 = -1;
    for (std::size_t i = 0; i < circuit.ops.size(); ++i) {
        if (const auto* m = std::get_if<Measure>(&circuit.ops[i])) {
            if (m->qubit == 0) pos_q0 = static_cast<int>(i);
            if (m->qubit == 4) pos_q4 = static_cast<int>(i);
        }
    }
    if (pos_q0 < 0 || pos_q4 < 0) {
        throw std::runtime_error("circuit '" + circuit.label +
                                 "' lacks the q0/q4 measurement pair");
    }
    int lo = pos_q0 < pos_q4 ? pos_q0 : pos_q4;
    int hi = pos_q0 < pos_q4 ? pos_q4 : pos_q0;
    return hi - lo - 1;
}

ScheduleMetadata schedule_metadata(const Circuit& circuit) {
    ScheduleMetadata meta;
    meta.selection_delay_gates = selection_delay(circuit);
    for (int q = 0; q < circuit.num_qubits; ++q) {
        meta.tau_labels.push_back({q, TauPhase::Initial, "(tau1,tau2)"});
        meta.tau_labels.push_back({q, TauPhase::On, "(tau3,tau4)"});
        meta.tau_labels.push_back({q, TauPhase::Measurement, "(tau5,tau6)"});
    }
    return meta;
}

namespace {

GateKind kind_from_name(const std::string& name) {
    if (name == "h") return GateKind::Hadamard;
    if (name == "x") return GateKind::PauliX;
    if (name == "p") return GateKind::Phase;
    if (name == "cp") return GateKind::ControlledPhase;
    if (name == "cx") return GateKind::ControlledX;
    throw std::runtime_error("unknown gate kind '" + name + "'");
}

ordered_json op_to_json(const CircuitOp& op) {
    ordered_json j;
    if (const auto* m = std::get_if<Measure>(&op)) {
        j["measure"] = m->qubit;
        return j;
    }
    const auto& gate = std::get<GateOp>(op);
    j["kind"] = gate_name(gate.kind);
    j["target"] = gate.target;
    if (gate.is_controlled()) {
        j["control"] = gate.control;
    }
    if (gate.kind == GateKind::Phase || gate.kind == GateKind::ControlledPhase) {
        j["theta"] = gate.theta;
    }
    return j;
}

CircuitOp op_from_json(const ordered_json& j) {
    if (j.contains("measure")) {
        return Measure{j.at("measure").get<int>()};
    }
    GateOp gate;
    gate.kind = kind_from_name(j.at("kind").get<std::string>());
    gate.target = j.at("target").get<int>();
    if (gate.is_controlled()) {
        gate.control = j.at("control").get<int>();
    }
    if (gate.kind == GateKind::Phase || gate.kind == GateKind::ControlledPhase) {
        gate.theta = j.at("theta").get<double>();
    }
    return gate;
}

} // namespace

std::string circuit_to_json(const Circuit& circuit) {
    ordered_json j;
    j["label"] = circuit.label;
    j["num_qubits"] = circuit.num_qubits;
    j["ops"] = ordered_json::array();
    for (const auto& op : circuit.ops) {
        j["ops"].push_back(op_to_json(op));
    }
    return j.dump(2) + "\n";
}

Circuit circuit_from_json(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error(std::string("circuit JSON parse error: ") + e.what());
    }
    Circuit circuit;
    try {
        circuit.label = j.at("label").get<std::string>();
        circuit.num_qubits = j.at("num_qubits").get<int>();
        for (const auto& jop : j.at("ops")) {
            circuit.ops.push_back(op_from_json(jop));
        }
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("circuit JSON schema error: ") + e.what());
    }
    validate_circuit(circuit);
    return circuit;
}

Circuit load_circuit(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open circuit file " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return circuit_from_json(buffer.str());
}

void save_circuit(const Circuit& circuit, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write circuit file " + path);
    }
    out << circuit_to_json(circuit);
}

} // namespace mermin
