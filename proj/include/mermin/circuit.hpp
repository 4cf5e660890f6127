#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mermin/statevector.hpp"

namespace mermin {

struct Measure {
    int qubit = 0;
};

using CircuitOp = std::variant<GateOp, Measure>;

struct Circuit {
    std::string label;
    int num_qubits = 0;
    std::vector<CircuitOp> ops;

    void add(const GateOp& gate) { ops.emplace_back(gate); }
    void measure(int qubit) { ops.emplace_back(Measure{qubit}); }

    std::vector<int> measured_qubits() const;
    // Final state with measurement entries ignored (they carry no unitary).
    Statevector final_state() const;
};

// Throws std::invalid_argument when a wire index is out of range, a
// measurement is duplicated, or a gate touches an already-measured qubit.
void validate_circuit(const Circuit& circuit);

// Number of ops strictly between Measure(q0) and Measure(q4). Throws
// std::runtime_error when either measurement is missing.
int selection_delay(const Circuit& circuit);

// Symbolic schedule intervals; lengths are never numeric.
enum class TauPhase { Initial, On, Measurement };

struct TauLabel {
    int qubit = 0;
    TauPhase phase = TauPhase::Initial;
    std::string name;  // e.g. "(t1,t2)" for the initial interval
};

struct ScheduleMetadata {
    int selection_delay_gates = 0;
    std::vector<TauLabel> tau_labels;  // per qubit: initial <= on <= measurement
};

ScheduleMetadata schedule_metadata(const Circuit& circuit);

// JSON document {label, num_qubits, ops:[...]}; round-trips bit-exactly.
std::string circuit_to_json(const Circuit& circuit);
Circuit circuit_from_json(const std::string& text);

Circuit load_circuit(const std::string& path);
void save_circuit(const Circuit& circuit, const std::string& path);

} // namespace mermin
