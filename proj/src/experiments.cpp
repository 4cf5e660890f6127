#include "mermin/experiments.hpp"

#include <numbers>
#include <stdexcept>
#include <string>

namespace mermin {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;
constexpr double kQuarterPi = std::numbers::pi / 4.0;

// q0 drives q[id]; q4 drives the remaining two entangled qubits (ascending).
struct PhaseTargets {
    int from_q0;
    int from_q4_first;
    int from_q4_second;
};

PhaseTargets phase_targets(ExperimentId id) {
    switch (id) {
        case ExperimentId::One: return {1, 2, 3};
        case ExperimentId::Two: return {2, 1, 3};
        case ExperimentId::Three: return {3, 1, 2};
    }
    throw std::logic_error("unreachable experiment id");
}

void add_preparation(Circuit& circuit) {
    circuit.add(pauli_x(0));                 // q0 -> |1>
    circuit.add(hadamard(1));                // q1q2q3 -> (|000>+i|111>)/sqrt2
    circuit.add(controlled_x(1, 2));
    circuit.add(controlled_x(2, 3));
    circuit.add(phase(kHalfPi, 1));
    circuit.add(hadamard(4));                // q4 -> |+>
}

void add_final_stage(Circuit& circuit) {
    circuit.add(hadamard(1));
    circuit.add(hadamard(2));
    circuit.add(hadamard(3));
    circuit.measure(1);
    circuit.measure(2);
    circuit.measure(3);
}

} // namespace

ExperimentId experiment_id_from_int(int value) {
    if (value < 1 || value > 3) {
        throw std::invalid_argument("experiment id must be 1, 2 or 3, got " +
                                    std::to_string(value));
    }
    return static_cast<ExperimentId>(value);
}

Circuit build_experiment(ExperimentId id) {
    const PhaseTargets targets = phase_targets(id);
    Circuit circuit;
    circuit.label = "experiment" + std::to_string(static_cast<int>(id));
    circuit.num_qubits = 5;
    add_preparation(circuit);
    circuit.add(controlled_phase(-kHalfPi, 0, targets.from_q0));
    circuit.measure(0);
    circuit.add(controlled_phase(-kHalfPi, 4, targets.from_q4_first));
    circuit.add(controlled_phase(-kHalfPi, 4, targets.from_q4_second));
    circuit.measure(4);
    add_final_stage(circuit);
    validate_circuit(circuit);
    return circuit;
}

Circuit build_transpiled_experiment(ExperimentId id) {
    const PhaseTargets targets = phase_targets(id);
    const int t0 = targets.from_q0;
    const int ta = targets.from_q4_first;
    const int tb = targets.from_q4_second;

    Circuit circuit;
    circuit.label = "experiment" + std::to_string(static_cast<int>(id)) + "-transpiled";
    circuit.num_qubits = 5;
    add_preparation(circuit);

    // ControlledPhase(theta) == P(theta/2) on control and target, then
    // CX . P(-theta/2) on target . CX. The control-side corrections commute
    // with everything diagonal, so both q4 corrections run before the q0
    // measurement; that leaves seven ops between the two assistant readouts.
    circuit.add(phase(-kQuarterPi, 0));
    circuit.add(phase(-kQuarterPi, t0));
    circuit.add(controlled_x(0, t0));
    circuit.add(phase(kQuarterPi, t0));
    circuit.add(controlled_x(0, t0));
    circuit.add(phase(-kQuarterPi, 4));
    circuit.add(phase(-kQuarterPi, 4));
    circuit.add(phase(-kQuarterPi, ta));
    circuit.measure(0);
    circuit.add(controlled_x(4, ta));
    circuit.add(phase(kQuarterPi, ta));
    circuit.add(controlled_x(4, ta));
    circuit.add(phase(-kQuarterPi, tb));
    circuit.add(controlled_x(4, tb));
    circuit.add(phase(kQuarterPi, tb));
    circuit.add(controlled_x(4, tb));
    circuit.measure(4);
    add_final_stage(circuit);
    validate_circuit(circuit);
    return circuit;
}

Circuit build_toy_circuit(bool include_unflip) {
    Circuit circuit;
    circuit.label = include_unflip ? "mediator-toy" : "mediator-toy-no-unflip";
    circuit.num_qubits = 6;
    circuit.add(pauli_x(0));  // mediator armed
    circuit.add(controlled_x(0, 1));
    circuit.add(controlled_x(0, 2));
    circuit.add(controlled_x(0, 5));
    if (include_unflip) {
        circuit.add(controlled_x(0, 1));
        circuit.add(controlled_x(0, 2));
        circuit.add(controlled_x(0, 5));
    }
    circuit.add(pauli_x(0));  // mediator parked back in |0>
    validate_circuit(circuit);
    return circuit;
}

} // namespace mermin
