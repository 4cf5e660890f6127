#pragma once

#include "mermin/circuit.hpp"

namespace mermin {

// Which entangled qubit (q1, q2 or q3) receives the phase-gate controlled by
// the first assistant qubit q0; the second assistant q4 drives the other two.
enum class ExperimentId : int { One = 1, Two = 2, Three = 3 };

ExperimentId experiment_id_from_int(int value);  // throws outside 1..3

// 5-qubit circuit: q0 -> |1>, q4 -> |+>, q1q2q3 -> (|000>+i|111>)/sqrt(2),
// then ControlledPhase(-pi/2) from q0 onto q[id] and from q4 onto the other
// two entangled qubits, H on q1..q3, measurements with q0 first, then q4.
Circuit build_experiment(ExperimentId id);

// Same experiment with each two-qubit phase-gate expanded into the
// {P, CX} sequence a backend would run; exactly seven ops sit strictly
// between the q0 and q4 measurements.
Circuit build_transpiled_experiment(ExperimentId id);

// 6-qubit mediator demonstration: q0 flips q1, q2, q5, un-flips them again,
// and is returned to |0>, so every other qubit ends in |0>. Passing
// include_unflip = false yields the broken variant used as a negative
// control.
Circuit build_toy_circuit(bool include_unflip = true);

} // namespace mermin
