#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace mermin {

using complex_t = std::complex<double>;
using cvector_t = std::vector<complex_t>;
using rvector_t = std::vector<double>;

constexpr int kMaxQubits = 6;

// Dense amplitude vector for up to kMaxQubits qubits. Bit k of a basis index
// is the state of qubit q[k]; q0 is the least significant bit.
struct Statevector {
    int num_qubits = 0;
    cvector_t amplitudes;

    std::size_t dim() const { return amplitudes.size(); }
};

enum class GateKind { Hadamard, PauliX, Phase, ControlledPhase, ControlledX };

struct GateOp {
    GateKind kind;
    int target = 0;
    int control = -1;    // required for controlled kinds, -1 otherwise
    double theta = 0.0;  // radians, Phase/ControlledPhase only

    bool is_controlled() const {
        return kind == GateKind::ControlledPhase || kind == GateKind::ControlledX;
    }
};

GateOp hadamard(int target);
GateOp pauli_x(int target);
GateOp phase(double theta, int target);
GateOp controlled_phase(double theta, int control, int target);
GateOp controlled_x(int control, int target);

std::string gate_name(GateKind kind);

// |0...0> on num_qubits qubits; throws std::invalid_argument outside 1..6.
Statevector new_zero_state(int num_qubits);

// Applies the gate's unitary and returns the new state. Throws
// std::invalid_argument on out-of-range wire indices.
Statevector apply_gate(const Statevector& state, const GateOp& gate);

void apply_gate_in_place(Statevector& state, const GateOp& gate);

// Born-rule probabilities, element k = |amplitude_k|^2.
rvector_t probabilities(const Statevector& state);

double norm_squared(const Statevector& state);

// Marginal probability that qubit `target` reads 1.
double marginal_one(const Statevector& state, int target);

// Projects qubit `target` onto `bit` and renormalizes. Throws
// std::runtime_error if the branch has (numerically) zero probability.
void project_qubit(Statevector& state, int target, int bit);

} // namespace mermin
