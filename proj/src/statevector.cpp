#include "mermin/statevector.hpp"

#include <cmath>
#include <stdexcept>

namespace mermin {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

void check_wire(const Statevector& state, int wire, const char* what) {
    if (wire < 0 || wire >= state.num_qubits) {
        throw std::invalid_argument(std::string(what) + " index out of range");
    }
}

} // namespace

GateOp hadamard(int target) { return {GateKind::Hadamard, target, -1, 0.0}; }
GateOp pauli_x(int target) { return {GateKind::PauliX, target, -1, 0.0}; }
GateOp phase(double theta, int target) { return {GateKind::Phase, target, -1, theta}; }

GateOp controlled_phase(double theta, int control, int target) {
    return {GateKind::ControlledPhase, target, control, theta};
}

GateOp controlled_x(int control, int target) {
    return {GateKind::ControlledX, target, control, 0.0};
}

std::string gate_name(GateKind kind) {
    switch (kind) {
        case GateKind::Hadamard: return "h";
        case GateKind::PauliX: return "x";
        case GateKind::Phase: return "p";
        case GateKind::ControlledPhase: return "cp";
        case GateKind::ControlledX: return "cx";
    }
    throw std::logic_error("unknown gate kind");
}

Statevector new_zero_state(int num_qubits) {
    if (num_qubits < 1 || num_qubits > kMaxQubits) {
        throw std::invalid_argument("num_qubits must be in 1..6");
    }
    Statevector state;
    state.num_qubits = num_qubits;
    state.amplitudes.assign(std::size_t{1} << num_qubits, complex_t{0.0, 0.0});
    state.amplitudes[0] = complex_t{1.0, 0.0};
    return state;
}

void apply_gate_in_place(Statevector& state, const GateOp& gate) {
    check_wire(state, gate.target, "target");
    if (gate.is_controlled()) {
        check_wire(state, gate.control, "control");
        if (gate.control == gate.target) {
            throw std::invalid_argument("control equals target");
        }
    } else if (!std::isfinite(gate.theta)) {
        throw std::invalid_argument("non-finite phase angle");
    }

    auto& amps = state.amplitudes;
    const std::size_t dim = amps.size();
    const std::size_t t_mask = std::size_t{1} << gate.target;

    switch (gate.kind) {
        case GateKind::Hadamard: {
            for (std::size_t i = 0; i < dim; ++i) {
                if (i & t_mask) continue;
                const complex_t a0 = amps[i];
                const complex_t a1 = amps[i | t_mask];
                amps[i] = (a0 + a1) * kInvSqrt2;
                amps[i | t_mask] = (a0 - a1) * kInvSqrt2;
            }
            break;
        }
        case GateKind::PauliX: {
            for (std::size_t i = 0; i < dim; ++i) {
                if (i & t_mask) continue;
                std::swap(amps[i], amps[i | t_mask]);
            }
            break;
        }
        case GateKind::Phase: {
            const complex_t factor = std::polar(1.0, gate.theta);
            for (std::size_t i = 0; i < dim; ++i) {
                if (i & t_mask) amps[i] *= factor;
            }
            break;
        }
        case GateKind::ControlledPhase: {
            const complex_t factor = std::polar(1.0, gate.theta);
            const std::size_t c_mask = std::size_t{1} << gate.control;
            for (std::size_t i = 0; i < dim; ++i) {
                if ((i & t_mask) && (i & c_mask)) amps[i] *= factor;
            }
            break;
        }
        case GateKind::ControlledX: {
            const std::size_t c_mask = std::size_t{1} << gate.control;
            for (std::size_t i = 0; i < dim; ++i) {
                if ((i & c_mask) && !(i & t_mask)) {
                    std::swap(amps[i], amps[i | t_mask]);
                }
            }
            break;
        }
    }
}

Statevector apply_gate(const Statevector& state, const GateOp& gate) {
    Statevector out = state;
    apply_gate_in_place(out, gate);
    return out;
}

rvector_t probabilities(const Statevector& state) {
    rvector_t probs(state.dim());
    for (std::size_t i = 0; i < probs.size(); ++i) {
        probs[i] = std::norm(state.amplitudes[i]);
    }
    return probs;
}

double norm_squared(const Statevector& state) {
    double total = 0.0;
    for (const auto& a : state.amplitudes) total += std::norm(a);
    return total;
}

double marginal_one(const Statevector& state, int target) {
    check_wire(state, target, "target");
    const std::size_t t_mask = std::size_t{1} << target;
    double p = 0.0;
    for (std::size_t i = 0; i < state.dim(); ++i) {
        if (i & t_mask) p += std::norm(state.amplitudes[i]);
    }
    return p;
}

void project_qubit(Statevector& state, int target, int bit) {
    check_wire(state, target, "target");
    const std::size_t t_mask = std::size_t{1} << target;
    double kept = 0.0;
    for (std::size_t i = 0; i < state.dim(); ++i) {
        const bool is_one = (i & t_mask) != 0;
        if (is_one == (bit != 0)) {
            kept += std::norm(state.amplitudes[i]);
        } else {
            state.amplitudes[i] = complex_t{0.0, 0.0};
        }
    }
    if (kept <= 0.0) {
        throw std::runtime_error("projection onto zero-probability branch");
    }
    const double scale = 1.0 / std::sqrt(kept);
    for (auto& a : state.amplitudes) a *= scale;
}

} // namespace mermin
