#include "doctest.h"

#include <cmath>
#include <numbers>

#include "mermin/rng.hpp"
#include "mermin/statevector.hpp"

#include "../kron_oracle.hpp"

using namespace mermin;

namespace {

constexpr double kPi = std::numbers::pi;

double max_amplitude_error(const Statevector& a, const Statevector& b) {
    REQUIRE(a.dim() == b.dim());
    double worst = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        worst = std::max(worst, std::abs(a.amplitudes[i] - b.amplitudes[i]));
    }
    return worst;
}

} // namespace

TEST_CASE("zero state has a single unit amplitude") {
    for (int n = 1; n <= 6; ++n) {
        const Statevector state = new_zero_state(n);
        CHECK(state.dim() == (std::size_t{1} << n));
        CHECK(state.amplitudes[0] == complex_t{1.0, 0.0});
        for (std::size_t i = 1; i < state.dim(); ++i) {
            CHECK(state.amplitudes[i] == complex_t{0.0, 0.0});
        }
    }
    CHECK_THROWS_AS(new_zero_state(0), std::invalid_argument);
    CHECK_THROWS_AS(new_zero_state(7), std::invalid_argument);
}

TEST_CASE("single-gate algebra on one qubit") {
    const double s = 1.0 / std::sqrt(2.0);

    Statevector state = new_zero_state(1);
    state = apply_gate(state, hadamard(0));
    CHECK(std::abs(state.amplitudes[0] - complex_t{s, 0}) < 1e-12);
    CHECK(std::abs(state.amplitudes[1] - complex_t{s, 0}) < 1e-12);

    state = new_zero_state(1);
    state = apply_gate(state, pauli_x(0));
    state = apply_gate(state, phase(-kPi / 2.0, 0));
    // P(-pi/2)|1> = -i|1>
    CHECK(std::abs(state.amplitudes[1] - complex_t{0, -1}) < 1e-12);
}

TEST_CASE("controlled-phase acts only on the |11> component") {
    for (int base = 0; base < 4; ++base) {
        Statevector state = new_zero_state(2);
        if (base & 1) state = apply_gate(state, pauli_x(0));
        if (base & 2) state = apply_gate(state, pauli_x(1));
        state = apply_gate(state, controlled_phase(-kPi / 2.0, 0, 1));
        const complex_t expected =
            (base == 3) ? complex_t{0, -1} : complex_t{1, 0};
        CHECK(std::abs(state.amplitudes[static_cast<std::size_t>(base)] - expected) <
              1e-12);
    }
}

TEST_CASE("every gate kind matches the dense-matrix route") {
    // A fixed little program touching all five kinds on 3 qubits.
    const GateOp program[] = {
        hadamard(0),        pauli_x(1),
        phase(-kPi / 2, 0), controlled_x(0, 2),
        hadamard(2),        controlled_phase(-kPi / 2, 2, 1),
        phase(kPi / 2, 1),  controlled_x(2, 0),
    };
    Statevector fast = new_zero_state(3);
    Statevector slow = new_zero_state(3);
    for (const auto& gate : program) {
        fast = apply_gate(fast, gate);
        slow = kron_oracle::apply(slow, gate);
        CHECK(max_amplitude_error(fast, slow) < 1e-12);
    }
    CHECK(std::abs(norm_squared(fast) - 1.0) < 1e-9);
}

TEST_CASE("randomized programs agree with the dense-matrix route") {
    Substream stream(2024, 7);
    for (int trial = 0; trial < 25; ++trial) {
        const int n = 2 + static_cast<int>(stream.next_u64() % 4);  // 2..5 qubits
        Statevector fast = new_zero_state(n);
        Statevector slow = new_zero_state(n);
        for (int step = 0; step < 12; ++step) {
            const int kind = static_cast<int>(stream.next_u64() % 5);
            const int target = static_cast<int>(stream.next_u64() % n);
            int control = static_cast<int>(stream.next_u64() % n);
            if (control == target) control = (control + 1) % n;
            const double theta = (stream.next_uniform() - 0.5) * 2.0 * kPi;
            GateOp gate = hadamard(target);
            switch (kind) {
                case 0: gate = hadamard(target); break;
                case 1: gate = pauli_x(target); break;
                case 2: gate = phase(theta, target); break;
                case 3: gate = controlled_phase(theta, control, target); break;
                case 4: gate = controlled_x(control, target); break;
            }
            fast = apply_gate(fast, gate);
            slow = kron_oracle::apply(slow, gate);
        }
        CHECK(max_amplitude_error(fast, slow) < 1e-12);
        CHECK(std::abs(norm_squared(fast) - 1.0) < 1e-9);
    }
}

TEST_CASE("gate followed by its inverse restores the state") {
    Statevector state = new_zero_state(3);
    // Scramble into a generic state first.
    state = apply_gate(state, hadamard(0));
    state = apply_gate(state, controlled_x(0, 1));
    state = apply_gate(state, phase(0.7, 1));
    state = apply_gate(state, hadamard(2));
    const Statevector reference = state;

    const GateOp pairs[][2] = {
        {hadamard(1), hadamard(1)},
        {pauli_x(2), pauli_x(2)},
        {phase(-kPi / 2, 0), phase(kPi / 2, 0)},
        {controlled_phase(-kPi / 2, 0, 2), controlled_phase(kPi / 2, 0, 2)},
        {controlled_x(1, 2), controlled_x(1, 2)},
    };
    for (const auto& pair : pairs) {
        state = apply_gate(state, pair[0]);
        state = apply_gate(state, pair[1]);
        CHECK(max_amplitude_error(state, reference) < 1e-12);
    }
}

TEST_CASE("wire bounds are checked") {
    Statevector state = new_zero_state(2);
    CHECK_THROWS_AS(apply_gate(state, hadamard(2)), std::invalid_argument);
    CHECK_THROWS_AS(apply_gate(state, controlled_x(0, 5)), std::invalid_argument);
    CHECK_THROWS_AS(apply_gate(state, controlled_x(3, 1)), std::invalid_argument);
}

TEST_CASE("probabilities and marginals follow the amplitudes") {
    Statevector state = new_zero_state(2);
    state = apply_gate(state, hadamard(0));
    const rvector_t probs = probabilities(state);
    CHECK(std::abs(probs[0] - 0.5) < 1e-12);
    CHECK(std::abs(probs[1] - 0.5) < 1e-12);
    CHECK(std::abs(probs[2]) < 1e-12);
    CHECK(std::abs(marginal_one(state, 0) - 0.5) < 1e-12);
    CHECK(std::abs(marginal_one(state, 1)) < 1e-12);
}

TEST_CASE("projection keeps the selected branch and renormalizes") {
    Statevector state = new_zero_state(2);
    state = apply_gate(state, hadamard(0));
    state = apply_gate(state, controlled_x(0, 1));  // (|00> + |11>)/sqrt2
    Statevector branch = state;
    project_qubit(branch, 0, 1);
    CHECK(std::abs(branch.amplitudes[3] - complex_t{1, 0}) < 1e-12);
    CHECK(std::abs(norm_squared(branch) - 1.0) < 1e-12);

    Statevector impossible = new_zero_state(1);
    CHECK_THROWS_AS(project_qubit(impossible, 0, 1), std::runtime_error);
}
