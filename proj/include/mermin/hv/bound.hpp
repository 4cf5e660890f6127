#pragma once

#include <array>
#include <utility>

namespace mermin::hv {

enum class Setting { PhaseGate, Identity };

// One deterministic strategy: each register qubit answers +1 or -1 to each
// of the two settings, independent of everything else. The first assistant's
// variables never enter — by construction they cannot alter the response.
struct HvResponseModel {
    // response[qubit-1][setting] with qubit in 1..3
    std::array<std::array<int, 2>, 3> response{};

    int respond(int register_qubit, Setting setting) const;
};

// Which register qubits get the phase-gate, as selected by the second
// assistant's bit: q4=0 puts it on q[experiment] only, q4=1 on all three.
std::array<Setting, 3> setting_rule(int experiment, int q4_bit);

// The three one-phase-gate products minus the all-three product.
int mermin_value(const HvResponseModel& model);

// Extremes of the statistic over all 64 deterministic strategies.
std::pair<int, int> classical_bound_oracle();  // {min, max}

// Strategy number i in 0..63, two response bits per qubit.
HvResponseModel strategy_from_index(int i);

} // namespace mermin::hv
