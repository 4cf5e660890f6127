#pragma once

#include <array>
#include <cstdint>

namespace mermin {

// Joint readout of the five experiment wires; bits[k] is qubit q[k]'s bit.
// q0 and q4 are the assistants, q1..q3 the entangled register.
struct ShotRecord {
    std::array<std::uint8_t, 5> bits{};
};

inline int shot_to_index(const ShotRecord& shot) {
    int index = 0;
    for (int k = 0; k < 5; ++k) {
        index |= (shot.bits[static_cast<std::size_t>(k)] & 1) << k;
    }
    return index;
}

inline ShotRecord shot_from_index(int index) {
    ShotRecord shot;
    for (int k = 0; k < 5; ++k) {
        shot.bits[static_cast<std::size_t>(k)] =
            static_cast<std::uint8_t>((index >> k) & 1);
    }
    return shot;
}

} // namespace mermin
