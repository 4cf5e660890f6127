#pragma once

#include <map>

#include "mermin/rng.hpp"
#include "mermin/shot.hpp"

namespace mermin {

// Classical readout errors: each recorded bit is inverted independently with
// its qubit's probability. Qubits absent from the map never flip.
struct NoiseModel {
    std::map<int, double> readout_flip;

    double flip_probability(int qubit) const {
        auto it = readout_flip.find(qubit);
        return it == readout_flip.end() ? 0.0 : it->second;
    }
    bool is_trivial() const;
};

// Throws std::invalid_argument unless every p lies in [0, 0.5].
void validate_noise(const NoiseModel& model);

// p on the register qubits q1, q2, q3; assistants stay clean.
NoiseModel register_noise(double p);

// Flips each of the five bits with its qubit's probability. Always consumes
// exactly five uniforms (q0..q4 order) so the stream layout is independent
// of the model's content.
ShotRecord apply_readout_noise(ShotRecord shot, const NoiseModel& model,
                               Substream& stream);

// Expected Mermin statistic when a perfect source is read out through
// independent flips with probability p on each register qubit: 4*(1-2p)^3.
double expected_m3_under_readout(double p);

// Inverse of the above on (0, 4]: the p whose degraded statistic equals
// m3_target, found by bisection to 1e-10. Throws std::invalid_argument for
// targets outside (0, 4].
double calibrate_p_for_target(double m3_target);

} // namespace mermin
