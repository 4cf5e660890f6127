#include "mermin/noise.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mermin {

bool NoiseModel::is_trivial() const {
    for (const auto& [qubit, p] : readout_flip) {
        if (p != 0.0) return false;
    }
    return true;
}

void validate_noise(const NoiseModel& model) {
    for (const auto& [qubit, p] : model.readout_flip) {
        if (qubit < 0 || qubit > 4) {
            throw std::invalid_argument("noise qubit label out of range: " +
                                        std::to_string(qubit));
        }
        if (!(p >= 0.0 && p <= 0.5)) {
            throw std::invalid_argument("flip probability must lie in [0, 0.5], got " +
                                        std::to_string(p));
        }
    }
}

NoiseModel register_noise(double p) {
    NoiseModel model;
    model.readout_flip = {{1, p}, {2, p}, {3, p}};
    validate_noise(model);
    return model;
}

ShotRecord apply_readout_noise(ShotRecord shot, const NoiseModel& model,
                               Substream& stream) {
    for (int qubit = 0; qubit < 5; ++qubit) {
        const double u = stream.next_uniform();
        if (u < model.flip_probability(qubit)) {
            shot.bits[static_cast<std::size_t>(qubit)] ^= 1;
        }
    }
    return shot;
}

double expected_m3_under_readout(double p) {
    if (!(p >= 0.0 && p <= 0.5)) {
        throw std::invalid_argument("flip probability must lie in [0, 0.5]");
    }
    const double contrast = 1.0 - 2.0 * p;
    return 4.0 * contrast * contrast * contrast;
}

double calibrate_p_for_target(double m3_target) {
    if (!(m3_target > 0.0 && m3_target <= 4.0)) {
        throw std::invalid_argument("calibration target must lie in (0, 4]");
    }
    double lo = 0.0;   // expected value 4 (>= any valid target)
    double hi = 0.5;   // expected value 0 (< any valid target)
    while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        if (expected_m3_under_readout(mid) >= m3_target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace mermin
