#include "mermin/hv/bound.hpp"

#include <stdexcept>

namespace mermin::hv {

int HvResponseModel::respond(int register_qubit, Setting setting) const {
    if (register_qubit < 1 || register_qubit > 3) {
        throw std::invalid_argument("register qubit must be 1, 2 or 3");
    }
    const int value = response[static_cast<std::size_t>(register_qubit - 1)]
                              [static_cast<std::size_t>(setting)];
    if (value != 1 && value != -1) {
        throw std::invalid_argument("responses must be +1 or -1");
    }
    return value;
}

std::array<Setting, 3> setting_rule(int experiment, int q4_bit) {
    if (experiment < 1 || experiment > 3) {
        throw std::invalid_argument("experiment must be 1, 2 or 3");
    }
    if (q4_bit != 0 && q4_bit != 1) {
        throw std::invalid_argument("q4 bit must be 0 or 1");
    }
    std::array<Setting, 3> settings{Setting::Identity, Setting::Identity,
                                    Setting::Identity};
    if (q4_bit == 1) {
        settings = {Setting::PhaseGate, Setting::PhaseGate, Setting::PhaseGate};
    } else {
        settings[static_cast<std::size_t>(experiment - 1)] = Setting::PhaseGate;
    }
    return settings;
}

namespace {

int product_under(const HvResponseModel& model, const std::array<Setting, 3>& settings) {
    int product = 1;
    for (int q = 1; q <= 3; ++q) {
        product *= model.respond(q, settings[static_cast<std::size_t>(q - 1)]);
    }
    return product;
}

} // namespace

int mermin_value(const HvResponseModel& model) {
    int value = 0;
    for (int experiment = 1; experiment <= 3; ++experiment) {
        value += product_under(model, setting_rule(experiment, 0));
    }
    value -= product_under(model, setting_rule(1, 1));  // same for any experiment
    return value;
}

HvResponseModel strategy_from_index(int i) {
    if (i < 0 || i >= 64) {
        throw std::invalid_argument("strategy index must lie in 0..63");
    }
    HvResponseModel model;
    for (std::size_t q = 0; q < 3; ++q) {
        for (std::size_t s = 0; s < 2; ++s) {
            const int bit = (i >> (2 * q + s)) & 1;
            model.response[q][s] = bit ? -1 : +1;
        }
    }
    return model;
}

std::pair<int, int> classical_bound_oracle() {
    int min_value = mermin_value(strategy_from_index(0));
    int max_value = min_value;
    for (int i = 1; i < 64; ++i) {
        const int value = mermin_value(strategy_from_index(i));
        if (value < min_value) min_value = value;
        if (value > max_value) max_value = value;
    }
    return {min_value, max_value};
}

} // namespace mermin::hv
