#pragma once

#include <array>
#include <cstdint>

#include "mermin/counts.hpp"

namespace mermin::hv {

// Hidden-variable mixture source: each shot's register parity is locked to
// the selected setting combination with probability `arranged_fraction`
// (the correlated behavior) and uniform otherwise (the independent
// behavior). Emits one counts table per experiment, `shots_per_sc` shots
// for each of the two setting combinations, with q0=1 always and q4 equal
// to the combination bit. The expected Mermin statistic is
// 4 * arranged_fraction. Throws std::invalid_argument outside [0, 1].
std::array<mermin::CountsTable, 3> sample_hv_shots(double arranged_fraction,
                                                   std::uint64_t shots_per_sc,
                                                   std::uint64_t seed,
                                                   bool parallel = true);

// Inverts the mixture law: the fraction whose expected statistic is m3.
// Throws std::invalid_argument outside [-4, 4].
double estimate_arranged_fraction(double m3);

} // namespace mermin::hv
