#pragma once

#include <cstdint>

#include "mermin/circuit.hpp"
#include "mermin/counts.hpp"
#include "mermin/noise.hpp"
#include "mermin/rng.hpp"
#include "mermin/shot.hpp"

namespace mermin {

// Cumulative Born-rule distribution of a circuit's final state, built once
// and shared read-only across sampling threads.
struct FinalDistribution {
    int num_qubits = 0;
    rvector_t cdf;
};

FinalDistribution final_distribution(const Circuit& circuit);

int sample_outcome_index(const FinalDistribution& dist, Substream& stream);

// One joint outcome of a circuit that measures all of q0..q4, drawn from the
// final-state distribution. Deterministic given the stream. Throws
// std::runtime_error when one of the five wires is never measured.
ShotRecord sample_shot(const Circuit& circuit, Substream& stream);

// Reference path: walk the op list, projecting each measured qubit as its
// measurement is reached. Same joint distribution as sample_shot for
// circuits without classically-conditioned gates.
ShotRecord sample_shot_midcircuit(const Circuit& circuit, Substream& stream);

// `shots` outcomes through optional readout noise, tallied into a counts
// table. Shot i draws from Substream(seed, shot_stream(domain, i)), so the
// table is bitwise identical whether sampled serially or across threads.
CountsTable sample_counts(const Circuit& circuit, std::uint64_t shots,
                          std::uint64_t seed, std::uint32_t domain,
                          const NoiseModel& noise = {}, bool parallel = true);

// Bulk version of the reference path (no noise), for cross-validation.
CountsTable sample_counts_midcircuit(const Circuit& circuit, std::uint64_t shots,
                                     std::uint64_t seed, std::uint32_t domain);

} // namespace mermin
