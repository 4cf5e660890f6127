#include "mermin/sampler.hpp"

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mermin {

namespace {

void require_all_wires_measured(const Circuit& circuit) {
    if (circuit.num_qubits != 5) {
        throw std::runtime_error("shot sampling expects the 5-wire layout, circuit '" +
                                 circuit.label + "' has " +
                                 std::to_string(circuit.num_qubits));
    }
    std::array<bool, 5> seen{};
    for (int q : circuit.measured_qubits()) {
        seen[static_cast<std::size_t>(q)] = true;
    }
    for (int q = 0; q < 5; ++q) {
        if (!seen[static_cast<std::size_t>(q)]) {
            throw std::runtime_error("circuit '" + circuit.label +
                                     "' never measures q" + std::to_string(q));
        }
    }
}

} // namespace

FinalDistribution final_distribution(const Circuit& circuit) {
    const Statevector state = circuit.final_state();
    FinalDistribution dist;
    dist.num_qubits = state.num_qubits;
    dist.cdf = probabilities(state);
    double running = 0.0;
    for (double& p : dist.cdf) {
        running += p;
        p = running;
    }
    if (!dist.cdf.empty()) {
        dist.cdf.back() = 1.0;  // absorb rounding so every uniform lands
    }
    return dist;
}

int sample_outcome_index(const FinalDistribution& dist, Substream& stream) {
    const double u = stream.next_uniform();
    // First index whose cumulative probability exceeds u.
    std::size_t lo = 0;
    std::size_t hi = dist.cdf.size() - 1;
    while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (dist.cdf[mid] > u) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    return static_cast<int>(lo);
}

ShotRecord sample_shot(const Circuit& circuit, Substream& stream) {
    require_all_wires_measured(circuit);
    const FinalDistribution dist = final_distribution(circuit);
    return shot_from_index(sample_outcome_index(dist, stream));
}

ShotRecord sample_shot_midcircuit(const Circuit& circuit, Substream& stream) {
    require_all_wires_measured(circuit);
    Statevector state = new_zero_state(circuit.num_qubits);
    ShotRecord shot;
    for (const auto& op : circuit.ops) {
        if (const auto* gate = std::get_if<GateOp>(&op)) {
            apply_gate_in_place(state, *gate);
        } else {
            const int q = std::get<Measure>(op).qubit;
            const double p_one = marginal_one(state, q);
            const int bit = stream.next_uniform() < p_one ? 1 : 0;
            project_qubit(state, q, bit);
            shot.bits[static_cast<std::size_t>(q)] = static_cast<std::uint8_t>(bit);
        }
    }
    return shot;
}

namespace {

using Tally = std::array<std::uint64_t, 32>;

CountsTable tally_to_table(const Tally& tally) {
    CountsTable table;
    for (int index = 0; index < 32; ++index) {
        const std::uint64_t n = tally[static_cast<std::size_t>(index)];
        if (n > 0) {
            table.counts[key_from_index(index)] = n;
            table.total_shots += n;
        }
    }
    return table;
}

int draw_noisy_index(const FinalDistribution& dist, const NoiseModel& noise,
                     std::uint64_t seed, std::uint32_t domain, std::uint64_t shot) {
    Substream stream(seed, shot_stream(domain, shot));
    ShotRecord record = shot_from_index(sample_outcome_index(dist, stream));
    record = apply_readout_noise(record, noise, stream);
    return shot_to_index(record);
}

} // namespace

CountsTable sample_counts(const Circuit& circuit, std::uint64_t shots,
                          std::uint64_t seed, std::uint32_t domain,
                          const NoiseModel& noise, bool parallel) {
    require_all_wires_measured(circuit);
    validate_noise(noise);
    const FinalDistribution dist = final_distribution(circuit);

    Tally total{};
#ifdef _OPENMP
    if (parallel) {
        // Per-thread integer tallies; the merge is a sum, so the result does
        // not depend on the thread count or iteration order.
        #pragma omp parallel
        {
            Tally local{};
            #pragma omp for schedule(static)
            for (std::int64_t i = 0; i < static_cast<std::int64_t>(shots); ++i) {
                const int index = draw_noisy_index(dist, noise, seed, domain,
                                                   static_cast<std::uint64_t>(i));
                ++local[static_cast<std::size_t>(index)];
            }
            #pragma omp critical
            {
                for (std::size_t k = 0; k < total.size(); ++k) {
                    total[k] += local[k];
                }
            }
        }
        return tally_to_table(total);
    }
#else
    (void)parallel;
#endif
    for (std::uint64_t i = 0; i < shots; ++i) {
        const int index = draw_noisy_index(dist, noise, seed, domain, i);
        ++total[static_cast<std::size_t>(index)];
    }
    return tally_to_table(total);
}

CountsTable sample_counts_midcircuit(const Circuit& circuit, std::uint64_t shots,
                                     std::uint64_t seed, std::uint32_t domain) {
    require_all_wires_measured(circuit);
    Tally total{};
    for (std::uint64_t i = 0; i < shots; ++i) {
        Substream stream(seed, shot_stream(domain, i));
        const ShotRecord shot = sample_shot_midcircuit(circuit, stream);
        ++total[static_cast<std::size_t>(shot_to_index(shot))];
    }
    return tally_to_table(total);
}

} // namespace mermin
