#include "mermin/hv/mixture.hpp"

#include <array>
#include <stdexcept>

#include "mermin/rng.hpp"
#include "mermin/shot.hpp"

namespace mermin::hv {

namespace {

// Register patterns (q1,q2,q3) by parity; a shot picks uniformly within its
// parity class.
constexpr std::array<std::array<std::uint8_t, 3>, 4> kEvenPatterns = {{
    {0, 0, 0}, {0, 1, 1}, {1, 0, 1}, {1, 1, 0}}};
constexpr std::array<std::array<std::uint8_t, 3>, 4> kOddPatterns = {{
    {1, 1, 1}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};

using Tally = std::array<std::uint64_t, 32>;

int draw_outcome_index(double arranged_fraction, int sc_bit, mermin::Substream& stream) {
    // Fixed three-draw layout per shot: mixture coin, parity coin, pattern
    // pick. The parity coin is consumed even for arranged shots so the
    // stream layout does not depend on the first draw.
    const bool arranged = stream.next_bernoulli(arranged_fraction);
    const bool parity_coin_odd = stream.next_bernoulli(0.5);
    // Arranged behavior: one phase-gate (q4=0) locks even parity, all three
    // (q4=1) locks odd.
    const bool odd_parity = arranged ? (sc_bit == 1) : parity_coin_odd;
    int pick = static_cast<int>(stream.next_uniform() * 4.0);
    if (pick > 3) pick = 3;
    const auto& pattern = odd_parity ? kOddPatterns[static_cast<std::size_t>(pick)]
                                     : kEvenPatterns[static_cast<std::size_t>(pick)];
    mermin::ShotRecord shot;
    shot.bits[0] = 1;
    shot.bits[1] = pattern[0];
    shot.bits[2] = pattern[1];
    shot.bits[3] = pattern[2];
    shot.bits[4] = static_cast<std::uint8_t>(sc_bit);
    return mermin::shot_to_index(shot);
}

void tally_branch(Tally& tally, double arranged_fraction, int sc_bit,
                  std::uint32_t domain, std::uint64_t shots_per_sc,
                  std::uint64_t seed, bool parallel) {
#ifdef _OPENMP
    if (parallel) {
        Tally total{};
        #pragma omp parallel
        {
            Tally local{};
            #pragma omp for schedule(static)
            for (std::int64_t i = 0; i < static_cast<std::int64_t>(shots_per_sc); ++i) {
                mermin::Substream stream(
                    seed, mermin::shot_stream(domain, static_cast<std::uint64_t>(i)));
                ++local[static_cast<std::size_t>(
                    draw_outcome_index(arranged_fraction, sc_bit, stream))];
            }
            #pragma omp critical
            {
                for (std::size_t k = 0; k < total.size(); ++k) {
                    total[k] += local[k];
                }
            }
        }
        for (std::size_t k = 0; k < tally.size(); ++k) {
            tally[k] += total[k];
        }
        return;
    }
#else
    (void)parallel;
#endif
    for (std::uint64_t i = 0; i < shots_per_sc; ++i) {
        mermin::Substream stream(seed, mermin::shot_stream(domain, i));
        ++tally[static_cast<std::size_t>(
            draw_outcome_index(arranged_fraction, sc_bit, stream))];
    }
}

} // namespace

std::array<mermin::CountsTable, 3> sample_hv_shots(double arranged_fraction,
                                                   std::uint64_t shots_per_sc,
                                                   std::uint64_t seed, bool parallel) {
    if (!(arranged_fraction >= 0.0 && arranged_fraction <= 1.0)) {
        throw std::invalid_argument("arranged fraction must lie in [0, 1]");
    }
    std::array<mermin::CountsTable, 3> tables;
    for (int experiment = 1; experiment <= 3; ++experiment) {
        Tally tally{};
        for (int sc_bit = 0; sc_bit <= 1; ++sc_bit) {
            const auto domain =
                static_cast<std::uint32_t>(10 * experiment + sc_bit);
            tally_branch(tally, arranged_fraction, sc_bit, domain, shots_per_sc,
                         seed, parallel);
        }
        auto& table = tables[static_cast<std::size_t>(experiment - 1)];
        for (int index = 0; index < 32; ++index) {
            const std::uint64_t n = tally[static_cast<std::size_t>(index)];
            if (n > 0) {
                table.counts[mermin::key_from_index(index)] = n;
                table.total_shots += n;
            }
        }
    }
    return tables;
}

double estimate_arranged_fraction(double m3) {
    if (!(m3 >= -4.0 && m3 <= 4.0)) {
        throw std::invalid_argument("statistic must lie in [-4, 4]");
    }
    return m3 / 4.0;
}

} // namespace mermin::hv
