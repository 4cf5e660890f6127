#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "mermin/counts.hpp"
#include "mermin/shot.hpp"

namespace mermin {

// Raised when a setting-combination branch received no shots; a silent zero
// would hide a broken run.
class UndefinedAverageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Classification { NonOddSC, OddSC, Discarded };

// +1 for an even number of 1s among the register bits, -1 for odd.
int parity_sign(const std::array<std::uint8_t, 3>& bits_q1q2q3);

std::array<std::uint8_t, 3> register_bits(const ShotRecord& shot);

// q0=0 shots are discarded; q4 then distinguishes the one-phase-gate branch
// (NonOddSC) from the all-three branch (OddSC).
Classification classify_shot(const ShotRecord& shot);

// (plus + minus) / (|plus| + |minus|): the signed-count average of one
// setting combination. Throws UndefinedAverageError when both are zero.
double setting_average(std::int64_t plus, std::int64_t minus);

double total_osc_average(const std::array<double, 3>& osc_averages);

// Sum of the one-phase-gate averages minus the all-three-gate total.
double mermin_m3(const std::array<double, 3>& nosc_averages, double total_osc);

// Signed tallies of one setting combination: `plus` counts even-parity shots
// (weight +1, so plus >= 0) and `minus` odd-parity shots (weight -1, so
// minus <= 0).
struct SettingTally {
    std::int64_t plus = 0;
    std::int64_t minus = 0;
    double average = 0.0;
};

struct ExperimentStats {
    SettingTally nosc;  // q4 = 0: phase-gate on one register qubit
    SettingTally osc;   // q4 = 1: phase-gates on all three
};

struct MerminReport {
    std::array<ExperimentStats, 3> experiments;
    double total_osc_average = 0.0;
    double m3 = 0.0;
    double discard_fraction = 0.0;
    std::uint64_t total_shots = 0;
};

// Full pipeline over one counts table per experiment: classify every key,
// tally signed parities, discard q0=0 shots, and evaluate the Mermin
// statistic. Throws UndefinedAverageError when any branch is empty.
MerminReport analyze_counts(const std::array<CountsTable, 3>& tables);

// Rebuilds a report from the 12 reference signed sums (no shot stream, so
// the discard fraction is zero by construction).
MerminReport report_from_signed_sums(
    const std::array<std::array<std::int64_t, 4>, 3>& sums);  // {nosc+,nosc-,osc+,osc-}

// {experiments:[{nosc:{plus,minus,average}, osc:{...}}, x3], total_osc_average,
// m3, discard_fraction, shots, seed, noise}; seed is null when unknown.
std::string report_to_json(const MerminReport& report,
                           std::optional<std::uint64_t> seed,
                           const std::map<int, double>& noise);

// Fixed-width console table, averages at 9 decimal places.
std::string report_to_text(const MerminReport& report);

// Reads {experiments:[{nosc:{plus,minus}, osc:{plus,minus}}, x3]}.
MerminReport report_from_sums_json_file(const std::string& path);

} // namespace mermin
