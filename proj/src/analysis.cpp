#include "mermin/analysis.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace mermin {

using ordered_json = nlohmann::ordered_json;

int parity_sign(const std::array<std::uint8_t, 3>& bits_q1q2q3) {
    const int ones = bits_q1q2q3[0] + bits_q1q2q3[1] + bits_q1q2q3[2];
    return (ones % 2 == 0) ? +1 : -1;
}

std::array<std::uint8_t, 3> register_bits(const ShotRecord& shot) {
    return {shot.bits[1], shot.bits[2], shot.bits[3]};
}

Classification classify_shot(const ShotRecord& shot) {
    if (shot.bits[0] == 0) return Classification::Discarded;
    return shot.bits[4] == 0 ? Classification::NonOddSC : Classification::OddSC;
}

double setting_average(std::int64_t plus, std::int64_t minus) {
    const std::int64_t denom = std::llabs(plus) + std::llabs(minus);
    if (denom == 0) {
        throw UndefinedAverageError("setting combination received no shots");
    }
    return static_cast<double>(plus + minus) / static_cast<double>(denom);
}

double total_osc_average(const std::array<double, 3>& osc_averages) {
    return (osc_averages[0] + osc_averages[1] + osc_averages[2]) / 3.0;
}

double mermin_m3(const std::array<double, 3>& nosc_averages, double total_osc) {
    return nosc_averages[0] + nosc_averages[1] + nosc_averages[2] - total_osc;
}

namespace {

void finalize_report(MerminReport& report) {
    std::array<double, 3> nosc_avgs{};
    std::array<double, 3> osc_avgs{};
    for (std::size_t i = 0; i < 3; ++i) {
        auto& exp = report.experiments[i];
        exp.nosc.average = setting_average(exp.nosc.plus, exp.nosc.minus);
        exp.osc.average = setting_average(exp.osc.plus, exp.osc.minus);
        nosc_avgs[i] = exp.nosc.average;
        osc_avgs[i] = exp.osc.average;
    }
    report.total_osc_average = total_osc_average(osc_avgs);
    report.m3 = mermin_m3(nosc_avgs, report.total_osc_average);
}

} // namespace

MerminReport analyze_counts(const std::array<CountsTable, 3>& tables) {
    MerminReport report;
    std::uint64_t discarded = 0;
    for (std::size_t i = 0; i < 3; ++i) {
        validate_counts(tables[i]);
        auto& exp = report.experiments[i];
        for (const auto& [key, count] : tables[i].counts) {
            const ShotRecord shot = shot_from_key(key);
            const auto n = static_cast<std::int64_t>(count);
            switch (classify_shot(shot)) {
                case Classification::Discarded:
                    discarded += count;
                    break;
                case Classification::NonOddSC:
                    if (parity_sign(register_bits(shot)) > 0) {
                        exp.nosc.plus += n;
                    } else {
                        exp.nosc.minus -= n;
                    }
                    break;
                case Classification::OddSC:
                    if (parity_sign(register_bits(shot)) > 0) {
                        exp.osc.plus += n;
                    } else {
                        exp.osc.minus -= n;
                    }
                    break;
            }
        }
        report.total_shots += tables[i].total_shots;
    }
    if (report.total_shots == 0) {
        throw UndefinedAverageError("no shots in any counts table");
    }
    report.discard_fraction =
        static_cast<double>(discarded) / static_cast<double>(report.total_shots);
    finalize_report(report);
    return report;
}

MerminReport report_from_signed_sums(
    const std::array<std::array<std::int64_t, 4>, 3>& sums) {
    MerminReport report;
    for (std::size_t i = 0; i < 3; ++i) {
        auto& exp = report.experiments[i];
        exp.nosc.plus = sums[i][0];
        exp.nosc.minus = sums[i][1];
        exp.osc.plus = sums[i][2];
        exp.osc.minus = sums[i][3];
        if (exp.nosc.plus < 0 || exp.osc.plus < 0 || exp.nosc.minus > 0 ||
            exp.osc.minus > 0) {
            throw std::invalid_argument(
                "signed sums must be ordered plus (>=0), minus (<=0)");
        }
        report.total_shots += static_cast<std::uint64_t>(
            exp.nosc.plus - exp.nosc.minus + exp.osc.plus - exp.osc.minus);
    }
    report.discard_fraction = 0.0;
    finalize_report(report);
    return report;
}

namespace {

std::string fixed9(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.9f", value);
    return buffer;
}

ordered_json tally_json(const SettingTally& tally) {
    ordered_json j;
    j["plus"] = tally.plus;
    j["minus"] = tally.minus;
    j["average"] = tally.average;
    return j;
}

} // namespace

std::string report_to_json(const MerminReport& report,
                           std::optional<std::uint64_t> seed,
                           const std::map<int, double>& noise) {
    ordered_json j;
    j["experiments"] = ordered_json::array();
    for (const auto& exp : report.experiments) {
        ordered_json je;
        je["nosc"] = tally_json(exp.nosc);
        je["osc"] = tally_json(exp.osc);
        j["experiments"].push_back(je);
    }
    j["total_osc_average"] = report.total_osc_average;
    j["m3"] = report.m3;
    j["discard_fraction"] = report.discard_fraction;
    j["shots"] = report.total_shots;
    if (seed.has_value()) {
        j["seed"] = *seed;
    } else {
        j["seed"] = nullptr;
    }
    ordered_json jnoise = ordered_json::object();
    for (const auto& [qubit, p] : noise) {
        jnoise["q" + std::to_string(qubit)] = p;
    }
    j["noise"] = jnoise;
    return j.dump(2) + "\n";
}

std::string report_to_text(const MerminReport& report) {
    std::ostringstream out;
    out << "experiment  branch  plus      minus     average\n";
    for (std::size_t i = 0; i < 3; ++i) {
        const auto& exp = report.experiments[i];
        char line[128];
        std::snprintf(line, sizeof(line), "%-11zu %-7s %+8lld %+8lld  %s\n", i + 1,
                      "nosc", static_cast<long long>(exp.nosc.plus),
                      static_cast<long long>(exp.nosc.minus),
                      fixed9(exp.nosc.average).c_str());
        out << line;
        std::snprintf(line, sizeof(line), "%-11zu %-7s %+8lld %+8lld  %s\n", i + 1,
                      "osc", static_cast<long long>(exp.osc.plus),
                      static_cast<long long>(exp.osc.minus),
                      fixed9(exp.osc.average).c_str());
        out << line;
    }
    out << "total_osc_average " << fixed9(report.total_osc_average) << "\n";
    out << "m3                " << fixed9(report.m3) << "\n";
    out << "discard_fraction  " << fixed9(report.discard_fraction) << "\n";
    out << "shots             " << report.total_shots << "\n";
    return out.str();
}

MerminReport report_from_sums_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open sums file " + path);
    }
    ordered_json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error(std::string("sums JSON parse error: ") + e.what());
    }
    std::array<std::array<std::int64_t, 4>, 3> sums{};
    try {
        const auto& experiments = j.at("experiments");
        if (experiments.size() != 3) {
            throw std::runtime_error("sums file must list exactly 3 experiments");
        }
        for (std::size_t i = 0; i < 3; ++i) {
            const auto& je = experiments.at(i);
            sums[i][0] = je.at("nosc").at("plus").get<std::int64_t>();
            sums[i][1] = je.at("nosc").at("minus").get<std::int64_t>();
            sums[i][2] = je.at("osc").at("plus").get<std::int64_t>();
            sums[i][3] = je.at("osc").at("minus").get<std::int64_t>();
        }
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("sums JSON schema error: ") + e.what());
    }
    return report_from_signed_sums(sums);
}

} // namespace mermin
