#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "mermin/shot.hpp"

namespace mermin {

// Frequency table over 5-bit joint outcomes. Keys read "c4 c3 c2 c1 c0"
// left-to-right, i.e. the assistants sit on the outside and the entangled
// register in the middle.
struct CountsTable {
    std::map<std::string, std::uint64_t> counts;
    std::uint64_t total_shots = 0;

    void record(const ShotRecord& shot, std::uint64_t n = 1);
};

// "c4 c3 c2 c1 c0" <-> amplitude index (bit k = qubit q[k]).
std::string key_from_index(int index);
int index_from_key(const std::string& key);  // throws on malformed keys

std::string key_from_shot(const ShotRecord& shot);
ShotRecord shot_from_key(const std::string& key);

// Throws std::runtime_error when counts do not sum to total_shots or a key
// is malformed.
void validate_counts(const CountsTable& table);

CountsTable merge_counts(const CountsTable& a, const CountsTable& b);

// CSV "bitstring,count" sorted by bitstring, plus a JSON mirror of the same
// rows. Round-trips exactly.
std::string counts_to_csv(const CountsTable& table);
CountsTable counts_from_csv(const std::string& text);
std::string counts_to_json(const CountsTable& table);
CountsTable counts_from_json(const std::string& text);

void save_counts_csv(const CountsTable& table, const std::string& path);
void save_counts_json(const CountsTable& table, const std::string& path);
CountsTable load_counts(const std::string& path);  // dispatches on extension

} // namespace mermin
