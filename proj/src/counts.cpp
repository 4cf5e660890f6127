#include "mermin/counts.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace mermin {

using ordered_json = nlohmann::ordered_json;

void CountsTable::record(const ShotRecord& shot, std::uint64_t n) {
    counts[key_from_shot(shot)] += n;
    total_shots += n;
}

std::string key_from_index(int index) {
    if (index < 0 || index >= 32) {
        throw std::runtime_error("outcome index out of range");
    }
    std::string key(5, '0');
    for (int k = 0; k < 5; ++k) {
        key[static_cast<std::size_t>(4 - k)] = ((index >> k) & 1) ? '1' : '0';
    }
    return key;
}

int index_from_key(const std::string& key) {
    if (key.size() != 5) {
        throw std::runtime_error("counts key must have 5 characters: '" + key + "'");
    }
    int index = 0;
    for (int k = 0; k < 5; ++k) {
        const char c = key[static_cast<std::size_t>(4 - k)];
        if (c != '0' && c != '1') {
            throw std::runtime_error("counts key must be binary: '" + key + "'");
        }
        index |= (c == '1' ? 1 : 0) << k;
    }
    return index;
}

std::string key_from_shot(const ShotRecord& shot) {
    return key_from_index(shot_to_index(shot));
}

ShotRecord shot_from_key(const std::string& key) {
    return shot_from_index(index_from_key(key));
}

void validate_counts(const CountsTable& table) {
    std::uint64_t sum = 0;
    for (const auto& [key, count] : table.counts) {
        index_from_key(key);
        sum += count;
    }
    if (sum != table.total_shots) {
        throw std::runtime_error("counts do not sum to total_shots");
    }
}

CountsTable merge_counts(const CountsTable& a, const CountsTable& b) {
    CountsTable out = a;
    for (const auto& [key, count] : b.counts) {
        out.counts[key] += count;
    }
    out.total_shots += b.total_shots;
    return out;
}

std::string counts_to_csv(const CountsTable& table) {
    std::ostringstream out;
    out << "bitstring,count\n";
    for (const auto& [key, count] : table.counts) {  // std::map: sorted keys
        out << key << ',' << count << '\n';
    }
    return out.str();
}

CountsTable counts_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "bitstring,count") {
        throw std::runtime_error("counts CSV must start with 'bitstring,count'");
    }
    CountsTable table;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw std::runtime_error("malformed counts CSV row: '" + line + "'");
        }
        const std::string key = line.substr(0, comma);
        index_from_key(key);
        std::uint64_t count = 0;
        try {
            count = std::stoull(line.substr(comma + 1));
        } catch (const std::exception&) {
            throw std::runtime_error("malformed count in CSV row: '" + line + "'");
        }
        table.counts[key] += count;
        table.total_shots += count;
    }
    return table;
}

std::string counts_to_json(const CountsTable& table) {
    ordered_json j;
    j["total_shots"] = table.total_shots;
    ordered_json rows = ordered_json::object();
    for (const auto& [key, count] : table.counts) {
        rows[key] = count;
    }
    j["counts"] = rows;
    return j.dump(2) + "\n";
}

CountsTable counts_from_json(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error(std::string("counts JSON parse error: ") + e.what());
    }
    CountsTable table;
    try {
        for (const auto& [key, count] : j.at("counts").items()) {
            index_from_key(key);
            table.counts[key] += count.get<std::uint64_t>();
        }
        table.total_shots = j.at("total_shots").get<std::uint64_t>();
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("counts JSON schema error: ") + e.what());
    }
    validate_counts(table);
    return table;
}

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open counts file " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write file " + path);
    }
    out << text;
}

} // namespace

void save_counts_csv(const CountsTable& table, const std::string& path) {
    write_file(path, counts_to_csv(table));
}

void save_counts_json(const CountsTable& table, const std::string& path) {
    write_file(path, counts_to_json(table));
}

CountsTable load_counts(const std::string& path) {
    const std::string text = read_file(path);
    if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") {
        return counts_from_json(text);
    }
    return counts_from_csv(text);
}

} // namespace mermin
