#include "kpz1d/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "kpz1d/rng.hpp"

namespace kpz1d {

namespace {

std::string trim(const std::string& text) {
    const auto first = text.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = text.find_last_not_of(" \t\r");
    return text.substr(first, last - first + 1);
}

} // namespace

std::map<std::string, std::string> parse_key_values(std::istream& in) {
    std::map<std::string, std::string> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        const std::string body = trim(line);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos || eq == 0)
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        " is not key=value: '" + body + "'");
        out[trim(body.substr(0, eq))] = trim(body.substr(eq + 1));
    }
    return out;
}

std::map<std::string, std::string> parse_key_value_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    return parse_key_values(in);
}

std::uint64_t parse_seed(const std::string& text) {
    const std::string t = trim(text);
    if (t.empty()) throw std::invalid_argument("empty seed");
    if (t[0] == '-' || t[0] == '+')
        throw std::invalid_argument("bad seed '" + t + "' (want decimal or 0x hex)");
    try {
        std::size_t used = 0;
        std::uint64_t value;
        if (t.size() > 2 && (t[0] == '0') && (t[1] == 'x' || t[1] == 'X')) {
            value = std::stoull(t.substr(2), &used, 16);
            used += 2;
        } else {
            value = std::stoull(t, &used, 10);
        }
        if (used != t.size()) throw std::invalid_argument(t);
        return value;
    } catch (const std::exception&) {
        throw std::invalid_argument("bad seed '" + t + "' (want decimal or 0x hex)");
    }
}

std::vector<std::uint64_t> expand_seeds(std::uint64_t master, std::size_t count) {
    std::vector<std::uint64_t> seeds;
    seeds.reserve(count);
    std::unordered_set<std::uint64_t> seen;
    std::uint64_t draw = 0;
    while (seeds.size() < count) {
        const std::uint64_t seed = rng_words(master, RngLane::seed_expand, 0, draw++)[0];
        if (seen.insert(seed).second) seeds.push_back(seed);
    }
    return seeds;
}

std::vector<std::uint64_t> read_seeds_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open seeds file: " + path);
    std::vector<std::uint64_t> seeds;
    std::unordered_set<std::uint64_t> seen;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        const std::string body = trim(line);
        if (body.empty()) continue;
        const std::uint64_t seed = parse_seed(body);
        if (!seen.insert(seed).second)
            throw std::invalid_argument("duplicate seed in " + path + ": " + body);
        seeds.push_back(seed);
    }
    if (seeds.empty()) throw std::invalid_argument("seeds file is empty: " + path);
    return seeds;
}

} // namespace kpz1d
