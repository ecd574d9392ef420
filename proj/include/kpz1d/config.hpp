#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace kpz1d {

/**
 * Parse `key=value` lines.  `#` starts a comment, blank lines are skipped,
 * whitespace around keys and values is trimmed.  Repeated keys keep the last
 * value.  Throws std::invalid_argument on a line with no `=`.
 */
std::map<std::string, std::string> parse_key_values(std::istream& in);

std::map<std::string, std::string> parse_key_value_file(const std::string& path);

/// Parse a seed given as decimal or 0x-prefixed hex. Throws on anything else.
std::uint64_t parse_seed(const std::string& text);

/**
 * Derive `count` distinct replicate seeds from one master seed as a keyed
 * counter sequence.  Deterministic; collisions (vanishingly rare) are
 * resolved by skipping forward in the sequence.
 */
std::vector<std::uint64_t> expand_seeds(std::uint64_t master, std::size_t count);

/// One seed per line, decimal or hex, # comments allowed. Must be distinct.
std::vector<std::uint64_t> read_seeds_file(const std::string& path);

} // namespace kpz1d
