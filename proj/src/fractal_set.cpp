#include "kpz1d/fractal_set.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace kpz1d {

DigitRestrictionSet::DigitRestrictionSet(std::uint32_t block,
                                         std::vector<std::uint32_t> allowed)
    : block_(block), allowed_(std::move(allowed)) {
    if (block_ == 0 || block_ > kMaxBlock)
        throw std::invalid_argument("block length must be in [1, 20]");
    if (allowed_.empty())
        throw std::invalid_argument("allowed word set must be nonempty");
    for (const std::uint32_t w : allowed_)
        if (block_ < 32 && (w >> block_) != 0)
            throw std::invalid_argument("allowed word does not fit the block length");
    std::sort(allowed_.begin(), allowed_.end());
    allowed_.erase(std::unique(allowed_.begin(), allowed_.end()), allowed_.end());

    trie_.push_back(TrieNode{});
    prefix_count_.assign(block_ + 1, 0);
    prefix_count_[0] = 1;
    for (const std::uint32_t word : allowed_) {
        std::int32_t node = 0;
        for (std::uint32_t r = 0; r < block_; ++r) {
            const int bit = int((word >> (block_ - 1 - r)) & 1u);
            if (r + 1 == block_) {
                // completed words point back at the root: the next block starts
                trie_[std::size_t(node)].child[bit] = 0;
                continue;
            }
            std::int32_t next = trie_[std::size_t(node)].child[bit];
            if (next < 0) {
                next = std::int32_t(trie_.size());
                trie_.push_back(TrieNode{});
                trie_[std::size_t(node)].child[bit] = next;
                ++prefix_count_[r + 1];
            }
            node = next;
        }
    }
    prefix_count_[block_] = allowed_.size();
}

DigitRestrictionSet DigitRestrictionSet::full() {
    return DigitRestrictionSet(1, {0, 1});
}

DigitRestrictionSet DigitRestrictionSet::point() {
    return DigitRestrictionSet(1, {0});
}

double DigitRestrictionSet::zeta0() const {
    return std::log2(double(allowed_.size())) / double(block_);
}

std::uint64_t DigitRestrictionSet::cover_count(std::uint32_t n) const {
    if (n > 62) throw std::invalid_argument("cover_count limited to levels <= 62");
    const std::uint32_t blocks = n / block_;
    const std::uint32_t rest = n % block_;
    std::uint64_t count = prefix_count_[rest];
    for (std::uint32_t j = 0; j < blocks; ++j) count *= allowed_.size();
    return count;
}

std::vector<DyadicIndex> DigitRestrictionSet::cover_cells(std::uint32_t n,
                                                          std::uint64_t limit) const {
    const std::uint64_t count = cover_count(n);
    if (count > limit)
        throw std::length_error("cover has " + std::to_string(count) +
                                " cells, above the limit of " + std::to_string(limit));
    std::vector<DyadicIndex> cells;
    cells.reserve(count);
    cover(n, [&](DyadicIndex cell) { cells.push_back(cell); });
    return cells;
}

bool DigitRestrictionSet::cell_survives(DyadicIndex cell) const {
    std::int32_t node = 0;
    for (std::uint32_t r = 0; r < cell.level; ++r) {
        const int bit = int((cell.index >> (cell.level - 1 - r)) & 1u);
        node = trie_[std::size_t(node)].child[bit];
        if (node < 0) return false;
    }
    return true;
}

std::string DigitRestrictionSet::describe() const {
    if (block_ == 1 && allowed_.size() == 2) return "set=full";
    if (block_ == 1 && allowed_ == std::vector<std::uint32_t>{0}) return "set=point";
    std::ostringstream out;
    out << "set=digits b=" << block_ << " allow=";
    for (std::size_t i = 0; i < allowed_.size(); ++i) {
        if (i) out << ',';
        for (std::uint32_t r = 0; r < block_; ++r)
            out << ((allowed_[i] >> (block_ - 1 - r)) & 1u);
    }
    return out.str();
}

DigitRestrictionSet parse_digit_set(const std::string& spec) {
    std::istringstream in(spec);
    std::string token;
    std::string kind;
    std::uint32_t block = 0;
    std::uint32_t word_len = 0;
    std::vector<std::uint32_t> allowed;
    bool have_allow = false;

    while (in >> token) {
        const auto eq = token.find('=');
        if (eq == std::string::npos || eq == 0)
            throw std::invalid_argument("bad set token '" + token + "' (want key=value)");
        const std::string key = token.substr(0, eq);
        const std::string value = token.substr(eq + 1);
        if (key == "set") {
            kind = value;
        } else if (key == "b") {
            try {
                std::size_t used = 0;
                const unsigned long v = std::stoul(value, &used);
                if (used != value.size() || v == 0) throw std::invalid_argument(value);
                block = std::uint32_t(v);
            } catch (const std::exception&) {
                throw std::invalid_argument("bad block length '" + value + "'");
            }
        } else if (key == "allow") {
            have_allow = true;
            std::string word;
            std::istringstream words(value);
            while (std::getline(words, word, ',')) {
                if (word.empty())
                    throw std::invalid_argument("empty word in allow list");
                std::uint32_t bits = 0;
                for (const char c : word) {
                    if (c != '0' && c != '1')
                        throw std::invalid_argument("allow words must be binary: '" + word + "'");
                    bits = (bits << 1) | std::uint32_t(c - '0');
                }
                allowed.push_back(bits);
                if (word_len == 0) word_len = std::uint32_t(word.size());
                else if (word.size() != word_len)
                    throw std::invalid_argument("allow words must all have the same length");
            }
        } else {
            throw std::invalid_argument("unknown set key '" + key + "'");
        }
    }

    if (kind.empty() && have_allow) kind = "digits"; // allow= alone implies digits
    if (kind == "full") return DigitRestrictionSet::full();
    if (kind == "point") return DigitRestrictionSet::point();
    if (kind == "digits") {
        if (!have_allow) throw std::invalid_argument("digit set needs allow=");
        if (block == 0) block = word_len;
        if (block != word_len)
            throw std::invalid_argument("allow words must have the b= block length");
        return DigitRestrictionSet(block, std::move(allowed));
    }
    throw std::invalid_argument("set must be full, point, or digits");
}

} // namespace kpz1d
