#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kpz1d/cascade.hpp"

namespace kpz1d {

/**
 * A deterministic fractal K in [0,1] cut out by digit restrictions: x lies
 * in K when every consecutive b-bit block of its binary expansion is one of
 * the allowed words.  The Hausdorff dimension is exactly
 * log2(#allowed) / b, and the canonical dyadic covers align with the
 * cascade tree, so box counts carry no covering slack.
 */
class DigitRestrictionSet {
public:
    static constexpr std::uint32_t kMaxBlock = 20;

    /// `allowed`: words of `block` bits each, MSB first.  Must be nonempty,
    /// each word < 2^block.  Duplicates are merged.
    DigitRestrictionSet(std::uint32_t block, std::vector<std::uint32_t> allowed);

    static DigitRestrictionSet full();   // b=1, {0,1}: K = [0,1]
    static DigitRestrictionSet point();  // b=1, {0}:   K = {0}

    std::uint32_t block() const { return block_; }
    const std::vector<std::uint32_t>& allowed() const { return allowed_; }

    /// Exact Euclidean Hausdorff dimension log2|A| / b.
    double zeta0() const;

    /// Number of level-n cells in the canonical dyadic cover, by per-level
    /// recursion (no enumeration).  For n = j*b this is |A|^j; at other
    /// levels a cell survives when its partial block is extendable.
    std::uint64_t cover_count(std::uint32_t n) const;

    /// Visit the level-n cover cells in increasing index order.
    template <typename Visitor>
    void cover(std::uint32_t n, Visitor&& visit) const {
        walk_cover(0, DyadicIndex{0, 0}, n, visit);
    }

    /// Materialized cover; throws when the cover exceeds `limit` cells.
    std::vector<DyadicIndex> cover_cells(std::uint32_t n, std::uint64_t limit = 1u << 22) const;

    /// True when `cell` belongs to cover(cell.level).
    bool cell_survives(DyadicIndex cell) const;

    /// Config-text form, e.g. "set=digits b=2 allow=00,11".
    std::string describe() const;

private:
    struct TrieNode {
        std::int32_t child[2] = {-1, -1};
    };

    template <typename Visitor>
    void walk_cover(std::int32_t node, DyadicIndex cell, std::uint32_t target,
                    Visitor& visit) const {
        if (cell.level == target) {
            visit(cell);
            return;
        }
        for (int bit = 0; bit < 2; ++bit) {
            // a completed block's child pointer is 0: wrap to the next block
            const std::int32_t next = trie_[std::size_t(node)].child[bit];
            if (next < 0) continue;
            walk_cover(next, cell.child(bit), target, visit);
        }
    }

    std::uint32_t block_;
    std::vector<std::uint32_t> allowed_;      // sorted, unique
    std::vector<TrieNode> trie_;              // prefix trie over allowed words, root = 0
    std::vector<std::uint64_t> prefix_count_; // distinct prefixes of length r, r=0..b
};

/// Parse "set=digits b=2 allow=00,11", "set=full", or "set=point".
DigitRestrictionSet parse_digit_set(const std::string& spec);

}  // namespace kpz1d
