#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "kpz1d/fractal_set.hpp"

using namespace kpz1d;

TEST_CASE("full and point sets are the extremes") {
    const DigitRestrictionSet full = DigitRestrictionSet::full();
    CHECK(full.zeta0() == 1.0);
    CHECK(full.cover_count(5) == 32);
    CHECK(full.cover_cells(3).size() == 8);

    const DigitRestrictionSet point = DigitRestrictionSet::point();
    CHECK(point.zeta0() == 0.0);
    CHECK(point.cover_count(7) == 1);
    CHECK(point.cover_cells(4) == std::vector<DyadicIndex>{{4, 0}});
}

TEST_CASE("block-2 {00,11} set has dimension 1/2 and the expected covers") {
    const DigitRestrictionSet set(2, {0b00, 0b11});
    CHECK(set.zeta0() == 0.5);
    CHECK(set.block() == 2);

    // level 2: cells 00 and 11
    CHECK(set.cover_cells(2) == std::vector<DyadicIndex>{{2, 0}, {2, 3}});
    // level 4: 0000, 0011, 1100, 1111
    CHECK(set.cover_cells(4) ==
          std::vector<DyadicIndex>{{4, 0}, {4, 3}, {4, 12}, {4, 15}});
    // level 3 (mid-block): extendable prefixes only
    CHECK(set.cover_cells(3) ==
          std::vector<DyadicIndex>{{3, 0}, {3, 1}, {3, 6}, {3, 7}});

    for (const std::uint32_t n : {2u, 4u, 8u, 16u})
        CHECK(set.cover_count(n) == (std::uint64_t(1) << (n / 2)));
    CHECK(set.cover_count(5) == 8); // 2^2 full blocks * 2 half-block extensions
    CHECK(set.cover_count(0) == 1);
}

TEST_CASE("cover refinement: children of survivors exhaust the next cover") {
    const DigitRestrictionSet set(3, {0b001, 0b110, 0b111});
    for (std::uint32_t n = 0; n < 7; ++n) {
        const auto coarse = set.cover_cells(n);
        const auto fine = set.cover_cells(n + 1);
        std::vector<DyadicIndex> from_children;
        for (const DyadicIndex& cell : coarse)
            for (int bit = 0; bit < 2; ++bit) {
                const DyadicIndex child = cell.child(bit);
                if (set.cell_survives(child)) from_children.push_back(child);
            }
        CHECK(from_children == fine);
    }
}

TEST_CASE("cell_survives matches cover membership") {
    const DigitRestrictionSet set(2, {0b00, 0b11});
    CHECK(set.cell_survives({2, 0}));
    CHECK_FALSE(set.cell_survives({2, 1}));
    CHECK(set.cell_survives({4, 15}));
    CHECK_FALSE(set.cell_survives({4, 5}));
    CHECK(set.cell_survives({0, 0})); // the root always survives
}

TEST_CASE("count recursion matches enumeration deep past one block") {
    const DigitRestrictionSet set(3, {0b010, 0b011, 0b101});
    for (std::uint32_t n = 0; n <= 9; ++n)
        CHECK(set.cover_count(n) == set.cover_cells(n).size());
    CHECK(set.zeta0() == doctest::Approx(std::log2(3.0) / 3.0).epsilon(1e-15));
}

TEST_CASE("materialized covers respect the cell limit") {
    const DigitRestrictionSet full = DigitRestrictionSet::full();
    CHECK_THROWS_AS(full.cover_cells(4, 8), std::length_error);
}

TEST_CASE("set construction rejects bad input") {
    CHECK_THROWS_AS(DigitRestrictionSet(0, {0}), std::invalid_argument);
    CHECK_THROWS_AS(DigitRestrictionSet(2, {}), std::invalid_argument);
    CHECK_THROWS_AS(DigitRestrictionSet(2, {4}), std::invalid_argument);
    CHECK_THROWS_AS(DigitRestrictionSet(21, {0}), std::invalid_argument);
    // duplicates merge
    CHECK(DigitRestrictionSet(2, {3, 3, 0}).cover_count(2) == 2);
}

TEST_CASE("spec parsing handles every form") {
    CHECK(parse_digit_set("set=full").zeta0() == 1.0);
    CHECK(parse_digit_set("set=point").zeta0() == 0.0);

    const DigitRestrictionSet set = parse_digit_set("set=digits b=2 allow=00,11");
    CHECK(set.block() == 2);
    CHECK(set.zeta0() == 0.5);
    CHECK(set.cover_cells(2) == std::vector<DyadicIndex>{{2, 0}, {2, 3}});

    // block inferred from the word length
    CHECK(parse_digit_set("allow=00,11").zeta0() == 0.5);
    CHECK(parse_digit_set(set.describe()).describe() == set.describe());

    CHECK_THROWS_AS(parse_digit_set("set=nope"), std::invalid_argument);
    CHECK_THROWS_AS(parse_digit_set("b=2 allow=001"), std::invalid_argument);
    CHECK_THROWS_AS(parse_digit_set("b=2 allow=0a"), std::invalid_argument);
    CHECK_THROWS_AS(parse_digit_set(""), std::invalid_argument);
}
