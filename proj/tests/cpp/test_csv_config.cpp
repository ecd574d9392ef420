#include <doctest.h>

#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "kpz1d/config.hpp"
#include "kpz1d/csv.hpp"

using namespace kpz1d;

TEST_CASE("format_double round-trips and stays locale-free") {
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(-3.25) == "-3.25");
    CHECK(std::stod(format_double(0.1)) == 0.1);
    CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("csv escaping follows RFC 4180") {
    CHECK(csv_escape("plain") == "plain");
    CHECK(csv_escape("a,b") == "\"a,b\"");
    CHECK(csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CHECK(csv_escape("line\nbreak") == "\"line\nbreak\"");
}

TEST_CASE("csv writer emits header and checks width") {
    std::ostringstream out;
    const std::string header[] = {"a", "b"};
    CsvWriter w(out, header);
    const std::string row[] = {"1", "x,y"};
    w.row(row);
    CHECK(out.str() == "a,b\n1,\"x,y\"\n");
    const std::string bad[] = {"only-one"};
    CHECK_THROWS(w.row(bad));
}

TEST_CASE("key=value parsing") {
    std::istringstream in(
        "# comment\n"
        "model = family=twopoint sigma=0.5\n"
        "\n"
        "nmax=12   # trailing comment\n"
        "nmax=14\n");
    const auto kv = parse_key_values(in);
    CHECK(kv.at("model") == "family=twopoint sigma=0.5");
    CHECK(kv.at("nmax") == "14"); // last value wins
    std::istringstream bad("no equals sign here\n");
    CHECK_THROWS_AS(parse_key_values(bad), std::invalid_argument);
}

TEST_CASE("seed parsing accepts decimal and hex") {
    CHECK(parse_seed("42") == 42);
    CHECK(parse_seed("0xff") == 255);
    CHECK(parse_seed("0xDEADBEEF") == 0xDEADBEEFull);
    CHECK_THROWS_AS(parse_seed("12abc"), std::invalid_argument);
    CHECK_THROWS_AS(parse_seed(""), std::invalid_argument);
    CHECK_THROWS_AS(parse_seed("-3"), std::invalid_argument);
}

TEST_CASE("seed expansion is deterministic and collision-free") {
    const auto a = expand_seeds(1234, 500);
    const auto b = expand_seeds(1234, 500);
    CHECK(a == b);
    CHECK(a.size() == 500);
    std::unordered_set<std::uint64_t> seen(a.begin(), a.end());
    CHECK(seen.size() == a.size());
    const auto c = expand_seeds(1235, 500);
    CHECK(a != c);
    // prefix property: a longer expansion extends a shorter one
    const auto prefix = expand_seeds(1234, 100);
    for (std::size_t i = 0; i < prefix.size(); ++i) CHECK(prefix[i] == a[i]);
}
