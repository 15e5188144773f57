#include "doctest.h"

#include "cct/util.hpp"

#include <cstdio>
#include <filesystem>

using namespace cct;

TEST_CASE("fnv1a matches the published 64-bit vectors") {
    CHECK(fnv1a("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(fnv1a("hello") == 0xa430d84680aabd0bULL);
}

TEST_CASE("fnv1a_mix is order-sensitive and stable") {
    // frozen: hash of the 16-byte little-endian concatenation
    CHECK(fnv1a_mix(1, 2) == 0x7717980363c8e066ULL);
    CHECK(fnv1a_mix(2, 1) == 0x072184407c3a4ac6ULL);
    CHECK(fnv1a_mix(1, 2) != fnv1a_mix(2, 1));
}

TEST_CASE("string helpers") {
    CHECK(to_lower("AbC") == "abc");
    CHECK(trim("  x \t\n") == "x");
    CHECK(trim("   ") == "");
    CHECK(split("a,b,,c", ',') == std::vector<std::string>{"a", "b", "", "c"});
    CHECK(split("", ',') == std::vector<std::string>{""});
}

TEST_CASE("format_double trims but keeps one fractional digit") {
    CHECK(format_double(16.0) == "16.0");
    CHECK(format_double(0.05) == "0.05");
    CHECK(format_double(1.5) == "1.5");
    CHECK(format_double(0.0) == "0.0");
    CHECK(format_double(0.018) == "0.018");
    CHECK(format_double(1.0 / 3.0) == "0.333333");
}

TEST_CASE("kv documents round-trip and tolerate comments") {
    KvDoc doc{{"alpha", "1"}, {"text", "two words"}, {"alpha", "3"}};
    std::string rendered = kv_render(doc);
    KvDoc back = kv_parse(rendered);
    CHECK(back == doc);
    CHECK(kv_get(back, "alpha") == "1"); // first value wins
    CHECK(kv_get(back, "missing") == "");
    CHECK(kv_has(back, "text"));
    CHECK_FALSE(kv_has(back, "missing"));

    KvDoc commented = kv_parse("# header\n\nkey = value\n  # indented comment\n");
    REQUIRE(commented.size() == 1);
    CHECK(commented[0] == std::pair<std::string, std::string>{"key", "value"});
    CHECK(kv_get_double(kv_parse("x = 2.5\n"), "x") == doctest::Approx(2.5));
}

TEST_CASE("file io round-trips bytes") {
    auto path = (std::filesystem::temp_directory_path() / "cct-util-io.txt").string();
    write_file(path, "line\nanother\n");
    CHECK(read_file(path) == "line\nanother\n");
    std::filesystem::remove(path);
}
